"""Article-prediction study toolkit.

Pipeline: insert explicit zero-article markers into a POS-tagged corpus,
build three-sentence cloze examples, collect human annotations through a
QC-gated survey service, ingest model predictions, and compute per-article,
agreement-stratified Phi correlation reports among model, annotators, a
control annotator, and the corpus.
"""

from .corpus import ArticleLabel, Document, Sentence, Token, article_label_of, parse_corpus
from .zerotag import TagRuleConfig, default_config, insert_zero_articles, np_start_positions

__version__ = "0.1.0"

__all__ = [
    "ArticleLabel",
    "Document",
    "Sentence",
    "Token",
    "TagRuleConfig",
    "article_label_of",
    "default_config",
    "insert_zero_articles",
    "np_start_positions",
    "parse_corpus",
    "__version__",
]
