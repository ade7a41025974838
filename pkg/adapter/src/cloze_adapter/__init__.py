"""Transformer adapter for three-sentence article-cloze example files.

Bridges the dataset toolkit and a token-classification model through two
frozen file contracts and nothing else:

* input — example files: one JSON record per line with three token/POS
  sentence arrays, a blank index into the middle sentence, and a gold label
  in {A, The, Zero};
* output — prediction files: one JSON record per line with
  ``{example_id, label in {A, The, Zero, O}, scores over those four}``.

The model sees the three sentences as one word sequence with the blank
rendered as a reserved mask word, and labels every input position: O
everywhere except the blank.
"""

from .encoding import (
    BLANK_TOKEN,
    LABELS,
    LabeledSequence,
    decode_blank_position,
    encode_for_token_labeling,
)
from .examples_io import ClozeRecord, read_example_records

__version__ = "0.1.0"
