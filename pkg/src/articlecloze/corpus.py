"""POS-tagged corpus model: article labels, tokens, sentences, documents.

Tokenization is taken verbatim from the source corpus and never redone here.
POS codes are opaque strings; only the zero-article rules interpret them,
through a configurable tag-class map (see :mod:`articlecloze.zerotag`).

Two plain-text input formats are supported:

vertical
    One token per line as ``surface<TAB>pos``. A blank line ends a sentence,
    a line ``#DOC <id>`` starts a new document.

inline-slash
    One sentence per line, tokens as ``surface/pos`` separated by spaces
    (the POS code is everything after the last slash). ``#DOC <id>`` lines
    as above.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional

#: Surface string used for explicit zero-article marker tokens. Lowercase
#: slashed-o; comparisons are case-folded so an uppercase marker also parses.
ZERO_MARKER = "ø"


class ArticleLabel(str, Enum):
    """The three-way article vocabulary. ``a`` and ``an`` both map to A."""

    A = "A"
    THE = "The"
    ZERO = "Zero"


_SURFACE_TO_LABEL = {"a": ArticleLabel.A, "an": ArticleLabel.A, "the": ArticleLabel.THE}


def article_label_of(surface: str, zero_marker: str = ZERO_MARKER) -> Optional[ArticleLabel]:
    """Map a token surface to its article label, or None for non-articles.

    Case-insensitive, exact match only ("theatre" is not "the").
    """
    folded = surface.casefold()
    if folded in _SURFACE_TO_LABEL:
        return _SURFACE_TO_LABEL[folded]
    if folded == zero_marker.casefold():
        return ArticleLabel.ZERO
    return None


class CorpusFormatError(ValueError):
    """Malformed corpus input; carries the line number and offending text."""

    def __init__(self, line_no: int, text: str, reason: str):
        self.line_no = line_no
        self.text = text
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}: {text!r}")


@dataclass(frozen=True)
class Token:
    """A corpus token: surface form, opaque POS code, optional article label.

    ``is_zero_marker`` is True only for explicit zero-article marker tokens,
    which always carry ``article=Zero``. Overt-article tokens ("a", "an",
    "the", any casing) must carry the matching label; all other tokens carry
    none.
    """

    surface: str
    pos: str
    article: Optional[ArticleLabel] = None
    is_zero_marker: bool = False

    def __post_init__(self):
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if self.is_zero_marker and self.article is not ArticleLabel.ZERO:
            raise ValueError(f"zero marker token {self.surface!r} must have article=Zero")
        if self.article is ArticleLabel.ZERO and not self.is_zero_marker:
            raise ValueError("article=Zero is only valid on zero marker tokens")
        overt = _SURFACE_TO_LABEL.get(self.surface.casefold())
        if not self.is_zero_marker:
            if overt is not self.article:
                raise ValueError(
                    f"token {self.surface!r} must carry article "
                    f"{overt.value if overt else None}, got {self.article}"
                )


def make_token(surface: str, pos: str, zero_marker: str = ZERO_MARKER) -> Token:
    """Build a Token with its article label derived from the surface."""
    label = article_label_of(surface, zero_marker)
    return Token(
        surface=surface,
        pos=pos,
        article=label,
        is_zero_marker=label is ArticleLabel.ZERO,
    )


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError(f"sentence {self.id!r} has no tokens")

    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]
    source: str = ""

    def __post_init__(self):
        ids = [s.id for s in self.sentences]
        if len(set(ids)) != len(ids):
            raise ValueError(f"document {self.id!r} has duplicate sentence ids")

    def tokens(self) -> Iterator[Token]:
        for sentence in self.sentences:
            yield from sentence.tokens


_FORMATS = ("vertical", "inline-slash")
_DOC_PREFIX = "#DOC"


def _doc_id_of(line: str) -> Optional[str]:
    if line == _DOC_PREFIX or line.startswith(_DOC_PREFIX + " "):
        return line[len(_DOC_PREFIX):].strip()
    return None


class _DocBuilder:
    """Accumulates sentences/documents during parsing, enforcing unique ids."""

    def __init__(self, source: str):
        self.source = source
        self.docs: list[Document] = []
        self.doc_ids: set[str] = set()
        self.current_id: Optional[str] = None
        self.sentences: list[Sentence] = []
        self.pending: list[Token] = []

    def start_document(self, doc_id: str, line_no: int, text: str) -> None:
        self.end_sentence()
        self._flush_document()
        if doc_id in self.doc_ids:
            raise CorpusFormatError(line_no, text, f"duplicate document id {doc_id!r}")
        self.current_id = doc_id

    def add_token(self, token: Token) -> None:
        if self.current_id is None:
            self.current_id = "doc0"
        self.pending.append(token)

    def end_sentence(self) -> None:
        if self.pending:
            self.sentences.append(
                Sentence(id=f"s{len(self.sentences) + 1}", tokens=tuple(self.pending))
            )
            self.pending = []

    def _flush_document(self) -> None:
        if self.current_id is not None:
            self.docs.append(
                Document(id=self.current_id, sentences=tuple(self.sentences), source=self.source)
            )
            self.doc_ids.add(self.current_id)
        self.current_id = None
        self.sentences = []

    def finish(self) -> list[Document]:
        self.end_sentence()
        self._flush_document()
        return self.docs


def parse_corpus(
    stream: str | Iterable[str],
    fmt: str,
    zero_marker: str = ZERO_MARKER,
    source: str = "",
) -> list[Document]:
    """Parse tagged-corpus text in the given format into documents.

    ``stream`` may be a whole string or an iterable of lines. Tokens before
    any ``#DOC`` line land in an implicit document with id ``doc0``.
    Raises CorpusFormatError on malformed lines.
    """
    if fmt not in _FORMATS:
        raise ValueError(f"unknown corpus format {fmt!r}; expected one of {_FORMATS}")
    lines = stream.splitlines() if isinstance(stream, str) else [l.rstrip("\n") for l in stream]
    builder = _DocBuilder(source)
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip()
        doc_id = _doc_id_of(line)
        if doc_id is not None:
            if not doc_id:
                raise CorpusFormatError(line_no, raw, "document marker with empty id")
            builder.start_document(doc_id, line_no, raw)
            continue
        if not line:
            builder.end_sentence()
            continue
        if fmt == "vertical":
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
                raise CorpusFormatError(line_no, raw, "expected 'surface<TAB>pos'")
            builder.add_token(make_token(fields[0].strip(), fields[1].strip(), zero_marker))
        else:
            for chunk in line.split():
                surface, sep, pos = chunk.rpartition("/")
                if not sep or not surface or not pos:
                    raise CorpusFormatError(line_no, raw, f"expected 'surface/pos', got {chunk!r}")
                builder.add_token(make_token(surface, pos, zero_marker))
            builder.end_sentence()
    return builder.finish()


def serialize_corpus(docs: Iterable[Document], fmt: str) -> str:
    """Render documents back to corpus text (inverse of parse_corpus)."""
    if fmt not in _FORMATS:
        raise ValueError(f"unknown corpus format {fmt!r}; expected one of {_FORMATS}")
    out: list[str] = []
    for doc in docs:
        out.append(f"{_DOC_PREFIX} {doc.id}")
        for sentence in doc.sentences:
            if fmt == "vertical":
                out.extend(f"{t.surface}\t{t.pos}" for t in sentence.tokens)
                out.append("")
            else:
                out.append(" ".join(f"{t.surface}/{t.pos}" for t in sentence.tokens))
    return "\n".join(out) + ("\n" if out else "")
