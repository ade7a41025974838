"""Insert explicit zero-article marker tokens into POS-tagged sentences.

A marker (default "ø") is inserted immediately before a determiner-less noun
phrase whose head licenses it. The rules operate purely on POS tag classes
plus a small mass-noun lexicon:

* An NP candidate starts at token ``i`` when ``i`` is an adjective, ordinal,
  cardinal or noun, and the preceding token is none of: article, possessive,
  determiner, adjective, ordinal, cardinal, noun, an existing zero marker, or
  a linker (conjunction / bare hyphen) that itself follows NP-internal
  material ("national and international recognition" is one candidate).
* The candidate's head is the first noun-class token at or after ``i``,
  scanning through adjectives, ordinals, cardinals and modifier-joining
  linkers. No head, no candidate.
* A marker is inserted when the head is a plural common noun, or a singular
  common noun listed in the mass-noun lexicon. Proper-noun heads are skipped
  unless configured otherwise.
* Predicate nominals are exempt: no insertion directly after a copula form
  ("Tigers are magnificent animals" gets one marker, before "Tigers"),
  except in existential clauses ("There are ...").

Re-running the tagger is a no-op: inserted markers count as article-class
preceders. Removing all markers restores the input sentence exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .corpus import ArticleLabel, Document, Sentence, Token, ZERO_MARKER

#: Default tag-class map, keyed to CLAWS5 codes (the BNC tagset). Corpora
#: with other tagsets supply their own map; codes outside the map are opaque.
DEFAULT_TAG_CLASSES: dict[str, frozenset[str]] = {
    "article": frozenset({"AT0"}),
    "possessive": frozenset({"DPS"}),
    "determiner": frozenset({"DT0", "DTQ"}),
    "adjective": frozenset({"AJ0", "AJC", "AJS"}),
    "ordinal": frozenset({"ORD"}),
    "cardinal": frozenset({"CRD"}),
    "noun_sg": frozenset({"NN1"}),
    "noun_pl": frozenset({"NN2"}),
    "noun_proper": frozenset({"NP0"}),
    "conjunction": frozenset({"CJC"}),
    "copula": frozenset({"VBB", "VBD", "VBG", "VBI", "VBN", "VBZ"}),
    "existential": frozenset({"EX0"}),
}

_NOUN_CLASSES = frozenset({"noun_sg", "noun_pl", "noun_proper"})
_MODIFIER_CLASSES = frozenset({"adjective", "ordinal", "cardinal"})
_START_CLASSES = _MODIFIER_CLASSES | _NOUN_CLASSES
# Classes that keep the following token from starting a new NP.
_INTERNAL_CLASSES = _START_CLASSES | frozenset({"article", "possessive", "determiner"})


@dataclass(frozen=True)
class TagRuleConfig:
    """Parameters of the zero-article insertion rules.

    Tag-class sets must be pairwise disjoint and the lexicon lowercase.
    ``linker_surfaces`` are token surfaces (typically the bare hyphen) that
    join NP-internal modifiers the way conjunctions do.
    """

    tag_classes: Mapping[str, frozenset[str]] = field(
        default_factory=lambda: dict(DEFAULT_TAG_CLASSES)
    )
    mass_noun_lexicon: frozenset[str] = frozenset()
    insert_before_proper: bool = False
    marker_surface: str = ZERO_MARKER
    marker_pos: str = "AT0"
    linker_surfaces: frozenset[str] = frozenset({"-"})

    def __post_init__(self):
        seen: dict[str, str] = {}
        for name, codes in self.tag_classes.items():
            for code in codes:
                if code in seen:
                    raise ValueError(
                        f"POS code {code!r} assigned to both {seen[code]!r} and {name!r}"
                    )
                seen[code] = name
        bad = [w for w in self.mass_noun_lexicon if w != w.casefold()]
        if bad:
            raise ValueError(f"mass-noun lexicon entries must be lowercase: {sorted(bad)}")
        object.__setattr__(self, "_class_by_pos", seen)

    def class_of(self, token: Token) -> Optional[str]:
        """Tag class of a token; zero markers always count as articles."""
        if token.is_zero_marker:
            return "article"
        return self._class_by_pos.get(token.pos)

    def is_linker(self, token: Token) -> bool:
        return self.class_of(token) == "conjunction" or token.surface in self.linker_surfaces

    def marker_token(self) -> Token:
        return Token(
            surface=self.marker_surface,
            pos=self.marker_pos,
            article=ArticleLabel.ZERO,
            is_zero_marker=True,
        )


def load_mass_noun_lexicon(path: str | Path) -> frozenset[str]:
    """Read a lexicon file: one lowercase entry per line, ``#`` comments."""
    entries = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            entries.add(line.casefold())
    return frozenset(entries)


def starter_mass_noun_lexicon() -> frozenset[str]:
    """The packaged starter lexicon."""
    text = resources.files("articlecloze").joinpath("data/mass_nouns.txt").read_text("utf-8")
    return frozenset(
        line.split("#", 1)[0].strip().casefold()
        for line in text.splitlines()
        if line.split("#", 1)[0].strip()
    )


def default_config(lexicon_path: str | Path | None = None, **overrides) -> TagRuleConfig:
    """CLAWS5 rule config with the packaged (or given) mass-noun lexicon."""
    lexicon = (
        load_mass_noun_lexicon(lexicon_path) if lexicon_path else starter_mass_noun_lexicon()
    )
    return TagRuleConfig(mass_noun_lexicon=lexicon, **overrides)


def _head_index(tokens: tuple[Token, ...], start: int, config: TagRuleConfig) -> Optional[int]:
    """First noun-class token at or after ``start`` within the NP candidate."""
    j = start
    while j < len(tokens):
        cls = config.class_of(tokens[j])
        if cls in _NOUN_CLASSES:
            return j
        if cls in _MODIFIER_CLASSES:
            j += 1
            continue
        if (
            j > start
            and config.is_linker(tokens[j])
            and j + 1 < len(tokens)
            and config.class_of(tokens[j + 1]) in _START_CLASSES
        ):
            j += 1
            continue
        return None
    return None


def _blocks_start(tokens: tuple[Token, ...], i: int, config: TagRuleConfig) -> bool:
    prev = tokens[i - 1]
    if prev.is_zero_marker:
        return True
    if config.class_of(prev) in _INTERNAL_CLASSES:
        return True
    # A linker only blocks when it joins NP-internal material: "national and
    # international" is one NP, "..., and tigers" starts a fresh one.
    if config.is_linker(prev) and i >= 2 and config.class_of(tokens[i - 2]) in _START_CLASSES:
        return True
    return False


def np_start_positions(sentence: Sentence, config: TagRuleConfig) -> list[int]:
    """Indices that begin a maximal determiner-less NP candidate with a head."""
    tokens = sentence.tokens
    positions = []
    for i, token in enumerate(tokens):
        if token.is_zero_marker or config.class_of(token) not in _START_CLASSES:
            continue
        if i > 0 and _blocks_start(tokens, i, config):
            continue
        if _head_index(tokens, i, config) is None:
            continue
        positions.append(i)
    return positions


def _is_predicate_nominal(tokens: tuple[Token, ...], i: int, config: TagRuleConfig) -> bool:
    if i == 0 or config.class_of(tokens[i - 1]) != "copula":
        return False
    # Existential clauses ("There are ...") still take the marker.
    return not (i >= 2 and config.class_of(tokens[i - 2]) == "existential")


def insertion_points(sentence: Sentence, config: TagRuleConfig) -> list[int]:
    """NP-start indices that receive a zero marker under the head rules."""
    tokens = sentence.tokens
    points = []
    for i in np_start_positions(sentence, config):
        head = _head_index(tokens, i, config)
        head_token = tokens[head]
        head_class = config.class_of(head_token)
        if head_class == "noun_proper":
            if not config.insert_before_proper:
                continue
        elif head_class == "noun_pl":
            pass
        elif head_class == "noun_sg":
            if head_token.surface.casefold() not in config.mass_noun_lexicon:
                continue
        if _is_predicate_nominal(tokens, i, config):
            continue
        points.append(i)
    return points


def insert_zero_articles(sentence: Sentence, config: TagRuleConfig) -> Sentence:
    """Insert zero markers into a sentence. Idempotent; order-preserving."""
    points = set(insertion_points(sentence, config))
    if not points:
        return sentence
    marker = config.marker_token()
    tokens: list[Token] = []
    for i, token in enumerate(sentence.tokens):
        if i in points:
            tokens.append(marker)
        tokens.append(token)
    return replace(sentence, tokens=tuple(tokens))


def strip_zero_markers(sentence: Sentence) -> Sentence:
    kept = tuple(t for t in sentence.tokens if not t.is_zero_marker)
    return replace(sentence, tokens=kept)


def tag_document(document: Document, config: TagRuleConfig) -> Document:
    tagged = tuple(insert_zero_articles(s, config) for s in document.sentences)
    return replace(document, sentences=tagged)


def tag_documents(documents: Iterable[Document], config: TagRuleConfig) -> list[Document]:
    return [tag_document(d, config) for d in documents]
