"""Multi-annotator aggregation, agreement stratification, and Phi reports.

Five annotations per example are split into one held-out Control annotator
(seeded, deterministic per example) and four voters. The voters' majority
defines the FourHuman rater; their maximum vote count (4, 3 or 2) is the
example's agreement level, with equal maxima marking a tie. Ties belong to
no agreement stratum and leave FourHuman undefined.

Phi (the Matthews correlation coefficient) is computed per article by
one-vs-rest binarization of two rater views over a shared id set:

    phi = (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn))

A zero marginal makes the denominator vanish; such cells are reported as
phi = 0 and flagged degenerate.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .corpus import ArticleLabel

#: Rater label for "no article predicted here"; disagrees with every article.
O_LABEL = "O"
VIEW_LABELS = ("A", "The", "Zero", O_LABEL)

#: Canonical rater names and the six pairs every report covers.
RATER_NAMES = ("BERT_L", "FourHuman", "Control", "Corpus")
RATER_PAIRS = (
    ("BERT_L", "FourHuman"),
    ("BERT_L", "Corpus"),
    ("FourHuman", "Corpus"),
    ("BERT_L", "Control"),
    ("FourHuman", "Control"),
    ("Corpus", "Control"),
)
#: Report column order for the three articles.
ARTICLE_ORDER = (ArticleLabel.THE, ArticleLabel.A, ArticleLabel.ZERO)
STRATA = ("All", "Agree4", "Agree3", "Agree2")


class DuplicateAnnotationError(ValueError):
    pass


class EmptyOverlapError(ValueError):
    pass


class MissingViewError(KeyError):
    pass


@dataclass(frozen=True)
class AnnotationRecord:
    """One participant's choice for one example."""

    example_id: str
    annotator_id: str
    choice: ArticleLabel
    is_quality_control: bool = False
    session_id: str = ""
    elapsed_ms: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "example_id": self.example_id,
            "annotator_id": self.annotator_id,
            "choice": self.choice.value,
            "is_quality_control": self.is_quality_control,
            "session_id": self.session_id,
            "elapsed_ms": self.elapsed_ms,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "AnnotationRecord":
        return cls(
            example_id=obj["example_id"],
            annotator_id=obj["annotator_id"],
            choice=ArticleLabel(obj["choice"]),
            is_quality_control=bool(obj.get("is_quality_control", False)),
            session_id=obj.get("session_id", ""),
            elapsed_ms=obj.get("elapsed_ms"),
        )


def write_annotations(records: Iterable[AnnotationRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")


def read_annotations(path: str | Path) -> list[AnnotationRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(AnnotationRecord.from_json(json.loads(line)))
    return records


@dataclass
class RaterView:
    """A named mapping from example id to a label in {A, The, Zero, O}."""

    name: str
    labels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        bad = {l for l in self.labels.values() if l not in VIEW_LABELS}
        if bad:
            raise ValueError(f"view {self.name!r} has labels outside {VIEW_LABELS}: {sorted(bad)}")

    def defined_on(self, example_id: str) -> bool:
        return example_id in self.labels


@dataclass(frozen=True)
class AnnotationSummary:
    """Vote tally for one example over the four non-control annotators."""

    example_id: str
    votes: Mapping[str, int]
    annotator_ids: tuple[str, ...]
    control_annotator_id: str
    majority: Optional[str]
    agreement_level: int
    tie: bool


@dataclass
class AggregateResult:
    summaries: list[AnnotationSummary]
    four_human: RaterView
    control: RaterView
    dropped: list[str]  # example ids with fewer than five annotations


def _stable_hash(*parts) -> int:
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def designate_control(example_id: str, annotator_ids: Sequence[str], control_seed: int) -> str:
    """Pick the held-out Control annotator: seeded, deterministic, id-order free."""
    ordered = sorted(annotator_ids)
    return ordered[_stable_hash("control", control_seed, example_id) % len(ordered)]


def aggregate(records: Iterable[AnnotationRecord], control_seed: int) -> AggregateResult:
    """Tally votes per example and build the FourHuman and Control views.

    Quality-control records are ignored. Examples with fewer than five
    annotations are dropped (listed in ``dropped``); with more than five,
    a seeded deterministic subset of five annotators is kept.
    """
    by_example: dict[str, dict[str, ArticleLabel]] = {}
    for record in records:
        if record.is_quality_control:
            continue
        choices = by_example.setdefault(record.example_id, {})
        if record.annotator_id in choices:
            raise DuplicateAnnotationError(
                f"annotator {record.annotator_id!r} recorded twice for {record.example_id!r}"
            )
        choices[record.annotator_id] = record.choice

    summaries: list[AnnotationSummary] = []
    four_human = RaterView("FourHuman")
    control_view = RaterView("Control")
    dropped: list[str] = []
    for example_id in sorted(by_example):
        choices = by_example[example_id]
        if len(choices) < 5:
            dropped.append(example_id)
            continue
        annotators = sorted(choices)
        if len(annotators) > 5:
            annotators = sorted(
                annotators, key=lambda a: _stable_hash("keep", control_seed, example_id, a)
            )[:5]
        control_id = designate_control(example_id, annotators, control_seed)
        voters = tuple(a for a in sorted(annotators) if a != control_id)
        votes = Counter(choices[a].value for a in voters)
        level = max(votes.values())
        leaders = [label for label, count in votes.items() if count == level]
        tie = len(leaders) > 1
        majority = None if tie else leaders[0]
        summaries.append(
            AnnotationSummary(
                example_id=example_id,
                votes=dict(sorted(votes.items())),
                annotator_ids=voters,
                control_annotator_id=control_id,
                majority=majority,
                agreement_level=level,
                tie=tie,
            )
        )
        if majority is not None:
            four_human.labels[example_id] = majority
        control_view.labels[example_id] = choices[control_id].value
    return AggregateResult(summaries, four_human, control_view, dropped)


def stratify(summaries: Iterable[AnnotationSummary]) -> dict[str, set[str]]:
    """Partition example ids by agreement level; ties appear only in All."""
    strata: dict[str, set[str]] = {name: set() for name in STRATA}
    for summary in summaries:
        strata["All"].add(summary.example_id)
        if summary.tie:
            continue
        if summary.agreement_level == 4:
            strata["Agree4"].add(summary.example_id)
        elif summary.agreement_level == 3:
            strata["Agree3"].add(summary.example_id)
        elif summary.agreement_level == 2:
            strata["Agree2"].add(summary.example_id)
    return strata


@dataclass(frozen=True)
class PhiResult:
    rater_pair: tuple[str, str]
    article: ArticleLabel
    stratum: str
    phi: float
    n: int
    contingency: tuple[int, int, int, int]  # (tp, fp, fn, tn)
    degenerate: bool
    n_dropped: int  # ids in the stratum where either view was undefined

    def to_json(self) -> dict:
        tp, fp, fn, tn = self.contingency
        return {
            "rater_a": self.rater_pair[0],
            "rater_b": self.rater_pair[1],
            "article": self.article.value,
            "stratum": self.stratum,
            "phi": self.phi,
            "n": self.n,
            "tp": tp,
            "fp": fp,
            "fn": fn,
            "tn": tn,
            "degenerate": self.degenerate,
            "n_dropped": self.n_dropped,
        }


def phi_from_contingency(tp: int, fp: int, fn: int, tn: int) -> tuple[float, bool]:
    """Phi from 2x2 cell counts; (0.0, True) when a marginal is zero."""
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom == 0:
        return 0.0, True
    return (tp * tn - fp * fn) / math.sqrt(denom), False


def phi(
    view_a: RaterView,
    view_b: RaterView,
    article: ArticleLabel,
    id_set: Iterable[str],
    stratum: str = "All",
    exclude_o: bool = False,
) -> PhiResult:
    """One-vs-rest Phi between two rater views over an id set.

    Ids where either view is undefined are dropped (and counted in
    ``n_dropped``). By default an O label stays in and binarizes negative
    for every article; ``exclude_o`` drops such ids instead. Raises
    EmptyOverlapError if nothing remains.
    """
    ids = sorted(id_set)
    shared = [i for i in ids if view_a.defined_on(i) and view_b.defined_on(i)]
    if exclude_o:
        shared = [
            i for i in shared
            if view_a.labels[i] != O_LABEL and view_b.labels[i] != O_LABEL
        ]
    if not shared:
        raise EmptyOverlapError(
            f"no shared ids for {view_a.name} vs {view_b.name} on stratum {stratum!r}"
        )
    target = article.value
    tp = fp = fn = tn = 0
    for example_id in shared:
        a_pos = view_a.labels[example_id] == target
        b_pos = view_b.labels[example_id] == target
        if a_pos and b_pos:
            tp += 1
        elif a_pos:
            fp += 1
        elif b_pos:
            fn += 1
        else:
            tn += 1
    value, degenerate = phi_from_contingency(tp, fp, fn, tn)
    return PhiResult(
        rater_pair=(view_a.name, view_b.name),
        article=article,
        stratum=stratum,
        phi=value,
        n=len(shared),
        contingency=(tp, fp, fn, tn),
        degenerate=degenerate,
        n_dropped=len(ids) - len(shared),
    )


@dataclass
class PhiReport:
    """The full pair x article x stratum grid plus tie-handling variants."""

    results: list[PhiResult]
    stratum_sizes: dict[str, int]
    n_ties: int
    skipped: list[tuple[str, str, str, str]]  # (stratum, rater_a, rater_b, article)

    def cell(self, stratum: str, pair: tuple[str, str], article: ArticleLabel) -> PhiResult:
        for result in self.results:
            if (
                result.stratum == stratum
                and result.rater_pair == pair
                and result.article is article
            ):
                return result
        raise KeyError((stratum, pair, article))

    def to_records(self) -> list[dict]:
        return [r.to_json() for r in self.results]

    def render(self) -> str:
        """Aligned text table, one block per stratum."""
        headers = {
            "All": "All Data (n={n}; {nt} excluding ties)".format(
                n=self.stratum_sizes["All"], nt=self.stratum_sizes["All"] - self.n_ties
            ),
            "AllExclTies": "All Data, ties excluded (n={})".format(
                self.stratum_sizes.get("AllExclTies", 0)
            ),
            "Agree4": f"4 Agree ({self.stratum_sizes.get('Agree4', 0)})",
            "Agree3": f"3 Agree ({self.stratum_sizes.get('Agree3', 0)})",
            "Agree2": f"2 Agree ({self.stratum_sizes.get('Agree2', 0)})",
        }
        by_block: dict[str, dict] = {}
        for result in self.results:
            by_block.setdefault(result.stratum, {})[(result.rater_pair, result.article)] = result
        lines = ["Phi agreement report", "=" * 60]
        pair_width = max(len(f"{a} vs {b}") for a, b in RATER_PAIRS) + 2
        for stratum in ("All", "AllExclTies", "Agree4", "Agree3", "Agree2"):
            cells = by_block.get(stratum)
            if not cells:
                continue
            lines.append("")
            lines.append(headers[stratum])
            lines.append(
                " " * 2 + "rater pair".ljust(pair_width) + "The      A/An     Zero(Ø)"
            )
            for pair in RATER_PAIRS:
                row = " " * 2 + f"{pair[0]} vs {pair[1]}".ljust(pair_width)
                for article in ARTICLE_ORDER:
                    result = cells.get((pair, article))
                    if result is None:
                        row += "--".ljust(9)
                    else:
                        mark = "*" if result.degenerate else ""
                        row += f"{result.phi:+.3f}{mark}".ljust(9)
                lines.append(row)
        lines.append("")
        lines.append("* degenerate cell (zero marginal); phi reported as 0 by convention")
        return "\n".join(lines) + "\n"


def build_report(
    views: Mapping[str, RaterView],
    summaries: Sequence[AnnotationSummary],
    include_all_excl_ties: bool = True,
    exclude_o: bool = False,
) -> PhiReport:
    """Phi for the six rater pairs, three articles, and every stratum.

    Requires all four canonical views. The All stratum includes ties (where
    FourHuman is undefined and its ids drop out pair-wise); an extra
    AllExclTies block reports the tie-free variant of the same numbers.
    ``exclude_o`` switches the O-label policy from binarize-negative to
    drop-the-id (see :func:`phi`).
    """
    missing = [name for name in RATER_NAMES if name not in views]
    if missing:
        raise MissingViewError(f"missing rater views: {missing}")
    strata = stratify(summaries)
    tie_ids = {s.example_id for s in summaries if s.tie}
    blocks: list[tuple[str, set[str]]] = [(name, strata[name]) for name in STRATA]
    if include_all_excl_ties:
        blocks.insert(1, ("AllExclTies", strata["All"] - tie_ids))
    results: list[PhiResult] = []
    skipped: list[tuple[str, str, str, str]] = []
    sizes: dict[str, int] = {}
    for stratum, ids in blocks:
        sizes[stratum] = len(ids)
        if not ids:
            continue
        for name_a, name_b in RATER_PAIRS:
            for article in ARTICLE_ORDER:
                try:
                    results.append(
                        phi(
                            views[name_a], views[name_b], article, ids,
                            stratum=stratum, exclude_o=exclude_o,
                        )
                    )
                except EmptyOverlapError:
                    skipped.append((stratum, name_a, name_b, article.value))
    return PhiReport(results=results, stratum_sizes=sizes, n_ties=len(tie_ids), skipped=skipped)


def load_predictions(path: str | Path, name: str = "BERT_L") -> RaterView:
    """Parse a predictions file (one JSON record per line) into a rater view.

    Records carry {example_id, label in {A, The, Zero, O}, scores}. An O
    label is kept as-is: it binarizes negative for every article.
    """
    view = RaterView(name)
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            example_id = obj["example_id"]
            label = obj["label"]
            if label not in VIEW_LABELS:
                raise ValueError(f"{path}:{line_no}: bad label {label!r}")
            if example_id in view.labels:
                raise ValueError(f"{path}:{line_no}: duplicate prediction for {example_id!r}")
            view.labels[example_id] = label
    return view


def save_view(view: RaterView, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"name": view.name, "labels": view.labels}, fh, ensure_ascii=False, indent=2)


def load_view(path: str | Path) -> RaterView:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return RaterView(obj["name"], dict(obj["labels"]))
