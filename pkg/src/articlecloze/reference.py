"""Reference results from the original full-scale study run.

These are the published Phi coefficients from the study this toolkit
re-implements (BERT-Large vs. 108 paid annotators over 2,384 evaluation
items drawn from the BNC, with 150k training examples). They are NOT
reproducible at desk scale and exist purely for side-by-side comparison
with reports produced here: same six rater pairs, same three articles,
same four agreement strata.

Keys are ``(stratum, (rater_a, rater_b), article_value)`` matching
:mod:`articlecloze.agreement` naming; stratum sizes are in
``REFERENCE_STRATUM_SIZES``. The source's counts do not fully reconcile
(2,383 fully-annotated items vs. an "All" count of 2,384; the per-stratum
sizes plus the 108 ties sum to 2,146). Everything is preserved verbatim
rather than adjusted.
"""

from __future__ import annotations

REFERENCE_STRATUM_SIZES = {"All": 2384, "Agree4": 984, "Agree3": 886, "Agree2": 168}
REFERENCE_ANNOTATED_ITEMS = 2383  # items that reached the required five annotations
REFERENCE_TIED_ITEMS = 108

_PAIRS = (
    ("BERT_L", "FourHuman"),
    ("BERT_L", "Corpus"),
    ("FourHuman", "Corpus"),
    ("BERT_L", "Control"),
    ("FourHuman", "Control"),
    ("Corpus", "Control"),
)
_ARTICLES = ("The", "A", "Zero")

# Row-major per stratum: one (The, A/An, Zero) triple per rater pair, in
# _PAIRS order.
_TABLE = {
    "All": (
        (0.580, 0.659, 0.589),
        (0.631, 0.658, 0.731),
        (0.553, 0.589, 0.590),
        (0.488, 0.573, 0.514),
        (0.490, 0.578, 0.515),
        (0.440, 0.519, 0.501),
    ),
    "Agree4": (
        (0.810, 0.869, 0.792),
        (0.738, 0.777, 0.755),
        (0.787, 0.822, 0.767),
        (0.645, 0.721, 0.621),
        (0.713, 0.770, 0.667),
        (0.600, 0.665, 0.592),
    ),
    "Agree3": (
        (0.545, 0.617, 0.626),
        (0.605, 0.639, 0.719),
        (0.469, 0.554, 0.639),
        (0.427, 0.525, 0.511),
        (0.456, 0.581, 0.542),
        (0.374, 0.489, 0.524),
    ),
    "Agree2": (
        (0.227, 0.468, 0.390),
        (0.501, 0.549, 0.692),
        (0.280, 0.344, 0.403),
        (0.269, 0.338, 0.283),
        (0.204, 0.256, 0.323),
        (0.295, 0.334, 0.200),
    ),
}

REFERENCE_PHI: dict[tuple[str, tuple[str, str], str], float] = {
    (stratum, pair, article): value
    for stratum, rows in _TABLE.items()
    for pair, row in zip(_PAIRS, rows)
    for article, value in zip(_ARTICLES, row)
}
