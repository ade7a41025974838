"""Shared fixtures: golden tagged passages and hypothesis strategies."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from articlecloze.corpus import Sentence, make_token, parse_corpus
from articlecloze.zerotag import default_config

# ---------------------------------------------------------------------------
# Golden passages (inline-slash format, CLAWS5 tags).
#
# Six sentences covering the canonical zero-article environments; each value
# is (tagged sentence, expected marker insertion indices).
TABLE1_SENTENCES = [
    ("Pasta/NN1 is/VBZ an/AT0 Italian/AJ0 commodity/NN1 ./PUN", [0]),
    ("Tigers/NN2 are/VBB magnificent/AJ0 animals/NN2 ./PUN", [0]),
    ("Can/VM0 I/PNP order/VVI rice/NN1 ?/PUN", [3]),
    ("I/PNP would/VM0 like/VVI better/AJC shoes/NN2 ./PUN", [3]),
    ("Soup/NN1 was/VBD served/VVN with/PRP the/AT0 meal/NN1 ./PUN", [0]),
    ("Engineers/NN2 were/VBD called/VVN to/PRP the/AT0 scene/NN1 ./PUN", [0]),
]

# Three-sentence passage: coordinated premodifiers ("national and
# international recognition"), two prepositional objects ("flats", "single
# people"), and a fully determined third sentence.
LANDMARK_PASSAGE = [
    (
        "It/PNP is/VBZ a/AT0 local/AJ0 landmark/NN1 which/DTQ received/VVD "
        "national/AJ0 and/CJC international/AJ0 recognition/NN1 and/CJC helped/VVD "
        "turn/VVI the/AT0 tide/NN1 against/PRP the/AT0 thoughtless/AJ0 "
        "demolition/NN1 of/PRF the/AT0 Sixties/NN2 ./PUN",
        [7],  # before "national"
    ),
    (
        "Still/AV0 with/PRP Booth/NP0 Shaw/NP0 ,/PUN Denison/NP0 produced/VVD "
        "a/AT0 radical/AJ0 proposal/NN1 for/PRP flats/NN2 for/PRP single/AJ0 "
        "people/NN2 in/PRP the/AT0 heart/NN1 of/PRF the/AT0 city/NN1 centre/NN1 ./PUN",
        [11, 13],  # before "flats", before "single"
    ),
    (
        "The/AT0 site/NN1 was/VBD a/AT0 rambling/AJ0 and/CJC derelict/AJ0 pub/NN1 "
        ",/PUN the/AT0 Royal/NP0 Hotel/NP0 ,/PUN which/DTQ was/VBD originally/AV0 "
        "a/AT0 Georgian/AJ0 coaching/NN1 inn/NN1 ./PUN",
        [],
    ),
]

# Three-sentence passage: hyphen-joined premodifier ("non - runners"), a
# lexicon mass noun inside a verb phrase ("takes care of"), and one inside a
# prepositional phrase ("in awe").
PTA_PASSAGE = [
    (
        "But/CJC there/EX0 is/VBZ no/AT0 escape/NN1 for/PRP non/AJ0 -/PUN "
        "runners/NN2 ,/PUN who/PNQ are/VBB required/VVN to/TO0 sign/VVI up/AVP "
        "for/PRP light/AJ0 duties/NN2 ./PUN",
        [6, 17],  # before "non", before "light"
    ),
    ("That/DT0 takes/VVZ care/NN1 of/PRF Sunday/NP0 ./PUN", [2]),
    (
        "We/PNP cannot/VM0 refuse/VVI ,/PUN because/CJS we/PNP are/VBB in/PRP "
        "awe/NN1 of/PRF the/AT0 formidable/AJ0 women/NN2 running/VVG the/AT0 "
        "PTA/NP0 ./PUN",
        [8],  # before "awe"
    ),
]


def parse_sentence(tagged: str) -> Sentence:
    docs = parse_corpus(tagged, "inline-slash")
    assert len(docs) == 1 and len(docs[0].sentences) == 1
    return docs[0].sentences[0]


def passage_document(passage):
    text = "#DOC passage\n" + "\n".join(line for line, _ in passage)
    (doc,) = parse_corpus(text, "inline-slash")
    return doc


# 50 sentences in which every noun phrase carries an overt determiner or
# possessive: the tagger must leave all of them untouched.
def determiner_complete_sentences() -> list[str]:
    sentences = []
    nouns_sg = ["plan", "house", "river", "engine", "letter"]
    nouns_pl = ["plans", "houses", "rivers", "engines", "letters"]
    mass = ["pasta", "rice", "soup", "business", "care"]
    adjs = ["old", "quiet", "grand", "rusty", "formal"]
    dets = [("the", "AT0"), ("a", "AT0"), ("his", "DPS"), ("this", "DT0"), ("some", "DT0")]
    for i in range(50):
        det1, tag1 = dets[i % 5]
        det2, tag2 = dets[(i + 2) % 5]
        adj = adjs[(i + 1) % 5]
        n1 = nouns_sg[i % 5] if i % 2 == 0 else nouns_pl[i % 5]
        t1 = "NN1" if i % 2 == 0 else "NN2"
        n2 = mass[(i + 3) % 5]
        if det1 == "a" and t1 == "NN2":
            det1, tag1 = "the", "AT0"
        if det2 == "a":
            det2, tag2 = "the", "AT0"
        sentences.append(
            f"{det1.capitalize()}/{tag1} {adj}/AJ0 {n1}/{t1} needed/VVD "
            f"{det2}/{tag2} {n2}/NN1 ./PUN"
        )
    return sentences


@pytest.fixture(scope="session")
def rule_config():
    return default_config()


# ---------------------------------------------------------------------------
# Hypothesis strategies.

POS_TAGS = st.sampled_from(
    ["AT0", "NN1", "NN2", "NP0", "AJ0", "AJC", "CRD", "ORD", "DT0", "DPS",
     "CJC", "VVD", "VVZ", "VBB", "VBZ", "PRP", "PNP", "EX0", "PUN", "XXX"]
)
SURFACES = st.one_of(
    st.sampled_from(
        ["the", "a", "an", "The", "An", "cat", "cats", "pasta", "rice", "old",
         "ran", "saw", "in", "-", "and", ",", ".", "big", "Rome", "it"]
    ),
    st.text(
        alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ'",
        min_size=1,
        max_size=10,
    ).filter(lambda s: not s.startswith("#")),
)


@st.composite
def tokens(draw):
    return make_token(draw(SURFACES), draw(POS_TAGS))


@st.composite
def sentences(draw, min_tokens=1, max_tokens=12):
    toks = draw(st.lists(tokens(), min_size=min_tokens, max_size=max_tokens))
    return Sentence(id="s1", tokens=tuple(toks))
