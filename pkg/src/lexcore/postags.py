"""Part-of-speech tag vocabulary used throughout the pipeline."""

from __future__ import annotations

from enum import IntEnum


class PosTag(IntEnum):
    """Coarse POS classes carried by tagged 1-gram corpora.

    ``X`` covers abbreviations, foreign words and undetermined classes;
    ``UNTAGGED`` marks tokens that carried no ``_TAG`` suffix at all.
    """

    NOUN = 0
    VERB = 1
    ADJ = 2
    ADV = 3
    PRON = 4
    DET = 5
    ADP = 6
    NUM = 7
    CONJ = 8
    PRT = 9
    X = 10
    UNTAGGED = 11


# Tags that may appear as a token suffix (UNTAGGED never does).
SUFFIX_TAGS: dict[str, PosTag] = {t.name: t for t in PosTag if t is not PosTag.UNTAGGED}

POS_COUNT = len(PosTag)
