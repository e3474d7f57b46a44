"""Fixed motion/location vocabulary for splitting free-text queries.

Tokens in the lexicon route to the temporal sub-query; everything else is
appearance.  Glue words (articles, prepositions) live in the lexicon so they
do not pollute appearance captions like "black sedan".
"""

from __future__ import annotations

from ..temporal_alignment.text_encoder import tokenize

TEMPORAL_LEXICON = frozenset(
    """
    turn turning turns turned left right straight ahead forward backward
    reverse reversing u uturn
    cross crossing crosses crossed
    stop stops stopped stopping halting braking slowing slow fast
    start starts starting started accelerating accelerate decelerating
    decelerate speeding
    stationary parked parking standing waiting still idle
    walking walks moving moves driving drives going goes travelling
    approaching leaving
    front behind back rear side beside near nearby far close
    leftward rightward toward towards away
    intersection crosswalk street road lane corner curb sidewalk
    ego
    a an the in on at of to from is that which with and
    """.split()
)


def split_query(text: str) -> tuple[str, str]:
    """Split query text into (appearance terms, temporal terms).

    Both sides may be empty; token order is preserved.
    """
    appearance: list[str] = []
    temporal: list[str] = []
    for tok in tokenize(text):
        if tok in TEMPORAL_LEXICON:
            temporal.append(tok)
        else:
            appearance.append(tok)
    return " ".join(appearance), " ".join(temporal)
