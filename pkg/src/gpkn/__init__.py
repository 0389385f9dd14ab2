"""Exact combinatorics of general-position sets in Kneser graphs."""

from .core import (
    Family,
    FamilySystem,
    KSet,
    Lcg64,
    ParseError,
    ProfileVector,
    ResourceCapError,
    binomial,
    enumerate_ksets,
    parse_family_file,
    profile,
    rank_colex,
    serialize_family_file,
    unrank_colex,
)
from .kneser import (
    DistanceMatrix,
    KneserParams,
    MatrixCache,
    adjacent,
    all_pairs_distances,
    diam3_threshold,
    diameter,
    distance_closed_form_2k1,
)

__version__ = "0.1.0"
