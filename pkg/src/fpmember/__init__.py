"""Semi-decision procedures for word, membership and related problems in
finitely presented groups, with checkable certificates."""

__version__ = "0.1.0"

from .abelian import abelianize, lattice_membership, smith_normal_form
from .certify import (
    certify_normal,
    certify_quotient_iso,
    certify_same_subgroup,
    enum_finite_index_subgroups,
    find_isomorphism,
    find_retraction,
)
from .cosets import coset_table, reidemeister_schreier
from .decide import (
    Decision,
    Outcome,
    coset_intersection_witness,
    decide_double_coset,
    decide_membership,
    decide_membership_finite_index,
    decide_word,
    intersect_peripheral,
    membership_via_retract,
)
from .enumeration import Budget, Exhausted
from .gog import GraphOfGroups, free_product, gog_presentation, parse_gog
from .quotients import FiniteQuotient, enum_sym_homs
from .syntax import ParseError, format_word, parse_presentation, parse_word
from .words import GeneratorMap, Presentation

__all__ = [
    "Budget",
    "Decision",
    "Exhausted",
    "FiniteQuotient",
    "GeneratorMap",
    "GraphOfGroups",
    "Outcome",
    "ParseError",
    "Presentation",
    "abelianize",
    "certify_normal",
    "certify_quotient_iso",
    "certify_same_subgroup",
    "coset_intersection_witness",
    "coset_table",
    "decide_double_coset",
    "decide_membership",
    "decide_membership_finite_index",
    "decide_word",
    "enum_finite_index_subgroups",
    "enum_sym_homs",
    "find_isomorphism",
    "find_retraction",
    "format_word",
    "free_product",
    "gog_presentation",
    "intersect_peripheral",
    "lattice_membership",
    "membership_via_retract",
    "parse_gog",
    "parse_presentation",
    "parse_word",
    "reidemeister_schreier",
    "smith_normal_form",
]
