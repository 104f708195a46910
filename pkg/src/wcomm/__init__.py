"""Weighted commutators on finite pointed algebras."""

from .algebra import (AlgebraError, AlgebraMap, FiniteAlgebra, Signature, Subuniverse, all_subuniverses, dump,
                      load, make_algebra, power, quotient, subuniverse_generate, validate)
from .commutators import (CommutatorResult, SmithUndefined, WeightedCospan, centrality_check, clear_caches,
                          cross_validate, divergence_search, higgins_commutator, huq_commutator,
                          ring_weighted_commutator, smith_commutator, weighted_commutator,
                          weighted_normal_commutator)
from .config import CapExceeded, Limits
from .congruences import Congruence, cg, congruence_from_normal, join_meet, normal_closure, zero_class
from .free import commutator_terms, free_algebra, identity_holds, maltsev_term, protomodularity_certificate
from .terms import evaluate, parse_term

__version__ = "0.1.0"

__all__ = [
    "AlgebraError",
    "AlgebraMap",
    "CapExceeded",
    "CommutatorResult",
    "Congruence",
    "FiniteAlgebra",
    "Limits",
    "Signature",
    "SmithUndefined",
    "Subuniverse",
    "WeightedCospan",
    "all_subuniverses",
    "centrality_check",
    "cg",
    "clear_caches",
    "commutator_terms",
    "congruence_from_normal",
    "cross_validate",
    "divergence_search",
    "dump",
    "evaluate",
    "free_algebra",
    "higgins_commutator",
    "huq_commutator",
    "identity_holds",
    "join_meet",
    "load",
    "make_algebra",
    "maltsev_term",
    "normal_closure",
    "parse_term",
    "power",
    "protomodularity_certificate",
    "quotient",
    "ring_weighted_commutator",
    "smith_commutator",
    "subuniverse_generate",
    "validate",
    "weighted_commutator",
    "weighted_normal_commutator",
    "zero_class",
]
