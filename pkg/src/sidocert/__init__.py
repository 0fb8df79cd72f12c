"""Exact certificates for thick reflection complexes and Sidorenko checks at desk scale."""

from .certify import (
    FarkasRefutation,
    Inconclusive,
    MembershipCertificate,
    MembershipProblem,
    certificate_from_trace,
    certificate_transport_subdivision,
    decide_membership,
    in_class_C,
    in_class_Ck,
    is_thick,
    is_weakly_thick,
    thickness_problem,
    verify_certificate,
    verify_refutation,
)
from .complex import BHypergraph, ReflectionComplex, from_trace, glue, glue_star, is_k_reducible, reflect, trivial
from .graphs import Hypergraph, TargetGraph
from .homcount import count_hom, density, enumerate_hom, sidorenko_check, sweep_targets
from .measures import DistTable, ci_coupling, entropy_D, evaluate_scheme, marginal, relative_entropy, uniform_edge
from .setfun import GroundSet, SetFunction

__version__ = "0.1.0"

__all__ = [
    "BHypergraph",
    "DistTable",
    "FarkasRefutation",
    "GroundSet",
    "Hypergraph",
    "Inconclusive",
    "MembershipCertificate",
    "MembershipProblem",
    "ReflectionComplex",
    "SetFunction",
    "TargetGraph",
    "certificate_from_trace",
    "certificate_transport_subdivision",
    "ci_coupling",
    "count_hom",
    "decide_membership",
    "density",
    "entropy_D",
    "enumerate_hom",
    "evaluate_scheme",
    "from_trace",
    "glue",
    "glue_star",
    "in_class_C",
    "in_class_Ck",
    "is_k_reducible",
    "is_thick",
    "is_weakly_thick",
    "marginal",
    "reflect",
    "relative_entropy",
    "sidorenko_check",
    "sweep_targets",
    "thickness_problem",
    "trivial",
    "uniform_edge",
    "verify_certificate",
    "verify_refutation",
]
