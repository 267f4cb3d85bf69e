"""Exact Coxeter, root-system, poset and graded-algebra computations for
Kac-Moody groups at desk scale."""

__version__ = "0.1.0"

from .coxeter import (
    INF,
    CoxeterMatrix,
    CoxeterSystem,
    GeneralizedCartanMatrix,
    WeylElement,
    coset_reps,
    descent_type,
    finite_type_subsets,
    gcm_to_coxeter,
    meet,
    multiply,
    normal_form,
    reduced_expressions,
    restrict,
    weak_leq,
)
from .davis import DavisNode, check_combin, check_pullback, davis_poset, functor_L, functor_LI
from .graded import (
    GradedAlgebraSpec,
    Generator,
    PoincareSeries,
    bk_finite_field_case,
    classify_adams_case,
    e2_rank2_fixed,
    koszul_tor,
    levi_and_torus_fixed,
    mv_consistency_rank2,
    rank2_compare,
    series_of,
)
from .posets import FinPoset, PosetMap, comma_fiber, dismantle_core, nerve_homology, transport
from .roots import Root, ThetaSet, act, act_simple, commutes, theta
from .trees import telescope_limit, tree_hilbert, w3_presentation
from .unipotent import (
    GPElement,
    HasseTree,
    build_tree,
    check_intersection,
    gp_inverse,
    gp_multiply,
    in_Uw,
    orbit_poset,
    uw_group_facts,
)

__all__ = [
    "__version__",
    "INF",
    "CoxeterMatrix",
    "CoxeterSystem",
    "GeneralizedCartanMatrix",
    "WeylElement",
    "coset_reps",
    "descent_type",
    "finite_type_subsets",
    "gcm_to_coxeter",
    "meet",
    "multiply",
    "normal_form",
    "reduced_expressions",
    "restrict",
    "weak_leq",
    "GradedAlgebraSpec",
    "Generator",
    "PoincareSeries",
    "bk_finite_field_case",
    "classify_adams_case",
    "e2_rank2_fixed",
    "koszul_tor",
    "levi_and_torus_fixed",
    "mv_consistency_rank2",
    "rank2_compare",
    "series_of",
    "GPElement",
    "HasseTree",
    "build_tree",
    "check_intersection",
    "gp_inverse",
    "gp_multiply",
    "in_Uw",
    "orbit_poset",
    "uw_group_facts",
    "DavisNode",
    "check_combin",
    "check_pullback",
    "davis_poset",
    "functor_L",
    "functor_LI",
    "FinPoset",
    "PosetMap",
    "comma_fiber",
    "dismantle_core",
    "nerve_homology",
    "transport",
    "Root",
    "ThetaSet",
    "act",
    "act_simple",
    "commutes",
    "theta",
    "telescope_limit",
    "tree_hilbert",
    "w3_presentation",
]
