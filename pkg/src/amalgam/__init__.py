"""Verification workbench for predimension constructions.

Finite relational structures with a points-minus-tuples predimension,
self-sufficient closure and dimension computed by independent routes,
growth classes under control functions, free amalgamation, chain growth
toward a generic limit, hub-and-petal certificates, a cyclic progression
harness, and dimension-measure catalog checks.
"""

from __future__ import annotations

from .budget import BudgetExceeded
from .control import (
    GoodFReport,
    KfResult,
    LogBase,
    RationalTable,
    good_f_report,
    holds_at,
    kf_member,
    parse_control,
    threshold,
)
from .counterexample import (
    Cor23Report,
    FlowerParams,
    HrConReport,
    TechFReport,
    TechFResult,
    build_flower,
    build_glued,
    build_replica_gadget,
    build_tech_F,
    cor23_search,
    flower_kf_parametric,
    verify_hrcon,
    verify_tech_F,
)
from .generic import (
    Extension,
    ExtensionList,
    GenericChain,
    acl,
    enumerate_extensions,
    extend_chain,
    grow_chain,
    load_chain,
    new_chain,
    same_type,
    save_chain,
)
from .msmeasure import (
    DimMeasureCatalog,
    HValue,
    check_axiom_family,
    check_axiom_finite,
    check_axiom_fubini,
    check_product_pushforward,
    counting_catalog,
    nu_normalize,
    parse_catalog,
    run_all_checks,
)
from .predimension import (
    ClosureResult,
    closure,
    delta,
    dim,
    dim_rel,
    find_leq_embeddings,
    in_k0,
    is_d_independent,
    is_self_sufficient,
)
from .structures import (
    AmalgamResult,
    Embedding,
    FinStruct,
    PreconditionError,
    Signature,
    StructParseError,
    canonical_key,
    find_embeddings,
    find_isomorphism,
    free_amalgam,
    induced_substructure,
    parse_structure,
    serialize,
)
from .szemeredi import (
    CubeSet,
    CyclicInstance,
    build_E,
    extract_progression,
    fubini_counting_check,
    is_solution,
    lemma26_checks,
    solve_amalgamation,
    survey_solutions,
    verify_main_hypotheses,
)

__version__ = "0.1.0"

__all__ = [
    "AmalgamResult",
    "BudgetExceeded",
    "ClosureResult",
    "Cor23Report",
    "CubeSet",
    "CyclicInstance",
    "DimMeasureCatalog",
    "Embedding",
    "Extension",
    "ExtensionList",
    "FinStruct",
    "FlowerParams",
    "GenericChain",
    "GoodFReport",
    "HValue",
    "HrConReport",
    "KfResult",
    "LogBase",
    "PreconditionError",
    "RationalTable",
    "Signature",
    "StructParseError",
    "TechFReport",
    "TechFResult",
    "acl",
    "build_E",
    "build_flower",
    "build_glued",
    "build_replica_gadget",
    "build_tech_F",
    "canonical_key",
    "check_axiom_family",
    "check_axiom_finite",
    "check_axiom_fubini",
    "check_product_pushforward",
    "closure",
    "cor23_search",
    "counting_catalog",
    "delta",
    "dim",
    "dim_rel",
    "enumerate_extensions",
    "extend_chain",
    "extract_progression",
    "find_embeddings",
    "find_isomorphism",
    "find_leq_embeddings",
    "flower_kf_parametric",
    "free_amalgam",
    "fubini_counting_check",
    "good_f_report",
    "grow_chain",
    "holds_at",
    "in_k0",
    "induced_substructure",
    "is_d_independent",
    "is_self_sufficient",
    "is_solution",
    "kf_member",
    "lemma26_checks",
    "load_chain",
    "new_chain",
    "nu_normalize",
    "parse_catalog",
    "parse_control",
    "parse_structure",
    "run_all_checks",
    "same_type",
    "save_chain",
    "serialize",
    "solve_amalgamation",
    "survey_solutions",
    "threshold",
    "verify_hrcon",
    "verify_main_hypotheses",
    "verify_tech_F",
]
