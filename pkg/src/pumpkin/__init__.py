"""Covering and packing c-pumpkin minors in multigraphs.

A c-pumpkin is two vertices joined by c parallel edges.  The package
detects c-pumpkin minors, shrinks instances with answer-preserving
replacement rules, extracts logarithmically small models, and combines
those pieces into exact solvers and a certified cover-plus-packing
approximation.
"""

from .approx import ApproxCertificate, approx_cover_pack, verify_certificate
from .config import Config, DEFAULT_CONFIG, config_from_env
from .detect import AnchoredQuery, Budget, has_pumpkin, max_pumpkin
from .errors import (
    BudgetExceeded,
    ModelSizeExceeded,
    MultiplicityOverflow,
    PumpkinError,
    SizeLimitExceeded,
)
from .exact import (
    CompressionState,
    SolveResult,
    branch_cover,
    brute_max_packing,
    brute_min_hitting,
    disjoint_cover,
    ic_cover,
)
from .graph import (
    ContractionMap,
    MultiGraph,
    Outgrowth,
    PumpkinModel,
    lift_model,
    make_model,
    minimize_model,
    verify_model,
)
from .hedgehog import Hedgehog, HedgehogOutcome, contract_hedgehog, rooted_or_cutset
from .oracle import oracle_has, oracle_max_pumpkin, oracle_nu, oracle_packing, oracle_tau
from .reduce import ReductionTrace, TraceStep, c_reduce, lift_cover, lift_packing
from .small_model import SmallModelOutcome, build_skeleton, dense_small_minor, find_small_model

__version__ = "0.1.0"

__all__ = [
    "AnchoredQuery",
    "ApproxCertificate",
    "Budget",
    "BudgetExceeded",
    "CompressionState",
    "Config",
    "ContractionMap",
    "DEFAULT_CONFIG",
    "Hedgehog",
    "HedgehogOutcome",
    "ModelSizeExceeded",
    "MultiGraph",
    "MultiplicityOverflow",
    "Outgrowth",
    "PumpkinError",
    "PumpkinModel",
    "ReductionTrace",
    "SizeLimitExceeded",
    "SmallModelOutcome",
    "SolveResult",
    "TraceStep",
    "approx_cover_pack",
    "branch_cover",
    "brute_max_packing",
    "brute_min_hitting",
    "build_skeleton",
    "c_reduce",
    "config_from_env",
    "contract_hedgehog",
    "dense_small_minor",
    "disjoint_cover",
    "find_small_model",
    "has_pumpkin",
    "ic_cover",
    "lift_cover",
    "lift_model",
    "lift_packing",
    "make_model",
    "max_pumpkin",
    "minimize_model",
    "oracle_has",
    "oracle_max_pumpkin",
    "oracle_nu",
    "oracle_packing",
    "oracle_tau",
    "rooted_or_cutset",
    "verify_certificate",
    "verify_model",
    "__version__",
]
