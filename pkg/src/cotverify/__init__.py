"""Online chain-of-thought verification over finite verifier classes.

Exact Littlestone-style dimensions with witness trees, optimal
mistake-bounded online learners, reductions between chain-of-thought
and prefix verification, lower-bound adversaries, and verifier-assisted
prover boosting.
"""

from .core import (
    ALL_CORRECT,
    NO,
    YES,
    CostVector,
    CotInstance,
    CotVerifyError,
    Oracle,
    PrefixInstance,
    Problem,
    StepToken,
    Transcript,
    Verifier,
    VerifierClass,
    VersionSpace,
    fault_at,
)
from .dimensions import (
    DimResult,
    MistakeTree,
    extract_witness,
    ldim,
    min_leaf_recurrence,
    sc_ldim,
    scl_ldim,
    verify_shattered,
    wsc_ldim,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_CORRECT",
    "NO",
    "YES",
    "CostVector",
    "CotInstance",
    "CotVerifyError",
    "DimResult",
    "MistakeTree",
    "Oracle",
    "PrefixInstance",
    "Problem",
    "StepToken",
    "Transcript",
    "Verifier",
    "VerifierClass",
    "VersionSpace",
    "extract_witness",
    "fault_at",
    "ldim",
    "min_leaf_recurrence",
    "sc_ldim",
    "scl_ldim",
    "verify_shattered",
    "wsc_ldim",
    "__version__",
]
