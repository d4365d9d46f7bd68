"""Causal-diagram analysis workbench.

Build a DAG (programmatically or from the text format), then ask the
questions that matter when planning an analysis: which paths connect two
variables and why they are open or blocked, whether a candidate adjustment
set isolates the effect you want, whether a variable qualifies as an
instrument, and whether selection into the study distorts the outcome.
Exact and sampled probability oracles cross-check every separation claim.
"""

from .adjust import (
    EffectQuery,
    IvVerdict,
    TransportAdvisory,
    Verdict,
    check_adjustment_set,
    enumerate_valid_sets,
    iv_check,
    iv_search,
    transportability_check,
)
from .dsl import DagDocument, DslParseError, ParseDiagnostic, parse, serialize, try_parse
from .engine import (
    ConditioningSet,
    Path,
    PathClassification,
    SeparationResult,
    classify_path,
    conditioning_for,
    d_separated,
    d_separated_fast,
    enumerate_paths,
)
from .errors import DsepError
from .graph import Dag, NodeAttrs, surgery_remove_exposure_causal_edges
from .oracle import JointTable, coin_experiment, conditional_association
from .sem import (
    CiTestResult,
    CrossValidationReport,
    LinearSem,
    ci_test,
    cross_validate,
    sem_generate,
    sem_sample,
)

__version__ = "1.0.0"

__all__ = [
    "Dag",
    "DagDocument",
    "DsepError",
    "DslParseError",
    "ConditioningSet",
    "CiTestResult",
    "CrossValidationReport",
    "EffectQuery",
    "IvVerdict",
    "JointTable",
    "LinearSem",
    "NodeAttrs",
    "ParseDiagnostic",
    "Path",
    "PathClassification",
    "SeparationResult",
    "TransportAdvisory",
    "Verdict",
    "check_adjustment_set",
    "ci_test",
    "classify_path",
    "coin_experiment",
    "conditional_association",
    "conditioning_for",
    "cross_validate",
    "d_separated",
    "d_separated_fast",
    "enumerate_paths",
    "enumerate_valid_sets",
    "iv_check",
    "iv_search",
    "parse",
    "sem_generate",
    "sem_sample",
    "serialize",
    "surgery_remove_exposure_causal_edges",
    "transportability_check",
    "try_parse",
]
