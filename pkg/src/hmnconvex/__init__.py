"""Numerical classification and verification of h-MN-convexity for positive real functions."""

__version__ = "0.1.0"

from .classes import ALL_LABELS, ClassLabel, ClassMatrix, check_class, classify_all, residual
from .errors import (ConfigError, DegenerateWeights, DomainError, EvalError, HMNError,
                     HypothesisFailure, LengthMismatch, NonPositiveValue, ParseError,
                     PositivityFailure, RangeMismatch, UnknownIdentifier)
from .funcs import ScalarFn, builtin, eval_fn, from_expr, parse_fn
from .hfun import HFunction, eval_h, identity, one, parse_h, power, reciprocal
from .jensen import JensenReport, converse_jensen_eval, jensen_chain_check, jensen_eval
from .means import MeanKind, WeightVector, classical_mean, generalized_mean, weighted_mean_n
from .sampling import SamplePlan, Tolerance
from .verdict import PredicateVerdict, Verdict

__all__ = [
    "ALL_LABELS", "ClassLabel", "ClassMatrix", "check_class", "classify_all", "residual",
    "ConfigError", "DegenerateWeights", "DomainError", "EvalError", "HMNError", "HypothesisFailure",
    "LengthMismatch", "NonPositiveValue", "ParseError", "PositivityFailure", "RangeMismatch",
    "UnknownIdentifier", "ScalarFn", "builtin", "eval_fn", "from_expr", "parse_fn", "HFunction",
    "eval_h", "identity", "one", "parse_h", "power", "reciprocal", "JensenReport",
    "converse_jensen_eval", "jensen_chain_check", "jensen_eval", "MeanKind", "WeightVector",
    "classical_mean", "generalized_mean", "weighted_mean_n", "SamplePlan", "Tolerance",
    "PredicateVerdict", "Verdict", "__version__",
]
