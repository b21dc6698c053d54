"""Differential reduction of two-variable Horn-type hypergeometric functions."""

from .catalog import HornDefinition, PochhammerFactor, exceptional_check, get_definition, list_functions, names, singular_locus
from .errors import (
    DomainError,
    EvaluationError,
    ExceptionalParametersError,
    HornError,
    ParseError,
    StructureError,
    UnknownFunctionError,
)
from .operators import appendix_fixture, direct_step, invert, step_down_lower, step_up_upper, system_at
from .reduction import ReductionResult, VerificationReport, plan_path, reduce, verify_reduction
from .series import EvalPoint, EvalReport, coefficient_lattice, eval_series, sample_points
from .symbolic import Polynomial, RationalExpr, parse, to_cas, to_text
from .theta import ThetaOperator

__all__ = [
    "HornDefinition", "PochhammerFactor", "exceptional_check", "get_definition", "list_functions", "names",
    "singular_locus", "DomainError", "EvaluationError", "ExceptionalParametersError", "HornError", "ParseError",
    "StructureError", "UnknownFunctionError", "appendix_fixture", "direct_step", "invert", "step_down_lower",
    "step_up_upper", "system_at", "ReductionResult", "VerificationReport", "plan_path", "reduce",
    "verify_reduction", "EvalPoint", "EvalReport", "coefficient_lattice", "eval_series", "sample_points",
    "Polynomial", "RationalExpr", "parse", "to_cas", "to_text", "ThetaOperator",
]
