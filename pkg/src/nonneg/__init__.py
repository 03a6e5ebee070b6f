"""Exact real root classification and a nonnegativity prover built on it."""

from .classifier import ClassificationResult, count_at, real_root_classification, refine_condition
from .prover import Problem, Verdict, prove
from .system import CountTarget, SemiAlgSystem

__all__ = [
    "ClassificationResult",
    "CountTarget",
    "Problem",
    "SemiAlgSystem",
    "Verdict",
    "count_at",
    "prove",
    "real_root_classification",
    "refine_condition",
]
