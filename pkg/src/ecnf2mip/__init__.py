"""Translate ECNF constraint theories to mixed-integer programs."""
from .linearize import Linearizer, extend_assignment, translate_theory
from .mip import Column, ColumnKind, MipModel, Row, Sense
from .model import Theory, normalize_theory, validate_theory
from .oracle import SpaceTooLarge, brute_force_optimum, enumerate_models, is_model, well_founded_model
from .solver import NumericBreakdown, SolveResult, branch_and_bound, check_feasible, simplex_solve

__all__ = [
    "Column", "ColumnKind", "Linearizer", "MipModel", "NumericBreakdown", "Row", "Sense", "SolveResult",
    "SpaceTooLarge", "Theory", "branch_and_bound", "brute_force_optimum", "check_feasible", "enumerate_models",
    "extend_assignment", "is_model", "normalize_theory", "simplex_solve", "translate_theory", "validate_theory",
    "well_founded_model",
]
