"""Text formats: ECNF theories, MPS models and solution files."""
from .ecnf import EcnfSyntaxError, parse_ecnf_text, print_ecnf_text
from .mps import MpsError, read_mps, write_mps
from .solution import read_solution, write_solution

__all__ = [
    "EcnfSyntaxError", "parse_ecnf_text", "print_ecnf_text",
    "MpsError", "read_mps", "write_mps", "read_solution", "write_solution",
]
