"""Plain-text solution files: status, objective, then one ``name value`` per line."""
from __future__ import annotations

from ..mip import MipModel
from ..solver import SolveResult
from .mps import format_number


def write_solution(result: SolveResult, model: MipModel = None, keep=None) -> str:
    """Only source (non-auxiliary) columns are listed, in column order;
    ``keep`` narrows them further to a set of names."""
    out = [f"status {result.status}"]
    if result.objective is not None:
        out.append(f"objective {format_number(result.objective)}")
    if result.x is not None:
        for j, name in enumerate(result.names):
            if model is not None and model.columns[j].origin.auxiliary:
                continue
            if keep is not None and name not in keep:
                continue
            out.append(f"{name} {format_number(result.x[j])}")
    return "\n".join(out) + "\n"


def read_solution(text: str) -> dict:
    out = {"status": None, "objective": None, "values": {}}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, value = line.split(None, 1)
        if key == "status":
            out["status"] = value
        elif key == "objective":
            out["objective"] = float(value)
        else:
            out["values"][key] = float(value)
    return out
