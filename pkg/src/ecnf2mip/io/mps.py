"""Free-format MPS writer and the matching reader."""
from __future__ import annotations

import math
import re

from ..mip import Column, ColumnKind, MipModel, Origin, Row, Sense

OBJ = "OBJ"
_SECTIONS = ("NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA")


class MpsError(ValueError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


def format_number(v) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return f"{v:.12g}"


def _parse_number(text, line):
    try:
        v = float(text)
    except ValueError:
        raise MpsError(line, f"bad number {text!r}") from None
    if v.is_integer() and abs(v) < 1e15:
        return int(v)
    return v


def sanitize_names(names) -> list:
    """Map names to ``[A-Za-z0-9_]+``; collisions get ``_2``, ``_3``, ..."""
    used, out = set(), []
    for name in names:
        base = re.sub(r"[^A-Za-z0-9_]", "_", name) or "_"
        cand, k = base, 1
        while cand in used:
            k += 1
            cand = f"{base}_{k}"
        used.add(cand)
        out.append(cand)
    return out


def row_name(i: int) -> str:
    return f"R{i + 1:04d}"


def write_mps(m: MipModel) -> str:
    cols = sanitize_names(m.names())
    model_name = sanitize_names([m.name])[0]
    out = [f"NAME {model_name}"]
    for orig, san in zip(m.names(), cols):
        if orig != san:
            out.append(f"* COLUMN {san} {orig}")

    out.append("ROWS")
    out.append(f" N {OBJ}")
    for i, row in enumerate(m.rows):
        out.append(f" {row.sense.value} {row_name(i)}")

    entries = [[] for _ in m.columns]
    for i, row in enumerate(m.rows):
        for j, coef in row.terms:
            entries[j].append((row_name(i), coef))

    out.append("COLUMNS")
    in_int = False
    for j, col in enumerate(m.columns):
        if col.kind.discrete != in_int:
            out.append(f" MARKER 'MARKER' '{'INTORG' if not in_int else 'INTEND'}'")
            in_int = not in_int
        lines = []
        coef = m.objective.get(j, 0)
        if coef != 0:
            lines.append((OBJ, coef))
        lines += entries[j]
        if not lines:
            lines = [(OBJ, 0)]
        for rname, coef in lines:
            out.append(f" {cols[j]} {rname} {format_number(coef)}")
    if in_int:
        out.append(" MARKER 'MARKER' 'INTEND'")

    out.append("RHS")
    if m.objective_constant:
        out.append(f" RHS {OBJ} {format_number(-m.objective_constant)}")
    for i, row in enumerate(m.rows):
        if row.rhs != 0:
            out.append(f" RHS {row_name(i)} {format_number(row.rhs)}")

    out.append("BOUNDS")
    for j, col in enumerate(m.columns):
        out.append(f" LO BND {cols[j]} {format_number(col.lower)}")
        if math.isinf(col.upper):
            out.append(f" PL BND {cols[j]}")
        else:
            out.append(f" UP BND {cols[j]} {format_number(col.upper)}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def read_mps(text: str) -> MipModel:
    """Read a document in the layout ``write_mps`` produces."""
    m = MipModel()
    renames = {}
    section = None
    row_index = {}
    row_sense = []
    row_terms = []
    rhs = {}
    col_index = {}
    in_int = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.startswith("*"):
            parts = line[1:].split()
            if len(parts) == 3 and parts[0] == "COLUMN":
                renames[parts[1]] = parts[2]
            continue
        fields = line.split()
        if not line[0].isspace():
            head = fields[0]
            if head not in _SECTIONS:
                raise MpsError(lineno, f"unknown section {head!r}")
            section = head
            if head == "NAME":
                m.name = fields[1] if len(fields) > 1 else ""
            elif head == "ENDATA":
                break
            continue
        if section == "ROWS":
            if len(fields) != 2:
                raise MpsError(lineno, "expected '<type> <row>'")
            kind, name = fields
            if name in row_index or name == OBJ and kind != "N":
                raise MpsError(lineno, f"duplicate row {name!r}")
            if kind == "N":
                if name != OBJ:
                    raise MpsError(lineno, f"unexpected objective row {name!r}")
                row_index[name] = -1
                continue
            try:
                sense = Sense(kind)
            except ValueError:
                raise MpsError(lineno, f"bad row type {kind!r}") from None
            row_index[name] = len(row_sense)
            row_sense.append(sense)
            row_terms.append([])
        elif section == "COLUMNS":
            if len(fields) == 3 and fields[1] == "'MARKER'":
                if fields[2] == "'INTORG'":
                    in_int = True
                elif fields[2] == "'INTEND'":
                    in_int = False
                else:
                    raise MpsError(lineno, f"bad marker {fields[2]}")
                continue
            if len(fields) not in (3, 5):
                raise MpsError(lineno, "expected '<column> <row> <value> [<row> <value>]'")
            name = fields[0]
            if name not in col_index:
                kind = ColumnKind.INTEGER if in_int else ColumnKind.CONTINUOUS
                col_index[name] = len(m.columns)
                m.columns.append(Column(name, kind, 0, math.inf))
            j = col_index[name]
            for rname, value in zip(fields[1::2], fields[2::2]):
                if rname not in row_index:
                    raise MpsError(lineno, f"column {name!r} references unknown row {rname!r}")
                coef = _parse_number(value, lineno)
                i = row_index[rname]
                if i < 0:
                    if coef != 0:
                        m.objective[j] = coef
                elif coef != 0:
                    row_terms[i].append((j, coef))
        elif section == "RHS":
            if len(fields) not in (3, 5):
                raise MpsError(lineno, "expected '<set> <row> <value>'")
            for rname, value in zip(fields[1::2], fields[2::2]):
                if rname not in row_index:
                    raise MpsError(lineno, f"unknown row {rname!r}")
                rhs[rname] = _parse_number(value, lineno)
        elif section == "RANGES":
            raise MpsError(lineno, "RANGES are not supported")
        elif section == "BOUNDS":
            if len(fields) < 3:
                raise MpsError(lineno, "expected '<type> <set> <column> [<value>]'")
            kind, _, name = fields[:3]
            if name not in col_index:
                raise MpsError(lineno, f"bound on unknown column {name!r}")
            col = m.columns[col_index[name]]
            value = _parse_number(fields[3], lineno) if len(fields) > 3 else None
            if kind in ("LO", "UP", "FX") and value is None:
                raise MpsError(lineno, f"{kind} bound needs a value")
            if kind == "LO":
                col.lower = value
            elif kind == "UP":
                col.upper = value
            elif kind == "FX":
                col.lower = col.upper = value
            elif kind == "PL":
                col.upper = math.inf
            elif kind == "MI":
                col.lower = -math.inf
            elif kind == "BV":
                col.lower, col.upper = 0, 1
            else:
                raise MpsError(lineno, f"bad bound type {kind!r}")
        else:
            raise MpsError(lineno, "data line outside a section")

    names = {v: k for k, v in row_index.items()}
    for i, sense in enumerate(row_sense):
        m.rows.append(Row(tuple(sorted(row_terms[i])), sense, rhs.get(names[i], 0), (names[i], "")))
    m.objective_constant = -rhs.get(OBJ, 0) + 0
    for col in m.columns:
        if col.kind is ColumnKind.INTEGER and col.lower == 0 and col.upper == 1:
            col.kind = ColumnKind.BINARY
        col.name = renames.get(col.name, col.name)
        col.origin = Origin("mps", col.name)
    return m
