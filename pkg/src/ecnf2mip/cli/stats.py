"""Size statistics of translations, per theory and averaged over a directory."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from ..io.ecnf import EcnfSyntaxError, parse_ecnf_text
from ..linearize import translate_theory
from ..model import MalformedTheory, Theory, normalize_theory, validate_theory

log = logging.getLogger(__name__)

# reference mean constraint ratio over a much larger benchmark set
REFERENCE_CONSTRAINT_RATIO = 2.9


@dataclass(frozen=True)
class StatsRow:
    name: str
    orig_vars: int
    orig_constraints: int  # a definitional rule counts as one constraint
    mip_cols: int
    mip_rows: int
    has_definitions: bool = False

    @property
    def var_ratio(self) -> float:
        return self.mip_cols / self.orig_vars if self.orig_vars else float("nan")

    @property
    def constraint_ratio(self) -> float:
        return self.mip_rows / self.orig_constraints if self.orig_constraints else float("nan")


@dataclass
class StatsReport:
    rows: list
    skipped: list  # (name, reason)

    @property
    def mean_var_ratio(self) -> float:
        return sum(r.var_ratio for r in self.rows) / len(self.rows)

    @property
    def mean_constraint_ratio(self) -> float:
        return sum(r.constraint_ratio for r in self.rows) / len(self.rows)

    def format(self) -> str:
        out = [f"{'file':<28} {'vars':>5} {'cons':>5} {'cols':>5} {'rows':>5} {'var_ratio':>9} {'con_ratio':>9}"]
        for r in self.rows:
            out.append(f"{r.name:<28} {r.orig_vars:>5} {r.orig_constraints:>5} {r.mip_cols:>5} "
                       f"{r.mip_rows:>5} {r.var_ratio:>9.3f} {r.constraint_ratio:>9.3f}")
        for name, reason in self.skipped:
            out.append(f"warning: skipped {name}: {reason}")
        if self.rows:
            out.append(f"mean variable ratio {self.mean_var_ratio:.3f}")
            out.append(f"mean constraint ratio {self.mean_constraint_ratio:.3f} "
                       f"(reference mean {REFERENCE_CONSTRAINT_RATIO}, informational)")
        return "\n".join(out) + "\n"


def theory_stats(t: Theory, name: str = None, level_maps=True, integer_levels=False) -> StatsRow:
    m = translate_theory(normalize_theory(t), level_maps=level_maps, integer_levels=integer_levels)
    return StatsRow(name or t.name, len(t.atoms) + len(t.int_vars),
                    len(t.constraints) + t.n_rules, m.n_cols, m.n_rows, bool(t.definitions))


def stats_directory(path, level_maps=True, integer_levels=False) -> StatsReport:
    rows, skipped = [], []
    for f in sorted(Path(path).glob("*.ecnf")):
        try:
            t = parse_ecnf_text(f.read_text())
            report = validate_theory(t)
            if not report.ok:
                raise MalformedTheory(str(report))
            rows.append(theory_stats(t, f.name, level_maps, integer_levels))
        except (EcnfSyntaxError, MalformedTheory, OSError) as exc:
            log.warning("skipping %s: %s", f.name, exc)
            skipped.append((f.name, str(exc).splitlines()[0]))
    return StatsReport(rows, skipped)
