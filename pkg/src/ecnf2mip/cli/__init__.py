"""Command-line entry point: translate, solve, verify, stats and gen.

Exit codes: 0 success, 1 infeasible (solve) or failed check (verify), 2 parse
or validation error, 3 trivially infeasible translation, 4 filesystem error,
5 resource limit, 6 unbounded, 7 theory too large for the oracle.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from ..io import EcnfSyntaxError, MpsError, parse_ecnf_text, print_ecnf_text, read_mps, write_mps, write_solution
from ..linearize import translate_theory
from ..model import MalformedTheory, normalize_theory, validate_theory
from ..oracle import SpaceTooLarge
from ..solver import NumericBreakdown, branch_and_bound
from .generators import LIMITS, SizeError, generate
from .stats import stats_directory
from .verify import verify_theory

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_TRIVIAL, EXIT_FS, EXIT_LIMIT, EXIT_UNBOUNDED, EXIT_SPACE = range(8)
_SOLVE_EXIT = {"optimal": EXIT_OK, "infeasible": EXIT_INFEASIBLE, "limit": EXIT_LIMIT,
               "unbounded": EXIT_UNBOUNDED}
_LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}

log = logging.getLogger("ecnf2mip")


@dataclass
class RunConfig:
    input: str = None
    out: str = None
    seed: int = 0
    max_nodes: int = 10**6
    max_seconds: float = 60.0
    no_level_maps: bool = False
    integer_levels: bool = False
    format: str = None


class _InputError(Exception):
    """Already-formatted diagnostic for exit code 2."""


def _config(args) -> RunConfig:
    return RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_theory(path):
    text = Path(path).read_text()
    try:
        t = parse_ecnf_text(text)
    except EcnfSyntaxError as exc:
        raise _InputError(f"{path}:{exc.line}:{exc.col}: expected {exc.expected}, got {exc.got!r}") from None
    report = validate_theory(t)
    if not report.ok:
        raise _InputError(f"{path}: invalid theory\n{report}")
    try:
        return normalize_theory(t), t
    except MalformedTheory as exc:
        raise _InputError(f"{path}: {exc}") from None


def _translate(cfg: RunConfig, path=None):
    t, source = _load_theory(path or cfg.input)
    m = translate_theory(t, level_maps=not cfg.no_level_maps, integer_levels=cfg.integer_levels)
    return m, set(source.atoms) | {v.id for v in source.int_vars}


def cmd_translate(cfg: RunConfig) -> int:
    m, _ = _translate(cfg)
    _emit(cfg, write_mps(m))
    if m.infeasible:
        print("translation is trivially infeasible (empty clause)", file=sys.stderr)
        return EXIT_TRIVIAL
    return EXIT_OK


def cmd_solve(cfg: RunConfig) -> int:
    keep = None
    fmt = cfg.format or ("mps" if cfg.input.lower().endswith(".mps") else "ecnf")
    if fmt == "mps":
        try:
            m = read_mps(Path(cfg.input).read_text())
        except MpsError as exc:
            raise _InputError(f"{cfg.input}: {exc}") from None
    else:
        m, keep = _translate(cfg)
    res = branch_and_bound(m, max_nodes=cfg.max_nodes, max_seconds=cfg.max_seconds)
    log.info("solved %s: %s after %d nodes, %d LP iterations", m.name, res.status, res.nodes, res.lp_iterations)
    _emit(cfg, write_solution(res, m, keep))
    return _SOLVE_EXIT[res.status]


def cmd_verify(cfg: RunConfig) -> int:
    _, t = _load_theory(cfg.input)
    try:
        checks = verify_theory(t, level_maps=not cfg.no_level_maps, integer_levels=cfg.integer_levels,
                               max_nodes=cfg.max_nodes, max_seconds=cfg.max_seconds, seed=cfg.seed)
    except SpaceTooLarge as exc:
        print(f"{cfg.input}: {exc}", file=sys.stderr)
        return EXIT_SPACE
    _emit(cfg, "".join(f"{c}\n" for c in checks))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_INFEASIBLE


def cmd_stats(cfg: RunConfig) -> int:
    if not Path(cfg.input).is_dir():
        raise FileNotFoundError(f"not a directory: {cfg.input}")
    report = stats_directory(cfg.input, level_maps=not cfg.no_level_maps, integer_levels=cfg.integer_levels)
    _emit(cfg, report.format())
    if not report.rows:
        print("no theory could be read", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_gen(cfg: RunConfig, family: str, size: int) -> int:
    try:
        t = generate(family, size, cfg.seed)
    except SizeError as exc:
        raise _InputError(str(exc)) from None
    _emit(cfg, print_ecnf_text(t))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecnf2mip", description="Translate ECNF theories to mixed-integer programs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, flags=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=0)
        if flags:
            sp.add_argument("--max-nodes", type=int, default=10**6)
            sp.add_argument("--max-seconds", type=float, default=60.0)
            sp.add_argument("--no-level-maps", action="store_true", help="omit level-mapping rows")
            sp.add_argument("--integer-levels", action="store_true", help="make level columns integer")
        return sp

    common(sub.add_parser("translate", help="write the MPS translation")).add_argument("input")
    sp = common(sub.add_parser("solve", help="solve a theory or an MPS file"))
    sp.add_argument("input")
    sp.add_argument("--format", choices=("ecnf", "mps"))
    common(sub.add_parser("verify", help="check the translation against the oracle")).add_argument("input")
    common(sub.add_parser("stats", help="size ratios over a directory of theories")).add_argument("input")
    sp = common(sub.add_parser("gen", help="generate an instance"), flags=False)
    sp.add_argument("family", choices=sorted(LIMITS))
    sp.add_argument("size", type=int)
    return p


def main(argv=None) -> int:
    level = os.environ.get("ECNF2MIP_LOG", "quiet").lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    try:
        if args.command == "gen":
            return cmd_gen(cfg, args.family, args.size)
        return {"translate": cmd_translate, "solve": cmd_solve, "verify": cmd_verify,
                "stats": cmd_stats}[args.command](cfg)
    except _InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except NumericBreakdown as exc:
        print(f"numeric breakdown: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FS


if __name__ == "__main__":
    sys.exit(main())
