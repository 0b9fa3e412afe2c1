"""Regenerate the generated part of ``benchmarks/mini``.

The hand-written theories in that directory are not touched.
"""
from pathlib import Path

from ecnf2mip.cli.generators import generate
from ecnf2mip.io import print_ecnf_text

INSTANCES = [
    ("tsp", 3, 0), ("tsp", 4, 1),
    ("nqueens-cp", 4, 0), ("nqueens-logic", 4, 0), ("nqueens-cp", 5, 1), ("nqueens-logic", 5, 1),
    ("knapsack", 8, 1), ("knapsack", 10, 2),
] + [("random", 8, s) for s in range(1, 7)]


def main():
    out = Path(__file__).parent / "mini"
    out.mkdir(exist_ok=True)
    for family, size, seed in INSTANCES:
        name = f"{family.replace('-', '_')}_{size}_s{seed}.ecnf"
        (out / name).write_text(print_ecnf_text(generate(family, size, seed)))


if __name__ == "__main__":
    main()
