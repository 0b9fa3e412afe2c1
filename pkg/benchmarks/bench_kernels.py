"""Time branch-and-bound with the numba kernels against the numpy fallback.

Each path runs in its own interpreter because ``ECNF2MIP_NUMBA`` is read at
import.  Numba compile time is excluded by a warm-up solve.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

INSTANCES = [("tsp", 4, 1), ("knapsack", 12, 1), ("nqueens-cp", 5, 1), ("nqueens-cp", 6, 1)]

WORKER = r"""
import json, sys, time
from ecnf2mip import _accel
from ecnf2mip.cli.generators import generate
from ecnf2mip.linearize import translate_theory
from ecnf2mip.model import normalize_theory
from ecnf2mip.solver import branch_and_bound

instances, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
branch_and_bound(translate_theory(normalize_theory(generate("tsp", 3, 0))))  # warm-up / compile
rows = []
for family, size, seed in instances:
    m = translate_theory(normalize_theory(generate(family, size, seed)))
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = branch_and_bound(m)
        took = time.perf_counter() - t0
        best = took if best is None else min(best, took)
    rows.append([f"{family}/{size}/s{seed}", m.n_rows, m.n_cols, res.nodes, res.objective, best])
print(json.dumps({"numba": _accel.USE_NUMBA, "rows": rows}))
"""


def run(flag, repeat):
    env = dict(os.environ, ECNF2MIP_NUMBA=flag)
    proc = subprocess.run([sys.executable, "-c", WORKER, json.dumps(INSTANCES), str(repeat)],
                          capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run("1", args.repeat), run("0", args.repeat)
    print(f"{'instance':<20} {'rows':>5} {'cols':>5} {'nodes':>6} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for a, b in zip(fast["rows"], slow["rows"]):
        assert a[3:5] == b[3:5], (a, b)
        print(f"{a[0]:<20} {a[1]:>5} {a[2]:>5} {a[3]:>6} {a[5]:>9.3f} {b[5]:>9.3f} {b[5] / a[5]:>7.1f}x")


if __name__ == "__main__":
    main()
