import json
import os
import subprocess
import sys

import pytest

PROBE = r"""
import json
from ecnf2mip import _accel
from ecnf2mip.cli.generators import generate
from ecnf2mip.linearize import translate_theory
from ecnf2mip.model import normalize_theory
from ecnf2mip.solver import branch_and_bound

out = {"numba": _accel.USE_NUMBA, "runs": []}
for family, size, seed in [("tsp", 4, 1), ("knapsack", 8, 1), ("nqueens-cp", 5, 1)] + [("random", 10, s) for s in range(20)]:
    res = branch_and_bound(translate_theory(normalize_theory(generate(family, size, seed))))
    out["runs"].append([res.status, res.objective, res.root_bound])
print(json.dumps(out))
"""


def probe(flag):
    env = dict(os.environ, ECNF2MIP_NUMBA=flag)
    proc = subprocess.run([sys.executable, "-c", PROBE], capture_output=True, text=True, env=env, timeout=600)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_numba_and_numpy_paths_agree():
    fast, slow = probe("1"), probe("0")
    assert fast["numba"] is True and slow["numba"] is False
    for a, b in zip(fast["runs"], slow["runs"]):
        assert a[0] == b[0]
        for x, y in zip(a[1:], b[1:]):
            assert (x is None) == (y is None)
            if x is not None:
                assert x == pytest.approx(y, abs=1e-6)
