"""Optional numba acceleration.

Set ``ECNF2MIP_NUMBA=0`` before import to run every kernel as plain numpy.
When numba is missing the numpy path is used silently.
"""
import os

_flag = os.environ.get("ECNF2MIP_NUMBA", "1").strip().lower()
REQUESTED = _flag not in ("0", "false", "no", "off")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = REQUESTED and numba is not None


def njit(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if not USE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)

