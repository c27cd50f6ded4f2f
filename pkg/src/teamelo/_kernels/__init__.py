"""Backend selection for the micro match loop.

Prefers the compiled Cython kernel, falling back to the pure-Python one.
Override with TEAMELO_BACKEND=cy|py (``cy`` raises if the extension is
missing).  Both backends are bit-identical; see benchmarks/ for speed.
"""

import os

from . import match_loop as _py

try:
    from . import _match_loop_cy as _cy
except ImportError:
    _cy = None

_choice = os.environ.get("TEAMELO_BACKEND", "auto").lower()
if _choice == "py":
    _impl, BACKEND = _py, "python"
elif _choice == "cy":
    if _cy is None:
        raise ImportError(
            "TEAMELO_BACKEND=cy but the compiled kernel is not built; "
            "reinstall without TEAMELO_SKIP_CYTHON"
        )
    _impl, BACKEND = _cy, "cython"
elif _cy is not None:
    _impl, BACKEND = _cy, "cython"
else:
    _impl, BACKEND = _py, "python"

run_match_chunk = _impl.run_match_chunk


def available_backends():
    """Names of importable kernels, compiled one first."""
    out = []
    if _cy is not None:
        out.append("cython")
    out.append("python")
    return out


def get_kernel(name: str):
    """Fetch a specific backend's chunk runner by name."""
    if name in ("cython", "cy"):
        if _cy is None:
            raise ValueError("cython backend not built")
        return _cy.run_match_chunk
    if name in ("python", "py"):
        return _py.run_match_chunk
    raise ValueError(f"unknown backend {name!r}")
