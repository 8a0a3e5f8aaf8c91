"""Selects the compiled sweep when it is importable, else the Python one.

Set ``STABEXP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _sweep_py

try:
    if os.environ.get("STABEXP_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from ._sweep import sweep as _compiled_sweep
except ImportError:
    _compiled_sweep = None

HAVE_COMPILED = _compiled_sweep is not None
BACKEND = "cython" if HAVE_COMPILED else "python"
MAX_COMPILED_ROWS = 64

python_sweep = _sweep_py.sweep
ERROR_LABELS = _sweep_py.ERROR_LABELS


def sweep(ops, qa, qb, xcol, zcol, check_mask, logical_mask, analog_bit, out, n_rows):
    if HAVE_COMPILED and n_rows <= MAX_COMPILED_ROWS:
        return _compiled_sweep(ops, qa, qb, xcol, zcol, check_mask, logical_mask, analog_bit, out)
    return python_sweep(ops, qa, qb, xcol, zcol, check_mask, logical_mask, analog_bit, out)
