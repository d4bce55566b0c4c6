"""Select the compiled kernel module, falling back to pure numpy.

Set ``BSGAUSS_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("BSGAUSS_PURE_PYTHON", "") not in ("", "0"):
    from . import _core_py as core
    COMPILED = False
else:
    try:
        from . import _core as core
        COMPILED = True
    except ImportError:
        from . import _core_py as core
        COMPILED = False

hermite_table = core.hermite_table
green_series = core.green_series
y_pair_gl = core.y_pair_gl
trace_rows = core.trace_rows

__all__ = ["COMPILED", "core", "hermite_table", "green_series", "y_pair_gl", "trace_rows"]
