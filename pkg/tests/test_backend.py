import os
import subprocess
import sys

import numpy as np
import pytest

from bsgauss import _backend, _core_py
from bsgauss.basis import gauss_legendre_unit
from bsgauss.kernels import BAND, PAIR_NODES, trace_bs_squared

try:
    from bsgauss import _core
except ImportError:
    _core = None

needs_compiled = pytest.mark.skipif(_core is None, reason="compiled extension not built")


def _close(a, b, tol=1e-13):
    a, b = np.asarray(a), np.asarray(b)
    assert a.shape == b.shape
    assert np.max(np.abs(a - b)) <= tol * max(1.0, np.max(np.abs(b)))


@needs_compiled
class TestCompiledMatchesFallback:
    rng = np.random.default_rng(1)

    def test_selected_by_default(self):
        if os.environ.get("BSGAUSS_PURE_PYTHON", "") in ("", "0"):
            assert _backend.COMPILED

    @pytest.mark.parametrize("gaussian", [True, False])
    def test_hermite_table(self, gaussian):
        x = self.rng.uniform(-30, 30, 300)
        _close(_core.hermite_table(150, x, gaussian), _core_py.hermite_table(150, x, gaussian))

    def test_green_series(self):
        x, x1 = self.rng.uniform(-3, 3, (2, 200))
        d = self.rng.uniform(0.05, 2.0, 200)
        kappa = np.sqrt(2.0 * (np.arange(120) + 1.5))
        _close(_core.green_series(x, x1, d, kappa), _core_py.green_series(x, x1, d, kappa))

    def test_pair_integral(self):
        nodes, weights = gauss_legendre_unit(PAIR_NODES)
        c = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 200)])
        _close(_core.y_pair_gl(c, nodes, weights), _core_py.y_pair_gl(c, nodes, weights))

    def test_trace_rows(self):
        nodes, weights = gauss_legendre_unit(PAIR_NODES)
        _close(_core.trace_rows(1.5, 512, BAND, nodes, weights),
               _core_py.trace_rows(1.5, 512, BAND, nodes, weights))

    def test_read_only_inputs(self):
        x = np.linspace(-2, 2, 11)
        x.flags.writeable = False
        _close(_core.hermite_table(10, x), _core_py.hermite_table(10, x))


def test_fallback_forced_by_environment():
    code = ("from bsgauss import _backend; from bsgauss.kernels import trace_bs_squared; "
            "print(_backend.COMPILED, repr(trace_bs_squared(-1.0)))")
    env = dict(os.environ, BSGAUSS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out[0] == "False"
    assert float(out[1]) == pytest.approx(trace_bs_squared(-1.0), abs=1e-13)
