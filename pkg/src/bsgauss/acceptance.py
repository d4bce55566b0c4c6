"""Acceptance checks, shared by the ``verify`` command and the test suite.

Each check computes its quantity at the stated tolerance and returns a
:class:`Check`; nothing here is cached between checks, so the recorded
runtime covers the full computation.
"""
from __future__ import annotations

import hashlib
import io
import math
import time
from contextlib import redirect_stdout
from dataclasses import dataclass
from pathlib import Path
import tempfile

import numpy as np

from .basis import gauss_hermite, overlap_gaussian, phi2n_zero_sq, scaled_overlap, wang_overlap_sq
from .heat import gaussian_trace_heat
from .kernels import (delta_hs_bound, hs_bound_gaussian, hs_distance_scaled_to_delta,
                      trace_bs_squared, trace_bs_squared_detail)
from .lower_bound import (delta_lower_bound, gaussian_lower_bound, lower_bound_table,
                          measure_large_regime, measure_small_regime)
from .spectral import (DEFAULT_SPECTRAL_CONFIG, all_eigenvalues, assemble_bs_matrix, bound_states,
                       det2_root, oracle_ground_state)

DELTA_LIMIT_SCALES = (1, 2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class Check:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float
    time_limit: float

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key} {self.title}: {self.detail} ({self.seconds:.2f}s / {self.time_limit:g}s)"


def _timed(key, title, limit, fn) -> Check:
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if dt > limit:
        ok, detail = False, detail + "; over time limit"
    return Check(key, title, bool(ok), detail, dt, limit)


def check_wang_overlap() -> Check:
    def run():
        rule = gauss_hermite(64)
        worst = 0.0
        for m in range(31):
            for n in range(31):
                q = overlap_gaussian(m, n, rule) ** 2
                w = wang_overlap_sq(m, n)
                err = abs(q - w) / w if w else abs(q)
                worst = max(worst, err)
        return worst <= 1e-10, f"max relative error {worst:.2e} over m, n <= 30"
    return _timed("C1", "closed-form overlap equals quadrature", 5.0, run)


def check_stirling_bounds() -> Check:
    def run():
        k = np.arange(1, 2 * 1000 + 2)
        ratio = phi2n_zero_sq(k) ** 2 * math.pi ** 2 * k
        return bool(np.all(ratio <= 1.0)), f"max pi^2 k phi_2k(0)^4 = {ratio.max():.6f} for 1 <= k <= 2001"
    return _timed("C2", "phi_2k(0)^4 <= 1/(pi^2 k)", 1.0, run)


def check_hs_bound() -> Check:
    def run():
        parts, ok = [], True
        for e in (-100.0, -10.0, -1.0, 0.0, 0.45):
            base = trace_bs_squared_detail(e, rows=8192 if 0.5 - e > 50 else 2048)
            doubled = trace_bs_squared_detail(e, rows=2 * base.rows)
            bound = hs_bound_gaussian(e)
            drift = abs(doubled.value - base.value)
            ok &= base.value < bound and drift <= 1e-6
            parts.append(f"E={e:g}: {base.value:.6g} < {bound:.6g}, drift {drift:.1e}")
        return ok, "; ".join(parts)
    return _timed("C3", "trace below closed-form HS bound, stable under doubling", 30.0, run)


def check_trace_oracle() -> Check:
    def run():
        series = trace_bs_squared(-1.0)
        oracle = gaussian_trace_heat(-1.0)
        err = abs(series - oracle)
        return err <= 1e-6, f"series {series:.12f} vs heat-kernel oracle {oracle:.12f}, diff {err:.1e}"
    return _timed("C4", "trace series matches independent quadrature", 120.0, run)


def check_delta_bound() -> Check:
    def run():
        parts, ok = [], True
        for e in (-10.0, -1.0, 0.0):
            op = assemble_bs_matrix(e, DEFAULT_SPECTRAL_CONFIG, "delta")
            disc = float(np.sum(all_eigenvalues(op) ** 2))
            bound = delta_hs_bound(e)
            ok &= disc <= bound
            parts.append(f"E={e:g}: {disc:.6g} <= {bound:.6g}")
        return ok, "; ".join(parts)
    return _timed("C5", "delta-line discretized trace below its bound", 10.0, run)


def check_lower_bound_roots() -> Check:
    def run():
        lams = np.geomspace(0.01, 20.0, 200)
        r18 = [gaussian_lower_bound(l) for l in lams]
        r20 = [delta_lower_bound(l) for l in lams]
        res = max(r.residual for r in r18 + r20)
        e = np.array([r.energy for r in r18])
        mono = bool(np.all(np.diff(e) < 0))
        below = bool(np.all(e < 0.5)) and all(r.energy < 0.5 for r in r20)
        return res < 1e-10 and mono and below, (
            f"max residual {res:.1e}, strictly decreasing {mono}, below 1/2 {below}")
    return _timed("C6", "lower-bound equations solved", 5.0, run)


def check_klmn_validity() -> Check:
    def run():
        parts, ok = [], True
        for lam in (0.5, 1.0, 2.0):
            lb = gaussian_lower_bound(lam).energy
            gs = oracle_ground_state(lam, "gaussian").ground_energy
            ok &= gs - lb > 0
            parts.append(f"lambda={lam:g}: {lb:.6g} < {gs:.6g}")
        return ok, "; ".join(parts)
    return _timed("C7", "lower bound below ground-state energy", 120.0, run)


def check_bs_principle() -> Check:
    def run():
        parts, ok = [], True
        for kind in ("gaussian", "delta"):
            r = bound_states(1.0, DEFAULT_SPECTRAL_CONFIG, kind)[0]
            oracle = oracle_ground_state(1.0, kind).ground_energy
            root = det2_root(1.0, DEFAULT_SPECTRAL_CONFIG, kind, r.energy - 0.01, r.energy + 0.01)
            d_or = abs(r.energy - oracle)
            d_det = abs(root - r.energy)
            ok &= d_or <= 1e-3 and d_det <= 1e-6
            parts.append(f"{kind}: E_b {r.energy:.10f}, oracle diff {d_or:.1e}, det2 root diff {d_det:.1e}")
        return ok, "; ".join(parts)
    return _timed("C8", "BS principle agrees with direct diagonalization and det2", 120.0, run)


def delta_limit_distances(E: float = -1.0) -> list[float]:
    return [hs_distance_scaled_to_delta(n, E) for n in DELTA_LIMIT_SCALES]


def check_distance_decreasing() -> Check:
    def run():
        d = delta_limit_distances()
        mono = bool(np.all(np.diff(d) < 0))
        return mono, "distances " + ", ".join(f"{v:.5f}" for v in d)
    return _timed("C9a", "HS distance to delta kernel decreasing in n", 300.0, run)


def check_distance_ratio() -> Check:
    def run():
        d = delta_limit_distances()
        ratio = d[-1] / d[0]
        return ratio < 0.1, f"d(64)/d(1) = {ratio:.4f} (required < 0.1)"
    return _timed("C9b", "HS distance at n=64 below 10% of n=1", 300.0, run)


def check_scaled_overlap_limit() -> Check:
    def run():
        v = scaled_overlap(0, 0, 100, gauss_hermite(8))
        target = math.sqrt(math.pi) * phi2n_zero_sq(0)
        return abs(v - target) <= 1e-3, f"{v:.8f} vs {target:.8f}"
    return _timed("C9c", "scaled overlap tends to sqrt(pi) phi_0(0)^2", 300.0, run)


def check_bound_state_gap() -> Check:
    def run():
        cfg = DEFAULT_SPECTRAL_CONFIG
        e_delta = bound_states(1.0, cfg, "delta")[0].energy
        gaps = [abs(bound_states(1.0, cfg, ("scaled", n))[0].energy - e_delta)
                for n in DELTA_LIMIT_SCALES]
        mono = bool(np.all(np.diff(gaps) < 0))
        return mono, "gaps " + ", ".join(f"{g:.5f}" for g in gaps)
    return _timed("C9d", "bound-state gap to delta decreasing in n", 300.0, run)


def check_asymptotic_exponents() -> Check:
    def run():
        big = measure_large_regime()
        small = measure_small_regime()
        ok = abs(big.exponent - 4.0) <= 0.02 and abs(small.exponent - 4.0 / 3.0) <= 0.02
        return ok, (f"large: exponent {big.exponent:.5f}, constant {big.constant:.5f} "
                    f"(reference {81 / (4 * math.pi ** 2):.5f}, expansion {81 / (4 * math.pi):.5f}); "
                    f"small: exponent {small.exponent:.5f}, constant {small.constant:.5f} "
                    f"(reference {1 / (4 * math.pi ** (2 / 3)):.5f}, "
                    f"expansion {1 / (4 * math.pi ** (1 / 3)):.5f})")
    return _timed("C10", "asymptotic exponents", 10.0, run)


def _cli_digest(argv) -> tuple[str, bytes]:
    from .cli import main

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "table.csv"
        with redirect_stdout(io.StringIO()):
            code = main(list(argv) + ["--out", str(out)])
        if code != 0:
            raise RuntimeError(f"CLI exited with {code}")
        data = b"".join(p.read_bytes() for p in sorted(Path(tmp).iterdir()))
    return hashlib.sha256(data).hexdigest(), data


def check_figure_data() -> Check:
    def run():
        sweep = ["lower-bound", "--lambda-min", "0.01", "--lambda-max", "20", "--lambda-count", "200",
                 "--log-spaced", "--which", "both"]
        h1, data = _cli_digest(sweep)
        h2, _ = _cli_digest(sweep)
        rows = data.decode().splitlines()
        head = rows[0].split(",")
        e = np.array([float(r.split(",")[head.index("E")]) for r in rows[1:]])
        surf = ["delta-limit", "--n-scales", "15,30,70", "--surface-only"]
        s1, sdata = _cli_digest(surf)
        s2, _ = _cli_digest(surf)
        ns = {r.split(",")[0] for r in sdata.decode().splitlines()[1:]}
        ok = h1 == h2 and s1 == s2 and bool(np.all(np.diff(e) < 0)) and ns == {"15", "30", "70"}
        return ok, f"sweep sha256 {h1[:12]}, surfaces sha256 {s1[:12]}, E decreasing {bool(np.all(np.diff(e) < 0))}"
    return _timed("C11a", "figure data deterministic and monotone", 60.0, run)


def check_figure_between() -> Check:
    def run():
        t = lower_bound_table(np.geomspace(0.01, 20.0, 200))
        above = t["E"] >= t["asymptotic_large"]
        below = t["E"] <= t["asymptotic_small"]
        ok = bool(np.all(above & below))
        first = t["lambda"][~above][0] if not above.all() else float("nan")
        return ok, (f"below small-coupling curve everywhere: {bool(below.all())}; "
                    f"above large-coupling curve everywhere: {bool(above.all())} "
                    f"(first violation at lambda={first:.4g})")
    return _timed("C11b", "curve lies between the two asymptotic approximations", 10.0, run)


CHECKS = {
    "C1": check_wang_overlap, "C2": check_stirling_bounds, "C3": check_hs_bound,
    "C4": check_trace_oracle, "C5": check_delta_bound, "C6": check_lower_bound_roots,
    "C7": check_klmn_validity, "C8": check_bs_principle, "C9a": check_distance_decreasing,
    "C9b": check_distance_ratio, "C9c": check_scaled_overlap_limit,
    "C9d": check_bound_state_gap, "C10": check_asymptotic_exponents,
    "C11a": check_figure_data, "C11b": check_figure_between,
}

#: Checks whose stated requirement does not hold for the implemented quantities.
KNOWN_FAILURES = {
    "C9b": "distance decays like log(n)/sqrt(n); 64 is far too small for a 10x reduction",
    "C11b": "E(lambda) falls below the large-coupling curve for lambda above about 0.53",
}


def run_all(keys=None, stream=None) -> list[Check]:
    results = []
    for key in keys or CHECKS:
        c = CHECKS[key]()
        if stream is not None:
            print(c.line, file=stream, flush=True)
        results.append(c)
    return results
