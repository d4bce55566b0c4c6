"""Birman-Schwinger kernels for the Gaussian, delta-line and scaled impurities.

All kernels here are coupling-free: the Gaussian kernel is
``exp(-z^2/2) G_E exp(-z^2/2)`` with ``z^2 = x^2 + y^2``, and callers multiply
by the coupling lambda.  Hilbert-Schmidt traces are available three ways:
by the oscillator mode series, by the heat-kernel reduction in
:mod:`bsgauss.heat`, and by closed-form upper bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import erfcx, zeta

from . import _backend
from .basis import (MAX_ORDER, BasisConfig, gauss_hermite, gauss_legendre_unit,
                    hermite_fn, hermite_poly_table, phi2n_zero_sq, phi_zero, scaled_overlap,
                    wang_overlap_sq)
from .green import ModeData, SpectralParameter, as_parameter, truncation_for
from .heat import heat_traces

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)

#: Gauss-Legendre size for the kink-split pair integral; relative error
#: against the closed form stays below 1e-13 for all rates.
PAIR_NODES = 64
#: Row-sum band half-width factor: entries with |m - n| > BAND sqrt(m + 1) + 30
#: carry overlap weight below exp(-BAND^2 / 4) and are dropped.
BAND = 14.0


# ---------------------------------------------------------------- kernels

@dataclass(frozen=True)
class SeparableBSKernel:
    """Gaussian kernel ``sum_n (1/kappa_n) a_n(x) a_n(x1) exp(-kappa_n|y-y1|) exp(-(y^2+y1^2)/2)``.

    Here ``a_n(x) = exp(-x^2/2) phi_n(x)``.  ``n_modes=None`` selects the
    truncation per evaluation from ``cfg.tail_tol``.
    """

    E: SpectralParameter
    n_modes: int | None = None
    cfg: BasisConfig = field(default_factory=BasisConfig)
    coupling_free: bool = True

    def modes(self, count: int) -> ModeData:
        return self.E.modes(count)

    @property
    def weights(self) -> np.ndarray:
        return 1.0 / self.modes(self.n_modes or self.cfg.n_modes).kappa

    @property
    def y_rates(self) -> np.ndarray:
        return self.modes(self.n_modes or self.cfg.n_modes).kappa

    def x_factor(self, n: int, x):
        return np.exp(-0.5 * np.square(x)) * hermite_fn(n, x)


@dataclass(frozen=True)
class DeltaBSKernel:
    """Delta-line kernel on functions of y only.

    ``sqrt(pi) exp(-y^2/2) [sum_n phi_2n(0)^2 exp(-kappa_2n |y-y1|)/kappa_2n] exp(-y1^2/2)``.
    """

    E: SpectralParameter
    n_modes: int | None = None
    cfg: BasisConfig = field(default_factory=BasisConfig)
    prefactor: float = SQRT_PI

    def even_modes(self, count: int) -> ModeData:
        return self.E.modes(count, 0, 2)

    def phi_sq(self, count: int) -> np.ndarray:
        return phi2n_zero_sq(np.arange(count))


@dataclass(frozen=True)
class ScaledGaussianBSKernel:
    """Kernel of the narrowed impurity ``n exp(-(n^2 x^2 + y^2))``.

    Equal to :class:`SeparableBSKernel` at ``n_scale = 1``.
    """

    n_scale: int
    E: SpectralParameter
    n_modes: int | None = None
    cfg: BasisConfig = field(default_factory=BasisConfig)

    def __post_init__(self):
        if self.n_scale < 1 or int(self.n_scale) != self.n_scale:
            raise ValueError("n_scale must be a positive integer")

    def x_factor(self, m: int, x):
        return np.exp(-0.5 * self.n_scale ** 2 * np.square(x)) * hermite_fn(m, x)


def gaussian_kernel(E, cfg: BasisConfig | None = None, n_modes: int | None = None) -> SeparableBSKernel:
    return SeparableBSKernel(as_parameter(E), n_modes, cfg or BasisConfig())


def delta_kernel(E, cfg: BasisConfig | None = None, n_modes: int | None = None) -> DeltaBSKernel:
    return DeltaBSKernel(as_parameter(E), n_modes, cfg or BasisConfig())


def scaled_kernel(n_scale: int, E, cfg: BasisConfig | None = None,
                  n_modes: int | None = None) -> ScaledGaussianBSKernel:
    return ScaledGaussianBSKernel(n_scale, as_parameter(E), n_modes, cfg or BasisConfig())


def _mode_count(k, d: float) -> int:
    if k.n_modes is not None:
        return k.n_modes
    # the Gaussian envelope factors are <= 1, so the resolvent bound carries over
    return truncation_for(d, k.E, k.cfg.tail_tol)


def bs_eval(k, x, x1, y, y1) -> float:
    """Value of a Gaussian or scaled Gaussian kernel at one point pair."""
    d = abs(y - y1)
    count = _mode_count(k, d)
    kappa = k.E.modes(count).kappa
    g = float(_backend.green_series([x], [x1], [d], kappa)[0])
    if isinstance(k, ScaledGaussianBSKernel):
        n = k.n_scale
        return n * math.exp(-0.5 * (n * n * (x * x + x1 * x1) + y * y + y1 * y1)) * g
    return math.exp(-0.5 * (x * x + x1 * x1 + y * y + y1 * y1)) * g


def delta_bs_eval(k: DeltaBSKernel, y, y1) -> float:
    d = abs(y - y1)
    count = k.n_modes if k.n_modes is not None else (truncation_for(d, k.E, k.cfg.tail_tol) + 1) // 2
    m = k.even_modes(count)
    series = float(np.sum(k.phi_sq(count) * np.exp(-m.kappa * d) / m.kappa))
    return k.prefactor * math.exp(-0.5 * (y * y + y1 * y1)) * series


# ------------------------------------------------------ y pair integral

def y_pair_integral(rate_m, rate_n, method: str = "quadrature"):
    """int int exp(-y^2 - (rate_m + rate_n)|y - y'| - y'^2) dy dy'.

    ``method="quadrature"`` rotates to u = y - y' so the kink sits at the
    endpoint of a half-line Gauss-Legendre integral; ``method="closed"``
    uses ``pi * erfcx(c / sqrt(2))``.
    """
    c = np.asarray(rate_m, dtype=float) + np.asarray(rate_n, dtype=float)
    if np.any(c < 0):
        raise ValueError("rates must be non-negative")
    if method == "closed":
        val = math.pi * erfcx(c / math.sqrt(2.0))
    elif method == "quadrature":
        nodes, weights = gauss_legendre_unit(PAIR_NODES)
        val = _backend.y_pair_gl(c.ravel(), nodes, weights).reshape(c.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(val) if np.ndim(val) == 0 else val


def y_pair_young_bound(rate_m, rate_n):
    """Young-inequality bound sqrt(2 pi) / (rate_m + rate_n) on the pair integral."""
    return SQRT_2PI / (np.asarray(rate_m, dtype=float) + np.asarray(rate_n, dtype=float))


def pair_summand(nu_m, nu_n):
    """Trace summand weight I(kappa_m + kappa_n) / (2 sqrt(nu_m nu_n))."""
    km, kn = np.sqrt(2.0 * np.asarray(nu_m)), np.sqrt(2.0 * np.asarray(nu_n))
    return y_pair_integral(km, kn) / (km * kn)


def pair_summand_bound(nu_m, nu_n):
    """sqrt(pi) / (4 nu_m^(3/4) nu_n^(3/4)), which dominates :func:`pair_summand`."""
    return SQRT_PI / (4.0 * (np.asarray(nu_m) * np.asarray(nu_n)) ** 0.75)


# ---------------------------------------------------------------- traces

@dataclass(frozen=True)
class TraceSeries:
    """Mode-series trace: exact partial sum plus a fitted tail."""

    value: float
    partial: float
    tail: float
    rows: int
    tail_spread: float  # change in tail between fit orders; a size indicator


def _fit_tail(r: np.ndarray, rows: int, gap: float, order: int) -> float:
    # r(m) ~ sum_j c_j nu^(-2 - j/2), nu = m + gap; the tail sums exactly by Hurwitz zeta
    m = np.arange(rows // 2, rows)
    nu = m + gap
    basis = np.stack([nu ** (-0.5 * j) for j in range(order)], axis=1)
    coef, *_ = np.linalg.lstsq(basis, r[rows // 2:rows] * nu ** 2, rcond=None)
    return float(sum(c * zeta(2.0 + 0.5 * j, rows + gap) for j, c in enumerate(coef)))


def trace_rows(E, rows: int) -> np.ndarray:
    """Full row sums r(m) = sum_n pair_summand(nu_m, nu_n) W(m, n), m < rows."""
    E = as_parameter(E)
    nodes, weights = gauss_legendre_unit(PAIR_NODES)
    return _backend.trace_rows(E.gap, rows, BAND, nodes, weights)


def trace_bs_squared_detail(E, rows: int = 2048, order: int = 5) -> TraceSeries:
    """tr of the squared Gaussian kernel by the double mode series.

    Every row m < rows is summed in full (the overlap weights are banded),
    and the remaining rows, which decay like nu_m^-2, are summed from an
    asymptotic fit in powers of nu_m^-1/2.
    """
    E = as_parameter(E)
    if rows < 64:
        raise ValueError("rows must be at least 64 for the tail fit")
    r = trace_rows(E, rows)
    partial = float(np.sum(r))
    tail = _fit_tail(r, rows, E.gap, order)
    spread = abs(tail - _fit_tail(r, rows, E.gap, order - 1))
    return TraceSeries(partial + tail, partial, tail, rows, spread)


def trace_bs_squared(E, cfg: BasisConfig | None = None, rows: int | None = None) -> float:
    """tr of the squared Gaussian Birman-Schwinger kernel (its squared HS norm).

    ``rows`` defaults to 2048, or 8192 deep below threshold (gap > 50),
    where the rows decay more slowly relative to their size.
    """
    E = as_parameter(E)
    if rows is None:
        rows = 8192 if E.gap > 50 else 2048
    return trace_bs_squared_detail(E, rows).value


def trace_truncated(E, n_modes: int) -> float:
    """Plain double sum over m, n < n_modes, without tail."""
    E = as_parameter(E)
    m = E.modes(n_modes)
    mm, nn = np.meshgrid(np.arange(n_modes), np.arange(n_modes), indexing="ij")
    f = pair_summand(m.nu[:, None], m.nu[None, :])
    return float(np.sum(f * wang_overlap_sq(mm, nn)))


def trace_bound_series(E, n_modes: int) -> float:
    """Partial sum of the summand-wise upper bound (sqrt(pi)/4) W / (nu_m nu_n)^(3/4)."""
    E = as_parameter(E)
    m = E.modes(n_modes)
    mm, nn = np.meshgrid(np.arange(n_modes), np.arange(n_modes), indexing="ij")
    return float(np.sum(pair_summand_bound(m.nu[:, None], m.nu[None, :]) * wang_overlap_sq(mm, nn)))


# ----------------------------------------------------- closed-form bounds

def hs_bound_gaussian(E) -> float:
    """Closed-form upper bound on tr of the squared Gaussian kernel."""
    g = as_parameter(E).gap
    return ((3.0 * math.sqrt(2.0) + g ** -0.5) ** 2 / (8.0 * SQRT_PI * math.sqrt(g))
            + 9.0 / (4.0 * SQRT_PI * math.sqrt(1.0 + g)))


def s1_bound(E) -> float:
    """Integral-comparison bound 3 sqrt(2) / (1/2 - E)^(1/4) on :func:`s1_sum`."""
    return 3.0 * math.sqrt(2.0) * as_parameter(E).gap ** -0.25


def s2_bound(E) -> float:
    """Integral-comparison bound 3 sqrt(2) / (3/2 - E)^(1/4) on :func:`s2_sum`."""
    return 3.0 * math.sqrt(2.0) * (1.0 + as_parameter(E).gap) ** -0.25


def _tail_integral(f, a: float) -> float:
    # x = a / v^4 maps [a, inf) to (0, 1] and turns an x^(-5/4) decay into a bounded integrand
    val, _ = integrate.quad(lambda v: f(a / v ** 4) * 4.0 * a / v ** 5, 0.0, 1.0,
                            epsabs=0, epsrel=1e-12, limit=200)
    return val


def _sum_with_tail(summand, start: int, n_terms: int) -> float:
    # direct sum to n_terms, then the integral from n_terms + 1/2 (midpoint rule
    # error for a convex summand is O(f''), negligible at n ~ 1e6)
    total = 0.0
    chunk = 1 << 18
    for lo in range(start, n_terms + 1, chunk):
        n = np.arange(lo, min(lo + chunk, n_terms + 1), dtype=float)
        total += float(np.sum(summand(n)))
    return total + _tail_integral(summand, n_terms + 0.5)


def s1_sum(E, n_terms: int = 1_000_000) -> float:
    """sum_{n >= 1} 1 / (n^(1/2) (2n + 1/2 - E)^(3/4)), tail completed by an integral."""
    g = as_parameter(E).gap
    return _sum_with_tail(lambda n: 1.0 / (np.sqrt(n) * (2.0 * n + g) ** 0.75), 1, n_terms)


def s2_sum(E, n_terms: int = 1_000_000) -> float:
    """sum_{n >= 0} 1 / ((n + 1/2)^(1/2) (2n + 3/2 - E)^(3/4)), tail completed."""
    g = as_parameter(E).gap
    return _sum_with_tail(lambda n: 1.0 / (np.sqrt(n + 0.5) * (2.0 * n + 1.0 + g) ** 0.75), 0,
                          n_terms)


def delta_hs_bound(E) -> float:
    """Closed-form upper bound on tr of the squared delta-line kernel."""
    g = as_parameter(E).gap
    return (g ** -0.5 + 3.0 * math.sqrt(2.0)) ** 2 / (4.0 * SQRT_PI * math.sqrt(g))


def delta_bound_series(E, n_terms: int = 1_000_000) -> float:
    """Intermediate bound (pi^(3/2)/4) [sum_n phi_2n(0)^2 / nu_2n^(3/4)]^2.

    The terms beyond ``n_terms`` use phi_2n(0)^2 ~ (1 - 1/(8n)) / (pi sqrt(n))
    and are integrated.
    """
    g = as_parameter(E).gap
    n = np.arange(n_terms, dtype=float)
    head = float(np.sum(phi2n_zero_sq(n) / (2.0 * n + g) ** 0.75))
    tail = _tail_integral(
        lambda t: (1.0 - 1.0 / (8.0 * t)) / (math.pi * math.sqrt(t)) / (2.0 * t + g) ** 0.75,
        n_terms - 0.5)
    return math.pi ** 1.5 / 4.0 * (head + tail) ** 2


def delta_trace_series(E, n_modes: int) -> float:
    """Truncated double series for tr of the squared delta kernel (slow, ~N^-1/2)."""
    E = as_parameter(E)
    m = E.modes(n_modes, 0, 2)
    p = phi2n_zero_sq(np.arange(n_modes))
    f = pair_summand(m.nu[:, None], m.nu[None, :])
    return float(math.pi * np.sum(f * np.outer(p, p)))


# ------------------------------------------------------ scaled kernels

def scaled_overlap_matrix(n_scale: int, n_modes: int) -> np.ndarray:
    """Matrix of n int exp(-n^2 x^2) phi_l phi_m dx for l, m < n_modes."""
    rule = gauss_hermite(n_modes)
    t, w = rule.scaled(n_scale * n_scale + 1.0)
    p = hermite_poly_table(n_modes - 1, t)
    return n_scale * (p * w) @ p.T


def delta_overlap_matrix(n_modes: int) -> np.ndarray:
    """Limit matrix sqrt(pi) phi_l(0) phi_m(0) of the scaled overlaps."""
    v = phi_zero(np.arange(n_modes))
    return SQRT_PI * np.outer(v, v)


@dataclass(frozen=True)
class ScaledTraces:
    scaled_sq: float
    cross: float
    delta_sq: float
    distance_sq: float


def scaled_traces_series(n_scale: int, E, n_modes: int) -> ScaledTraces:
    """Traces for the scaled/delta pair truncated to l, m < n_modes.

    Converges to the heat-kernel values as n_modes grows, but only once
    n_modes is well beyond n_scale^2, where the two overlap matrices differ.
    """
    E = as_parameter(E)
    if n_modes > MAX_ORDER + 1:
        raise ValueError(f"n_modes must be <= {MAX_ORDER + 1}")
    m = E.modes(n_modes)
    f = pair_summand(m.nu[:, None], m.nu[None, :])
    s = scaled_overlap_matrix(n_scale, n_modes)
    d = delta_overlap_matrix(n_modes)
    return ScaledTraces(float(np.sum(f * s * s)), float(np.sum(f * s * d)),
                        float(np.sum(f * d * d)), float(np.sum(f * (s - d) ** 2)))


def hs_distance_scaled_to_delta(n_scale: int, E, cfg: BasisConfig | None = None,
                                method: str = "heat") -> float:
    """Hilbert-Schmidt distance between the scaled-Gaussian and delta kernels.

    Both kernels are viewed as operators on L^2 of the plane (the delta one
    through its x-trace at 0), so the squared distance is
    ``tr K_n^2 - 2 tr K_n K_delta + tr K_delta^2``.  ``method="heat"`` (the
    default) integrates a non-negative reduced integrand and is accurate to
    about 1e-12; ``method="series"`` truncates the mode double sum at
    ``cfg.n_modes`` and underestimates the distance unless
    ``n_modes >> n_scale^2``.
    """
    E = as_parameter(E)
    if E.E >= 0:
        raise ValueError("the distance is defined here for E < 0")
    if method == "heat":
        return heat_traces(E, float(n_scale)).distance
    if method == "series":
        cfg = cfg or BasisConfig()
        return math.sqrt(max(scaled_traces_series(n_scale, E, cfg.n_modes).distance_sq, 0.0))
    raise ValueError(f"unknown method {method!r}")


__all__ = [
    "SeparableBSKernel", "DeltaBSKernel", "ScaledGaussianBSKernel", "gaussian_kernel",
    "delta_kernel", "scaled_kernel", "bs_eval", "delta_bs_eval", "y_pair_integral",
    "y_pair_young_bound", "pair_summand", "pair_summand_bound", "TraceSeries", "trace_rows",
    "trace_bs_squared", "trace_bs_squared_detail", "trace_truncated", "trace_bound_series",
    "hs_bound_gaussian", "s1_bound", "s2_bound", "s1_sum", "s2_sum", "delta_hs_bound",
    "delta_bound_series", "delta_trace_series", "scaled_overlap", "scaled_overlap_matrix",
    "delta_overlap_matrix", "ScaledTraces", "scaled_traces_series", "hs_distance_scaled_to_delta",
]
