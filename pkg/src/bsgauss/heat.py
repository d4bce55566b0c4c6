"""Traces of products of Birman-Schwinger kernels through the Mehler kernel.

Writing the resolvent as the Laplace transform of the heat semigroup turns
every trace of a product of two Gaussian-sandwiched resolvents into a
two-dimensional integral over the heat times (t, s): all four spatial
integrations are Gaussian and are done in closed form.  The remaining
integrand decays like exp(E (t + s)) and has integrable t**-1/2 spikes at
the origin, so it is integrated by the trapezoid rule in (log t, log s),
where it decays doubly exponentially at the lower end.

For the x-profile ``sqrt(n) exp(-n^2 x^2 / 2)`` (n = 1 is the plain
Gaussian) and the delta line, with

    th = tanh(t/2) + tanh(s/2),   cth = coth(t/2) + coth(s/2),
    C = (cth + th) / 2,           D = (cth - th) / 2,
    A = n^2 + C / 2,  B = D / 2,  R = sqrt((n^2 + th/2) (n^2 + cth/2)),

the x-factors are n^2 / R (scaled-scaled), n / sqrt(A) (scaled-delta) and
1 (delta-delta), all multiplied by the common weight
exp(E (t + s)) / (2 sqrt(sinh t sinh s)) / (2 sqrt(ts + t + s)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .green import as_parameter

DEFAULT_STEP = 0.2
DEFAULT_LOG_TMIN = -70.0


def log_sinh(t):
    """log(sinh t) without overflow for large t or cancellation for small t."""
    t = np.asarray(t, dtype=float)
    small = np.minimum(t, 1.0)
    large = np.maximum(t, 1.0)
    return np.where(t < 1.0, np.log(np.sinh(small)),
                    large + np.log1p(-np.exp(-2.0 * large)) - math.log(2.0))


def log_time_grid(gap: float, step: float = DEFAULT_STEP, log_tmin: float = DEFAULT_LOG_TMIN):
    """Heat times exp(a) on a uniform grid in a, reaching far past 1/gap."""
    tmax = 45.0 / gap + 5.0
    a = np.arange(log_tmin, math.log(tmax) + step, step)
    return np.exp(a)


@dataclass(frozen=True)
class HeatTraces:
    """Traces for scaled profile n against the delta line at one energy."""

    n_scale: float
    E: float
    scaled_sq: float
    cross: float
    delta_sq: float
    distance_sq: float

    @property
    def distance(self) -> float:
        return math.sqrt(max(self.distance_sq, 0.0))


def _pieces(t, s, n):
    ht, hs = 0.5 * t, 0.5 * s
    th = np.tanh(ht) + np.tanh(hs)
    cth = 1.0 / np.tanh(ht) + 1.0 / np.tanh(hs)
    big_c = 0.5 * (cth + th)
    big_d = 0.5 * (cth - th)
    n2 = n * n
    a = n2 + 0.5 * big_c
    b = 0.5 * big_d
    r = np.sqrt((n2 + 0.5 * th) * (n2 + 0.5 * cth))
    return big_c, a, b, r


def heat_traces(E, n_scale: float = 1.0, step: float = DEFAULT_STEP,
                log_tmin: float = DEFAULT_LOG_TMIN) -> HeatTraces:
    """All traces for the scaled-Gaussian/delta pair at energy E.

    ``distance_sq`` is integrated from a pointwise non-negative integrand,
    not by subtracting the three traces, so it stays accurate when the two
    kernels are close.
    """
    E = as_parameter(E)
    n = float(n_scale)
    t = log_time_grid(E.gap, step, log_tmin)
    tt, ss = np.meshgrid(t, t, indexing="ij")
    big_c, a, b, r = _pieces(tt, ss, n)
    log_w = (E.E * (tt + ss) - 0.5 * (log_sinh(tt) + log_sinh(ss)) - math.log(4.0)
             - 0.5 * np.log(tt * ss + tt + ss))
    # trapezoid in log-time: dt ds = t s da db; the ends are negligible
    w = np.exp(log_w) * tt * ss * step * step
    sqrt_a = np.sqrt(a)
    one_minus_cross = 0.5 * big_c / (sqrt_a * (sqrt_a + n))
    q1_gap = n * n * b * b / (a * r * (a + r))
    return HeatTraces(
        n_scale=n,
        E=E.E,
        scaled_sq=float(np.sum(w * (n * n / r))),
        cross=float(np.sum(w * (n / sqrt_a))),
        delta_sq=float(np.sum(w)),
        distance_sq=float(np.sum(w * (one_minus_cross ** 2 + q1_gap))),
    )


def gaussian_trace_heat(E, step: float = DEFAULT_STEP) -> float:
    """tr of the squared Gaussian Birman-Schwinger kernel (n = 1 profile)."""
    return heat_traces(E, 1.0, step).scaled_sq


def delta_trace_heat(E, step: float = DEFAULT_STEP) -> float:
    """tr of the squared delta-line Birman-Schwinger kernel."""
    return heat_traces(E, 1.0, step).delta_sq
