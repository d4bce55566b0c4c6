"""Resolvent kernel of the free operator (oscillator in x, free in y).

The kernel is the mode sum

    G_E(x, x1, y, y1) = sum_n exp(-kappa_n |y - y1|) / kappa_n * phi_n(x) phi_n(x1)

with ``nu_n = n + 1/2 - E`` and ``kappa_n = sqrt(2 nu_n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .basis import MAX_ORDER, BasisConfig
from .errors import DiagonalSingularity, InvalidSpectralParameter

THRESHOLD = 0.5  # bottom of the free spectrum
INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


@dataclass(frozen=True)
class SpectralParameter:
    """Energy strictly below the free threshold 1/2."""

    E: float

    def __post_init__(self):
        e = float(self.E)
        if not math.isfinite(e) or e >= THRESHOLD:
            raise InvalidSpectralParameter(f"E must be finite and < 1/2, got {self.E!r}")
        object.__setattr__(self, "E", e)

    @property
    def gap(self) -> float:
        """Distance 1/2 - E to the threshold."""
        return THRESHOLD - self.E

    def modes(self, count: int, start: int = 0, step: int = 1) -> "ModeData":
        return ModeData.at(self, np.arange(start, start + step * count, step))


def as_parameter(E) -> SpectralParameter:
    return E if isinstance(E, SpectralParameter) else SpectralParameter(E)


@dataclass(frozen=True)
class ModeData:
    """Per-mode decay data at one energy: ``nu = n + 1/2 - E``, ``kappa = sqrt(2 nu)``."""

    index: np.ndarray
    nu: np.ndarray
    kappa: np.ndarray

    @classmethod
    def at(cls, E: SpectralParameter, index) -> "ModeData":
        index = np.asarray(index, dtype=int)
        nu = index + E.gap
        return cls(index, nu, np.sqrt(2.0 * nu))


def green_tail_bound(n_terms: int, d: float, E: SpectralParameter) -> float:
    """Upper bound on the remainder of the mode sum after ``n_terms`` terms.

    Uses |phi_n| <= pi**-0.25 and integral comparison on the decreasing
    summand exp(-kappa d) / kappa, whose integral over n is exp(-kappa d) / d.
    """
    kappa = math.sqrt(2.0 * (n_terms + E.gap))
    if d <= 0.0:
        return math.inf
    decay = math.exp(-kappa * d)
    return INV_SQRT_PI * decay * (1.0 / kappa + 1.0 / d)


def truncation_for(d: float, E: SpectralParameter, tol: float) -> int:
    """Smallest mode count whose remainder bound is below ``tol``."""
    if d <= 0.0:
        raise DiagonalSingularity("kernel diverges on y = y1; no truncation certifies a tolerance")
    # exp(-kappa d) / d <= tol / 2 at kappa >= log(2 / (tol d)) / d, then scan locally
    kappa_guess = max(math.log(2.0 * INV_SQRT_PI / (tol * d)), 0.0) / d if tol * d < 2 else 0.0
    n = max(int(0.5 * kappa_guess * kappa_guess - E.gap) - 2, 1)
    while n > 1 and green_tail_bound(n - 1, d, E) < tol:
        n -= 1
    while green_tail_bound(n, d, E) >= tol:
        n += 1
        if n > MAX_ORDER + 1:
            raise DiagonalSingularity(
                f"|y - y1| = {d:.3g} is too close to the diagonal for tolerance {tol:.1e}"
            )
    return n


def green_kernel(x, x1, y, y1, E, cfg: BasisConfig | None = None, n_terms: int | None = None) -> float:
    """Truncated resolvent kernel at one point pair.

    Parameters
    ----------
    x, x1, y, y1 : float
        Coordinates of the two points.
    E : float or SpectralParameter
        Energy below 1/2.
    cfg : BasisConfig, optional
        Supplies ``tail_tol``; the mode count is chosen automatically.
    n_terms : int, optional
        Fixed mode count, bypassing the automatic choice (oracle use).

    Raises
    ------
    DiagonalSingularity
        When ``y == y1`` and no fixed ``n_terms`` is given.
    """
    E = as_parameter(E)
    cfg = cfg or BasisConfig()
    d = abs(float(y) - float(y1))
    if n_terms is None:
        n_terms = truncation_for(d, E, cfg.tail_tol)
    kappa = E.modes(n_terms).kappa
    return float(_backend.green_series([x], [x1], [d], kappa)[0])
