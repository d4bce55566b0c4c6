"""Harmonic-oscillator eigenfunctions, Gauss-Hermite rules and overlaps.

Conventions: ``phi_n`` is the normalized eigenfunction of
``-1/2 d^2/dx^2 + x^2/2`` with a positive leading Hermite coefficient,
``phi_0(x) = pi**-0.25 * exp(-x**2 / 2)``.  Only squares of overlaps enter
the physics, so the sign convention is immaterial there but it is fixed
for reproducibility.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from . import _backend
from .errors import QuadratureUnderresolved, UnsupportedOrder

#: Largest order for which the recurrence is validated (orthonormality and
#: the uniform bound |phi_n| <= pi**-0.25 are tested up to here).
MAX_ORDER = 500

LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class BasisConfig:
    """Truncation and resolution settings shared by series and quadratures.

    n_modes
        Number of oscillator modes kept in truncated mode sums.
    quad_points
        Size of Gauss-Hermite rules; at least ``2 * n_modes`` so products
        of two kept modes are integrated exactly.
    tail_tol
        Target for certified or estimated series remainders.
    """

    n_modes: int = 40
    quad_points: int = 96
    tail_tol: float = 1e-10

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise ValueError(f"n_modes must be a positive integer, got {self.n_modes!r}")
        if self.n_modes > MAX_ORDER + 1:
            raise UnsupportedOrder(f"n_modes={self.n_modes} exceeds {MAX_ORDER + 1}")
        if self.quad_points < 2 * self.n_modes:
            raise ValueError(
                f"quad_points={self.quad_points} < 2*n_modes={2 * self.n_modes}"
            )
        if not self.tail_tol > 0:
            raise ValueError(f"tail_tol must be positive, got {self.tail_tol!r}")


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight ``exp(-x**2)`` on the real line."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        # weights of far-out nodes may underflow to exactly zero, never below
        if not np.all(np.isfinite(nodes)) or np.any(weights < 0) or not weights.sum() > 0:
            raise ValueError("quadrature weights must be non-negative with positive sum")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    def scaled(self, alpha: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights integrating against ``exp(-alpha x**2)`` instead."""
        r = math.sqrt(alpha)
        return self.nodes / r, self.weights / r


def _check_order(n):
    if n < 0 or int(n) != n:
        raise ValueError(f"oscillator order must be a non-negative integer, got {n!r}")
    if n > MAX_ORDER:
        raise UnsupportedOrder(f"order {n} exceeds validated maximum {MAX_ORDER}")


@lru_cache(maxsize=64)
def gauss_hermite(m: int) -> QuadratureRule:
    """m-point Gauss-Hermite rule via the Golub-Welsch eigenproblem.

    Nodes get one Newton correction and the weights are recomputed from the
    Christoffel function ``1 / sum_k p_k(x)^2`` of the orthonormal
    polynomials, which is accurate where the eigenvector components would
    underflow.  Weights below the double range come out as exactly zero.
    """
    if m < 1:
        raise ValueError("rule size must be positive")
    if m > 2 * MAX_ORDER:
        raise UnsupportedOrder(f"rule size {m} exceeds {2 * MAX_ORDER}")
    off = np.sqrt(np.arange(1, m) / 2.0)
    x = eigh_tridiagonal(np.zeros(m), off, eigvals_only=True)
    x = 0.5 * (x - x[::-1])  # exact symmetry
    table = _backend.hermite_table(m, x)
    phi_m, phi_m1 = table[m], table[m - 1]
    dphi = math.sqrt(2.0 * m) * phi_m1 - x * phi_m
    x = x - phi_m / dphi
    x = 0.5 * (x - x[::-1])
    table = _backend.hermite_table(m - 1, x, False)
    with np.errstate(over="ignore"):
        w = 1.0 / np.sum(table * table, axis=0)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w)


@lru_cache(maxsize=16)
def gauss_legendre_unit(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    z, w = leggauss(m)
    return 0.5 * (z + 1.0), 0.5 * w


def hermite_fn(n: int, x):
    """phi_n(x) for scalar or array x."""
    _check_order(n)
    xa = np.asarray(x, dtype=float)
    vals = _backend.hermite_table(n, xa.ravel())[n].reshape(xa.shape)
    return float(vals) if vals.ndim == 0 else vals


def hermite_table(nmax: int, x) -> np.ndarray:
    """Array of shape (nmax + 1, len(x)) holding phi_0..phi_nmax at x."""
    _check_order(nmax)
    return _backend.hermite_table(nmax, np.asarray(x, dtype=float).ravel())


def hermite_poly_table(nmax: int, x) -> np.ndarray:
    """Polynomial factors p_k = phi_k * exp(x^2 / 2), rows k = 0..nmax."""
    _check_order(nmax)
    return _backend.hermite_table(nmax, np.asarray(x, dtype=float).ravel(), False)


def phi2n_zero_sq(n):
    """phi_{2n}(0)**2 = (2n)! / (4**n (n!)**2 sqrt(pi)), via log-gamma."""
    n = np.asarray(n, dtype=float)
    val = np.exp(gammaln(2 * n + 1) - 2 * gammaln(n + 1) - 2 * n * math.log(2.0) - 0.5 * LOG_PI)
    return float(val) if val.ndim == 0 else val


def phi_zero(n):
    """Signed phi_n(0); zero for odd n, (-1)**(n/2) sqrt(phi2n_zero_sq) otherwise."""
    n = np.asarray(n)
    half = n // 2
    val = np.where(n % 2 == 0, np.where(half % 2 == 0, 1.0, -1.0) * np.sqrt(phi2n_zero_sq(half)), 0.0)
    return float(val) if val.ndim == 0 else val


def gaussian_overlap_matrix(nmax: int, alpha: float = 1.0, rule: QuadratureRule | None = None,
                            scale: float = 1.0) -> np.ndarray:
    """Matrix of int phi_m(x/s) phi_n(x/s) exp(-alpha x^2) dx / s for m, n <= nmax.

    With ``s = scale`` the basis functions are oscillator states of width s.
    The integrand is a polynomial of degree m + n against a Gaussian, so a
    rule of ``nmax + 1`` points is exact.
    """
    _check_order(nmax)
    if rule is None:
        rule = gauss_hermite(nmax + 1)
    elif 2 * rule.size < 2 * nmax + 1:
        raise QuadratureUnderresolved(
            f"{rule.size}-point rule cannot integrate degree {2 * nmax} exactly"
        )
    # In t = x / s the weight is exp(-(1 + alpha s^2) t^2) times p_m p_n.
    gam = 1.0 + alpha * scale * scale
    t, w = rule.scaled(gam)
    p = hermite_poly_table(nmax, t)
    return (p * w) @ p.T


def overlap_gaussian(m: int, n: int, rule: QuadratureRule) -> float:
    """<phi_m, exp(-x^2) phi_n> by Gauss-Hermite quadrature.

    Requires ``rule.size >= m + n + 2``; smaller rules raise
    :class:`QuadratureUnderresolved`.
    """
    _check_order(m)
    _check_order(n)
    if rule.size < m + n + 2:
        raise QuadratureUnderresolved(
            f"rule of {rule.size} points is too small for orders ({m}, {n}); need {m + n + 2}"
        )
    t, w = rule.scaled(2.0)
    p = hermite_poly_table(max(m, n), t)
    return float(np.dot(w, p[m] * p[n]))


def wang_overlap_sq(m, n):
    """Closed form of <phi_m, exp(-x^2) phi_n>**2.

    With s = (m + n) / 2 this is ``((2s)! / s!)**2 / (2 * 16**s * m! * n!)``
    for m + n even and exactly zero otherwise; evaluated in log space.
    """
    m = np.asarray(m)
    n = np.asarray(n)
    s = 0.5 * (m + n)
    logv = (2.0 * (gammaln(2 * s + 1) - gammaln(s + 1)) - 4 * s * math.log(2.0)
            - gammaln(m + 1) - gammaln(n + 1) - math.log(2.0))
    val = np.where((m + n) % 2 == 0, np.exp(logv), 0.0)
    return float(val) if val.ndim == 0 else val


def scaled_overlap(l: int, m: int, n_scale: int, rule: QuadratureRule) -> float:
    """n * int exp(-n^2 x^2) phi_l(x) phi_m(x) dx for the scaled impurity.

    The integrand is a polynomial against ``exp(-(n^2 + 1) x^2)``, so the
    Gauss rule is applied after rescaling; exact once
    ``rule.size > (l + m) / 2``.
    """
    _check_order(l)
    _check_order(m)
    if n_scale < 1:
        raise ValueError("n_scale must be a positive integer")
    if 2 * rule.size <= l + m:
        raise QuadratureUnderresolved(
            f"rule of {rule.size} points is too small for orders ({l}, {m})"
        )
    t, w = rule.scaled(n_scale * n_scale + 1.0)
    p = hermite_poly_table(max(l, m), t)
    return float(n_scale * np.dot(w, p[l] * p[m]))


def scaled_overlap_substituted(l: int, m: int, n_scale: int, rule: QuadratureRule) -> float:
    """Same quantity in the form int exp(-x^2) phi_l(x/n) phi_m(x/n) dx.

    Here the plain rule sees the non-polynomial factor phi_l(x/n) phi_m(x/n),
    so agreement with :func:`scaled_overlap` checks the substitution itself.
    """
    _check_order(l)
    _check_order(m)
    x = rule.nodes / n_scale
    tab = hermite_table(max(l, m), x)
    return float(np.dot(rule.weights, tab[l] * tab[m]))
