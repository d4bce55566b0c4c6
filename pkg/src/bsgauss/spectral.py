"""Discretized Birman-Schwinger operators, bound states and det2.

Discretization is Galerkin in both directions.  In y the basis is the
Hermite functions psi_a; after the Gaussian sandwich every matrix element is
a polynomial moment against a Gaussian, so the y-integrals are exact up to
the treatment of the |y - y'| kink.  In x:

* ``gaussian``: oscillator modes.  The kernel is a sum over modes k of
  rank-one x-factors, so the nonzero spectrum equals that of
  ``sum_k (s_k s_k^T) (x) G_k`` with s_k the columns of the square root of
  the Gaussian overlap matrix and G_k the y-matrix of
  ``exp(-kappa_k |y - y'|) / kappa_k``.  G_k is integrated exactly in the
  centre-of-mass variable and by Gauss-Legendre from the kink outward.
* ``scaled(n)``: basis sqrt(n) phi_i(n x), and the resolvent written as
  the Laplace transform of the Mehler heat kernel; the matrix is
  ``int exp(tE) X(t) (x) Y(t) dt`` on a log-spaced trapezoid grid in t.
* ``delta``: y only, with X(t) the heat kernel at x = x' = 0.

All three kernels are positivity improving, so the top eigenvector is even
in x and in y; operators are stored with their four parity sectors.
"""
from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import LinAlgError, eigh, eigvalsh
from scipy.optimize import brentq, minimize_scalar

from .basis import (BasisConfig, gauss_hermite, gauss_legendre_unit, gaussian_overlap_matrix,
                    hermite_poly_table)
from .errors import BracketFailure, EigensolverFailure, NoBoundState
from .green import THRESHOLD, SpectralParameter, as_parameter
from .heat import log_sinh
from .kernels import scaled_overlap_matrix

LOG_STEP = 0.2
LOG_TMIN = -74.0  # t^(1/2) weight at the lower end is below 1e-16
TMAX_FACTOR = 45.0  # exp(-45) relative cut-off of exp(-t gap)
U_NODES_MIN = 80

#: Default search window for bound-state energies.
E_FLOOR = -1.0e4
E_CEIL_GAP = 1.0e-6

#: Discretization used when none is given; mu_max at E = -1 is stable to 1e-8 here.
DEFAULT_SPECTRAL_CONFIG = BasisConfig(32, 64)


# ------------------------------------------------------------------ kinds

@dataclass(frozen=True)
class Kind:
    """Impurity shape: ``gaussian``, ``delta`` or ``scaled`` with ``n_scale``."""

    name: str
    n_scale: int = 1

    def __post_init__(self):
        if self.name not in ("gaussian", "delta", "scaled"):
            raise ValueError(f"unknown impurity kind {self.name!r}")
        if self.n_scale < 1 or int(self.n_scale) != self.n_scale:
            raise ValueError("n_scale must be a positive integer")

    def __str__(self):
        return f"scaled({self.n_scale})" if self.name == "scaled" else self.name

    @property
    def two_dimensional(self) -> bool:
        return self.name != "delta"


def parse_kind(kind) -> Kind:
    """Accept a Kind, ``"gaussian"``, ``"delta"``, ``"scaled(8)"`` or ``("scaled", 8)``."""
    if isinstance(kind, Kind):
        return kind
    if isinstance(kind, tuple):
        return Kind(*kind)
    m = re.fullmatch(r"\s*scaled\s*[(:]\s*(\d+)\s*\)?\s*", str(kind))
    if m:
        return Kind("scaled", int(m.group(1)))
    return Kind(str(kind).strip())


# -------------------------------------------------------- y-direction pieces

def _y_rule(cfg: BasisConfig):
    # Gauss-Hermite rule for the weight exp(-z^2/2), exact to degree 2 * size - 1
    size = max(cfg.quad_points // 2, cfg.n_modes) + 1
    rule = gauss_hermite(size)
    return rule.nodes * math.sqrt(2.0), rule.weights * math.sqrt(2.0)


def y_green_matrix(kappa: float, n_modes: int, z, wz) -> np.ndarray:
    """Matrix <psi_a, exp(-y^2/2) [exp(-kappa|y-y'|)/kappa] exp(-y'^2/2) psi_b>.

    In u = y - y', v = y + y' the Gaussian factor is exp(-(u^2 + v^2)/2); the
    v-integral is Gauss-Hermite exact and the u-integral runs from the kink
    at u = 0 outward, where the integrand is smooth.
    """
    n_u = max(U_NODES_MIN, 2 * n_modes)
    xg, wg = gauss_legendre_unit(n_u)
    length = min(2.0 * math.sqrt(2.0 * n_modes + 1.0) + 8.0, 40.0 / kappa)
    u = length * xg
    wu = length * wg * np.exp(-0.5 * u * u - kappa * u)
    v, uu = np.meshgrid(z, u, indexing="ij")
    a = hermite_poly_table(n_modes - 1, (0.5 * (v + uu)).ravel())
    b = hermite_poly_table(n_modes - 1, (0.5 * (v - uu)).ravel())
    half = (a * np.outer(wz, wu).ravel()) @ b.T
    return (half + half.T) / (2.0 * kappa)


def y_heat_matrix(t: float, n_modes: int, z, wz) -> np.ndarray:
    """Matrix <exp(-y^2/2) psi_a, exp(t d^2/dy^2 / 2) exp(-y^2/2) psi_b>."""
    v, w = np.meshgrid(z, z, indexing="ij")
    u = w * math.sqrt(t / (1.0 + t))
    a = hermite_poly_table(n_modes - 1, (0.5 * (v + u)).ravel())
    b = hermite_poly_table(n_modes - 1, (0.5 * (v - u)).ravel())
    y = (a * np.outer(wz, wz).ravel()) @ b.T / (2.0 * math.sqrt(2.0 * math.pi * (1.0 + t)))
    return 0.5 * (y + y.T)


def mehler_log_prefactor(t):
    """log of (2 pi sinh t)^(-1/2), the Mehler kernel amplitude."""
    return -0.5 * (math.log(2.0 * math.pi) + log_sinh(t))


def x_heat_matrix(t: float, n_modes: int, n_scale: float, with_prefactor: bool = True) -> np.ndarray:
    """Scaled-basis x-factor: sqrt(n) phi_i(n x), sandwiched by n exp(-n^2 x^2/2).

    ``with_prefactor=False`` omits the amplitude exp(mehler_log_prefactor(t)),
    which overflows against exp(tE) separately at large t.
    """
    rule = gauss_hermite(n_modes + 1)
    th = math.tanh(0.5 * t)
    n2 = n_scale * n_scale
    # centre and difference coordinates decouple in the Mehler exponent
    s, ws = rule.scaled(1.0 + th / (2.0 * n2))
    d, wd = rule.scaled(1.0 + 1.0 / (th * 2.0 * n2))
    ss, dd = np.meshgrid(s, d, indexing="ij")
    a = hermite_poly_table(n_modes - 1, ((ss + dd) / math.sqrt(2.0)).ravel())
    b = hermite_poly_table(n_modes - 1, ((ss - dd) / math.sqrt(2.0)).ravel())
    pref = math.exp(float(mehler_log_prefactor(t))) if with_prefactor else 1.0
    x = (a * np.outer(ws, wd).ravel()) @ b.T * pref
    return 0.5 * (x + x.T)


class _HeatFactors:
    """Per-node x- and y-factor tables on the shared log-time lattice, grown on demand."""

    def __init__(self, kind: Kind, cfg: BasisConfig):
        self.kind = kind
        self.cfg = cfg
        self.z, self.wz = _y_rule(cfg)
        self.t = np.empty(0)
        self.log_amp = np.empty(0)
        self.xf = np.empty((0, cfg.n_modes * cfg.n_modes if kind.two_dimensional else 1))
        self.yf = np.empty((0, cfg.n_modes * cfg.n_modes))
        self.lock = threading.Lock()

    def upto(self, gap: float):
        count = int(math.ceil((math.log(TMAX_FACTOR / gap + 5.0) - LOG_TMIN) / LOG_STEP)) + 1
        with self.lock:
            have = self.t.size
            if count > have:
                t_new = np.exp(LOG_TMIN + LOG_STEP * np.arange(have, count))
                n = self.cfg.n_modes
                y_new = np.array([y_heat_matrix(t, n, self.z, self.wz).ravel() for t in t_new])
                if self.kind.two_dimensional:
                    x_new = np.array([x_heat_matrix(t, n, float(self.kind.n_scale), False).ravel()
                                      for t in t_new])
                else:
                    # delta line: sqrt(pi) times the Mehler kernel at x = x' = 0
                    x_new = np.full((t_new.size, 1), math.sqrt(math.pi))
                self.t = np.concatenate([self.t, t_new])
                self.log_amp = np.concatenate([self.log_amp, mehler_log_prefactor(t_new)])
                self.xf = np.concatenate([self.xf, x_new])
                self.yf = np.concatenate([self.yf, y_new])
            return self.t[:count], self.log_amp[:count], self.xf[:count], self.yf[:count]


_FACTOR_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _heat_factors(kind: Kind, cfg: BasisConfig) -> _HeatFactors:
    key = (kind, cfg.n_modes, cfg.quad_points)
    with _CACHE_LOCK:
        if key not in _FACTOR_CACHE:
            _FACTOR_CACHE[key] = _HeatFactors(kind, cfg)
        return _FACTOR_CACHE[key]


# ------------------------------------------------------------- operators

@dataclass(frozen=True)
class DiscretizedOperator:
    """Symmetric Galerkin matrix of a coupling-free Birman-Schwinger operator.

    ``sectors`` lists index arrays of the parity sectors; the matrix is block
    diagonal over them.  ``y_nodes``/``y_weights`` are the Gauss rule (for
    exp(-z^2/2)) used for all y-moments.
    """

    matrix: np.ndarray
    y_nodes: np.ndarray
    y_weights: np.ndarray
    x_modes: int
    y_modes: int
    E: SpectralParameter
    kind: Kind
    sectors: tuple = field(default=(), repr=False)

    def __post_init__(self):
        m = self.matrix
        dim = self.y_modes * (self.x_modes if self.kind.two_dimensional else 1)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} does not match basis size {dim}")
        scale = max(np.abs(m).max(), 1e-300)
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise ValueError("matrix is not symmetric")
        if np.any(self.y_weights <= 0) or self.y_nodes.shape != self.y_weights.shape:
            raise ValueError("inconsistent y rule")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def blocks(self):
        sectors = self.sectors or (np.arange(self.dimension),)
        for idx in sectors:
            yield idx, self.matrix[np.ix_(idx, idx)]


def _sector_indices(x_modes: int, y_modes: int, two_dimensional: bool):
    if not two_dimensional:
        return tuple(np.arange(p, y_modes, 2) for p in (0, 1))
    i, a = np.divmod(np.arange(x_modes * y_modes), y_modes)
    return tuple(np.flatnonzero((i % 2 == px) & (a % 2 == py)) for px in (0, 1) for py in (0, 1))


def _gaussian_mode_matrix(E: SpectralParameter, cfg: BasisConfig, z, wz) -> np.ndarray:
    n = cfg.n_modes
    vals, vecs = np.linalg.eigh(gaussian_overlap_matrix(n - 1))
    root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.T
    kappas = E.modes(n).kappa
    ys = np.array([y_green_matrix(k, n, z, wz).ravel() for k in kappas])
    xs = np.einsum("ik,jk->kij", root, root).reshape(n, n * n)
    m = xs.T @ ys
    return m.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)


def _heat_matrix(E: SpectralParameter, kind: Kind, cfg: BasisConfig) -> np.ndarray:
    t, log_amp, xf, yf = _heat_factors(kind, cfg).upto(E.gap)
    c = LOG_STEP * t * np.exp(t * E.E + log_amp)
    n = cfg.n_modes
    if not kind.two_dimensional:
        return ((xf[:, 0] * c) @ yf).reshape(n, n)
    m = (xf.T * c) @ yf
    return m.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)


def assemble_bs_matrix(E, cfg: BasisConfig | None = None, kind="gaussian",
                       route: str | None = None) -> DiscretizedOperator:
    """Galerkin matrix of the coupling-free kernel at energy E.

    ``cfg.n_modes`` sets both the x-truncation and the number of y Hermite
    functions; ``cfg.quad_points`` sizes the y Gauss rule.  ``route`` picks
    ``"modes"`` (default for gaussian) or ``"heat"`` (default otherwise;
    for gaussian this is the scaled basis at n = 1).
    """
    E = as_parameter(E)
    cfg = cfg or DEFAULT_SPECTRAL_CONFIG
    kind = parse_kind(kind)
    z, wz = _y_rule(cfg)
    route = route or ("modes" if kind.name == "gaussian" else "heat")
    if route == "modes":
        if kind.name != "gaussian":
            raise ValueError("the mode route is only available for the gaussian kind")
        m = _gaussian_mode_matrix(E, cfg, z, wz)
    elif route == "heat":
        heat_kind = Kind("scaled", 1) if kind.name == "gaussian" else kind
        m = _heat_matrix(E, heat_kind, cfg)
    else:
        raise ValueError(f"unknown route {route!r}")
    m = 0.5 * (m + m.T)
    x_modes = cfg.n_modes if kind.two_dimensional else 0
    sectors = _sector_indices(cfg.n_modes, cfg.n_modes, kind.two_dimensional)
    return DiscretizedOperator(m, z, wz, x_modes, cfg.n_modes, E, kind, sectors)


# ------------------------------------------------------------ eigenvalues

def all_eigenvalues(op: DiscretizedOperator) -> np.ndarray:
    """Every eigenvalue, descending."""
    try:
        vals = np.concatenate([eigvalsh(b) for _, b in op.blocks()])
    except LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    return np.sort(vals)[::-1]


def top_eigenvalues(op: DiscretizedOperator, k: int = 1, even_only: bool = False) -> np.ndarray:
    """The k largest eigenvalues, descending, each with a verified residual.

    ``even_only`` restricts to the even-even sector, which holds the largest
    eigenvalue for these positivity-improving kernels.
    """
    if k < 1 or k > op.dimension:
        raise ValueError(f"k must be in [1, {op.dimension}]")
    found = []
    norm = np.abs(op.matrix).sum(axis=1).max()
    blocks = list(op.blocks())[:1] if even_only else op.blocks()
    for _, b in blocks:
        kk = min(k, b.shape[0])
        try:
            vals, vecs = eigh(b, subset_by_index=[b.shape[0] - kk, b.shape[0] - 1])
        except LinAlgError as exc:
            raise EigensolverFailure(str(exc)) from exc
        res = np.linalg.norm(b @ vecs - vecs * vals, axis=0)
        if np.any(res > 1e-10 * max(norm, 1e-300)):
            raise EigensolverFailure(f"eigen residual {res.max():.2e} exceeds 1e-10 |A|")
        found.append(vals)
    vals = np.sort(np.concatenate(found))[::-1]
    if even_only and vals.size < k:
        raise ValueError("k exceeds the even sector size")
    return vals[:k]


# ----------------------------------------------------------- bound states

@dataclass(frozen=True)
class BoundStateResult:
    """Solution of lambda mu_i(E) = 1 on one eigenvalue branch."""

    energy: float
    eigen_index: int
    bs_eigenvalue: float
    principle_residual: float
    det2_value: float
    coupling: float
    bracket: tuple


@dataclass(frozen=True)
class Det2Result:
    value: float
    log_abs: float
    sign: float
    tail_bound: float
    factors: int


def fredholm_det2_detail(lam: float, E, op: DiscretizedOperator,
                         cutoff: float = 1e-8) -> Det2Result:
    """prod_i (1 - lam mu_i) exp(lam mu_i) over the discretized spectrum.

    Factors with lam mu_i below ``cutoff`` are dropped; for x <= 1/2 each
    contributes |log((1 - x) e^x)| <= x^2, so their total is bounded by
    ``tail_bound`` in log|det2|.
    """
    if lam < 0:
        raise ValueError("coupling must be non-negative")
    E = as_parameter(E)
    if E.E != op.E.E:
        raise ValueError("operator was assembled at a different energy")
    x = lam * all_eigenvalues(op)
    keep = x >= cutoff
    tail = float(np.sum(x[~keep] ** 2))
    one_minus = 1.0 - x[keep]
    sign = float(np.prod(np.sign(one_minus))) if keep.any() else 1.0
    if np.any(one_minus == 0.0):
        return Det2Result(0.0, -math.inf, 0.0, tail, int(keep.sum()))
    log_abs = float(np.sum(np.log(np.abs(one_minus)) + x[keep]))
    return Det2Result(sign * math.exp(log_abs), log_abs, sign, tail, int(keep.sum()))


def fredholm_det2(lam: float, E, op: DiscretizedOperator) -> float:
    """Modified Fredholm determinant det2(1 - lam K) of the discretized kernel."""
    return fredholm_det2_detail(lam, E, op).value


class _Spectra:
    """Memoized top eigenvalues of one kind on one discretization, keyed by energy."""

    def __init__(self, kind: Kind, cfg: BasisConfig, branches: int):
        self.kind, self.cfg, self.branches = kind, cfg, branches
        self.memo: dict[float, np.ndarray] = {}
        self.last: DiscretizedOperator | None = None

    def op(self, E: float) -> DiscretizedOperator:
        if self.last is None or self.last.E.E != E:
            self.last = assemble_bs_matrix(E, self.cfg, self.kind)
        return self.last

    def __call__(self, E: float) -> np.ndarray:
        if E not in self.memo:
            # a single branch is the top one, which lives in the even-even sector
            self.memo[E] = top_eigenvalues(self.op(E), self.branches, even_only=self.branches == 1)
        return self.memo[E]


def _lower_bracket(f, hi: float, floor: float) -> float:
    lo = min(hi - 1.0, -1.0)
    while f(lo) >= 0.0:
        lo = THRESHOLD - 4.0 * (THRESHOLD - lo)
        if lo < floor:
            raise BracketFailure(f"no sign change above E = {floor:g}")
    return lo


def bound_states(lam: float, cfg: BasisConfig | None = None, kind="gaussian", k: int = 1,
                 e_floor: float = E_FLOOR, ceil_gap: float = E_CEIL_GAP,
                 xtol: float = 1e-13) -> list[BoundStateResult]:
    """Bound-state energies from lam mu_i(E) = 1 for the k top branches.

    Each branch mu_i(E) is nondecreasing in E, so a sign change of
    lam mu_i - 1 on (e_floor, 1/2 - ceil_gap) brackets a unique root.
    Branches without a sign change are skipped; if none has one,
    :class:`NoBoundState` is raised.
    """
    if not lam > 0:
        raise ValueError("coupling must be positive")
    if k < 1:
        raise ValueError("k must be positive")
    cfg = cfg or DEFAULT_SPECTRAL_CONFIG
    kind = parse_kind(kind)
    spectra = _Spectra(kind, cfg, k)
    hi = THRESHOLD - ceil_gap
    results = []
    for i in range(k):
        def f(E, i=i):
            return lam * spectra(E)[i] - 1.0

        if f(hi) <= 0.0:
            continue
        lo = _lower_bracket(f, hi, 20.0 * e_floor)
        root = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
        mu = float(spectra(root)[i])
        det2 = fredholm_det2(lam, root, spectra.op(root))
        results.append(BoundStateResult(root, i, mu, abs(lam * mu - 1.0), det2, lam, (lo, hi)))
    if not results:
        raise NoBoundState(f"no branch of lambda*mu reaches 1 for lambda={lam}, kind={kind}")
    return results


def ground_state_energy(lam: float, cfg: BasisConfig | None = None, kind="gaussian") -> float:
    return bound_states(lam, cfg, kind, 1)[0].energy


def det2_root(lam: float, cfg: BasisConfig, kind, lo: float, hi: float, xtol: float = 1e-13) -> float:
    """Energy where det2(1 - lam K_E) changes sign inside [lo, hi]."""
    kind = parse_kind(kind)

    def g(E):
        return fredholm_det2(lam, E, assemble_bs_matrix(E, cfg, kind))

    return brentq(g, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


# ------------------------------------------------------------------ oracle

@dataclass(frozen=True)
class OracleResult:
    """Ground state of the Schroedinger operator by direct diagonalization."""

    ground_energy: float
    grid_spec: dict
    rayleigh_residual: float
    converged: bool
    doubling_change: float


def _y_even_parts(ny: int, scale: float):
    # even Hermite functions psi_2a(y / b) / sqrt(b): kinetic and exp(-y^2) matrices
    nmax = 2 * ny
    a = np.arange(nmax)
    t = np.diag(0.5 * (a + 0.5))
    off = -0.25 * np.sqrt((a[:-2] + 1.0) * (a[:-2] + 2.0))
    t[a[:-2], a[:-2] + 2] = off
    t[a[:-2] + 2, a[:-2]] = off
    even = a[::2]
    kin = t[np.ix_(even, even)] / scale ** 2
    pot = gaussian_overlap_matrix(nmax - 1, 1.0, scale=scale)[np.ix_(even, even)]
    return kin, pot


def halfline_basis(n: int, n_points: int = 400, xmax: float = 12.0):
    """Orthonormal q_j(x) exp(-x^2/2) on [0, inf) by discretized Stieltjes.

    Returns the oscillator matrix (kinetic plus x^2/2) and q_j(0).  The even
    extension of these functions carries an arbitrary slope jump at x = 0,
    which is what a delta line in x imposes.
    """
    z, w = leggauss(n_points)
    x = np.concatenate([[0.0], 0.5 * xmax * (z + 1.0)])
    w = np.concatenate([[0.0], 0.5 * xmax * w * np.exp(-x[1:] ** 2)])
    q = np.zeros((n + 1, x.size))
    dq = np.zeros_like(q)
    q[0] = 1.0 / math.sqrt(w.sum())
    prev = np.zeros(x.size)
    dprev = np.zeros(x.size)
    b_prev = 0.0
    for j in range(n):
        alpha = float(np.sum(w * x * q[j] ** 2))
        r = (x - alpha) * q[j] - b_prev * prev
        dr = q[j] + (x - alpha) * dq[j] - b_prev * dprev
        b = math.sqrt(float(np.sum(w * r * r)))
        prev, dprev = q[j], dq[j]
        q[j + 1], dq[j + 1] = r / b, dr / b
        b_prev = b
    q, dq = q[:n], dq[:n]
    deriv = dq - x * q
    h = 0.5 * (deriv * w) @ deriv.T + 0.5 * (q * w * x * x) @ q.T
    return 0.5 * (h + h.T), q[:, 0].copy()


def _x_parts(kind: Kind, nx: int):
    if kind.name == "delta":
        h, c0 = halfline_basis(nx)
        # even extension normalized on the line: f(0) = q(0) / sqrt(2)
        return h, math.sqrt(math.pi) * 0.5 * np.outer(c0, c0)
    idx = np.arange(0, 2 * nx, 2)
    h = np.diag(idx + 0.5)
    if kind.name == "gaussian":
        v = gaussian_overlap_matrix(2 * nx - 1)[np.ix_(idx, idx)]
    else:
        v = scaled_overlap_matrix(kind.n_scale, 2 * nx)[np.ix_(idx, idx)]
    return h, v


def _direct_energy(lam: float, kind: Kind, nx: int, ny: int, scale: float, vectors=False):
    hx, vx = _x_parts(kind, nx)
    ty, vy = _y_even_parts(ny, scale)
    h = np.kron(hx, np.eye(ny)) + np.kron(np.eye(nx), ty) - lam * np.kron(vx, vy)
    if not vectors:
        return float(eigvalsh(h, subset_by_index=[0, 0])[0])
    vals, vecs = eigh(h, subset_by_index=[0, 0])
    v = vecs[:, 0]
    return float(vals[0]), float(np.linalg.norm(h @ v - vals[0] * v))


def oracle_ground_state(lam: float, kind="gaussian", nx: int = 16, ny: int = 24,
                        tol: float = 1e-4) -> OracleResult:
    """Ground-state energy by Rayleigh-Ritz in a tensor basis, even in x and y.

    x-basis: even oscillator states (gaussian, scaled) or the half-line
    polynomial basis (delta).  y-basis: even Hermite functions of width b,
    with b chosen variationally on the base basis.  The energy is then
    recomputed with both sizes doubled; ``converged`` reports whether the
    two agree to ``tol``.
    """
    if not lam > 0:
        raise ValueError("coupling must be positive")
    kind = parse_kind(kind)
    opt = minimize_scalar(lambda s: _direct_energy(lam, kind, nx, ny, math.exp(s)),
                          bounds=(math.log(0.5), math.log(20.0)), method="bounded",
                          options={"xatol": 1e-3})
    scale = math.exp(opt.x)
    base = _direct_energy(lam, kind, nx, ny, scale)
    energy, residual = _direct_energy(lam, kind, 2 * nx, 2 * ny, scale, vectors=True)
    change = abs(energy - base)
    spec = {"kind": str(kind), "x_functions": 2 * nx, "y_functions": 2 * ny,
            "y_width": scale, "x_basis": "half-line polynomial" if kind.name == "delta"
            else "oscillator"}
    return OracleResult(energy, spec, residual, change <= tol, change)
