"""Command-line front end: parameter sweeps and figure data as CSV or JSON.

Exit codes: 0 success, 1 acceptance check failed (``verify`` only),
2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__, _backend
from .basis import BasisConfig
from .errors import NoBoundState, NumericalFailure
from .kernels import hs_bound_gaussian, hs_distance_scaled_to_delta, trace_bs_squared
from .lower_bound import (asymptotic_large, asymptotic_small, expansion_large, expansion_small,
                          delta_lower_bound, gaussian_lower_bound)
from .spectral import assemble_bs_matrix, bound_states, fredholm_det2, oracle_ground_state

SURFACE_HALF_WIDTH_X = 0.25
SURFACE_HALF_WIDTH_Y = 2.5


class ConfigError(Exception):
    """Invalid command-line configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)

    def to_dict(self):
        return {"columns": self.columns, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_dict(cls, d):
        return cls(list(d["columns"]), [tuple(r) for r in d["rows"]])


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a command's output."""

    command: str
    params: dict
    fmt: str = "csv"

    @property
    def digest(self) -> str:
        blob = json.dumps({"command": self.command, "params": self.params, "version": __version__},
                          sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


# ----------------------------------------------------------------- ranges

def _grid(lo, hi, count, log_spaced, name):
    if count is None or count < 1:
        raise ConfigError(f"{name} count must be a positive integer")
    if count > 1 and not hi > lo:
        raise ConfigError(f"{name} range is empty: max must exceed min")
    if log_spaced:
        if not lo > 0:
            raise ConfigError(f"log-spaced {name} range needs a positive minimum")
        return [float(v) for v in np.geomspace(lo, hi, count)]
    return [float(v) for v in np.linspace(lo, hi, count)]


def _int_list(text, name):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{name} must be a comma-separated list of integers") from None
    if not vals or min(vals) < 1:
        raise ConfigError(f"{name} must list positive integers")
    return vals


def _basis(args) -> BasisConfig:
    try:
        return BasisConfig(args.modes, args.quad, args.tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _map(fn, items, workers):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


# -------------------------------------------------------------- commands

def _hs_row(E, rows):
    tr = trace_bs_squared(E, rows=rows)
    bound = hs_bound_gaussian(E)
    if not bound - tr >= 0:
        raise NumericalFailure(f"trace {tr} exceeds its bound {bound} at E={E}")
    return (E, tr, bound, bound - tr)


def cmd_hs_norm(energies, rows=None, workers=1) -> Table:
    if not energies:
        raise ConfigError("no energies requested")
    if any(not e < 0.5 for e in energies):
        raise ConfigError("all energies must lie below 1/2")
    return Table(["E", "trace", "bound", "slack"],
                 _map(partial(_hs_row, rows=rows), energies, workers))


def cmd_lower_bound(lams, which="both") -> Table:
    if not lams:
        raise ConfigError("no couplings requested")
    if which == "asymptotics":
        cols = ["lambda", "asymptotic_large", "asymptotic_small", "expansion_large", "expansion_small"]
        rows = [(l, float(asymptotic_large(l)), float(asymptotic_small(l)),
                 float(expansion_large(l)), float(expansion_small(l))) for l in lams]
        return Table(cols, rows)
    cols, rows = ["lambda"], [[l] for l in lams]
    if which in ("gaussian", "both"):
        cols += ["E", "residual"]
        for r, l in zip(rows, lams):
            s = gaussian_lower_bound(l)
            r += [s.energy, s.residual]
    if which in ("delta", "both"):
        cols += ["E_delta", "residual_delta"]
        for r, l in zip(rows, lams):
            s = delta_lower_bound(l)
            r += [s.energy, s.residual]
    cols += ["asymptotic_large", "asymptotic_small"]
    for r, l in zip(rows, lams):
        r += [float(asymptotic_large(l)), float(asymptotic_small(l))]
    return Table(cols, [tuple(r) for r in rows])


def det2_sign_change(lam, energy, cfg, kind, rel_step=1e-6) -> bool:
    """Whether det2(1 - lam K_E) changes sign across ``energy``.

    det2 itself need not be small at a root: the other factors can be huge
    near threshold, so the sign change is the meaningful check.
    """
    h = rel_step * max(1.0, abs(energy))
    lo, hi = energy - h, min(energy + h, 0.5 * (energy + 0.5))
    d_lo = fredholm_det2(lam, lo, assemble_bs_matrix(lo, cfg, kind))
    d_hi = fredholm_det2(lam, hi, assemble_bs_matrix(hi, cfg, kind))
    return bool(d_lo * d_hi < 0)


def _bound_state_rows(lam, kind, cfg, branches, oracle):
    try:
        found = bound_states(lam, cfg, kind, branches)
    except NoBoundState:
        nan = math.nan
        return [(lam, 0, nan, nan, nan, nan, False, nan, nan, False)]
    rows = []
    for r in found:
        o_e = d = math.nan
        if oracle and r.eigen_index == 0:
            o_e = oracle_ground_state(lam, kind).ground_energy
            d = abs(r.energy - o_e)
        rows.append((lam, r.eigen_index, r.energy, r.bs_eigenvalue, r.principle_residual,
                     r.det2_value, det2_sign_change(lam, r.energy, cfg, kind), o_e, d, True))
    return rows


def cmd_bound_states(lams, kind="gaussian", cfg=None, branches=1, oracle=True, workers=1) -> Table:
    if not lams:
        raise ConfigError("no couplings requested")
    if any(not l > 0 for l in lams):
        raise ConfigError("couplings must be positive")
    cfg = cfg or BasisConfig(32, 64)
    fn = partial(_bound_state_rows, kind=kind, cfg=cfg, branches=branches, oracle=oracle)
    rows = [row for chunk in _map(fn, lams, workers) for row in chunk]
    cols = ["lambda", "branch", "E_b", "mu", "residual", "det2", "det2_sign_change",
            "oracle_energy", "discrepancy", "bound_state"]
    return Table(cols, rows)


def _delta_limit_row(n, E, lam, cfg, e_delta):
    dist = hs_distance_scaled_to_delta(n, E)
    try:
        e_n = bound_states(lam, cfg, ("scaled", n))[0].energy
    except NoBoundState:
        e_n = math.nan
    return (n, dist, e_n, e_delta, abs(e_n - e_delta))


def cmd_delta_limit(n_scales, E=-1.0, lam=1.0, cfg=None, workers=1) -> Table:
    if not n_scales:
        raise ConfigError("no scales requested")
    if not E < 0:
        raise ConfigError("the distance needs E < 0")
    cfg = cfg or BasisConfig(32, 64)
    try:
        e_delta = bound_states(lam, cfg, "delta")[0].energy
    except NoBoundState:
        e_delta = math.nan
    fn = partial(_delta_limit_row, E=E, lam=lam, cfg=cfg, e_delta=e_delta)
    return Table(["n", "hs_distance", "E_b_scaled", "E_b_delta", "gap"],
                 _map(fn, list(n_scales), workers))


def potential_surfaces(n_values, points=41) -> Table:
    """Samples of V_n(x, y) = n exp(-(n^2 x^2 + y^2)) on a fixed grid."""
    if points < 2:
        raise ConfigError("surface grid needs at least two points per axis")
    x = np.linspace(-SURFACE_HALF_WIDTH_X, SURFACE_HALF_WIDTH_X, points)
    y = np.linspace(-SURFACE_HALF_WIDTH_Y, SURFACE_HALF_WIDTH_Y, points)
    rows = []
    for n in n_values:
        for xi in x:
            for yj in y:
                rows.append((n, float(xi), float(yj), float(n * math.exp(-(n * n * xi * xi + yj * yj)))))
    return Table(["n", "x", "y", "V"], rows)


# ---------------------------------------------------------------- output

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else None


def render(tables: dict, cfg: RunConfig, fmt: str) -> dict:
    """Serialize each named table; returns name -> text."""
    out = {}
    for name, t in tables.items():
        if fmt == "csv":
            lines = [",".join(t.columns)] + [",".join(_fmt(v) for v in r) for r in t.rows]
            out[name] = "\n".join(lines) + "\n"
        else:
            doc = {
                "metadata": {"command": cfg.command, "table": name, "config_hash": cfg.digest,
                             "params": cfg.params, "columns": t.columns, "version": __version__,
                             "backend": "compiled" if _backend.COMPILED else "python"},
                "rows": [{c: _json_value(v) for c, v in zip(t.columns, r)} for r in t.rows],
            }
            out[name] = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    return out


def _write(texts: dict, out: str | None, fmt: str):
    if out is None:
        sys.stdout.write("\n".join(texts.values()))
        return
    path = Path(out)
    if not path.parent.exists():
        raise ConfigError(f"output directory {path.parent} does not exist")
    for i, (name, text) in enumerate(texts.items()):
        target = path if i == 0 else path.with_name(f"{path.stem}_{name}.{fmt}")
        target.write_text(text)


def _cached(cfg: RunConfig, cache_dir, compute) -> dict:
    if cache_dir is None:
        return compute()
    d = Path(cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    f = d / f"{cfg.digest}.json"
    if f.exists():
        return {k: Table.from_dict(v) for k, v in json.loads(f.read_text()).items()}
    tables = compute()
    f.write_text(json.dumps({k: t.to_dict() for k, t in tables.items()}, sort_keys=True))
    return tables


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--modes", type=int, default=32, help="oscillator/Hermite modes per direction")
    common.add_argument("--quad", type=int, default=64, help="Gauss-Hermite points for y integrals")
    common.add_argument("--tol", type=float, default=1e-10, help="series truncation tolerance")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--cache-dir", help="reuse results stored under this directory")
    common.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")

    lam = _Parser(add_help=False)
    lam.add_argument("--lambda-min", type=float, default=0.01)
    lam.add_argument("--lambda-max", type=float, default=20.0)
    lam.add_argument("--lambda-count", type=int, default=200)
    lam.add_argument("--log-spaced", action="store_true")

    p = _Parser(prog="bsgauss", description="Birman-Schwinger analysis of Gaussian and delta-line impurities")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("hs-norm", parents=[common], help="trace of the squared kernel against its bound")
    s.add_argument("--e-min", type=float, default=-10.0)
    s.add_argument("--e-max", type=float, default=0.45)
    s.add_argument("--e-count", type=int, default=5)

    s = sub.add_parser("lower-bound", parents=[common, lam], help="spectral lower bound E(lambda)")
    s.add_argument("--which", choices=("gaussian", "delta", "both", "asymptotics"), default="both",
                   help="gaussian or delta-line bound, both, or the closed-form approximations")

    s = sub.add_parser("bound-states", parents=[common, lam], help="bound states from the BS principle")
    s.add_argument("--kind", default="gaussian", help="gaussian, delta or scaled(n)")
    s.add_argument("--branches", type=int, default=1)
    s.add_argument("--no-oracle", action="store_true", help="skip direct diagonalization")

    s = sub.add_parser("delta-limit", parents=[common], help="scaled Gaussians approaching the delta line")
    s.add_argument("--n-scales", default="1,2,4,8,16,32,64")
    s.add_argument("--energy", type=float, default=-1.0, help="energy for the HS distance")
    s.add_argument("--lambda", dest="coupling", type=float, default=1.0)
    s.add_argument("--surface-n", default="15,30,70", help="scales for the potential surfaces")
    s.add_argument("--surface-points", type=int, default=41)
    s.add_argument("--surface-only", action="store_true")

    s = sub.add_parser("verify", help="run the acceptance checks")
    s.add_argument("--only", help="comma-separated check keys, e.g. C1,C6")
    return p


def _run(args) -> int:
    if args.command == "verify":
        from .acceptance import CHECKS, run_all

        keys = [k.strip() for k in args.only.split(",")] if args.only else None
        unknown = set(keys or []) - set(CHECKS)
        if unknown:
            raise ConfigError(f"unknown check keys: {', '.join(sorted(unknown))}")
        results = run_all(keys, sys.stdout)
        failed = [c.key for c in results if not c.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
        return 1 if failed else 0

    if args.workers < 1:
        raise ConfigError("--workers must be positive")
    cfg = _basis(args)
    if args.command == "hs-norm":
        energies = _grid(args.e_min, args.e_max, args.e_count, False, "energy")
        params = {"energies": energies, "rows": None}
        compute = lambda: {"main": cmd_hs_norm(energies, workers=args.workers)}  # noqa: E731
    elif args.command == "lower-bound":
        lams = _grid(args.lambda_min, args.lambda_max, args.lambda_count, args.log_spaced, "lambda")
        params = {"lambdas": lams, "which": args.which}
        compute = lambda: {"main": cmd_lower_bound(lams, args.which)}  # noqa: E731
    elif args.command == "bound-states":
        from .spectral import parse_kind

        lams = _grid(args.lambda_min, args.lambda_max, args.lambda_count, args.log_spaced, "lambda")
        try:
            kind = parse_kind(args.kind)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        params = {"lambdas": lams, "kind": str(kind), "branches": args.branches,
                  "oracle": not args.no_oracle, "basis": asdict(cfg)}
        compute = lambda: {"main": cmd_bound_states(  # noqa: E731
            lams, kind, cfg, args.branches, not args.no_oracle, args.workers)}
    else:
        scales = _int_list(args.n_scales, "--n-scales")
        surf_n = _int_list(args.surface_n, "--surface-n")
        params = {"n_scales": scales, "energy": args.energy, "lambda": args.coupling,
                  "surface_n": surf_n, "surface_points": args.surface_points,
                  "surface_only": args.surface_only, "basis": asdict(cfg)}

        def compute():
            surf = potential_surfaces(surf_n, args.surface_points)
            if args.surface_only:
                return {"surfaces": surf}
            return {"main": cmd_delta_limit(scales, args.energy, args.coupling, cfg, args.workers),
                    "surfaces": surf}

    run_cfg = RunConfig(args.command, params, args.format)
    tables = _cached(run_cfg, args.cache_dir, compute)
    _write(render(tables, run_cfg, args.format), args.out, args.format)
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _run(args)
    except ConfigError as exc:
        print(f"bsgauss: configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"bsgauss: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"bsgauss: configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
