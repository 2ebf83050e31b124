"""Harmonic measure engines and their cross-validation.

The harmonic measure of a boundary set A relative to a domain D is the
harmonic function with boundary values 0 on A and 1 on the rest of the
boundary; probabilistically, the chance that Brownian motion started at z
leaves D through the complement of A.  Three engines compute it:

* closed forms on the unit disc (conformal-shift of arc angles) and the
  upper half plane (subtended angles of real intervals);
* a cut-cell five-point grid solver (:func:`grid_measure`);
* a walk-on-spheres Monte Carlo estimator (:func:`wos_measure`).

The closed forms accept an empty set (the measure is then identically 1);
the domain engines reject zero-length sets instead of silently returning
the constant.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import _fdgrid, _wos
from ._bdata import BoundaryIndicator
from .errors import PointOnBoundaryError
from .geometry import BoundarySet, PlanarDomain, as_complex, as_xy

__all__ = [
    "MeasureField",
    "GridConfig",
    "WosConfig",
    "disc_arc_measure",
    "halfplane_interval_measure",
    "grid_measure",
    "wos_measure",
    "measure_values",
    "cross_validate",
    "CrossValidationReport",
    "clear_caches",
]


@dataclass(frozen=True)
class GridConfig:
    """Settings for the finite-difference engine.

    ``spacing`` must resolve every slit (at most half the smallest
    slit-to-boundary clearance).  ``max_iters`` counts refinement rounds of
    the linear solve; the contract is ``residual_tol`` on the diagonally
    normalized equations.
    """

    spacing: float
    max_iters: int = 25
    residual_tol: float = 1e-10

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")


@dataclass(frozen=True)
class WosConfig:
    """Settings for the walk-on-spheres engine.

    ``epsilon_shell`` defaults to 1e-4 times the domain diameter when left
    as None.  Identical (inputs, seed) give bit-identical fields for any
    thread count.
    """

    samples: int
    seed: int = 0
    epsilon_shell: float | None = None
    max_steps: int = 10_000

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.epsilon_shell is not None and not self.epsilon_shell > 0:
            raise ValueError("epsilon_shell must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")

    def resolve_epsilon(self, domain: PlanarDomain) -> float:
        return self.epsilon_shell if self.epsilon_shell is not None else 1e-4 * domain.diameter


@dataclass
class MeasureField:
    """Sampled measure values with per-point standard errors."""

    points: np.ndarray           # (m, 2)
    values: np.ndarray           # (m,)
    stderr: np.ndarray           # (m,) zeros for deterministic engines
    engine: str                  # "closed_form" | "grid" | "wos"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = as_xy(self.points)
        self.values = np.asarray(self.values, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        if np.any((self.values < -1e-9) | (self.values > 1 + 1e-9)):
            raise ValueError("measure values must lie in [0, 1]")
        self.values = np.clip(self.values, 0.0, 1.0)
        if np.any(self.stderr < 0):
            raise ValueError("stderr must be nonnegative")
        if self.engine == "closed_form" and np.any(self.stderr != 0):
            raise ValueError("closed-form fields carry zero stderr")

    def to_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["x", "y", "value", "stderr", "engine"])
            for (x, y), v, s in zip(self.points, self.values, self.stderr):
                w.writerow([f"{x:.17g}", f"{y:.17g}", f"{v:.17g}", f"{s:.17g}", self.engine])

    def __len__(self):
        return len(self.values)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _normalize_arcs(arcs):
    out = []
    total = 0.0
    twopi = 2.0 * math.pi
    for t0, t1 in arcs:
        span = t1 - t0
        if span <= 0:
            raise ValueError("arc needs t1 > t0")
        if span > twopi + 1e-12:
            raise ValueError("arc longer than the full circle")
        total += span
        out.append((t0 % twopi, min(span, twopi)))
    if total > twopi + 1e-9:
        raise ValueError("arcs overlap: total angle exceeds 2*pi")
    starts = sorted((s, sp) for s, sp in out)
    for (s0, sp0), (s1, _) in zip(starts, starts[1:]):
        if s0 + sp0 > s1 + 1e-12:
            raise ValueError("arcs overlap")
    if len(starts) > 1:
        s_last, sp_last = starts[-1]
        if s_last + sp_last - twopi > starts[0][0] + 1e-12:
            raise ValueError("arcs overlap (wrap)")
    return out


def disc_arc_measure(z, arcs):
    """Harmonic measure of the complement of circular arcs, unit disc.

    ``arcs`` is an iterable of (theta0, theta1) counterclockwise angle
    intervals forming the set A; the returned value is the measure with
    boundary data 0 on A and 1 elsewhere, evaluated exactly through the
    disc automorphism sending z to the origin.  An empty collection gives
    the constant 1.
    """
    zz = as_complex(z)
    scalar = np.isscalar(z) or (isinstance(z, complex)) or getattr(z, "shape", None) == ()
    if np.any(np.abs(zz) >= 1.0 - 1e-12):
        raise PointOnBoundaryError("evaluation point must satisfy |z| < 1 - 1e-12")
    hit = np.zeros(zz.shape)
    twopi = 2.0 * math.pi
    for start, span in _normalize_arcs(arcs):
        if span >= twopi - 1e-15:
            hit += 1.0
            continue
        e0 = np.exp(1j * start)
        e1 = np.exp(1j * (start + span))
        w0 = (e0 - zz) / (1.0 - np.conj(zz) * e0)
        w1 = (e1 - zz) / (1.0 - np.conj(zz) * e1)
        ang = np.mod(np.angle(w1) - np.angle(w0), twopi)
        hit += ang / twopi
    vals = np.clip(1.0 - hit, 0.0, 1.0)
    return float(vals[0]) if scalar else vals


def halfplane_interval_measure(z, intervals):
    """Harmonic measure of the complement of real intervals, upper half plane.

    omega(z) = 1 - (1/pi) * sum of angles the intervals subtend at z.
    """
    zz = as_complex(z)
    scalar = np.isscalar(z) or isinstance(z, complex) or getattr(z, "shape", None) == ()
    if np.any(zz.imag <= 0.0):
        raise PointOnBoundaryError("evaluation point must have positive imaginary part")
    iv = sorted((float(a), float(b)) for a, b in intervals)
    for (a0, b0), (a1, _) in zip(iv, iv[1:]):
        if b0 > a1 + 1e-15:
            raise ValueError("intervals overlap")
    total = np.zeros(zz.shape)
    for a, b in iv:
        if not b > a:
            raise ValueError("interval needs b > a")
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ValueError("intervals must be bounded")
        total += np.angle((b - zz) / (a - zz))
    vals = np.clip(1.0 - total / math.pi, 0.0, 1.0)
    return float(vals[0]) if scalar else vals


# ---------------------------------------------------------------------------
# domain engines
# ---------------------------------------------------------------------------


def _require_interior(domain, pts):
    ok = domain.contains(pts)
    if not ok.all():
        bad = np.flatnonzero(~ok).tolist()
        raise ValueError(f"evaluation points must be interior to the domain; bad indices {bad}")


def grid_measure(domain: PlanarDomain, boundary_set: BoundarySet, cfg: GridConfig,
                 eval_points) -> MeasureField:
    """Five-point cut-cell solution of the measure, interpolated to points."""
    pts = as_xy(eval_points)
    _require_interior(domain, pts)
    sol = _fdgrid.solve_cached(domain, boundary_set, cfg.spacing, cfg.residual_tol, cfg.max_iters)
    vals = sol.interpolate(pts)
    return MeasureField(
        pts,
        vals,
        np.zeros(len(pts)),
        "grid",
        meta={"spacing": cfg.spacing, "residual": sol.residual},
    )


def wos_measure(domain: PlanarDomain, boundary_set: BoundarySet, cfg: WosConfig,
                eval_points, n_threads: int = 1) -> MeasureField:
    """Walk-on-spheres estimate: the fraction of walks exiting off the set.

    Exits are sampled once per (domain, config, points) and scored against
    the boundary set, so re-scoring different sets reuses the same walks.
    """
    pts = as_xy(eval_points)
    indicator = BoundaryIndicator(domain, boundary_set)
    eps = cfg.resolve_epsilon(domain)
    exits = _wos.sample_exits_cached(
        domain, pts, cfg.samples, cfg.seed, eps, cfg.max_steps, n_threads
    )
    in_set = np.zeros(exits.curve.shape, dtype=bool)
    for i in range(len(pts)):
        in_set[i] = indicator.contains(exits.curve[i], exits.param[i], exits.side[i])
    p = 1.0 - in_set.mean(axis=1)
    stderr = np.sqrt(p * (1.0 - p) / cfg.samples)
    return MeasureField(
        pts,
        p,
        stderr,
        "wos",
        meta={
            "samples": cfg.samples,
            "seed": cfg.seed,
            "epsilon_shell": eps,
            "resampled": exits.resampled,
        },
    )


def measure_values(domain: PlanarDomain, boundary_set: BoundarySet, cfg, eval_points,
                   n_threads: int = 1) -> MeasureField:
    """Dispatch on config type: GridConfig, WosConfig, or None for closed form.

    The closed form applies only to domains that expose an angular
    parameterization (``closed_form_kind == "disc"``).
    """
    if isinstance(cfg, GridConfig):
        return grid_measure(domain, boundary_set, cfg, eval_points)
    if isinstance(cfg, WosConfig):
        return wos_measure(domain, boundary_set, cfg, eval_points, n_threads)
    if cfg is None:
        if getattr(domain, "closed_form_kind", None) != "disc":
            raise ValueError("closed form requires a disc fixture domain")
        pts = as_xy(eval_points)
        _require_interior(domain, pts)
        arcs = domain.angles_of_set(boundary_set)
        vals = disc_arc_measure(pts[:, 0] + 1j * pts[:, 1], arcs)
        return MeasureField(pts, np.atleast_1d(vals), np.zeros(len(pts)), "closed_form")
    raise TypeError(f"unsupported engine config {cfg!r}")


# ---------------------------------------------------------------------------
# cross-validation
# ---------------------------------------------------------------------------


@dataclass
class CrossValidationReport:
    points: np.ndarray
    columns: dict                 # engine name -> values array
    stderr: dict                  # engine name -> stderr array
    discrepancy: np.ndarray       # max pairwise |difference| per point
    threshold: np.ndarray         # allowed discrepancy per point
    flags: np.ndarray             # True where discrepancy exceeds threshold
    grid_error_budget: float

    @property
    def passed(self) -> bool:
        return not bool(self.flags.any())

    def to_json(self) -> dict:
        rows = []
        for i, (x, y) in enumerate(self.points):
            rows.append(
                {
                    "x": x,
                    "y": y,
                    "values": {k: float(v[i]) for k, v in self.columns.items()},
                    "discrepancy": float(self.discrepancy[i]),
                    "threshold": float(self.threshold[i]),
                    "flagged": bool(self.flags[i]),
                }
            )
        return {
            "engines": sorted(self.columns),
            "grid_error_budget": self.grid_error_budget,
            "points": rows,
            "pass": self.passed,
        }


def cross_validate(domain: PlanarDomain, boundary_set: BoundarySet, eval_points,
                   grid_cfg: GridConfig | None = None, wos_cfg: WosConfig | None = None,
                   reference=None, grid_error_budget: float = 5e-3) -> CrossValidationReport:
    """Run every applicable engine and flag disagreements.

    ``reference`` may be a callable mapping complex points to exact values;
    disc fixtures get the closed form automatically.  Points are flagged
    where any pair of engines differs by more than ``3*stderr`` plus the
    grid error budget.
    """
    pts = as_xy(eval_points)
    columns, errs = {}, {}
    if grid_cfg is not None:
        f = grid_measure(domain, boundary_set, grid_cfg, pts)
        columns["grid"], errs["grid"] = f.values, f.stderr
    if wos_cfg is not None:
        f = wos_measure(domain, boundary_set, wos_cfg, pts)
        columns["wos"], errs["wos"] = f.values, f.stderr
    if reference is not None:
        vals = np.asarray(reference(pts[:, 0] + 1j * pts[:, 1]), dtype=float)
        columns["reference"], errs["reference"] = vals, np.zeros(len(pts))
    elif getattr(domain, "closed_form_kind", None) == "disc":
        f = measure_values(domain, boundary_set, None, pts)
        columns["closed_form"], errs["closed_form"] = f.values, f.stderr
    if len(columns) < 2:
        raise ValueError("cross-validation needs at least two applicable engines")

    names = sorted(columns)
    disc = np.zeros(len(pts))
    thr = np.full(len(pts), np.inf)
    excess = np.full(len(pts), -np.inf)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            d = np.abs(columns[a] - columns[b])
            t = 3.0 * np.hypot(errs[a], errs[b]) + grid_error_budget
            upd = d - t > excess
            excess = np.where(upd, d - t, excess)
            disc = np.where(upd, d, disc)
            thr = np.where(upd, t, thr)
    flags = excess > 0
    return CrossValidationReport(pts, columns, errs, disc, thr, flags, grid_error_budget)


def clear_caches():
    """Drop cached grid solutions and walk exits (e.g. between test sessions)."""
    _fdgrid.clear_cache()
    _wos.clear_cache()
