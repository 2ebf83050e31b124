"""Boundary crosses, their envelopes, and monotone-convergence checks.

A cross is the data (D, A, G, B) with A on the boundary of D and B on the
boundary of G.  Its envelope is the open set

    {(z, w) in D x G : omega(z, A, D) + omega(w, B, G) < 1},

the natural two-variable extension domain attached to the cross.  The
membership margin is ``1 - omega_D - omega_G``; a pair is inside exactly
when the margin is positive.  Points whose margin is indistinguishable
from zero at the engines' statistical resolution are reported as
indeterminate rather than forced to a boolean.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndeterminateMembershipError, NotNestedError
from .geometry import (
    BoundaryArc,
    BoundarySet,
    PlanarDomain,
    as_complex,
    as_xy,
    intervals_contain,
    merge_intervals,
)
from .measure import measure_values

__all__ = [
    "CrossSpec",
    "EnvelopeSlice",
    "MembershipResult",
    "envelope_membership",
    "envelope_slice",
    "interior_grid",
    "enlarge_boundary_set",
    "check_monotone_convergence",
    "ConvergenceReport",
]


@dataclass(frozen=True)
class CrossSpec:
    """The tuple (D, A, G, B) defining a boundary cross."""

    D: PlanarDomain
    A: BoundarySet
    G: PlanarDomain
    B: BoundarySet

    def __post_init__(self):
        if self.A.total_length <= 0 or self.B.total_length <= 0:
            raise ValueError("A and B must be nonempty with positive length")
        self.A.validate(self.D)
        self.B.validate(self.G)

    def swapped(self) -> "CrossSpec":
        return CrossSpec(self.G, self.B, self.D, self.A)

    def content_key(self) -> str:
        h = hashlib.sha256()
        for part in (self.D.content_key(), self.A.content_key(),
                     self.G.content_key(), self.B.content_key()):
            h.update(part.encode())
        return h.hexdigest()


@dataclass(frozen=True)
class MembershipResult:
    inside: bool
    margin: float
    stderr: float


def envelope_membership(spec: CrossSpec, z, w, cfg_D=None, cfg_G=None) -> MembershipResult:
    """Decide whether (z, w) lies in the envelope of the cross.

    ``cfg_D`` / ``cfg_G`` choose the measure engine per factor (GridConfig,
    WosConfig, or None for the disc closed form).  Raises
    :class:`IndeterminateMembershipError` when |margin| <= 3 * stderr with
    stderr > 0: the caller must refine (more samples or a finer grid).
    """
    fD = measure_values(spec.D, spec.A, cfg_D, [z])
    fG = measure_values(spec.G, spec.B, cfg_G, [w])
    margin = float(1.0 - fD.values[0] - fG.values[0])
    stderr = float(math.hypot(fD.stderr[0], fG.stderr[0]))
    if stderr > 0 and abs(margin) <= 3.0 * stderr:
        raise IndeterminateMembershipError(margin, stderr)
    return MembershipResult(margin > 0.0, margin, stderr)


@dataclass
class EnvelopeSlice:
    """Envelope membership over a grid in one factor, the other point fixed."""

    fixed_factor: str            # "w" (grid ranges over D) or "z" (over G)
    fixed_point: complex
    points: np.ndarray           # (m, 2) interior grid points of the free factor
    margin: np.ndarray           # 1 - omega_D - omega_G per point
    mask: np.ndarray             # margin > 0
    stderr: np.ndarray
    grid_shape: tuple            # (nx, ny) of the generating grid
    meta: dict = field(default_factory=dict)

    def to_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["x", "y", "margin", "mask"])
            for (x, y), mg, mk in zip(self.points, self.margin, self.mask):
                w.writerow([f"{x:.17g}", f"{y:.17g}", f"{mg:.17g}", int(mk)])

    def summary(self) -> dict:
        return {
            "fixed_factor": self.fixed_factor,
            "fixed_point": [self.fixed_point.real, self.fixed_point.imag],
            "count": int(len(self.points)),
            "inside": int(self.mask.sum()),
            "outside": int((~self.mask).sum()),
            "min_margin": float(self.margin.min()) if len(self.margin) else None,
            "max_margin": float(self.margin.max()) if len(self.margin) else None,
            "spec_hash": self.meta.get("spec_hash"),
        }


def interior_grid(domain: PlanarDomain, nx: int, ny: int, clearance: float = 0.0) -> np.ndarray:
    """Regular evaluation grid clipped to the interior of a domain."""
    xmin, xmax, ymin, ymax = domain.bbox
    xs = np.linspace(xmin, xmax, nx + 2)[1:-1]
    ys = np.linspace(ymin, ymax, ny + 2)[1:-1]
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    keep = domain.contains(pts)
    if clearance > 0:
        keep &= domain.distance_to_boundary(pts) >= clearance
    return pts[keep]


def envelope_slice(spec: CrossSpec, fixed_point, grid=(48, 48), fixed_factor: str = "w",
                   cfg_free=None, cfg_fixed=None, clearance: float = None,
                   eval_points=None) -> EnvelopeSlice:
    """Membership mask over one factor with the other point held fixed.

    With ``fixed_factor="w"`` the grid ranges over D and ``fixed_point``
    must lie in G; ``fixed_factor="z"`` is the symmetric operation.  Pass
    ``eval_points`` to override the generated grid.  One measure solve per
    factor is reused across all grid points (fields are cached).
    """
    if fixed_factor == "w":
        free_dom, free_set = spec.D, spec.A
        fix_dom, fix_set = spec.G, spec.B
    elif fixed_factor == "z":
        free_dom, free_set = spec.G, spec.B
        fix_dom, fix_set = spec.D, spec.A
    else:
        raise ValueError("fixed_factor must be 'w' or 'z'")

    if clearance is None:
        spacing = getattr(cfg_free, "spacing", None)
        clearance = 2.0 * spacing if spacing else 0.02 * free_dom.diameter
    if eval_points is None:
        pts = interior_grid(free_dom, grid[0], grid[1], clearance)
    else:
        pts = as_xy(eval_points)

    f_free = measure_values(free_dom, free_set, cfg_free, pts)
    f_fix = measure_values(fix_dom, fix_set, cfg_fixed, [fixed_point])
    margin = 1.0 - f_free.values - f_fix.values[0]
    stderr = np.hypot(f_free.stderr, f_fix.stderr[0])
    fp = complex(as_complex(fixed_point)[0])
    return EnvelopeSlice(
        fixed_factor,
        fp,
        pts,
        margin,
        margin > 0.0,
        stderr,
        tuple(grid),
        meta={"spec_hash": spec.content_key()},
    )


# ---------------------------------------------------------------------------
# shrinking neighborhoods and monotone convergence
# ---------------------------------------------------------------------------


def enlarge_boundary_set(domain: PlanarDomain, boundary_set: BoundarySet,
                         margin: float) -> BoundarySet:
    """Grow every arc by ``margin`` in arc length (clipped, merged, per side).

    On closed curves growth wraps around parameter 0; on open curves (slit
    faces) it clips at the curve ends.  The result contains the input set,
    which makes k -> enlarge(A, 1/k) a shrinking neighborhood family.
    """
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    by_key = {}
    for a in boundary_set.arcs:
        by_key.setdefault((a.curve_id, a.side), []).append(a)
    out = []
    for (cid, side), arcs in sorted(by_key.items()):
        c = domain.curve(cid)
        L = c.length
        iv = [(a.t0 - margin, a.t1 + margin) for a in arcs]
        if c.closed:
            if any(b - a >= L for a, b in iv) or sum(b - a for a, b in iv) >= L:
                merged = [(0.0, L)]
            else:
                pieces = []
                for a, b in iv:
                    a_m, b_m = a % L, b % L
                    if a_m < b_m:
                        pieces.append((a_m, b_m))
                    else:
                        pieces.append((a_m, L))
                        pieces.append((0.0, b_m))
                merged = merge_intervals(pieces)
        else:
            merged = merge_intervals([(max(0.0, a), min(L, b)) for a, b in iv])
        out.extend(BoundaryArc(cid, a, b, side) for a, b in merged if b > a)
    return BoundarySet(out)


def _interval_table(boundary_set: BoundarySet):
    table = {}
    for a in boundary_set.arcs:
        sides = ("plus", "minus") if a.side == "both" else (a.side,)
        for s in sides:
            table.setdefault((a.curve_id, s), []).append((a.t0, a.t1))
    return {k: merge_intervals(v) for k, v in table.items()}


def _set_contains(outer: BoundarySet, inner: BoundarySet) -> bool:
    t_out = _interval_table(outer)
    t_in = _interval_table(inner)
    for key, iv in t_in.items():
        if not intervals_contain(t_out.get(key, []), iv):
            return False
    return True


@dataclass
class ConvergenceReport:
    ks: list
    points: np.ndarray
    values: np.ndarray            # (len(ks), m) measures of the neighborhoods
    limit_values: np.ndarray      # (m,) measure of the target set
    discrepancy: np.ndarray       # (len(ks),) sup over points of |value_k - limit|
    nondecreasing: bool
    discrepancy_decreasing: bool
    slack: float

    @property
    def passed(self) -> bool:
        return self.nondecreasing and self.discrepancy_decreasing

    def to_json(self) -> dict:
        return {
            "ks": list(self.ks),
            "discrepancy": [float(d) for d in self.discrepancy],
            "nondecreasing": self.nondecreasing,
            "discrepancy_decreasing": self.discrepancy_decreasing,
            "slack": self.slack,
            "pass": self.passed,
        }


def check_monotone_convergence(domain: PlanarDomain, boundary_set: BoundarySet,
                               neighborhoods, eval_points, cfg=None,
                               slack: float = None) -> ConvergenceReport:
    """Verify that measures of a shrinking neighborhood family increase to
    the measure of the limit set.

    ``neighborhoods`` maps k to a boundary set, ordered with increasing k
    (decreasing sets); containment  A ⊆ A_{k+1} ⊆ A_k is checked
    structurally and :class:`NotNestedError` raised on violation.  The
    values must be pointwise nondecreasing in k and the sup-discrepancy to
    the limit must shrink, both within ``slack`` (defaults to 1e-8 for
    deterministic engines, 3 * max stderr for Monte Carlo).
    """
    items = sorted(neighborhoods.items()) if isinstance(neighborhoods, dict) else list(neighborhoods)
    ks = [k for k, _ in items]
    sets = [s for _, s in items]
    for (k1, s1), (k2, s2) in zip(items, items[1:]):
        if not _set_contains(s1, s2):
            raise NotNestedError(f"neighborhood k={k2} is not contained in k={k1}")
    for k, s in items:
        if not _set_contains(s, boundary_set):
            raise NotNestedError(f"target set not contained in neighborhood k={k}")

    pts = as_xy(eval_points)
    fields = [measure_values(domain, s, cfg, pts) for s in sets]
    limit = measure_values(domain, boundary_set, cfg, pts)
    values = np.stack([f.values for f in fields])
    max_err = max((float(f.stderr.max()) for f in fields + [limit]), default=0.0)
    if slack is None:
        slack = 3.0 * max_err if max_err > 0 else 1e-8

    nondecr = bool(np.all(np.diff(values, axis=0) >= -slack))
    disc = np.abs(values - limit.values[None, :]).max(axis=1)
    decr = bool(np.all(np.diff(disc) <= slack))
    return ConvergenceReport(ks, pts, values, limit.values, disc, nondecr, decr, slack)
