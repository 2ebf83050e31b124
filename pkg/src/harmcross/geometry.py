"""Planar domains bounded by polylines, with two-sided slit arcs.

A domain is an open set ``D = interior(outer) - closures(holes) - slits``.
Outer and hole curves are closed simple polylines; slits are open simple
polylines strictly inside the domain.  Boundary subsets are finite unions
of arc-length intervals on those curves, side-aware on slits (a slit has
two addressable faces, ``plus`` and ``minus``, named by the sign of the
cross product of the slit tangent with the offset to the query point).

All values are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AmbiguousPointError, InvalidSetError

__all__ = [
    "Curve",
    "PlanarDomain",
    "BoundaryArc",
    "BoundarySet",
    "NearestBoundary",
    "PointType",
    "classify_point",
    "arc_length",
    "find_extendible_points",
    "nearest_boundary",
    "both_faces",
    "domain_to_json",
    "domain_from_json",
    "boundary_set_to_json",
    "boundary_set_from_json",
]

# Pairwise simplicity checks are O(n^2); beyond this vertex count only the
# structural invariants are enforced at construction time.
_SIMPLICITY_LIMIT = 4096


def as_xy(points) -> np.ndarray:
    """Coerce complex scalars/arrays or (n, 2) real data to an (n, 2) array."""
    a = np.asarray(points)
    if np.iscomplexobj(a):
        a = np.stack([a.real, a.imag], axis=-1)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    if a.shape[-1] != 2:
        raise ValueError(f"expected points with 2 coordinates, got shape {a.shape}")
    return a


def as_complex(points) -> np.ndarray:
    """Coerce to a 1-d complex array; real input is read as real-axis points,
    except (n, 2) arrays which are xy pairs."""
    a = np.asarray(points)
    if np.iscomplexobj(a):
        return np.atleast_1d(a.astype(complex))
    if a.ndim == 2 and a.shape[1] == 2:
        a = np.asarray(a, dtype=float)
        return a[:, 0] + 1j * a[:, 1]
    return np.atleast_1d(a.astype(complex))


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _segments_cross(a0, a1, b0, b1) -> np.ndarray:
    """Proper-crossing test for segment batches (endpoint contact excluded)."""
    o1 = _orient(a0[:, 0], a0[:, 1], a1[:, 0], a1[:, 1], b0[:, 0], b0[:, 1])
    o2 = _orient(a0[:, 0], a0[:, 1], a1[:, 0], a1[:, 1], b1[:, 0], b1[:, 1])
    o3 = _orient(b0[:, 0], b0[:, 1], b1[:, 0], b1[:, 1], a0[:, 0], a0[:, 1])
    o4 = _orient(b0[:, 0], b0[:, 1], b1[:, 0], b1[:, 1], a1[:, 0], a1[:, 1])
    return (o1 * o2 < 0) & (o3 * o4 < 0)


def _point_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray):
    """Distances from m points to s segments.

    Returns (dist (m, s), t (m, s)) where t is the clamped projection
    parameter along each segment.
    """
    p = points[:, None, :]
    ab = (b - a)[None, :, :]
    ap = p - a[None, :, :]
    denom = np.einsum("msk,msk->ms", ab, ab)
    denom = np.where(denom == 0.0, 1.0, denom)
    t = np.clip(np.einsum("msk,msk->ms", ap, ab) / denom, 0.0, 1.0)
    foot = a[None, :, :] + t[:, :, None] * ab
    d = np.linalg.norm(p - foot, axis=2)
    return d, t


def _points_in_polygon(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Even-odd inclusion test, vectorized over points, chunked over edges."""
    px, py = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    chunk = max(1, int(4e6 // max(len(points), 1)))
    for s in range(0, len(a), chunk):
        ax, ay = a[s : s + chunk, 0][None], a[s : s + chunk, 1][None]
        bx, by = b[s : s + chunk, 0][None], b[s : s + chunk, 1][None]
        crosses = (ay > py[:, None]) != (by > py[:, None])
        with np.errstate(divide="ignore", invalid="ignore"):
            xhit = ax + (py[:, None] - ay) * (bx - ax) / (by - ay)
        hit = crosses & (px[:, None] < xhit)
        inside ^= (np.count_nonzero(hit, axis=1) % 2).astype(bool)
    return inside


class Curve:
    """Simple polyline, parameterized by arc length.

    ``closed=True`` curves must not repeat the first vertex; the closing
    segment is implicit.
    """

    def __init__(self, vertices, closed: bool = False, validate: bool = True):
        v = as_xy(vertices)
        if closed and np.allclose(v[0], v[-1]):
            v = v[:-1]
        if len(v) < (3 if closed else 2):
            raise ValueError("curve needs at least 2 vertices (3 if closed)")
        self.vertices = v
        self.vertices.setflags(write=False)
        self.closed = bool(closed)

        a = v
        b = np.vstack([v[1:], v[:1]]) if closed else v[1:]
        if not closed:
            a = v[:-1]
        self._seg_a = a
        self._seg_b = b
        seg = b - a
        self._seg_len = np.linalg.norm(seg, axis=1)
        if np.any(self._seg_len == 0.0):
            raise ValueError("consecutive vertices must be distinct")
        self._cum = np.concatenate([[0.0], np.cumsum(self._seg_len)])
        self.length = float(self._cum[-1])

        if validate and len(v) <= _SIMPLICITY_LIMIT:
            self._check_simple()

    # -- parameterization ------------------------------------------------

    def point_at(self, s):
        """Point(s) at arc-length parameter s (wrapped modulo length if closed)."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.closed:
            s = np.mod(s, self.length)
        else:
            s = np.clip(s, 0.0, self.length)
        idx = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self._seg_len) - 1)
        local = (s - self._cum[idx]) / self._seg_len[idx]
        return self._seg_a[idx] + local[:, None] * (self._seg_b[idx] - self._seg_a[idx])

    def tangent_at(self, s):
        """Unit tangent(s) of the segment containing parameter s."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.closed:
            s = np.mod(s, self.length)
        idx = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self._seg_len) - 1)
        t = self._seg_b[idx] - self._seg_a[idx]
        return t / np.linalg.norm(t, axis=1)[:, None]

    def signed_area(self) -> float:
        if not self.closed:
            raise ValueError("signed area requires a closed curve")
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @property
    def segment_count(self) -> int:
        return len(self._seg_len)

    def segment_param_start(self) -> np.ndarray:
        return self._cum[:-1]

    # -- validation -------------------------------------------------------

    def _check_simple(self):
        a, b = self._seg_a, self._seg_b
        n = len(a)
        idx_i, idx_j = np.triu_indices(n, k=2)
        if self.closed and n > 2:
            keep = ~((idx_i == 0) & (idx_j == n - 1))
            idx_i, idx_j = idx_i[keep], idx_j[keep]
        chunk = 2_000_000
        for s in range(0, len(idx_i), chunk):
            i = idx_i[s : s + chunk]
            j = idx_j[s : s + chunk]
            if np.any(_segments_cross(a[i], b[i], a[j], b[j])):
                raise ValueError("polyline is not simple (segments cross)")
        # Non-adjacent endpoint contact also breaks simplicity.
        d, _ = _point_segment_distance(self.vertices, a, b)
        n_v = len(self.vertices)
        for vi in range(n_v):
            adj = {vi - 1, vi} if not self.closed else {(vi - 1) % n, vi % n}
            row = d[vi].copy()
            for s_idx in adj:
                if 0 <= s_idx < n:
                    row[s_idx] = np.inf
            if row.min() == 0.0:
                raise ValueError("polyline is not simple (vertex touches another segment)")

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"Curve({len(self.vertices)} vertices, {kind}, length={self.length:.6g})"


class PointType(Enum):
    """Local shape of the domain at a boundary point."""

    ONE_SIDED = "one_sided"   # the domain fills one side (outer / hole curves)
    TWO_SIDED = "two_sided"   # slit interior: the domain lies on both sides
    NOT_BOUNDARY = "not_boundary"


@dataclass(frozen=True)
class NearestBoundary:
    distance: float
    curve_id: str
    param: float
    side: str          # "plus" | "minus" for slits, "n/a" otherwise
    point: tuple       # foot point (x, y)


class PlanarDomain:
    """Open planar set bounded by an outer curve, holes, and slits."""

    def __init__(self, outer: Curve, holes=(), slits=(), validate: bool = True):
        if not outer.closed:
            raise ValueError("outer curve must be closed")
        if outer.signed_area() <= 0:
            raise ValueError("outer curve must be positively oriented")
        self.outer = outer
        self.holes = tuple(holes)
        self.slits = tuple(slits)
        for h in self.holes:
            if not h.closed:
                raise ValueError("hole curves must be closed")
        for s in self.slits:
            if s.closed:
                raise ValueError("slit curves must be open polylines")

        self._ids = ["outer"] + [f"hole:{i}" for i in range(len(self.holes))] + [
            f"slit:{i}" for i in range(len(self.slits))
        ]
        self._curves = [self.outer, *self.holes, *self.slits]
        self._slit_offset = 1 + len(self.holes)

        seg_a, seg_b, seg_curve, seg_t0 = [], [], [], []
        for ci, c in enumerate(self._curves):
            seg_a.append(c._seg_a)
            seg_b.append(c._seg_b)
            seg_curve.append(np.full(c.segment_count, ci))
            seg_t0.append(c.segment_param_start())
        self._seg_a = np.vstack(seg_a)
        self._seg_b = np.vstack(seg_b)
        self._seg_curve = np.concatenate(seg_curve)
        self._seg_t0 = np.concatenate(seg_t0)
        self._seg_len = np.linalg.norm(self._seg_b - self._seg_a, axis=1)

        allv = np.vstack([c.vertices for c in self._curves])
        self.bbox = (allv[:, 0].min(), allv[:, 0].max(), allv[:, 1].min(), allv[:, 1].max())
        self.diameter = float(math.hypot(self.bbox[1] - self.bbox[0], self.bbox[3] - self.bbox[2]))

        if validate:
            self._check_structure()

    # -- identity ---------------------------------------------------------

    @property
    def curve_ids(self):
        return tuple(self._ids)

    def curve(self, curve_id: str) -> Curve:
        return self._curves[self._ids.index(curve_id)]

    def content_key(self) -> str:
        h = hashlib.sha256()
        for cid, c in zip(self._ids, self._curves):
            h.update(cid.encode())
            h.update(np.ascontiguousarray(c.vertices).tobytes())
            h.update(b"C" if c.closed else b"O")
        return h.hexdigest()

    # -- geometry queries ---------------------------------------------------

    def contains(self, points) -> np.ndarray:
        """Even-odd interior test (slits excluded as null sets)."""
        pts = as_xy(points)
        inside = _points_in_polygon(pts, self.outer.vertices)
        for hcurve in self.holes:
            inside &= ~_points_in_polygon(pts, hcurve.vertices)
        return inside

    def distance_to_boundary(self, points) -> np.ndarray:
        pts = as_xy(points)
        out = np.full(len(pts), np.inf)
        chunk = max(1, int(4e6 // max(len(self._seg_a), 1)))
        for s in range(0, len(pts), chunk):
            d, _ = _point_segment_distance(pts[s : s + chunk], self._seg_a, self._seg_b)
            out[s : s + chunk] = d.min(axis=1)
        return out

    def nearest_boundary(self, z) -> NearestBoundary:
        pts = as_xy(z)
        if len(pts) != 1:
            raise ValueError("nearest_boundary takes a single point")
        d, t = _point_segment_distance(pts, self._seg_a, self._seg_b)
        d, t = d[0], t[0]
        dmin = d.min()
        tie = dmin + 1e-12 * max(self.diameter, 1.0)
        cand = np.flatnonzero(d <= tie)
        # Tie-break: lexicographically smallest curve id, then smallest parameter.
        params = self._seg_t0[cand] + t[cand] * self._seg_len[cand]
        pick = min(
            range(len(cand)),
            key=lambda i: (self._ids[self._seg_curve[cand[i]]], params[i]),
        )
        best = int(cand[pick])
        tb = t[best]
        param = float(self._seg_t0[best] + tb * self._seg_len[best])
        ci = int(self._seg_curve[best])
        curve_id = self._ids[ci]
        foot = self._seg_a[best] + tb * (self._seg_b[best] - self._seg_a[best])
        side = "n/a"
        if ci >= self._slit_offset:
            tang = self._seg_b[best] - self._seg_a[best]
            w = pts[0] - foot
            side = "plus" if (tang[0] * w[1] - tang[1] * w[0]) > 0 else "minus"
        return NearestBoundary(float(dmin), curve_id, param, side, (float(foot[0]), float(foot[1])))

    # -- validation ---------------------------------------------------------

    def _check_structure(self):
        curves = self._curves
        # Pairwise disjointness of distinct curves (no crossings, no touching).
        for i in range(len(curves)):
            for j in range(i + 1, len(curves)):
                if self._curves_touch(curves[i], curves[j]):
                    raise ValueError(
                        f"boundary pieces {self._ids[i]} and {self._ids[j]} intersect"
                    )
        # Holes and slits interior to the outer curve, outside each other.
        for i, c in enumerate(curves[1:], start=1):
            if not _points_in_polygon(c.vertices, self.outer.vertices).all():
                raise ValueError(f"{self._ids[i]} is not interior to the outer curve")
            for j, hcurve in enumerate(self.holes):
                if 1 + j == i:
                    continue
                if _points_in_polygon(c.vertices, hcurve.vertices).any():
                    raise ValueError(f"{self._ids[i]} meets hole:{j}")

    @staticmethod
    def _curves_touch(c1: Curve, c2: Curve) -> bool:
        n1, n2 = c1.segment_count, c2.segment_count
        i = np.repeat(np.arange(n1), n2)
        j = np.tile(np.arange(n2), n1)
        chunk = 2_000_000
        for s in range(0, len(i), chunk):
            ii, jj = i[s : s + chunk], j[s : s + chunk]
            if np.any(_segments_cross(c1._seg_a[ii], c1._seg_b[ii], c2._seg_a[jj], c2._seg_b[jj])):
                return True
        d, _ = _point_segment_distance(c1.vertices, c2._seg_a, c2._seg_b)
        if d.min() == 0.0:
            return True
        d, _ = _point_segment_distance(c2.vertices, c1._seg_a, c1._seg_b)
        return bool(d.min() == 0.0)

    def check_connectivity(self, expected: int = 1, resolution: int = 96) -> int:
        """Flood-fill count of connected components on a coarse probe grid.

        Slit cuts are respected.  Resolution-limited: thin passages below
        the probe spacing may disconnect spuriously.
        """
        from ._fdgrid import count_components

        n = count_components(self, resolution)
        if n != expected:
            raise ValueError(f"domain has {n} components on the probe grid, expected {expected}")
        return n

    def __repr__(self):
        return (
            f"PlanarDomain(outer={self.outer.segment_count} segs, "
            f"{len(self.holes)} holes, {len(self.slits)} slits)"
        )


@dataclass(frozen=True)
class BoundaryArc:
    """Arc-length interval on one boundary curve.

    ``side`` is meaningful only on slits; arcs on one-sided curves use
    ``"both"``.  Intervals never wrap: split wrap-around arcs in two.
    """

    curve_id: str
    t0: float
    t1: float
    side: str = "both"

    def __post_init__(self):
        if self.side not in ("both", "plus", "minus"):
            raise ValueError(f"bad side {self.side!r}")
        if not (self.t1 > self.t0):
            raise ValueError("arc interval must have positive length (t1 > t0)")

    @property
    def length(self) -> float:
        return self.t1 - self.t0


class BoundarySet:
    """Finite union of non-overlapping boundary arcs."""

    def __init__(self, arcs):
        self.arcs = tuple(arcs)
        for a in self.arcs:
            if not isinstance(a, BoundaryArc):
                raise TypeError("BoundarySet takes BoundaryArc entries")
        self._check_overlap()

    def _check_overlap(self):
        groups = {}
        for a in self.arcs:
            sides = ("plus", "minus") if a.side == "both" else (a.side,)
            for s in sides:
                groups.setdefault((a.curve_id, s), []).append((a.t0, a.t1))
        for (cid, s), iv in groups.items():
            iv.sort()
            for (a0, a1), (b0, b1) in zip(iv, iv[1:]):
                if b0 < a1 - 1e-15:
                    raise InvalidSetError(f"overlapping arcs on {cid} ({s} side)")

    @property
    def total_length(self) -> float:
        return float(sum(a.length for a in self.arcs))

    def on_curve(self, curve_id: str):
        return tuple(a for a in self.arcs if a.curve_id == curve_id)

    def validate(self, domain: PlanarDomain):
        """Check curve references and parameter ranges against a domain."""
        for a in self.arcs:
            if a.curve_id not in domain.curve_ids:
                raise InvalidSetError(f"unknown curve {a.curve_id!r}")
            c = domain.curve(a.curve_id)
            if a.t1 > c.length + 1e-9 * max(c.length, 1.0):
                raise InvalidSetError(
                    f"arc [{a.t0}, {a.t1}] exceeds length {c.length:.6g} of {a.curve_id}"
                )
            if a.t0 < -1e-12:
                raise InvalidSetError("arc starts before parameter 0")
            if not a.curve_id.startswith("slit:") and a.side != "both":
                raise InvalidSetError("arcs on one-sided curves must use side='both'")
        return self

    def content_key(self) -> str:
        h = hashlib.sha256()
        for a in sorted(self.arcs, key=lambda a: (a.curve_id, a.side, a.t0)):
            h.update(f"{a.curve_id}|{a.side}|{a.t0:.17g}|{a.t1:.17g};".encode())
        return h.hexdigest()

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def __repr__(self):
        return f"BoundarySet({len(self.arcs)} arcs, length={self.total_length:.6g})"


def both_faces(curve_id: str, t0: float, t1: float):
    """The pair of single-face arcs covering both sides of a slit interval."""
    return [BoundaryArc(curve_id, t0, t1, "plus"), BoundaryArc(curve_id, t0, t1, "minus")]


# ---------------------------------------------------------------------------
# interval helpers (parameter sets on a single curve)
# ---------------------------------------------------------------------------


def merge_intervals(intervals):
    iv = sorted((float(a), float(b)) for a, b in intervals if b > a)
    out = []
    for a, b in iv:
        if out and a <= out[-1][1] + 1e-15:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def intersect_intervals(u, v):
    out = []
    for a, b in u:
        for c, d in v:
            lo, hi = max(a, c), min(b, d)
            if hi > lo:
                out.append((lo, hi))
    return merge_intervals(out)


def intervals_measure(u) -> float:
    return float(sum(b - a for a, b in u))


def intervals_contain(outer_iv, inner_iv, tol=1e-12) -> bool:
    """True if the union of inner_iv is covered by the union of outer_iv."""
    rem = list(inner_iv)
    for a, b in merge_intervals(outer_iv):
        rem = [
            piece
            for c, d in rem
            for piece in ((c, min(d, a)), (max(c, b), d))
            if piece[1] > piece[0] + tol
        ]
    return not rem


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def classify_point(domain: PlanarDomain, zeta, tol: float) -> PointType:
    """Classify a boundary point as one-sided, two-sided, or not on the boundary.

    Raises :class:`AmbiguousPointError` when the point sits within ``tol``
    of two distinct boundary pieces or of a slit endpoint.  ``tol`` must be
    positive and below the minimum feature separation of the domain.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    pt = as_xy(zeta)
    hits = []
    for cid, c in zip(domain._ids, domain._curves):
        d, t = _point_segment_distance(pt, c._seg_a, c._seg_b)
        j = int(np.argmin(d[0]))
        if d[0, j] <= tol:
            param = c.segment_param_start()[j] + t[0, j] * c._seg_len[j]
            hits.append((cid, float(d[0, j]), float(param), c))
    if not hits:
        return PointType.NOT_BOUNDARY
    if len(hits) > 1:
        ids = ", ".join(h[0] for h in hits)
        raise AmbiguousPointError(f"point within tol of several boundary pieces: {ids}")
    cid, _, param, c = hits[0]
    if cid.startswith("slit:"):
        if param <= tol or param >= c.length - tol:
            raise AmbiguousPointError(f"point within tol of an endpoint of {cid}")
        return PointType.TWO_SIDED
    return PointType.ONE_SIDED


def arc_length(boundary_set: BoundarySet) -> float:
    """Total length of a boundary set (additive over its disjoint arcs)."""
    return boundary_set.total_length


def nearest_boundary(domain: PlanarDomain, z) -> NearestBoundary:
    """Nearest boundary point with curve reference, parameter, and slit side.

    Ties are broken toward the lexicographically smallest curve id, then
    the smallest parameter.
    """
    return domain.nearest_boundary(z)


def find_extendible_points(domain: PlanarDomain, boundary_set: BoundarySet, tol_len=None) -> BoundarySet:
    """Sub-arcs of the set through which two-sided extension can cross.

    A point qualifies when some open two-sided curve through it contains
    the whole trace of the set on its slit and misses the set only in
    length at most ``tol_len``.  Per slit this reduces to: the interval
    hull of the set's trace, minus the part covered from *both* faces,
    must have length at most ``tol_len``.  One-sided arcs never qualify.

    ``tol_len`` defaults to ``1e-9 * domain.diameter`` (the numerical
    stand-in for "zero length").
    """
    boundary_set.validate(domain)
    if tol_len is None:
        tol_len = 1e-9 * domain.diameter
    if tol_len < 0:
        raise ValueError("tol_len must be nonnegative")

    _check_uniform_kind(domain, boundary_set)

    picked = []
    for si in range(len(domain.slits)):
        cid = f"slit:{si}"
        arcs = boundary_set.on_curve(cid)
        if not arcs:
            continue
        plus = merge_intervals(
            [(a.t0, a.t1) for a in arcs if a.side in ("plus", "both")]
        )
        minus = merge_intervals(
            [(a.t0, a.t1) for a in arcs if a.side in ("minus", "both")]
        )
        covered = merge_intervals(plus + minus)
        hull = (covered[0][0], covered[-1][1])
        both = intersect_intervals(plus, minus)
        defect = (hull[1] - hull[0]) - intervals_measure(both)
        if defect <= tol_len:
            picked.extend(arcs)
    return BoundarySet(picked)


def _check_uniform_kind(domain: PlanarDomain, boundary_set: BoundarySet):
    """Reject arcs whose sampled points mix one- and two-sided classifications."""
    tol = 1e-9 * max(domain.diameter, 1.0)
    for a in boundary_set.arcs:
        c = domain.curve(a.curve_id)
        kinds = set()
        for frac in (0.25, 0.5, 0.75):
            s = a.t0 + frac * (a.t1 - a.t0)
            try:
                kinds.add(classify_point(domain, c.point_at(s)[0], tol))
            except AmbiguousPointError:
                continue
        kinds.discard(PointType.NOT_BOUNDARY)
        if len(kinds) > 1:
            raise InvalidSetError(f"arc on {a.curve_id} mixes boundary kinds")


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def domain_to_json(domain: PlanarDomain) -> dict:
    return {
        "outer": domain.outer.vertices.tolist(),
        "holes": [h.vertices.tolist() for h in domain.holes],
        "slits": [s.vertices.tolist() for s in domain.slits],
    }


def domain_from_json(obj, validate: bool = True) -> PlanarDomain:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return PlanarDomain(
        Curve(obj["outer"], closed=True, validate=validate),
        holes=[Curve(h, closed=True, validate=validate) for h in obj.get("holes", [])],
        slits=[Curve(s, closed=False, validate=validate) for s in obj.get("slits", [])],
        validate=validate,
    )


def boundary_set_to_json(boundary_set: BoundarySet) -> list:
    return [
        {"curve": a.curve_id, "t0": a.t0, "t1": a.t1, "side": a.side}
        for a in boundary_set.arcs
    ]


def boundary_set_from_json(obj) -> BoundarySet:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if isinstance(obj, dict):
        obj = obj["arcs"]
    return BoundarySet(
        [BoundaryArc(d["curve"], float(d["t0"]), float(d["t1"]), d.get("side", "both")) for d in obj]
    )
