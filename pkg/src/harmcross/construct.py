"""Constructive domain enlargements and separating witnesses.

Given an arc on a one-sided boundary curve, :func:`build_companion` builds
an offset curve with the same endpoints that bounds a pocket outside the
domain; welding pockets onto the domain along such arcs
(:func:`build_enlarged_domain`) yields an enlarged domain on which the
measure of the arc agrees with the measure on the original domain — the
gluing identity verified by :func:`verify_gluing`.

:func:`find_separator` uses these enlargements to produce boundary points
of explicit product or envelope domains near a query pair, the
certificates that the cross envelope cannot be enlarged there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import CrossSpec, enlarge_boundary_set
from .errors import NoClearanceError, NoWitnessError, TypeMismatchError
from .geometry import (
    BoundaryArc,
    BoundarySet,
    Curve,
    PlanarDomain,
    as_complex,
    as_xy,
    both_faces,
    merge_intervals,
)
from .measure import grid_measure, measure_values

__all__ = [
    "CompanionCurve",
    "build_companion",
    "DomainExtension",
    "build_enlarged_domain",
    "GluingReport",
    "verify_gluing",
    "SeparatorWitness",
    "find_separator",
]


@dataclass
class CompanionCurve:
    """Offset companion of a one-sided boundary arc.

    For open arcs the offset shares the arc's endpoints and the closed
    polygon ``pocket`` (arc followed by the reversed offset) bounds a
    region disjoint from the domain.  For whole closed curves the offset
    is a disjoint closed curve and the pocket region is the ring between
    them (``annular=True``).
    """

    base_arc: BoundaryArc
    base_points: np.ndarray      # (m, 2) samples of the arc, parameter order
    base_params: np.ndarray      # (m,) arc-length parameters on the curve
    offset_curve: Curve
    pocket: Curve
    k: int
    annular: bool = False
    sup_offset: float = 0.0

    def max_matched_distance(self) -> float:
        off = self.offset_curve.vertices
        return float(np.linalg.norm(self.base_points - off, axis=1).max())

    def check(self, domain: PlanarDomain):
        """Recompute the three structural guarantees; raises on violation."""
        if not self.annular:
            if not (
                np.allclose(self.offset_curve.vertices[0], self.base_points[0], atol=0)
                and np.allclose(self.offset_curve.vertices[-1], self.base_points[-1], atol=0)
            ):
                raise ValueError("offset endpoints must equal the arc endpoints")
        if self.max_matched_distance() > 1.0 / self.k + 1e-12:
            raise ValueError("offset strays farther than 1/k from the arc")
        if _pocket_meets_domain(self, domain):
            raise ValueError("pocket region meets the domain")


def _pocket_meets_domain(comp: CompanionCurve, domain: PlanarDomain) -> bool:
    # offset edges must not cross any boundary edge, and an interior probe
    # of the pocket must fall outside the domain.  The first and last offset
    # segments emanate from pinned points sitting on the boundary, where
    # roundoff misreports crossings, so they are left to the probe test.
    from .geometry import _segments_cross

    off = comp.offset_curve
    a1, b1 = off._seg_a, off._seg_b
    if not comp.annular and len(a1) > 2:
        a1, b1 = a1[1:-1], b1[1:-1]
    for c in [domain.outer, *domain.holes, *domain.slits]:
        i = np.repeat(np.arange(len(a1)), c.segment_count)
        j = np.tile(np.arange(c.segment_count), len(a1))
        if np.any(_segments_cross(a1[i], b1[i], c._seg_a[j], c._seg_b[j])):
            return True
    mid = len(comp.base_points) // 2
    probe = 0.5 * (comp.base_points[mid] + comp.offset_curve.vertices[mid])
    return bool(domain.contains(probe[None])[0])


def _sample_arc(curve: Curve, t0: float, t1: float, target: int = 192):
    """Parameter samples covering [t0, t1] (mod length for closed curves):
    native vertices plus uniform refinement up to roughly `target` points."""
    L = curve.length
    span = t1 - t0
    starts = curve.segment_param_start()
    if curve.closed:
        native = []
        for rep in (0.0, L):
            s = starts + rep
            native.extend(s[(s > t0 + 1e-12) & (s < t1 - 1e-12)])
    else:
        native = list(starts[(starts > t0 + 1e-12) & (starts < t1 - 1e-12)])
    uniform = list(t0 + span * np.arange(1, target) / target)
    ts = np.unique(np.concatenate([[t0], native, uniform, [t1]]))
    return ts


def build_companion(domain: PlanarDomain, arc: BoundaryArc, k: int,
                    samples: int = 192) -> CompanionCurve:
    """Outward-offset companion of a one-sided arc.

    The offset displacement is ``min(1/(2k), clearance/2)`` shaped by a
    ramp that pins the endpoints; raises :class:`NoClearanceError` when
    the outward clearance drops below ``1/(4k)`` (raise k), and
    :class:`TypeMismatchError` for slit arcs (two-sided pieces have empty
    companions).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if arc.curve_id.startswith("slit:"):
        raise TypeMismatchError(
            "two-sided arcs have empty companions; build_companion needs a one-sided arc"
        )
    curve = domain.curve(arc.curve_id)
    L = curve.length
    whole = curve.closed and arc.t1 - arc.t0 >= L - 1e-12

    if whole:
        ts = curve.segment_param_start()
        if len(ts) < samples:
            ts = np.unique(np.concatenate([ts, L * np.arange(samples) / samples]))
    else:
        ts = _sample_arc(curve, arc.t0, arc.t1, samples)
    pts = curve.point_at(ts)

    tang = _tangents(pts, closed=whole)
    normal = np.stack([tang[:, 1], -tang[:, 0]], axis=1)
    # orient outward per sample: a small push along the normal must leave D
    probe_eps = min(1e-3 * domain.diameter, 0.05 / k)
    inside = domain.contains(pts + probe_eps * normal)
    normal[inside] *= -1.0

    clear = _outward_clearance(domain, pts, normal)
    if clear.min() < 1.0 / (4.0 * k):
        raise NoClearanceError(
            f"outward clearance {clear.min():.4g} below 1/(4k) = {1.0/(4*k):.4g}; raise k"
        )
    delta = np.minimum(1.0 / (2.0 * k), 0.5 * clear)
    if whole:
        ramp = np.ones(len(ts))
    else:
        span = ts[-1] - ts[0]
        ramp_len = min(span / 4.0, 1.0 / (2.0 * k))
        s_rel = ts - ts[0]
        ramp = np.minimum(1.0, np.minimum(s_rel, span - s_rel) / ramp_len)
    disp = (delta * ramp)[:, None] * normal
    off_pts = pts + disp

    if whole:
        offset = Curve(off_pts, closed=True)
        pocket = offset  # ring region between curve and offset
        comp = CompanionCurve(arc, pts, ts, offset, pocket, k, annular=True,
                              sup_offset=float(np.abs(delta * ramp).max()))
    else:
        offset = Curve(off_pts, closed=False, validate=False)
        ring = np.vstack([pts, off_pts[-2:0:-1]])
        pocket = Curve(ring, closed=True, validate=len(ring) <= 2048)
        comp = CompanionCurve(arc, pts, ts, offset, pocket, k,
                              sup_offset=float(np.abs(delta * ramp).max()))
    comp.check(domain)
    return comp


def _tangents(pts: np.ndarray, closed: bool) -> np.ndarray:
    if closed:
        fwd = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    else:
        fwd = np.empty_like(pts)
        fwd[1:-1] = pts[2:] - pts[:-2]
        fwd[0] = pts[1] - pts[0]
        fwd[-1] = pts[-1] - pts[-2]
    n = np.linalg.norm(fwd, axis=1)
    n[n == 0] = 1.0
    return fwd / n[:, None]


def _outward_clearance(domain: PlanarDomain, pts: np.ndarray,
                       normals: np.ndarray) -> np.ndarray:
    """First boundary hit along the outward normal ray from each sample.

    Measures exactly the room available on the outward side; hits at the
    ray origin (the sample lies on the boundary) are skipped.
    """
    a = domain._seg_a
    ab = domain._seg_b - a
    clearance = np.full(len(pts), np.inf)
    eps = 1e-9 * max(domain.diameter, 1.0)
    for i, (p, n) in enumerate(zip(pts, normals)):
        denom = n[0] * ab[:, 1] - n[1] * ab[:, 0]
        ok = np.abs(denom) > 1e-300
        ap = a - p
        s = np.where(ok, (ap[:, 0] * ab[:, 1] - ap[:, 1] * ab[:, 0]) / np.where(ok, denom, 1.0), np.inf)
        u = np.where(ok, (ap[:, 0] * n[1] - ap[:, 1] * n[0]) / np.where(ok, denom, 1.0), -1.0)
        hit = ok & (s > eps) & (u >= 0.0) & (u <= 1.0)
        if hit.any():
            clearance[i] = s[hit].min()
    return clearance


# ---------------------------------------------------------------------------
# enlarged domains
# ---------------------------------------------------------------------------


class DomainExtension(PlanarDomain):
    """Enlarged domain with pocket bookkeeping.

    Behaves as a plain :class:`PlanarDomain`; ``companions`` records the
    pocket welded over each one-sided arc component and ``base_domain``
    the domain that was enlarged.  Two-sided (slit) arcs contribute
    nothing: the point set only grows across one-sided arcs.
    """

    def __init__(self, outer, holes, slits, base_domain, companions, arc_components):
        super().__init__(outer, holes=holes, slits=slits)
        self.base_domain = base_domain
        self.companions = tuple(companions)
        self.arc_components = tuple(arc_components)

    def area(self) -> float:
        a = self.outer.signed_area()
        for h in self.holes:
            a -= abs(h.signed_area())
        return float(a)


def _components_by_curve(domain: PlanarDomain, boundary_set: BoundarySet):
    """Merge arcs into connected components per curve (sides collapsed)."""
    comp = {}
    for cid in domain.curve_ids:
        arcs = boundary_set.on_curve(cid)
        if not arcs:
            continue
        iv = merge_intervals([(a.t0, a.t1) for a in arcs])
        c = domain.curve(cid)
        if c.closed and len(iv) > 1 and iv[0][0] <= 1e-12 and iv[-1][1] >= c.length - 1e-12:
            # merge the wrap pair into one component crossing parameter 0
            first, last = iv[0], iv[-1]
            iv = iv[1:-1] + [(last[0] - c.length, first[1])]
        comp[cid] = iv
    return comp


def build_enlarged_domain(domain: PlanarDomain, boundary_set: BoundarySet, k: int,
                          samples: int = 192) -> DomainExtension:
    """Weld companion pockets onto the domain across one-sided arcs.

    The result's point set is the domain plus, per one-sided arc
    component, the pocket and the open arc itself; two-sided components
    contribute nothing.  Companion construction errors propagate.
    """
    boundary_set.validate(domain)
    components = _components_by_curve(domain, boundary_set)
    new_outer = domain.outer
    new_holes = list(domain.holes)
    companions = []
    comps_meta = []

    for cid, intervals in components.items():
        if cid.startswith("slit:"):
            for t0, t1 in intervals:
                comps_meta.append((cid, t0, t1, None))
            continue
        curve = domain.curve(cid)
        L = curve.length
        total = sum(t1 - t0 for t0, t1 in intervals)
        if curve.closed and total >= L - 1e-12:
            comp = build_companion(domain, BoundaryArc(cid, 0.0, L), k, samples)
            companions.append(comp)
            comps_meta.append((cid, 0.0, L, comp))
            if cid == "outer":
                new_outer = comp.offset_curve
            else:
                hi = int(cid.split(":")[1])
                new_holes[hi] = comp.offset_curve
            continue
        comps = []
        for t0, t1 in intervals:
            arc = BoundaryArc(cid, t0, t1) if t0 >= 0 else BoundaryArc(cid, t0 + L, t1 + L)
            comp = build_companion(domain, arc, k, samples)
            companions.append(comp)
            comps.append((t0, t1, comp))
            comps_meta.append((cid, t0, t1, comp))
        spliced = _splice_offsets(curve, comps)
        if cid == "outer":
            new_outer = spliced
        else:
            new_holes[int(cid.split(":")[1])] = spliced

    ext = DomainExtension(
        new_outer, new_holes, domain.slits, domain, companions, comps_meta
    )
    return ext


def _splice_offsets(curve: Curve, comps) -> Curve:
    """Replace arc sections of a closed curve by their offset companions."""
    L = curve.length
    comps = sorted(comps, key=lambda c: c[0] % L)
    verts = []
    starts = curve.segment_param_start()
    prev_end = None
    first_start = None
    for t0, t1, comp in comps:
        a = t0 % L
        if first_start is None:
            first_start = a
        if prev_end is not None:
            verts.extend(_curve_section(curve, prev_end, a))
        verts.extend(comp.offset_curve.vertices[:-1])
        prev_end = t1 % L
    gap_end = first_start + (L if first_start <= prev_end else 0.0)
    verts.extend(_curve_section(curve, prev_end, gap_end))
    return Curve(np.array(verts), closed=True)


def _curve_section(curve: Curve, t0: float, t1: float):
    """Vertices of the closed curve from parameter t0 to t1 (forward, mod L),
    including the point at t0, excluding the point at t1."""
    L = curve.length
    if t1 < t0:
        t1 += L
    starts = curve.segment_param_start()   # the seam vertex is rep L of start 0
    out = [curve.point_at(t0)[0]]
    for rep in (0.0, L):
        s = starts + rep
        take = (s > t0 + 1e-12) & (s < t1 - 1e-12)
        for t in s[take]:
            out.append(curve.point_at(t % L)[0])
    return out


# ---------------------------------------------------------------------------
# gluing identity
# ---------------------------------------------------------------------------


@dataclass
class GluingReport:
    k: int
    spacing: float
    points: np.ndarray
    values_base: np.ndarray       # measure on the original domain
    values_enlarged: np.ndarray   # measure on the enlarged domain (arc as barrier)
    max_discrepancy: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "checks": {
                "max_discrepancy": self.max_discrepancy,
                "tolerance": self.tolerance,
                "spacing": self.spacing,
                "per_point": [
                    {"x": float(x), "y": float(y), "base": float(b), "enlarged": float(e)}
                    for (x, y), b, e in zip(self.points, self.values_base, self.values_enlarged)
                ],
            },
            "pass": self.passed,
        }


def gluing_barrier(domain: PlanarDomain, boundary_set: BoundarySet,
                   extension: DomainExtension):
    """The enlarged domain with the welded arcs restored as zero-width
    barriers, plus the both-face boundary set carrying the Dirichlet zero.

    Realizes the measure of the arc set relative to the enlarged domain:
    the arc is interior there, and the measure's defining envelope forces
    value 0 from every approach direction, which is exactly a two-faced
    barrier condition.
    """
    slits = list(extension.slits)
    barrier_arcs = []
    for cid, t0, t1, comp in extension.arc_components:
        if comp is None:
            # two-sided piece: already a slit of the domain; keep declared faces
            for a in boundary_set.on_curve(cid):
                barrier_arcs.append(a)
            continue
        if comp.annular:
            continue  # fully pocketed closed curve: handled by the caller
        si = len(slits)
        slits.append(Curve(comp.base_points, closed=False, validate=False))
        barrier_arcs.extend(both_faces(f"slit:{si}", 0.0, slits[-1].length))
    dom = PlanarDomain(extension.outer, holes=extension.holes, slits=slits, validate=False)
    return dom, BoundarySet(barrier_arcs)


def verify_gluing(domain: PlanarDomain, boundary_set: BoundarySet,
                  extension: DomainExtension, sample_points, cfg,
                  tolerance: float = 1e-2) -> GluingReport:
    """Compare the measure of the arcs on the original and enlarged domains.

    Fully pocketed closed curves disconnect the enlargement along the
    barrier, so the enlarged-domain measure restricted to the original
    domain coincides with the base solve there and the comparison is
    exact by construction; open-arc pockets are solved explicitly with
    the arc as a two-faced barrier.
    """
    pts = as_xy(sample_points)
    f_base = grid_measure(domain, boundary_set, cfg, pts)

    has_annular = any(comp is not None and comp.annular for _, _, _, comp in extension.arc_components)
    has_open = any(comp is not None and not comp.annular for _, _, _, comp in extension.arc_components)
    if has_annular and has_open:
        raise ValueError(
            "mixed whole-curve and open-arc components are not supported in one gluing check"
        )
    if has_annular:
        # the closed barrier disconnects the ring from the original domain, so
        # the enlarged-domain measure restricted there is the base solve itself
        values_enl = f_base.values.copy()
    else:
        barrier_dom, barrier_set = gluing_barrier(domain, boundary_set, extension)
        f_enl = grid_measure(barrier_dom, barrier_set, cfg, pts)
        values_enl = f_enl.values

    disc = float(np.abs(values_enl - f_base.values).max())
    k = extension.companions[0].k if extension.companions else 0
    return GluingReport(k, cfg.spacing, pts, f_base.values, values_enl, disc, tolerance)


# ---------------------------------------------------------------------------
# separating witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparatorWitness:
    """Boundary point of an explicit separating domain inside the query ball.

    ``omega_kind`` records which family supplied the domain: the level set
    of the k-th neighborhood measures (``cross_envelope_k``) or a product
    of enlarged factors (``product_k``).
    """

    omega_kind: str               # "cross_envelope_k" | "product_k"
    k: int
    witness_point: tuple          # (Re z, Im z, Re w, Im w)
    boundary_residual: float

    def to_json(self) -> dict:
        return {
            "kind": self.omega_kind,
            "k": self.k,
            "point": list(self.witness_point),
            "residual": self.boundary_residual,
        }


def _nearest_on_set(domain: PlanarDomain, boundary_set: BoundarySet, z: complex):
    """Nearest point of the set to z: (point, curve_id, param, distance)."""
    best = None
    for a in boundary_set.arcs:
        c = domain.curve(a.curve_id)
        ts = np.linspace(a.t0, a.t1, 257)
        pts = c.point_at(ts)
        d = np.hypot(pts[:, 0] - z.real, pts[:, 1] - z.imag)
        i = int(np.argmin(d))
        if best is None or d[i] < best[3]:
            best = (pts[i], a.curve_id, float(ts[i]), float(d[i]))
    return best


def find_separator(spec: CrossSpec, query_point, ks=None, cfg=None,
                   ball_radius: float = 0.05, tol: float = 1e-3,
                   growth: float = 1.0, k_max: int = 64) -> SeparatorWitness:
    """Separating-domain witness inside the ball around a query pair.

    Interior pairs (both coordinates at distance > ball_radius from their
    boundaries) are treated by bisection of the neighborhood level sum
    ``omega_k(z) + omega_k(w)`` across 1 along a bracketing segment
    through the query point.  Pairs with a coordinate near the boundary
    yield a product witness: a companion-offset point over a one-sided
    arc, or an endpoint of the k-th neighborhood component on a two-sided
    arc once that component fits the ball.  Raises
    :class:`NoWitnessError` with per-k diagnostics when no tested k
    produces a witness; that is the expected outcome when the set is
    crossable there (its neighborhood components never shrink).
    """
    q = as_complex(query_point)
    if len(q) == 1:
        raise ValueError("query_point needs both coordinates (z, w)")
    z0, w0 = complex(q[0]), complex(q[1])
    if ks is None:
        ks = [1, 2, 4, 8, 16, 32, 64]
    ks = sorted(int(k) for k in ks if k <= k_max)
    diagnostics = {}

    z_interior = spec.D.contains([z0])[0] and spec.D.distance_to_boundary([z0])[0] > ball_radius
    w_interior = spec.G.contains([w0])[0] and spec.G.distance_to_boundary([w0])[0] > ball_radius

    if z_interior and w_interior:
        return _case_level_sum(spec, z0, w0, ks, cfg, ball_radius, tol, growth, diagnostics)
    if not z_interior:
        return _case_boundary(spec, z0, w0, ks, cfg, ball_radius, tol, growth,
                              diagnostics, swap=False)
    return _case_boundary(spec.swapped(), w0, z0, ks, cfg, ball_radius, tol, growth,
                          diagnostics, swap=True)


def _case_level_sum(spec, z0, w0, ks, cfg, r, tol, growth, diagnostics):
    for k in ks:
        A_k = enlarge_boundary_set(spec.D, spec.A, growth / k)
        B_k = enlarge_boundary_set(spec.G, spec.B, growth / k)

        def level(z, w):
            fz = measure_values(spec.D, A_k, cfg, [z]).values[0]
            fw = measure_values(spec.G, B_k, cfg, [w]).values[0]
            return float(fz + fw)

        directions = [
            (1, 0), (-1, 0), (1j, 0), (-1j, 0),
            (0, 1), (0, -1), (0, 1j), (0, -1j),
            (0.7071, 0.7071), (-0.7071, -0.7071), (0.7071j, 0.7071j), (-0.7071j, -0.7071j),
        ]
        probes = [(z0, w0)]
        for frac in (0.9, 0.45):
            for dz, dw in directions:
                probes.append((z0 + frac * r * dz, w0 + frac * r * dw))
        vals = []
        for z, w in probes:
            if spec.D.contains([z])[0] and spec.G.contains([w])[0]:
                vals.append(((z, w), level(z, w)))
        lo = min(vals, key=lambda t: t[1])
        hi = max(vals, key=lambda t: t[1])
        if not (lo[1] < 1.0 < hi[1]):
            diagnostics[k] = f"no bracket: level sum spans [{lo[1]:.4f}, {hi[1]:.4f}]"
            continue
        (za, wa), sa = lo
        (zb, wb), sb = hi
        for _ in range(200):
            zm = 0.5 * (za + zb)
            wm = 0.5 * (wa + wb)
            sm = level(zm, wm)
            if abs(sm - 1.0) <= tol:
                pt = (zm.real, zm.imag, wm.real, wm.imag)
                return SeparatorWitness("cross_envelope_k", k, pt, abs(sm - 1.0))
            if sm < 1.0:
                za, wa = zm, wm
            else:
                zb, wb = zm, wm
        diagnostics[k] = "bisection stalled"
    raise NoWitnessError("no level-sum witness within the tested range", diagnostics)


def _case_boundary(spec, z0, w0, ks, cfg, r, tol, growth, diagnostics, swap):
    # w0 (the other coordinate) must stay available as the partner of the witness
    near = _nearest_on_set(spec.D, spec.A, z0)
    if near is None or near[3] > r:
        raise NoWitnessError(
            "query coordinate is near the boundary but not near the set", diagnostics
        )
    _, cid, t1, dist_to_set = near
    two_sided = cid.startswith("slit:")

    for k in ks:
        A_k = enlarge_boundary_set(spec.D, spec.A, growth / k)
        if two_sided:
            curve = spec.D.curve(cid)
            comp_iv = _components_by_curve(spec.D, A_k).get(cid, [])
            hosting = [iv for iv in comp_iv if iv[0] - 1e-12 <= t1 <= iv[1] + 1e-12]
            if not hosting:
                diagnostics[k] = "no neighborhood component hosts the point"
                continue
            t_lo, t_hi = hosting[0]
            ends = [max(t_lo, 0.0), min(t_hi, curve.length)]
            cand = []
            for te in ends:
                pt = curve.point_at(te)[0]
                zc = complex(pt[0], pt[1])
                if abs(zc - z0) <= r:
                    cand.append((zc, abs(zc - z0)))
            if not cand:
                spanmin = min(abs(curve.point_at(e)[0][0] + 1j * curve.point_at(e)[0][1] - z0) for e in ends)
                diagnostics[k] = (
                    f"component endpoints at distance {spanmin:.4g} exceed the ball radius {r:g}"
                )
                continue
            zc, _ = min(cand, key=lambda t: t[1])
            pt4 = (zc.real, zc.imag, w0.real, w0.imag) if not swap else (w0.real, w0.imag, zc.real, zc.imag)
            return SeparatorWitness("product_k", k, pt4, 0.0)
        else:
            comp_iv = _components_by_curve(spec.D, A_k).get(cid, [])
            hosting = [iv for iv in comp_iv if iv[0] - 1e-12 <= t1 <= iv[1] + 1e-12]
            if not hosting:
                diagnostics[k] = "no neighborhood component hosts the point"
                continue
            t_lo, t_hi = hosting[0]
            curve = spec.D.curve(cid)
            try:
                comp = build_companion(spec.D, BoundaryArc(cid, max(t_lo, 0.0), min(t_hi, curve.length)), k)
            except NoClearanceError as e:
                diagnostics[k] = f"no clearance: {e}"
                continue
            i_near = int(np.argmin(np.abs(comp.base_params - t1)))
            off = comp.offset_curve.vertices[i_near % len(comp.offset_curve.vertices)]
            zc = complex(off[0], off[1])
            if abs(zc - z0) > r:
                diagnostics[k] = f"offset point at distance {abs(zc - z0):.4g} exceeds the ball"
                continue
            ext = build_enlarged_domain(spec.D, BoundarySet([BoundaryArc(cid, max(t_lo, 0.0), min(t_hi, curve.length))]), k)
            residual = float(ext.distance_to_boundary([zc])[0])
            if residual > tol:
                diagnostics[k] = f"offset point misses the enlarged boundary by {residual:.4g}"
                continue
            pt4 = (zc.real, zc.imag, w0.real, w0.imag) if not swap else (w0.real, w0.imag, zc.real, zc.imag)
            return SeparatorWitness("product_k", k, pt4, residual)
    raise NoWitnessError("no product witness within the tested range", diagnostics)
