"""Nested pseudoconvex sublevel domains from a defining function.

Given a domain ``D = {rho < 0}`` in complex dimension n and a weight
``lam`` in [0, 1] vanishing exactly off the boundary region to be kept,
the sets

    D_k = D  union  { rho - lam/k < 0 }

form a decreasing family whose members meet the closure of D exactly in
``D union A`` (A the positive part of lam on the boundary) and whose
intersection shrinks back to ``D union A``.  The builder samples a box
grid and checks four properties per k: nesting, the trace on the closure,
the shrinking intersection, and positivity of the complex Hessian of the
defining function on the k-th boundary (restricted to the complex tangent
space when n >= 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotStronglyPseudoconvexError

__all__ = [
    "LevelSetDomain",
    "SublevelSequenceReport",
    "build_sublevel_sequence",
    "ball_fixture",
    "disc_fixture",
]


@dataclass(frozen=True)
class LevelSetDomain:
    """Domain cut out by a defining function on a box, with a weight field.

    ``rho`` and ``lam`` map (m, 2n) real coordinate arrays to (m,) values;
    ``box`` is a (2n, 2) array of axis bounds.  ``k = 0`` denotes the base
    domain itself; ``k >= 1`` the sublevel enlargement ``rho - lam/k < 0``.
    """

    dimension: int               # complex dimension n (2n real coordinates)
    box: np.ndarray
    rho: object                  # callable (m, 2n) -> (m,)
    lam: object                  # callable (m, 2n) -> (m,)
    k: int = 0

    def __post_init__(self):
        box = np.asarray(self.box, dtype=float)
        if box.shape != (2 * self.dimension, 2):
            raise ValueError("box must be (2n, 2) bounds")
        object.__setattr__(self, "box", box)
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    def phi(self, pts: np.ndarray) -> np.ndarray:
        """Defining function of this member: rho for k=0, rho - lam/k else."""
        r = np.asarray(self.rho(pts), dtype=float)
        if self.k == 0:
            return r
        return r - np.asarray(self.lam(pts), dtype=float) / self.k

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return self.phi(pts) < 0.0

    def with_k(self, k: int) -> "LevelSetDomain":
        return LevelSetDomain(self.dimension, self.box, self.rho, self.lam, k)


def _box_grid(box: np.ndarray, per_axis: int) -> np.ndarray:
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _boundary_samples(domain: LevelSetDomain, per_axis: int, limit: int = 4096,
                      tol: float = 1e-12) -> np.ndarray:
    """Points on {phi = 0} found by bisecting sign changes along grid edges."""
    pts = _box_grid(domain.box, per_axis)
    vals = domain.phi(pts)
    shape = (per_axis,) * (2 * domain.dimension)
    v = vals.reshape(shape)
    p = pts.reshape(shape + (2 * domain.dimension,))
    segs_a, segs_b = [], []
    for ax in range(2 * domain.dimension):
        sl_lo = [slice(None)] * (2 * domain.dimension)
        sl_hi = [slice(None)] * (2 * domain.dimension)
        sl_lo[ax] = slice(None, -1)
        sl_hi[ax] = slice(1, None)
        flip = (v[tuple(sl_lo)] < 0) != (v[tuple(sl_hi)] < 0)
        if flip.any():
            segs_a.append(p[tuple(sl_lo)][flip])
            segs_b.append(p[tuple(sl_hi)][flip])
    if not segs_a:
        return np.zeros((0, 2 * domain.dimension))
    a = np.vstack(segs_a)
    b = np.vstack(segs_b)
    if len(a) > limit:
        stride = int(np.ceil(len(a) / limit))
        a, b = a[::stride], b[::stride]
    fa = domain.phi(a)
    for _ in range(60):
        mid = 0.5 * (a + b)
        fm = domain.phi(mid)
        left = (fa < 0) == (fm < 0)
        a = np.where(left[:, None], mid, a)
        fa = np.where(left, fm, fa)
        b = np.where(left[:, None], b, mid)
        if np.abs(fm).max() < tol:
            break
    return 0.5 * (a + b)


def complex_hessian_min_eig(domain: LevelSetDomain, pts: np.ndarray,
                            step: float = None, restrict_tangent: bool = None) -> np.ndarray:
    """Smallest eigenvalue of the complex Hessian of phi at each point.

    The Hessian H_ij = (1/4)[(d_xi d_xj + d_yi d_yj) + i(d_xi d_yj -
    d_yi d_xj)] phi is formed from central finite differences with
    ``step`` (defaults to 1e-4 times the box size).  For n >= 2 the form
    is restricted to the complex tangent space of {phi = const} through
    each point; for n = 1 it is the single entry.
    """
    n = domain.dimension
    dim = 2 * n
    if step is None:
        step = 1e-4 * float(np.max(domain.box[:, 1] - domain.box[:, 0]))
    if restrict_tangent is None:
        restrict_tangent = n >= 2
    pts = np.asarray(pts, dtype=float)
    m = len(pts)
    if m == 0:
        return np.zeros(0)

    e = np.eye(dim) * step
    f0 = domain.phi(pts)
    # real Hessian by central differences
    H = np.empty((m, dim, dim))
    grad = np.empty((m, dim))
    for i in range(dim):
        fp = domain.phi(pts + e[i])
        fmn = domain.phi(pts - e[i])
        grad[:, i] = (fp - fmn) / (2 * step)
        H[:, i, i] = (fp - 2 * f0 + fmn) / step**2
    for i in range(dim):
        for j in range(i + 1, dim):
            fpp = domain.phi(pts + e[i] + e[j])
            fpm = domain.phi(pts + e[i] - e[j])
            fmp = domain.phi(pts - e[i] + e[j])
            fmm = domain.phi(pts - e[i] - e[j])
            H[:, i, j] = H[:, j, i] = (fpp - fpm - fmp + fmm) / (4 * step**2)

    # complex Hessian: coordinates ordered (x_1, y_1, ..., x_n, y_n)
    ix = np.arange(0, dim, 2)
    iy = ix + 1
    A = H[:, ix[:, None], ix[None, :]]
    B = H[:, iy[:, None], iy[None, :]]
    C = H[:, ix[:, None], iy[None, :]]
    Hc = 0.25 * (A + B) + 0.25j * (C - np.swapaxes(C, 1, 2))

    if n == 1 or not restrict_tangent:
        eigs = np.linalg.eigvalsh(Hc)
        return eigs[:, 0]

    gz = 0.5 * (grad[:, ix] - 1j * grad[:, iy])   # d phi / d z_i
    out = np.empty(m)
    for r in range(m):
        g = gz[r]
        if np.linalg.norm(g) < 1e-14:
            out[r] = np.linalg.eigvalsh(Hc[r])[0]
            continue
        basis = _tangent_basis(g)
        restricted = basis.conj().T @ Hc[r] @ basis
        out[r] = float(np.linalg.eigvalsh(restricted)[0].real)
    return out


def _tangent_basis(g: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the complex hyperplane {v : g . v = 0}."""
    n = len(g)
    a = np.conj(g) / np.linalg.norm(g)
    cols = [a]
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = 1.0
        v = e - sum(np.vdot(c, e) * c for c in cols)
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            cols.append(v / norm)
        if len(cols) == n:
            break
    basis = np.column_stack(cols[1:])
    return basis


@dataclass
class SublevelSequenceReport:
    ks: list
    nesting: bool
    trace: bool
    intersection: bool
    levi_min_eig: dict            # k -> smallest eigenvalue on the k-th boundary
    onset: int | None             # smallest N with positive Levi minimum for k >= N
    tol: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.nesting and self.trace and self.intersection and self.onset is not None

    def to_json(self) -> dict:
        return {
            "k": self.onset,
            "checks": {
                "nesting": self.nesting,
                "trace": self.trace,
                "intersection": self.intersection,
                "levi_min_eig": {str(k): float(v) for k, v in self.levi_min_eig.items()},
            },
            "pass": self.passed,
        }


def build_sublevel_sequence(base: LevelSetDomain, ks, per_axis: int = 21,
                            tol: float = 1e-3, boundary_limit: int = 2048):
    """The sublevel family for the given ks, with its four-way report.

    Checks on a ``per_axis ** (2n)`` sample grid: (i) pointwise nesting of
    consecutive members, (ii) the trace ``D_k ∩ closure(D) = D ∪ A`` at
    bisected boundary samples (A read off the weight's positive part),
    (iii) every sampled point farther than ``tol`` outside ``D ∪ A``
    excluded by the largest tested k, and (iv) the smallest complex-
    Hessian eigenvalue on sampled k-th boundaries, reporting the onset N
    after which it stays positive.  Raises
    :class:`NotStronglyPseudoconvexError` when no tested k is positive, or
    when the base defining function fails positivity on the kept boundary
    region.
    """
    ks = sorted(int(k) for k in ks)
    if not ks or ks[0] < 1:
        raise ValueError("ks must be positive integers")
    members = [base.with_k(k) for k in ks]

    bnd = _boundary_samples(base, per_axis, boundary_limit)
    lam_b = np.asarray(base.lam(bnd), dtype=float) if len(bnd) else np.zeros(0)
    kept = bnd[lam_b > 1e-12]
    if len(kept):
        base_levi = complex_hessian_min_eig(base, kept)
        if base_levi.min() <= 0:
            raise NotStronglyPseudoconvexError(
                f"defining function has nonpositive complex Hessian ({base_levi.min():.3e}) "
                "on the kept boundary region"
            )

    pts = _box_grid(base.box, per_axis)
    rho_v = np.asarray(base.rho(pts), dtype=float)
    lam_v = np.asarray(base.lam(pts), dtype=float)
    inside = {k: (rho_v - lam_v / k < 0.0) for k in ks}

    nesting = all(
        not np.any(inside[k2] & ~inside[k1])
        for k1, k2 in zip(ks, ks[1:])
    )

    # trace on the closure: the base domain stays included, and boundary
    # samples belong to D_k exactly where the weight is positive
    guard = 1e-9
    trace_bad = sum(int(np.count_nonzero((rho_v < 0) & ~inside[k])) for k in ks)
    if len(bnd):
        rho_b = np.asarray(base.rho(bnd), dtype=float)
        for k in ks:
            phi_b = rho_b - lam_b / k
            in_dk = phi_b < 0.0
            want = lam_b > guard
            ambiguous = np.abs(phi_b) <= guard
            trace_bad += int(np.count_nonzero((in_dk != want) & ~ambiguous))
    trace = trace_bad == 0

    # intersection: sampled points farther than tol outside the closure and
    # the kept set must be excluded by the largest tested k
    k_last = ks[-1]
    outside = rho_v > 0.0
    dist = np.full(len(pts), np.inf)
    if outside.any():
        dist[outside] = rho_v[outside] / _gradient_norm(base, pts[outside])
    clear_outside = outside & (dist > tol)
    excluded = rho_v - lam_v / k_last >= 0.0
    inter_bad = int(np.count_nonzero(clear_outside & ~excluded))
    intersection = inter_bad == 0

    levi = {}
    onset = None
    for k in ks:
        bnd_k = _boundary_samples(base.with_k(k), per_axis, boundary_limit)
        if len(bnd_k) == 0:
            levi[k] = float("nan")
            continue
        levi[k] = float(complex_hessian_min_eig(base.with_k(k), bnd_k).min())
    for i, k in enumerate(ks):
        if all(levi.get(kk, -1.0) > 0 for kk in ks[i:]):
            onset = k
            break
    if onset is None:
        raise NotStronglyPseudoconvexError(
            f"no tested k up to {k_last} has positive boundary Hessian; minima {levi}"
        )

    report = SublevelSequenceReport(
        ks, nesting, trace, intersection, levi, onset, tol,
        details={"trace_violations": trace_bad, "intersection_violations": inter_bad,
                 "boundary_samples": int(len(bnd))},
    )
    return members, report


def _gradient_norm(base: LevelSetDomain, pts: np.ndarray) -> np.ndarray:
    """|grad rho| by central differences, floored away from zero.

    rho / |grad rho| is the first-order distance to the zero set, the
    scale on which the intersection tolerance is measured.
    """
    dim = 2 * base.dimension
    step = 1e-4 * float(np.max(base.box[:, 1] - base.box[:, 0]))
    g2 = np.zeros(len(pts))
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = step
        gi = (np.asarray(base.rho(pts + e)) - np.asarray(base.rho(pts - e))) / (2 * step)
        g2 += gi * gi
    return np.maximum(np.sqrt(g2), 1e-12)


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


def disc_fixture(cap_center: float = 0.6, cap_width: float = 0.3,
                 amplitude: float = 0.1) -> LevelSetDomain:
    """Unit disc in one complex dimension with a cap weight on {Re z > c}.

    The weight amplitude is small enough that the k-sweep up to 64
    excludes every sampled point farther than 1e-3 outside the closure.
    """
    box = np.array([[-1.2, 1.2], [-1.2, 1.2]])

    def rho(p):
        p = np.asarray(p, dtype=float)
        return p[:, 0] ** 2 + p[:, 1] ** 2 - 1.0

    def lam(p):
        p = np.asarray(p, dtype=float)
        return amplitude * _smoothstep((p[:, 0] - cap_center) / cap_width)

    return LevelSetDomain(1, box, rho, lam)


def ball_fixture(cap_center: float = 0.6, cap_width: float = 0.3,
                 amplitude: float = 0.1) -> LevelSetDomain:
    """Unit ball in two complex dimensions with a cap weight on {Re z_1 > c}."""
    box = np.array([[-1.2, 1.2]] * 4)

    def rho(p):
        p = np.asarray(p, dtype=float)
        return (p**2).sum(axis=1) - 1.0

    def lam(p):
        p = np.asarray(p, dtype=float)
        return amplitude * _smoothstep((p[:, 0] - cap_center) / cap_width)

    return LevelSetDomain(2, box, rho, lam)
