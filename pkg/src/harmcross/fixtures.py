"""Bundled reference domains and boundary sets.

The disc is a dense regular polygon that remembers its angular
parameterization, so circular-arc boundary sets can be written by angle
and the closed-form engine stays applicable.  The slit square is the
square with corners (1, 1), (-1, 1), (-1, -1), (1, -1) cut along the
segment [-1/2, 1/2] of the real axis.  The half disc is a bounded proxy
for the upper half plane.
"""

from __future__ import annotations

import importlib.resources
import json
import math

import numpy as np

from .geometry import (
    BoundaryArc,
    BoundarySet,
    Curve,
    PlanarDomain,
    both_faces,
    domain_to_json,
)

__all__ = [
    "DiscDomain",
    "unit_disc",
    "slit_square",
    "half_disc",
    "disc_arcs_by_angle",
    "slit_faces",
    "square_cross_spec",
    "fixture_domain",
    "fixture_path",
    "write_fixture_files",
]


class DiscDomain(PlanarDomain):
    """Unit circle sampled as a regular polygon, angle-addressable.

    Vertex ``i`` sits at angle ``2*pi*i/n``; arc-length and angle are
    proportional at vertices, so angle intervals aligned to vertices map
    exactly to parameter intervals.
    """

    def __init__(self, n_vertices: int = 2048, radius: float = 1.0, center=(0.0, 0.0)):
        theta = 2.0 * math.pi * np.arange(n_vertices) / n_vertices
        v = np.stack(
            [center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)], axis=1
        )
        super().__init__(Curve(v, closed=True, validate=False), validate=False)
        self.n_vertices = n_vertices
        self.radius = radius
        self.center = (float(center[0]), float(center[1]))
        self.closed_form_kind = "disc"

    def param_of_angle(self, theta: float) -> float:
        frac = (theta / (2.0 * math.pi)) % 1.0
        return frac * self.outer.length

    def angle_of_param(self, t: float) -> float:
        return 2.0 * math.pi * (t % self.outer.length) / self.outer.length

    def angles_of_set(self, boundary_set: BoundarySet):
        """Angle intervals of a boundary set living on this disc's circle."""
        out = []
        for a in boundary_set.arcs:
            if a.curve_id != "outer":
                raise ValueError("disc boundary sets live on the outer circle")
            out.append((self.angle_of_param(a.t0), self.angle_of_param(a.t1) or 2.0 * math.pi))
        return out


def unit_disc(n_vertices: int = 2048) -> DiscDomain:
    """The unit disc as a dense regular polygon (default 2048 vertices)."""
    return DiscDomain(n_vertices=n_vertices)


def disc_arcs_by_angle(disc: DiscDomain, intervals) -> BoundarySet:
    """Boundary set from counterclockwise angle intervals (theta0, theta1).

    ``theta1`` may exceed ``theta0`` by up to ``2*pi``; intervals crossing
    angle 0 are split into two arcs.
    """
    arcs = []
    L = disc.outer.length
    for theta0, theta1 in intervals:
        if not theta1 > theta0:
            raise ValueError("need theta1 > theta0")
        if theta1 - theta0 > 2.0 * math.pi + 1e-12:
            raise ValueError("interval longer than the full circle")
        t0 = disc.param_of_angle(theta0)
        span = (theta1 - theta0) / (2.0 * math.pi) * L
        t1 = t0 + span
        if t1 <= L + 1e-12:
            arcs.append(BoundaryArc("outer", t0, min(t1, L)))
        else:
            arcs.append(BoundaryArc("outer", t0, L))
            arcs.append(BoundaryArc("outer", 0.0, t1 - L))
    return BoundarySet(arcs)


def slit_square() -> PlanarDomain:
    """Square with corners (1,1), (-1,1), (-1,-1), (1,-1), slit along [-1/2, 1/2]."""
    outer = Curve([(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)], closed=True)
    slit = Curve([(-0.5, 0.0), (0.5, 0.0)], closed=False)
    return PlanarDomain(outer, slits=[slit])


def slit_faces(t0: float, t1: float, slit_index: int = 0) -> BoundarySet:
    """Both faces of a parameter interval on a slit (two single-face arcs)."""
    return BoundarySet(both_faces(f"slit:{slit_index}", t0, t1))


def half_disc(radius: float = 100.0, n_arc: int = 2048, flat_breaks=(-1.0, 1.0)) -> PlanarDomain:
    """Bounded proxy for the upper half plane: a half disc on the real axis.

    The flat edge runs from (-radius, 0) to (radius, 0) with explicit
    vertices at ``flat_breaks`` so real intervals with those endpoints map
    exactly to parameter intervals.  Parameter 0 sits at (radius, 0) and
    runs counterclockwise over the circular rim first.
    """
    theta = math.pi * np.arange(n_arc + 1) / n_arc
    rim = np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1)
    xs = [x for x in sorted(flat_breaks) if -radius < x < radius]
    flat = np.array([[x, 0.0] for x in xs])
    v = np.vstack([rim, flat]) if len(flat) else rim
    return PlanarDomain(Curve(v, closed=True, validate=False), validate=False)


def half_disc_interval(domain: PlanarDomain, a: float, b: float) -> BoundarySet:
    """Arc on the flat edge of a half disc covering the real interval [a, b]."""
    c = domain.outer
    v = c.vertices
    flat = np.flatnonzero(np.abs(v[:, 1]) < 1e-12)
    starts = c.segment_param_start()
    param_of_x = {float(v[i, 0]): float(starts[i]) for i in flat}

    # ccw traversal covers the rim first, then the flat edge left to right
    def param_at(x):
        try:
            return param_of_x[float(x)]
        except KeyError:
            raise ValueError(f"x={x} is not a flat-edge vertex; pass it via flat_breaks") from None

    pa, pb = param_at(a), param_at(b)
    if not pb > pa:
        raise ValueError("need a < b inside the flat edge")
    return BoundarySet([BoundaryArc("outer", pa, pb)])


def square_cross_spec():
    """Cross data (D, A, G, B): slit square with both faces of (-1/4, 1/4),
    against the unit disc with its full circle.

    Returns a 4-tuple; wrap it in :class:`harmcross.envelope.CrossSpec`.
    """
    D = slit_square()
    A = slit_faces(0.25, 0.75)  # slit param x + 1/2, so (-1/4, 1/4) is (0.25, 0.75)
    G = unit_disc()
    B = BoundarySet([BoundaryArc("outer", 0.0, G.outer.length)])
    return D, A, G, B


_FIXTURE_BUILDERS = {
    "disc": lambda: unit_disc(),
    "slit_square": slit_square,
    "half_disc": lambda: half_disc(),
}


def fixture_domain(name: str) -> PlanarDomain:
    try:
        return _FIXTURE_BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(_FIXTURE_BUILDERS)}") from None


def fixture_path(name: str):
    """Path of a bundled fixture JSON file."""
    return importlib.resources.files("harmcross.data").joinpath(f"{name}.json")


def write_fixture_files(directory):
    """Write the bundled fixture JSON files into a directory; returns paths."""
    import pathlib

    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in _FIXTURE_BUILDERS.items():
        p = directory / f"{name}.json"
        p.write_text(json.dumps(domain_to_json(build())) + "\n")
        written.append(p)
    D, A, G, B = square_cross_spec()
    from .geometry import boundary_set_to_json

    cross = {
        "D": domain_to_json(D),
        "A": boundary_set_to_json(A),
        "G": domain_to_json(G),
        "B": boundary_set_to_json(B),
    }
    p = directory / "cross_slit_square_disc.json"
    p.write_text(json.dumps(cross) + "\n")
    written.append(p)
    arcs = {"arcs": boundary_set_to_json(A)}
    p = directory / "slit_faces_quarter.json"
    p.write_text(json.dumps(arcs) + "\n")
    written.append(p)
    return written
