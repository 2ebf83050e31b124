import numpy as np
import pytest

from harmcross import (
    BoundaryArc,
    BoundarySet,
    CrossSpec,
    GridConfig,
    disc_arc_measure,
    find_separator,
)
from harmcross.errors import NoWitnessError
from harmcross.fixtures import disc_arcs_by_angle, square_cross_spec, unit_disc


@pytest.fixture(scope="module")
def half_spec(disc, half_arc):
    return CrossSpec(disc, half_arc, disc, half_arc)


def _straddle_pair(rng):
    # pick z, then slide w along a ray until the level sum crosses 1
    z = complex(*rng.uniform(-0.5, 0.5, 2))
    phi = rng.uniform(0, 2 * np.pi)
    oz = disc_arc_measure(z, [(0.0, np.pi)])

    def f(t):
        return oz + disc_arc_measure(t * np.exp(1j * phi), [(0.0, np.pi)]) - 1.0

    lo, hi = 0.0, 0.95
    if f(lo) * f(hi) > 0:
        return None
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return z, 0.5 * (lo + hi) * np.exp(1j * phi)


def test_level_sum_witness(half_spec):
    rng = np.random.default_rng(3)
    found = 0
    while found < 3:
        pair = _straddle_pair(rng)
        if pair is None:
            continue
        wit = find_separator(half_spec, pair, cfg=None, ball_radius=0.08, tol=1e-3)
        assert wit.omega_kind == "cross_envelope_k"
        assert wit.boundary_residual <= 1e-3
        # the witness stays inside the query ball
        z3 = complex(wit.witness_point[0], wit.witness_point[1])
        w3 = complex(wit.witness_point[2], wit.witness_point[3])
        assert abs(z3 - pair[0]) <= 0.08 + 1e-12
        assert abs(w3 - pair[1]) <= 0.08 + 1e-12
        found += 1


def test_level_sum_witness_grid_engine(half_spec):
    rng = np.random.default_rng(8)
    pair = None
    while pair is None:
        pair = _straddle_pair(rng)
    wit = find_separator(half_spec, pair, cfg=GridConfig(spacing=1 / 64),
                         ball_radius=0.1, tol=1e-3)
    assert wit.omega_kind == "cross_envelope_k"
    assert wit.boundary_residual <= 1e-3


def test_no_witness_on_crossable_set():
    D, A, G, B = square_cross_spec()
    spec = CrossSpec(D, A, G, B)
    with pytest.raises(NoWitnessError) as exc:
        find_separator(spec, (0.1 + 0j, 0.2 + 0.1j), cfg=None,
                       ball_radius=0.04, ks=range(1, 65), k_max=64)
    assert len(exc.value.diagnostics) == 64


def test_one_sided_boundary_witness():
    # query on a one-sided arc: the witness sits on the companion offset,
    # within 2/k of the query coordinate
    D, A, G, B = square_cross_spec()
    L = D.outer.length
    # an arc on the right edge of the square: params wrap near the curve end
    edge_arc = BoundarySet([BoundaryArc("outer", 7.0, 7.8)])
    spec = CrossSpec(D, edge_arc, G, B)
    z0 = complex(*D.outer.point_at(7.4)[0])
    wit = find_separator(spec, (z0, 0.1 + 0.1j), cfg=None, ball_radius=0.2, tol=1e-3)
    assert wit.omega_kind == "product_k"
    z2 = complex(wit.witness_point[0], wit.witness_point[1])
    assert abs(z2 - z0) <= 2.0 / wit.k + 1e-9
    assert wit.boundary_residual <= 1e-3
    # the partner coordinate is carried through untouched
    assert complex(wit.witness_point[2], wit.witness_point[3]) == 0.1 + 0.1j


def test_two_sided_endpoint_witness(square, disc):
    # tiny two-sided arcs: the neighborhood component shrinks onto the arc,
    # and its endpoint enters the ball once 1/k is small enough
    from harmcross.geometry import both_faces

    A = BoundarySet(both_faces("slit:0", 0.48, 0.52))
    B = disc_arcs_by_angle(disc, [(0.0, np.pi)])
    spec = CrossSpec(square, A, disc, B)
    z0 = 0.0 + 0.0j   # the slit midpoint, inside the arc
    wit = find_separator(spec, (z0, 0.2j), cfg=None, ball_radius=0.05, ks=range(1, 65))
    assert wit.omega_kind == "product_k"
    z2 = complex(wit.witness_point[0], wit.witness_point[1])
    assert abs(z2 - z0) <= 0.05
    assert abs(z2.imag) < 1e-12   # endpoint lies on the slit


def test_swapped_side_witness(disc, square):
    # the near-boundary coordinate is the second factor; the witness must
    # land in the second slot
    D, A, G, B = square_cross_spec()
    edge_arc = BoundarySet([BoundaryArc("outer", 7.0, 7.8)])
    spec = CrossSpec(G, B, D, edge_arc)   # swapped roles
    w0 = complex(*D.outer.point_at(7.4)[0])
    wit = find_separator(spec, (0.1 + 0.1j, w0), cfg=None, ball_radius=0.2)
    assert wit.omega_kind == "product_k"
    w2 = complex(wit.witness_point[2], wit.witness_point[3])
    assert abs(w2 - w0) <= 2.0 / wit.k + 1e-9
    assert complex(wit.witness_point[0], wit.witness_point[1]) == 0.1 + 0.1j


def test_query_needs_both_coordinates(half_spec):
    with pytest.raises(ValueError):
        find_separator(half_spec, (0.1 + 0.1j,), cfg=None)
