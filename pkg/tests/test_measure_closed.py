import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from harmcross import disc_arc_measure, halfplane_interval_measure
from harmcross.errors import PointOnBoundaryError


def poisson_quadrature(z: complex, arcs):
    """Independent oracle: numerically integrate the Poisson kernel over the
    complement of the arcs.  Never touches the conformal-shift formula."""

    def kernel(theta):
        w = complex(math.cos(theta), math.sin(theta))
        return (1 - abs(z) ** 2) / abs(w - z) ** 2 / (2 * math.pi)

    # complement of the arcs inside [0, 2*pi), wrapped pieces split in two
    twopi = 2 * math.pi
    pieces = []
    for t0, t1 in arcs:
        a = t0 % twopi
        b = a + (t1 - t0)
        if b <= twopi:
            pieces.append((a, b))
        else:
            pieces.append((a, twopi))
            pieces.append((0.0, b - twopi))
    pieces.sort()
    total = 0.0
    cursor = 0.0
    for a, b in pieces:
        if a > cursor:
            total += quad(kernel, cursor, a, limit=200, epsabs=1e-13)[0]
        cursor = max(cursor, b)
    if cursor < twopi:
        total += quad(kernel, cursor, twopi, limit=200, epsabs=1e-13)[0]
    return total


FROZEN_RIGHT_HALF_ARC_AT_HALF = 0.20483276469913347  # oracle output, frozen


def test_oracle_agreement():
    cases = [
        (0.5 + 0j, [(-math.pi / 2, math.pi / 2)]),
        (0.3 - 0.4j, [(0.0, math.pi / 4)]),
        (-0.2 + 0.6j, [(1.0, 2.5), (4.0, 5.5)]),
    ]
    for z, arcs in cases:
        assert disc_arc_measure(z, arcs) == pytest.approx(poisson_quadrature(z, arcs), abs=1e-10)


def test_frozen_regression_value():
    arcs = [(-math.pi / 2, math.pi / 2)]
    assert poisson_quadrature(0.5 + 0j, arcs) == pytest.approx(FROZEN_RIGHT_HALF_ARC_AT_HALF, abs=1e-10)
    assert disc_arc_measure(0.5 + 0j, arcs) == pytest.approx(FROZEN_RIGHT_HALF_ARC_AT_HALF, abs=1e-12)


def test_disc_center_cases():
    assert disc_arc_measure(0j, [(0.0, math.pi)]) == pytest.approx(0.5, abs=1e-14)
    assert disc_arc_measure(0j, [(0.0, 2 * math.pi)]) == 0.0
    assert disc_arc_measure(0j, []) == 1.0


def test_disc_boundary_point_rejected():
    with pytest.raises(PointOnBoundaryError):
        disc_arc_measure(1.0 + 0j, [(0.0, 1.0)])
    with pytest.raises(PointOnBoundaryError):
        disc_arc_measure(1.0 - 1e-13 + 0j, [(0.0, 1.0)])


def test_disc_overlapping_arcs_rejected():
    with pytest.raises(ValueError):
        disc_arc_measure(0j, [(0.0, 1.0), (0.5, 1.5)])


@settings(max_examples=80, deadline=None)
@given(
    st.complex_numbers(max_magnitude=0.95, allow_nan=False, allow_infinity=False),
    st.floats(0.0, 2 * math.pi - 0.02),
    st.floats(0.01, 1.0),
    st.floats(0.01, 1.0),
)
def test_disc_range_monotone_additive(z, start, span1, span2):
    small = [(start, start + span1)]
    large = [(start, start + span1 + span2)]
    v_small = disc_arc_measure(z, small)
    v_large = disc_arc_measure(z, large)
    assert 0.0 <= v_large <= v_small <= 1.0
    # deficits add over disjoint arcs
    other = [(start + span1, start + span1 + span2)]
    assert v_large == pytest.approx(v_small + disc_arc_measure(z, other) - 1.0, abs=1e-12)


def test_halfplane_examples():
    # the interval [-1, 1] subtends the angle pi/2 at i: between the rays to
    # -1 and 1 the opening is 3*pi/4 - pi/4
    assert halfplane_interval_measure(1j, [(-1.0, 1.0)]) == pytest.approx(0.5, abs=1e-14)
    assert halfplane_interval_measure(1j, []) == 1.0
    big = halfplane_interval_measure(1j, [(-1e6, 1e6)])
    assert big <= 1e-5
    assert big == pytest.approx(2 * math.atan(1e-6) / math.pi, rel=1e-6)


def test_halfplane_boundary_rejected():
    with pytest.raises(PointOnBoundaryError):
        halfplane_interval_measure(1.0 + 0j, [(0.0, 1.0)])
    with pytest.raises(PointOnBoundaryError):
        halfplane_interval_measure(1 - 1j, [(0.0, 1.0)])


@settings(max_examples=80, deadline=None)
@given(
    st.floats(-5, 5),
    st.floats(0.05, 20),
    st.floats(-10, 10),
    st.floats(0.1, 5),
)
def test_halfplane_range_and_monotone(x, y, a, width):
    z = complex(x, y)
    v1 = halfplane_interval_measure(z, [(a, a + width)])
    v2 = halfplane_interval_measure(z, [(a, a + 2 * width)])
    assert 0.0 <= v2 <= v1 <= 1.0


def test_vectorized_evaluation():
    zs = np.array([0.1 + 0.2j, -0.3 + 0.1j, 0.5j])
    vals = disc_arc_measure(zs, [(0.0, math.pi)])
    assert vals.shape == (3,)
    singles = [disc_arc_measure(z, [(0.0, math.pi)]) for z in zs]
    assert np.allclose(vals, singles, atol=1e-15)
