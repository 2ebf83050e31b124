import math

import numpy as np
import pytest

from harmcross import (
    BoundaryArc,
    BoundarySet,
    Curve,
    GridConfig,
    PlanarDomain,
    disc_arc_measure,
    grid_measure,
)
from harmcross.errors import (
    DegenerateBoundarySetError,
    GridTooCoarseError,
    InvalidSetError,
    NoConvergenceError,
)
from harmcross.fixtures import disc_arcs_by_angle, slit_faces
from harmcross import _fdgrid

# frozen from the converged grid: measure of both faces of (-1/4, 1/4)
# at 0.5i in the slit square; h = 1/128, 1/256, 1/512 gave
# 0.770595, 0.770655, 0.770682 (first-order at the slit tips)
FROZEN_SLIT_SQUARE_AT_HALF_I = 0.770655


def test_disc_center_half_arc(disc, half_arc):
    f = grid_measure(disc, half_arc, GridConfig(spacing=1 / 64), [0j])
    assert f.values[0] == pytest.approx(0.5, abs=5e-3)
    assert f.stderr[0] == 0.0 and f.engine == "grid"


def test_full_boundary_gives_zero(disc):
    full = BoundarySet([BoundaryArc("outer", 0.0, disc.outer.length)])
    pts = [0j, 0.3 + 0.4j, -0.5j]
    f = grid_measure(disc, full, GridConfig(spacing=1 / 32), pts)
    assert np.all(f.values == 0.0)


def test_agreement_with_closed_form(disc):
    rng = np.random.default_rng(2)
    r = np.sqrt(rng.uniform(0, 0.81, 20))
    th = rng.uniform(0, 2 * np.pi, 20)
    pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    arcs = [(0.0, np.pi / 4)]
    f = grid_measure(disc, disc_arcs_by_angle(disc, arcs), GridConfig(spacing=1 / 128), pts)
    exact = disc_arc_measure(pts[:, 0] + 1j * pts[:, 1], arcs)
    assert np.abs(f.values - exact).max() <= 5e-3


def test_annulus_log_profile():
    # oracle: in r0 < |z| < 1 with data 0 on the inner circle and 1 outside,
    # the measure is log(|z|/r0) / log(1/r0)
    r0 = 0.3
    n = 2048
    th = 2 * np.pi * np.arange(n) / n
    outer = Curve(np.stack([np.cos(th), np.sin(th)], axis=1), closed=True, validate=False)
    inner = Curve(r0 * np.stack([np.cos(th[::4]), np.sin(th[::4])], axis=1), closed=True, validate=False)
    dom = PlanarDomain(outer, holes=[inner], validate=False)
    hole_len = dom.curve("hole:0").length
    aset = BoundarySet([BoundaryArc("hole:0", 0.0, hole_len)])
    radii = np.array([0.45, 0.6, 0.75])
    pts = np.stack([radii, np.zeros(3)], axis=1)
    f = grid_measure(dom, aset, GridConfig(spacing=1 / 128), pts)
    expect = np.log(radii / r0) / math.log(1 / r0)
    assert np.abs(f.values - expect).max() <= 5e-3


def test_slit_square_regression(square, slit_quarter):
    f = grid_measure(square, slit_quarter, GridConfig(spacing=1 / 256), [0.5j, -0.5j])
    assert f.values[0] == pytest.approx(FROZEN_SLIT_SQUARE_AT_HALF_I, abs=2e-4)
    assert 0.0 < f.values[0] < 1.0
    # the data is symmetric across the slit; solutions agree to solver accuracy
    assert f.values[0] == pytest.approx(f.values[1], abs=1e-8)


def test_slit_square_richardson(square, slit_quarter):
    vals = []
    for h in (1 / 64, 1 / 128, 1 / 256):
        f = grid_measure(square, slit_quarter, GridConfig(spacing=h), [0.5j])
        vals.append(f.values[0])
    # increments shrink under refinement
    assert abs(vals[2] - vals[1]) < abs(vals[1] - vals[0])


def test_residual_contract(disc, half_arc):
    f = grid_measure(disc, half_arc, GridConfig(spacing=1 / 64), [0j])
    assert f.meta["residual"] <= 1e-10


def test_set_monotonicity(disc):
    small = disc_arcs_by_angle(disc, [(0.5, 0.5 + np.pi / 3)])
    large = disc_arcs_by_angle(disc, [(0.5, 0.5 + np.pi)])
    rng = np.random.default_rng(3)
    r = np.sqrt(rng.uniform(0, 0.7, 30))
    th = rng.uniform(0, 2 * np.pi, 30)
    pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    cfg = GridConfig(spacing=1 / 64)
    f_small = grid_measure(disc, small, cfg, pts)
    f_large = grid_measure(disc, large, cfg, pts)
    assert np.all(f_large.values <= f_small.values + 1e-8)


def test_boundary_limits_calibrated(disc, half_arc):
    ds = np.array([0.04, 0.02])
    zA = (1 - ds) * np.exp(1j * np.pi / 2)
    zB = (1 - ds) * np.exp(-1j * np.pi / 2)
    # slope calibration from the closed form, with headroom
    C = 1.25 * max(
        (disc_arc_measure(zA, [(0, np.pi)]) / ds).max(),
        ((1 - disc_arc_measure(zB, [(0, np.pi)])) / ds).max(),
    )
    cfg = GridConfig(spacing=1 / 256)
    fA = grid_measure(disc, half_arc, cfg, np.stack([zA.real, zA.imag], axis=1))
    fB = grid_measure(disc, half_arc, cfg, np.stack([zB.real, zB.imag], axis=1))
    assert np.all(fA.values <= C * ds + 1e-3)          # toward the set: to 0
    assert np.all(1 - fB.values <= C * ds + 1e-3)      # away from it: to 1


def test_grid_too_coarse(square, slit_quarter):
    with pytest.raises(GridTooCoarseError):
        grid_measure(square, slit_quarter, GridConfig(spacing=0.45), [0.5j])


def test_no_convergence_raises(disc, half_arc):
    _fdgrid.clear_cache()
    with pytest.raises(NoConvergenceError):
        grid_measure(disc, half_arc, GridConfig(spacing=1 / 32, residual_tol=1e-30, max_iters=1), [0j])
    _fdgrid.clear_cache()


def test_degenerate_set_rejected(disc):
    with pytest.raises(DegenerateBoundarySetError):
        grid_measure(disc, BoundarySet([]), GridConfig(spacing=1 / 32), [0j])


def test_both_sided_slit_arc_rejected(square):
    aset = BoundarySet([BoundaryArc("slit:0", 0.25, 0.75, "both")])
    with pytest.raises(InvalidSetError):
        grid_measure(square, aset, GridConfig(spacing=1 / 64), [0.5j])


def test_exterior_point_rejected(disc, half_arc):
    with pytest.raises(ValueError, match="interior"):
        grid_measure(disc, half_arc, GridConfig(spacing=1 / 32), [2.0 + 0j])


def test_solution_cache_reused(disc, half_arc):
    cfg = GridConfig(spacing=1 / 64)
    grid_measure(disc, half_arc, cfg, [0j])
    before = _fdgrid.SOLVE_COUNTER[0]
    f2 = grid_measure(disc, half_arc, cfg, [0.2 + 0.1j])
    assert _fdgrid.SOLVE_COUNTER[0] == before
    assert 0.0 <= f2.values[0] <= 1.0


def test_grid_determinism(disc, half_arc):
    cfg = GridConfig(spacing=1 / 64)
    a = grid_measure(disc, half_arc, cfg, [0.1 + 0.1j]).values
    _fdgrid.clear_cache()
    b = grid_measure(disc, half_arc, cfg, [0.1 + 0.1j]).values
    assert np.array_equal(a, b)
