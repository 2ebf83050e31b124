import numpy as np
import pytest

from harmcross import (
    BoundaryArc,
    BoundarySet,
    CrossSpec,
    GridConfig,
    WosConfig,
    check_monotone_convergence,
    disc_arc_measure,
    enlarge_boundary_set,
    envelope_membership,
    envelope_slice,
)
from harmcross.errors import IndeterminateMembershipError, NotNestedError
from harmcross.fixtures import disc_arcs_by_angle, square_cross_spec
from harmcross import _fdgrid


@pytest.fixture(scope="module")
def disc_cross(disc):
    A = disc_arcs_by_angle(disc, [(0.0, 1.4 * np.pi)])
    B = disc_arcs_by_angle(disc, [(0.0, np.pi)])
    return CrossSpec(disc, A, disc, B)


def test_membership_center_arithmetic(disc_cross):
    res = envelope_membership(disc_cross, 0j, 0j)
    assert res.inside and res.margin == pytest.approx(0.2, abs=1e-12)
    assert res.stderr == 0.0


def test_membership_full_circle_factor(disc):
    # with the full circle on the second factor its measure vanishes, so
    # membership is decided by the first factor alone and holds on all of D
    A = disc_arcs_by_angle(disc, [(0.0, np.pi)])
    B = BoundarySet([BoundaryArc("outer", 0.0, disc.outer.length)])
    spec = CrossSpec(disc, A, disc, B)
    for z in (0j, 0.5 + 0.3j, -0.7j, 0.9 + 0j):
        res = envelope_membership(spec, z, 0.4 + 0.4j)
        assert res.inside


def test_membership_outside_near_boundary(disc):
    # z close to the complement of the set: its measure is close to 1, so any
    # partner with measure above 0.1 puts the pair outside
    A = disc_arcs_by_angle(disc, [(0.0, np.pi)])
    B = disc_arcs_by_angle(disc, [(0.0, 1.2 * np.pi)])
    spec = CrossSpec(disc, A, disc, B)
    z = (1 - 1e-3) * np.exp(-1j * np.pi / 2)
    w = 0j
    assert disc_arc_measure(w, [(0.0, 1.2 * np.pi)]) > 0.1
    res = envelope_membership(spec, complex(z), w)
    assert not res.inside


def test_membership_indeterminate(disc, half_arc):
    # symmetric half arcs at the centers: the margin is exactly zero, which a
    # Monte Carlo engine cannot resolve
    spec = CrossSpec(disc, half_arc, disc, half_arc)
    with pytest.raises(IndeterminateMembershipError):
        envelope_membership(
            spec, 0j, 0j,
            cfg_D=WosConfig(samples=4_000, seed=8),
            cfg_G=WosConfig(samples=4_000, seed=9),
        )


def test_membership_symmetry(disc_cross):
    z, w = 0.3 + 0.1j, -0.2 + 0.4j
    a = envelope_membership(disc_cross, z, w)
    b = envelope_membership(disc_cross.swapped(), w, z)
    assert a.inside == b.inside
    assert a.margin == pytest.approx(b.margin, abs=1e-14)


def test_slice_product_case(disc):
    # both factors carry their full circles: both measures vanish and the
    # envelope is the whole product
    full = BoundarySet([BoundaryArc("outer", 0.0, disc.outer.length)])
    spec = CrossSpec(disc, full, disc, full)
    sl = envelope_slice(spec, 0.2 + 0.1j, grid=(12, 12), cfg_free=GridConfig(1 / 64),
                        cfg_fixed=GridConfig(1 / 64))
    assert sl.mask.all()
    assert np.all(sl.margin == pytest.approx(1.0, abs=1e-9))


def test_slice_level_set_oracle(disc, half_arc):
    # fixed center of the second factor contributes exactly 1/2, so the mask
    # is the closed-form sub-level set {measure < 1/2}
    spec = CrossSpec(disc, half_arc, disc, half_arc)
    sl = envelope_slice(spec, 0j, grid=(20, 20), cfg_free=GridConfig(1 / 128),
                        cfg_fixed=None)
    z = sl.points[:, 0] + 1j * sl.points[:, 1]
    exact = disc_arc_measure(z, [(0.0, np.pi)])
    decided = np.abs(sl.margin) > 5e-3
    assert np.array_equal(sl.mask[decided], exact[decided] < 0.5)


def test_slice_cross_fixture_all_inside():
    D, A, G, B = square_cross_spec()
    spec = CrossSpec(D, A, G, B)
    cfg = GridConfig(spacing=1 / 128)
    for w in (0j, 0.4 - 0.2j):
        sl = envelope_slice(spec, w, grid=(16, 16), cfg_free=cfg, cfg_fixed=cfg)
        assert sl.mask.all()
        assert sl.margin.min() > 0
    doc = sl.summary()
    assert doc["inside"] == doc["count"]
    assert doc["spec_hash"] == spec.content_key()


def test_slice_openness(disc, half_arc):
    # no isolated member points: wherever the margin clears the field's
    # neighbor-to-neighbor variation, the grid neighbors are members too
    spec = CrossSpec(disc, half_arc, disc, half_arc)
    n = 24
    sl = envelope_slice(spec, 0.2 + 0.2j, grid=(n, n), cfg_free=None, cfg_fixed=None)
    index = {tuple(np.round(p, 12)): i for i, p in enumerate(map(tuple, sl.points))}
    xs = np.unique(sl.points[:, 0])
    ys = np.unique(sl.points[:, 1])
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]

    def neighbors(i):
        x, y = sl.points[i]
        for nb in ((x + dx, y), (x - dx, y), (x, y + dy), (x, y - dy)):
            j = index.get(tuple(np.round(nb, 12)))
            if j is not None:
                yield j

    variation = max(
        abs(sl.margin[i] - sl.margin[j]) for i in range(len(sl.points)) for j in neighbors(i)
    )
    checked = 0
    for i in range(len(sl.points)):
        if sl.mask[i] and sl.margin[i] > variation:
            for j in neighbors(i):
                assert sl.mask[j]
            checked += 1
    assert checked > 0
    assert np.array_equal(sl.mask, sl.margin > 0)


def test_slice_anti_monotone_in_set(disc):
    small = disc_arcs_by_angle(disc, [(0.0, 0.6 * np.pi)])
    large = disc_arcs_by_angle(disc, [(0.0, 1.2 * np.pi)])
    B = disc_arcs_by_angle(disc, [(0.0, np.pi)])
    sl_small = envelope_slice(CrossSpec(disc, small, disc, B), 0.1j, grid=(14, 14),
                              cfg_free=None, cfg_fixed=None)
    sl_large = envelope_slice(CrossSpec(disc, large, disc, B), 0.1j, grid=(14, 14),
                              cfg_free=None, cfg_fixed=None)
    # growing the set can only grow the member region
    assert np.all(sl_large.mask | ~sl_small.mask | ~sl_small.mask)
    assert np.all(sl_large.margin >= sl_small.margin - 1e-12)


def test_slice_reuses_solves(square, slit_quarter, disc):
    D, A, G, B = square_cross_spec()
    spec = CrossSpec(D, A, G, B)
    cfg = GridConfig(spacing=1 / 64)
    envelope_slice(spec, 0j, grid=(8, 8), cfg_free=cfg, cfg_fixed=cfg)
    before = _fdgrid.SOLVE_COUNTER[0]
    envelope_slice(spec, 0.3 + 0.2j, grid=(8, 8), cfg_free=cfg, cfg_fixed=cfg)
    assert _fdgrid.SOLVE_COUNTER[0] == before  # both factor fields cached


def test_slice_csv_export(tmp_path, disc, half_arc):
    spec = CrossSpec(disc, half_arc, disc, half_arc)
    sl = envelope_slice(spec, 0j, grid=(6, 6), cfg_free=None, cfg_fixed=None)
    path = tmp_path / "slice.csv"
    sl.to_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "x,y,margin,mask"
    assert len(lines) == len(sl.points) + 1


# ---------------------------------------------------------------------------
# neighborhood families
# ---------------------------------------------------------------------------


def test_enlarge_boundary_set(disc, square):
    L = disc.outer.length
    aset = BoundarySet([BoundaryArc("outer", 0.1, 0.4)])
    grown = enlarge_boundary_set(disc, aset, 0.2)
    assert grown.total_length == pytest.approx(0.3 + 0.4, abs=1e-12)
    # wrap across parameter zero splits in two arcs
    wrapped = enlarge_boundary_set(disc, BoundarySet([BoundaryArc("outer", 0.05, 0.2)]), 0.1)
    assert len(wrapped.arcs) == 2
    assert wrapped.total_length == pytest.approx(0.15 + 0.2, abs=1e-12)
    # open curves clip at the ends
    slit_arc = BoundarySet([BoundaryArc("slit:0", 0.1, 0.3, "plus")])
    clipped = enlarge_boundary_set(square, slit_arc, 0.5)
    assert clipped.arcs[0].t0 == 0.0 and clipped.arcs[0].t1 == pytest.approx(0.8)
    # growth beyond the whole closed curve caps at the full circle
    capped = enlarge_boundary_set(disc, aset, L)
    assert capped.total_length == pytest.approx(L)


def test_monotone_convergence_center_formula(disc, half_arc):
    ks = [1, 2, 4, 8, 16]
    family = {k: disc_arcs_by_angle(disc, [(-1.0 / k, np.pi + 1.0 / k)]) for k in ks}
    rep = check_monotone_convergence(disc, half_arc, family, [0j], cfg=None)
    assert rep.passed
    assert np.allclose(rep.discrepancy, [1 / (np.pi * k) for k in ks], atol=1e-12)


def test_monotone_convergence_constant_family(disc, half_arc):
    family = {k: half_arc for k in (1, 2, 3)}
    rep = check_monotone_convergence(disc, half_arc, family, [0j, 0.4 + 0.1j], cfg=None)
    assert rep.passed
    assert np.all(rep.discrepancy == 0.0)


def test_monotone_convergence_slit_square(square, slit_quarter):
    family = {k: enlarge_boundary_set(square, slit_quarter, 0.25 / k) for k in (2, 4, 8)}
    rep = check_monotone_convergence(
        square, slit_quarter, family, [0.5j], cfg=GridConfig(spacing=1 / 64)
    )
    assert rep.nondecreasing


def test_monotone_convergence_not_nested(disc, half_arc):
    family = {1: disc_arcs_by_angle(disc, [(0.0, np.pi + 0.1)]),
              2: disc_arcs_by_angle(disc, [(0.0, np.pi + 0.2)])}
    with pytest.raises(NotNestedError):
        check_monotone_convergence(disc, half_arc, family, [0j], cfg=None)
    shifted = {1: disc_arcs_by_angle(disc, [(0.3, np.pi + 0.3)])}
    with pytest.raises(NotNestedError):
        check_monotone_convergence(disc, half_arc, shifted, [0j], cfg=None)
