import numpy as np
import pytest

from harmcross import (
    BoundaryArc,
    BoundarySet,
    GridConfig,
    WosConfig,
    cross_validate,
)
from harmcross.errors import DegenerateBoundarySetError
from harmcross.fixtures import disc_arcs_by_angle


def _disc_points(n, seed=4):
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.uniform(0, 0.7, n))
    th = rng.uniform(0, 2 * np.pi, n)
    return np.stack([r * np.cos(th), r * np.sin(th)], axis=1)


def test_all_engines_agree(disc):
    aset = disc_arcs_by_angle(disc, [(0.5, 0.5 + np.pi)])
    rep = cross_validate(
        disc,
        aset,
        _disc_points(20),
        grid_cfg=GridConfig(spacing=1 / 128),
        wos_cfg=WosConfig(samples=30_000, seed=6),
    )
    assert set(rep.columns) == {"grid", "wos", "closed_form"}
    assert rep.passed and not rep.flags.any()


def test_degenerate_set_error_path(disc):
    with pytest.raises(DegenerateBoundarySetError):
        cross_validate(
            disc,
            BoundarySet([]),
            _disc_points(5),
            grid_cfg=GridConfig(spacing=1 / 64),
            wos_cfg=WosConfig(samples=500, seed=1),
        )


def test_full_boundary_all_zero(disc):
    full = BoundarySet([BoundaryArc("outer", 0.0, disc.outer.length)])
    rep = cross_validate(
        disc,
        full,
        _disc_points(8),
        grid_cfg=GridConfig(spacing=1 / 64),
        wos_cfg=WosConfig(samples=2_000, seed=3),
    )
    for vals in rep.columns.values():
        assert np.all(vals == 0.0)
    assert rep.passed


def test_needs_two_engines(square, slit_quarter):
    # the slit square has no closed form, so a single engine is not enough
    with pytest.raises(ValueError, match="two"):
        cross_validate(square, slit_quarter, [[0.0, 0.5]], grid_cfg=GridConfig(spacing=1 / 64))


def test_reference_callable_and_json(disc):
    aset = disc_arcs_by_angle(disc, [(0.0, np.pi / 2)])
    from harmcross import disc_arc_measure

    rep = cross_validate(
        disc,
        aset,
        _disc_points(6),
        grid_cfg=GridConfig(spacing=1 / 128),
        reference=lambda z: disc_arc_measure(z, [(0.0, np.pi / 2)]),
    )
    doc = rep.to_json()
    assert doc["pass"] is True
    assert len(doc["points"]) == 6
    assert {"x", "y", "values", "discrepancy", "threshold", "flagged"} <= set(doc["points"][0])
