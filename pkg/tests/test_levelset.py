import numpy as np
import pytest

from harmcross.errors import NotStronglyPseudoconvexError
from harmcross.levelset import (
    LevelSetDomain,
    ball_fixture,
    build_sublevel_sequence,
    complex_hessian_min_eig,
    disc_fixture,
)

KS = [1, 2, 4, 8, 16, 32, 64]


def test_hessian_oracle_disc():
    # rho = |z|^2 - 1 has complex Hessian identically 1 in one variable
    base = disc_fixture()
    pts = np.array([[1.0, 0.0], [0.6, 0.8], [0.0, -1.0]])
    eig = complex_hessian_min_eig(base, pts)
    assert np.allclose(eig, 1.0, atol=1e-6)


def test_hessian_oracle_ball():
    # |z|^2 - 1 in two variables: the complex Hessian is the identity, and the
    # restriction to the complex tangent space keeps eigenvalue 1
    base = ball_fixture()
    pts = np.array([[1.0, 0, 0, 0], [0.5, 0.5, 0.5, 0.5], [0, 0.6, 0.8, 0]])
    eig = complex_hessian_min_eig(base, pts)
    assert np.allclose(eig, 1.0, atol=1e-5)


def test_disc_sequence_all_checks():
    members, rep = build_sublevel_sequence(disc_fixture(), KS, per_axis=41)
    assert rep.passed
    assert rep.nesting and rep.trace and rep.intersection
    assert rep.onset is not None and rep.onset <= 8
    assert [m.k for m in members] == KS
    doc = rep.to_json()
    assert set(doc["checks"]) == {"nesting", "trace", "intersection", "levi_min_eig"}


def test_ball_sequence_all_checks():
    _, rep = build_sublevel_sequence(ball_fixture(), KS, per_axis=21)
    assert rep.passed and rep.onset <= 8
    assert rep.details["intersection_violations"] == 0
    assert rep.details["trace_violations"] == 0


def test_onset_stable_under_refinement():
    _, rep_a = build_sublevel_sequence(disc_fixture(), KS, per_axis=41)
    _, rep_b = build_sublevel_sequence(disc_fixture(), KS, per_axis=61)
    assert abs(KS.index(rep_a.onset) - KS.index(rep_b.onset)) <= 1


def test_zero_weight_degenerate():
    # lam identically zero: every member equals the base domain
    base = disc_fixture()
    flat = LevelSetDomain(base.dimension, base.box, base.rho, lambda p: np.zeros(len(p)))
    members, rep = build_sublevel_sequence(flat, [1, 2, 4], per_axis=31)
    assert rep.passed
    pts = np.random.default_rng(0).uniform(-1.2, 1.2, (500, 2))
    for m in members:
        assert np.array_equal(m.contains(pts), flat.contains(pts))


def test_nesting_is_pointwise():
    members, _ = build_sublevel_sequence(disc_fixture(), KS, per_axis=21)
    pts = np.random.default_rng(1).uniform(-1.2, 1.2, (2000, 2))
    for m1, m2 in zip(members, members[1:]):
        inside2 = m2.contains(pts)
        inside1 = m1.contains(pts)
        assert not np.any(inside2 & ~inside1)


def test_concave_defining_function_rejected():
    # rho = 1 - |z|^2 cuts out the exterior; its complex Hessian is -1, which
    # fails the positivity precondition on the kept region
    box = np.array([[-2.0, 2.0], [-2.0, 2.0]])

    def rho(p):
        p = np.asarray(p, dtype=float)
        return 1.0 - p[:, 0] ** 2 - p[:, 1] ** 2

    def lam(p):
        p = np.asarray(p, dtype=float)
        return 0.1 * np.clip(p[:, 0] - 0.2, 0.0, 1.0)

    bad = LevelSetDomain(1, box, rho, lam)
    with pytest.raises(NotStronglyPseudoconvexError):
        build_sublevel_sequence(bad, [1, 2, 4], per_axis=31)


def test_violent_weight_never_pseudoconvex():
    # an oscillatory weight keeps huge curvature everywhere on the collar and
    # swamps the defining function for every tested k, so no onset exists
    base = disc_fixture()

    def lam(p):
        p = np.asarray(p, dtype=float)
        gate = np.clip((p[:, 0] - 0.2) / 0.3, 0.0, 1.0)
        g = gate * gate * gate * (gate * (6 * gate - 15) + 10)
        return 0.25 * (1.0 + np.sin(50.0 * p[:, 0])) * g

    wavy = LevelSetDomain(1, base.box, base.rho, lam)
    with pytest.raises(NotStronglyPseudoconvexError):
        build_sublevel_sequence(wavy, [1, 2, 4, 8], per_axis=41)


def test_member_phi_definition():
    base = disc_fixture()
    m = base.with_k(4)
    pts = np.array([[0.9, 0.0], [1.05, 0.0]])
    rho = base.rho(pts)
    lam = base.lam(pts)
    assert np.allclose(m.phi(pts), rho - lam / 4)
    assert np.allclose(base.phi(pts), rho)
