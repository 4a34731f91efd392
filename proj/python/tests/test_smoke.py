import numpy as np
import pytest

import urt

M2 = np.array([[0.5, 0.2], [0.1, 0.4]])
U2 = np.array([0.1, 0.1])
LINF2 = np.eye(2)


def test_norm_eval():
    assert urt.norm_eval(np.eye(2), np.array([0.3, -0.7])) == pytest.approx(0.7)
    assert urt.norm_eval(np.ones((1, 2)), np.array([0.3, -0.7])) == pytest.approx(1.0)


def test_radius_two_user():
    rho = urt.radius(M2, U2, LINF2, np.array([1.0, 1.0]))
    assert rho == pytest.approx(0.7236067977499789, abs=1e-9)


def test_eigenpair_matches_dense_route():
    vec, lam = urt.eigenpair(M2, U2, LINF2)
    assert urt.norm_eval(LINF2, vec) == pytest.approx(1.0, abs=1e-12)
    dense = max(
        urt.spectral_radius(M2 + np.outer(U2, row)) for row in LINF2
    )
    assert lam == pytest.approx(dense, abs=1e-9)


def test_feasible_interior_has_power():
    verdict = urt.feasible(M2, U2, LINF2, np.array([1.0, 1.0]))
    assert verdict["status"] == "feasible_interior"
    p = verdict["power"]
    assert p is not None and np.max(p) <= 1 + 1e-9
    # p is the fixed point of diag(s) T, so it solves (I - M) p = u here.
    assert np.allclose(p, np.linalg.solve(np.eye(2) - M2, U2), atol=1e-8)


def test_membership_tokens():
    boundary = urt.radial_boundary(M2, U2, LINF2, np.array([1.0, 1.0]))
    s = boundary["sinr"]
    assert urt.sinr_membership(M2, U2, LINF2, 0.5 * s) == "interior"
    assert urt.sinr_membership(M2, U2, LINF2, s) == "boundary"
    assert urt.sinr_membership(M2, U2, LINF2, 2.0 * s) == "exterior"
    assert urt.rate_membership(M2, U2, LINF2, np.log1p(s)) == "boundary"


def test_boundary_cloud_sits_on_the_boundary():
    cloud = urt.sample_boundary(M2, U2, LINF2, count=64, seed=3)
    assert cloud["power"].shape == (64, 2)
    assert np.max(np.abs(cloud["rho"] - 1.0)) <= 1e-6
    assert np.allclose(cloud["rate"], np.log1p(cloud["sinr"]), atol=1e-12)


def test_sample_boundary_deterministic():
    a = urt.sample_boundary(M2, U2, LINF2, count=16, seed=9)
    b = urt.sample_boundary(M2, U2, LINF2, count=16, seed=9, threads=2)
    assert np.array_equal(a["power"], b["power"])
    assert np.array_equal(a["rho"], b["rho"])


def test_certificates():
    dominant = np.array([[2.0, 10.0], [0.1, 1.0]])
    assert urt.is_inverse_z(dominant)
    assert urt.det2_screen(dominant) == []
    report = urt.zcompat(dominant, np.ones(2))
    assert report["overall"] == "z_compatible_unconstrained"

    uncert = np.array(
        [[0.34, 1.4e-4, 9.4e-2], [5.8e-2, 0.44, 4.3e-2], [3.4, 7.4e-4, 0.5]]
    )
    report = urt.zcompat(uncert, np.ones(3))
    assert report["overall"] == "not_certified"
    assert (0, 2) in report["failing_pairs"]


def test_min_shift_monotone():
    M = np.array([[0.0, 1.0], [1.0, 0.0]])
    alpha = urt.min_shift(M, np.array([1e-9, 1e-9]))
    assert alpha == pytest.approx(1.0, rel=1e-4)


def test_conjecture_counterexample():
    M = np.array([[11.0, 10.0, 1.0], [1.0, 11.0, 10.0], [10.0, 10.0, 10.0]])
    report = urt.conjecture(M, np.array([0.5, 0.1, 1.0]), np.full(3, 0.5), 0.9)
    assert report["sym_psd"]
    assert report["quasiconvexity_violated"]
    assert report["lhs"] == pytest.approx(12.355430962846839, abs=1e-9)
    assert report["rhs"] == pytest.approx(12.304718283092248, abs=1e-9)


def test_sumrate_round_trip():
    sol = urt.sumrate(M2, U2, LINF2, np.array([1.0, 1.0]))
    assert sol["certified_convex"]
    assert sol["boundary_residual"] <= 1e-8
    p = urt.recover_power(M2, U2, LINF2, sol["rates"])
    assert np.max(p) <= 1 + 1e-9
    assert sol["value"] == pytest.approx(float(np.sum(sol["rates"])))


def test_scenario_generation_is_deterministic():
    a = urt.generate_scenario(seed=5, realizations=40)
    b = urt.generate_scenario(seed=5, realizations=40)
    assert np.array_equal(a["M"], b["M"])
    assert np.array_equal(a["u"], b["u"])
    c = urt.generate_scenario(seed=6, realizations=40)
    assert not np.array_equal(a["M"], c["M"])
    # The reduction is row-wise division by b.
    assert np.allclose(a["M"].diagonal() * a["b"], a["C"].diagonal(), rtol=1e-12)


def test_probe_certified_model_has_no_violations():
    report = urt.convexity_probe(M2, U2, LINF2, trials=200, seed=2, space="rate")
    assert report["violations"] == 0
