"""Inclusion certificates: soundness of refutation, net certification, cubes."""

import json

import numpy as np
import pytest

from widthlab import (CubeBall, Ellipsoid, EuclideanBall, GAUSSIAN,
                      InclusionOpts, IntersectionL1L2, L1Ball, LinearImage,
                      ball_in_body, body_in_ball, cube_in_body,
                      dvoretzky_certificate, max_cube_side,
                      min_support_on_sphere, sample_matrix, sphere_net)


def test_sphere_net_covers():
    for dim in (1, 2, 3):
        net = sphere_net(dim, 0.05)
        assert np.allclose(np.linalg.norm(net, axis=1), 1.0, atol=1e-12)
        # every random unit vector has a net point within the resolution
        rng = np.random.default_rng(dim)
        z = rng.standard_normal((500, dim))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        dists = np.min(np.linalg.norm(z[:, None, :] - net[None, :, :], axis=2), axis=1)
        assert dists.max() <= 0.05 + 1e-12


def test_min_support_analytic_cases():
    assert min_support_on_sphere(EuclideanBall(2.0, 7)).value == pytest.approx(2.0)
    assert min_support_on_sphere(CubeBall(1.0, 4)).value == pytest.approx(1.0)
    # inradius of B_1^n is 1/sqrt(n)
    assert min_support_on_sphere(L1Ball(1.0, 9)).value == pytest.approx(1.0 / 3.0)
    assert min_support_on_sphere(Ellipsoid([0.4, 1.0, 2.0])).value == pytest.approx(0.4)


def test_min_support_l2_image_svd():
    rng = np.random.default_rng(21)
    A = rng.standard_normal((5, 12))
    V = LinearImage(EuclideanBall(1.0, 12), A)
    res = min_support_on_sphere(V)
    assert res.mode == "analytic"
    assert res.value == pytest.approx(np.linalg.svd(A, compute_uv=False)[-1], rel=1e-10)
    # fat matrix: the image is degenerate, inf is 0
    B = rng.standard_normal((12, 5))
    flat = LinearImage(EuclideanBall(1.0, 5), B)
    assert min_support_on_sphere(flat).value == pytest.approx(0.0, abs=1e-10)


def test_heuristic_upper_bounds_net():
    # dim <= 3: heuristic value can only sit above the net-certified bound
    rng = np.random.default_rng(22)
    A = rng.standard_normal((3, 8))
    V = LinearImage(L1Ball(1.0, 8), A)
    net = min_support_on_sphere(V, opts=InclusionOpts(net_dim_cap=3))
    assert net.mode == "net"
    heur = min_support_on_sphere(V, opts=InclusionOpts(net_dim_cap=0, seed=1))
    assert heur.mode == "heuristic"
    assert heur.value >= net.certified_lower_bound() - 1e-9
    assert heur.value <= net.value * 1.02 + 1e-9


def test_ball_certificates_exact_body():
    B = EuclideanBall(1.0, 6)
    assert ball_in_body(B, 0.99).status == "verified"
    assert ball_in_body(B, 1.01).status == "refuted"
    assert body_in_ball(B, 1.01).status == "verified"
    assert body_in_ball(B, 0.99).status == "refuted"
    inner, outer = dvoretzky_certificate(B, 0.9, 1.1)
    assert inner.status == "verified" and outer.status == "verified"


def test_refutation_is_sound():
    # a refuting witness z satisfies h(z) < rho * ||z|| by direct evaluation
    rng = np.random.default_rng(23)
    A = rng.standard_normal((4, 10))
    V = LinearImage(L1Ball(1.0, 10), A)
    smin = min_support_on_sphere(V, opts=InclusionOpts(seed=2)).value
    cert = ball_in_body(V, smin * 1.5, InclusionOpts(seed=3))
    assert cert.status == "refuted"
    z = np.asarray(cert.witness)
    assert V.support(z) < smin * 1.5 * np.linalg.norm(z) - 1e-12


def test_scale_equivariance():
    rng = np.random.default_rng(24)
    A = rng.standard_normal((3, 7))
    V = LinearImage(L1Ball(1.0, 7), A)
    r1 = min_support_on_sphere(V, opts=InclusionOpts(seed=4))
    r2 = min_support_on_sphere(V.scaled(3.0), opts=InclusionOpts(seed=4))
    assert r2.value == pytest.approx(3.0 * r1.value, rel=1e-9)


def test_cube_certificates_boundary():
    # r B_inf^4 inside B_2^4 iff r <= 1/2; tolerance band around the boundary
    B = EuclideanBall(1.0, 4)
    assert cube_in_body(B, 0.49).status == "verified"
    assert cube_in_body(B, 0.51).status == "refuted"
    assert cube_in_body(B, 0.5).status in ("inconclusive", "verified")


def test_max_cube_side_analytic():
    assert max_cube_side(EuclideanBall(1.0, 4)).value == pytest.approx(0.5)
    assert max_cube_side(L1Ball(1.0, 4)).value == pytest.approx(0.25)
    assert max_cube_side(CubeBall(0.8, 5)).value == pytest.approx(0.8)
    a = np.array([3.0, 4.0, 12.0])
    expect = 1.0 / np.sqrt(np.sum(1.0 / a ** 2))
    assert max_cube_side(Ellipsoid(a)).value == pytest.approx(expect)


def test_max_cube_side_net_vs_heuristic():
    rng = np.random.default_rng(25)
    A = rng.standard_normal((3, 6))
    V = LinearImage(L1Ball(1.0, 6), A)
    net = max_cube_side(V, InclusionOpts(net_dim_cap=3))
    heur = max_cube_side(V, InclusionOpts(net_dim_cap=0, seed=5))
    assert net.mode == "net" and heur.mode == "heuristic"
    assert heur.value == pytest.approx(net.value, rel=0.05)


def test_cube_consistency_with_max_side():
    rng = np.random.default_rng(26)
    A = rng.standard_normal((4, 9))
    V = LinearImage(L1Ball(1.0, 9), A)
    side = max_cube_side(V, InclusionOpts(seed=6)).value
    assert cube_in_body(V, 1.3 * side, InclusionOpts(seed=7)).status == "refuted"
    assert cube_in_body(V, 0.5 * side, InclusionOpts(seed=8)).status != "refuted"


def test_certificate_json_round_trip():
    cert = ball_in_body(EuclideanBall(1.0, 3), 0.5)
    blob = json.loads(cert.to_json())
    assert blob["status"] == "verified"
    assert blob["margin"] == pytest.approx(0.5)
    assert "witness" in blob


def test_heuristic_inner_not_reported_verified():
    # heuristic minimization cannot certify an inner inclusion
    rng = np.random.default_rng(27)
    A = rng.standard_normal((6, 12))
    V = LinearImage(L1Ball(1.0, 12), A)
    smin = min_support_on_sphere(V, opts=InclusionOpts(seed=9)).value
    cert = ball_in_body(V, 0.5 * smin, InclusionOpts(seed=10))
    assert cert.status == "inconclusive"
    assert cert.margin > 0
