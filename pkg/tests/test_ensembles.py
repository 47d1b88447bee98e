"""Subgaussian laws, sample matrices, and psi-norm estimation."""

import numpy as np
import pytest

from widthlab import (ConfigError, GAUSSIAN, RADEMACHER, UNIFORM_SCALED,
                      EuclideanBall, IntersectionL1L2, L1Ball, LinearImage,
                      coordinate_restrict, derive_rng, law_from_descriptor,
                      moment_psi2_proxy, psi1_estimate, psi2_estimate,
                      sample_matrix)


@pytest.mark.parametrize("law", [GAUSSIAN, RADEMACHER, UNIFORM_SCALED],
                         ids=lambda l: l.kind)
def test_laws_are_standardized(law):
    rng = derive_rng(0, "law-moments")
    x = law.sample(rng, 400_000)
    assert abs(np.mean(x)) < 0.01
    assert abs(np.var(x) - 1.0) < 0.01


def test_law_descriptor():
    assert law_from_descriptor("rademacher") is RADEMACHER
    assert law_from_descriptor({"law": "gaussian"}) is GAUSSIAN
    with pytest.raises(ConfigError):
        law_from_descriptor("cauchy")


def test_sample_matrix_determinism_and_restrict():
    g1 = sample_matrix(GAUSSIAN, 20, 13, seed=42)
    g2 = sample_matrix(GAUSSIAN, 20, 13, seed=42)
    assert np.array_equal(g1.rows, g2.rows)
    assert not np.array_equal(g1.rows, sample_matrix(GAUSSIAN, 20, 13, seed=43).rows)
    sub = g1.restrict([3, 7, 11])
    assert sub.N == 3 and sub.n == 13
    assert np.array_equal(sub.rows, g1.rows[[3, 7, 11]])


def test_sample_matrix_isotropy():
    # marginals <row, t> have variance ||t||^2 for every law
    for law in (GAUSSIAN, RADEMACHER, UNIFORM_SCALED):
        g = sample_matrix(law, 200_000, 4, seed=1)
        t = np.array([0.5, -1.0, 2.0, 0.25])
        v = np.var(g.rows @ t)
        assert v == pytest.approx(np.sum(t ** 2), rel=0.02)


def test_csv_round_trip(tmp_path):
    g = sample_matrix(RADEMACHER, 8, 5, seed=9)
    path = tmp_path / "gamma.csv"
    g.to_csv(path)
    back = np.loadtxt(path, delimiter=",", ndmin=2)
    assert np.array_equal(back, g.rows)


def test_psi2_gaussian_bracket():
    # analytic value sqrt(8/3) = 1.633
    est = psi2_estimate(GAUSSIAN, seed=3, size=100_000)
    assert 1.55 <= est <= 1.72
    assert GAUSSIAN.declared_psi2 == pytest.approx(np.sqrt(8.0 / 3.0))


def test_psi2_rademacher_and_bounded():
    # |xi| = 1: E exp(xi^2/c^2) = e^{1/c^2} <= 2 iff c >= 1/sqrt(ln 2)
    est = psi2_estimate(RADEMACHER, seed=4, size=50_000)
    assert est == pytest.approx(1.0 / np.sqrt(np.log(2)), rel=1e-3)
    est_u = psi2_estimate(UNIFORM_SCALED, seed=4, size=100_000)
    assert est_u == pytest.approx(UNIFORM_SCALED.declared_psi2, rel=0.02)


def test_psi_estimates_from_samples():
    rng = derive_rng(0, "psi-sample")
    x = rng.standard_normal(100_000)
    assert psi2_estimate(x) == pytest.approx(np.sqrt(8.0 / 3.0), rel=0.05)
    # squared-gaussian minus one is psi1 but not psi2
    y = x ** 2 - 1.0
    p1 = psi1_estimate(y)
    assert 1.5 <= p1 <= 3.5
    assert psi2_estimate(np.zeros(2000)) == 0.0
    with pytest.raises(ConfigError):
        psi2_estimate(x[:100])  # too few samples


def test_moment_proxy_comparable():
    rng = derive_rng(0, "proxy")
    x = rng.standard_normal(100_000)
    proxy = moment_psi2_proxy(x)
    direct = psi2_estimate(x)
    assert 0.2 * direct <= proxy <= 5.0 * direct


def test_project_body_support_consistency():
    T = EuclideanBall(1.0, 12)
    from widthlab import project_body
    g = sample_matrix(GAUSSIAN, 5, 12, seed=6)
    V = project_body(T, g)
    z = derive_rng(0, "proj-dir").standard_normal((40, 5))
    assert np.allclose(V.support(z), T.support(z @ g.rows), rtol=1e-12)


def test_coordinate_restrict_consistency():
    # restricting the image matches evaluating the full body on padded directions
    T = L1Ball(1.0, 10)
    g = sample_matrix(GAUSSIAN, 6, 10, seed=8)
    V = LinearImage(T, g.rows)
    I = [2, 5]
    W = coordinate_restrict(V, I)
    z = derive_rng(0, "restrict-dir").standard_normal((30, 2))
    padded = np.zeros((30, 6))
    padded[:, I] = z
    assert np.allclose(W.support(z), V.support(padded), rtol=1e-12)


def test_coordinate_restrict_plain_bodies():
    assert coordinate_restrict(EuclideanBall(2.0, 9), [1, 4, 6]).dim == 3
    body = coordinate_restrict(IntersectionL1L2(0.5, 9), [0, 3])
    assert isinstance(body, IntersectionL1L2) and body.dim == 2
