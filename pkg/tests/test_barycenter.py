import math

import numpy as np
import pytest
from scipy import optimize

from conclab import geometry as G
from conclab.barycenter import (
    EmpiricalMeasure,
    euclidean_barycenter,
    expectation_of_map,
    karcher_barycenter,
    karcher_objective,
    median,
    reduce_to_tangent,
)


def poincare_oracle(points, weights):
    """Minimize sum w d(p, y)^2 in Poincare-ball coordinates with BFGS.

    Shares no code with the library: the ball distance formula is used directly.
    """
    ys = points[:, 1:] / (1.0 + points[:, :1])
    ny = np.sum(ys * ys, axis=1)

    def obj(s):
        # s parametrizes the ball through p = s / (1 + sqrt(1 + |s|^2))
        p = s / (1.0 + math.sqrt(1.0 + s @ s))
        np_ = p @ p
        arg = 1.0 + 2.0 * np.sum((ys - p) ** 2, axis=1) / ((1.0 - np_) * (1.0 - ny))
        return float(weights @ np.arccosh(arg) ** 2)

    s0 = np.zeros(points.shape[1] - 1)
    res = optimize.minimize(obj, s0, method="BFGS", options={"gtol": 1e-12, "xrtol": 1e-14})
    res = optimize.minimize(obj, res.x, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000})
    return G.to_hyperboloid(res.x)


# --- median -----------------------------------------------------------------

def test_median_examples():
    assert median([0, 1, 2]) == 1
    assert median([0, 1]) == 0
    assert median([5.0]) == 5.0
    with pytest.raises(ValueError):
        median([])


@pytest.mark.parametrize("data", [
    [3, 1, 2, 2, 2, 5],
    [1, 1, 1, 1],
    [4, 3, 2, 1, 0, 0, 0, 9],
    list(np.random.default_rng(0).integers(0, 4, size=37)),
])
def test_median_contract(data):
    x = np.asarray(data, dtype=float)
    m = median(x)
    assert np.mean(x >= m) >= 0.5 and np.mean(x <= m) >= 0.5
    # lower tie-break: no smaller sample value satisfies both
    for v in np.unique(x[x < m]):
        assert not (np.mean(x >= v) >= 0.5 and np.mean(x <= v) >= 0.5)


def test_weighted_median_contract():
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.integers(0, 6, size=11).astype(float)
        w = rng.uniform(size=11)
        w /= w.sum()
        m = median(x, w)
        assert w[x >= m].sum() >= 0.5 - 1e-12 and w[x <= m].sum() >= 0.5 - 1e-12


def test_median_of_sphere_coordinate():
    N = 100_000
    x = G.sample_sphere(20, N, 4)
    assert abs(median(x[:, 0])) <= 4 / math.sqrt(N)


# --- Euclidean -----------------------------------------------------------------

def test_euclidean_examples():
    nu = EmpiricalMeasure.uniform([[0.0, 0.0], [2.0, 0.0]])
    np.testing.assert_array_equal(euclidean_barycenter(nu), [1.0, 0.0])
    single = EmpiricalMeasure.uniform([[3.0, -1.0]])
    np.testing.assert_array_equal(euclidean_barycenter(single), [3.0, -1.0])


def test_euclidean_matches_naive_loop():
    rng = np.random.default_rng(2)
    pts = rng.normal(size=(500, 4))
    w = rng.uniform(size=500)
    w /= w.sum()
    got = euclidean_barycenter(EmpiricalMeasure(pts, w))
    for j in range(4):
        ref = math.fsum(w[k] * pts[k, j] for k in range(500))
        assert abs(got[j] - ref) <= 1e-14
    # Karcher condition in R^m: mean of (y - b) vanishes
    assert np.linalg.norm(w @ (pts - got)) < 1e-14


def test_measure_validation():
    with pytest.raises(ValueError):
        EmpiricalMeasure(np.zeros((2, 2)), [0.7, 0.7])
    with pytest.raises(ValueError):
        EmpiricalMeasure(np.zeros((0, 2)), [])
    with pytest.raises(ValueError):
        EmpiricalMeasure(np.zeros((2, 2)), [0.5, 0.5], space="torus")


# --- Karcher -----------------------------------------------------------------

def test_karcher_single_point():
    y = G.to_hyperboloid([[0.3, -1.2]])
    res = karcher_barycenter(EmpiricalMeasure.uniform(y, "hyperbolic"))
    assert res.converged and res.iterations <= 1
    assert G.hyp_distance(res.point, y[0]) < 1e-12


def test_karcher_two_points_is_midpoint():
    rng = np.random.default_rng(3)
    for _ in range(20):
        y = G.to_hyperboloid(rng.normal(scale=2.0, size=(2, 3)))
        b = karcher_barycenter(EmpiricalMeasure.uniform(y, "hyperbolic")).point
        d = float(G.hyp_distance(y[0], y[1]))
        assert abs(G.hyp_distance(b, y[0]) - d / 2) <= 1e-8
        assert abs(G.hyp_distance(b, y[1]) - d / 2) <= 1e-8


def test_karcher_against_ball_oracle():
    rng = np.random.default_rng(4)
    y = G.to_hyperboloid(rng.normal(scale=1.0, size=(50, 3)))
    w = np.full(50, 1 / 50)
    res = karcher_barycenter(EmpiricalMeasure(y, w, "hyperbolic"))
    assert res.converged and res.residual <= 1e-9
    oracle = poincare_oracle(y, w)
    assert G.hyp_distance(res.point, oracle) <= 1e-6


def test_karcher_weighted_and_spread_monotone():
    rng = np.random.default_rng(5)
    y = G.to_hyperboloid(rng.normal(scale=4.0, size=(200, 2)))
    w = rng.uniform(size=200)
    w /= w.sum()
    res = karcher_barycenter(EmpiricalMeasure(y, w, "hyperbolic"), check_monotone=True)
    assert res.converged
    # a genuine minimum: small perturbations never lower the objective
    for v in rng.normal(size=(20, 3)) * 1e-3:
        v = v + G.minkowski_dot(res.point, v) * res.point
        assert karcher_objective(G.exp_map(res.point, v), y, w) >= karcher_objective(res.point, y, w) - 1e-12


def test_karcher_reports_nonconvergence():
    rng = np.random.default_rng(6)
    y = G.to_hyperboloid(rng.normal(scale=2.0, size=(30, 2)))
    res = karcher_barycenter(EmpiricalMeasure.uniform(y, "hyperbolic"), tol=1e-14, max_iter=1)
    assert res.iterations == 1 and not res.converged
    with pytest.raises(ValueError):
        karcher_barycenter(EmpiricalMeasure.uniform(y, "hyperbolic"), tol=0.0)


# --- expectation and reduction ---------------------------------------------------

def test_expectation_of_projection():
    n, m, N = 30, 3, 100_000
    x = G.sample_sphere(n, N, 8)
    E = expectation_of_map(x, G.projection(m))
    assert np.linalg.norm(E) <= 4 * math.sqrt(m / (n + 1)) / math.sqrt(N)


def test_expectation_of_constant():
    x = G.sample_sphere(4, 10, 0)
    E = expectation_of_map(x, G.constant([2.0, -1.0]))
    np.testing.assert_array_equal(E, [2.0, -1.0])


def test_expectation_of_embedded_projection():
    x = G.sample_sphere(50, 100_000, 9)
    f = G.projection(2).then(G.hyperbolic_embedding())
    res = expectation_of_map(x, f, full_output=True)
    assert res.converged
    assert G.hyp_distance(res.point, G.origin(2)) <= 0.1


def test_reduce_to_tangent_properties():
    x = G.sample_sphere(10, 5000, 10)
    f = G.projection(2).then(G.hyperbolic_embedding(2.0))
    res = expectation_of_map(x, f, full_output=True)
    f0 = reduce_to_tangent(x, f, res.point)
    np.testing.assert_allclose(np.linalg.norm(f0, axis=1), G.hyp_distance(f(x), res.point), rtol=1e-10, atol=1e-13)
    assert np.linalg.norm(f0.mean(axis=0)) <= 1e-10 + 1e-9
    # Euclidean target: plain difference
    p = G.projection(3)
    E = expectation_of_map(x, p)
    np.testing.assert_array_equal(reduce_to_tangent(x, p, E), p(x) - E)
    # constant map at E: zeros
    c = G.constant(G.origin(2), target="hyperbolic")
    assert np.all(reduce_to_tangent(x, c, G.origin(2)) == 0.0)
