"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints one PASS/FAIL line; the same lines are repeated in the
terminal summary. Run alone with ``pytest tests/test_acceptance.py -s``.
"""
import contextlib
import math
import sys

import numpy as np
import pytest
from scipy import integrate, optimize, stats

from conclab import bounds as B
from conclab import geometry as G
from conclab import montecarlo as M
from conclab import sphere_exact as S
from conclab.barycenter import EmpiricalMeasure, euclidean_barycenter, karcher_barycenter
from conclab.cli import main as cli_main

from conftest import ACCEPTANCE

N = 100_000
HALF_PI = math.pi / 2


@contextlib.contextmanager
def criterion(k, text):
    try:
        yield
    except BaseException:
        ACCEPTANCE[k] = (False, text)
        print(f"criterion {k}: FAIL  {text}")
        raise
    ACCEPTANCE[k] = (True, text)
    print(f"criterion {k}: PASS  {text}")


def sigma4(p, n):
    return 4.0 * math.sqrt(max(p * (1.0 - p), 0.0) / n)


def test_01_constant_consistency():
    with criterion(1, "general constants at C_X=1 equal the manifold constants (m=1..64); spot values"):
        for m in range(1, 65):
            g, s = B.constants(m, 1.0), B.manifold_constants(m)
            for a, b in ((g.A, s.A), (g.A_tilde, s.A_tilde), (g.B, s.B), (g.B_tilde, s.B_tilde)):
                assert abs(a - b) <= 1e-12 * abs(b)
        # plain-float evaluation of the displayed m=1 formulas
        sq = math.sqrt(math.pi)
        A1 = 1 + sq / 4 * 2 * math.e ** 3 * (2 + math.e ** 0.5)
        At1 = 1 + sq / 2 * math.e * (2 + math.e ** 0.5)
        Bt1 = 1 + sq * math.e
        k = B.constants(1, 1.0)
        for got, ref, quoted in ((k.A, A1, 65.949), (k.A_tilde, At1, 9.790), (k.B_tilde, Bt1, 5.818)):
            assert abs(got - ref) <= 1e-12 * ref
            assert abs(got - quoted) <= 1e-3 * quoted


def test_02_sphere_concentration_domination():
    with criterion(2, "alpha_S^n <= exp(-sqrt(n) r/3) and <= exp(-(n-1) r^2/2), n in {2,10,100,1000}"):
        r = np.linspace(0, HALF_PI, 202)[1:-1]
        bad = 0
        for n in (2, 10, 100, 1000):
            a = S.alpha_sphere_exact(n, r)
            bad += int(np.sum(a > np.exp(-math.sqrt(n) * r / 3)))
            bad += int(np.sum(a > np.exp(-(n - 1) * r * r / 2)))
        assert bad == 0


def test_03_gaussian_tail_domination():
    with criterion(3, "gamma_m{|x|>=r} <= min{B_m e^(-r^2/16m), B~_m e^(-r^2/32m)}; chi tail at 1.959964"):
        bad = 0
        for m in (1, 2, 3, 5, 10, 50):
            k = B.manifold_constants(m)
            for r in np.linspace(0, 10 * math.sqrt(m), 500):
                exact = B.log_gaussian_tail_exact(m, r)
                bound = min(k.log_B - r * r / (16 * m), k.log_B_tilde - r * r / (32 * m))
                bad += exact > bound + 1e-12
        assert bad == 0
        tail, _ = integrate.quad(lambda s: math.exp(-s * s / 2) / math.sqrt(2 * math.pi), 1.959964, np.inf,
                                 epsabs=1e-15)
        assert abs(2 * tail - 0.05) <= 1e-4
        assert abs(B.gaussian_tail_exact(1, 1.959964) - 2 * tail) <= 1e-4
        assert abs(B.gaussian_tail_exact(1, 1.959964) - 0.05) <= 1e-4


def test_04_cor41_domination():
    with criterion(4, "tube complement <= four-way bound on the (n, m, r) lattice; identity with r -> 2r/pi"):
        bad, worst = 0, 0.0
        for n in (10, 50, 200):
            for m in (1, 3, n // 2):
                for r in np.linspace(0, HALF_PI, 50):
                    q = S.TubeQuery(n, m, float(r))
                    bad += S.tube_complement_exact(q) > S.cor41_bound(q).value
                    a, b = S.cor41_bound(q).log_value, S.cor41_via_manifold_bound(q).log_value
                    worst = max(worst, abs(a - b) / max(1.0, abs(b)))
        assert bad == 0
        assert worst <= 1e-12


def test_05_exact_vs_monte_carlo():
    with criterion(5, "tube complement (n=50, m=3) matches N=1e5 frequencies within 4 sigma"):
        x = G.sample_sphere(50, N, 2024)
        d = np.arcsin(np.clip(np.linalg.norm(x[:, :3], axis=1), 0, 1))
        r_grid = np.array(M.default_r_grid())
        freq = M.tail_counts(d, r_grid) / N
        tested = 0
        for r, f in zip(r_grid, freq):
            p = float(S.tube_complement_exact(50, 3, r))
            if p * N < M.MIN_EXPECTED_HITS:
                continue
            tested += 1
            assert abs(f - p) <= sigma4(p, N), (r, f, p)
        assert tested >= 10


def test_06_theorem_end_to_end():
    with criterion(6, "g_c o proj: S^50 -> H^2 tail below the Gaussian bound + 4 sigma; Karcher residual; tail identity"):
        cfg = M.ExperimentConfig(n=50, m=2, map="hyp", samples=N, seed=6, profile="gaussian")
        assert cfg.concentration_profile() == B.ConcentrationProfile(1, 49 / 2, 2)
        rep = M.run_verification(cfg)
        for row in rep.rows:
            assert row["empirical"] <= row["bound_thm_main"] + sigma4(row["empirical"], N), row
            assert row["count"] == row["count_f0"]
        assert rep.checks["barycenter_converged"] and rep.checks["barycenter_residual"] <= 1e-9
        assert rep.checks["tail_identity"]


def test_07_moment_bounds():
    with criterion(7, "V_2^2 of the projection (n=50, m=3) below both bounds; V_q <= V~_q for q in {1,2,4}"):
        x = G.sample_sphere(50, N, 7)
        f0 = x[:, :3] - x[:, :3].mean(axis=0)
        prof = B.ConcentrationProfile(1, 49 / 2, 2)
        mo = {m.q: m for m in M.empirical_moments(f0, (1.0, 2.0, 4.0))}
        v2sq = mo[2.0].V ** 2
        assert v2sq <= B.vq_bound_first(prof, 3, 2) and v2sq <= B.vq_bound_second(prof, 3, 2)
        for q in (1.0, 2.0, 4.0):
            assert mo[q].V_sub <= mo[q].V_tilde + mo[q].centering


def test_08_lemma_tails():
    with criterion(8, "median and two-point deviation tails of x_1 on S^30 within 2 alpha + 4 sigma"):
        x = G.sample_sphere(30, N, 8)
        r_med = np.linspace(0.01, HALF_PI, 100)
        med = M.median_deviation_tail(x, M.first_coordinate, r_med)
        for r, e in zip(r_med, med):
            assert e <= min(1.0, 2 * S.alpha_sphere_exact(30, r)) + sigma4(e, N)
        k = M.DEFAULT_PAIR_CAP
        r_pair = np.linspace(0.01, 2.0, 100)
        pair = M.two_point_deviation_tail(x, M.first_coordinate, r_pair, k)
        for r, e in zip(r_pair, pair):
            # pairs of k points: the effective sample size is k, not k^2
            assert e <= min(1.0, 2 * S.alpha_sphere_exact(30, r / 2)) + sigma4(e, k)


def _ball_oracle(points, weights):
    ys = points[:, 1:] / (1.0 + points[:, :1])
    ny = np.sum(ys * ys, axis=1)

    def obj(s):
        p = s / (1.0 + math.sqrt(1.0 + s @ s))
        arg = 1.0 + 2.0 * np.sum((ys - p) ** 2, axis=1) / ((1.0 - p @ p) * (1.0 - ny))
        return float(weights @ np.arccosh(arg) ** 2)

    res = optimize.minimize(obj, np.zeros(points.shape[1] - 1), method="BFGS", options={"gtol": 1e-12})
    res = optimize.minimize(obj, res.x, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
    return G.to_hyperboloid(res.x)


def test_09_barycenters():
    with criterion(9, "Euclidean mean to 1e-14; geodesic midpoint to 1e-8; 50-point H^3 oracle to 1e-6, residual <= 1e-9"):
        rng = np.random.default_rng(9)
        pts = rng.normal(size=(300, 3))
        w = rng.uniform(size=300)
        w /= w.sum()
        b = euclidean_barycenter(EmpiricalMeasure(pts, w))
        for j in range(3):
            assert abs(b[j] - math.fsum(w[i] * pts[i, j] for i in range(300))) <= 1e-14
        y = G.to_hyperboloid(rng.normal(scale=2.0, size=(2, 3)))
        mid = karcher_barycenter(EmpiricalMeasure.uniform(y, "hyperbolic")).point
        half = float(G.hyp_distance(y[0], y[1])) / 2
        assert abs(G.hyp_distance(mid, y[0]) - half) <= 1e-8 and abs(G.hyp_distance(mid, y[1]) - half) <= 1e-8
        y = G.to_hyperboloid(rng.normal(size=(50, 3)))
        wu = np.full(50, 1 / 50)
        res = karcher_barycenter(EmpiricalMeasure(y, wu, "hyperbolic"))
        assert res.residual <= 1e-9
        assert G.hyp_distance(res.point, _ball_oracle(y, wu)) <= 1e-6


def test_10_artstein():
    with criterion(10, "u(pi/3, 1/2) = ln(4/3)/2; u >= 0; asymptotic trend; envelope contains exact in both cases"):
        assert abs(S.artstein_u(math.pi / 3, 0.5) - 0.5 * math.log(4 / 3)) <= 1e-12
        rs = np.linspace(0, HALF_PI, 102)[1:-1]
        ls = np.linspace(0, 1, 102)[1:-1]
        assert min(S.artstein_u(r, l) for r in rs for l in ls) >= -1e-15
        errs = [abs(S.tube_complement_exact(n, n // 2, math.pi / 3) / S.artstein_asymptotic(n, 0.5, math.pi / 3) - 1)
                for n in (100, 200, 400)]
        assert errs[0] > errs[1] > errs[2]
        assert len(S.ARTSTEIN_C_GRID) == 64 and 0 < S.ARTSTEIN_C_GRID.min() and S.ARTSTEIN_C_GRID.max() <= 3
        for n, m in ((20, 10), (50, 25)):
            boundary = math.asin(math.sqrt(1 - m / n))
            for r in (math.pi / 6, math.pi / 3):
                assert (r < boundary) == (r == math.pi / 6)  # one radius per case
                lo, hi = S.artstein_envelope(n, m, r)
                exact = S.tube_measure_exact(n, m, r)
                assert abs(exact - (1 - S.tube_complement_exact(n, n - m, r))) <= 1e-14
                assert lo is not None and hi is not None and lo <= exact <= hi


def test_11_determinism(tmp_path):
    with criterion(11, "verify --preset standard byte-identical across runs and across --threads 1 vs 8"):
        outs = []
        for k, threads in enumerate(("1", "1", "8")):
            path = tmp_path / f"report{k}.json"
            code = cli_main(["verify", "--preset", "standard", "--seed", "42", "--threads", threads,
                             "--out", str(path), "--no-timestamp"])
            assert code == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] == outs[2]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
