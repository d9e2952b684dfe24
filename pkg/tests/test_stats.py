import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from raglab import connections as cx
from raglab import graphs, stats
from raglab.graphs import GraphSample
from raglab.group import GroupSpec
from raglab.rng import stream

import oracles


def graph(adj, p=0.5):
    return GraphSample.from_adjacency(np.asarray(adj, bool), p)


def test_trivial_cycle_values():
    k3 = np.ones((3, 3), bool) & ~np.eye(3, dtype=bool)
    assert stats.tau3(graph(k3), 0).value == 1
    assert stats.tau3(graph(np.zeros((3, 3))), Fraction(1, 2)).exact == Fraction(-1, 8)
    c4 = np.zeros((4, 4), bool)
    for i in range(4):
        c4[i, (i + 1) % 4] = c4[(i + 1) % 4, i] = True
    assert stats.tau4(graph(c4), 0).value == 1
    assert stats.tau4(graph(np.zeros((4, 4))), Fraction(1, 2)).exact == Fraction(3, 16)
    assert stats.tau3(graph(np.zeros((6, 6))), 0).value == 0
    assert stats.tau4(graph(np.zeros((6, 6))), 0).value == 0


@given(st.integers(3, 8), st.fractions(min_value=0, max_value=1, max_denominator=10), st.integers(0, 10 ** 6))
def test_cycle_statistics_match_enumeration(n, p, seed):
    A = oracles.random_graph(n, 0.5, np.random.default_rng(seed))
    g = graph(A)
    assert stats.tau3(g, p).exact == oracles.signed_cycles(A, p, 3)
    assert stats.tau4(g, p).exact == oracles.signed_cycles(A, p, 4)
    assert stats.triangle_count(g) == oracles.signed_cycles(A, 0, 3)


def test_cycle_counts():
    assert stats.cycle_count(10, 3) == math.comb(10, 3)
    assert stats.cycle_count(10, 4) == 3 * math.comb(10, 4)
    K = np.ones((7, 7), bool) & ~np.eye(7, dtype=bool)
    assert stats.tau4(graph(K), 0).value == stats.cycle_count(7, 4)


def test_tau4_mean_zero_under_er():
    v = [stats.tau4(graphs.sample_er(24, 0.5, stream(20, t)), 0.5).value for t in range(500)]
    assert abs(np.mean(v)) <= 4 * np.std(v, ddof=1) / math.sqrt(500)


def test_expected_tau_fourier():
    kappa = Fraction(1, 5)
    lv = cx.make_parity_blend(6, kappa).fourier_levels()
    assert stats.expected_tau_fourier(lv, 10, 3) == pytest.approx(math.comb(10, 3) * float(kappa) ** 3)
    assert stats.expected_tau_fourier(lv, 10, 4) == pytest.approx(3 * math.comb(10, 4) * float(kappa) ** 4)
    h = cx.make_hnmaj(12)
    assert abs(stats.expected_tau_fourier(h.exhaustive_levels(), 9, 3)) < 1e-12


def _exact_tau3_moments(conn, n):
    """Mean and variance of tau3 under the RAG by enumerating every latent tuple."""
    d = conn.d
    table = conn.table()
    p = float(conn.mean_p)
    vals = []
    for xs in itertools.product(range(2 ** d), repeat=n):
        A = np.zeros((n, n), bool)
        for i in range(n):
            for j in range(i + 1, n):
                A[i, j] = A[j, i] = table[xs[i] ^ xs[j]] == 1
        B = A - p
        np.fill_diagonal(B, 0)
        vals.append(np.trace(B @ B @ B) / 6)
    v = np.array(vals)
    return v.mean(), v.var()


@pytest.mark.parametrize("profile", [[0, 0, 1, 1], [1, 0, 0, 1], [0, 1, 1, 0]])
def test_variance_tau3_exact_matches_enumeration(profile):
    conn = cx.make_profile_connection(profile)
    mean, var = _exact_tau3_moments(conn, 5)
    assert stats.variance_tau3_exact(conn, 5) == pytest.approx(var, rel=1e-10, abs=1e-12)
    assert stats.expected_tau_fourier(conn.fourier_levels(), 5, 3) == pytest.approx(mean, abs=1e-12)


def test_variance_bound_form():
    maj = cx.make_majority(3)
    bound = stats.variance_tau3_fourier(maj.fourier_levels(), 10, float(maj.mean_p))
    assert bound >= stats.variance_tau3_exact(maj, 10)
    v = [stats.tau3(graphs.sample_rag(10, maj, stream(21, t)), 0.5).value for t in range(5000)]
    assert np.var(v, ddof=1) <= bound
    const = cx.make_constant(4, 0)
    assert stats.variance_tau3_fourier(const.fourier_levels(), 10, 0.0) == 0
    with pytest.raises(ValueError):
        stats.variance_tau3_fourier(cx.make_parity_blend(4, 0.25).fourier_levels(), 10)


def test_exact_variance_against_monte_carlo():
    maj = cx.make_majority(3)
    v = np.array([stats.tau3(graphs.sample_rag(10, maj, stream(22, t)), 0.5).value for t in range(5000)])
    exact = stats.variance_tau3_exact(maj, 10)
    # standard error of the sample variance from the fourth central moment
    m4 = np.mean((v - v.mean()) ** 4)
    se = math.sqrt((m4 - v.var() ** 2) / v.size)
    assert abs(v.var(ddof=1) - exact) <= 4 * se


def test_walsh_statistic():
    A = np.zeros((4, 4), bool)
    A[0, 1] = A[1, 0] = True
    assert stats.walsh_statistic(graph(A), 0.5, [(0, 1)]) == pytest.approx(1.0)
    assert stats.walsh_statistic(graph(A), 0.5, [(0, 1), (1, 2)]) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        stats.walsh_statistic(graph(A), 0.5, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        stats.walsh_statistic(graph(A), 0.5, [(i, i + 1) for i in range(3)], k_max=2)
    single = [stats.walsh_statistic(graphs.sample_er(6, 0.3, stream(23, t)), 0.3, [(0, 1)]) for t in range(4000)]
    assert abs(np.mean(single)) <= 4 / math.sqrt(4000)
    assert abs(np.var(single) - 1) <= 0.1
    H = [(0, 1), (1, 2), (2, 0)]
    tri = [stats.walsh_statistic(graphs.sample_er(6, 0.3, stream(24, t)), 0.3, H) for t in range(4000)]
    assert abs(np.mean(tri)) <= 4 * np.std(tri) / math.sqrt(4000)


def test_walsh_on_random_indicator_rag_is_small():
    hc = GroupSpec.hypercube(20)
    ind = cx.sample_random_indicator(hc, 0.5, stream(25, 0))
    H = [(0, 1), (1, 2), (2, 0)]
    v = [stats.walsh_statistic(graphs.sample_rag(3, ind, stream(25, 1, t)), 0.5, H) for t in range(4000)]
    assert abs(np.mean(v)) <= 4 / math.sqrt(4000) + 2 ** (-20 / 3)


def test_neighborhood_scan():
    A = np.zeros((5, 5), bool)
    A[0, 1] = A[1, 0] = True
    found, pair = stats.neighborhood_identical_scan(graph(A))
    assert found
    u, v = pair
    assert all(A[u, w] == A[v, w] for w in range(5) if w not in pair)
    # a path on 4 vertices: no twin pair
    P = np.zeros((4, 4), bool)
    for i in range(3):
        P[i, i + 1] = P[i + 1, i] = True
    assert stats.neighborhood_identical_scan(graph(P)) == (False, None)


@given(st.integers(2, 14), st.integers(0, 10 ** 6))
def test_neighborhood_scan_matches_definition(n, seed):
    A = oracles.random_graph(n, 0.5, np.random.default_rng(seed))
    ref = any(all(A[u, w] == A[v, w] for w in range(n) if w not in (u, v))
              for u, v in itertools.combinations(range(n), 2))
    assert stats.neighborhood_identical_scan(graph(A))[0] == ref


def test_detection_harness():
    er = graphs.ERModel(30, 0.5)
    same = stats.detection_experiment(er, er, "tau3", 200, seed=1)
    assert abs(same.power - 0.5) <= 4 * math.sqrt(0.25 / 400) + 0.05
    assert same.threshold == pytest.approx(sum(same.means) / 2)
    rag = graphs.RAGModel(30, cx.make_parity_blend(8, Fraction(1, 2)))
    rep = stats.detection_experiment(rag, er, "tau3", 100, seed=2)
    assert rep.power >= 0.95 and 0 <= rep.power <= 1
    again = stats.detection_experiment(rag, er, "tau3", 100, seed=2, workers=2)
    assert again.to_json(True) == rep.to_json(True)
    rows = list(rep.csv_rows())
    assert len(rows) == 200 and rows[0][:3] == (0, 0, "tau3")
    with pytest.raises(ValueError):
        stats.detection_experiment(rag, er, "tau3", 0, seed=2)


def test_separation_grows_with_n():
    maj = cx.make_majority(5)
    seps = [stats.detection_experiment(graphs.RAGModel(n, maj), graphs.ERModel(n, 0.5), "tau3", 150, seed=3).separation
            for n in (8, 16, 32)]
    assert seps[0] <= seps[1] <= seps[2]
