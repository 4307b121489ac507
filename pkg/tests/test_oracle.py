from fractions import Fraction
import math

import numpy as np
import pytest

from clusterattach import graph, oracle, urn

K3 = urn.from_graph(graph.triangle())
QUAD = urn.from_graph(graph.quadrilateral_example())
K17 = urn.from_graph(graph.complete_graph(17))


def test_q_white():
    assert oracle.q_white_exact(K3, 0) == 1
    assert oracle.q_white_exact(K3, 1) == Fraction(5, 6)
    assert oracle.q_white_exact(QUAD, 2) == Fraction(9, 15)
    assert np.allclose(oracle.q_white(QUAD, np.arange(5)), [float(oracle.q_white_exact(QUAD, j)) for j in range(5)])


def test_advance_examples():
    d = oracle.advance(oracle.WhiteCountDistribution.initial(), K3)
    assert d.dense().tolist() == [0.0, 1.0]
    d = oracle.advance(d, K3)
    assert np.allclose(d.dense(), [0, 1 / 6, 5 / 6], rtol=1e-15, atol=0)


def test_mass_conserved():
    d = oracle.distribution(QUAD, 1000)
    assert abs(d.total() - 1) < 1e-12
    assert np.all(d.probs >= 0)


def test_trimmed_advance_keeps_window():
    d = oracle.WhiteCountDistribution.initial()
    for _ in range(3000):
        d = oracle.advance(d, K3, trim=1e-300)
    full = oracle.distribution(K3, 3000).dense()
    assert np.allclose(d.dense(), full, rtol=0, atol=1e-290)
    assert d.offset > 0


def test_marginal_examples():
    assert oracle.marginal_pb(K3, 1) == 1.0
    assert oracle.marginal_pb(K3, 2) == pytest.approx(5 / 6, rel=1e-15)
    assert oracle.expected_delta(K3, 1) == 1.0
    assert oracle.expected_delta(K3, 3) == pytest.approx(17 / 6, rel=1e-14)
    with pytest.raises(ValueError):
        oracle.marginal_pb(K3, 0)


def test_marginal_equals_white_mass():
    pb = oracle.pb_curve(QUAD, 60)
    for n in (1, 7, 60):
        assert pb[n - 1] == pytest.approx(oracle.distribution(QUAD, n - 1).white_mass(QUAD), rel=1e-12)


def test_expected_delta_is_mean_of_law():
    ed = oracle.expected_delta_curve(K17, 200)
    d = oracle.distribution(K17, 199)
    j = np.arange(len(d.probs)) + d.offset
    assert ed[-1] == pytest.approx(K17.delta1 + float(d.probs @ j), rel=1e-12)


def test_joint_from_certain_first_step():
    # B_1 is certain from a complete graph, so P(B_1, B_v) = P(B_v)
    pb = oracle.pb_curve(K3, 30)
    row = oracle.joint_row(K3, 1, 30)
    assert np.allclose(row, pb[1:], rtol=1e-13, atol=0)


def test_joint_symmetric_and_matrix():
    assert oracle.joint_pb(QUAD, 3, 9) == oracle.joint_pb(QUAD, 9, 3)
    with pytest.raises(ValueError):
        oracle.joint_pb(QUAD, 4, 4)
    J = oracle.joint_matrix(QUAD, 12)
    assert J[2, 8] == pytest.approx(oracle.joint_pb(QUAD, 3, 9), rel=1e-14)
    assert np.isnan(J[5, 5]) and np.isnan(J[8, 2])


@pytest.mark.parametrize("s0", [K3, QUAD], ids=["triangle", "quadrilateral"])
def test_dp_matches_enumeration(s0):
    n = 12
    ex = oracle.enumerate_paths(s0, n)
    pb = oracle.pb_curve(s0, n)
    assert np.max(np.abs(pb - np.array([float(x) for x in ex.marginals]))) < 1e-12
    J = oracle.joint_matrix(s0, n)
    for (u, v), val in ex.joints.items():
        assert abs(J[u - 1, v - 1] - float(val)) < 1e-12
    ed = oracle.expected_delta_curve(s0, n + 1)
    for k, law in enumerate(ex.delta_law):
        mean = sum(d * p for d, p in law.items())
        assert abs(ed[k] - float(mean)) < 1e-12
    law = ex.delta_law[n]
    dense = oracle.distribution(s0, n).dense()
    for d, p in law.items():
        assert abs(dense[d - s0.delta1] - float(p)) < 1e-12


def test_pb_strictly_decreasing():
    for s0 in (K3, QUAD, K17):
        assert np.all(np.diff(oracle.pb_curve(s0, 5000)) < 0)


def test_log_lower_bound():
    for s0 in (K3, QUAD, K17):
        ed = oracle.expected_delta_curve(s0, 10**4)
        n = np.arange(2, 10**4 + 1)
        assert np.all(ed[1:] - s0.delta1 > s0.e_conn / (3 * s0.e_total) * np.log(n - 1))


def test_long_sweep_tracks_square_root_growth():
    ed = oracle.expected_delta_curve(K3, 10**5)
    # growth is close to 2*sqrt(2n); a loose sanity bracket
    r = (ed[-1] - 1) / math.sqrt(10**5)
    assert 2.0 < r < 3.5


def test_verify_lemmas_small():
    rep = oracle.verify_lemmas(QUAD, n_max=500, joint_max=80, j_max=200, d_max=500)
    assert rep.passed, rep.text()
    assert rep["pb_decreasing"].count == 499
    assert "PASS" in rep.text()


def test_check_detects_violation():
    bad = oracle.check_pb_decreasing(np.array([0.5, 0.4, 0.45]))
    assert not bad.passed and bad.worst_at == ("n=2",)


def test_conditional_check_counts():
    c = oracle.check_conditional_decreasing(K3, j_max=10, d_max=20)
    assert c.passed and c.count == 11 * 20


@pytest.mark.slow
def test_dp_against_monte_carlo():
    R, N = 10_000, 10**4
    marks = np.array([100, 1000, 10**4])
    ed = oracle.expected_delta_curve(QUAD, N)
    rng = np.random.default_rng(2718)
    vals = np.empty((R, len(marks)))
    for r in range(R):
        w = urn.white_times(QUAD, N - 1, rng)
        # Delta_n counts the whites among the first n - 1 steps
        vals[r] = QUAD.delta1 + np.searchsorted(w, marks - 1, side="right")
    for k, n in enumerate(marks):
        m, se = vals[:, k].mean(), vals[:, k].std(ddof=1) / math.sqrt(R)
        assert abs(m - ed[n - 1]) < 4 * se, (n, m, ed[n - 1], se)
