import json

import numpy as np
import pytest

from clusterattach import graph, montecarlo as mc, oracle, urn
from clusterattach.engine import CAParams, AttachmentFunction
from clusterattach.trajectory import Trajectory


def test_derive_seed_stable_and_distinct():
    a = [mc.derive_seed(7, j) for j in range(50)]
    assert a == [mc.derive_seed(7, j) for j in range(50)]
    assert len(set(a)) == 50
    assert mc.derive_seed(7, 0) != mc.derive_seed(8, 0)


def test_single_replication_equals_trajectory():
    g = graph.triangle()
    res = mc.run_replications(g, R=1, N=500, thinning=10, master_seed=3, keep_trajectories=True)
    t = urn.run_fast(urn.from_graph(g), 500, np.random.default_rng(mc.derive_seed(3, 0)), thinning=10)
    assert np.array_equal(res.curve.mean, t.delta)
    assert np.array_equal(res.trajectories[0].delta, t.delta)
    assert np.all(res.curve.sd == 0)


def test_same_seed_same_curve():
    a = mc.run_replications(graph.quadrilateral_example(), R=20, N=2000, master_seed=11)
    b = mc.run_replications(graph.quadrilateral_example(), R=20, N=2000, master_seed=11)
    assert np.array_equal(a.curve.mean, b.curve.mean)
    assert np.array_equal(a.curve.sd, b.curve.sd)
    c = mc.run_replications(graph.quadrilateral_example(), R=20, N=2000, master_seed=12)
    assert not np.array_equal(a.curve.mean, c.curve.mean)


def test_seed_permutation_gives_same_curve():
    g = graph.quadrilateral_example()
    seeds = [mc.derive_seed(5, j) for j in range(16)]
    a = mc.run_replications(g, R=16, N=3000, thinning=100, seeds=seeds)
    b = mc.run_replications(g, R=16, N=3000, thinning=100, seeds=seeds[::-1])
    # integer-valued trajectories: the sums are exact in any order
    assert np.array_equal(a.curve.mean, b.curve.mean)
    assert sorted(s.final_delta for s in a.summaries) == sorted(s.final_delta for s in b.summaries)


def test_workers_do_not_change_results():
    g = graph.triangle()
    a = mc.run_replications(g, R=8, N=2000, thinning=50, master_seed=4, workers=1)
    b = mc.run_replications(g, R=8, N=2000, thinning=50, master_seed=4, workers=2)
    assert np.array_equal(a.curve.mean, b.curve.mean)
    assert [s.seed for s in a.summaries] == [s.seed for s in b.summaries]


def test_full_engine_replications():
    res = mc.run_replications(graph.triangle(), engine_name="full", R=5, N=200, thinning=20, master_seed=1)
    assert res.curve.n.tolist() == list(range(1, 202, 20))
    assert res.meta["engine"] == "full"


def test_fast_engine_requires_limit_model():
    with pytest.raises(ValueError):
        mc.run_replications(graph.triangle(), params=CAParams(epsilon=0.1), R=2, N=10)
    with pytest.raises(ValueError):
        mc.run_replications(graph.triangle(), engine_name="other", R=2, N=10)


def test_full_engine_nonlimit_parameters():
    p = CAParams(m=3, epsilon=0.2, f=AttachmentFunction.power(0.5))
    res = mc.run_replications(graph.complete_graph(4), engine_name="full", params=p, R=3, N=50, thinning=10)
    assert np.all(np.diff(res.curve.mean) >= 0)
    assert res.meta["params"] == {"m": 3, "epsilon": 0.2, "f": "power", "alpha": 0.5}


def test_summaries_and_metadata():
    res = mc.run_replications(graph.triangle(), R=4, N=1000, master_seed=9, label="K3")
    assert [s.index for s in res.summaries] == [0, 1, 2, 3]
    assert res.summaries[0].seed == mc.derive_seed(9, 0)
    assert all(s.final_active - 3 == s.final_delta - 1 for s in res.summaries)
    meta = json.loads(mc.metadata_json(res.meta))
    assert meta["seeds"] == [mc.derive_seed(9, j) for j in range(4)]
    assert meta["label"] == "K3" and meta["replications"] == 4


def test_csv_round_trip_curve():
    res = mc.run_replications(graph.triangle(), R=7, N=1000, thinning=100)
    text = mc.export_csv(res.curve, offset=True)
    assert text.splitlines()[0] == "n,delta_mean,minus_delta1"
    cols = mc.parse_csv(text)
    assert np.array_equal(cols["n"], res.curve.n)
    assert np.array_equal(cols["delta_mean"], res.curve.mean)
    assert cols["minus_delta1"][0] == 0.0


def test_csv_round_trip_trajectory():
    t = urn.run_fast(urn.from_graph(graph.complete_graph(17)), 300, np.random.default_rng(1), thinning=7)
    cols = mc.parse_csv(mc.export_csv(t))
    assert cols["delta"].dtype == np.int64
    assert np.array_equal(cols["delta"], t.delta) and np.array_equal(cols["n"], t.n)
    off = mc.parse_csv(mc.export_csv(t, offset=True))
    assert off["minus_delta1"][0] == 0


def test_csv_empty_trajectory_is_header_only():
    text = mc.export_csv(Trajectory(np.array([], dtype=np.int64), np.array([], dtype=np.int64)))
    assert text == "n,delta\n"
    assert len(mc.parse_csv(text)["n"]) == 0


def test_curve_at():
    res = mc.run_replications(graph.triangle(), R=3, N=100, thinning=10)
    m, se = res.curve.at(51)
    assert m == res.curve.mean[5]
    with pytest.raises(KeyError):
        res.curve.at(52)


def test_mean_curve_agrees_with_exact_expectation():
    s0 = urn.from_graph(graph.triangle())
    res = mc.run_replications(graph.triangle(), R=100, N=10**4, thinning=100, master_seed=2024)
    ed = oracle.expected_delta_curve(s0, 10**4 + 1)
    for n in (101, 1001, 10001):
        m, se = res.curve.at(n)
        assert abs(m - ed[n - 1]) < 4 * se
