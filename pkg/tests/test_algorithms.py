"""Named algorithms: construction, validity, repair, and exact small oracles."""
import math

import pytest

from locdel.errors import BadParams, UnknownName
from locdel.graphs import ColouredGraph, cage, from_edges, girth
from locdel.lda import GraphHost, PairingHost, run_algorithm
from locdel.algorithms import (ALGORITHM_NAMES, embed_in_regular,
                               make_algorithm, repair_output,
                               validate_output)
from locdel.pairing import random_pairing
from locdel.rng import Xoshiro


def path_graph(k):
    return from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k):
    return from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def run_on_graph(alg, g, seed, stop="empty"):
    host = GraphHost(g.copy())
    return host, run_algorithm(alg, host, stop=stop, rng=Xoshiro(seed, 101))


def run_on_pairing(name, n, seed, deg=3, stop="empty", **params):
    base = Xoshiro(seed, n)
    host = PairingHost(random_pairing([deg] * n, base.split(1)))
    alg = make_algorithm(name, **params)
    res = run_algorithm(alg, host, stop=stop, rng=base.split(2))
    return host.realize(base.split(3)), res


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------


def test_make_algorithm_shapes():
    alg = make_algorithm("min_degree_is", r=3)
    assert alg.depth == 1
    assert len(alg.policy.output_colours) == 3

    cut = make_algorithm("cubic_maxcut")
    rb = [c for c in cut.policy.transient_colours if c != "barred"]
    assert sorted(rb) == sorted("%d%d" % (r, b) for r in range(3)
                                for b in range(3 - r))
    assert cut.depth == 1

    path = make_algorithm("cubic_is_path", d=50)
    assert path.depth == 51
    assert path.truncation == 50
    assert make_algorithm("cubic_is_path_improved", d=50).depth == 102
    assert make_algorithm("min_degree_dom").truncation is None


def test_make_algorithm_errors():
    with pytest.raises(UnknownName):
        make_algorithm("nope")
    with pytest.raises(BadParams):
        make_algorithm("dz_is")  # r is required
    with pytest.raises(BadParams):
        make_algorithm("dz_is", r=2)
    with pytest.raises(BadParams):
        make_algorithm("min_degree_is", q=1)


def test_with_selection_errors():
    alg = make_algorithm("min_degree_is")
    with pytest.raises(BadParams):
        alg.with_selection("chunky")  # epsilon missing
    with pytest.raises(BadParams):
        alg.with_selection("deprioritised")  # no mixing functions defined
    with pytest.raises(BadParams):
        make_algorithm("bisection").with_selection("chunky", epsilon=0.1)


def test_registry_is_complete():
    assert set(ALGORITHM_NAMES) == {
        "min_degree_is", "min_degree_dom", "dz_is", "cubic_is_path",
        "cubic_is_path_improved", "cubic_maxcut", "bisection",
        "induced_forest"}


# --------------------------------------------------------------------------
# exact small-graph oracles
# --------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cubic_is_path", "cubic_is_path_improved"])
def test_path_policies_are_optimal_on_paths_and_cycles(name):
    alg = make_algorithm(name)
    for k in range(1, 21):
        for seed in range(6):
            _host, res = run_on_graph(alg, path_graph(k), seed)
            assert len(res.output_set("in")) == math.ceil(k / 2), (k, seed)
    for k in range(3, 21):
        for seed in range(6):
            _host, res = run_on_graph(alg, cycle_graph(k), seed)
            got = res.output_set("in")
            assert len(got) == k // 2, (k, seed)
            assert all((b - a) % k not in (1, k - 1)
                       for a in got for b in got if a != b)


def test_truncated_walk_still_produces_valid_sets():
    alg = make_algorithm("cubic_is_path", d=5)
    assert alg.truncation == 5
    g = cycle_graph(20)
    for seed in range(8):
        _host, res = run_on_graph(alg, g, seed)
        ok, cert = validate_output("cubic_is_path", g,
                                   res.output_set("in"))
        assert ok, cert


def test_dominating_c5_needs_exactly_two_vertices():
    alg = make_algorithm("min_degree_dom")
    g = cycle_graph(5)
    for seed in range(25):
        _host, res = run_on_graph(alg, g, seed)
        obj, report = repair_output("min_degree_dom", g, res)
        ok, cert = validate_output("min_degree_dom", g, obj)
        assert ok, cert
        assert len(obj) == 2
        assert report["added"] == 0


def test_dz_rule_2b_never_fires_below_degree_five():
    for r in (3, 4):
        alg = make_algorithm("dz_is", r=r)
        fired = []
        orig = alg.policy.explore
        alg.policy.explore = lambda cb, orig=orig: (
            orig(cb), fired.append(cb.copy.notes["rule"]))[0]
        for seed in range(6):
            base = Xoshiro(seed, 77)
            host = PairingHost(random_pairing([r] * 150, base.split(1)))
            run_algorithm(alg, host, stop="empty", rng=base.split(2))
        assert "2b" not in fired
        assert "1" in fired  # fresh roots with tied minimum-degree neighbours
        assert "2a" in fired


# --------------------------------------------------------------------------
# repair
# --------------------------------------------------------------------------


def test_repair_identity_when_nothing_is_missing():
    g, res = run_on_pairing("min_degree_is", 100, 0)
    obj, report = repair_output("min_degree_is", g, res)
    assert obj == res.output_set("in")
    assert report == {"added": 0}


def test_repair_fills_empty_dominating_set_on_c5():
    alg = make_algorithm("min_degree_dom")
    g = cycle_graph(5)
    host = GraphHost(g.copy())
    res = run_algorithm(alg, host, stop=0, rng=Xoshiro(0, 0))
    obj, report = repair_output("min_degree_dom", g, res)
    assert obj == [0, 2]
    assert report["added"] == 2
    ok, cert = validate_output("min_degree_dom", g, obj)
    assert ok, cert


def test_repair_cuts_a_leftover_tree_edge():
    g = from_edges(2, [(0, 1)])
    host = GraphHost(g.copy())
    res = run_algorithm(make_algorithm("cubic_maxcut"), host, stop=0,
                        rng=Xoshiro(0, 1))
    side, report = repair_output("cubic_maxcut", g, res)
    assert report["cut"] == 1
    assert report["red"] == 1 and report["blue"] == 1
    assert side[0] != side[1]


def test_bisection_repair_balances_exactly():
    for seed in range(4):
        g, res = run_on_pairing("bisection", 50, seed)
        side, report = repair_output("bisection", g, res)
        assert report["red"] == report["blue"] == 25
        ok, cert = validate_output("bisection", g, side)
        assert ok, cert


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


def test_validate_examples():
    c5 = cycle_graph(5)
    ok, cert = validate_output("min_degree_is", c5, [0, 2])
    assert ok and cert["size"] == 2
    ok, cert = validate_output("min_degree_is", c5, [0, 1])
    assert not ok and cert["witness_edge"] == (0, 1)
    pet = cage("petersen")
    ok, _cert = validate_output("min_degree_dom", pet, list(range(10)))
    assert not ok  # the full vertex set dominates but is far from independent
    forest_ok, _ = validate_output("induced_forest", c5, [0, 1, 2, 3])
    assert forest_ok
    forest_bad, cert = validate_output("induced_forest", c5,
                                       [0, 1, 2, 3, 4])
    assert not forest_bad and "witness_cycle_edge" in cert


def test_full_vertex_set_dominates_any_graph():
    pet = cage("petersen")
    adj_ok, _ = validate_output("bisection", pet,
                                [0, 1] * 5)  # balanced assignment
    assert adj_ok


# --------------------------------------------------------------------------
# validity sweep (fast representative; large n lives in acceptance)
# --------------------------------------------------------------------------

SWEEP = [
    ("min_degree_is", {}),
    ("min_degree_dom", {}),
    ("dz_is", {"r": 3}),
    ("cubic_is_path", {}),
    ("cubic_is_path_improved", {}),
    ("cubic_maxcut", {}),
    ("bisection", {}),
    ("bisection", {"objective": "max"}),
    ("induced_forest", {}),
]


@pytest.mark.parametrize("name,params", SWEEP,
                         ids=[n + p.get("objective", "")
                              for n, p in SWEEP])
def test_outputs_valid_on_random_pairings(name, params):
    for n in (10, 50, 200):
        for seed in range(5):
            g, res = run_on_pairing(name, n, seed, **params)
            obj, _report = repair_output(name, g, res)
            ok, cert = validate_output(name, g, obj)
            assert ok, (name, n, seed, cert)


@pytest.mark.parametrize("r", [4, 6])
def test_outputs_valid_at_higher_degrees(r):
    for name, params in (("min_degree_is", {}), ("min_degree_dom", {}),
                         ("dz_is", {"r": r})):
        for seed in range(3):
            g, res = run_on_pairing(name, 100, seed, deg=r, **params)
            obj, _report = repair_output(name, g, res)
            ok, cert = validate_output(name, g, obj)
            assert ok, (name, r, seed, cert)


def test_outputs_valid_on_cages():
    for gname in ("petersen", "mcgee"):
        g0 = cage(gname)
        for name, params in SWEEP:
            if name == "bisection" and g0.n % 2:
                continue
            alg = make_algorithm(name, **params)
            for seed in range(3):
                _host, res = run_on_graph(alg, g0, seed)
                obj, _report = repair_output(name, g0, res)
                ok, cert = validate_output(name, g0, obj)
                assert ok, (name, gname, seed, cert)


def test_outputs_valid_under_chunky_selection():
    for name in ("min_degree_is", "cubic_maxcut", "induced_forest"):
        alg = make_algorithm(name).with_selection("chunky", epsilon=0.2)
        for seed in range(3):
            base = Xoshiro(seed, 55)
            host = PairingHost(random_pairing([3] * 400, base.split(1)))
            res = run_algorithm(alg, host, stop="empty", rng=base.split(2))
            g = host.realize(base.split(3))
            obj, _report = repair_output(name, g, res)
            ok, cert = validate_output(name, g, obj)
            assert ok, (name, seed, cert)


# --------------------------------------------------------------------------
# embedding into regular host graphs
# --------------------------------------------------------------------------


def test_embedding_preserves_girth_and_regularity():
    g = cycle_graph(7)
    big = embed_in_regular(g, 3)
    assert all(big.degree(v) == 3 for v in range(big.n))
    assert big.n % 7 == 0
    assert girth(big) >= 7
    host = GraphHost(big.copy())
    res = run_algorithm(make_algorithm("min_degree_is"), host,
                        stop="empty", rng=Xoshiro(8, 8))
    ok, cert = validate_output("min_degree_is", big, res.output_set("in"))
    assert ok, cert


def test_embedding_of_regular_graph_is_a_copy():
    pet = cage("petersen")
    big = embed_in_regular(pet, 3)
    assert big.n == 10
    assert sorted((u, v) for _e, u, v in big.edges()) == \
        sorted((u, v) for _e, u, v in pet.edges())


def test_embedding_rejects_overfull_degrees():
    star = from_edges(5, [(0, i) for i in range(1, 5)])  # centre degree 4
    with pytest.raises(BadParams):
        embed_in_regular(star, 3)
