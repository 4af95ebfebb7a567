"""Graph-layer tests.

Girth and short-cycle counts are checked against a brute-force cycle
enumerator written independently in this file (combinations + circular
orders), so the library's BFS/DFS answers are never their own oracle.
"""

import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locdel.errors import (MalformedHeader, OddLcfApplication, UnknownName,
                           VertexOutOfRange)
from locdel.graphs import (INFINITE, ColouredGraph, cage, count_short_cycles,
                           from_edges, girth, girth_at_least, lcf_graph,
                           parse_graph, serialize_graph)


def _live_edges(g):
    return [(u, v) for _, u, v in g.edges()]


def _brute_cycle_vertices(g, L):
    """All vertices on some cycle of length <= L, by enumeration."""
    marked = set()
    pairs = Counter()
    adj = [set() for _ in range(g.n)]
    for u, v in _live_edges(g):
        if u == v:
            if L >= 1:
                marked.add(u)
        else:
            pairs[(min(u, v), max(u, v))] += 1
            adj[u].add(v)
            adj[v].add(u)
    if L >= 2:
        for (u, v), c in pairs.items():
            if c >= 2:
                marked.update((u, v))
    for k in range(3, min(L, g.n) + 1):
        for combo in itertools.combinations(range(g.n), k):
            rest = combo[1:]
            for perm in itertools.permutations(rest):
                if len(perm) > 1 and perm[0] > perm[-1]:
                    continue  # each direction once
                cyc = (combo[0],) + perm
                if all(cyc[(i + 1) % k] in adj[cyc[i]] for i in range(k)):
                    marked.update(cyc)
                    break
            else:
                continue
    return marked


def _brute_girth(g):
    best = INFINITE
    pairs = Counter()
    for u, v in _live_edges(g):
        if u == v:
            return 1
        pairs[(min(u, v), max(u, v))] += 1
    if any(c >= 2 for c in pairs.values()):
        return 2
    for k in range(3, g.n + 1):
        if _brute_cycle_vertices(g, k) - _brute_cycle_vertices(g, k - 1):
            return k
    return best


def test_triangle_and_trees():
    tri = from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert girth(tri) == 3
    path = from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert girth(path) == INFINITE
    assert count_short_cycles(path, 10) == 0
    assert girth(ColouredGraph(0)) == INFINITE


def test_loops_and_parallels():
    loop = from_edges(2, [(0, 0), (0, 1)])
    assert girth(loop) == 1
    assert loop.degree(0) == 3
    par = from_edges(2, [(0, 1), (0, 1)])
    assert girth(par) == 2
    assert count_short_cycles(par, 2) == 2
    assert count_short_cycles(par, 1) == 0
    assert girth_at_least(par, 2)
    assert not girth_at_least(par, 3)


def test_c5_counts():
    c5 = from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert count_short_cycles(c5, 5) == 5
    assert count_short_cycles(c5, 4) == 0
    assert girth(c5) == 5


def test_petersen_catalogue():
    g = cage("petersen")
    assert g.n == 10 and g.m_alive == 15
    assert _brute_girth(g) == 5 == girth(g)
    assert _brute_cycle_vertices(g, 5) == set(range(10))
    assert count_short_cycles(g, 5) == 10
    assert count_short_cycles(g, 4) == 0


@pytest.mark.parametrize("name,n,gg", [
    ("petersen", 10, 5), ("heawood", 14, 6),
    ("mcgee", 24, 7), ("tutte-coxeter", 30, 8)])
def test_cages(name, n, gg):
    g = cage(name)
    assert g.n == n
    assert all(g.degree(v) == 3 for v in range(n))
    assert girth(g) == gg
    assert girth_at_least(g, gg) and not girth_at_least(g, gg + 1)
    # fresh copies: mutating one must not leak into the next
    g.delete_vertex(0)
    assert cage(name).alive[0]


def test_cage_unknown():
    with pytest.raises(UnknownName):
        cage("foster")


def test_lcf_k33():
    g = parse_graph("[3,-3]^3", "lcf")
    assert g.n == 6 and g.m_alive == 9
    assert girth(g) == 4
    # bipartition check: 2-colour greedily and verify all 9 cross edges
    side = [i % 2 for i in range(6)]
    assert all(side[u] != side[v] for u, v in _live_edges(g))


def test_lcf_degenerate_code_gives_multigraph():
    # shift 5 == -1 (mod 6) duplicates Hamilton edges
    g = parse_graph("[5,-5]^3", "lcf")
    assert g.n == 6
    assert girth(g) == 2


def test_lcf_odd():
    with pytest.raises(OddLcfApplication):
        lcf_graph([3], 3)
    with pytest.raises(OddLcfApplication):
        parse_graph("[3,5,7]^1", "lcf")


def test_parse_basics():
    tri = parse_graph("3 3\n0 1\n1 2\n2 0")
    assert girth(tri) == 3
    iso = parse_graph("2 0")
    assert iso.n == 2 and iso.m_alive == 0
    assert serialize_graph(iso) == "2 0\n"


def test_parse_errors():
    with pytest.raises(MalformedHeader):
        parse_graph("")
    with pytest.raises(MalformedHeader):
        parse_graph("3\n0 1")
    with pytest.raises(MalformedHeader):
        parse_graph("a b\n")
    with pytest.raises(MalformedHeader):
        parse_graph("2 2\n0 1")
    with pytest.raises(MalformedHeader):
        parse_graph("2 1\n0 1 2")
    with pytest.raises(VertexOutOfRange):
        parse_graph("2 1\n0 5")
    with pytest.raises(UnknownName):
        parse_graph("2 0", "graphml")


def test_serialize_round_trip_bytes():
    text = "4 3\n0 1\n1 2\n3 3\n"
    assert serialize_graph(parse_graph(text)) == text
    assert serialize_graph(parse_graph(text.encode("ascii"))) == text


@st.composite
def multigraphs(draw):
    n = draw(st.integers(1, 7))
    m = draw(st.integers(0, 12))
    pairs = [(draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1)))
             for _ in range(m)]
    return from_edges(n, pairs)


@settings(max_examples=120, deadline=None)
@given(multigraphs())
def test_girth_matches_brute_force(g):
    assert girth(g) == _brute_girth(g)


@settings(max_examples=120, deadline=None)
@given(multigraphs(), st.integers(1, 8))
def test_count_matches_brute_force(g, L):
    assert count_short_cycles(g, L) == len(_brute_cycle_vertices(g, L))


@settings(max_examples=100, deadline=None)
@given(multigraphs(), st.integers(1, 8))
def test_girth_iff_short_cycles(g, L):
    assert (girth(g) <= L) == (count_short_cycles(g, L) > 0)


@settings(max_examples=60, deadline=None)
@given(multigraphs())
def test_parse_serialize_identity(g):
    text = serialize_graph(g)
    h = parse_graph(text)
    assert h.n == g.n
    assert _live_edges(h) == _live_edges(g)
    assert serialize_graph(h) == text


def test_mutation_and_audit():
    g = from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 1)])
    g.audit()
    assert g.degree(1) == 4  # loop counts twice
    assert sorted(v for _, v in g.neighbours(1)) == [0, 1, 1, 2]
    g.delete_vertex(1, output=7)
    g.audit()
    assert not g.alive[1]
    assert g.output_colour[1] == 7
    assert g.degree(0) == 2 and g.degree(2) == 2
    assert girth(g) == 3  # 0-2-3 triangle survives
    g.delete_edge(g.incident(0)[0])
    g.audit()
    eid = g.incident(2)[0]
    g.delete_edge(eid)
    with pytest.raises(AssertionError):
        g.delete_edge(eid)


def test_vertex_type_tracks_colour_and_degree():
    g = from_edges(3, [(0, 1), (1, 2)])
    assert g.vertex_type(1) == (0, 2)
    g.colour[1] = 5
    g.delete_edge(g.incident(2)[0])
    assert g.vertex_type(1) == (5, 1)
