"""Coloured multigraphs, girth analysis, a small cage catalogue, and I/O.

The central type is a multigraph whose vertices carry a transient colour
while alive and an output colour once dead.  Deletion marks vertices and
edges dead instead of reindexing, so ids are stable across a whole run.
Loops and parallel edges are allowed everywhere (random pairings produce
them); a loop adds 2 to the degree of its endpoint.
"""

import math
import re

from .errors import (MalformedHeader, OddLcfApplication, UnknownName,
                     VertexOutOfRange)

NEUTRAL = 0

INFINITE = math.inf


class ColouredGraph:
    """Multigraph with stable ids, dead-marking and per-vertex colours.

    Vertices are 0..n-1.  Edges get dense ids in insertion order; the
    incidence list of a vertex stores edge ids, with a loop listed twice
    so that live degree is simply the length of the live incidence list.
    """

    def __init__(self, n, r=None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.r = r  # optional degree cap, checked by audit()
        self.alive = [True] * n
        self.colour = [NEUTRAL] * n
        self.output_colour = [None] * n
        self._deg = [0] * n
        self._inc = [[] for _ in range(n)]
        self.eu = []
        self.ev = []
        self.e_alive = []
        self.edge_output = {}
        self.m_alive = 0

    def add_edge(self, u, v):
        """Insert a live edge and return its id.  Loops are fine."""
        for x in (u, v):
            if not (0 <= x < self.n):
                raise VertexOutOfRange("vertex %r not in [0, %d)" % (x, self.n))
        eid = len(self.eu)
        self.eu.append(u)
        self.ev.append(v)
        self.e_alive.append(True)
        self._inc[u].append(eid)
        self._inc[v].append(eid)
        self._deg[u] += 1
        self._deg[v] += 1
        self.m_alive += 1
        return eid

    def degree(self, v):
        return self._deg[v]

    def vertex_type(self, v):
        """The (colour, live degree) pair of an alive vertex."""
        return (self.colour[v], self._deg[v])

    def other_end(self, eid, v):
        u = self.eu[eid]
        return self.ev[eid] if u == v else u

    def neighbours(self, v):
        """Yield (edge id, other endpoint) over live incident edges.

        A loop at v is yielded twice, matching its degree contribution.
        """
        for eid in self._inc[v]:
            if self.e_alive[eid]:
                yield eid, self.other_end(eid, v)

    def incident(self, v):
        return [eid for eid in self._inc[v] if self.e_alive[eid]]

    def edges(self):
        for eid in range(len(self.eu)):
            if self.e_alive[eid]:
                yield eid, self.eu[eid], self.ev[eid]

    def alive_vertices(self):
        return [v for v in range(self.n) if self.alive[v]]

    def delete_edge(self, eid, output=None):
        assert self.e_alive[eid], "edge %d already dead" % eid
        self.e_alive[eid] = False
        self._deg[self.eu[eid]] -= 1
        self._deg[self.ev[eid]] -= 1
        self.m_alive -= 1
        if output is not None:
            self.edge_output[eid] = output

    def delete_vertex(self, v, output=None):
        """Kill v and every live edge at v; record its output colour."""
        assert self.alive[v], "vertex %d already dead" % v
        for eid in self._inc[v]:
            if self.e_alive[eid]:
                self.delete_edge(eid)
        self.alive[v] = False
        self.output_colour[v] = output
        self.colour[v] = None

    def copy(self):
        g = ColouredGraph(self.n, self.r)
        g.alive = list(self.alive)
        g.colour = list(self.colour)
        g.output_colour = list(self.output_colour)
        g._deg = list(self._deg)
        g._inc = [list(lst) for lst in self._inc]
        g.eu = list(self.eu)
        g.ev = list(self.ev)
        g.e_alive = list(self.e_alive)
        g.edge_output = dict(self.edge_output)
        g.m_alive = self.m_alive
        return g

    def audit(self):
        """Recount everything from scratch and compare with the caches."""
        m = 0
        deg = [0] * self.n
        for eid in range(len(self.eu)):
            if self.e_alive[eid]:
                m += 1
                deg[self.eu[eid]] += 1
                deg[self.ev[eid]] += 1
        assert m == self.m_alive, "live edge count drifted"
        for v in range(self.n):
            assert deg[v] == self._deg[v], "degree cache drifted at %d" % v
            if not self.alive[v]:
                assert deg[v] == 0, "dead vertex %d has live edges" % v
            elif self.r is not None:
                assert 0 <= deg[v] <= self.r, "degree out of range at %d" % v
        return True


def from_edges(n, pairs, r=None):
    g = ColouredGraph(n, r)
    for u, v in pairs:
        g.add_edge(u, v)
    return g


def _simple_adjacency(g):
    """Neighbour lists with loops dropped and parallels collapsed."""
    adj = [[] for _ in range(g.n)]
    seen = set()
    for _, u, v in g.edges():
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
    return adj


def _multi_girth_floor(g):
    """1 for a live loop, 2 for a live parallel pair, else None."""
    seen = set()
    best = None
    for _, u, v in g.edges():
        if u == v:
            return 1
        key = (u, v) if u < v else (v, u)
        if key in seen:
            best = 2
        seen.add(key)
    return best


def girth(g, cap=None):
    """Length of a shortest cycle, or INFINITE for a forest.

    Loops count as 1-cycles and parallel pairs as 2-cycles.  A BFS from
    every vertex, pruned at half the best length found so far, gives the
    exact girth in O(n m).  With `cap` set, any value > cap may be
    reported as INFINITE (used by the girth-constrained sampler).
    """
    floor = _multi_girth_floor(g)
    if floor is not None:
        return floor
    adj = _simple_adjacency(g)
    best = INFINITE if cap is None else cap + 1
    exact_cap = cap is None
    for s in range(g.n):
        if not g.alive[s] or not adj[s]:
            continue
        dist = {s: 0}
        parent = {s: -1}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                # A candidate cycle of length < best is always recorded
                # while processing an endpoint at distance <= (best-1)/2.
                if 2 * dist[x] >= best:
                    continue
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = x
                        nxt.append(y)
                    elif parent[x] != y and parent[y] != x:
                        cand = dist[x] + dist[y] + 1
                        if cand < best:
                            best = cand
            frontier = nxt
    if not exact_cap and best > cap:
        return INFINITE
    return best


def girth_at_least(g, k):
    """True when g has no cycle shorter than k (cheap early exit)."""
    if k <= 1:
        return True
    return girth(g, cap=k - 1) >= k


def _on_short_cycle(g, root, L):
    # Loop at the root is a 1-cycle.
    for eid, other in g.neighbours(root):
        if other == root:
            return True
    if L < 2:
        return False
    on_path = set([root])

    def walk(x, depth, first_eid):
        for eid, y in g.neighbours(x):
            if y == root and eid != first_eid:
                return True
            if depth + 1 <= L - 1 and y not in on_path:
                on_path.add(y)
                if walk(y, depth + 1, first_eid):
                    return True
                on_path.discard(y)
        return False

    for eid, y in g.neighbours(root):
        # Each simple path out of root is explored with its first edge
        # remembered, so a parallel edge may close a 2-cycle but the
        # same edge may not be reused.
        if y not in on_path:
            on_path.add(y)
            if walk(y, 1, eid):
                return True
            on_path.discard(y)
    return False


def count_short_cycles(g, L):
    """Number of vertices lying on at least one cycle of length ≤ L.

    Exact, by bounded search over simple paths from each vertex; meant
    for the moderate L and bounded degrees that the theory needs.
    """
    assert L >= 1
    return sum(1 for v in range(g.n)
               if g.alive[v] and _on_short_cycle(g, v, L))


def lcf_graph(shifts, k):
    """Hamiltonian cubic graph from LCF notation [shifts]^k.

    Vertices 0..n-1 (n = len(shifts)*k) form a cycle; vertex i also gets
    a chord to i + shifts[i mod len(shifts)] (mod n).  Each chord is
    inserted from its lower endpoint only, so a consistent code yields
    every chord exactly once.  Degenerate codes are allowed and simply
    give multigraphs.
    """
    if not shifts or k < 1:
        raise OddLcfApplication("need a nonempty shift list and k >= 1")
    n = len(shifts) * k
    if n % 2 == 1:
        raise OddLcfApplication(
            "LCF code describes %d vertices; a cubic graph needs an even "
            "number" % n)
    g = ColouredGraph(n, r=3)
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    for i in range(n):
        j = (i + shifts[i % len(shifts)]) % n
        if i < j:
            g.add_edge(i, j)
    return g


_LCF_RE = re.compile(r"^\s*\[\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\]\s*\^\s*(\d+)\s*$")

_CATALOGUE = {
    "petersen": (10, 5, None),
    "heawood": (14, 6, "[5,-5]^7"),
    "mcgee": (24, 7, "[12,7,-7]^8"),
    "tutte-coxeter": (30, 8, "[-13,-9,7,-7,9,13]^5"),
}


def _petersen():
    g = ColouredGraph(10, r=3)
    for i in range(5):
        g.add_edge(i, (i + 1) % 5)        # outer pentagon
        g.add_edge(i, i + 5)              # spokes
        g.add_edge(5 + i, 5 + (i + 2) % 5)  # inner pentagram
    return g


def cage(name):
    """A fresh, all-neutral copy of a named small cubic cage."""
    if name not in _CATALOGUE:
        raise UnknownName("no cage named %r; have %s"
                          % (name, sorted(_CATALOGUE)))
    n, _, lcf = _CATALOGUE[name]
    if lcf is None:
        g = _petersen()
    else:
        g = parse_graph(lcf, "lcf")
    assert g.n == n
    return g


def parse_graph(text, format="edgelist"):
    """Read a graph from an edge-list or an LCF string.

    Edge list: header line "n m", then m lines "u v" of 0-based ids.
    LCF: "[s1,s2,...]^k".  Both return all-neutral graphs.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    fmt = format.lower()
    if fmt == "lcf":
        m = _LCF_RE.match(text)
        if m is None:
            raise MalformedHeader("not an LCF code: %r" % text[:40])
        shifts = [int(s) for s in m.group(1).split(",")]
        return lcf_graph(shifts, int(m.group(2)))
    if fmt != "edgelist":
        raise UnknownName("unknown graph format %r" % format)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeader("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise MalformedHeader("header must be 'n m', got %r" % lines[0])
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise MalformedHeader("non-integer header %r" % lines[0])
    if n < 0 or m < 0:
        raise MalformedHeader("negative counts in header %r" % lines[0])
    if len(lines) - 1 != m:
        raise MalformedHeader("expected %d edge lines, found %d"
                              % (m, len(lines) - 1))
    g = ColouredGraph(n)
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 2:
            raise MalformedHeader("bad edge line %r" % ln)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise MalformedHeader("non-integer edge line %r" % ln)
        g.add_edge(u, v)  # raises VertexOutOfRange as needed
    return g


def serialize_graph(g):
    """Canonical edge-list text; inverse of parse_graph on fresh graphs."""
    out = ["%d %d" % (g.n, g.m_alive)]
    for _, u, v in g.edges():
        out.append("%d %d" % (u, v))
    return "\n".join(out) + "\n"


def _verify_catalogue():
    for name, (n, target_girth, _) in _CATALOGUE.items():
        g = cage(name)
        assert g.n == n, name
        assert all(g.degree(v) == 3 for v in range(g.n)), name
        assert _multi_girth_floor(g) is None, "%s is not simple" % name
        assert girth(g) == target_girth, name


_verify_catalogue()
