"""Local deletion algorithms: selection, query copies, clashes, recolouring.

A local deletion algorithm repeatedly (i) selects a set of root vertices,
(ii) explores a bounded neighbourhood of each root, building a "query copy"
by resolving unseen adjacencies and optionally joining the far endpoints
into the copy, (iii) marks coincidences between copies as clashes, and
(iv) recolours: copy vertices receive output colours and are deleted
(clashes get the reserved clash colour), while external vertices touched
exactly once may change transient colour, and those touched twice or more
are barred from all future selection.  Numeric output functions accumulate
per-copy increments along the way.

The same step semantics run on two interchangeable hosts: a concrete
:class:`~locdel.graphs.ColouredGraph`, where copies of one step see the
unmutated graph (exact simultaneity), and a lazy :class:`~locdel.pairing.
Pairing`, where adjacencies are generated on demand by exposing points.
On the pairing host the copies of one step are exposed sequentially, so
same-step copies can consume each other's points; the difference from the
simultaneous semantics is confined to vertex pairs that would interact
within one step, which is exactly the clash regime.

Policies (see :mod:`locdel.algorithms`) supply the exploration rule, the
recolouring decisions and the output increments.  All of their randomness
must flow through the builder's ``below``/``pick`` helpers so that a run
can be replayed or exhaustively enumerated decision by decision.
"""

from __future__ import annotations

import math

from .errors import BadParams, Stuck
from .graphs import ColouredGraph
from .pairing import Pairing


# --------------------------------------------------------------------------
# type bookkeeping
# --------------------------------------------------------------------------


class _TypeIndex:
    """Swap-remove arrays of alive vertices keyed by (colour, degree).

    Gives O(1) membership moves and uniform sampling within a type, and a
    census that is read between steps.
    """

    def __init__(self):
        self.arrays = {}
        self._where = {}  # vertex -> (type, slot)

    def add(self, v, ty):
        arr = self.arrays.get(ty)
        if arr is None:
            arr = self.arrays[ty] = []
        self._where[v] = (ty, len(arr))
        arr.append(v)

    def remove(self, v):
        ty, slot = self._where.pop(v)
        arr = self.arrays[ty]
        last = arr[-1]
        arr[slot] = last
        if last != v:
            self._where[last] = (ty, slot)
        arr.pop()

    def move(self, v, ty):
        old = self._where[v][0]
        if old != ty:
            self.remove(v)
            self.add(v, ty)

    def type_of(self, v):
        return self._where[v][0]

    def census(self):
        return {ty: len(arr) for ty, arr in self.arrays.items() if arr}

    def count(self, ty):
        arr = self.arrays.get(ty)
        return len(arr) if arr else 0

    def alive_count(self):
        return len(self._where)


# --------------------------------------------------------------------------
# hosts
# --------------------------------------------------------------------------


class GraphHost:
    """Step-state wrapper around a concrete coloured graph.

    All copies built within one step read the same unmutated graph, so the
    simultaneous-selection semantics are exact here.  Adjacencies revealed
    by a copy are remembered per copy (``QueryCopy.revealed``) and never
    re-revealed by the same copy; distinct copies may reveal the same edge,
    which is precisely how same-step interactions surface as clashes.
    """

    kind = "graph"

    def __init__(self, graph):
        self.g = graph
        self.n = graph.n
        self.index = _TypeIndex()
        for v in range(graph.n):
            if graph.alive[v]:
                self.index.add(v, (graph.colour[v], graph.degree(v)))
        self.dead = graph.n - self.index.alive_count()

    # -- queries --

    def alive(self, v):
        return self.g.alive[v]

    def colour(self, v):
        return self.g.colour[v]

    def degree(self, v):
        return self.g.degree(v)

    def census(self):
        return self.index.census()

    # -- copy construction primitives --

    def pending_count(self, v, copy):
        k = 0
        for eid in self.g._inc[v]:
            if self.g.e_alive[eid] and eid not in copy.revealed:
                k += 1
        return k

    def resolve(self, v, copy, rng):
        cands = [eid for eid in self.g._inc[v]
                 if self.g.e_alive[eid] and eid not in copy.revealed]
        if not cands:
            return None
        eid = cands[0] if len(cands) == 1 else cands[rng.below(len(cands))]
        copy.revealed.add(eid)
        far = self.g.other_end(eid, v)
        return Entry(copy.labels[v], far, self.g.colour[far],
                     self.g.degree(far), eid)

    # -- mutation --

    def set_colour(self, v, c):
        self.g.colour[v] = c

    def delete_vertex(self, v, out, rng):
        """Kill v with output colour ``out``; return surviving far endpoints."""
        touched = []
        for eid in self.g._inc[v]:
            if self.g.e_alive[eid]:
                far = self.g.other_end(eid, v)
                if far != v:
                    touched.append(far)
        self.g.delete_vertex(v, output=out)
        self.index.remove(v)
        self.dead += 1
        return touched

    def delete_ref(self, ref):
        """Delete a revealed edge if still live; return surviving endpoints."""
        if not self.g.e_alive[ref]:
            return []
        u, w = self.g.eu[ref], self.g.ev[ref]
        self.g.delete_edge(ref)
        return [x for x in (u, w) if self.g.alive[x]]

    def retype(self, v):
        self.index.move(v, (self.g.colour[v], self.g.degree(v)))

    def out_colour(self, v):
        return self.g.output_colour[v]


class PairingHost:
    """Step-state wrapper around a lazy pairing.

    A vertex's live degree is its number of unexposed points; resolving an
    adjacency exposes the pair immediately, so the far endpoint's count
    drops at reveal time (the deferred retype at the end of the step pulls
    the census back in sync).  Loops and parallel pairs occur naturally and
    are classified as clashes downstream.
    """

    kind = "pairing"

    def __init__(self, pairing, colours=None):
        self.p = pairing
        self.n = pairing.n
        self._colour = list(colours) if colours is not None else [0] * pairing.n
        self._alive = [True] * pairing.n
        self._out = [None] * pairing.n
        self.index = _TypeIndex()
        for v in range(pairing.n):
            self.index.add(v, (self._colour[v], pairing.unexposed_count(v)))
        self.dead = 0

    def alive(self, v):
        return self._alive[v]

    def colour(self, v):
        return self._colour[v]

    def degree(self, v):
        return self.p.unexposed_count(v)

    def census(self):
        return self.index.census()

    def pending_count(self, v, copy):
        return self.p.unexposed_count(v)

    def resolve(self, v, copy, rng):
        if self.p.unexposed_count(v) == 0:
            return None
        pt = self.p.random_unexposed_point(v, rng)
        mate = self.p.expose_mate(pt, rng)
        far = self.p.bucket_of(mate)
        # Degree as seen through the connecting edge: remaining free points
        # plus the point just consumed by this adjacency.
        deg = self.p.unexposed_count(far) + 1
        return Entry(copy.labels[v], far, self._colour[far], deg, (pt, mate))

    def set_colour(self, v, c):
        self._colour[v] = c

    def delete_vertex(self, v, out, rng):
        touched = []
        while self.p.unexposed_count(v) > 0:
            pt = self.p.random_unexposed_point(v, rng)
            mate = self.p.expose_mate(pt, rng)
            far = self.p.bucket_of(mate)
            if far != v and self._alive[far]:
                touched.append(far)
        self._alive[v] = False
        self._out[v] = out
        self._colour[v] = None
        self.index.remove(v)
        self.dead += 1
        return touched

    def delete_ref(self, ref):
        return []  # exposed pairs are already consumed

    def retype(self, v):
        self.index.move(v, (self._colour[v], self.p.unexposed_count(v)))

    def out_colour(self, v):
        return self._out[v]

    def realize(self, rng):
        """Expose everything left and return the realized multigraph."""
        self.p.expose_all(rng)
        g = self.p.to_graph()
        return g


def make_host(state):
    if isinstance(state, (GraphHost, PairingHost)):
        return state
    if isinstance(state, ColouredGraph):
        return GraphHost(state)
    if isinstance(state, Pairing):
        return PairingHost(state)
    raise BadParams("cannot run on %r; expected a graph or a pairing" % (state,))


# --------------------------------------------------------------------------
# query copies
# --------------------------------------------------------------------------


class Entry:
    """One resolved adjacency of a copy.

    ``src`` is the copy label it was revealed from; ``far`` the host vertex
    at the other end, with its colour and live degree as seen at reveal
    time (degree includes the connecting edge).  ``state`` is "open" until
    the far end is joined into the copy ("joined") or recognised as an
    already-present copy vertex ("closed", a cycle edge).
    """

    __slots__ = ("src", "far", "far_colour", "far_degree", "ref", "state",
                 "w_colour")

    def __init__(self, src, far, far_colour, far_degree, ref):
        self.src = src
        self.far = far
        self.far_colour = far_colour
        self.far_degree = far_degree
        self.ref = ref
        self.state = "open"
        self.w_colour = None

    def __repr__(self):  # pragma: no cover - debugging aid
        return "Entry(src=%d, far=%d, type=(%r,%d), %s)" % (
            self.src, self.far, self.far_colour, self.far_degree, self.state)


class QueryCopy:
    """The realized exploration record rooted at one selected vertex."""

    __slots__ = ("root", "verts", "labels", "verts_colour", "verts_degree",
                 "entries", "copy_edges", "revealed", "out", "trans",
                 "notes", "slot", "final_pending")

    def __init__(self, root, root_colour, root_degree, graph_backend):
        self.root = root
        self.verts = [root]
        self.labels = {root: 0}
        self.verts_colour = [root_colour]
        self.verts_degree = [root_degree]
        self.entries = []
        self.copy_edges = []
        self.revealed = set() if graph_backend else None
        self.out = {}       # label -> output colour index
        self.trans = {}     # label -> transient colour index (survivors)
        self.notes = {}     # policy scratch, read by Policy.outputs
        self.slot = 0
        self.final_pending = None

    def is_loop(self, entry):
        return entry.far == self.verts[entry.src]


class CopyBuilder:
    """The only view of the host a policy gets while exploring.

    Policies see copy labels, revealed types and pending counts — never raw
    host adjacency — and draw randomness exclusively through ``below`` /
    ``pick`` so a run can be replayed decision by decision.
    """

    def __init__(self, host, copy, rng):
        self.host = host
        self.copy = copy
        self._rng = rng

    # -- randomness --

    def below(self, n):
        return self._rng.below(n)

    def pick(self, seq):
        if len(seq) == 1:
            return seq[0]
        return seq[self._rng.below(len(seq))]

    def coin(self):
        return self._rng.below(2)

    # -- structure queries --

    def colour(self, label):
        return self.copy.verts_colour[label]

    def degree(self, label):
        return self.copy.verts_degree[label]

    def pending(self, label):
        return self.host.pending_count(self.copy.verts[label], self.copy)

    def open_entries(self, label):
        return [e for e in self.copy.entries
                if e.src == label and e.state == "open"]

    # -- exploration --

    def resolve(self, label):
        e = self.host.resolve(self.copy.verts[label], self.copy, self._rng)
        if e is not None:
            self.copy.entries.append(e)
        return e

    def resolve_all(self, label):
        out = []
        while True:
            e = self.resolve(label)
            if e is None:
                return out
            out.append(e)

    def drain(self, label):
        """Resolve every remaining adjacency of a label whose outcomes the
        caller will not inspect again.

        Behaviourally identical to :meth:`resolve_all`; the separate name
        declares that nothing downstream (decisions, recolourings, output
        weights) depends on what the resolved far ends turn out to be, which
        lets derived mean-field evaluators aggregate these reveals instead
        of branching on them.
        """
        return self.resolve_all(label)

    def consume(self, label, barred=None):
        """Reveal every remaining adjacency of a label, join the usable
        ones and drain each newly added vertex, inspecting nothing.

        Usable means open, not a loop and (when ``barred`` is given) not
        ending at a barred vertex — the same test the policies apply
        before joining.  The separate name is a declaration that no
        decision, recolouring or output weight depends on what the
        revealed far ends turn out to be, so mean-field evaluators may
        aggregate the whole layer instead of branching over its types.
        """
        c = self.copy
        for e in self.resolve_all(label):
            if e.state != "open" or c.is_loop(e):
                continue
            if barred is not None and e.far_colour == barred:
                continue
            before = len(c.verts)
            lbl = self.join(e)
            if len(c.verts) > before:
                self.drain(lbl)

    def join(self, entry):
        """Bind an open entry: extend the copy or close a cycle.

        Returns the label of the far vertex.  Joining an entry whose far
        end is already in the copy records the edge and consumes the entry
        without adding a vertex.
        """
        if entry.state != "open":
            raise BadParams("entry already %s" % entry.state)
        far = entry.far
        if far in self.copy.labels:
            lbl = self.copy.labels[far]
            entry.state = "closed"
        else:
            lbl = len(self.copy.verts)
            self.copy.verts.append(far)
            self.copy.labels[far] = lbl
            self.copy.verts_colour.append(entry.far_colour)
            self.copy.verts_degree.append(entry.far_degree)
            entry.state = "joined"
        self.copy.copy_edges.append((entry.src, lbl, entry.ref))
        return lbl


def build_query_copy(state, v, policy, rng, slot=0):
    """Explore from root ``v`` under the policy's subrule; return the copy."""
    host = make_host(state)
    if not host.alive(v):
        raise BadParams("root %d is not alive" % v)
    copy = QueryCopy(v, host.colour(v), host.degree(v), host.kind == "graph")
    copy.slot = slot
    cb = CopyBuilder(host, copy, rng)
    policy.explore(cb)
    return copy, cb


# --------------------------------------------------------------------------
# selection rules
# --------------------------------------------------------------------------


class Prioritised:
    """Pick one vertex u.a.r. from the highest-priority nonempty types.

    ``key`` maps a (colour, degree) type to a sortable rank or None for
    "never select".  All types sharing the minimal rank form one pool and
    the vertex is uniform over their union.
    """

    size = 1
    stops_when_unselectable = True

    def __init__(self, key):
        self.key = key

    def _pool(self, host):
        best, pool = None, []
        for ty, arr in host.index.arrays.items():
            if not arr:
                continue
            rank = self.key(ty)
            if rank is None:
                continue
            if best is None or rank < best:
                best, pool = rank, [arr]
            elif rank == best:
                pool.append(arr)
        return pool

    def has_candidates(self, host):
        return bool(self._pool(host))

    def select(self, host, t, rng):
        pool = self._pool(host)
        if not pool:
            return []
        total = sum(len(a) for a in pool)
        j = rng.below(total)
        for arr in pool:
            if j < len(arr):
                return [arr[j]]
            j -= len(arr)
        raise AssertionError("unreachable")


class Chunky:
    """Independent Bernoulli selection with per-type probabilities <= eps.

    ``profile`` maps a type to a coefficient in [0, 1]; the inclusion
    probability is ``eps * profile(type)``.  Selection skips through each
    type array geometrically, so the cost is proportional to the number of
    selected vertices, and barred vertices are never selected.
    """

    stops_when_unselectable = False

    def __init__(self, epsilon, profile=None, barred=None):
        if not (0.0 < epsilon <= 1.0):
            raise BadParams("chunky granularity must be in (0, 1]")
        self.epsilon = float(epsilon)
        self.profile = profile
        self.barred = barred

    def _prob(self, t, ty):
        if self.barred is not None and ty[0] == self.barred:
            return 0.0
        c = 1.0 if self.profile is None else float(self.profile(t, ty))
        if not (0.0 <= c <= 1.0):
            raise BadParams("chunky profile coefficient %r outside [0,1]" % c)
        return self.epsilon * c

    def has_candidates(self, host):
        for ty, arr in host.index.arrays.items():
            if arr and (self.barred is None or ty[0] != self.barred):
                return True
        return False

    def select(self, host, t, rng):
        picked = []
        for ty in sorted(host.index.arrays):
            arr = host.index.arrays[ty]
            if not arr:
                continue
            p = self._prob(t, ty)
            if p <= 0.0:
                continue
            if p >= 1.0:
                picked.extend(arr)
                continue
            log1mp = math.log1p(-p)
            pos = -1
            while True:
                u = rng.random()
                pos += 1 + int(math.log1p(-u) / log1mp)
                if pos >= len(arr):
                    break
                picked.append(arr[pos])
        return picked


class Deprioritised:
    """Draw a colour class from given relative selection functions.

    ``mix`` is called with (x, census) where x = t/n and census maps
    (colour, degree) to counts; it must return a list of (colour, prob)
    summing to 1.  The vertex is then uniform within the drawn colour
    class; drawing an empty class raises Stuck.  An optional burn-in
    delegates to ``burn_rule`` for the first ``burn_in * n`` steps.
    """

    size = 1
    stops_when_unselectable = True

    def __init__(self, mix, burn_in=0.0, burn_rule=None, barred=None):
        self.mix = mix
        self.burn_in = float(burn_in)
        self.burn_rule = burn_rule
        self.barred = barred

    def _active(self, host, t):
        if self.burn_rule is not None and t <= self.burn_in * host.n:
            return self.burn_rule
        return None

    def has_candidates(self, host):
        for ty, arr in host.index.arrays.items():
            if arr and (self.barred is None or ty[0] != self.barred):
                return True
        return False

    def select(self, host, t, rng):
        burn = self._active(host, t)
        if burn is not None:
            return burn.select(host, t, rng)
        census = host.census()
        weights = self.mix(t / host.n, census)
        total = math.fsum(w for _, w in weights)
        if abs(total - 1.0) > 1e-9:
            raise BadParams("relative selection functions sum to %r" % total)
        u = rng.random()
        acc = 0.0
        chosen = weights[-1][0]
        for colour, w in weights:
            acc += w
            if u < acc:
                chosen = colour
                break
        pool = [arr for ty, arr in host.index.arrays.items()
                if ty[0] == chosen and arr]
        if not pool:
            raise Stuck("selected colour %r has no alive vertices at step %d"
                        % (chosen, t))
        total = sum(len(a) for a in pool)
        j = rng.below(total)
        for arr in pool:
            if j < len(arr):
                return [arr[j]]
            j -= len(arr)
        raise AssertionError("unreachable")


class PairedPrioritised:
    """Select a symmetric pair of colour classes (one vertex from each).

    Unordered class pairs {a, b} are ranked by ``key``; a pair is eligible
    when both orientations are populated (two distinct vertices if a == b).
    The two picks are returned in class order so the policy can tell the
    roles apart via its slot.
    """

    size = 2
    stops_when_unselectable = True

    def __init__(self, key, classes):
        self.key = key
        self.classes = classes  # list of unordered colour pairs (a, b)

    def _colour_pool(self, host, colour):
        return [arr for ty, arr in host.index.arrays.items()
                if ty[0] == colour and arr]

    def _eligible(self, host):
        out = []
        for a, b in self.classes:
            na = sum(len(x) for x in self._colour_pool(host, a))
            if a == b:
                if na >= 2:
                    out.append((a, b))
            else:
                nb = sum(len(x) for x in self._colour_pool(host, b))
                if na >= 1 and nb >= 1:
                    out.append((a, b))
        return out

    def has_candidates(self, host):
        return bool(self._eligible(host))

    def _draw(self, host, colour, rng, skip=None):
        pool = self._colour_pool(host, colour)
        total = sum(len(a) for a in pool)
        while True:
            j = rng.below(total)
            for arr in pool:
                if j < len(arr):
                    v = arr[j]
                    break
                j -= len(arr)
            if v != skip:
                return v
            # skip is only ever set with >= 2 candidates present, so this
            # redraw terminates with probability 1.

    def select(self, host, t, rng):
        elig = self._eligible(host)
        if not elig:
            return []
        best = min(elig, key=self.key)
        a, b = best
        va = self._draw(host, a, rng)
        vb = self._draw(host, b, rng, skip=va if a == b else None)
        return [va, vb]


def select_vertices(state, rule, t, rng):
    """Apply a selection rule at step ``t`` and return the selected set."""
    return rule.select(make_host(state), t, rng)


# --------------------------------------------------------------------------
# clash detection and the recolouring step
# --------------------------------------------------------------------------


def detect_clashes(copies, state):
    """Classify coincidences between same-step copies.

    A host vertex clashes when it (a) lies in two or more copies, is
    looped, or (b, c) is connected to a copy vertex by a live edge that is
    not a copy edge — both endpoints clash, whether the edge was revealed
    by some copy or (graph host only) is still unrevealed.
    """
    host = make_host(state)
    member = {}
    for ci, c in enumerate(copies):
        for lbl, hv in enumerate(c.verts):
            member.setdefault(hv, []).append((ci, lbl))

    clash = set()
    for hv, places in member.items():
        if len(places) >= 2:
            clash.add(hv)

    copy_refs = set()
    for c in copies:
        for _, _, ref in c.copy_edges:
            copy_refs.add(ref)

    for c in copies:
        for e in c.entries:
            if c.is_loop(e):
                clash.add(e.far)
            elif e.state == "open" and e.far in member:
                clash.add(e.far)
                clash.add(c.verts[e.src])

    if host.kind == "graph":
        g = host.g
        for hv in member:
            for eid in g._inc[hv]:
                if not g.e_alive[eid] or eid in copy_refs:
                    continue
                far = g.other_end(eid, hv)
                if far == hv:
                    clash.add(hv)
                elif far in member:
                    clash.add(hv)
                    clash.add(far)
    return clash


def recolour_and_delete(state, copies, builders, clash, policy, rng):
    """Run the recolouring step and mutate the host.

    Copy vertices die with their policy-assigned output colours (clashes
    with the clash colour); every revealed edge dies; external vertices hit
    exactly once take the entry's transient colour, those hit twice or more
    are barred.  Entries revealed by clash vertices are void: they recolour
    nothing (the silent degree drop still happens through edge deletion).

    Returns (w_increments, survivors_recoloured).
    """
    host = make_host(state)

    # Recolouring decisions are drawn for every copy, clash or not; the
    # clash set then only selects which of them take effect.
    for cb in builders:
        policy.finalize(cb)

    for c in copies:
        c.final_pending = [host.pending_count(hv, c) for hv in c.verts]

    # External hits: open entries of non-clash copy vertices whose far end
    # is outside every copy.
    member = set()
    for c in copies:
        member.update(c.verts)
    hits = {}
    for c in copies:
        for e in c.entries:
            if e.state != "open" or e.far in member:
                continue
            if c.verts[e.src] in clash:
                continue
            hits.setdefault(e.far, []).append(e)

    touched = set()

    for hv in clash:
        touched.update(host.delete_vertex(hv, policy.CLASH, rng))

    recoloured = []
    for c in copies:
        for lbl, hv in enumerate(c.verts):
            if hv in clash:
                continue
            if c.final_pending[lbl] == 0:
                if lbl not in c.out:
                    raise BadParams(
                        "policy %s left copy vertex %d without an output"
                        % (policy.name, lbl))
                touched.update(host.delete_vertex(hv, c.out[lbl], rng))
            else:
                new = c.trans.get(lbl)
                if new is not None and new != host.colour(hv):
                    host.set_colour(hv, new)
                recoloured.append(hv)
                touched.add(hv)

    # Every exposed adjacency is deleted, including entries of clash
    # vertices and edges between surviving transients.
    for c in copies:
        for e in c.entries:
            touched.update(host.delete_ref(e.ref))
        for _, _, ref in c.copy_edges:
            touched.update(host.delete_ref(ref))

    for far, entries in hits.items():
        cur = host.colour(far)
        if len(entries) >= 2:
            new = policy.BARRED
        elif cur == policy.BARRED:
            new = cur
        else:
            wc = entries[0].w_colour
            new = cur if wc is None else wc
        if new != cur:
            host.set_colour(far, new)
        touched.add(far)

    for v in touched:
        if host.alive(v):
            host.retype(v)

    w_inc = {}
    for c in copies:
        local = policy.outputs(c, {lbl for lbl, hv in enumerate(c.verts)
                                   if hv in clash})
        for name, val in local.items():
            w_inc[name] = w_inc.get(name, 0.0) + val
    return w_inc, recoloured


def count_preclashes(state, selected, depth):
    """Unordered pairs of selected roots within distance 2*depth.

    Distances are over live edges, so this must run before the step
    mutates anything.  Only the graph host knows its unexplored edges; the
    pairing host cannot answer without exposing pairs, which would change
    the process.
    """
    host = make_host(state)
    if host.kind != "graph":
        raise BadParams("pre-clash counting requires the graph backend")
    if len(selected) <= 1:
        return 0
    g = host.g
    S = set(selected)
    radius = 2 * depth
    total = 0
    for v in sorted(S):
        dist = {v: 0}
        frontier = [v]
        for d in range(radius):
            nxt = []
            for x in frontier:
                for eid in g._inc[x]:
                    if not g.e_alive[eid]:
                        continue
                    u = g.other_end(eid, x)
                    if u not in dist:
                        dist[u] = d + 1
                        nxt.append(u)
            frontier = nxt
            if not frontier:
                break
        for u in dist:
            if u > v and u in S:
                total += 1
    return total


# --------------------------------------------------------------------------
# the step loop
# --------------------------------------------------------------------------


class StepRecord:
    """Per-step trajectory row: census, outputs, clash and pre-clash counts."""

    __slots__ = ("t", "census", "w", "clashes", "preclashes", "selected",
                 "clash_vertices")

    def __init__(self, t, census, w, clashes, preclashes, selected,
                 clash_vertices=None):
        self.t = t
        self.census = census
        self.w = w
        self.clashes = clashes
        self.preclashes = preclashes
        self.selected = selected
        self.clash_vertices = clash_vertices


class RunResult:
    """Everything a finished run exposes."""

    def __init__(self, policy, host, trajectory, outputs, stopped):
        self.policy = policy
        self.host = host
        self.trajectory = trajectory
        self.outputs = outputs
        self.stopped = stopped

    @property
    def steps(self):
        return self.trajectory[-1].t

    def output_set(self, name):
        idx = self.policy.output_colours.index(name)
        host = self.host
        return [v for v in range(host.n)
                if not host.alive(v) and host.out_colour(v) == idx]

    def output_sets(self):
        return {name: self.output_set(name)
                for name in self.policy.output_colours}

    def survivors(self):
        return [v for v in range(self.host.n) if self.host.alive(v)]


def step(state, policy, selected, rng, t, keep_clash_vertices=False,
         preclashes=-1):
    """Run one full step (copies, clashes, recolouring) for a selected set.

    Each root's exploration and recolouring randomness comes from a stream
    derived from (step, root), so the joint law matches pre-assigned
    per-vertex labels; the mutation randomness stays on the caller's
    stream.
    """
    host = make_host(state)
    copies, builders = [], []
    for slot, v in enumerate(selected):
        croot = rng.split(t * host.n + v)
        copy, cb = build_query_copy(host, v, policy, croot, slot=slot)
        copies.append(copy)
        builders.append(cb)

    clash = detect_clashes(copies, host)
    w_inc, _ = recolour_and_delete(host, copies, builders, clash, policy, rng)

    census = host.census()
    alive = sum(census.values())
    if alive + host.dead != host.n:
        raise AssertionError("conservation broken: %d alive + %d dead != %d"
                             % (alive, host.dead, host.n))
    return StepRecord(t, census, w_inc, len(clash), preclashes, len(selected),
                      clash_vertices=sorted(clash) if keep_clash_vertices
                      else None)


def run_algorithm(spec, state, stop="empty", rng=None, record_preclashes="auto",
                  keep_clash_vertices=False):
    """Iterate selection / exploration / clash / recolouring until stopping.

    ``stop`` is an integer step budget, the string "empty" (run until no
    selectable vertex remains), or a predicate called as f(host, t) before
    each step.  The trajectory starts with a step-0 row of initial counts.
    Stuck (from deprioritised selection) propagates to the caller.
    """
    if rng is None:
        raise BadParams("run_algorithm needs an explicit rng")
    host = make_host(state)
    policy = spec.policy
    rule = spec.selection

    if record_preclashes == "auto":
        record_preclashes = host.kind == "graph" and policy.depth <= 3

    max_steps = None
    predicate = None
    if isinstance(stop, int):
        max_steps = stop
    elif stop == "empty":
        pass
    elif callable(stop):
        predicate = stop
    else:
        raise BadParams("stop must be an int, 'empty', or a predicate")

    w_totals = {name: 0.0 for name in policy.w_names}
    records = [StepRecord(0, host.census(), dict(w_totals), 0,
                          0 if record_preclashes else -1, 0)]
    stopped = "empty"
    t = 0
    while True:
        if max_steps is not None and t >= max_steps:
            stopped = "max_steps"
            break
        if predicate is not None and predicate(host, t):
            stopped = "predicate"
            break
        if not rule.has_candidates(host):
            stopped = "empty"
            break
        selected = rule.select(host, t + 1, rng)
        if not selected and rule.stops_when_unselectable:
            stopped = "empty"
            break
        t += 1
        pre = (count_preclashes(host, selected, policy.depth)
               if record_preclashes else -1)
        rec = step(host, policy, selected, rng, t,
                   keep_clash_vertices=keep_clash_vertices, preclashes=pre)
        for name, val in rec.w.items():
            w_totals[name] = w_totals.get(name, 0.0) + val
        rec.w = dict(w_totals)
        records.append(rec)
    return RunResult(policy, host, records, dict(w_totals), stopped)
