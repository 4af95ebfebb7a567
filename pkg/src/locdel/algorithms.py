"""Concrete local deletion algorithms, output repair and validation.

Each algorithm is a Policy: an exploration rule (how a query copy grows
from a selected root), a recolouring rule (which output colours the copy
vertices die with, and how touched external vertices change transient
colour), and numeric output increments.  ``make_algorithm`` wires a policy
to its default selection rule; chunky and deprioritised variants derive
from the same policy.

Conventions shared by all policies here:

* transient colour 0 is the fresh colour of an untouched vertex, and the
  barred colour (never selectable, never recolourable) is always present;
* joined copy vertices are always fully resolved, so every copy vertex is
  diamond-free at the end of the step and dies with an output colour;
* barred vertices are never joined into a copy: the entry stays open and
  the framework keeps them barred.  Statistics driving a policy's choices
  ignore barred entries;
* loops and re-entering walks close cycles inside the copy; genuinely
  colliding structure is left to clash detection rather than patched over.
"""

from __future__ import annotations

import math

from .errors import BadParams, UnknownName
from .graphs import ColouredGraph, girth
from .lda import (Chunky, Deprioritised, PairedPrioritised, Prioritised,
                  RunResult)
from .rng import Xoshiro

INF = math.inf


# --------------------------------------------------------------------------
# policy base
# --------------------------------------------------------------------------


class Policy:
    """Shared plumbing: palettes, indices and the star exploration."""

    name = "?"
    depth = 1
    transient_colours = ["neutral", "barred"]
    output_colours = ["in", "out", "clash"]
    w_names = ["size"]
    normal = True

    def __init__(self):
        self.BARRED = self.transient_colours.index("barred")
        self.CLASH = self.output_colours.index("clash")

    # -- hooks ---------------------------------------------------------

    def explore(self, cb):
        raise NotImplementedError

    def finalize(self, cb):
        raise NotImplementedError

    def outputs(self, copy, clash_labels):
        raise NotImplementedError

    # priority_key(ty) -> sortable rank or None is supplied by subclasses
    # (None marks a type as never selectable under the prioritised rule).

    def deprioritised_mix(self):
        """Relative selection functions, or None when not defined."""
        return None

    # -- helpers -------------------------------------------------------

    def _usable(self, cb, e):
        """Open entry that may be joined: not barred, not a loop."""
        return (e.state == "open" and e.far_colour != self.BARRED
                and not cb.copy.is_loop(e))

    def _star(self, cb):
        """Join every usable root adjacency and resolve the joined vertices."""
        entries = cb.resolve_all(0)
        for e in entries:
            if self._usable(cb, e):
                cb.join(e)
        for lbl in range(1, len(cb.copy.verts)):
            cb.drain(lbl)
        return entries


class _MinDegreeKey:
    """Ascending live degree over fresh vertices; everything else excluded."""

    @staticmethod
    def priority_key(ty):
        colour, deg = ty
        if colour != 0:
            return None
        return (deg,)


# --------------------------------------------------------------------------
# independent set policies
# --------------------------------------------------------------------------


class MinDegreeIS(Policy, _MinDegreeKey):
    """Greedy independent set: take a minimum-degree vertex, delete N[v].

    The copy is the root plus its joined neighbourhood; the neighbours'
    outside adjacencies are revealed so the neighbours die diamond-free,
    and their far endpoints stay fresh (their degree simply drops).
    """

    name = "min_degree_is"
    depth = 1

    def explore(self, cb):
        self._star(cb)

    def finalize(self, cb):
        c = cb.copy
        c.out[0] = 0
        for lbl in range(1, len(c.verts)):
            c.out[lbl] = 1

    def outputs(self, copy, clash_labels):
        return {"size": 0.0 if 0 in clash_labels else 1.0}


class MinDegreeDom(Policy, _MinDegreeKey):
    """Greedy dominating set: from a minimum-degree root, output its
    largest-degree neighbour w and delete N[w] together with the root.

    The root's other neighbours survive with one edge fewer; an isolated
    root joins the set by itself.
    """

    name = "min_degree_dom"
    depth = 2

    def explore(self, cb):
        c = cb.copy
        entries = cb.resolve_all(0)
        live = [e for e in entries if self._usable(cb, e)]
        if not live:
            c.notes["w"] = None
            return
        dmax = max(e.far_degree for e in live)
        w = cb.pick([e for e in live if e.far_degree == dmax])
        wl = cb.join(w)
        c.notes["w"] = wl
        # N(w) is deleted wholesale; nothing depends on what it contains.
        cb.consume(wl, self.BARRED)

    def finalize(self, cb):
        c = cb.copy
        wl = c.notes["w"]
        if wl is None:
            c.out[0] = 0
            return
        for lbl in range(len(c.verts)):
            c.out[lbl] = 1
        c.out[wl] = 0

    def outputs(self, copy, clash_labels):
        winner = copy.notes["w"]
        if winner is None:
            winner = 0
        return {"size": 0.0 if winner in clash_labels else 1.0}


class DzIS(Policy, _MinDegreeKey):
    """Degree-greedy independent set with the neighbour-exception rules.

    From a degree-i root with minimum neighbour degree j <= i, control may
    pass to a neighbour u: always when two or more neighbours realize j;
    for a single candidate u when (a) i = 2 and u's outside minimum degree
    beats the root's, or (b) 2 < i < r-1, u's outside degrees all exceed i
    and their sum is smaller than the root's.  Whoever wins joins the
    independent set and its closed neighbourhood is deleted.
    """

    name = "dz_is"
    depth = 2

    def __init__(self, r):
        super().__init__()
        if not isinstance(r, int) or r < 3:
            raise BadParams("dz_is needs an integer degree r >= 3")
        self.r = r

    def _join_and_expand(self, cb, entry):
        """Join entry, resolve it, and return its usable outside entries."""
        lbl = cb.join(entry)
        exts = cb.resolve_all(lbl)
        return lbl, [e for e in exts if self._usable(cb, e)]

    def explore(self, cb):
        c = cb.copy
        i = cb.degree(0)
        entries = cb.resolve_all(0)
        live = [e for e in entries if self._usable(cb, e)]
        if not live:
            c.notes["mode"] = "iso"
            c.notes["rule"] = "iso"
            return

        j = min(e.far_degree for e in live)
        cand = [e for e in live if e.far_degree == j]
        exception = None
        u_label = None
        u_exts = None
        if j <= i:
            if len(cand) >= 2:
                # Control passes to u outright; N(u) is deleted without
                # ever being looked at.
                u_label = cb.join(cb.pick(cand))
                cb.consume(u_label, self.BARRED)
                c.notes["rule"] = "1"
                c.notes["mode"] = "exc"
                c.notes["u"] = u_label
                return
            u_entry = cand[0]
            if i == 2 or 2 < i < self.r - 1:
                # Only here can an exception fire, and its test inspects
                # u's outside degrees.
                u_label, u_exts = self._join_and_expand(cb, u_entry)
                # Statistics range over N(u) \ {v}: parallel edges back to
                # the root do not count as outside neighbours.
                u_stats = [e for e in u_exts if e.far not in cb.copy.labels]
                others = [e for e in live if e is not u_entry]
                mindeg_u = min((e.far_degree for e in u_stats), default=INF)
                mindeg_v = min((e.far_degree for e in others), default=INF)
                sum_u = sum(e.far_degree for e in u_stats)
                sum_v = sum(e.far_degree for e in others)
                if i == 2 and mindeg_u < mindeg_v:
                    exception = "2a"
                elif 2 < i < self.r - 1 and mindeg_u > i and sum_u < sum_v:
                    exception = "2b"
            else:
                u_label = cb.join(u_entry)
                cb.drain(u_label)

        c.notes["rule"] = exception or "std"
        if exception:
            c.notes["mode"] = "exc"
            c.notes["u"] = u_label
            for e2 in u_exts:
                if e2.state != "open":
                    continue
                before = len(c.verts)
                l2 = cb.join(e2)
                if len(c.verts) > before:
                    cb.drain(l2)
        else:
            c.notes["mode"] = "std"
            for e in live:
                if e.state != "open":
                    continue
                before = len(c.verts)
                l2 = cb.join(e)
                if len(c.verts) > before:
                    cb.drain(l2)

    def finalize(self, cb):
        c = cb.copy
        mode = c.notes["mode"]
        for lbl in range(len(c.verts)):
            c.out[lbl] = 1
        c.out[0 if mode != "exc" else c.notes["u"]] = 0

    def outputs(self, copy, clash_labels):
        winner = copy.notes["u"] if copy.notes["mode"] == "exc" else 0
        return {"size": 0.0 if winner in clash_labels else 1.0}


# --------------------------------------------------------------------------
# path-exploring independent set policies (cubic graphs)
# --------------------------------------------------------------------------


def _follow(policy, cb, entry, avoid, cap):
    """Walk along degree-2 vertices starting through an open entry.

    Joins every degree-2 far endpoint and resolves onward.  Returns
    (path_labels, kind, tail) where kind describes why the walk stopped:

    * "w":       far endpoint of tail has degree >= 3 (left open);
    * "cap":     the join budget ran out (tail left open);
    * "barred":  far endpoint is barred (left open);
    * "dead":    the path ended in a degree <= 1 vertex (joined) or with
                 nothing left to resolve;
    * "cycle":   the walk came back to ``avoid``'s far endpoint; both
                 edges are closed, completing a cycle through the root;
    * "closure": the walk re-entered the copy anywhere else (edge closed).
    """
    path = []
    cur = entry
    while True:
        if cur.far in cb.copy.labels:
            cb.join(cur)
            return path, "closure", None
        if cur.far_colour == policy.BARRED:
            return path, "barred", cur
        if cur.far_degree >= 3:
            return path, "w", cur
        dead_end = cur.far_degree <= 1
        if not dead_end and len(path) >= cap:
            return path, "cap", cur
        lbl = cb.join(cur)
        path.append(lbl)
        # The avoid entry's far end can reach here disguised with any
        # degree (its pair with the root is already consumed), so the
        # cycle test must follow every join, dead ends included.
        if (avoid is not None and avoid.state == "open"
                and avoid.far == cb.copy.verts[lbl]):
            cb.join(avoid)
            return path, "cycle", None
        if dead_end:
            return path, "dead", None
        cur = cb.resolve(lbl)
        if cur is None:
            return path, "dead", None


class CubicIsPath(Policy, _MinDegreeKey):
    """Independent set via one-sided path exploration on subcubic graphs.

    Roots of degree != 2 behave like the greedy rule.  A degree-2 root
    picks a direction uniformly and walks the degree-2 path until a
    degree-3 terminal (or a cycle back through the root, or the cap d);
    vertices at even distance from the far end are inserted, and whenever
    the root itself is inserted its other neighbour is deleted too.
    """

    name = "cubic_is_path"

    def __init__(self, d=50):
        super().__init__()
        if not isinstance(d, int) or d < 1:
            raise BadParams("path exploration cap d must be a positive integer")
        self.d = d
        self.depth = d + 1

    def _consume_terminal(self, cb, tail):
        """Join an anchoring terminal and resolve it (it dies "out").

        A terminal whose far end was meanwhile walked into the copy is a
        chord; closing it between two inserted vertices would hide a real
        coincidence, so that edge is left open for the clash rule, which
        removes both endpoints from the output.
        """
        if tail.far in cb.copy.labels:
            lbl = cb.copy.labels[tail.far]
            ins = cb.copy.notes.get("in") or set()
            if lbl in ins and tail.src in ins:
                return None
            cb.join(tail)
            cb.drain(lbl)
            return lbl
        lbl = cb.join(tail)
        cb.drain(lbl)
        return lbl

    def explore(self, cb):
        c = cb.copy
        if cb.degree(0) != 2:
            self._star(cb)
            c.notes["in"] = {0}
            return

        entries = cb.resolve_all(0)
        opens = [e for e in entries if e.state == "open"]
        walkable = [e for e in opens if e.far_colour != self.BARRED]
        if not walkable:
            # Both neighbours barred (or a loop consumed everything): the
            # root joins the set alone, barred neighbours stay alive.
            c.notes["in"] = {0}
            return
        e = cb.pick(opens)
        e_other = next((x for x in opens if x is not e), None)
        if e.far_colour == self.BARRED:
            path, kind, tail = [], "barred", e
        else:
            path, kind, tail = _follow(self, cb, e, e_other, self.d)

        m = len(path)
        inserted = set()
        c.notes["in"] = inserted
        if kind == "cycle":
            inserted.update(path[idx] for idx in range(m - 1, -1, -2))
        elif kind == "closure":
            pass  # coincidence regime: insert nothing, let clashes sort it out
        else:
            inserted.update(path[idx] for idx in range(m - 1, -1, -2))
            if m % 2 == 0:
                inserted.add(0)
            if kind in ("w", "cap"):
                self._consume_terminal(cb, tail)
            if (m % 2 == 0 and e_other is not None
                    and e_other.state == "open"
                    and e_other.far_colour != self.BARRED):
                self._consume_terminal(cb, e_other)

    def finalize(self, cb):
        c = cb.copy
        inserted = c.notes["in"]
        for lbl in range(len(c.verts)):
            c.out[lbl] = 0 if lbl in inserted else 1

    def outputs(self, copy, clash_labels):
        good = len(copy.notes["in"] - clash_labels)
        return {"size": float(good)}


class CubicIsPathImproved(CubicIsPath):
    """Two-sided path exploration with a second path through the far end.

    The degree-2 path P through the root is explored in both directions.
    Odd |P| inserts alternate vertices from both ends and deletes both
    terminals.  Even |P| picks one terminal w2 u.a.r., joins it, and
    explores the maximal degree-2 path P' through w2 in what is left; the
    parities of the two sides of P' decide which of w2 and the side
    vertices are inserted, the other terminals being deleted or merely
    downgraded.  Anything outside the clean regime (caps, barred or
    degree-deficient terminals, re-entering walks) falls back to a valid
    alternation that never inserts a vertex next to an undeleted one.
    """

    name = "cubic_is_path_improved"

    def __init__(self, d=50):
        super().__init__(d=d)
        self.depth = 2 * d + 2

    def _side_insert_even(self, side):
        """Indices 1, 3, ... — first vertex stays out (w2 was inserted)."""
        return [side[idx] for idx in range(1, len(side), 2)]

    def _side_insert_odd(self, side):
        """Indices 0, 2, ... — first vertex in (w2 was deleted)."""
        return [side[idx] for idx in range(0, len(side), 2)]

    def explore(self, cb):
        c = cb.copy
        if cb.degree(0) != 2:
            self._star(cb)
            c.notes["in"] = {0}
            return

        entries = cb.resolve_all(0)
        opens = [e for e in entries if e.state == "open"]
        walkable = [e for e in opens if e.far_colour != self.BARRED]
        if not walkable:
            c.notes["in"] = {0}
            return

        inserted = set()
        c.notes["in"] = inserted

        eA = opens[0]
        eB = opens[1] if len(opens) > 1 else None
        if eA.far_colour == self.BARRED:
            pathA, kindA, tailA = [], "barred", eA
        else:
            pathA, kindA, tailA = _follow(self, cb, eA, eB, self.d)
        if kindA == "cycle":
            inserted.update(pathA[idx] for idx in range(len(pathA) - 1, -1, -2))
            return
        if kindA == "closure":
            return
        if eB is None or eB.state != "open":
            kindB, pathB, tailB = "dead", [], None
        elif eB.far_colour == self.BARRED:
            pathB, kindB, tailB = [], "barred", eB
        else:
            pathB, kindB, tailB = _follow(self, cb, eB, None, self.d)
        if kindB == "closure":
            return

        # P = x_1 .. x_m runs from the A-side end to the B-side end.
        P = list(reversed(pathA)) + [0] + list(pathB)
        m = len(P)
        ends = [(kindA, tailA), (kindB, tailB)]

        if m % 2 == 1:
            inserted.update(P[idx] for idx in range(0, m, 2))
            for kind, tail in ends:
                if kind in ("w", "cap"):
                    self._consume_terminal(cb, tail)
            return

        # Even path: pick the far terminal, the other end keeps index 0.
        flip = cb.coin()
        if flip:
            P.reverse()
            ends.reverse()
        (kind1, tail1), (kind2, tail2) = ends

        if kind2 != "w" or tail2.far in cb.copy.labels:
            # No clean far terminal to pivot on: alternate from the far end,
            # leaving x_1 out so the near terminal survives untouched.
            inserted.update(P[idx] for idx in range(m - 1, 0, -2))
            if kind2 == "cap":
                self._consume_terminal(cb, tail2)
            return

        w2 = cb.join(tail2)
        w2exts = [e for e in cb.resolve_all(w2) if e.state == "open"]
        sides = []
        fallback = False
        for pos, e in enumerate(w2exts):
            if e.state != "open":
                continue
            if e.far_colour == self.BARRED:
                sides.append(([], "barred", e))
                continue
            other = w2exts[1 - pos] if len(w2exts) == 2 else None
            sp, sk, st = _follow(self, cb, e, other, self.d)
            if sk == "cycle":
                # P' is a cycle through w2: colour it like any cycle with
                # w2 playing the deleted terminal.
                inserted.update(P[idx] for idx in range(m - 1, 0, -2))
                inserted.update(sp[idx] for idx in range(len(sp) - 1, -1, -2))
                return
            if sk == "closure":
                fallback = True
            sides.append((sp, sk, st))
        while len(sides) < 2:
            sides.append(([], "dead", None))

        if fallback:
            inserted.update(P[idx] for idx in range(m - 1, 0, -2))
            for sp, sk, st in sides:
                if sk in ("w", "cap") and st is not None and st.state == "open":
                    self._consume_terminal(cb, st)
            return

        (sideA, skA, stA), (sideB, skB, stB) = sides
        j, k = len(sideA), len(sideB)

        def _delete_terminal(kind, tail):
            if kind in ("w", "cap") and tail is not None and tail.state == "open":
                self._consume_terminal(cb, tail)

        if j % 2 == 0 and k % 2 == 0:
            inserted.add(w2)
            inserted.update(P[idx] for idx in range(m - 2, -1, -2))
            inserted.update(self._side_insert_even(sideA))
            inserted.update(self._side_insert_even(sideB))
            _delete_terminal(kind1, tail1)
            _delete_terminal(skA, stA)
            _delete_terminal(skB, stB)
        elif j % 2 == 1 and k % 2 == 1:
            inserted.update(P[idx] for idx in range(m - 1, 0, -2))
            inserted.update(self._side_insert_odd(sideA))
            inserted.update(self._side_insert_odd(sideB))
            _delete_terminal(skA, stA)
            _delete_terminal(skB, stB)
            # x_1 dies unselected and its terminal merely loses the edge.
        else:
            if j % 2 == 0:
                (sideA, skA, stA), (sideB, skB, stB) = sides[1], sides[0]
                j, k = len(sideA), len(sideB)
            inserted.update(P[idx] for idx in range(m - 1, 0, -2))
            inserted.update(self._side_insert_odd(sideA))
            # even side: insert b_1, b_3, ..., b_{k-1}; b_k stays out and
            # its terminal survives downgraded.
            inserted.update(sideB[idx] for idx in range(0, k - 1, 2))
            _delete_terminal(skA, stA)


# --------------------------------------------------------------------------
# cut-type policies
# --------------------------------------------------------------------------

_RB = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
_RB_INDEX = {rb: i for i, rb in enumerate(_RB)}
_CUT_PRIORITY = {(1, 0): 1, (0, 1): 2, (1, 1): 3, (0, 0): 4}


class CubicMaxcut(Policy):
    """Large cut on cubic graphs by majority-opposing colouring.

    A root's transient colour counts its already-coloured former
    neighbours (r reds, b blues); the root takes the minority side and
    banks max(r, b) newly decided cut edges.  Revealed neighbours left
    alive have their counter bumped; a neighbour whose last edge this was
    is amalgamated into the copy and decided the same way immediately.
    """

    name = "cubic_maxcut"
    depth = 1
    transient_colours = ["00", "10", "01", "20", "11", "02", "barred"]
    output_colours = ["red", "blue", "clash"]
    w_names = ["cut"]

    RED, BLUE = 0, 1

    def rb(self, colour):
        return _RB[colour]

    def explore(self, cb):
        c = cb.copy
        entries = cb.resolve_all(0)
        fars = [e.far for e in entries]
        amalg = []
        for e in entries:
            if not (self._usable(cb, e) and fars.count(e.far) == 1):
                continue
            ra, ba = self.rb(e.far_colour)
            if ra + ba == 2:
                # A twice-hit neighbour is deleted alongside the root: its
                # own final colour only depends on this last touch, so it
                # joins the copy instead of receiving a counter increment.
                amalg.append((cb.join(e), e))
        c.notes["amalg"] = amalg

    def _oppose(self, cb, r, b):
        """Minority side and the number of cut edges that decision banks."""
        if r > b:
            return self.BLUE, r
        if b > r:
            return self.RED, b
        return (self.RED if cb.coin() else self.BLUE), r

    def _root_side(self, cb, r, b):
        return self._oppose(cb, r, b)

    def _amalg_side(self, cb, r, b):
        return self._oppose(cb, r, b)

    def finalize(self, cb):
        c = cb.copy
        r0, b0 = self.rb(cb.colour(0))
        side, gain = self._root_side(cb, r0, b0)
        c.out[0] = side
        gains = [(0, float(gain))]
        for lbl, e in c.notes["amalg"]:
            ra, ba = self.rb(e.far_colour)
            if side == self.RED:
                ra += 1
            else:
                ba += 1
            aside, again = self._amalg_side(cb, ra, ba)
            c.out[lbl] = aside
            gains.append((lbl, float(again)))
        c.notes["gains"] = gains
        for e in c.entries:
            if e.state != "open" or e.far in c.labels:
                continue
            if e.far_colour == self.BARRED:
                continue
            rr, bb = self.rb(e.far_colour)
            if side == self.RED:
                rr += 1
            else:
                bb += 1
            key = _RB_INDEX.get((rr, bb))
            if key is None:
                raise BadParams("cut colour counters need maximum degree 3")
            e.w_colour = key

    def outputs(self, copy, clash_labels):
        cut = 0.0
        for lbl, gain in copy.notes["gains"]:
            if lbl not in clash_labels:
                cut += gain
        return {"cut": cut}

    def priority_key(self, ty):
        colour, _deg = ty
        if colour == self.BARRED:
            return None
        r, b = _RB[colour]
        if r >= 2 or b >= 2:
            return (0,)
        return (_CUT_PRIORITY[(r, b)],)

    def deprioritised_mix(self):
        c00, c10, c01, c02 = 0, 1, 2, 5

        def mix(x, census):
            y = [0.0] * 6
            for (colour, deg), cnt in census.items():
                if colour < 6:
                    y[colour] += cnt
            s = math.fsum((3 - r - b) * y[_RB_INDEX[(r, b)]] for r, b in _RB)
            den = s * s + 6.0 * s * y[c00] + 12.0 * y[c00] * y[c01]
            if den <= 0.0:
                raise BadParams("relative selection functions degenerate")
            return [(c01, (s * s - 12.0 * y[c00] * y[c01]) / den),
                    (c10, 6.0 * s * y[c00] / den),
                    (c02, 24.0 * y[c00] * y[c01] / den)]

        return mix


_PAIR_CLASSES = [((2, 0), (0, 2)), ((1, 1), (1, 1)), ((1, 0), (0, 1)),
                 ((0, 0), (0, 0))]


class Bisection(CubicMaxcut):
    """Balanced red/blue colouring of a cubic graph, small or large cut.

    Each step selects a mirrored pair of counters (xy and yx) and colours
    them symmetrically, so both classes grow in lockstep; ties are split
    by the pair roles.  For the minimum objective a vertex joins its
    majority side (keeping edges uncut); for the maximum it opposes.
    """

    name = "bisection"

    def __init__(self, objective="min"):
        super().__init__()
        if objective not in ("min", "max"):
            raise BadParams("bisection objective must be 'min' or 'max'")
        self.objective = objective

    def _pick(self, cb, r, b, slot):
        if r == b:
            side = self.RED if slot == 0 else self.BLUE
            return side, float(r)
        if self.objective == "min":
            side = self.RED if r > b else self.BLUE  # join the majority
            return side, float(min(r, b))
        side = self.BLUE if r > b else self.RED
        return side, float(max(r, b))

    def _root_side(self, cb, r, b):
        return self._pick(cb, r, b, cb.copy.slot)

    def _amalg_side(self, cb, r, b):
        if r == b:
            return (self.RED if cb.coin() else self.BLUE), float(r)
        return self._pick(cb, r, b, 0)


# --------------------------------------------------------------------------
# induced forest
# --------------------------------------------------------------------------


class InducedForest(Policy):
    """Grow an induced forest: blue vertices touch exactly one tree vertex.

    The selected root turns purple (enters the forest).  Its blue
    neighbours would now touch two tree vertices, so they are killed
    yellow; its fresh neighbours become blue.  Selection prefers blue
    roots, so the forest grows connectedly once seeded.
    """

    name = "induced_forest"
    depth = 1
    transient_colours = ["neutral", "blue", "barred"]
    output_colours = ["purple", "yellow", "clash"]
    w_names = ["size"]

    BLUE_T = 1

    def explore(self, cb):
        entries = cb.resolve_all(0)
        for e in entries:
            if self._usable(cb, e) and e.far_colour == self.BLUE_T:
                lbl = cb.join(e)
                cb.drain(lbl)

    def finalize(self, cb):
        c = cb.copy
        c.out[0] = 0
        for lbl in range(1, len(c.verts)):
            c.out[lbl] = 1
        for e in c.entries:
            if (e.state == "open" and e.src == 0 and e.far not in c.labels
                    and e.far_colour == 0):
                e.w_colour = self.BLUE_T

    def outputs(self, copy, clash_labels):
        return {"size": 0.0 if 0 in clash_labels else 1.0}

    def priority_key(self, ty):
        colour, _deg = ty
        if colour == self.BARRED:
            return None
        return (0,) if colour == self.BLUE_T else (1,)


# --------------------------------------------------------------------------
# the registry
# --------------------------------------------------------------------------


class AlgorithmSpec:
    """A policy wired to a selection rule, ready for run_algorithm."""

    def __init__(self, name, params, policy, selection):
        self.name = name
        self.params = dict(params)
        self.policy = policy
        self.selection = selection

    @property
    def depth(self):
        return self.policy.depth

    @property
    def truncation(self):
        return getattr(self.policy, "d", None)

    def default_selection(self):
        if self.name == "bisection":
            classes = self.params.get("priority")
            if classes is None:
                classes = [(_RB_INDEX[a], _RB_INDEX[b])
                           for a, b in _PAIR_CLASSES]
            else:
                classes = [(_RB_INDEX[tuple(a)] if not isinstance(a, int)
                            else a,
                            _RB_INDEX[tuple(b)] if not isinstance(b, int)
                            else b) for a, b in classes]
            order = {tuple(ab): i for i, ab in enumerate(classes)}
            return PairedPrioritised(lambda ab: order[tuple(ab)], classes)
        return Prioritised(self.policy.priority_key)

    def with_selection(self, mode, epsilon=None, profile=None, burn_in=0.02):
        """Return a sibling spec whose selection family is ``mode``."""
        if mode == "prioritised":
            rule = self.default_selection()
        elif self.name == "bisection":
            raise BadParams("bisection selects symmetric pairs; only the "
                            "prioritised family is defined")
        elif mode == "chunky":
            if epsilon is None:
                raise BadParams("chunky selection needs a granularity epsilon")
            rule = Chunky(epsilon, profile=profile, barred=self.policy.BARRED)
        elif mode == "deprioritised":
            mix = profile or self.policy.deprioritised_mix()
            if mix is None:
                raise BadParams("no relative selection functions are defined "
                                "for %s; pass profile=" % self.name)
            # The burn-in processes full-degree fresh vertices only, so the
            # other colour classes build up strictly positive counts before
            # the mixing functions start drawing from them.
            burn = Deprioritised(lambda x, census: [(0, 1.0)],
                                 barred=self.policy.BARRED)
            rule = Deprioritised(mix, burn_in=burn_in, burn_rule=burn,
                                 barred=self.policy.BARRED)
        else:
            raise BadParams("unknown selection mode %r" % mode)
        return AlgorithmSpec(self.name, self.params, self.policy, rule)


_FACTORIES = {
    "min_degree_is": (MinDegreeIS, (), {"r"}),
    "min_degree_dom": (MinDegreeDom, (), {"r"}),
    "dz_is": (DzIS, ("r",), {"r"}),
    "cubic_is_path": (CubicIsPath, (), {"d"}),
    "cubic_is_path_improved": (CubicIsPathImproved, (), {"d"}),
    "cubic_maxcut": (CubicMaxcut, (), set()),
    "bisection": (Bisection, (), {"objective", "priority"}),
    "induced_forest": (InducedForest, (), set()),
}

ALGORITHM_NAMES = sorted(_FACTORIES)


def make_algorithm(name, **params):
    """Build the named algorithm spec with its default (prioritised) rule."""
    if name not in _FACTORIES:
        raise UnknownName("no algorithm named %r (choose from %s)"
                          % (name, ", ".join(ALGORITHM_NAMES)))
    cls, required, allowed = _FACTORIES[name]
    unknown = set(params) - allowed
    if unknown:
        raise BadParams("%s does not accept parameters %s"
                        % (name, sorted(unknown)))
    missing = [k for k in required if k not in params]
    if missing:
        raise BadParams("%s requires parameters %s" % (name, missing))
    kwargs = dict(params)
    kwargs.pop("priority", None)  # consumed by the selection rule
    if name != "dz_is":
        kwargs.pop("r", None)  # degree is accepted but the policy is generic
    policy = cls(**kwargs)
    spec = AlgorithmSpec(name, params, policy, None)
    spec.selection = spec.default_selection()
    return spec


# --------------------------------------------------------------------------
# repair and validation
# --------------------------------------------------------------------------


def _simple_neighbours(g):
    adj = [[] for _ in range(g.n)]
    for _eid, u, v in g.edges():
        adj[u].append(v)
        adj[v].append(u)
    return adj


def repair_output(name, graph, result):
    """Turn a raw run output into a valid combinatorial object.

    ``graph`` must be the realized input graph (for a pairing run, realize
    it first); ``result`` is the finished RunResult.  Returns
    (object, report).  Repairs only ever add or assign leftover vertices;
    they never remove anything the run produced.
    """
    if not isinstance(result, RunResult):
        raise BadParams("repair_output expects the RunResult of the run")
    adj = _simple_neighbours(graph)

    if name in ("min_degree_is", "dz_is", "cubic_is_path",
                "cubic_is_path_improved"):
        chosen = set(result.output_set("in"))
        return sorted(chosen), {"added": 0}

    if name == "induced_forest":
        chosen = set(result.output_set("purple"))
        return sorted(chosen), {"added": 0}

    if name == "min_degree_dom":
        chosen = set(result.output_set("in"))
        dominated = set(chosen)
        for v in chosen:
            dominated.update(adj[v])
        added = []
        for v in range(graph.n):
            if v not in dominated:
                chosen.add(v)
                added.append(v)
                dominated.add(v)
                dominated.update(adj[v])
        return sorted(chosen), {"added": len(added), "added_vertices": added}

    if name in ("cubic_maxcut", "bisection"):
        side = [None] * graph.n
        for v in result.output_set("red"):
            side[v] = 0
        for v in result.output_set("blue"):
            side[v] = 1
        leftovers = [v for v in range(graph.n) if side[v] is None]
        if name == "cubic_maxcut":
            assigned = _cut_second_phase(graph, adj, side, leftovers)
        else:
            assigned = _balance_classes(adj, side, leftovers,
                                        result.policy.objective)
        cut = sum(1 for _eid, u, v in graph.edges() if side[u] != side[v])
        red = sum(1 for s in side if s == 0)
        blue = graph.n - red
        report = {"cut": cut, "red": red, "blue": blue, "added": assigned}
        return side, report

    raise UnknownName("no repair defined for %r" % name)


def _cut_second_phase(graph, adj, side, leftovers):
    """2-colour the leftover components, trees exactly, the rest greedily."""
    todo = set(leftovers)
    count = 0
    for start in leftovers:
        if start not in todo:
            continue
        comp = [start]
        seen = {start}
        qi = 0
        while qi < len(comp):
            x = comp[qi]
            qi += 1
            for y in adj[x]:
                if y in todo and y not in seen:
                    seen.add(y)
                    comp.append(y)
        todo -= seen
        count += len(comp)
        internal = sum(1 for x in comp for y in adj[x] if y in seen) // 2
        if internal == len(comp) - 1:
            # Tree: a proper 2-colouring cuts every internal edge; choose
            # the swap with the larger boundary gain.
            parity = {comp[0]: 0}
            order = [comp[0]]
            qi = 0
            while qi < len(order):
                x = order[qi]
                qi += 1
                for y in adj[x]:
                    if y in seen and y not in parity:
                        parity[y] = parity[x] ^ 1
                        order.append(y)
            gain = [0, 0]
            for flip in (0, 1):
                for x in comp:
                    sx = parity[x] ^ flip
                    for y in adj[x]:
                        if y not in seen and side[y] is not None:
                            gain[flip] += 1 if side[y] != sx else 0
            flip = 1 if gain[1] > gain[0] else 0
            for x in comp:
                side[x] = parity[x] ^ flip
        else:
            for x in comp:
                red_n = sum(1 for y in adj[x] if side[y] == 0)
                blue_n = sum(1 for y in adj[x] if side[y] == 1)
                side[x] = 1 if red_n >= blue_n else 0
    return count


def _balance_classes(adj, side, leftovers, objective):
    """Assign leftovers to the smaller class, then swap until balanced.

    Amalgamated and clash vertices can leave the classes unevenly sized,
    so after all leftovers are placed the larger class may still lead;
    vertices whose move damages the objective least are then flipped one
    at a time until the sizes differ by at most the parity of n.
    """
    red = sum(1 for s in side if s == 0)
    blue = sum(1 for s in side if s == 1)
    moved = len(leftovers)
    for v in leftovers:
        if red <= blue:
            side[v] = 0
            red += 1
        else:
            side[v] = 1
            blue += 1
    while abs(red - blue) >= 2:
        big = 0 if red > blue else 1
        best_v, best_delta = None, None
        for v in range(len(side)):
            if side[v] != big:
                continue
            same = sum(1 for u in adj[v] if side[u] == big)
            cross = len(adj[v]) - same
            delta = same - cross  # cut change if v switches sides
            if objective == "max":
                delta = -delta
            if best_delta is None or delta < best_delta:
                best_v, best_delta = v, delta
        side[best_v] = 1 - big
        moved += 1
        if big == 0:
            red -= 1
            blue += 1
        else:
            red += 1
            blue -= 1
    return moved


def validate_output(name, graph, obj):
    """Check the defining property of the repaired object; returns
    (ok, certificate) where the certificate carries a failure witness or
    the object's measured value."""
    adj = _simple_neighbours(graph)

    if name in ("min_degree_is", "dz_is", "cubic_is_path",
                "cubic_is_path_improved"):
        chosen = set(obj)
        for _eid, u, v in graph.edges():
            if u in chosen and v in chosen:
                return False, {"witness_edge": (u, v)}
        return True, {"size": len(chosen)}

    if name == "min_degree_dom":
        chosen = set(obj)
        for _eid, u, v in graph.edges():
            if u in chosen and v in chosen and u != v:
                return False, {"witness_edge": (u, v)}
        for v in range(graph.n):
            if v in chosen:
                continue
            if not any(u in chosen for u in adj[v]):
                return False, {"witness_undominated": v}
        return True, {"size": len(chosen)}

    if name == "induced_forest":
        chosen = set(obj)
        parent = {v: v for v in chosen}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _eid, u, v in graph.edges():
            if u in chosen and v in chosen:
                if u == v:
                    return False, {"witness_cycle_edge": (u, v)}
                ru, rv = find(u), find(v)
                if ru == rv:
                    return False, {"witness_cycle_edge": (u, v)}
                parent[ru] = rv
        return True, {"size": len(chosen)}

    if name in ("cubic_maxcut", "bisection"):
        side = obj
        if len(side) != graph.n or any(s not in (0, 1) for s in side):
            return False, {"witness": "not a full red/blue assignment"}
        cut = sum(1 for _eid, u, v in graph.edges() if side[u] != side[v])
        red = sum(1 for s in side if s == 0)
        if name == "bisection" and graph.n % 2 == 0 and red != graph.n - red:
            return False, {"witness_sizes": (red, graph.n - red)}
        return True, {"cut": cut, "red": red, "blue": graph.n - red}

    raise UnknownName("no validation defined for %r" % name)


# --------------------------------------------------------------------------
# regularization embedding
# --------------------------------------------------------------------------


def embed_in_regular(g, r, copies=None, max_doublings=6):
    """Embed a max-degree-r graph into an r-regular one of the same girth.

    Takes disjoint copies of ``g`` and pairs up degree deficits greedily,
    only joining two deficit slots whose current distance is at least
    girth(g) - 1, so no cycle shorter than the girth is ever created.  The
    number of copies doubles until the greedy pairing succeeds.

    Returns the supergraph; vertex v of copy c lands at index c*g.n + v.
    """
    base_girth = girth(g)
    target = g.n + 1 if math.isinf(base_girth) else int(base_girth)
    deficits = [r - g.degree(v) for v in range(g.n)]
    if any(d < 0 for d in deficits):
        raise BadParams("graph has degree above %d" % r)
    if all(d == 0 for d in deficits):
        return g.copy()
    k = copies if copies is not None else 2
    seeds = Xoshiro(g.n, r)
    for _ in range(max_doublings):
        slots = []
        for c in range(k):
            for v in range(g.n):
                slots.extend([c * g.n + v] * deficits[v])
        # The greedy pairing can paint itself into a corner ending with a
        # cluster of mutually-near slots, so each size gets several
        # independently randomized attempts before the graph is doubled.
        for attempt in range(10):
            big = ColouredGraph(g.n * k, r=r)
            for c in range(k):
                base = c * g.n
                for _eid, u, v in g.edges():
                    big.add_edge(base + u, base + v)
            if _pair_slots(big, slots, target, seeds.split(16 * k + attempt)):
                assert all(big.degree(v) == r for v in range(big.n))
                return big
        k *= 2
    raise BadParams("could not regularize within %d copies" % (k // 2))


def _pair_slots(big, slots, target, rng):
    remaining = list(slots)
    for i in range(len(remaining) - 1, 0, -1):
        j = rng.below(i + 1)
        remaining[i], remaining[j] = remaining[j], remaining[i]
    while remaining:
        a = remaining.pop()
        near = _within(big, a, target - 2)
        far = [idx for idx, b in enumerate(remaining) if b not in near]
        if not far:
            return False
        b = remaining.pop(far[rng.below(len(far))])
        big.add_edge(a, b)
    return True


def _within(big, a, radius):
    seen = {a}
    frontier = [a]
    for _ in range(max(radius, 0)):
        nxt = []
        for x in frontier:
            for _eid, y in big.neighbours(x):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen
