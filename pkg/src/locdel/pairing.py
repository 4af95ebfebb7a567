"""Uniform random pairings (configuration model) and regular-graph samplers.

A pairing on a degree sequence places ``degrees[v]`` points in a bucket for
each vertex ``v`` and matches all points uniformly at random.  Collapsing
buckets to vertices and pairs to edges yields a random multigraph; conditioned
on no loops or parallel pairs it is a uniform simple graph with the given
degrees.  Pairings may be *eager* (the full matching is drawn up front) or
*lazy* (each pair is revealed only when one of its points is queried).  Both
modes give every perfect matching of the points the same probability; the lazy
mode is what incremental exploration algorithms consume, the eager mode is
convenient for whole-graph sampling.
"""

from .errors import AlreadyExposed, NoPointsLeft, OddPointCount, TriesExhausted
from .graphs import ColouredGraph, girth_at_least


class Pairing:
    """A (partially exposed) uniform random pairing of points in buckets.

    Points are numbered consecutively bucket by bucket: bucket ``v`` owns the
    half-open slot range ``offsets[v]:offsets[v+1]``.  ``partner[p]`` is -1
    until the pair containing ``p`` has been exposed.  Unexposed points live in
    a swap-remove pool so mates can be drawn uniformly in O(1).
    """

    def __init__(self, degrees, rng, lazy=True, _partners=None):
        degrees = [int(d) for d in degrees]
        if any(d < 0 for d in degrees):
            raise ValueError("degrees must be non-negative")
        total = sum(degrees)
        if total % 2 != 0:
            raise OddPointCount(
                "degree sum %d is odd; a pairing needs an even number of points"
                % total
            )
        self.degrees = degrees
        self.n = len(degrees)
        self.m_points = total
        self.lazy = bool(lazy)

        self.offsets = [0] * (self.n + 1)
        for v, d in enumerate(degrees):
            self.offsets[v + 1] = self.offsets[v] + d
        self.bucket = [0] * total
        for v in range(self.n):
            for p in range(self.offsets[v], self.offsets[v + 1]):
                self.bucket[p] = v

        self.partner = [-1] * total
        # Swap-remove pool of unexposed points; _pos[p] is p's index in the
        # pool, or -1 once p has been exposed.
        self._pool = list(range(total))
        self._pos = list(range(total))
        self._unexp = list(degrees)

        if not self.lazy:
            if _partners is not None:
                self.partner = _partners
            else:
                pts = list(range(total))
                rng.shuffle(pts)
                for i in range(0, total, 2):
                    a, b = pts[i], pts[i + 1]
                    self.partner[a] = b
                    self.partner[b] = a

    # -- queries ---------------------------------------------------------

    def bucket_of(self, point):
        return self.bucket[point]

    def is_exposed(self, point):
        return self._pos[point] < 0

    def unexposed_count(self, v):
        """Number of unexposed points in bucket ``v`` (its live degree)."""
        return self._unexp[v]

    @property
    def pool_size(self):
        return len(self._pool)

    def random_unexposed_point(self, v, rng):
        """Draw a uniformly random unexposed point of bucket ``v``.

        Buckets are tiny (at most the degree bound), so we scan for the
        live slots and make a single exact draw — no rejection, which
        keeps every random decision a plain ``below(k)`` call.
        """
        if self._unexp[v] == 0:
            raise NoPointsLeft("bucket %d has no unexposed points" % v)
        live = [p for p in range(self.offsets[v], self.offsets[v + 1])
                if self._pos[p] >= 0]
        if len(live) == 1:
            return live[0]
        return live[rng.below(len(live))]

    # -- exposure --------------------------------------------------------

    def _drop(self, p):
        pos = self._pos[p]
        last = self._pool[-1]
        self._pool[pos] = last
        self._pos[last] = pos
        self._pool.pop()
        self._pos[p] = -1
        self._unexp[self.bucket[p]] -= 1

    def expose_mate(self, point, rng):
        """Expose the pair containing ``point`` and return its mate.

        In lazy mode the mate is drawn uniformly at random from all other
        unexposed points; in eager mode the predetermined partner is revealed.
        Either way the resulting matching is uniform.
        """
        if self._pos[point] < 0:
            raise AlreadyExposed("point %d is already exposed" % point)
        if len(self._pool) < 2:
            raise NoPointsLeft("no unexposed point is available as a mate")
        if self.lazy:
            self._drop(point)
            q = self._pool[rng.below(len(self._pool))]
            self._drop(q)
            self.partner[point] = q
            self.partner[q] = point
        else:
            q = self.partner[point]
            self._drop(point)
            self._drop(q)
        return q

    def expose_all(self, rng):
        """Expose every remaining pair."""
        while self._pool:
            self.expose_mate(self._pool[0], rng)

    # -- conversion ------------------------------------------------------

    def to_graph(self, rng=None, r=None):
        """Collapse the pairing to a coloured multigraph.

        Requires the matching to be fully determined: either eager mode, or a
        lazy pairing after ``expose_all`` (pass ``rng`` to expose implicitly).
        """
        if self.lazy and any(q < 0 for q in self.partner):
            if rng is None:
                raise ValueError("pairing not fully exposed and no rng given")
            self.expose_all(rng)
        if r is None:
            r = max(self.degrees, default=0)
        g = ColouredGraph(self.n, r=r)
        for p, q in enumerate(self.partner):
            if q > p:
                g.add_edge(self.bucket[p], self.bucket[q])
        return g

    def is_simple(self):
        """True when the induced multigraph has no loops or parallel edges."""
        seen = set()
        for p, q in enumerate(self.partner):
            if q > p:
                u, v = self.bucket[p], self.bucket[q]
                if u == v:
                    return False
                key = (u, v) if u < v else (v, u)
                if key in seen:
                    return False
                seen.add(key)
        return True


def random_pairing(degrees, rng, lazy=True):
    """Draw a uniform random pairing of the given degree sequence."""
    return Pairing(degrees, rng, lazy=lazy)


def from_partners(degrees, partners):
    """Build an eager pairing with a prescribed partner involution.

    ``partners`` maps each point to its mate (a fixed-point-free
    involution on range(sum(degrees))).  Nothing is exposed yet; exposure
    then proceeds deterministically.  Useful for exhaustive enumeration
    over all pairings of a small degree sequence.
    """
    total = sum(degrees)
    if len(partners) != total:
        raise ValueError("partner table must cover every point")
    for p, q in enumerate(partners):
        if q == p or not (0 <= q < total) or partners[q] != p:
            raise ValueError("partner table is not a fixed-point-free involution")
    pairing = Pairing(degrees, rng=None, lazy=False, _partners=list(partners))
    return pairing


def sample_simple_regular(n, r, rng, max_tries=1000):
    """Sample a uniform simple r-regular graph on n vertices by rejection.

    Repeatedly draws pairings and accepts the first one without loops or
    parallel pairs; the acceptance rate tends to exp((1 - r^2)/4) for fixed r
    as n grows.
    """
    for t in range(1, max_tries + 1):
        pairing = random_pairing([r] * n, rng, lazy=False)
        if pairing.is_simple():
            return pairing.to_graph(r=r)
    raise TriesExhausted(
        "no simple %d-regular pairing on %d vertices in %d tries" % (r, n, max_tries),
        tries=max_tries,
    )


def sample_with_min_girth(n, r, g, rng, max_tries=10**6):
    """Sample a uniform simple r-regular graph with girth at least ``g``.

    Rejection sampling on top of the configuration model; for g = 3 this is
    exactly ``sample_simple_regular``.  The success rate decays like
    exp(-sum_{k=1}^{g-1} (r-1)^k / 2k), so only small ``g`` are practical.
    """
    simple_seen = 0
    for t in range(1, max_tries + 1):
        pairing = random_pairing([r] * n, rng, lazy=False)
        if g >= 3 and not pairing.is_simple():
            continue
        simple_seen += 1
        graph = pairing.to_graph(r=r)
        if girth_at_least(graph, g):
            return graph
    raise TriesExhausted(
        "no simple %d-regular graph with girth >= %d on %d vertices in %d "
        "tries (%d were simple)" % (r, g, n, max_tries, simple_seen),
        tries=max_tries,
        accepted=simple_seen,
    )
