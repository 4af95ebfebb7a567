"""Deterministic mean-field analysis of local deletion rules.

Everything in this module is noise-free.  Expected one-step increments
(transition fields) are obtained by replaying a policy's exploration
against a virtual infinite tree: every reveal forks over the possible
far types with degree-biased weights, uniform picks and coin flips fork
over their outcomes, and reveals made through ``drain`` — whose outcomes
nothing downstream inspects — are aggregated into a single expected
down-shift of the type census instead of being branched on.  Query
graphs with cycles carry vanishing probability in the large-``n`` limit,
so on the virtual host every far end is fresh.

The fields feed two deterministic evolutions: a plain Euler recurrence
that mirrors the round-based chunky process, and a classical fixed-step
RK4 integrator with sign-change event location.  On top of those sit
the named systems (greedy independent and dominating sets under the
degree mix, the path-building rules on cubic hosts, the cut-greedy rule
under its relative selection functions) and the closed-form constants
they converge to.
"""

import math
import threading
from itertools import combinations_with_replacement

import numpy as np

from .algorithms import make_algorithm
from .errors import (BadParams, DegenerateMix, LeftDomain, NoEventInRange,
                     OutsideDomain, TruncationLoss)

__all__ = [
    "TransitionField", "transition_field", "eval_transition_generic",
    "deprioritised_mix", "euler_recurrence",
    "OdeSystem", "Solution", "rk4_solve",
    "chunky_rhs", "mixed_system", "greedy_solution",
    "cut_system", "solve_cut", "cubic_is_constant",
    "maxcut_system", "solve_maxcut", "maxcut_uniform_system",
    "degree_greedy_alpha", "degree_greedy_gamma", "path_greedy_alpha",
]


# --------------------------------------------------------------------------
# scripted exploration against the virtual tree
# --------------------------------------------------------------------------


class _Fork(Exception):
    """Replay reached an undecided choice point; ``options`` are the atoms."""

    def __init__(self, options):
        Exception.__init__(self)
        self.options = options


class _Truncated(Exception):
    """Replay hit the reveal budget; the prefix mass goes to the residual."""


class _TreeEntry:
    __slots__ = ("src", "far", "far_colour", "far_degree", "ref", "state",
                 "w_colour")

    def __init__(self, src, far, far_colour, far_degree):
        self.src = src
        self.far = far
        self.far_colour = far_colour
        self.far_degree = far_degree
        self.ref = None
        self.state = "open"
        self.w_colour = None


class _TreeCopy:
    """Duck-typed query copy grown on the virtual tree host."""

    __slots__ = ("root", "verts", "labels", "verts_colour", "verts_degree",
                 "entries", "copy_edges", "out", "trans", "notes", "slot")

    def __init__(self, colour, degree, slot):
        self.root = 0
        self.verts = [0]
        self.labels = {0: 0}
        self.verts_colour = [colour]
        self.verts_degree = [degree]
        self.entries = []
        self.copy_edges = []
        self.out = {}
        self.trans = {}
        self.notes = {}
        self.slot = slot

    def is_loop(self, entry):
        return False  # fresh far ends: no loops on the tree


class _TreeBuilder:
    """CopyBuilder twin that replays a choice script on the virtual tree.

    Each random draw the real builder would make is either answered by the
    prescribed script or, when the script is exhausted, raises ``_Fork``
    with the complete option list so the driver can extend the script once
    per outcome.  Weights accumulate symbolically: ``coeff`` carries the
    degree factors, multiset counts and pick/coin probabilities, ``expo``
    the per-type census exponents and ``spower`` the matching powers of
    the total point mass.
    """

    def __init__(self, types, type_index, root_index, script, slot=0,
                 max_draws=None):
        colour, degree = types[root_index]
        self.types = types
        self._tindex = type_index
        self._drawable = [k for k, (_, d) in enumerate(types) if d > 0]
        self.copy = _TreeCopy(colour, degree, slot)
        self._pending = [degree]
        self._script = script
        self._pos = 0
        self._fresh = 1
        self._draws = 0
        self._max_draws = max_draws
        self.trace = []
        self.coeff = 1.0
        self.expo = [0] * len(types)
        self.spower = 0
        self.drains = 0
        self.consumes = 0

    # -- choice plumbing --

    def _choose(self, kind, options):
        if self._pos < len(self._script):
            atom = self._script[self._pos]
            if atom[0] != kind:
                raise BadParams("replay diverged: expected a %r choice but "
                                "the script holds %r" % (kind, atom))
            self._pos += 1
            self.trace.append(atom)
            return atom
        if (self._max_draws is not None and kind in ("r", "R")
                and self._draws >= self._max_draws):
            raise _Truncated()
        raise _Fork(options)

    def _spawn(self, label, tidx):
        colour, degree = self.types[tidx]
        self.coeff *= degree
        self.expo[tidx] += 1
        self.spower += 1
        self._draws += 1
        e = _TreeEntry(label, self._fresh, colour, degree)
        self._fresh += 1
        self.copy.entries.append(e)
        return e

    # -- randomness --

    def below(self, n):
        if n <= 1:
            return 0
        atom = self._choose("b", [("b", i, n) for i in range(n)])
        self.coeff /= n
        return atom[1]

    def pick(self, seq):
        if len(seq) == 1:
            return seq[0]
        n = len(seq)
        atom = self._choose("p", [("p", i, n) for i in range(n)])
        if atom[2] != n:
            raise BadParams("replay diverged: pick over %d options, script "
                            "says %d" % (n, atom[2]))
        self.coeff /= n
        return seq[atom[1]]

    def coin(self):
        atom = self._choose("c", [("c", 0), ("c", 1)])
        self.coeff *= 0.5
        return atom[1]

    # -- structure queries --

    def colour(self, label):
        return self.copy.verts_colour[label]

    def degree(self, label):
        return self.copy.verts_degree[label]

    def pending(self, label):
        return self._pending[label]

    def open_entries(self, label):
        return [e for e in self.copy.entries
                if e.src == label and e.state == "open"]

    # -- exploration --

    def resolve(self, label):
        if self._pending[label] <= 0:
            return None
        atom = self._choose("r", [("r", label, t) for t in self._drawable])
        if atom[1] != label:
            raise BadParams("replay diverged on resolve labels")
        self._pending[label] -= 1
        return self._spawn(label, atom[2])

    def resolve_all(self, label):
        k = self._pending[label]
        if k == 0:
            return []
        options = [("R", label, combo) for combo in
                   combinations_with_replacement(self._drawable, k)]
        atom = self._choose("R", options)
        if atom[1] != label or len(atom[2]) != k:
            raise BadParams("replay diverged on resolve_all")
        self._pending[label] = 0
        counts = {}
        for t in atom[2]:
            counts[t] = counts.get(t, 0) + 1
        self.coeff *= _multinomial(k, counts.values())
        return [self._spawn(label, t) for t in atom[2]]

    def drain(self, label):
        k = self._pending[label]
        if k:
            self._pending[label] = 0
            self.drains += k
            self.trace.append(("d", label, k))
        return []

    def consume(self, label, barred=None):
        # Aggregated uninspected layer: each of the k reveals deletes a
        # size-biased far vertex and drains its remaining adjacencies.
        k = self._pending[label]
        if k:
            self._pending[label] = 0
            self._draws += k
            self.consumes += k
            self.trace.append(("k", label, k))
        return None

    def join(self, entry):
        if entry.state != "open":
            raise BadParams("entry already %s" % entry.state)
        far = entry.far
        if far in self.copy.labels:  # pragma: no cover - impossible on a tree
            lbl = self.copy.labels[far]
            entry.state = "closed"
        else:
            lbl = len(self.copy.verts)
            self.copy.verts.append(far)
            self.copy.labels[far] = lbl
            self.copy.verts_colour.append(entry.far_colour)
            self.copy.verts_degree.append(entry.far_degree)
            self._pending.append(entry.far_degree - 1)
            entry.state = "joined"
        self.copy.copy_edges.append((entry.src, lbl, None))
        return lbl


def _multinomial(k, counts):
    out = 1
    rem = k
    for c in counts:
        out *= math.comb(rem, c)
        rem -= c
    return float(out)


class _Branch:
    __slots__ = ("coeff", "expo", "spower", "delta", "drains", "consumes",
                 "w", "key")

    def __init__(self, coeff, expo, spower, delta, drains, consumes, w, key):
        self.coeff = coeff
        self.expo = expo
        self.spower = spower
        self.delta = delta
        self.drains = drains
        self.consumes = consumes
        self.w = w
        self.key = key


class _Pack:
    """Vectorized branch records for one root type."""

    __slots__ = ("coeff", "expo", "spower", "delta", "drains", "consumes",
                 "w", "keys", "rcoeff", "rexpo", "rspower")

    def __init__(self, branches, resid, R, s):
        self.coeff = np.array([b.coeff for b in branches])
        self.expo = np.array([b.expo for b in branches], dtype=np.int64)
        self.spower = np.array([b.spower for b in branches], dtype=np.int64)
        self.delta = np.array([b.delta for b in branches])
        self.drains = np.array([b.drains for b in branches], dtype=float)
        self.consumes = np.array([b.consumes for b in branches], dtype=float)
        self.w = np.array([b.w for b in branches]).reshape(len(branches), s)
        self.keys = [b.key for b in branches]
        self.rcoeff = np.array([c for c, _, _ in resid])
        self.rexpo = np.array([e for _, e, _ in resid],
                              dtype=np.int64).reshape(len(resid), R)
        self.rspower = np.array([p for _, _, p in resid], dtype=np.int64)

    def weights(self, y, S):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            wts = (self.coeff
                   * np.prod(np.power(y[None, :], self.expo), axis=1)
                   / np.power(S, self.spower))
        if not np.all(np.isfinite(wts)):
            raise OutsideDomain("branch weights overflow at mass %.3g" % S)
        return wts

    def residual(self, y, S):
        if not len(self.rcoeff):
            return 0.0
        wts = (self.rcoeff
               * np.prod(np.power(y[None, :], self.rexpo), axis=1)
               / np.power(S, self.rspower))
        return float(wts.sum())


class TransitionField:
    """Expected one-step census increments of a policy, per operated type.

    ``f(i, y)`` is the expected change of the type census and the output
    weights when one operation is applied at a type-``i`` vertex while the
    normalized census is ``y``; ``g(i, y)`` maps each realizable query
    shape (a canonical choice script) to its probability.  Both are exact
    rational functions of ``y`` assembled from an enumeration of every
    shape the subrule can reveal on the infinite tree, so the evaluation
    is reproducible and derivative-free.

    ``types`` is the census universe, a list of (colour, degree) pairs;
    ``y`` may be longer than the universe (extra output coordinates are
    ignored), which lets the same vector drive a full system state.
    """

    def __init__(self, policy, types, eps=1e-6, slot=0, max_draws=None,
                 max_branches=500000):
        self.policy = policy
        self.types = [tuple(t) for t in types]
        self.w_names = list(policy.w_names)
        self.R = len(self.types)
        self.s = len(self.w_names)
        self.eps = float(eps)
        self.degrees = np.array([d for _, d in self.types], dtype=float)
        self._tindex = {t: k for k, t in enumerate(self.types)}
        if len(self._tindex) != self.R:
            raise BadParams("duplicate types in the universe")
        self._slot = slot
        self._max_draws = max_draws
        self._max_branches = max_branches
        self._packs = {}
        self._lock = threading.Lock()
        # census shift of one expected down-step per type, where defined
        self._downM = np.zeros((self.R, self.R))
        self._down_missing = np.zeros(self.R, dtype=bool)
        for k, (c, d) in enumerate(self.types):
            if d == 0:
                continue
            lower = self._tindex.get((c, d - 1))
            if lower is None:
                self._down_missing[k] = True
            else:
                self._downM[k, lower] += 1.0
                self._downM[k, k] -= 1.0

    # -- bookkeeping --

    def type_index(self, ty):
        if isinstance(ty, (int, np.integer)):
            if not 0 <= int(ty) < self.R:
                raise BadParams("type index %d out of range" % ty)
            return int(ty)
        try:
            return self._tindex[tuple(ty)]
        except (KeyError, TypeError):
            raise BadParams("type %r is not in the universe" % (ty,))

    def domain(self, y, eps=None):
        y = np.asarray(y, dtype=float)[:self.R]
        return float(self.degrees @ y) >= (self.eps if eps is None else eps)

    def branch_count(self, i):
        return len(self._pack(self.type_index(i)).coeff)

    # -- evaluation --

    def _mass(self, y):
        S = float(self.degrees @ y)
        if S < self.eps:
            raise OutsideDomain("degree-weighted mass %.3g is below the "
                                "%.3g floor" % (S, self.eps))
        return S

    def _down(self, y, S):
        P = self.degrees * y / S
        if np.any(self._down_missing & (P != 0.0)):
            raise BadParams("universe lacks a downgraded type needed by a "
                            "drained reveal")
        return P @ self._downM

    def f(self, i, y):
        i = self.type_index(i)
        y = np.asarray(y, dtype=float)[:self.R]
        S = self._mass(y)
        pack = self._pack(i)
        wts = pack.weights(y, S)
        out = wts @ pack.delta
        dtot = float(wts @ pack.drains)
        if dtot != 0.0:
            out = out + dtot * self._down(y, S)
        ctot = float(wts @ pack.consumes)
        if ctot != 0.0:
            # One aggregated reveal joins and deletes a size-biased far
            # vertex, draining that vertex's remaining adjacencies.
            P = self.degrees * y / S
            out = out - ctot * P
            extra = float(P @ (self.degrees - 1.0))
            if extra != 0.0:
                out = out + (ctot * extra) * self._down(y, S)
        return np.concatenate([out, wts @ pack.w])

    def g(self, i, y):
        i = self.type_index(i)
        y = np.asarray(y, dtype=float)[:self.R]
        S = self._mass(y)
        pack = self._pack(i)
        wts = pack.weights(y, S)
        return {key: float(wt) for key, wt in zip(pack.keys, wts)}

    def residual(self, i, y=None):
        i = self.type_index(i)
        pack = self._pack(i)
        if not len(pack.rcoeff):
            return 0.0
        if y is None:
            raise BadParams("truncated enumeration: the residual depends "
                            "on the census point")
        y = np.asarray(y, dtype=float)[:self.R]
        return pack.residual(y, self._mass(y))

    # -- enumeration --

    def _pack(self, i):
        pack = self._packs.get(i)
        if pack is None:
            with self._lock:
                pack = self._packs.get(i)
                if pack is None:
                    pack = self._enumerate(i)
                    self._packs[i] = pack
        return pack

    def _enumerate(self, root_index):
        branches, resid = [], []
        stack = [[]]
        while stack:
            script = stack.pop()
            tb = _TreeBuilder(self.types, self._tindex, root_index, script,
                              slot=self._slot, max_draws=self._max_draws)
            try:
                self.policy.explore(tb)
            except _Fork as fork:
                if len(stack) + len(branches) > self._max_branches:
                    raise TruncationLoss(
                        "query-shape enumeration for type %r exceeded %d "
                        "branches" % (self.types[root_index],
                                      self._max_branches))
                for atom in fork.options:
                    stack.append(script + [atom])
                continue
            except _Truncated:
                resid.append((tb.coeff, list(tb.expo), tb.spower))
                continue
            branches.append(self._settle(tb, root_index))
        return _Pack(branches, resid, self.R, self.s)

    def _settle(self, tb, root_index):
        """Mirror the recolouring step on a finished replay."""
        copy = tb.copy
        self.policy.finalize(tb)
        delta = [0.0] * self.R
        for lbl in range(len(copy.verts)):
            ty = (copy.verts_colour[lbl], copy.verts_degree[lbl])
            delta[self._need(ty)] -= 1.0
            if tb._pending[lbl] == 0:
                if lbl not in copy.out:
                    raise BadParams("policy %s left copy vertex %d without "
                                    "an output" % (self.policy.name, lbl))
            else:
                colour = copy.trans.get(lbl, copy.verts_colour[lbl])
                delta[self._need((colour, tb._pending[lbl]))] += 1.0
        for e in copy.entries:
            if e.state != "open":
                continue
            delta[self._need((e.far_colour, e.far_degree))] -= 1.0
            colour = e.far_colour if e.w_colour is None else e.w_colour
            delta[self._need((colour, e.far_degree - 1))] += 1.0
        w_inc = self.policy.outputs(copy, set())
        w = [float(w_inc.get(name, 0.0)) for name in self.w_names]
        return _Branch(tb.coeff, list(tb.expo), tb.spower, delta,
                       float(tb.drains), float(tb.consumes), w,
                       tuple(tb.trace))

    def _need(self, ty):
        idx = self._tindex.get(ty)
        if idx is None:
            raise BadParams("recolouring produced type %r outside the "
                            "universe" % (ty,))
        return idx


def _universe(policy, r):
    """Census universe for a policy: (colour, degree) pairs, barred omitted.

    Barred vertices are never operated on and are produced at a vanishing
    rate under the selection families whose limits these fields describe,
    so the universe excludes them.  Two-digit colour names encode consumed
    half-edges on a cubic host, locking colour to degree; every other
    palette spans all degrees up to ``r``.
    """
    names = policy.transient_colours
    live = [(c, nm) for c, nm in enumerate(names) if nm != "barred"]
    if all(len(nm) == 2 and nm.isdigit() for _, nm in live):
        return [(c, 3 - int(nm[0]) - int(nm[1])) for c, nm in live]
    return [(c, d) for c, _ in live for d in range(r + 1)]


_CUBIC_ONLY = ("cubic_is_path", "cubic_is_path_improved", "cubic_maxcut",
               "bisection")


def transition_field(name, r=3, eps=1e-6, slot=0, **params):
    """Build the transition field of a named algorithm.

    ``r`` fixes the host degree (and with it the census universe); the
    cubic-only rules reject anything but 3.  Remaining keyword arguments
    go to the algorithm factory (``d`` for the path rules, ``objective``
    for bisection).
    """
    if name in _CUBIC_ONLY:
        if r != 3:
            raise BadParams("%s is defined on cubic hosts only" % name)
        spec = make_algorithm(name, **params)
    elif name == "induced_forest":
        spec = make_algorithm(name, **params)
    else:
        spec = make_algorithm(name, r=r, **params)
    return TransitionField(spec.policy, _universe(spec.policy, r),
                           eps=eps, slot=slot)


class _RuleShim:
    """Adapter pairing a bare subrule with a recolouring for enumeration."""

    name = "custom"

    def __init__(self, subrule, recolouring):
        self._subrule = subrule if subrule is not None else recolouring.explore
        self._rec = recolouring
        self.w_names = list(getattr(recolouring, "w_names", ["size"]))

    def explore(self, cb):
        return self._subrule(cb)

    def finalize(self, cb):
        return self._rec.finalize(cb)

    def outputs(self, copy, clash_labels):
        return self._rec.outputs(copy, clash_labels)


def eval_transition_generic(subrule, recolouring, i, ytilde, types,
                            d=None, eps=1e-6, truncation_tol=1e-9):
    """One-shot generic evaluation of a subrule/recolouring pair.

    Returns ``(f, g)`` at census point ``ytilde`` for operations on type
    ``i``: the expected census-and-output increment and the distribution
    over realizable query shapes.  ``d`` caps the number of reveals per
    shape; mass stranded past the cap is the truncation residual, and a
    residual above ``truncation_tol`` raises :class:`TruncationLoss`.
    """
    shim = _RuleShim(subrule, recolouring)
    field = TransitionField(shim, types, eps=eps, max_draws=d)
    y = np.asarray(ytilde, dtype=float)
    fvec = field.f(i, y)
    gmap = field.g(i, y)
    res = field.residual(i, y)
    if res > truncation_tol:
        raise TruncationLoss("%.3g of the shape mass lies beyond the "
                             "%s-reveal cap" % (res, d))
    return fvec, gmap


# --------------------------------------------------------------------------
# deterministic evolutions
# --------------------------------------------------------------------------


def deprioritised_mix(f1, f2, ytilde=None, index=0, eps=1e-12):
    """Stationary two-operation mix holding one census coordinate at zero.

    ``f1`` and ``f2`` are the increment vectors (or callables of
    ``ytilde``) of the operation that consumes the pinned coordinate and
    the operation that produces it; ``index`` names the coordinate.  The
    returned weights ``(w2, w1)`` make the mixed derivative vanish there
    exactly: ``w2 = -f1[index] / (f2[index] - f1[index])`` multiplies
    ``f2``.  Raises :class:`DegenerateMix` when the production and
    consumption rates nearly cancel.
    """
    if callable(f1):
        f1 = f1(ytilde)
    if callable(f2):
        f2 = f2(ytilde)
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    alpha = float(f2[index])
    beta = -float(f1[index])
    total = alpha + beta
    if not total > eps:
        raise DegenerateMix("alpha + beta = %.3g <= %.3g" % (total, eps))
    w2 = beta / total
    w1 = alpha / total
    mixed = w2 * f2 + w1 * f1
    mixed[index] = 0.0
    return (w2, w1), mixed


def stationary_mix(fs, pinned, eps=1e-12):
    """Operation weights that hold several census coordinates at zero.

    ``fs`` lists the increment vectors of the candidate operations and
    ``pinned`` the coordinate indices whose mixed derivative must vanish;
    there is one more operation than pin, so the balance equations plus
    normalization determine the weights.  Returns ``(weights, mixed)``
    with the pinned coordinates of ``mixed`` zeroed exactly.  A singular
    balance system, an unbounded solution or a materially negative weight
    raises :class:`DegenerateMix` — the last means the proposed phase
    structure cannot hold at this census point.
    """
    fs = [np.asarray(f, dtype=float) for f in fs]
    m = len(fs)
    if len(pinned) != m - 1:
        raise BadParams("need exactly one more operation than pinned "
                        "coordinates, got %d and %d" % (m, len(pinned)))
    A = np.empty((m, m))
    for row, j in enumerate(pinned):
        A[row] = [f[j] for f in fs]
    A[m - 1] = 1.0
    b = np.zeros(m)
    b[m - 1] = 1.0
    try:
        lam = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        raise DegenerateMix("stationary balance system is singular")
    if (not np.all(np.isfinite(lam)) or np.any(np.abs(lam) > 1.0 / eps)
            or np.any(lam < -1e-6)):
        raise DegenerateMix("stationary weights %s are not a mixture"
                            % np.array2string(lam, precision=6))
    lam = np.clip(lam, 0.0, None)
    mixed = lam[0] * fs[0]
    for wk, fk in zip(lam[1:], fs[1:]):
        mixed = mixed + wk * fk
    for j in pinned:
        mixed[j] = 0.0
    return lam, mixed


def euler_recurrence(p, f, z0, n_steps, domain=None):
    """Run the deterministic round recurrence and return the whole history.

    ``z(t) = z(t-1) + sum_i p[t,i] z_i(t-1) f(i, z(t-1))`` for ``t`` from
    1 to ``n_steps``; ``p`` is an ``(n_steps, R)`` array (or a callable of
    the 1-based round number) of per-type operation rates, and ``f(i, z)``
    returns the full increment vector.  ``domain`` is checked before each
    round; leaving it raises :class:`OutsideDomain` with the round index.
    """
    z = np.asarray(z0, dtype=float).copy()
    out = np.empty((n_steps + 1, z.size))
    out[0] = z
    for t in range(1, n_steps + 1):
        if domain is not None and not domain(z):
            raise OutsideDomain("state left the domain entering round %d"
                                % t, step=t)
        row = p(t) if callable(p) else p[t - 1]
        dz = np.zeros_like(z)
        for i, pi in enumerate(row):
            if pi != 0.0 and z[i] != 0.0:
                dz += pi * z[i] * np.asarray(f(i, z), dtype=float)
        z = z + dz
        out[t] = z
    return out


class OdeSystem:
    """A first-order system ``y' = rhs(x, y)`` with domain and events.

    ``domain(x, y)`` (optional) must stay true along the trajectory;
    ``events`` is a list of ``(name, fn)`` pairs whose sign changes stop
    the integration at the refined crossing.
    """

    def __init__(self, rhs, dim, domain=None, events=(), name=""):
        self.rhs = rhs
        self.dim = int(dim)
        self.domain = domain
        self.events = list(events)
        self.name = name


class Solution:
    """Dense fixed-step trajectory with located event roots."""

    def __init__(self, xs, ys, events=None, status="end"):
        self.xs = np.asarray(xs, dtype=float)
        self.ys = np.asarray(ys, dtype=float)
        self.events = dict(events or {})
        self.status = status

    def at(self, x):
        """Linearly interpolated state at ``x``."""
        return np.array([np.interp(x, self.xs, self.ys[:, j])
                         for j in range(self.ys.shape[1])])

    def final(self):
        return float(self.xs[-1]), self.ys[-1].copy()

    def write_csv(self, fileobj, columns=None):
        """Write ``x`` and the state columns as comma-separated rows."""
        if columns is None:
            columns = ["y%d" % j for j in range(self.ys.shape[1])]
        if len(columns) != self.ys.shape[1]:
            raise BadParams("expected %d column names" % self.ys.shape[1])
        fileobj.write(",".join(["x"] + list(columns)) + "\n")
        for x, row in zip(self.xs, self.ys):
            fileobj.write(",".join(["%.12g" % x]
                                   + ["%.12g" % v for v in row]) + "\n")


def _rk4_step(rhs, x, y, h):
    k1 = np.asarray(rhs(x, y), dtype=float)
    k2 = np.asarray(rhs(x + 0.5 * h, y + 0.5 * h * k1), dtype=float)
    k3 = np.asarray(rhs(x + 0.5 * h, y + 0.5 * h * k2), dtype=float)
    k4 = np.asarray(rhs(x + h, y + h * k3), dtype=float)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _locate_event(rhs, fn, x, y, step, sign0, xtol=1e-12):
    """Bisect the sub-step length at which the event function crosses zero."""
    lo, hi = 0.0, step
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        ym = _rk4_step(rhs, x, y, mid)
        vm = float(fn(x + mid, ym))
        if vm == 0.0:
            hi = mid
            break
        if (vm > 0.0) == sign0:
            lo = mid
        else:
            hi = mid
    return x + hi, _rk4_step(rhs, x, y, hi)


def _evaluable_prefix(rhs, x, y, step, xtol=1e-13):
    """Longest substep whose RK4 stages stay inside the field's domain."""
    lo, hi = 0.0, step
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        try:
            _rk4_step(rhs, x, y, mid)
        except (OutsideDomain, DegenerateMix):
            hi = mid
            continue
        lo = mid
    return lo


def rk4_solve(system, y0, xspan, h=1e-4):
    """Classical fixed-step RK4 with dense output and event location.

    Integrates ``system`` from ``xspan[0]`` to ``xspan[1]``.  After each
    step every event function is evaluated; a sign change (armed once the
    function has been nonzero) is refined by bisection over the step to
    ``|dx| <= 1e-12`` and the solution is truncated at the smallest root.
    Leaving the system domain raises :class:`LeftDomain`; declaring
    events and reaching the end without any root raises
    :class:`NoEventInRange`.
    """
    x0, x1 = float(xspan[0]), float(xspan[1])
    if not x1 > x0:
        raise BadParams("empty integration range [%g, %g]" % (x0, x1))
    if not h > 0:
        raise BadParams("step size must be positive")
    y = np.asarray(y0, dtype=float).copy()
    if y.size != system.dim:
        raise BadParams("state has %d coordinates, the system %d"
                        % (y.size, system.dim))
    rhs = system.rhs
    xs = [x0]
    ys = [y.copy()]
    prev = [float(fn(x0, y)) for _, fn in system.events]
    x = x0
    n_steps = int(math.ceil((x1 - x0) / h - 1e-12))
    for _ in range(n_steps):
        step = min(h, x1 - x)
        try:
            ynew = _rk4_step(rhs, x, y, step)
        except (OutsideDomain, DegenerateMix):
            # The full step ran off the admissible region.  Any declared
            # event root lies inside the still-evaluable prefix; find it
            # there, otherwise the trajectory genuinely left the domain.
            step = _evaluable_prefix(rhs, x, y, step)
            if step <= 0.0:
                raise LeftDomain("field not evaluable beyond x=%.6g" % x,
                                 x=x, y=y.copy())
            ynew = _rk4_step(rhs, x, y, step)
        xnew = x + step
        hit = None
        for j, (name, fn) in enumerate(system.events):
            val = float(fn(xnew, ynew))
            p = prev[j]
            if p != 0.0 and (p * val < 0.0 or (val == 0.0)):
                xstar, ystar = _locate_event(rhs, fn, x, y, step, p > 0.0)
                if hit is None or xstar < hit[0]:
                    hit = (xstar, ystar, name)
            prev[j] = val
        if hit is not None:
            xs.append(hit[0])
            ys.append(hit[1])
            return Solution(np.array(xs), np.array(ys),
                            {hit[2]: (hit[0], hit[1])}, "event:" + hit[2])
        if system.domain is not None and not system.domain(xnew, ynew):
            raise LeftDomain("trajectory left the admissible region at "
                             "x=%.6g" % xnew, x=xnew, y=ynew)
        x, y = xnew, ynew
        xs.append(x)
        ys.append(y.copy())
    if system.events:
        raise NoEventInRange("no event root in [%g, %g]" % (x0, x1))
    return Solution(np.array(xs), np.array(ys), {}, "end")


# --------------------------------------------------------------------------
# systems assembled from transition fields
# --------------------------------------------------------------------------


def chunky_rhs(p_fns, field):
    """Mean-field system of the round-based process with rate profile ``p``.

    ``p_fns`` aligns with ``field.types``: entry ``k`` is the (callable or
    constant) per-round selection rate of type ``k``, and the system reads
    ``y' = sum_k p_k(x) y_k f(k, y)`` over census and output coordinates.
    """
    fns = []
    for pf in p_fns:
        fns.append(pf if callable(pf) else (lambda x, v=float(pf): v))
    if len(fns) != field.R:
        raise BadParams("expected %d rate entries, got %d"
                        % (field.R, len(fns)))
    dim = field.R + field.s

    def rhs(x, y):
        dy = np.zeros(dim)
        for k in range(field.R):
            pk = fns[k](x)
            if pk != 0.0 and y[k] != 0.0:
                dy += pk * y[k] * field.f(k, y)
        return dy

    return OdeSystem(rhs, dim, domain=lambda x, y: field.domain(y),
                     name="chunky:%s" % field.policy.name)


def mixed_system(field, stop_mass=1e-5, mix_eps=1e-12, ops=None,
                 pinned=None, phase_event=None):
    """Degree-greedy mean field: a stationary mix of low-degree operations.

    By default degree-1 and degree-2 operations are mixed with the
    degree-1 coordinate pinned at zero (consumed as fast as it is
    produced).  ``ops`` and ``pinned`` generalize to an m-operation mix
    holding m-1 coordinates at zero.  Integration stops via the ``mass``
    event when the degree-weighted census drops to ``stop_mass``; when
    ``phase_event`` names a type, that census coordinate returning to
    zero additionally stops the integration (the ``phase`` event) so a
    caller can hand over to the next mix.
    """
    if ops is None:
        ops = [(0, 1), (0, 2)]
    if pinned is None:
        pinned = list(ops[:-1])
    op_idx = [field.type_index(t) for t in ops]
    pin_idx = [field.type_index(t) for t in pinned]
    R = field.R

    def rhs(x, y):
        fs = [field.f(k, y) for k in op_idx]
        if len(fs) == 2:
            # The two-operation balance has a closed form whose sign
            # handling is gentler in the extinction tail.
            _, mixed = deprioritised_mix(fs[0], fs[1], index=pin_idx[0],
                                         eps=mix_eps)
        else:
            _, mixed = stationary_mix(fs, pin_idx, eps=mix_eps)
        return mixed

    def mass(x, y):
        return float(field.degrees @ y[:R]) - stop_mass

    events = [("mass", mass)]
    if phase_event is not None:
        pj = field.type_index(phase_event)
        events.append(("phase", lambda x, y: float(y[pj])))

    return OdeSystem(rhs, R + field.s,
                     domain=lambda x, y: field.domain(y),
                     events=events,
                     name="mixed:%s" % field.policy.name)


def greedy_solution(field, h=1e-3, stop_mass=1e-5, xmax=2.0,
                    phase_floor=1e-3):
    """Integrate the degree-greedy cascade from a fresh full-degree census.

    Phase m mixes operations on degrees 1..m with the coordinates below m
    pinned at zero.  The cascade starts at m = 2; when the operated
    coordinate itself dies out while material mass remains (the ``phase``
    event above ``phase_floor``), the next degree joins the mix.  A zero
    crossing below the floor is indistinguishable from the extinction
    tail at the step resolution, so the current mix simply runs on to the
    ``mass`` event, which ends the stitched trajectory.
    """
    rmax = max(d for _, d in field.types)
    y = np.zeros(field.R + field.s)
    y[field.type_index((0, rmax))] = 1.0
    x = 0.0
    m = 2
    endgame = False
    xs_parts, ys_parts = [], []
    for _ in range(2 * rmax + 4):
        ops = [(0, k) for k in range(1, m + 1)]
        watch = (0, m) if (m < rmax and not endgame) else None
        system = mixed_system(field, stop_mass=stop_mass, ops=ops,
                              phase_event=watch)
        sol = rk4_solve(system, y, (x, x + xmax), h=h)
        xs_parts.append(sol.xs if not xs_parts else sol.xs[1:])
        ys_parts.append(sol.ys if not ys_parts else sol.ys[1:])
        if sol.status == "event:mass":
            return Solution(np.concatenate(xs_parts), np.vstack(ys_parts),
                            {"mass": sol.events["mass"]}, sol.status)
        x, y = sol.events["phase"]
        y = y.copy()
        census = y[:field.R]
        census[(np.abs(census) < 1e-9) & (census < 0.0)] = 0.0
        y[field.type_index((0, m))] = 0.0
        if float(field.degrees @ census) < phase_floor:
            endgame = True
        else:
            m += 1
    raise NoEventInRange("the degree cascade ran out of phases before "
                         "reaching the stop mass")


def degree_greedy_alpha(r, rule="dz_is", h=1e-3, stop_mass=1e-6, **params):
    """Independence density reached by a degree-greedy rule on r-regular
    hosts: terminal output weight plus the isolated mass it still owns."""
    field = transition_field(rule, r=r, eps=1e-9, **params)
    sol = greedy_solution(field, h=h, stop_mass=stop_mass)
    _, y = sol.events["mass"]
    return float(y[field.R] + y[field.type_index((0, 0))])


def degree_greedy_gamma(r, h=1e-3, stop_mass=1e-6):
    """Domination density of the degree-greedy rule: terminal output
    weight plus all surviving census mass (survivors are dominated by
    adding them to the set one by one)."""
    field = transition_field("min_degree_dom", r=r, eps=1e-9)
    sol = greedy_solution(field, h=h, stop_mass=stop_mass)
    _, y = sol.events["mass"]
    return float(y[field.R] + y[:field.R].sum())


def path_greedy_alpha(d=50, h=1e-3, stop_mass=1e-6):
    """Independence density of the alternating-path rule on cubic hosts."""
    field = transition_field("cubic_is_path", d=d, eps=1e-9)
    sol = greedy_solution(field, h=h, stop_mass=stop_mass)
    _, y = sol.events["mass"]
    return float(y[field.R] + y[field.type_index((0, 0))])


# --------------------------------------------------------------------------
# the cut-greedy system and its constants
# --------------------------------------------------------------------------


def cut_system():
    """Closed-form mean field of the cut-greedy rule on cubic hosts.

    State ``(u, v, w, z)``: fresh mass, singly cut mass, doubly cut mass
    and banked cut weight per vertex.  Starts at ``(1, 0, 0, 0)``; the
    ``v_zero`` event marks the exhaustion of singly cut vertices, where
    the final cut density is ``z + 1.5 u + 1.5 w``.
    """

    def rhs(x, y):
        u, v, w, _ = y
        s = 3.0 * u + 2.0 * v + w
        den = s * s + 6.0 * s * u + 12.0 * u * v
        return np.array([
            -6.0 * u * (6.0 * u + s) / den,
            (36.0 * u * u - 12.0 * u * v - s * s - 4.0 * s * v) / den,
            2.0 * (-6.0 * u * w + 2.0 * s * v - s * w) / den,
            (6.0 * s * u + 24.0 * u * w + s * s + 4.0 * s * w
             + 36.0 * u * v) / den,
        ])

    def domain(x, y):
        u, v, w, _ = y
        s = 3.0 * u + 2.0 * v + w
        return s * s + 6.0 * s * u + 12.0 * u * v > 1e-12

    return OdeSystem(rhs, 4, domain=domain,
                     events=[("v_zero", lambda x, y: y[1])],
                     name="cut")


def solve_cut(h=1e-4):
    """Integrate the cut system to the ``v_zero`` root and report the
    crossing point, the state there and the cut density."""
    sol = rk4_solve(cut_system(), np.array([1.0, 0.0, 0.0, 0.0]),
                    (0.0, 2.0), h=h)
    x0, y = sol.events["v_zero"]
    return {"x0": x0, "u": float(y[0]), "v": float(y[1]), "w": float(y[2]),
            "z": float(y[3]), "c": float(y[3] + 1.5 * (y[0] + y[2])),
            "solution": sol}


def maxcut_system(eps=1e-9):
    """Cut-greedy system driven by the generic transition field.

    The relative selection functions pick among operations on fresh,
    singly cut and doubly-same-cut vertices so that no other type builds
    up; trajectories match :func:`cut_system` under the state mapping
    ``(u, v, w) = (y00, y01, y11)``.  Returns ``(field, system)``.
    """
    field = transition_field("cubic_maxcut", eps=eps)
    t00 = field.type_index((0, 3))
    t10 = field.type_index((1, 2))
    t01 = field.type_index((2, 2))
    t11 = field.type_index((4, 1))
    t02 = field.type_index((5, 1))

    def rates(y):
        y00, y01 = y[t00], y[t01]
        s = 3.0 * y00 + 2.0 * y01 + y[t11]
        den = s * s + 6.0 * s * y00 + 12.0 * y00 * y01
        if den <= 0.0:
            raise DegenerateMix("selection denominator %.3g" % den)
        return ((t01, (s * s - 12.0 * y00 * y01) / den),
                (t10, 6.0 * s * y00 / den),
                (t02, 24.0 * y00 * y01 / den))

    def rhs(x, y):
        dy = np.zeros(field.R + field.s)
        for t, p in rates(y):
            if p != 0.0:
                dy += p * field.f(t, y)
        return dy

    system = OdeSystem(rhs, field.R + field.s,
                       domain=lambda x, y: field.domain(y),
                       events=[("v_zero", lambda x, y: y[t01])],
                       name="maxcut-deprioritised")
    return field, system


def solve_maxcut(h=1e-3):
    """Integrate :func:`maxcut_system` to the ``v_zero`` root."""
    field, system = maxcut_system()
    y0 = np.zeros(field.R + field.s)
    y0[field.type_index((0, 3))] = 1.0
    sol = rk4_solve(system, y0, (0.0, 2.0), h=h)
    x0, y = sol.events["v_zero"]
    u = float(y[field.type_index((0, 3))])
    w = float(y[field.type_index((4, 1))])
    z = float(y[field.R + field.w_names.index("cut")])
    return {"x0": x0, "u": u, "w": w, "z": z, "c": z + 1.5 * (u + w),
            "solution": sol}


def maxcut_uniform_system(eps=1e-6):
    """Round-process mean field of the cut rule with unit rate profile.

    Returns ``(field, system)``; this is the reference trajectory for
    chunky runs whose profile selects every live type at the same rate.
    """
    field = transition_field("cubic_maxcut", eps=eps)
    return field, chunky_rhs([1.0] * field.R, field)


# --------------------------------------------------------------------------
# closed-form constants of the path rules
# --------------------------------------------------------------------------


def cubic_is_constant(variant="base", nodes=200):
    """Independence density of the path rules on cubic hosts.

    Integrates the exact derivative of the output weight with respect to
    the pair-exposure parameter over [0, 1] by Gauss-Legendre quadrature.
    The base variant also evaluates its closed form
    ``3 + (3/2) ln 2 - (15/2) sqrt(2) arctan(sqrt(2)/4)`` and insists the
    two agree to 1e-9.
    """
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    p = 0.5 * (xg + 1.0)
    wts = 0.5 * wg
    if variant == "base":
        integrand = (3.0 * (1.0 - p) * (2.0 * p ** 2 + 3.0 * p + 1.0)
                     / (2.0 * (p ** 2 + 2.0 * p + 3.0)))
        value = float(wts @ integrand)
        closed = (3.0 + 1.5 * math.log(2.0)
                  - 7.5 * math.sqrt(2.0) * math.atan(math.sqrt(2.0) / 4.0))
        if abs(value - closed) > 1e-9:
            raise ArithmeticError("quadrature drifted from the closed form "
                                  "by %.3g" % abs(value - closed))
        return {"variant": "base", "value": value, "closed_form": closed}
    if variant == "improved":
        num = (1.0 - p) * (2.0 * p ** 5 + 9.0 * p ** 4 + 18.0 * p ** 3
                           + 22.0 * p ** 2 + 8.0 * p + 1.0)
        den = (2.0 * (1.0 + p)
               * (p ** 4 + 4.0 * p ** 3 + 8.0 * p ** 2 + 14.0 * p + 3.0))
        value = float(wts @ (3.0 * num / den))
        return {"variant": "improved", "value": value}
    raise BadParams("variant must be 'base' or 'improved'")
