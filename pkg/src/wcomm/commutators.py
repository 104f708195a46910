"""Weighted subobject and normal commutators, Huq/Higgins and Smith commutators.

The weighted commutator [X, Y]_{A|W} is computed as the set of values
t(w.., x.., y..) of commutator terms t (terms that are 0 whenever all x's or
all y's are 0, as identities of V(A)) with w's in W, x's in X and y's in Y.

Two engines compute it.

``enumerate`` filters the free algebra of V(A) on k + m + n generators, projected
onto the coordinates that matter, for bounded (k, m, n).  The value is a sound
lower bound; it is reported ``exact`` only when raising any single bound by one
leaves it unchanged.  That stabilization test is a heuristic, not a proof.

``fiber`` needs a Mal'tsev term p.  Let M be the subalgebra of A^4 generated by
(w, w, w, w) for w in W, (0, 0, x, x) for x in X and (0, y, 0, y) for y in Y; an
element of M is (t(w,0,0), t(w,0,y), t(w,x,0), t(w,x,y)) for some term t.  The
commutator is exactly {d : (0, 0, 0, d) in M}: one inclusion is immediate, and
for the other

    s(w, x, y) = p(p(t(w,x,y), t(w,0,y), t(w,0,0)), t(w,x,0), 0)

is a commutator term with s = d at the same arguments.  This engine is exact and
independent of any bound; each element carries the witness s.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import (FiniteAlgebra, Subuniverse, all_subuniverses, make_algebra,
                      subuniverse_generate)
from .closure import Closure, _code_table, assignment_grid
from .config import CapExceeded, get_limits
from .congruences import (Congruence, all_congruences, cg, congruence_from_normal, is_compatible, is_normal,
                          meet, normal_closure, zero_class)
from .free import _maltsev_cached, block_vars, maltsev_term
from .terms import App, Var, fold_constants, substitute
from .witnesses import Witness, compose, plug

DEFAULT_BOUNDS = (2, 2, 2)
ENGINES = ("auto", "fiber", "enumerate")


class SmithUndefined(RuntimeError):
    """Raised when no Mal'tsev term is available."""


@dataclass(frozen=True, eq=False)
class WeightedCospan:
    parent: FiniteAlgebra
    x_sub: Subuniverse
    y_sub: Subuniverse
    w_sub: Subuniverse

    def __post_init__(self):
        for s in (self.x_sub, self.y_sub, self.w_sub):
            if s.parent is not self.parent:
                raise ValueError("subuniverses must live in the cospan's algebra")

    @classmethod
    def generated(cls, a, x=(), y=(), w=()):
        return cls(a, subuniverse_generate(a, x), subuniverse_generate(a, y), subuniverse_generate(a, w))

    def swapped(self):
        return WeightedCospan(self.parent, self.y_sub, self.x_sub, self.w_sub)

    def reweighted(self, w_sub):
        return WeightedCospan(self.parent, self.x_sub, self.y_sub, w_sub)


@dataclass
class CommutatorResult:
    value: Subuniverse
    status: str  # "exact" | "lower_bound"
    bounds_used: tuple
    witnesses: dict  # element id -> Witness
    method: str  # "term_enumeration" | "smith_bridge" | "ring_closed_form"
    engine: str = ""
    notes: list = field(default_factory=list)

    @property
    def elements(self):
        return set(self.value.elements)

    @property
    def exact(self):
        return self.status == "exact"

    def witnesses_sound(self):
        a = self.value.parent
        return all(e in self.witnesses and self.witnesses[e].evaluate(a) == e for e in self.value)

    def to_dict(self):
        return {
            "value": list(self.value.elements),
            "status": self.status,
            "bounds_used": list(self.bounds_used),
            "method": self.method,
            "engine": self.engine,
            "witnesses": {str(e): w.to_dict() for e, w in sorted(self.witnesses.items())},
            "notes": list(self.notes),
        }


# -- helpers -------------------------------------------------------------------

def _zero_term(a):
    return App(a.signature.zero_op)


def _nonzero(a, sub):
    return [e for e in sub.elements if e != a.zero]


def _zero_witness(a):
    return Witness(_zero_term(a), ())


def _result(a, witnesses, status, bounds_used, engine, notes=(), method="term_enumeration"):
    value = subuniverse_generate(a, witnesses)
    missing = set(value.elements) - set(witnesses)
    notes = list(notes)
    if missing:
        notes.append(f"elements {sorted(missing)} added by subalgebra generation carry no witness")
    return CommutatorResult(value, status, tuple(bounds_used), dict(sorted(witnesses.items())), method, engine, notes)


def _pick_engine(a, engine):
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "auto":
        return "fiber" if maltsev_term(a).found else "enumerate"
    if engine == "fiber" and not maltsev_term(a).found:
        raise SmithUndefined("the fiber engine needs a Mal'tsev term for V(A)")
    return engine


# -- fiber engine ----------------------------------------------------------------

@functools.lru_cache(maxsize=4096)
def _fiber(a, xs, ys, ws, limits):
    p = maltsev_term(a, limits).term
    zero = a.zero
    gens, assignment = [], {}
    for i, w in enumerate(e for e in ws if e != zero):
        v = Var("w", i + 1)
        gens.append((v, [w, w, w, w]))
        assignment[v] = w
    for i, x in enumerate(e for e in xs if e != zero):
        v = Var("x", i + 1)
        gens.append((v, [zero, zero, x, x]))
        assignment[v] = x
    for i, y in enumerate(e for e in ys if e != zero):
        v = Var("y", i + 1)
        gens.append((v, [zero, y, zero, y]))
        assignment[v] = y
    c = Closure(a, gens, limit=limits.max_free, work=limits.max_work, length=4).run_all()
    rows = c.vectors
    hits = np.flatnonzero((rows[:, :3] == zero).all(axis=1))
    witnesses = {}
    z = _zero_term(a)
    for idx in hits:
        d = int(rows[idx, 3])
        if d in witnesses:
            continue
        if d == zero:
            witnesses[d] = _zero_witness(a)
            continue
        t = c.term(idx)
        kill_x = {v: z for v in t.variables() if v.block == "x"}
        kill_y = {v: z for v in t.variables() if v.block == "y"}
        t0y = substitute(t, kill_x)
        tx0 = substitute(t, kill_y)
        t00 = substitute(t, kill_x | kill_y)
        s = substitute(p, {Var("x", 1): substitute(p, {Var("x", 1): t, Var("x", 2): t0y, Var("x", 3): t00}),
                           Var("x", 2): tx0, Var("x", 3): z})
        witnesses[d] = Witness.make(fold_constants(s, a), assignment)
    return witnesses, len(c)


# -- bounded enumeration engine --------------------------------------------------

def _enumerate_values(a, xs, ys, ws, k, m, n, limits):
    """Commutator-term values with exactly k, m, n variables; dict element -> Witness."""
    if m == 0 or n == 0:
        return {a.zero: _zero_witness(a)}
    g = k + m + n
    zero = a.zero
    face_x = assignment_grid(a.size, k + n)  # (w, y) with x = 0
    face_y = assignment_grid(a.size, k + m)  # (w, x) with y = 0
    zx = np.concatenate([face_x[:, :k], np.full((len(face_x), m), zero), face_x[:, k:]], axis=1)
    zy = np.concatenate([face_y, np.full((len(face_y), n), zero)], axis=1)
    blocks = [ws] * k + [xs] * m + [ys] * n
    n_targets = int(np.prod([len(b) for b in blocks]))
    if len(zx) + len(zy) + n_targets > limits.max_size:
        raise CapExceeded(f"coordinates for bounds {(k, m, n)}", len(zx) + len(zy) + n_targets, limits.max_size)
    targets = np.array(list(itertools.product(*blocks)), dtype=np.int64).reshape(-1, g)
    coords = np.concatenate([zx, zy, targets])
    variables = block_vars(k, m, n)
    c = Closure(a, [(v, coords[:, i]) for i, v in enumerate(variables)], limit=limits.max_free, work=limits.max_work).run_all()
    nz = len(zx) + len(zy)
    rows = c.vectors
    keep = np.flatnonzero((rows[:, :nz] == zero).all(axis=1))
    witnesses = {}
    for idx in keep:
        vals = rows[idx, nz:]
        for d in np.unique(vals):
            d = int(d)
            if d in witnesses:
                continue
            pos = int(np.flatnonzero(vals == d)[0])
            asg = {v: int(targets[pos, i]) for i, v in enumerate(variables)}
            witnesses[d] = Witness.make(c.term(idx), asg)
    return witnesses


def _chain(bounds):
    """Bounds from (0, 1, 1) up to ``bounds``, raising the smallest lagging component each step."""
    cur = [0, min(1, bounds[1]), min(1, bounds[2])]
    out = [tuple(cur)]
    while tuple(cur) != tuple(bounds):
        lag = [i for i in range(3) if cur[i] < bounds[i]]
        i = min(lag, key=lambda j: (cur[j], j))
        cur[i] += 1
        out.append(tuple(cur))
    return out


@functools.lru_cache(maxsize=4096)
def _enumerate(a, xs, ys, ws, bounds, limits):
    k, m, n = bounds
    if xs == (a.zero,) or ys == (a.zero,):
        return {a.zero: _zero_witness(a)}, "exact", (0, 0, 0), ["X or Y is 0, so every commutator term vanishes"]
    notes = []
    trivial_weight = ws == (a.zero,)
    if trivial_weight and k:
        notes.append("W = 0: w-variables can only take the value 0, so k is irrelevant and set to 0")
        k = 0
    try:
        base = _enumerate_values(a, xs, ys, ws, k, m, n, limits)
    except CapExceeded as e:
        notes.append(f"cap exceeded at bounds {(k, m, n)}: {e}")
        best, used = {a.zero: _zero_witness(a)}, (0, 0, 0)
        for kk, mm, nn in _chain((k, m, n))[:-1]:
            try:
                best, used = _enumerate_values(a, xs, ys, ws, kk, mm, nn, limits), (kk, mm, nn)
            except CapExceeded:
                break
        notes.append(f"value is the one found at the largest feasible bounds {used}")
        return best, "lower_bound", used, notes
    status = "exact"
    steps = [(k, m + 1, n), (k, m, n + 1)] + ([] if trivial_weight else [(k + 1, m, n)])
    for kk, mm, nn in steps:
        try:
            more = _enumerate_values(a, xs, ys, ws, kk, mm, nn, limits)
        except CapExceeded as e:
            notes.append(f"stabilization check at {(kk, mm, nn)} skipped: {e}")
            status = "lower_bound"
            continue
        if set(more) != set(base):
            notes.append(f"value grows at {(kk, mm, nn)}: {sorted(set(more) - set(base))}")
            status = "lower_bound"
    if status == "exact":
        notes.append("exact by stabilization: one more variable in any block changes nothing (heuristic)")
    return base, status, (k, m, n), notes


def clear_caches():
    """Forget memoized Mal'tsev terms, commutator values and operation tables."""
    for f in (_fiber, _enumerate, _maltsev_cached, _code_table):
        f.cache_clear()


# -- public operations -------------------------------------------------------------

def weighted_commutator(c: WeightedCospan, bounds=DEFAULT_BOUNDS, engine="auto", limits=None) -> CommutatorResult:
    """[X, Y]_{A|W}: the subalgebra of commutator-term values with w's in W."""
    a = c.parent
    limits = limits or get_limits()
    engine = _pick_engine(a, engine)
    xs, ys, ws = c.x_sub.elements, c.y_sub.elements, c.w_sub.elements
    if engine == "fiber":
        try:
            witnesses, size = _fiber(a, xs, ys, ws, limits)
        except CapExceeded as e:
            return _result(a, {a.zero: _zero_witness(a)}, "lower_bound", (0, 0, 0), engine,
                           [f"fiber closure exceeded cap: {e}"])
        used = tuple(max((w.counts[i] for w in witnesses.values()), default=0) for i in range(3))
        return _result(a, witnesses, "exact", used, engine,
                       [f"exact: fiber of a {size}-element subalgebra of A^4 (Mal'tsev term available)"])
    witnesses, status, used, notes = _enumerate(a, xs, ys, ws, tuple(bounds), limits)
    return _result(a, witnesses, status, used, engine, notes)


def _normal_witnesses(a, sub: CommutatorResult, value, limits):
    """Witnesses for the ideal generated by ``sub.value`` (needs a Mal'tsev term).

    In a Mal'tsev algebra the zero class of Cg(D x {0}) is {t(a.., d..) : t(a.., 0..) = 0},
    read off the subalgebra of A^2 generated by (a, a) and (d, 0).  The term
    p(t(a, d), t(a, 0), 0) is then an ideal term in the d's; plugging the commutator
    witnesses of the d's into it gives a commutator term (with free weights a).
    """
    mt = maltsev_term(a, limits)
    if not mt.found:
        return {}
    p, zero, z = mt.term, a.zero, _zero_term(a)
    gens, asg, inner = [], {}, {}
    for i, e in enumerate(e for e in a.universe if e != zero):
        v = Var("w", i + 1)
        gens.append((v, [e, e]))
        asg[v] = e
    for i, d in enumerate(e for e in sub.value.elements if e != zero):
        v = Var("x", i + 1)
        gens.append((v, [d, zero]))
        inner[v] = sub.witnesses[d]
    cl = Closure(a, gens, limit=limits.max_free, work=limits.max_work, length=2).run_all()
    rows = cl.vectors
    out = {}
    for idx in np.flatnonzero(rows[:, 1] == zero):
        e = int(rows[idx, 0])
        if e in out:
            continue
        if e in sub.witnesses:
            out[e] = sub.witnesses[e]
            continue
        t = cl.term(idx)
        t0 = substitute(t, {v: z for v in t.variables() if v.block == "x"})
        q = fold_constants(substitute(p, {Var("x", 1): t, Var("x", 2): t0, Var("x", 3): z}), a)
        used = {v: w for v, w in inner.items() if v in q.variables()}
        out[e] = plug(q, {v: val for v, val in asg.items() if v in q.variables()}, used)
    if set(out) != set(value.elements):
        raise AssertionError("Mal'tsev zero-class computation disagrees with congruence generation")
    return out


def weighted_normal_commutator(c: WeightedCospan, bounds=DEFAULT_BOUNDS, engine="auto", limits=None) -> CommutatorResult:
    """N[X, Y]_{A|W}: the normal closure of the weighted subobject commutator."""
    a = c.parent
    limits = limits or get_limits()
    sub = weighted_commutator(c, bounds, engine, limits)
    value = normal_closure(a, sub.value)
    witnesses = _normal_witnesses(a, sub, value, limits) if value != sub.value else dict(sub.witnesses)
    notes = sub.notes + ["normal closure of the subobject commutator"]
    res = CommutatorResult(value, sub.status, sub.bounds_used, dict(sorted(witnesses.items())), sub.method,
                           sub.engine, notes)
    if set(witnesses) != set(value.elements):
        res.notes.append("normal-closure elements without a Mal'tsev term carry no witness")
    return res


def _zero_sub(a):
    return subuniverse_generate(a, ())


def higgins_commutator(a, x_sub, y_sub, bounds=DEFAULT_BOUNDS, engine="auto", limits=None):
    return weighted_commutator(WeightedCospan(a, x_sub, y_sub, _zero_sub(a)), bounds, engine, limits)


def huq_commutator(a, x_sub, y_sub, bounds=DEFAULT_BOUNDS, engine="auto", limits=None):
    return weighted_normal_commutator(WeightedCospan(a, x_sub, y_sub, _zero_sub(a)), bounds, engine, limits)


def full_sub(a):
    return Subuniverse(a, tuple(a.universe))


# -- rings: closed form ---------------------------------------------------------------

def _check_ring(a):
    from .builders import AxiomError, ring_from_tables

    if "commutative_ring" not in a.declared_properties:
        raise ValueError(f"{a.name} is not declared commutative_ring")
    if {"add", "neg", "mul"} - set(a.tables):
        raise ValueError("ring signature needs add, neg, mul")
    try:
        ring_from_tables(a.tables["add"], a.tables["mul"])
    except AxiomError as e:
        raise ValueError(f"declared commutative_ring but {e}") from None


def _additive_closure(a, seeds: dict):
    """Sums of seed elements, each with a witness built from the seeds' witnesses."""
    out = {a.zero: _zero_witness(a)}
    out.update({e: w for e, w in seeds.items() if e not in out})
    add = a.tables["add"]
    frontier = list(out)
    while frontier:
        new = {}
        for u in frontier:
            for v in list(out):
                s = int(add[u, v])
                if s not in out and s not in new:
                    new[s] = compose("add", [out[u], out[v]])
        out.update(new)
        frontier = list(new)
    return out


def _products(a, left: dict, right: dict):
    mul = a.tables["mul"]
    seeds = {}
    for (u, wu), (v, wv) in itertools.product(sorted(left.items()), sorted(right.items())):
        e = int(mul[u, v])
        if e not in seeds:
            seeds[e] = compose("mul", [wu, wv])
    return _additive_closure(a, seeds)


def _plus_a(a, r: dict, s: dict):
    """R +^A S = {r + s + t : r in R, s in S, t in RS}."""
    rs = _products(a, r, s)
    add = a.tables["add"]
    out = {}
    for (u, wu), (v, wv), (t, wt) in itertools.product(sorted(r.items()), sorted(s.items()), sorted(rs.items())):
        e = int(add[add[u, v], t])
        if e not in out:
            out[e] = compose("add", [compose("add", [wu, wv]), wt])
    return out


def _var_witnesses(sub, block):
    return {e: Witness(Var(block, 1), ((Var(block, 1), e),)) for e in sub.elements}


def ring_weighted_commutator(c: WeightedCospan, normal=False) -> CommutatorResult:
    """XY +^A WXY (or XY +^A AXY when ``normal``), for commutative non-unital rings."""
    a = c.parent
    _check_ring(a)
    xs, ys = _var_witnesses(c.x_sub, "x"), _var_witnesses(c.y_sub, "y")
    ws = _var_witnesses(full_sub(a) if normal else c.w_sub, "w")
    xy = _products(a, xs, ys)
    wxy = _products(a, ws, xy)
    value = _plus_a(a, xy, wxy)
    res = _result(a, value, "exact", (0, 0, 0), "", ["closed form XY +^A " + ("AXY" if normal else "WXY")],
                  method="ring_closed_form")
    if res.value.elements != tuple(sorted(value)):
        raise AssertionError("closed form is not closed under the ring operations")
    res.bounds_used = tuple(max((w.counts[i] for w in res.witnesses.values()), default=0) for i in range(3))
    return res


# -- Smith commutator ----------------------------------------------------------------------

def _pair_algebra(a, alpha: Congruence):
    """A(alpha) = {(x, y) : x alpha y} as a subalgebra of A^2."""
    pairs = [(x, y) for x in a.universe for y in a.universe if alpha.related(x, y)]
    index = {p: i for i, p in enumerate(pairs)}
    left = np.array([p[0] for p in pairs])
    right = np.array([p[1] for p in pairs])
    n = len(pairs)
    lookup = np.full((a.size, a.size), -1)
    for (x, y), i in index.items():
        lookup[x, y] = i
    ops = []
    for name, arity in a.signature.operations:
        t = a.tables[name]
        if arity == 0:
            ops.append((name, 0, index[(int(t), int(t))]))
            continue
        grids = [np.arange(n).reshape([n if k == j else 1 for k in range(arity)]) for j in range(arity)]
        ops.append((name, arity, lookup[t[tuple(left[g] for g in grids)], t[tuple(right[g] for g in grids)]]))
    return make_algebra(f"{a.name}(alpha)", n, index[(a.zero, a.zero)], ops), pairs, index


def smith_commutator(a, alpha: Congruence, beta: Congruence, limits=None) -> Congruence:
    """[alpha, beta] via the congruence on A(alpha) generated by ((x, x), (y, y)) for x beta y."""
    limits = limits or get_limits()
    mt = maltsev_term(a, limits)
    if not mt.found:
        raise SmithUndefined("Smith commutator undefined for this engine outside Mal'tsev varieties")
    if alpha.parent is not a or beta.parent is not a:
        raise ValueError("congruences must live on the given algebra")
    if a.size ** 2 > limits.max_size:
        raise CapExceeded("A^2 for the Smith commutator", a.size ** 2, limits.max_size)
    pa, pairs, index = _pair_algebra(a, alpha)
    gens = [(index[(x, x)], index[(y, y)]) for x in a.universe for y in a.universe if x < y and beta.related(x, y)]
    delta = cg(pa, gens)
    links = [(x, y) for x, y in pairs if delta.related(index[(x, y)], index[(x, x)])]
    result = _canonical(a, links)
    if not is_compatible(a, result.rep):
        raise AssertionError("Smith construction did not produce a congruence")
    if not result <= meet(alpha, beta):
        raise AssertionError("Smith commutator is not below alpha meet beta")
    return result


def _canonical(a, links):
    from .congruences import UnionFind

    uf = UnionFind(a.size)
    for i, j in links:
        uf.union(i, j)
    return Congruence(a, uf.reps())


def term_condition_matrices(a, alpha, beta, limits=None):
    """M(alpha, beta): rows (t(a,c), t(a,d), t(b,c), t(b,d)) for a alpha b, c beta d."""
    limits = limits or get_limits()
    gens = [(Var("x", 1), [u, u, v, v]) for u, v in alpha.pairs() if u != v]
    gens += [(Var("y", 1), [u, v, u, v]) for u, v in beta.pairs() if u != v]
    gens += [(Var("w", 1), [u, u, u, u]) for u in a.universe]
    return Closure(a, gens, limit=limits.max_free, work=limits.max_work, length=4).run_all().vectors.astype(np.int64)


def centralizes(rows, delta: Congruence) -> bool:
    rep = np.asarray(delta.rep)
    top = rep[rows[:, 0]] == rep[rows[:, 1]]
    return bool((rep[rows[top, 2]] == rep[rows[top, 3]]).all())


def smith_term_condition(a, alpha, beta, limits=None) -> Congruence:
    """Smallest delta with C(alpha, beta; delta), by scanning the whole congruence lattice.

    Independent of :func:`smith_commutator`; meant for algebras with at most 8 elements.
    """
    if a.size > 8:
        raise ValueError("term-condition oracle is limited to |A| <= 8")
    rows = term_condition_matrices(a, alpha, beta, limits)
    good = [d for d in all_congruences(a) if centralizes(rows, d)]
    smallest = functools.reduce(meet, good)
    if not centralizes(rows, smallest):
        raise AssertionError("meet of centralizing congruences does not centralize")
    return smallest


# -- centrality, cross validation, divergence ------------------------------------------------------

def centrality_check(c: WeightedCospan, bounds=DEFAULT_BOUNDS, engine="auto", limits=None) -> str:
    res = weighted_commutator(c, bounds, engine, limits)
    if len(res.value) > 1:
        return "not_central"
    return "central" if res.exact else "unknown"


def smith_bridge(c: WeightedCospan, limits=None) -> CommutatorResult:
    """zero_class of [Cg(X x 0), Cg(Y x 0)]_Smith as a CommutatorResult (no term witnesses)."""
    a = c.parent
    s = smith_commutator(a, congruence_from_normal(a, c.x_sub), congruence_from_normal(a, c.y_sub), limits)
    return CommutatorResult(zero_class(s), "exact", (0, 0, 0), {}, "smith_bridge", "",
                            ["zero class of the Smith commutator of the induced congruences"])


def cross_validate(c: WeightedCospan, bounds=DEFAULT_BOUNDS, engine="auto", limits=None) -> dict:
    """Compare the weight-one term commutator with the Smith bridge and, for rings, the closed form."""
    a = c.parent
    report = {"applicable": True, "defect": False, "values": {}, "agree": {}, "notes": []}
    if not (is_normal(a, c.x_sub) and is_normal(a, c.y_sub)):
        report["applicable"] = False
        report["notes"].append("X and Y must be normal for the Smith bridge")
        return report
    if not maltsev_term(a, limits).found:
        report["applicable"] = False
        report["notes"].append("no Mal'tsev term")
        return report
    one = c.reweighted(full_sub(a))
    term = weighted_commutator(one, bounds, engine, limits)
    smith = smith_bridge(c, limits)
    report["values"]["term"] = term.to_dict()
    report["values"]["smith"] = list(smith.value.elements)
    results = {"term": term, "smith": smith}
    if "commutative_ring" in a.declared_properties:
        ring = ring_weighted_commutator(one)
        results["ring"] = ring
        report["values"]["ring"] = list(ring.value.elements)
    for (n1, r1), (n2, r2) in itertools.combinations(results.items(), 2):
        e1, e2 = r1.elements, r2.elements
        rel = "equal" if e1 == e2 else "subset" if e1 < e2 else "superset" if e1 > e2 else "incomparable"
        report["agree"][f"{n1}/{n2}"] = rel
        # a lower bound may sit strictly below an exact value; anything else is a defect
        tolerated = (rel == "subset" and not r1.exact) or (rel == "superset" and not r2.exact)
        if rel != "equal" and not tolerated:
            report["defect"] = True
    return report


def divergence_search(a, bounds=DEFAULT_BOUNDS, weights=False, engine="auto", limits=None) -> list:
    """Subalgebra pairs with [X,Y]_0 != [X,Y]_1 or N[X,Y]_0 != N[X,Y]_1."""
    subs = all_subuniverses(a)
    zero, one = _zero_sub(a), full_sub(a)
    out = []
    for x_sub, y_sub in itertools.product(subs, repeat=2):
        base = WeightedCospan(a, x_sub, y_sub, zero)
        c0 = weighted_commutator(base, bounds, engine, limits)
        c1 = weighted_commutator(base.reweighted(one), bounds, engine, limits)
        n0 = weighted_normal_commutator(base, bounds, engine, limits)
        n1 = weighted_normal_commutator(base.reweighted(one), bounds, engine, limits)
        if c0.value == c1.value and n0.value == n1.value:
            continue
        entry = {
            "x": list(x_sub.elements),
            "y": list(y_sub.elements),
            "weight_zero": c0.to_dict(),
            "weight_one": c1.to_dict(),
            "normal_weight_zero": n0.to_dict(),
            "normal_weight_one": n1.to_dict(),
            "all_exact": all(r.exact for r in (c0, c1, n0, n1)),
        }
        if weights:
            entry["by_weight"] = {
                ",".join(map(str, w.elements)): list(weighted_commutator(base.reweighted(w), bounds, engine, limits).value.elements)
                for w in subs
            }
        out.append(entry)
    return out
