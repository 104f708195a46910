"""Free algebras of V(A) inside finite powers, identities, Mal'tsev and protomodularity searches.

The free algebra on g generators in the variety generated by a finite algebra A
is the subalgebra of A^(A^g) generated by the g projections.  Any subset of the
coordinates gives a projection of it, and the projection of a generated
subalgebra is generated by the projected generators; the searches below use this
to look only at the coordinates an identity actually mentions.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .closure import Closure, assignment_grid
from .config import CapExceeded, get_limits
from .terms import App, Term, Var, evaluate_vector


@dataclass(frozen=True)
class FreeElement:
    vector: np.ndarray  # indexed by the lexicographic code of the assignment
    witness: Term

    def __repr__(self):
        return f"FreeElement({self.witness})"


def block_vars(k=0, m=0, n=0):
    return ([Var("w", i + 1) for i in range(k)] + [Var("x", i + 1) for i in range(m)]
            + [Var("y", i + 1) for i in range(n)])


def _check_size(a, g, limits):
    if a.size ** g > limits.max_size:
        raise CapExceeded(f"free algebra of {a.name} on {g} generators (coordinates)", a.size ** g, limits.max_size)


def free_closure(a, variables, limits=None) -> Closure:
    """Closure of the projection vectors for ``variables`` over all of ``A^len(variables)``."""
    limits = limits or get_limits()
    g = len(variables)
    _check_size(a, g, limits)
    grid = assignment_grid(a.size, g)
    gens = [(v, grid[:, i]) for i, v in enumerate(variables)]
    if g == 0:
        gens = []
    return Closure(a, gens, limit=limits.max_free, work=limits.max_work).run_all()


def free_algebra(a, g: int, limits=None) -> list:
    """Elements of the free algebra of V(a) on generators x1..xg, in canonical order."""
    return _elements(free_closure(a, block_vars(0, g, 0), limits))


def _elements(c):
    return [FreeElement(c.vectors[i].copy(), c.term(i)) for i in range(len(c))]


def identity_holds(a, s: Term, t: Term):
    """``(True, None)`` if s = t holds in A (hence in V(A)); else ``(False, assignment)``."""
    vs = sorted(s.variables() | t.variables(), key=lambda v: (v.block, v.index))
    grid = assignment_grid(a.size, len(vs))
    env = {v: grid[:, i] for i, v in enumerate(vs)}
    if not vs:
        env = {}
    left = np.broadcast_to(evaluate_vector(s, a, env), (len(grid),))
    right = np.broadcast_to(evaluate_vector(t, a, env), (len(grid),))
    bad = np.flatnonzero(left != right)
    if len(bad):
        return False, {str(v): int(grid[bad[0], i]) for i, v in enumerate(vs)}
    return True, None


def commutator_terms(a, k: int, m: int, n: int, w_mode: str = "free", limits=None) -> list:
    """Free-algebra elements in w1..wk, x1..xm, y1..yn that vanish when all x's or all y's are 0.

    ``w_mode`` ("restricted" or "free") is carried for reporting only.
    """
    if w_mode not in ("restricted", "free"):
        raise ValueError(f"bad w_mode {w_mode!r}")
    variables = block_vars(k, m, n)
    c = free_closure(a, variables, limits)
    grid = assignment_grid(a.size, len(variables))
    xs = grid[:, k:k + m]
    ys = grid[:, k + m:]
    mask = (xs == a.zero).all(axis=1) | (ys == a.zero).all(axis=1)
    keep = np.flatnonzero((c.vectors[:, mask] == a.zero).all(axis=1))
    return [FreeElement(c.vectors[i].copy(), c.term(i)) for i in keep]


def _search(a, variables, coords, target, limits, max_term_size=None):
    """Find the canonical term whose values at ``coords`` (rows of assignments) equal ``target``.

    Returns ``(term, complete)``; term is None when the search finished without a hit
    (``complete`` tells whether that is a proof of absence).
    """
    coords = np.asarray(coords, dtype=np.int64)
    target = np.asarray(target)
    gens = [(v, coords[:, i]) for i, v in enumerate(variables)]
    c = Closure(a, gens, limit=limits.max_free, work=limits.max_work)

    def stop(batch):
        hits = np.flatnonzero((batch == target).all(axis=1))
        return int(hits[0]) if len(hits) else None

    hit = c.run(stop=stop, max_term_size=max_term_size)
    if hit is not None:
        return c.term(hit), True
    return None, c.complete


@dataclass(frozen=True)
class MaltsevResult:
    status: str  # "found" | "absent" | "unknown"
    term: Term | None = None
    reason: str = ""

    @property
    def found(self):
        return self.status == "found"


def maltsev_term(a, limits=None) -> MaltsevResult:
    return _maltsev_cached(a, limits or get_limits())


@functools.lru_cache(maxsize=256)
def _maltsev_cached(a, limits):
    x, y, z = Var("x", 1), Var("x", 2), Var("x", 3)
    pairs = assignment_grid(a.size, 2)
    # p(u, v, v) = u and p(v, v, u) = u
    coords = np.concatenate([pairs[:, [0, 1, 1]], pairs[:, [1, 1, 0]]])
    target = np.concatenate([pairs[:, 0], pairs[:, 0]])
    try:
        t, complete = _search(a, [x, y, z], coords, target, limits)
    except CapExceeded as e:
        return MaltsevResult("unknown", reason=str(e))
    if t is not None:
        return MaltsevResult("found", t)
    return MaltsevResult("absent" if complete else "unknown")


@dataclass(frozen=True)
class ProtomodularityCertificate:
    status: str  # "found" | "inconclusive"
    alphas: tuple = ()
    theta: Term | None = None
    reason: str = ""

    @property
    def j(self):
        return len(self.alphas)


def protomodularity_certificate(a, n_max: int = 2, limits=None, max_candidates: int = 12,
                                max_term_size: int = 9) -> ProtomodularityCertificate:
    """Binary terms a_i(x, y) with a_i(x, x) = 0 and theta with theta(a_1(x,y), .., a_j(x,y), y) = x.

    Bounded search; never concludes that no certificate exists.
    """
    limits = limits or get_limits()
    x, y = Var("x", 1), Var("x", 2)
    grid = assignment_grid(a.size, 2)
    try:
        c = Closure(a, [(x, grid[:, 0]), (y, grid[:, 1])], limit=limits.max_free, work=limits.max_work)
        c.run(max_term_size=max_term_size)
    except CapExceeded as e:
        return ProtomodularityCertificate("inconclusive", reason=str(e))
    diag = grid[:, 0] == grid[:, 1]
    candidates = [i for i in range(len(c)) if (c.vectors[i][diag] == a.zero).all()]
    if a.size > 1:
        # a constant zero candidate can never help
        candidates = [i for i in candidates if (c.vectors[i] != a.zero).any()]
    candidates = candidates[:max_candidates]
    if not candidates:
        return ProtomodularityCertificate("inconclusive", reason=f"no nonzero term with t(x, x) = 0 up to size {max_term_size}")
    for j in range(1, n_max + 1):
        theta_vars = [Var("x", i + 1) for i in range(j + 1)]
        for combo in itertools.combinations(candidates, j):
            vals = np.stack([c.vectors[i] for i in combo] + [grid[:, 1]], axis=1).astype(np.int64)
            target = grid[:, 0]
            # theta must be a function of (alpha values, y)
            _, inv = np.unique(vals, axis=0, return_inverse=True)
            inv = inv.ravel()
            if any(len(set(target[inv == g].tolist())) > 1 for g in np.unique(inv)):
                continue
            try:
                theta, _ = _search(a, theta_vars, vals, target, limits, max_term_size=max_term_size)
            except CapExceeded:
                continue
            if theta is not None:
                return ProtomodularityCertificate("found", tuple(c.term(i) for i in combo), theta)
    return ProtomodularityCertificate("inconclusive", reason=f"nothing found with j <= {n_max}")


def certificate_holds(a, cert: ProtomodularityCertificate) -> bool:
    """Re-check a certificate by evaluation over all pairs."""
    from .terms import substitute

    x, y = Var("x", 1), Var("x", 2)
    for al in cert.alphas:
        ok, _ = identity_holds(a, substitute(al, {y: x}), App(a.signature.zero_op))
        if not ok:
            return False
    mapping = {Var("x", i + 1): al for i, al in enumerate(cert.alphas)}
    mapping[Var("x", cert.j + 1)] = y
    ok, _ = identity_holds(a, substitute(cert.theta, mapping), x)
    return ok
