"""Constructors for the groups, commutative non-unital rings and loops used as test corpus."""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import AlgebraError, direct_product, make_algebra


class AxiomError(ValueError):
    pass


# -- groups -------------------------------------------------------------------

def group_from_table(mul, name="G"):
    """Group with signature mul/2, inv/1, e/0.  The identity must be element 0."""
    mul = np.asarray(mul, dtype=np.int64)
    n = len(mul)
    if mul.shape != (n, n) or mul.min() < 0 or mul.max() >= n:
        raise AxiomError("multiplication table must be n x n over 0..n-1")
    if not (np.array_equal(mul[0], np.arange(n)) and np.array_equal(mul[:, 0], np.arange(n))):
        raise AxiomError("element 0 is not a two-sided identity")
    bad = np.argwhere(mul[mul] != mul[:, mul])  # (ab)c vs a(bc)
    if len(bad):
        a, b, c = bad[0]
        raise AxiomError(f"not associative: ({a}*{b})*{c} != {a}*({b}*{c})")
    inv = np.empty(n, dtype=np.int64)
    for a in range(n):
        right = np.flatnonzero(mul[a] == 0)
        if len(right) != 1 or mul[right[0], a] != 0:
            raise AxiomError(f"element {a} has no two-sided inverse")
        inv[a] = right[0]
    return make_algebra(name, n, 0, [("mul", 2, mul), ("inv", 1, inv), ("e", 0, 0)],
                        ["group", "maltsev", "semi_abelian", "ideal_determined"])


def _perm_group(perms, name):
    perms = sorted(perms, key=lambda p: (p != tuple(range(len(p))), p))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i)): apply q first
    mul = [[index[tuple(p[q[i]] for i in range(len(q)))] for q in perms] for p in perms]
    return group_from_table(mul, name)


def cyclic(n):
    return group_from_table([[(i + j) % n for j in range(n)] for i in range(n)], f"Z{n}")


def dihedral(n):
    """Symmetries of the n-gon, order 2n."""
    rots = [tuple((i + r) % n for i in range(n)) for r in range(n)]
    refl = [tuple((r - i) % n for i in range(n)) for r in range(n)]
    return _perm_group(set(rots + refl), f"D{n}")


def symmetric(n):
    if n > 5:
        raise ValueError("symmetric n is capped at 5")
    return _perm_group(set(itertools.permutations(range(n))), f"S{n}")


def quaternion():
    """Q8 on ids 0..7 = 1, -1, i, -i, j, -j, k, -k."""
    table = {("1", u): (1, u) for u in "1ijk"} | {(u, "1"): (1, u) for u in "1ijk"}
    table |= {("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
              ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
              ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")}
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}
    mul = [[None] * 8 for _ in range(8)]
    for (s1, u1), (s2, u2) in itertools.product(elems, repeat=2):
        s, u = table[(u1, u2)]
        mul[index[(s1, u1)]][index[(s2, u2)]] = index[(s * s1 * s2, u)]
    return group_from_table(mul, "Q8")


def group_product(*groups):
    g = groups[0]
    for h in groups[1:]:
        g = direct_product(g, h)
    return g


def build_group(kind, n=None, table=None):
    if kind == "cyclic":
        return cyclic(n)
    if kind == "dihedral":
        return dihedral(n)
    if kind == "symmetric":
        return symmetric(n)
    if kind == "quaternion":
        return quaternion()
    if kind == "table":
        return group_from_table(table)
    raise ValueError(f"unknown group kind {kind!r}")


# -- rings --------------------------------------------------------------------

def ring_from_tables(add, mul, name="R"):
    """Commutative non-unital ring with signature add/2, neg/1, mul/2, zero/0; zero is element 0."""
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    n = len(add)
    try:
        g = group_from_table(add)
    except AxiomError as e:
        raise AxiomError(f"addition: {e}") from None
    if not np.array_equal(add, add.T):
        raise AxiomError("addition is not commutative")
    if not np.array_equal(mul, mul.T):
        raise AxiomError("multiplication is not commutative")
    if not np.array_equal(mul[mul], mul[:, mul]):
        raise AxiomError("multiplication is not associative")
    # a(b + c) = ab + ac
    left = mul[:, add]
    right = add[mul[:, :, None], mul[:, None, :]]
    if not np.array_equal(left, right):
        raise AxiomError("multiplication does not distribute over addition")
    neg = g.tables["inv"]
    try:
        return make_algebra(name, n, 0, [("add", 2, add), ("neg", 1, neg), ("mul", 2, mul), ("zero", 0, 0)],
                            ["commutative_ring", "maltsev", "semi_abelian", "ideal_determined"])
    except AlgebraError as e:
        raise AxiomError(str(e)) from None


def zn(n):
    r = np.arange(n)
    return ring_from_tables((r[:, None] + r) % n, (r[:, None] * r) % n, f"Z{n}_ring")


def zero_mult(n):
    r = np.arange(n)
    return ring_from_tables((r[:, None] + r) % n, np.zeros((n, n), dtype=np.int64), f"Z{n}_zeromul")


def poly_nilpotent(p, d):
    """F_p[t]/(t^d); element id sum(c_i p^i) is the polynomial sum(c_i t^i)."""
    size = p ** d
    coeffs = np.array([[(i // p ** k) % p for k in range(d)] for i in range(size)])
    weights = p ** np.arange(d)
    add = ((coeffs[:, None, :] + coeffs[None, :, :]) % p) @ weights
    prod = np.zeros((size, size, d), dtype=np.int64)
    for i in range(d):
        for j in range(d - i):
            prod[:, :, i + j] += coeffs[:, None, i] * coeffs[None, :, j]
    mul = (prod % p) @ weights
    return ring_from_tables(add, mul, f"F{p}[t]/t^{d}")


def build_ring(kind, n=None, p=None, d=None, add=None, mul=None):
    if kind == "zn":
        return zn(n)
    if kind == "zero_mult":
        return zero_mult(n)
    if kind == "poly_nilpotent":
        return poly_nilpotent(p, d)
    if kind == "table":
        return ring_from_tables(add, mul)
    raise ValueError(f"unknown ring kind {kind!r}")


# -- loops --------------------------------------------------------------------

def build_loop(table, zero=0, name="L"):
    """Loop with signature mul/2, ldiv/2, rdiv/2, e/0.

    ldiv(a, b) solves a*x = b and rdiv(b, a) solves x*a = b.  Elements are
    renumbered so that the identity ``zero`` becomes id 0 when it is not already.
    """
    t = np.asarray(table, dtype=np.int64)
    n = len(t)
    if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
        raise AxiomError("table must be n x n over 0..n-1")
    for i in range(n):
        if len(set(t[i].tolist())) != n:
            raise AxiomError(f"not a Latin square: row {i} repeats an entry")
        if len(set(t[:, i].tolist())) != n:
            raise AxiomError(f"not a Latin square: column {i} repeats an entry")
    if not (np.array_equal(t[zero], np.arange(n)) and np.array_equal(t[:, zero], np.arange(n))):
        raise AxiomError(f"element {zero} is not a two-sided identity")
    if zero != 0:
        perm = np.arange(n)
        perm[[0, zero]] = perm[[zero, 0]]
        t = perm[t[np.ix_(perm, perm)]]
    ldiv = np.empty_like(t)
    rdiv = np.empty_like(t)
    for a in range(n):
        for b in range(n):
            ldiv[a, t[a, b]] = b
            rdiv[t[a, b], b] = a
    return make_algebra(name, n, 0, [("mul", 2, t), ("ldiv", 2, ldiv), ("rdiv", 2, rdiv), ("e", 0, 0)],
                        ["loop", "maltsev", "semi_abelian", "ideal_determined"])


# order-5 loop that is not a group (the smallest non-associative loops have order 5)
LOOP5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def loop5():
    return build_loop(LOOP5, 0, "L5")


# -- non-Mal'tsev examples ---------------------------------------------------------

def semilattice2():
    """The 2-element meet-semilattice {0, 1} with 0 as the constant."""
    return make_algebra("SL2", 2, 0, [("meet", 2, [[0, 0], [0, 1]]), ("zero", 0, 0)])


def pointed_set(n=2):
    """A set with nothing but a constant."""
    return make_algebra(f"Set{n}", n, 0, [("zero", 0, 0)])


# -- corpus ----------------------------------------------------------------------

def groups_up_to_8():
    """One representative of each isomorphism type of group of order at most 8."""
    out = [cyclic(n) for n in range(1, 9)]
    z2, z4 = cyclic(2), cyclic(4)
    out += [group_product(z2, z2), group_product(z2, z4), group_product(z2, z2, z2)]
    out += [symmetric(3), dihedral(4), quaternion()]
    return out


def corpus_rings():
    return [zn(2), zn(4), zn(6), zn(8), zero_mult(4), zero_mult(6), poly_nilpotent(2, 2), poly_nilpotent(2, 3)]


def corpus():
    """Every shipped algebra: groups, rings, the loop, and two non-Mal'tsev examples."""
    return groups_up_to_8() + corpus_rings() + [loop5(), semilattice2(), pointed_set(2)]
