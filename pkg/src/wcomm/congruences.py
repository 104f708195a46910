"""Congruences as least-representative arrays, generation by union-find."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import FiniteAlgebra, Subuniverse, subuniverse


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        """Merge the classes; returns False if already merged."""
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True

    def reps(self):
        return tuple(self.find(i) for i in range(len(self.parent)))


@dataclass(frozen=True, eq=False)
class Congruence:
    parent: FiniteAlgebra
    rep: tuple  # rep[i] = least id in the class of i

    def __eq__(self, other):
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.parent is other.parent and self.rep == other.rep

    def __hash__(self):
        return hash((id(self.parent), self.rep))

    def __le__(self, other):
        return all(other.rep[i] == other.rep[r] for i, r in enumerate(self.rep))

    def related(self, a, b):
        return self.rep[a] == self.rep[b]

    def classes(self):
        out = {}
        for i, r in enumerate(self.rep):
            out.setdefault(r, []).append(i)
        return [out[r] for r in sorted(out)]

    def pairs(self):
        return [(a, b) for cls in self.classes() for a in cls for b in cls]

    def __repr__(self):
        return f"Congruence({self.classes()})"


def _translations(table, j, a):
    """All values f(.., a, ..) with ``a`` at position j, flattened over the other arguments."""
    return np.moveaxis(table, j, 0)[a].ravel()


def cg(a: FiniteAlgebra, pairs=()) -> Congruence:
    """Smallest congruence containing ``pairs``.

    Every successful merge (u, v) pushes the pairs f(.., u, ..) ~ f(.., v, ..) for
    each operation, each argument position and each choice of the other arguments.
    """
    uf = UnionFind(a.size)
    todo = []
    for u, v in pairs:
        if not (0 <= u < a.size and 0 <= v < a.size):
            raise ValueError(f"pair {(u, v)} out of range")
        todo.append((int(u), int(v)))
    ops = [(a.tables[name], arity) for name, arity in a.signature.operations if arity > 0]
    while todo:
        u, v = todo.pop()
        if not uf.union(u, v):
            continue
        for table, arity in ops:
            for j in range(arity):
                tu, tv = _translations(table, j, u), _translations(table, j, v)
                diff = tu != tv
                todo.extend(zip(tu[diff].tolist(), tv[diff].tolist()))
    return Congruence(a, uf.reps())


def identity(a):
    return Congruence(a, tuple(a.universe))


def full(a):
    return Congruence(a, (0,) * a.size)


def is_compatible(a: FiniteAlgebra, rep) -> bool:
    rep = np.asarray(rep)
    if len(rep) != a.size or not np.array_equal(rep[rep], rep):
        return False
    if any(rep[i] > i for i in range(a.size)):
        return False
    for name, arity in a.signature.operations:
        table = a.tables[name]
        for j in range(arity):
            for i in range(a.size):
                if rep[i] != i and not np.array_equal(rep[_translations(table, j, i)],
                                                      rep[_translations(table, j, int(rep[i]))]):
                    return False
    return True


def from_partition(a, blocks) -> Congruence:
    """Congruence from a list of blocks; raises if not compatible."""
    rep = list(a.universe)
    for b in blocks:
        m = min(b)
        for i in b:
            rep[i] = m
    if not is_compatible(a, rep):
        raise ValueError("partition is not a congruence")
    return Congruence(a, tuple(rep))


def meet(c1: Congruence, c2: Congruence) -> Congruence:
    _same_parent(c1, c2)
    first = {}
    return Congruence(c1.parent, tuple(first.setdefault((r1, r2), i) for i, (r1, r2) in enumerate(zip(c1.rep, c2.rep))))


def join(c1: Congruence, c2: Congruence) -> Congruence:
    _same_parent(c1, c2)
    pairs = [(i, r) for i, r in enumerate(c1.rep) if i != r] + [(i, r) for i, r in enumerate(c2.rep) if i != r]
    return cg(c1.parent, pairs)


def join_meet(c1, c2, which):
    return {"join": join, "meet": meet}[which](c1, c2)


def _same_parent(c1, c2):
    if c1.parent is not c2.parent:
        raise ValueError("congruences live on different algebras")


def zero_class(c: Congruence) -> Subuniverse:
    a = c.parent
    cls = [i for i in a.universe if c.rep[i] == c.rep[a.zero]]
    return subuniverse(a, cls)


def normal_closure(a: FiniteAlgebra, s) -> Subuniverse:
    return zero_class(cg(a, [(int(x), a.zero) for x in s]))


class NotNormal(ValueError):
    def __init__(self, extra):
        self.extra = sorted(extra)
        super().__init__(f"not an ideal: its congruence also puts {self.extra} in the zero class")


def congruence_from_normal(a: FiniteAlgebra, m) -> Congruence:
    """Smallest congruence whose zero class is ``m``; raises :class:`NotNormal` otherwise."""
    m = set(m)
    c = cg(a, [(x, a.zero) for x in m])
    got = set(zero_class(c))
    if got != m | {a.zero}:
        raise NotNormal(got - m)
    return c


def is_normal(a, m) -> bool:
    return set(normal_closure(a, m)) == set(m) | {a.zero}


def all_congruences(a: FiniteAlgebra) -> list:
    """The congruence lattice, as joins of principal congruences.  Small algebras only."""
    principal = {cg(a, [(u, v)]) for u, v in itertools.combinations(a.universe, 2)}
    found = {identity(a)} | principal
    frontier = set(found)
    while frontier:
        new = set()
        for c in frontier:
            for p in principal:
                j = join(c, p)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda c: (-len(c.classes()), c.rep))


def all_ideals(a: FiniteAlgebra) -> list:
    seen = {}
    for c in all_congruences(a):
        z = zero_class(c)
        seen.setdefault(z.elements, z)
    return [seen[k] for k in sorted(seen, key=lambda s: (len(s), s))]
