"""Finite pointed algebras given by dense operation tables."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .config import CapExceeded, get_limits

PROPERTIES = ("maltsev", "semi_abelian", "ideal_determined", "group", "commutative_ring", "loop")


class AlgebraError(ValueError):
    """Raised by :func:`validate` with every violation found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Signature:
    operations: tuple  # ((name, arity), ...)
    zero_op: str

    def arity(self, name):
        return dict(self.operations)[name]

    @property
    def names(self):
        return [name for name, _ in self.operations]


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Elements are ``0..size-1``; ``tables[name]`` is an ndarray of shape ``(size,) * arity``."""

    name: str
    size: int
    zero: int
    signature: Signature
    tables: dict
    declared_properties: frozenset = field(default_factory=frozenset)

    @property
    def universe(self):
        return range(self.size)

    def op(self, name, *args):
        return int(self.tables[name][args])

    def to_dict(self):
        return {
            "name": self.name,
            "size": self.size,
            "zero": self.zero,
            "operations": [
                {"name": name, "arity": arity, "table": self.tables[name].tolist()}
                for name, arity in self.signature.operations
            ],
            "declared_properties": sorted(self.declared_properties),
        }

    def with_properties(self, *props):
        return FiniteAlgebra(self.name, self.size, self.zero, self.signature, self.tables,
                             self.declared_properties | frozenset(props))

    def __repr__(self):
        ops = ", ".join(f"{n}/{r}" for n, r in self.signature.operations)
        return f"<FiniteAlgebra {self.name!r} size={self.size} ops=[{ops}]>"


def make_algebra(name, size, zero, operations, declared_properties=()):
    """Build from ``[(name, arity, table), ...]`` and validate."""
    raw = {
        "name": name,
        "size": size,
        "zero": zero,
        "operations": [{"name": n, "arity": r, "table": np.asarray(t).tolist()} for n, r, t in operations],
        "declared_properties": list(declared_properties),
    }
    return validate(raw)


def validate(raw: dict) -> FiniteAlgebra:
    """Check a raw algebra description; raise :class:`AlgebraError` listing all violations.

    The zero constant is the first nullary operation whose value is ``zero``.
    """
    errors = []
    name = raw.get("name", "")
    size = raw.get("size")
    zero = raw.get("zero", 0)
    if not isinstance(size, int) or size < 1:
        raise AlgebraError([f"size must be a positive integer, got {size!r}"])
    if not isinstance(zero, int) or not 0 <= zero < size:
        errors.append(f"zero id {zero!r} out of range 0..{size - 1}")
    props = frozenset(raw.get("declared_properties", ()))
    for p in sorted(props - set(PROPERTIES)):
        errors.append(f"unknown declared property {p!r}")

    ops, tables, seen = [], {}, set()
    for spec in raw.get("operations", []):
        opname, arity = spec.get("name"), spec.get("arity")
        if opname in seen:
            errors.append(f"duplicate operation name {opname!r}")
            continue
        seen.add(opname)
        if not isinstance(arity, int) or arity < 0:
            errors.append(f"{opname}: bad arity {arity!r}")
            continue
        try:
            table = np.array(spec.get("table"), dtype=np.int64)
        except (ValueError, TypeError):
            errors.append(f"{opname}: table is not a rectangular integer array")
            continue
        if table.shape != (size,) * arity:
            errors.append(f"{opname}: table has shape {table.shape}, expected {(size,) * arity}")
            continue
        bad = np.argwhere((table < 0) | (table >= size))
        if len(bad):
            idx = tuple(int(i) for i in bad[0])
            errors.append(f"{opname}: entry {table[idx] if idx else int(table)} at {idx} out of range 0..{size - 1}")
            continue
        ops.append((opname, arity))
        tables[opname] = table

    zero_op = None
    if not errors:
        for opname, arity in ops:
            if arity == 0 and int(tables[opname]) == zero:
                zero_op = opname
                break
        if zero_op is None:
            errors.append(f"no nullary operation with value zero={zero}")
        for opname, arity in ops:
            if arity > 0 and int(tables[opname][(zero,) * arity]) != zero:
                errors.append(f"pointedness violated: {opname}({', '.join([str(zero)] * arity)}) = "
                              f"{int(tables[opname][(zero,) * arity])} != {zero}")
    if errors:
        raise AlgebraError(errors)
    for t in tables.values():
        t.flags.writeable = False
    return FiniteAlgebra(name, size, zero, Signature(tuple(ops), zero_op), tables, props)


def load(path) -> FiniteAlgebra:
    with open(path) as f:
        return validate(json.load(f))


def dump(a: FiniteAlgebra, path):
    with open(path, "w") as f:
        json.dump(a.to_dict(), f)
        f.write("\n")


def _grids(n, arity):
    """Broadcastable index arrays covering ``range(n) ** arity``."""
    return [np.arange(n).reshape([n if k == j else 1 for k in range(arity)]) for j in range(arity)]


class Codec:
    """Lexicographic bijection between g-tuples over ``0..n-1`` and ``0..n**g-1``."""

    def __init__(self, n, g):
        self.n, self.g = n, g
        self.weights = n ** np.arange(g - 1, -1, -1, dtype=np.int64)

    def encode(self, t):
        return int(np.dot(np.asarray(t, dtype=np.int64), self.weights))

    def decode(self, i):
        return tuple(int(d) for d in np.unravel_index(i, (self.n,) * self.g)) if self.g else ()

    def all_tuples(self):
        """Array of shape (n**g, g), row i decodes id i."""
        return np.array(list(itertools.product(range(self.n), repeat=self.g)), dtype=np.int64).reshape(self.n ** self.g, self.g)


def power(a: FiniteAlgebra, g: int, limits=None):
    """Direct power ``a**g`` with componentwise operations, plus its codec."""
    limits = limits or get_limits()
    if g < 1:
        raise ValueError("g must be positive")
    required = a.size ** g
    if required > limits.max_size:
        raise CapExceeded(f"power {a.name}^{g}", required, limits.max_size)
    codec = Codec(a.size, g)
    coords = codec.all_tuples()
    tables = {}
    for name, arity in a.signature.operations:
        t = a.tables[name]
        if arity == 0:
            tables[name] = np.array(codec.encode([int(t)] * g))
            continue
        comp = t[tuple(coords[gr] for gr in _grids(required, arity))]
        tables[name] = comp @ codec.weights
    ops = [(name, arity, tables[name]) for name, arity in a.signature.operations]
    return make_algebra(f"{a.name}^{g}", required, codec.encode([a.zero] * g), ops), codec


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra, name=None):
    """``a x b`` over a shared signature; element (i, j) has id ``i * b.size + j``."""
    if a.signature.operations != b.signature.operations:
        raise ValueError("signatures differ")
    n = a.size * b.size
    ia, ib = np.divmod(np.arange(n), b.size)
    ops = []
    for opname, arity in a.signature.operations:
        ta, tb = a.tables[opname], b.tables[opname]
        if arity == 0:
            ops.append((opname, 0, int(ta) * b.size + int(tb)))
            continue
        grids = _grids(n, arity)
        ops.append((opname, arity, ta[tuple(ia[g] for g in grids)] * b.size + tb[tuple(ib[g] for g in grids)]))
    props = a.declared_properties & b.declared_properties
    return make_algebra(name or f"{a.name}x{b.name}", n, a.zero * b.size + b.zero, ops, props)


@dataclass(frozen=True, eq=False)
class Subuniverse:
    parent: FiniteAlgebra
    elements: tuple

    def __contains__(self, i):
        return i in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Subuniverse):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __le__(self, other):
        return self._set <= other._set

    def __lt__(self, other):
        return self._set < other._set

    @property
    def _set(self):
        return frozenset(self.elements)

    def __repr__(self):
        return f"Subuniverse({list(self.elements)})"


def _close(a: FiniteAlgebra, start) -> set:
    current = set(int(i) for i in start) | {a.zero}
    frontier = set(current)
    while frontier:
        cur = np.array(sorted(current))
        new = set()
        for name, arity in a.signature.operations:
            if arity == 0:
                continue
            table = a.tables[name]
            # every tuple touching the frontier; cheap enough at desk scale
            fr = np.array(sorted(frontier))
            for j in range(arity):
                axes = [cur] * arity
                axes[j] = fr
                new.update(np.unique(table[np.ix_(*axes)]).tolist())
        frontier = new - current
        current |= frontier
    return current


def subuniverse_generate(a: FiniteAlgebra, generators=()) -> Subuniverse:
    gens = [int(g) for g in generators]
    for g in gens:
        if not 0 <= g < a.size:
            raise ValueError(f"generator {g} out of range 0..{a.size - 1}")
    return Subuniverse(a, tuple(sorted(_close(a, gens))))


def is_closed(a: FiniteAlgebra, elements) -> bool:
    s = np.array(sorted(set(elements)))
    for name, arity in a.signature.operations:
        vals = np.unique(a.tables[name][np.ix_(*[s] * arity)] if arity else a.tables[name])
        if not np.isin(vals, s).all():
            return False
    return True


def subuniverse(a: FiniteAlgebra, elements) -> Subuniverse:
    """Wrap an already-closed set; raises if it is not closed."""
    els = tuple(sorted(set(int(e) for e in elements)))
    if not els or not is_closed(a, els):
        raise ValueError(f"{list(els)} is not a subuniverse of {a.name}")
    return Subuniverse(a, els)


def all_subuniverses(a: FiniteAlgebra) -> list:
    """Every subuniverse, sorted by size then elements.  Small algebras only."""
    found = {subuniverse_generate(a, [i]).elements for i in a.universe}
    frontier = set(found)
    while frontier:
        new = set()
        for s in frontier:
            for t in list(found):
                u = subuniverse_generate(a, set(s) | set(t)).elements
                if u not in found:
                    new.add(u)
        found |= new
        frontier = new
    return [Subuniverse(a, s) for s in sorted(found, key=lambda s: (len(s), s))]


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple

    def __post_init__(self):
        if not self.is_homomorphism():
            raise ValueError("mapping is not a homomorphism")

    def __call__(self, i):
        return self.mapping[i]

    def image(self, elements):
        return sorted({self.mapping[i] for i in elements})

    def is_homomorphism(self):
        m = np.asarray(self.mapping)
        if len(m) != self.source.size or m.min() < 0 or m.max() >= self.target.size:
            return False
        for name, arity in self.source.signature.operations:
            ts, tt = self.source.tables[name], self.target.tables[name]
            if arity == 0:
                if m[int(ts)] != int(tt):
                    return False
                continue
            grids = _grids(self.source.size, arity)
            if not np.array_equal(m[ts], tt[tuple(m[g] for g in grids)]):
                return False
        return True

    def kernel_reps(self):
        """Least-id representative array of the kernel pair."""
        first = {}
        return tuple(first.setdefault(v, i) for i, v in enumerate(self.mapping))


def quotient(a: FiniteAlgebra, c):
    """Quotient ``a / c`` and the canonical surjection; classes are numbered by least element."""
    from .congruences import is_compatible

    if c.parent is not a or not is_compatible(a, c.rep):
        raise ValueError("not a congruence on this algebra")
    reps = sorted(set(c.rep))
    index = {r: k for k, r in enumerate(reps)}
    proj = np.array([index[r] for r in c.rep])
    rep_arr = np.array(reps)
    ops = []
    for name, arity in a.signature.operations:
        t = a.tables[name]
        if arity == 0:
            ops.append((name, 0, int(proj[int(t)])))
            continue
        ops.append((name, arity, proj[t[np.ix_(*[rep_arr] * arity)]]))
    q = make_algebra(f"{a.name}/~", len(reps), int(proj[a.zero]), ops, a.declared_properties)
    return q, AlgebraMap(a, q, tuple(int(i) for i in proj))
