"""Terms over a signature, with variables sorted into w-, x- and y-blocks.

Terms are immutable trees.  ``str(t)`` gives prefix notation such as
``mul(inv(x1), mul(inv(y1), mul(x1, y1)))``; :func:`parse_term` reads it back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

BLOCKS = ("w", "x", "y")


@dataclass(frozen=True)
class Var:
    block: str
    index: int  # 1-based

    def __str__(self):
        return f"{self.block}{self.index}"

    @property
    def size(self):
        return 1

    def variables(self):
        return frozenset([self])


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.op
        return f"{self.op}({', '.join(str(a) for a in self.args)})"

    @cached_property
    def size(self):
        return 1 + sum(a.size for a in self.args)

    def variables(self):
        out = frozenset()
        for a in self.args:
            out |= a.variables()
        return out


Term = Var | App


def var(name: str) -> Var:
    """``var("x2")`` -> Var("x", 2)."""
    m = re.fullmatch(r"([wxy])(\d+)", name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    return Var(m.group(1), int(m.group(2)))


def block_counts(t: Term) -> tuple[int, int, int]:
    """Largest index used in each of the w, x, y blocks."""
    counts = dict.fromkeys(BLOCKS, 0)
    for v in t.variables():
        counts[v.block] = max(counts[v.block], v.index)
    return counts["w"], counts["x"], counts["y"]


def substitute(t: Term, mapping: dict) -> Term:
    if isinstance(t, Var):
        return mapping.get(t, t)
    return App(t.op, tuple(substitute(a, mapping) for a in t.args))


_TOKEN = re.compile(r"\s*([A-Za-z_0-9\\/+\-*.]+|[(),])")


def parse_term(text: str) -> Term:
    tokens = _TOKEN.findall(text)
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot tokenize {text!r}")
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of term")
        name = tokens[pos]
        pos += 1
        if pos < len(tokens) and tokens[pos] == "(":
            pos += 1
            args = [parse()]
            while tokens[pos] == ",":
                pos += 1
                args.append(parse())
            if tokens[pos] != ")":
                raise ValueError(f"expected ')' at token {pos}")
            pos += 1
            return App(name, tuple(args))
        if re.fullmatch(r"[wxy]\d+", name):
            return var(name)
        return App(name)

    t = parse()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return t


class EvaluationError(ValueError):
    pass


def evaluate(t: Term, a, assignment: dict) -> int:
    """Value of ``t`` in algebra ``a`` with variables bound by ``assignment``.

    ``assignment`` maps Var (or its string name) to an element id.
    """
    env = {(var(k) if isinstance(k, str) else k): v for k, v in assignment.items()}

    def ev(s):
        if isinstance(s, Var):
            try:
                return env[s]
            except KeyError:
                raise EvaluationError(f"unbound variable {s}") from None
        table = _table(a, s)
        return int(table[tuple(ev(c) for c in s.args)])

    return ev(t)


def evaluate_vector(t: Term, a, env: dict) -> np.ndarray:
    """Evaluate ``t`` componentwise; ``env`` maps Var -> integer arrays of equal shape."""
    shape = np.broadcast_shapes(*(np.shape(v) for v in env.values())) if env else ()
    memo = {}

    def ev(s):
        if s in memo:
            return memo[s]
        if isinstance(s, Var):
            if s not in env:
                raise EvaluationError(f"unbound variable {s}")
            out = np.broadcast_to(env[s], shape)
        else:
            table = _table(a, s)
            out = table[tuple(ev(c) for c in s.args)] if s.args else np.full(shape, int(table))
        memo[s] = out
        return out

    return np.asarray(ev(t))


def _table(a, s: App):
    try:
        table = a.tables[s.op]
    except KeyError:
        raise EvaluationError(f"operation {s.op!r} not in signature") from None
    if table.ndim != len(s.args):
        raise EvaluationError(f"{s.op} has arity {table.ndim}, got {len(s.args)} arguments")
    return table


def fold_constants(t: Term, a, max_vars: int = 4) -> Term:
    """Shrink ``t`` without changing the term operation it induces on ``a``.

    Subterms that are identically zero become the zero constant, and a node that
    always equals one of its arguments is replaced by that argument.  Only
    subterms with at most ``max_vars`` variables are tested (exhaustively), so
    the result is equal to ``t`` as an identity of V(a).
    """
    zero = App(a.signature.zero_op)

    def values(s, vs):
        if not vs:
            return np.asarray(evaluate(s, a, {}))
        grids = np.meshgrid(*[np.arange(a.size)] * len(vs), indexing="ij")
        return evaluate_vector(s, a, dict(zip(vs, grids)))

    def fold(s):
        if isinstance(s, Var) or not s.args:
            return s
        s = App(s.op, tuple(fold(c) for c in s.args))
        vs = sorted(s.variables(), key=lambda v: (v.block, v.index))
        if len(vs) > max_vars:
            return s
        here = values(s, vs)
        if (here == a.zero).all():
            return zero
        for c in s.args:
            if np.array_equal(np.broadcast_to(values(c, vs), here.shape), here):
                return c
        return s

    return fold(t)
