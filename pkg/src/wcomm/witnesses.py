"""A term together with the assignment that makes it evaluate to a reported element."""

from __future__ import annotations

from dataclasses import dataclass

from .terms import BLOCKS, App, Term, Var, evaluate, substitute


def _order(v):
    return BLOCKS.index(v.block), v.index


@dataclass(frozen=True)
class Witness:
    term: Term
    assignment: tuple  # ((Var, id), ...) in w, x, y order

    @classmethod
    def make(cls, term, assignment: dict):
        """Keep only the variables the term uses, renumbered 1.. within each block."""
        used = sorted(term.variables(), key=_order)
        rename, counts, pairs = {}, dict.fromkeys(BLOCKS, 0), []
        for v in used:
            counts[v.block] += 1
            nv = Var(v.block, counts[v.block])
            rename[v] = nv
            pairs.append((nv, int(assignment[v])))
        return cls(substitute(term, rename), tuple(pairs))

    def evaluate(self, a) -> int:
        return evaluate(self.term, a, dict(self.assignment))

    @property
    def counts(self):
        out = dict.fromkeys(BLOCKS, 0)
        for v, _ in self.assignment:
            out[v.block] += 1
        return out["w"], out["x"], out["y"]

    def to_dict(self):
        return {
            "term": str(self.term),
            "variables": [str(v) for v, _ in self.assignment],
            "assignment": [val for _, val in self.assignment],
        }


def shifted(w: Witness, offsets: dict):
    """Rename variables by adding per-block offsets; returns (term, assignment dict)."""
    mapping = {v: Var(v.block, v.index + offsets[v.block]) for v, _ in w.assignment}
    return substitute(w.term, mapping), {mapping[v]: val for v, val in w.assignment}


def compose(op: str, children, extra=None) -> Witness:
    """Witness for ``op(child_1, ..)`` with the children's variables made disjoint."""
    offsets = dict.fromkeys(BLOCKS, 0)
    args, assignment = [], dict(extra or {})
    for v, _ in assignment.items():
        offsets[v.block] = max(offsets[v.block], v.index)
    for ch in children:
        t, asg = shifted(ch, offsets)
        args.append(t)
        assignment.update(asg)
        for v in asg:
            offsets[v.block] = max(offsets[v.block], v.index)
    return Witness.make(App(op, tuple(args)), assignment)


def plug(outer: Term, outer_assignment: dict, inner: dict) -> Witness:
    """Substitute witnesses for some variables of ``outer`` (``inner``: Var -> Witness)."""
    offsets = dict.fromkeys(BLOCKS, 0)
    assignment = {v: val for v, val in outer_assignment.items() if v not in inner}
    for v in assignment:
        offsets[v.block] = max(offsets[v.block], v.index)
    mapping = {}
    for v in sorted(inner, key=_order):
        t, asg = shifted(inner[v], offsets)
        mapping[v] = t
        assignment.update(asg)
        for u in asg:
            offsets[u.block] = max(offsets[u.block], u.index)
    return Witness.make(substitute(outer, mapping), assignment)
