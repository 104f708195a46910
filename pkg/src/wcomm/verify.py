"""Structural invariants of the weighted commutators, checked exhaustively on one algebra."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import Subuniverse, all_subuniverses, quotient, subuniverse_generate
from .commutators import (DEFAULT_BOUNDS, SmithUndefined, WeightedCospan, full_sub, ring_weighted_commutator,
                          smith_commutator, weighted_commutator, weighted_normal_commutator)
from .congruences import all_congruences, all_ideals, congruence_from_normal, is_normal, meet, zero_class
from .free import maltsev_term

MAX_VIOLATIONS = 20


@dataclass
class Check:
    name: str
    hard: bool
    cases: int = 0
    violations: list = field(default_factory=list)
    skipped: str = ""

    @property
    def passed(self):
        return not self.violations

    def fail(self, msg):
        if len(self.violations) < MAX_VIOLATIONS:
            self.violations.append(msg)
        else:
            self.violations[-1] = f"... and more (last: {msg})"

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "hard": self.hard, "cases": self.cases,
                "violations": self.violations, "skipped": self.skipped}


def enforced(a) -> bool:
    """Whether semi-abelian consequences are hard failures for this algebra."""
    props = a.declared_properties
    names = set(a.tables)
    group_sig = {"mul", "inv"} <= names
    ring_sig = {"add", "neg", "mul"} <= names
    return "semi_abelian" in props or group_sig or ring_sig


class Table:
    """All subobject and normal commutators of one algebra, computed once."""

    def __init__(self, a, bounds=DEFAULT_BOUNDS, engine="auto", subs=None):
        self.a = a
        self.bounds = bounds
        self.engine = engine
        self.subs = subs if subs is not None else all_subuniverses(a)
        self._sub, self._norm = {}, {}

    def sub(self, x, y, w):
        key = (x.elements, y.elements, w.elements)
        if key not in self._sub:
            self._sub[key] = weighted_commutator(WeightedCospan(self.a, x, y, w), self.bounds, self.engine)
        return self._sub[key]

    def norm(self, x, y, w):
        key = (x.elements, y.elements, w.elements)
        if key not in self._norm:
            self._norm[key] = weighted_normal_commutator(WeightedCospan(self.a, x, y, w), self.bounds, self.engine)
        return self._norm[key]

    def triples(self):
        return itertools.product(self.subs, repeat=3)


def _fmt(x, y, w):
    return f"X={list(x.elements)} Y={list(y.elements)} W={list(w.elements)}"


def check_witnesses(t: Table) -> Check:
    chk = Check("witness_soundness", True)
    for x, y, w in t.triples():
        for kind, res in (("sub", t.sub(x, y, w)), ("normal", t.norm(x, y, w))):
            chk.cases += 1
            if not res.witnesses_sound():
                chk.fail(f"{kind} {_fmt(x, y, w)}: some element lacks a re-evaluating witness")
    return chk


def check_monotone(t: Table, hard) -> Check:
    chk = Check("monotone_weight_chain", hard)
    top = full_sub(t.a)
    for x, y in itertools.product(t.subs, repeat=2):
        for w1, w2 in itertools.product(t.subs, repeat=2):
            if not w1 <= w2:
                continue
            for kind, f in (("sub", t.sub), ("normal", t.norm)):
                chk.cases += 1
                r1, r2, r_top = f(x, y, w1), f(x, y, w2), f(x, y, top)
                if not (r1.elements <= r2.elements <= r_top.elements):
                    chk.fail(f"{kind} X={list(x.elements)} Y={list(y.elements)} W={list(w1.elements)} <= "
                             f"W'={list(w2.elements)}: {sorted(r1.elements)} / {sorted(r2.elements)} / {sorted(r_top.elements)}")
    return chk


def check_normal_closure(t: Table, hard) -> Check:
    """The normal commutator is the smallest ideal containing the subobject one (ideal scan)."""
    chk = Check("normal_is_normal_closure", hard)
    ideals = all_ideals(t.a)
    for x, y, w in t.triples():
        chk.cases += 1
        sub = t.sub(x, y, w).elements
        containing = [i for i in ideals if sub <= set(i.elements)]
        smallest = min(containing, key=len)
        if any(not set(smallest.elements) <= set(i.elements) for i in containing):
            chk.fail(f"{_fmt(x, y, w)}: no smallest ideal above {sorted(sub)}")
        elif t.norm(x, y, w).elements != set(smallest.elements):
            chk.fail(f"{_fmt(x, y, w)}: normal {sorted(t.norm(x, y, w).elements)} != {list(smallest.elements)}")
    return chk


def check_symmetry(t: Table, hard) -> Check:
    chk = Check("symmetry", hard)
    for x, y, w in t.triples():
        chk.cases += 1
        if t.sub(x, y, w).elements != t.sub(y, x, w).elements:
            chk.fail(f"{_fmt(x, y, w)}: [X,Y] != [Y,X]")
    return chk


def check_collapse(t: Table, hard) -> Check:
    chk = Check("ideal_determined_collapse", hard)
    for x, y, w in t.triples():
        generates = len(subuniverse_generate(t.a, set(x) | set(y) | set(w))) == t.a.size
        if not generates:
            continue
        chk.cases += 1
        if t.sub(x, y, w).elements != t.norm(x, y, w).elements:
            chk.fail(f"{_fmt(x, y, w)}: W u X u Y generates A but N[X,Y] != [X,Y]")
    return chk


def check_surjections(t: Table, hard) -> Check:
    chk = Check("surjection_preservation", hard)
    a = t.a
    for theta in all_congruences(a):
        if len(theta.classes()) == a.size:
            continue
        q_alg, q = quotient(a, theta)
        qt = Table(q_alg, t.bounds, t.engine, subs=[])

        def image(s):
            return Subuniverse(q_alg, tuple(q.image(s.elements)))

        for x, y, w in t.triples():
            for kind, f, fq in (("sub", t.sub, qt.sub), ("normal", t.norm, qt.norm)):
                left, right = f(x, y, w), fq(image(x), image(y), image(w))
                if not (left.exact and right.exact):
                    continue
                chk.cases += 1
                if set(q.image(left.elements)) != right.elements:
                    chk.fail(f"{kind} {_fmt(x, y, w)} theta={theta.classes()}: "
                             f"q(value)={q.image(left.elements)} vs {sorted(right.elements)}")
    return chk


def check_smith(t: Table, hard) -> list:
    a = t.a
    le = Check("smith_below_meet", True)
    bridge = Check("smith_bridge", hard)
    if not maltsev_term(a).found:
        le.skipped = bridge.skipped = "no Mal'tsev term"
        return [le, bridge]
    congs = all_congruences(a)
    for alpha, beta in itertools.product(congs, repeat=2):
        le.cases += 1
        try:
            s = smith_commutator(a, alpha, beta)
        except (SmithUndefined, AssertionError) as e:
            le.fail(f"{alpha.classes()} , {beta.classes()}: {e}")
            continue
        if not s <= meet(alpha, beta):
            le.fail(f"{alpha.classes()} , {beta.classes()}: not below the meet")
    top = full_sub(a)
    normals = [s for s in t.subs if is_normal(a, s)]
    for x, y in itertools.product(normals, repeat=2):
        res = t.sub(x, y, top)
        if not res.exact:
            continue
        bridge.cases += 1
        s = smith_commutator(a, congruence_from_normal(a, x), congruence_from_normal(a, y))
        if set(zero_class(s).elements) != res.elements:
            bridge.fail(f"X={list(x.elements)} Y={list(y.elements)}: smith {list(zero_class(s).elements)} "
                        f"!= term {sorted(res.elements)}")
    return [le, bridge]


def check_ring(t: Table) -> Check:
    chk = Check("ring_closed_form", True)
    if "commutative_ring" not in t.a.declared_properties:
        chk.skipped = "not a commutative ring"
        return chk
    for x, y, w in t.triples():
        c = WeightedCospan(t.a, x, y, w)
        for kind, f, closed in (("sub", t.sub, ring_weighted_commutator(c)),
                                ("normal", t.norm, ring_weighted_commutator(c, normal=True))):
            res = f(x, y, w)
            if not res.exact:
                continue
            chk.cases += 1
            if res.elements != closed.elements:
                chk.fail(f"{kind} {_fmt(x, y, w)}: term {sorted(res.elements)} != closed form {sorted(closed.elements)}")
    return chk


def verify_algebra(a, bounds=DEFAULT_BOUNDS, engine="auto", quotients=True) -> list:
    """Run every invariant; returns a list of :class:`Check`."""
    hard = enforced(a)
    t = Table(a, bounds, engine)
    checks = [
        check_witnesses(t),
        check_monotone(t, True),
        check_normal_closure(t, True),
        check_symmetry(t, True),
        check_collapse(t, hard),
    ]
    if quotients:
        checks.append(check_surjections(t, hard))
    checks += check_smith(t, hard)
    checks.append(check_ring(t))
    return checks


def hard_failures(checks) -> list:
    return [c for c in checks if c.hard and not c.passed]
