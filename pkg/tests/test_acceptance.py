"""Acceptance gate: one test per criterion, each timed from cold caches.

Every test records a PASS/FAIL line that is printed in the terminal summary.
Results produced along the way are kept so the last criterion can audit all of
their witnesses.
"""

import functools
import itertools
import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import oracles
from conftest import record
from wcomm import builders, clear_caches
from wcomm.algebra import all_subuniverses, dump
from wcomm.commutators import (WeightedCospan, full_sub, smith_commutator, weighted_commutator,
                               weighted_normal_commutator)
from wcomm.congruences import congruence_from_normal, full, is_normal, zero_class
from wcomm.free import maltsev_term
from wcomm.terms import evaluate, parse_term
from wcomm.verify import hard_failures, verify_algebra

AUDIT = []  # (label, cospan, result)


def timed(fn):
    @functools.wraps(fn)
    def run():
        clear_caches()
        start = time.perf_counter()
        out = fn()
        return out, time.perf_counter() - start
    return functools.cache(run)


def _lists(a):
    return {name: t.tolist() for name, t in a.tables.items() if t.ndim}


@timed
def ring_closed_form():
    bad = []
    for a in (builders.zn(8), builders.poly_nilpotent(2, 3), builders.zero_mult(6)):
        t = _lists(a)
        subs = all_subuniverses(a)
        everything = range(a.size)
        for x, y, w in itertools.product(subs, repeat=3):
            c = WeightedCospan(a, x, y, w)
            sub = weighted_commutator(c, bounds=(2, 2, 2))
            norm = weighted_normal_commutator(c, bounds=(2, 2, 2))
            AUDIT.append((f"ring {a.name}", c, sub))
            want_sub = oracles.ring_closed_form(t["add"], t["mul"], x, y, w)
            want_norm = oracles.ring_closed_form(t["add"], t["mul"], x, y, everything)
            if not (sub.exact and sub.elements == want_sub):
                bad.append((a.name, x.elements, y.elements, w.elements, "sub"))
            if not (norm.exact and norm.elements == want_norm):
                bad.append((a.name, x.elements, y.elements, w.elements, "normal"))
    return bad


@timed
def group_commutator():
    bad, pairs = [], 0
    for g in builders.groups_up_to_8():
        mul, inv = g.tables["mul"].tolist(), g.tables["inv"].tolist()
        zero = all_subuniverses(g)[0]
        for x, y in itertools.product(all_subuniverses(g), repeat=2):
            pairs += 1
            c = WeightedCospan(g, x, y, zero)
            sub, norm = weighted_commutator(c), weighted_normal_commutator(c)
            AUDIT.append((f"group {g.name}", c, sub))
            want = oracles.commutator_subgroup(mul, inv, x.elements, y.elements)
            if not (sub.exact and sub.elements == want):
                bad.append((g.name, x.elements, y.elements, "sub"))
            if not (norm.exact and norm.elements == oracles.conjugate_closure(mul, inv, want)):
                bad.append((g.name, x.elements, y.elements, "normal"))
    return bad, pairs


@timed
def smith_bridge():
    bad, pairs = [], 0
    for g in builders.groups_up_to_8():
        normals = [s for s in all_subuniverses(g) if is_normal(g, s)]
        for x, y in itertools.product(normals, repeat=2):
            pairs += 1
            c = WeightedCospan(g, x, y, full_sub(g))
            term = weighted_commutator(c)
            AUDIT.append((f"smith {g.name}", c, term))
            s = smith_commutator(g, congruence_from_normal(g, x), congruence_from_normal(g, y))
            if not (term.exact and term.elements == set(zero_class(s).elements)):
                bad.append((g.name, x.elements, y.elements))
    s3 = builders.symmetric(3)
    nabla_nabla = len(zero_class(smith_commutator(s3, full(s3), full(s3))))
    return bad, pairs, nabla_nabla


@timed
def invariant_suite():
    failures, skipped = {}, []
    for a in builders.corpus():
        checks = verify_algebra(a)
        bad = hard_failures(checks)
        if bad:
            failures[a.name] = {c.name: c.violations for c in bad}
        skipped += [f"{a.name}:{c.name}" for c in checks if c.skipped]
    return failures, skipped


@timed
def divergence_cli():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "f2t3.json"
        dump(builders.poly_nilpotent(2, 3), path)
        proc = subprocess.run([sys.executable, "-m", "wcomm", "search-divergence", str(path), "--json",
                               "--no-timestamp"], capture_output=True, text=True, check=False)
    return proc.returncode, json.loads(proc.stdout) if proc.returncode == 0 else proc.stderr


@timed
def maltsev_decision():
    found = {a.name: maltsev_term(a).found for a in builders.groups_up_to_8() + builders.corpus_rings()}
    return found, maltsev_term(builders.semilattice2()).status


def test_criterion_1_ring_closed_form():
    bad, secs = ring_closed_form()
    ok = not bad and secs < 60
    record(1, "ring closed form", ok, f"{len(bad)} mismatches, {secs:.1f}s (limit 60s)")
    assert not bad, bad[:5]
    assert secs < 60


def test_criterion_2_group_commutator():
    (bad, pairs), secs = group_commutator()
    ok = not bad and secs < 120
    record(2, "classical group commutator", ok, f"{pairs} subgroup pairs, {len(bad)} mismatches, {secs:.1f}s "
                                                f"(limit 120s)")
    assert not bad, bad[:5]
    assert secs < 120


def test_criterion_3_smith_bridge():
    (bad, pairs, nabla), secs = smith_bridge()
    ok = not bad and nabla == 3 and secs < 300
    record(3, "Smith bridge", ok, f"{pairs} normal pairs, {len(bad)} mismatches, S3 zero class {nabla}, "
                                  f"{secs:.1f}s (limit 300s)")
    assert not bad, bad[:5]
    assert nabla == 3
    assert secs < 300


def test_criterion_4_invariant_suite():
    (failures, skipped), secs = invariant_suite()
    ok = not failures and secs < 600
    record(4, "structural invariant suite", ok, f"{len(builders.corpus())} algebras, {len(failures)} failing, "
                                                f"{len(skipped)} skipped checks, {secs:.1f}s (limit 600s)")
    assert not failures, failures
    assert secs < 600


def test_criterion_5_divergence_witness():
    (code, doc), secs = divergence_cli()
    assert code == 0, doc
    hit = [e for e in doc["result"] if e["x"] == [0, 1] and e["y"] == [0, 1]]
    ok = (len(hit) == 1 and hit[0]["weight_zero"]["value"] == [0, 1]
          and hit[0]["weight_one"]["value"] == list(range(8))
          and hit[0]["weight_zero"]["status"] == hit[0]["weight_one"]["status"] == "exact" and secs < 30)
    record(5, "divergence witness", ok, f"{len(doc['result'])} diverging pairs, {secs:.1f}s (limit 30s)")
    assert ok, hit


def test_criterion_6_maltsev_decision():
    (found, semilattice), secs = maltsev_decision()
    missing = [n for n, f in found.items() if not f]
    ok = not missing and semilattice == "absent" and secs < 10
    record(6, "Mal'tsev decision", ok, f"{len(found)} groups and rings found, SL2 {semilattice}, "
                                       f"{secs:.1f}s (limit 10s)")
    assert not missing, missing
    assert semilattice == "absent"
    assert secs < 10


def test_criterion_7_witness_soundness():
    for fn in (ring_closed_form, group_commutator, smith_bridge):
        fn()
    elements = unsound = 0
    for label, c, res in AUDIT:
        blocks = {"w": set(c.w_sub), "x": set(c.x_sub), "y": set(c.y_sub)}
        for e in res.value:
            elements += 1
            w = res.witnesses.get(e)
            if w is None or w.evaluate(c.parent) != e or any(val not in blocks[v.block] for v, val in w.assignment):
                unsound += 1
    (code, doc), _ = divergence_cli()
    f2t3 = builders.poly_nilpotent(2, 3)
    for entry in doc["result"]:
        for key in ("weight_zero", "weight_one", "normal_weight_zero", "normal_weight_one"):
            r = entry[key]
            for e in r["value"]:
                elements += 1
                w = r["witnesses"].get(str(e))
                if w is None or evaluate(parse_term(w["term"]), f2t3, dict(zip(w["variables"], w["assignment"]))) != e:
                    unsound += 1
    ok = elements > 0 and unsound == 0
    record(7, "soundness under truncation", ok, f"{elements} reported elements, {unsound} without a sound witness")
    assert ok
