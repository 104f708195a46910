import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wcomm import builders
from wcomm.closure import assignment_grid
from wcomm.config import CapExceeded, Limits
from wcomm.free import (certificate_holds, commutator_terms, free_algebra, identity_holds, maltsev_term,
                        protomodularity_certificate)
from wcomm.terms import (App, EvaluationError, Var, block_counts, evaluate, evaluate_vector, fold_constants,
                         parse_term, substitute, var)

ALGEBRAS = [builders.symmetric(3), builders.zn(6), builders.loop5(), builders.poly_nilpotent(2, 3)]
VARS = [Var(b, i) for b in "wxy" for i in (1, 2)]


def terms(a, depth=3):
    ops = [(n, r) for n, r in a.signature.operations]
    leaves = st.sampled_from(VARS + [App(n) for n, r in ops if r == 0])

    def extend(children):
        return st.one_of(*[st.tuples(*[children] * r).map(lambda args, n=n: App(n, args))
                           for n, r in ops if r > 0])

    return st.recursive(leaves, extend, max_leaves=8)


@st.composite
def algebra_and_term(draw):
    a = draw(st.sampled_from(ALGEBRAS))
    return a, draw(terms(a))


def assignments(a):
    return st.fixed_dictionaries({v: st.integers(0, a.size - 1) for v in VARS})


@given(algebra_and_term(), st.data())
def test_evaluate_compositional(at, data):
    a, t = at
    asg = data.draw(assignments(a))
    if isinstance(t, App) and t.args:
        children = [evaluate(c, a, asg) for c in t.args]
        assert evaluate(t, a, asg) == a.op(t.op, *children)


@given(algebra_and_term(), st.data())
def test_vector_matches_scalar(at, data):
    a, t = at
    asgs = [data.draw(assignments(a)) for _ in range(3)]
    env = {v: np.array([g[v] for g in asgs]) for v in VARS}
    vec = np.broadcast_to(evaluate_vector(t, a, env), (3,))
    assert vec.tolist() == [evaluate(t, a, g) for g in asgs]


@given(algebra_and_term())
def test_parse_round_trip(at):
    _, t = at
    assert parse_term(str(t)) == t


@given(algebra_and_term(), st.data())
def test_fold_preserves_operation(at, data):
    a, t = at
    folded = fold_constants(t, a)
    assert folded.size <= t.size
    for _ in range(5):
        asg = data.draw(assignments(a))
        assert evaluate(folded, a, asg) == evaluate(t, a, asg)


def test_parse_examples():
    t = parse_term("mul(inv(x1), mul(inv(y1), mul(x1, y1)))")
    assert block_counts(t) == (0, 1, 1)
    assert str(t) == "mul(inv(x1), mul(inv(y1), mul(x1, y1)))"
    assert parse_term("e") == App("e")
    assert parse_term("w3") == var("w3")
    for bad in ("mul(x1", "mul(x1,)", "x1 x2", "mul(x1, y1))"):
        with pytest.raises((ValueError, IndexError)):
            parse_term(bad)


def test_evaluation_errors(s3):
    with pytest.raises(EvaluationError, match="unbound"):
        evaluate(parse_term("mul(x1, y1)"), s3, {"x1": 0})
    with pytest.raises(EvaluationError, match="arity"):
        evaluate(parse_term("mul(x1)"), s3, {"x1": 0})
    with pytest.raises(EvaluationError, match="signature"):
        evaluate(parse_term("add(x1, x1)"), s3, {"x1": 0})


def test_substitute_simultaneous():
    t = parse_term("f(x1, y1)")
    swapped = substitute(t, {var("x1"): var("y1"), var("y1"): var("x1")})
    assert str(swapped) == "f(y1, x1)"


@pytest.mark.parametrize("a,g,size", [
    (builders.cyclic(2), 1, 2),
    (builders.cyclic(3), 2, 9),
    (builders.symmetric(3), 1, 6),
    (builders.semilattice2(), 3, 8),
    (builders.zn(2), 1, 2),
    (builders.pointed_set(2), 2, 3),
])
def test_free_algebra_sizes(a, g, size):
    els = free_algebra(a, g)
    assert len(els) == size
    grid = assignment_grid(a.size, g)
    env = {Var("x", i + 1): grid[:, i] for i in range(g)}
    for e in els:
        assert np.array_equal(np.broadcast_to(evaluate_vector(e.witness, a, env), (len(grid),)), e.vector)


def test_free_algebra_canonical_order():
    els = free_algebra(builders.cyclic(3), 1)
    assert [str(e.witness) for e in els][:2] == ["x1", "e"]
    sizes = [e.witness.size for e in els]
    assert sizes == sorted(sizes)


def test_free_algebra_cap():
    with pytest.raises(CapExceeded):
        free_algebra(builders.symmetric(3), 3, Limits(max_size=100))
    with pytest.raises(CapExceeded):
        free_algebra(builders.symmetric(3), 2, Limits(max_free=10))


def test_identity_holds(s3):
    assoc = (parse_term("mul(x1, mul(x2, x3))"), parse_term("mul(mul(x1, x2), x3)"))
    assert identity_holds(s3, *assoc) == (True, None)
    ok, counter = identity_holds(s3, parse_term("mul(x1, x2)"), parse_term("mul(x2, x1)"))
    assert not ok
    assert s3.op("mul", counter["x1"], counter["x2"]) != s3.op("mul", counter["x2"], counter["x1"])
    assert identity_holds(builders.cyclic(4), parse_term("mul(x1, x2)"), parse_term("mul(x2, x1)"))[0]
    assert not identity_holds(builders.loop5(), *assoc)[0]


def _is_commutator_term(a, t):
    k, m, n = block_counts(t)
    z = App(a.signature.zero_op)
    kill_x = {Var("x", i + 1): z for i in range(m)}
    kill_y = {Var("y", i + 1): z for i in range(n)}
    return identity_holds(a, substitute(t, kill_x), z)[0] and identity_holds(a, substitute(t, kill_y), z)[0]


def test_commutator_terms_abelian_are_zero():
    for a in (builders.cyclic(4), builders.zero_mult(4)):
        els = commutator_terms(a, 1, 1, 1)
        assert all((e.vector == a.zero).all() for e in els)


def test_commutator_terms_s3():
    a = builders.symmetric(3)
    els = commutator_terms(a, 0, 1, 1, w_mode="restricted")
    assert len(els) > 1
    for e in els:
        assert _is_commutator_term(a, e.witness)
    values = {int(v) for e in els for v in e.vector}
    assert len(values) == 3  # values of [x, y]-type terms sweep out A_3


def test_commutator_terms_bad_mode():
    with pytest.raises(ValueError):
        commutator_terms(builders.cyclic(2), 0, 1, 1, w_mode="sometimes")


@pytest.mark.parametrize("a", builders.groups_up_to_8() + builders.corpus_rings() + [builders.loop5()],
                         ids=lambda a: a.name)
def test_maltsev_found(a):
    m = maltsev_term(a)
    assert m.found
    x, y = Var("x", 1), Var("x", 2)
    assert identity_holds(a, substitute(m.term, {Var("x", 2): y, Var("x", 3): y}), x)[0]
    assert identity_holds(a, substitute(m.term, {Var("x", 1): y, Var("x", 2): y, Var("x", 3): x}), x)[0]


@pytest.mark.parametrize("a", [builders.semilattice2(), builders.pointed_set(2)], ids=lambda a: a.name)
def test_maltsev_absent(a):
    assert maltsev_term(a).status == "absent"


def test_maltsev_unknown_under_cap():
    m = maltsev_term(builders.symmetric(3), Limits(max_free=5))
    assert m.status == "unknown" and m.reason


@pytest.mark.parametrize("a", builders.groups_up_to_8() + builders.corpus_rings(), ids=lambda a: a.name)
def test_protomodularity_j1(a):
    cert = protomodularity_certificate(a)
    assert cert.status == "found" and cert.j == 1
    assert certificate_holds(a, cert)


@pytest.mark.parametrize("a", [builders.semilattice2(), builders.pointed_set(2)], ids=lambda a: a.name)
def test_protomodularity_inconclusive(a):
    assert protomodularity_certificate(a).status == "inconclusive"


def test_loop_identities():
    a = builders.loop5()
    x, y = "x1", "x2"
    laws = [
        (f"mul(e, {x})", x), (f"mul({x}, e)", x),
        (f"mul({x}, ldiv({x}, {y}))", y), (f"ldiv({x}, mul({x}, {y}))", y),
        (f"mul(rdiv({y}, {x}), {x})", y), (f"rdiv(mul({y}, {x}), {x})", y),
    ]
    for left, right in laws:
        assert identity_holds(a, parse_term(left), parse_term(right))[0], left


def test_assignment_grid():
    g = assignment_grid(3, 2)
    assert g.tolist() == [list(t) for t in itertools.product(range(3), repeat=2)]
    assert assignment_grid(4, 0).shape == (1, 0)
