import itertools

import pytest

import oracles
from wcomm import builders
from wcomm.algebra import all_subuniverses, subuniverse_generate
from wcomm.commutators import (SmithUndefined, WeightedCospan, centrality_check, cross_validate, divergence_search,
                               full_sub, higgins_commutator, huq_commutator, ring_weighted_commutator,
                               smith_commutator, smith_term_condition, weighted_commutator,
                               weighted_normal_commutator)
from wcomm.config import Limits
from wcomm.congruences import all_congruences, all_ideals, full, identity, is_normal, meet, zero_class
from wcomm.free import commutator_terms, identity_holds
from wcomm.terms import App, block_counts, substitute


def cospan(a, x, y, w=()):
    return WeightedCospan.generated(a, x, y, w)


def a3_of(s3):
    return [i for i in range(6) if s3.op("mul", s3.op("mul", i, i), i) == 0]


def is_commutator_term(a, t):
    z = App(a.signature.zero_op)
    xs = {v: z for v in t.variables() if v.block == "x"}
    ys = {v: z for v in t.variables() if v.block == "y"}
    return identity_holds(a, substitute(t, xs), z)[0] and identity_holds(a, substitute(t, ys), z)[0]


def assert_sound(res, c, check_terms=True):
    """Witnesses re-evaluate, use values from the right blocks, and are commutator terms."""
    a = c.parent
    blocks = {"w": set(c.w_sub), "x": set(c.x_sub), "y": set(c.y_sub)}
    assert res.witnesses_sound()
    for e, w in res.witnesses.items():
        assert w.evaluate(a) == e
        for v, val in w.assignment:
            assert val in blocks[v.block], (e, str(w.term), v, val)
        if check_terms and len(w.term.variables()) <= 5:
            assert is_commutator_term(a, w.term), str(w.term)


# -- worked examples -------------------------------------------------------------------

def test_z8_even_ideal(z8):
    c = cospan(z8, [2], [2])
    res = weighted_commutator(c)
    assert res.elements == {0, 4} and res.exact
    assert_sound(res, c)


@pytest.mark.parametrize("a", [builders.zn(8), builders.symmetric(3), builders.loop5(), builders.semilattice2()],
                         ids=lambda a: a.name)
def test_zero_x_gives_zero(a):
    for y in all_subuniverses(a):
        c = WeightedCospan(a, subuniverse_generate(a), y, full_sub(a))
        assert weighted_commutator(c).elements == {a.zero}
        assert weighted_normal_commutator(c).elements == {a.zero}


def test_abelian_group_all_zero():
    a = builders.cyclic(4)
    subs = all_subuniverses(a)
    for x, y, w in itertools.product(subs, repeat=3):
        c = WeightedCospan(a, x, y, w)
        assert weighted_commutator(c).elements == {0}
        assert centrality_check(c) == "central"


def test_f2t3_unit_pair(f2t3):
    c = cospan(f2t3, [1], [1])
    sub, norm = weighted_commutator(c), weighted_normal_commutator(c)
    assert sub.elements == {0, 1} and sub.exact
    assert norm.elements == set(range(8)) and norm.exact
    assert_sound(sub, c)
    assert_sound(norm, WeightedCospan(f2t3, c.x_sub, c.y_sub, full_sub(f2t3)), check_terms=False)


def test_collapse_over_ideal_triples():
    for a in (builders.zn(8), builders.poly_nilpotent(2, 3), builders.zn(6)):
        ideals = all_ideals(a)
        for x, y, w in itertools.product(ideals, repeat=3):
            if len(subuniverse_generate(a, set(x) | set(y) | set(w))) != a.size:
                continue
            c = WeightedCospan(a, x, y, w)
            assert weighted_commutator(c).elements == weighted_normal_commutator(c).elements


def test_higgins_s3(s3):
    transpositions = [i for i in range(1, 6) if s3.op("mul", i, i) == 0]
    x = subuniverse_generate(s3, [transpositions[0]])
    y = subuniverse_generate(s3, [transpositions[1]])
    mul, inv = s3.tables["mul"].tolist(), s3.tables["inv"].tolist()
    res = higgins_commutator(s3, x, y)
    assert res.elements == oracles.commutator_subgroup(mul, inv, x.elements, y.elements)
    assert huq_commutator(s3, x, y).elements == oracles.conjugate_closure(mul, inv, res.elements)


def test_higgins_abelian():
    a = builders.group_product(builders.cyclic(2), builders.cyclic(4))
    for x, y in itertools.product(all_subuniverses(a), repeat=2):
        assert higgins_commutator(a, x, y).elements == {0}


def test_higgins_z8_ring(z8):
    x = subuniverse_generate(z8, [2])
    assert higgins_commutator(z8, x, x).elements == {0, 4}


# -- Smith ---------------------------------------------------------------------------

def test_smith_trivial_cases(s3):
    for a in (s3, builders.quaternion()):
        for c in all_congruences(a):
            assert smith_commutator(a, identity(a), c) == identity(a)
            assert smith_commutator(a, c, identity(a)) == identity(a)
    a = builders.group_product(builders.cyclic(2), builders.cyclic(2))
    for al, be in itertools.product(all_congruences(a), repeat=2):
        assert smith_commutator(a, al, be) == identity(a)


def test_smith_s3_full(s3):
    s = smith_commutator(s3, full(s3), full(s3))
    assert zero_class(s).elements == tuple(a3_of(s3))
    assert len(s.classes()) == 2


@pytest.mark.parametrize("a", [builders.symmetric(3), builders.dihedral(4), builders.quaternion(), builders.zn(8),
                               builders.poly_nilpotent(2, 3), builders.loop5()], ids=lambda a: a.name)
def test_smith_matches_term_condition(a):
    congs = all_congruences(a)
    for al, be in itertools.product(congs, repeat=2):
        s = smith_commutator(a, al, be)
        assert s == smith_term_condition(a, al, be)
        assert s <= meet(al, be)


def test_smith_refuses_without_maltsev():
    a = builders.semilattice2()
    with pytest.raises(SmithUndefined):
        smith_commutator(a, full(a), full(a))


def test_term_condition_size_limit():
    a = builders.cyclic(9)
    with pytest.raises(ValueError):
        smith_term_condition(a, full(a), full(a))


# -- centrality, closed form, cross validation ---------------------------------------------

def test_centrality_examples(f2t3, s3):
    assert centrality_check(cospan(f2t3, [1], [1], range(8))) == "not_central"
    a3 = a3_of(s3)
    assert centrality_check(cospan(s3, a3, a3, range(6))) == "central"


def test_closed_form_examples(f2t3, z8):
    c = cospan(f2t3, [1], [1], range(8))
    assert ring_weighted_commutator(c).elements == set(range(8))
    xy = ring_weighted_commutator(cospan(f2t3, [1], [1])).elements
    assert xy == {0, 1}
    for a in (f2t3, z8):
        add, mul = a.tables["add"].tolist(), a.tables["mul"].tolist()
        ideals = all_ideals(a)
        for x, y in itertools.product(ideals, repeat=2):
            prod = oracles.ring_products(add, mul, x.elements, y.elements)
            for w in all_subuniverses(a):
                assert ring_weighted_commutator(WeightedCospan(a, x, y, w)).elements == prod


def test_closed_form_witnesses(f2t3):
    for x, y, w in itertools.product(all_subuniverses(f2t3), repeat=3):
        c = WeightedCospan(f2t3, x, y, w)
        for normal in (False, True):
            res = ring_weighted_commutator(c, normal=normal)
            assert res.witnesses_sound() and res.exact and res.method == "ring_closed_form"


def test_closed_form_refuses_groups(s3):
    with pytest.raises(ValueError):
        ring_weighted_commutator(cospan(s3, [1], [1]))


def test_cross_validate(s3, z8):
    a3 = a3_of(s3)
    rep = cross_validate(cospan(s3, a3, a3))
    assert rep["applicable"] and not rep["defect"]
    assert rep["values"]["smith"] == [0] and rep["values"]["term"]["value"] == [0]
    rep = cross_validate(cospan(z8, [2], [2]))
    assert rep["values"]["smith"] == [0, 4] and rep["values"]["ring"] == [0, 4] and not rep["defect"]
    assert cross_validate(cospan(builders.cyclic(6), [2], [3]))["values"]["smith"] == [0]
    transposition = next(i for i in range(1, 6) if s3.op("mul", i, i) == 0)
    assert not cross_validate(cospan(s3, [transposition], a3))["applicable"]


def test_divergence_examples(f2t3, s3):
    found = divergence_search(f2t3)
    unit = next(e for e in found if e["x"] == [0, 1] and e["y"] == [0, 1])
    assert unit["weight_zero"]["value"] == [0, 1]
    assert unit["weight_one"]["value"] == list(range(8))
    assert unit["all_exact"]
    assert divergence_search(builders.cyclic(4)) == []
    for e in divergence_search(s3):
        assert set(e["weight_zero"]["value"]) <= set(e["weight_one"]["value"])


def test_loop_huq_differs_from_weight_one():
    a = builders.loop5()
    found = divergence_search(a)
    assert [e["x"] for e in found] == [[0, 1], [0, 2], [0, 3], [0, 4]]
    for e in found:
        assert e["x"] == e["y"] and e["all_exact"]
        assert e["normal_weight_zero"]["value"] == [0]
        assert e["normal_weight_one"]["value"] == list(range(5))
    # L5 has no proper nontrivial normal subloop, so the gap needs non-normal X, Y
    assert [s.elements for s in all_subuniverses(a) if is_normal(a, s)] == [(0,), tuple(range(5))]


def test_divergence_weights_table(f2t3):
    found = divergence_search(f2t3, weights=True)
    assert all("by_weight" in e for e in found)


# -- engines ---------------------------------------------------------------------------

@pytest.mark.parametrize("a", [builders.cyclic(2), builders.cyclic(3), builders.zero_mult(3),
                               builders.group_product(builders.cyclic(2), builders.cyclic(2))],
                         ids=lambda a: a.name)
def test_engines_agree(a):
    for x, y, w in itertools.product(all_subuniverses(a), repeat=3):
        c = WeightedCospan(a, x, y, w)
        fib = weighted_commutator(c, engine="fiber")
        enum = weighted_commutator(c, bounds=(1, 1, 1), engine="enumerate", limits=Limits(max_work=10**7))
        assert fib.exact and enum.exact
        assert enum.elements == fib.elements
        assert_sound(fib, c)
        assert_sound(enum, c)


def test_enumerate_is_lower_bound_of_fiber(s3):
    for x, y in itertools.product(all_subuniverses(s3), repeat=2):
        c = WeightedCospan(s3, x, y, full_sub(s3))
        enum = weighted_commutator(c, bounds=(1, 1, 1), engine="enumerate", limits=Limits(max_work=10**7))
        assert enum.elements <= weighted_commutator(c).elements
        assert_sound(enum, c)


def test_enumerate_matches_free_filter(s3):
    from wcomm.commutators import _enumerate_values
    from wcomm.config import get_limits

    terms = commutator_terms(s3, 0, 1, 1)
    for x, y in itertools.product(all_subuniverses(s3), repeat=2):
        values = {int(e.vector[xv * 6 + yv]) for e in terms for xv in x for yv in y}
        got = _enumerate_values(s3, x.elements, y.elements, (0,), 0, 1, 1, get_limits())
        assert set(got) == values


def test_enumerate_on_semilattice():
    a = builders.semilattice2()
    c = cospan(a, [1], [1])
    res = weighted_commutator(c)
    assert res.engine == "enumerate" and res.elements == {0, 1} and res.exact
    assert "heuristic" in " ".join(res.notes)
    assert_sound(res, c)


def test_enumerate_cap_gives_lower_bound():
    a = builders.symmetric(3)
    c = cospan(a, range(6), range(6), range(6))
    res = weighted_commutator(c, bounds=(2, 2, 2), engine="enumerate", limits=Limits(max_size=50))
    assert res.status == "lower_bound" and res.bounds_used == (0, 1, 1)
    assert res.elements == {0, 3, 4}
    assert res.witnesses_sound()


def test_engine_errors(s3):
    with pytest.raises(ValueError):
        weighted_commutator(cospan(s3, [1], [1]), engine="magic")
    a = builders.semilattice2()
    with pytest.raises(SmithUndefined):
        weighted_commutator(cospan(a, [1], [1]), engine="fiber")


def test_cospan_parent_check(s3, z8):
    with pytest.raises(ValueError):
        WeightedCospan(s3, subuniverse_generate(s3), subuniverse_generate(z8), subuniverse_generate(s3))


def test_result_json_shape(z8):
    d = weighted_commutator(cospan(z8, [2], [2])).to_dict()
    assert set(d) >= {"value", "status", "bounds_used", "method", "witnesses"}
    assert d["value"] == [0, 4] and d["method"] == "term_enumeration"
    w = d["witnesses"]["4"]
    assert set(w) == {"term", "variables", "assignment"}
    assert len(w["variables"]) == len(w["assignment"])


def test_fiber_bounds_used_cover_witnesses(f2t3):
    res = weighted_commutator(cospan(f2t3, [1], [1], range(8)))
    for w in res.witnesses.values():
        assert all(u <= b for u, b in zip(block_counts(w.term), res.bounds_used))


def test_swapped_and_reweighted(s3):
    c = cospan(s3, [1], [2], [3])
    assert c.swapped().x_sub == c.y_sub and c.reweighted(c.x_sub).w_sub == c.x_sub
