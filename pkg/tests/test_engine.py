import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gsb import engine
from gsb.engine import (CERTIFIED, Presentation, RewriteSystem, check_condition_I, check_condition_II,
                        compositions_of, find_compositions, irr_enumerate, is_trivial, minimalize,
                        normal_form, reduce, shirshov_complete)
from gsb.orders import DegLex
from gsb.words import Polynomial, word

from conftest import s3_presentation, z2_full_base
from oracles import monoid_classes, perm_compose

PERM = {"x": (1, 0, 2), "y": (0, 2, 1)}


def perm_of(w):
    p = (0, 1, 2)
    for c in w:
        p = perm_compose(p, PERM[c])
    return p


def test_rules_are_monic_with_ordered_leads():
    S = RewriteSystem([Polynomial({("x",): 2, ("y", "y"): -4})], DegLex("xy"))
    assert S.leads == (("y", "y"),)
    assert S.rules[0].coeff(("y", "y")) == 1
    assert S.rules[0].coeff(("x",)) == Fraction(-1, 2)
    with pytest.raises(ValueError):
        RewriteSystem([Polynomial({(): 1})], DegLex("x"))


def test_intersection_compositions_of_a_power():
    S = Presentation(("x",), [("x x x", "1")]).system()
    comps = find_compositions(S)
    assert [c.w for c in comps] == [word("x x x x"), word("x x x x x")]
    assert all(c.kind == "intersection" and not c.value for c in comps)


def test_inclusion_composition():
    S = RewriteSystem.from_relations([("x y x", "1"), ("y", "x")], DegLex("xy"))
    comps = compositions_of(S, 0, 1)
    assert [(c.kind, c.a, c.b) for c in comps] == [("inclusion", ("x",), ("x",))]
    assert comps[0].value == Polynomial({("x", "x", "x"): 1, (): -1})
    assert compositions_of(S, 1, 0) == []


def test_no_composition_for_commutation():
    S = RewriteSystem.from_relations([("y x", "x y")], DegLex("xy"))
    assert find_compositions(S) == []


def test_reduction_trace_replays():
    S = s3_presentation().system()
    f = Polynomial({word("y x y x y"): 2, word("y y"): 1})
    tr = reduce(f, S)
    assert tr.replay(S) == tr.remainder
    assert all(S.is_irreducible(w) for w in tr.remainder.words())
    total = Polynomial()
    for c, a, i, b in tr.presentation(S):
        total = total + S.rules[i].mul_context(a, b).scale(c)
    assert f - total == tr.remainder


def test_s3_completion_matches_monoid_quotient():
    P = s3_presentation()
    res = shirshov_complete(P.system())
    assert res.status == "complete" and res.basis.status == CERTIFIED
    irr = irr_enumerate(res.basis, 8)
    oracle = monoid_classes(P.letters, P.relations, 6)
    assert len(irr) == len(oracle) == 6
    # the normal forms are pairwise distinct permutations
    assert len({perm_of(w) for w in irr}) == 6
    for w in [word("y x y x"), word("x y x y x y"), word("y y x")]:
        assert perm_of(normal_form(w, res.basis)) == perm_of(w)


def test_completion_adds_rules():
    P = Presentation(("x", "y"), [("x x", "1"), ("y y y", "1"), ("x y x y", "1")])
    res = shirshov_complete(P.system())
    assert res.status == "complete" and res.rules_added == 4
    assert len(irr_enumerate(res.basis, 8)) == 6
    assert engine.is_minimal(res.basis)


def test_power_is_already_a_basis():
    res = shirshov_complete(Presentation(("x",), [("x x x", "1")]).system())
    assert res.rules_added == 0 and res.basis.describe() == ["x x x -> 1"]


def test_completion_limit():
    res = shirshov_complete(Presentation(("x", "y"), [("y x y", "x y x")]).system(), max_rules=5)
    assert res.status == "hit_limit" and "max_rules" in res.reason
    res = shirshov_complete(Presentation(("x", "y"), [("y x y", "x y x")]).system(), max_degree=4)
    assert res.status == "hit_limit" and res.pruned


def test_minimalize_drops_redundant_lead():
    S = RewriteSystem.from_relations([("x x", "1"), ("x x x", "x")], DegLex("x"))
    M = minimalize(S)
    assert M.describe() == ["x x -> 1"] and M.minimal


def test_irr_sorted_and_irreducible():
    S = shirshov_complete(s3_presentation().system()).basis
    irr = irr_enumerate(S, 4)
    assert irr == sorted(irr, key=S.order.key)
    assert irr[0] == ()


def test_certified_minimal_rejects_non_basis():
    with pytest.raises(ValueError):
        Presentation(("x", "y"), [("x x", "1"), ("y y y", "1"), ("x y x y", "1")]).certified_minimal()


def test_is_trivial_refuses_non_monomial_order():
    from gsb.hnn import hnn_presentation
    S = hnn_presentation(z2_full_base())
    with pytest.raises(ValueError):
        is_trivial(find_compositions(S)[0], S)


def test_conditions_on_monomial_basis():
    S = shirshov_complete(s3_presentation().system()).basis
    assert check_condition_I(S, samples=50).passed
    assert check_condition_II(S, samples=50).passed


def test_condition_II_reports_nontrivial_composition():
    # (x x - y) x - x (x x - y) = x y - y x is irreducible
    S = RewriteSystem.from_relations([("x x", "y")], DegLex("xy"))
    assert check_condition_II(RewriteSystem.from_relations([("x x", "1")], DegLex("x")), samples=10).passed
    rep = check_condition_II(S, samples=10)
    assert not rep.passed and rep.witnesses[0]["reason"] == "nonzero remainder"


_S3 = shirshov_complete(s3_presentation().system()).basis


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("xy"), max_size=12), st.integers(0, 10_000))
def test_random_strategy_confluent(w, seed):
    w = tuple(w)
    f = Polynomial.monomial(w)
    assert reduce(f, _S3, rng=random.Random(seed)).remainder == reduce(f, _S3).remainder
