import random

import pytest

from gsb.engine import Presentation
from gsb.groups import (IDENTITY, Automorphism, SearchGuardExceeded, brute_force_extensions, cyclic,
                        klein, symmetric3, table_presentation)
from gsb.schreier import (ExtensionSpec, ExtensionSpecError, action_on_word, build_extension_system,
                          check_action_condition, check_extension, derive_conditions,
                          enumerate_extensions, extension_group, is_gsb_extension,
                          verify_extension_structure)

from conftest import cyclic_presentation
from oracles import free_abelian_families, free_abelian_relations, table_cocycle_instances

Z2, Z3, Z4 = cyclic(2), cyclic(3), cyclic(4)


def spec(A, n, psi, a0=IDENTITY):
    return ExtensionSpec(A, cyclic_presentation(n), {"x": psi}, {("x",) * n: a0})


def test_action_on_word():
    inv = {"y": Automorphism.inversion(Z3)}
    assert action_on_word("a", (), inv) == "a"
    assert action_on_word("a", ("y", "y"), inv) == "a"
    assert action_on_word("a", ("y",), inv) == "a2"
    with pytest.raises(ExtensionSpecError):
        action_on_word("a", ("z",), inv)


def test_extension_system_for_z4():
    S = build_extension_system(spec(Z2, 2, Automorphism.identity(Z2), "a"))
    assert S.describe() == ["a a -> 1  [A]", "x x -> a  [R]", "a x -> x a  [act]"]
    S = build_extension_system(spec(Z2, 2, Automorphism.identity(Z2)))
    assert S.describe()[1] == "x x -> 1  [R]"


def test_action_condition_examples():
    assert all(c.ok for c in check_action_condition(spec(Z2, 2, Automorphism.identity(Z2), "a")))
    assert all(c.ok for c in check_action_condition(spec(Z3, 2, Automorphism.inversion(Z3), "a")))


@pytest.mark.parametrize("A,psi,a0,ok,profile", [
    (Z2, "id", "a", True, [1, 2, 4, 4]),
    (Z2, "id", IDENTITY, True, [1, 2, 2, 2]),
    (Z3, "inv", "a", False, None),
    (Z3, "inv", IDENTITY, True, [1, 2, 2, 2, 3, 3]),
])
def test_cyclic_extensions(A, psi, a0, ok, profile):
    aut = Automorphism.identity(A) if psi == "id" else Automorphism.inversion(A)
    sp = spec(A, 2, aut, a0)
    rep = check_extension(sp)
    assert rep.passed is ok
    assert is_gsb_extension(sp) is ok
    if ok:
        E = extension_group(sp)
        assert E.group.fingerprint()["order_profile"] == profile
        assert verify_extension_structure(E).passed
    else:
        assert rep.equation_failures == ["a0 = a0^{x}: a != a2"]
        with pytest.raises(ExtensionSpecError):
            extension_group(sp)


def test_inverse_pair_factor_must_be_one():
    B = Presentation(("x", "X"), [("x X", "1"), ("X x", "1")], {"x": "X"})
    with pytest.raises(ExtensionSpecError):
        ExtensionSpec(Z2, B, {"x": Automorphism.identity(Z2), "X": Automorphism.identity(Z2)},
                      {("x", "X"): "a"})


def test_factor_on_non_lead_rejected():
    with pytest.raises(ExtensionSpecError):
        ExtensionSpec(Z2, cyclic_presentation(2), {"x": Automorphism.identity(Z2)}, {("x",): "a"})


def test_letter_clash_rejected():
    with pytest.raises(ExtensionSpecError):
        ExtensionSpec(Z2, table_presentation(cyclic(2)), {"a": Automorphism.identity(Z2)})


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_derive_cyclic(n):
    d = derive_conditions(cyclic_presentation(n))
    assert d.lines() == ["a0 = a0^{x}", "a0 a^{" + " ".join(["x"] * n) + "} = a a0"]


def test_derive_free_abelian():
    letters, rels = free_abelian_relations(3)
    B = Presentation(letters, rels, {"x1": "X1", "x2": "X2", "x3": "X3"})
    got = derive_conditions(B).normalized()
    fam = free_abelian_families()
    for k in fam:
        assert fam[k] <= got, k
    assert got == set().union(*fam.values())


@pytest.mark.parametrize("G", [cyclic(2, "x"), cyclic(3, "x"), cyclic(4, "x"), klein(("x", "y")), symmetric3()])
def test_derive_table_presentation_gives_cocycle_identities(G):
    assert derive_conditions(table_presentation(G)).normalized() == table_cocycle_instances(G)


def test_specialized_equations_agree_with_check():
    rng = random.Random(7)
    for _ in range(20):
        A = rng.choice([Z2, Z3, Z4])
        n = rng.choice([2, 3])
        psi = rng.choice(A.automorphisms())
        sp = spec(A, n, psi, rng.choice(A.elements))
        eqs = derive_conditions(sp.B).equations
        holds = all(e.counterexample(sp) is None for e in eqs)
        assert holds == check_extension(sp).passed == is_gsb_extension(sp)


@pytest.mark.parametrize("A", [Z2, Z3, Z4, klein()], ids=lambda g: g.name)
@pytest.mark.parametrize("n", [2, 3])
def test_enumeration_equals_oracle(A, n):
    B = cyclic(n, "x")
    found = enumerate_extensions(A, table_presentation(B))
    assert {x.params for x in found} == set(brute_force_extensions(A, B))
    for x in found:
        E = extension_group(x.spec, check=False)
        assert verify_extension_structure(E, B).passed


def test_enumeration_counts_and_fingerprints():
    assert len(enumerate_extensions(Z2, table_presentation(cyclic(2, "x")))) == 2
    found = enumerate_extensions(Z3, table_presentation(cyclic(2, "x")))
    assert len(found) == 4
    assert sorted(x.fingerprint["abelian"] for x in found) == [False, True, True, True]


def test_enumeration_over_presentation_agrees_with_table_count():
    # Z2 by <x | x^3 = 1>: no prediction, only agreement with the table route
    a = enumerate_extensions(Z2, cyclic_presentation(3))
    b = brute_force_extensions(Z2, cyclic(3, "x"))
    assert len(a) == len(b)


def test_enumeration_guard():
    with pytest.raises(SearchGuardExceeded):
        enumerate_extensions(klein(), table_presentation(cyclic(3, "x")), guard=100)
