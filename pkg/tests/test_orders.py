import functools
import itertools

import pytest
from hypothesis import given, strategies as st

from gsb.orders import DegLex, Tower, certify_monomial, check_total_order
from gsb.words import AlphabetError, all_words

from conftest import z2_full_base, z4_half_base

letters3 = st.lists(st.sampled_from("xyz"), max_size=7).map(tuple)


def deglex_cmp(u, v, rank="xyz"):
    # written without tuples-as-keys, letter by letter
    if len(u) != len(v):
        return -1 if len(u) < len(v) else 1
    for a, b in zip(u, v):
        if a != b:
            return -1 if rank.index(a) < rank.index(b) else 1
    return 0


def test_deglex_examples():
    o = DegLex("xy")
    assert o.greater(("y", "x"), ("x", "y"))
    assert o.greater(("x", "x", "x"), ("y", "y"))
    assert o.compare(("x",), ("x",)) == 0
    with pytest.raises(AlphabetError):
        o.key(("q",))


@given(letters3, letters3)
def test_deglex_matches_hand_comparator(u, v):
    assert DegLex("xyz").compare(u, v) == deglex_cmp(u, v)


def test_deglex_exhaustive_monomial():
    o = DegLex("xyz")
    rep = certify_monomial(o, trials=1000, max_len=4)
    assert rep.passed and rep.exhaustive_words == 121


def test_tower_weight_order():
    o = Tower(["a", "b"], ["x", "y"])
    # more Y-letters wins, then Y-word, then A-blocks from the left
    assert o.greater(("x", "y"), ("a", "a", "x"))
    assert o.greater(("y", "a"), ("a", "x"))
    assert o.greater(("a", "x"), ("x", "a"))
    assert o.greater(("b", "x"), ("a", "x"))
    w = ("a", "x", "b", "b", "y")
    assert o.weight(w).reassemble() == w
    assert o.weight(w).t == 2


def test_tower_leading_words_of_extension_relations():
    o = Tower(["a", "a2"], ["x"])
    assert o.greater(("a", "x"), ("x", "a2"))
    assert o.greater(("x", "x"), ("a",))
    assert o.greater(("a", "a"), ("a2",))


def test_tower_monomial():
    rep = certify_monomial(Tower(["a"], ["x", "y"]), trials=1000, max_len=4)
    assert rep.passed


def test_total_order_detects_broken_comparator():
    class Broken(DegLex):
        def compare(self, u, v):
            return 1 if u != v else 0
    assert check_total_order(Broken("xy"), list(all_words("xy", 2))) is not None


def test_hnn_order_not_monomial():
    base = z4_half_base()
    rep = certify_monomial(base.order(), trials=200, max_len=2)
    assert not rep.monomial
    # frozen from the exhaustive scan: h2 > h, but h2 t < h t
    assert rep.witness == (("h2",), ("h",), (), ("t",))
    o = base.order()
    assert o.greater(("h2",), ("h",)) and o.greater(("h", "t"), ("h2", "t"))


def test_hnn_order_total_on_small_words():
    o = z4_half_base().order(["a"])
    assert check_total_order(o, list(all_words(o.letters, 3))) is None


def test_hnn_order_shape():
    o = z2_full_base().order(["a"])
    # more stable letters wins; t beats t^-1 at the same count
    assert o.greater(("t",), ("h", "a", "h"))
    assert o.greater(("t",), ("T",))
    assert o.weight(("h", "t", "a")).segment_orders() == ("C", "absolute")
    srt = sorted(all_words(("h", "t"), 2), key=functools.cmp_to_key(o.compare))
    assert srt[0] == ()
