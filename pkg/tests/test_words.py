from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gsb.orders import DegLex
from gsb.words import (EMPTY, Alphabet, AlphabetError, LetterClass, Polynomial, all_words, concat,
                       is_subword, occurrences, show, word)

words = st.lists(st.sampled_from("xyz"), max_size=5).map(tuple)
polys = st.dictionaries(words, st.integers(-3, 3), max_size=4).map(Polynomial)


def test_word_parsing():
    assert word("x y x") == ("x", "y", "x")
    assert word("1") == EMPTY
    assert show(EMPTY) == "1"
    assert show(("a", "b")) == "a b"


def test_alphabet_checks():
    A = Alphabet.of("ab", LetterClass.A) + Alphabet.of(["x"])
    assert A.of_class(LetterClass.A) == ("a", "b")
    assert A.class_of("x") is LetterClass.Y
    with pytest.raises(AlphabetError):
        concat(("a",), ("q",), A)
    with pytest.raises(AlphabetError):
        Alphabet.of(["x", "x"])
    with pytest.raises(AlphabetError):
        Alphabet.of(["1"])


def test_zero_terms_are_purged():
    p = Polynomial([(("x",), 1), (("x",), -1), (("y",), 2)])
    assert p.words() == {("y",): 0}.keys()
    assert not (p - p)
    assert str(Polynomial()) == "0"


def test_leading_word_and_monic():
    order = DegLex("xy")
    p = Polynomial({("x", "y"): 3, ("y",): 1})
    assert p.leading(order) == (("x", "y"), Fraction(3))
    assert p.monic(order).coeff(("x", "y")) == 1
    with pytest.raises(ValueError):
        Polynomial().leading(order)


def test_alphabet_mismatch():
    p = Polynomial.monomial(("x",), alphabet=Alphabet.of("x"))
    q = Polynomial.monomial(("x",), alphabet=Alphabet.of("xy"))
    with pytest.raises(AlphabetError):
        p + q


def test_occurrences():
    assert list(occurrences(("x", "x"), ("x", "x", "x"))) == [0, 1]
    assert is_subword(EMPTY, ("x",))
    assert len(list(all_words("xy", 3))) == 15


@given(polys, polys)
def test_addition_commutes(p, q):
    assert p + q == q + p


@given(polys, words, words)
def test_context_multiplication_is_linear(p, a, b):
    assert (p + p).mul_context(a, b) == p.mul_context(a, b).scale(2)
    assert all(w[:len(a)] == a for w in p.mul_context(a, b).words())


@given(polys)
def test_negation(p):
    assert not (p + (-p))
