"""Letters, words and polynomials of the free associative algebra k<X>.

Words are plain tuples of letter names; the empty tuple is the empty word 1.
Coefficients are exact rationals (:class:`fractions.Fraction`).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

Word = Tuple[str, ...]
EMPTY: Word = ()


class AlphabetError(ValueError):
    pass


class LetterClass(enum.Enum):
    A = "A"
    Y = "Y"
    H = "H"
    T = "t"
    T_INV = "t^-1"


@dataclass(frozen=True)
class Alphabet:
    """An ordered list of classed letters.

    The declaration order is the ranking used by orders that do not get an
    explicit one.
    """

    letters: Tuple[Tuple[str, LetterClass], ...]

    def __post_init__(self):
        names = [n for n, _ in self.letters]
        if len(set(names)) != len(names):
            raise AlphabetError(f"duplicate letter names in {names}")
        for n in names:
            if n == "1" or not n or any(ch.isspace() for ch in n):
                raise AlphabetError(f"illegal letter name {n!r}")

    @classmethod
    def of(cls, names: Iterable[str], letter_class: LetterClass = LetterClass.Y) -> "Alphabet":
        return cls(tuple((n, letter_class) for n in names))

    def __add__(self, other: "Alphabet") -> "Alphabet":
        return Alphabet(self.letters + other.letters)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.letters)

    def __contains__(self, name) -> bool:
        return any(n == name for n, _ in self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.letters)

    def class_of(self, name: str) -> LetterClass:
        for n, c in self.letters:
            if n == name:
                return c
        raise AlphabetError(f"letter {name!r} not in alphabet")

    def of_class(self, *classes: LetterClass) -> Tuple[str, ...]:
        return tuple(n for n, c in self.letters if c in classes)

    def check(self, w: Word) -> Word:
        known = set(self.names)
        for x in w:
            if x not in known:
                raise AlphabetError(f"letter {x!r} not in alphabet {self.names}")
        return w


def word(text) -> Word:
    """Parse ``"x y x"`` (or an iterable of names) into a word; ``"1"`` is empty."""
    if isinstance(text, tuple):
        return text
    if isinstance(text, str):
        parts = text.split()
    else:
        parts = list(text)
    return tuple(p for p in parts if p != "1")


def show(w: Word) -> str:
    return " ".join(w) if w else "1"


def concat(u: Word, v: Word, alphabet: Optional[Alphabet] = None) -> Word:
    if alphabet is not None:
        alphabet.check(u)
        alphabet.check(v)
    return u + v


def deg(w: Word) -> int:
    return len(w)


def occurrences(sub: Word, w: Word) -> Iterator[int]:
    """Start positions of ``sub`` inside ``w``, left to right."""
    n, m = len(w), len(sub)
    for i in range(n - m + 1):
        if w[i:i + m] == sub:
            yield i


def is_subword(sub: Word, w: Word) -> bool:
    return next(occurrences(sub, w), None) is not None


class Polynomial:
    """Finite formal sum of words with rational coefficients.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "alphabet", "_hash")

    def __init__(self, terms: Mapping[Word, object] | Iterable[Tuple[Word, object]] = (),
                 alphabet: Optional[Alphabet] = None):
        acc: Dict[Word, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            w = word(w)
            if alphabet is not None:
                alphabet.check(w)
            c = Fraction(c)
            s = acc.get(w, Fraction(0)) + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        self._terms = acc
        self.alphabet = alphabet
        self._hash = None

    @classmethod
    def binomial(cls, lhs: Word, rhs: Word, alphabet=None) -> "Polynomial":
        """The polynomial ``lhs - rhs`` of a relation ``lhs = rhs``."""
        return cls([(lhs, 1), (rhs, -1)], alphabet)

    @classmethod
    def monomial(cls, w: Word, coeff=1, alphabet=None) -> "Polynomial":
        return cls([(w, coeff)], alphabet)

    @property
    def terms(self) -> Dict[Word, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def coeff(self, w: Word) -> Fraction:
        return self._terms.get(w, Fraction(0))

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _merge_alphabet(self, other: "Polynomial") -> Optional[Alphabet]:
        if self.alphabet is not None and other.alphabet is not None and self.alphabet != other.alphabet:
            raise AlphabetError("alphabet mismatch")
        return self.alphabet or other.alphabet

    def __add__(self, other: "Polynomial") -> "Polynomial":
        alpha = self._merge_alphabet(other)
        return Polynomial(list(self._terms.items()) + list(other._terms.items()), alpha)

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial((), self.alphabet)
        return Polynomial({w: c * x for w, x in self._terms.items()}, self.alphabet)

    def mul_context(self, a: Word, b: Word) -> "Polynomial":
        if self.alphabet is not None:
            self.alphabet.check(a)
            self.alphabet.check(b)
        return Polynomial({a + w + b: c for w, c in self._terms.items()}, self.alphabet)

    def leading(self, order) -> Tuple[Word, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading word")
        w = max(self._terms, key=order.key)
        return w, self._terms[w]

    def monic(self, order) -> "Polynomial":
        _, c = self.leading(order)
        return self.scale(1 / c)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in sorted(self._terms.items(), key=lambda t: (-len(t[0]), t[0])):
            parts.append(_fmt_term(w, c, first=not parts))
        return " ".join(parts)


def _fmt_term(w: Word, c: Fraction, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    body = show(w) if w else ""
    if mag == 1:
        s = body or "1"
    else:
        s = f"{mag}*{body}" if body else f"{mag}"
    if first:
        return s if sign == "+" else "-" + s
    return f"{sign} {s}"


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul_context(a: Word, s: Polynomial, b: Word) -> Polynomial:
    return s.mul_context(word(a), word(b))


def leading(f: Polynomial, order) -> Tuple[Word, Fraction]:
    return f.leading(order)


def all_words(letters: Sequence[str], max_len: int) -> Iterator[Word]:
    """All words of length <= max_len, shortest first."""
    layer = [EMPTY]
    yield EMPTY
    for _ in range(max_len):
        layer = [w + (x,) for w in layer for x in letters]
        yield from layer
