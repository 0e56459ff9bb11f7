"""Total orders on words.

Every order exposes ``key(word)``: a tuple whose lexicographic comparison is
the order.  Three families are provided:

* :class:`DegLex` -- degree first, then lexicographic (monomial);
* :class:`Tower` -- weight (number of Y-letters, Y-letters, A-blocks) on
  words over A1 and Y (monomial);
* :class:`HnnOrder` -- the three-step order on words over A1, H1, t, t^-1,
  whose segments in front of ``t`` / ``t^-1`` are compared by the C-order /
  D-order of H (not monomial).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import IDENTITY, FiniteGroup, PartialIso, SubgroupWithCosets
from .words import AlphabetError, Alphabet, LetterClass, Word, all_words


class _Order:
    kind = "order"
    monomial_certified = False
    alphabet: Alphabet

    def __init__(self):
        self._cache: Dict[Word, tuple] = {}

    def key(self, w: Word) -> tuple:
        k = self._cache.get(w)
        if k is None:
            try:
                k = self._key(w)
            except KeyError as exc:
                raise AlphabetError(f"letter {exc.args[0]!r} is outside the domain of the {self.kind} order") from None
            if len(self._cache) > 200_000:
                self._cache.clear()
            self._cache[w] = k
        return k

    def _key(self, w: Word) -> tuple:
        raise NotImplementedError

    def compare(self, u: Word, v: Word) -> int:
        ku, kv = self.key(u), self.key(v)
        return (ku > kv) - (ku < kv)

    def greater(self, u: Word, v: Word) -> bool:
        return self.key(u) > self.key(v)

    @property
    def letters(self) -> Tuple[str, ...]:
        return self.alphabet.names

    def sorted(self, words):
        return sorted(words, key=self.key)


def compare(order: _Order, u: Word, v: Word) -> int:
    """-1, 0 or 1 as u is less than, equal to or greater than v."""
    return order.compare(u, v)


class DegLex(_Order):
    kind = "deglex"
    monomial_certified = True

    def __init__(self, ranking: Sequence[str], alphabet: Optional[Alphabet] = None):
        super().__init__()
        self.ranking = tuple(ranking)
        self.rank = {x: i for i, x in enumerate(self.ranking)}
        if len(self.rank) != len(self.ranking):
            raise AlphabetError("duplicate letters in ranking")
        self.alphabet = alphabet or Alphabet.of(self.ranking)
        if set(self.alphabet.names) != set(self.ranking):
            raise AlphabetError("every letter of the alphabet must be ranked")

    def _key(self, w):
        rank = self.rank
        return (len(w), tuple(rank[x] for x in w))

    def __repr__(self):
        return f"DegLex({' < '.join(self.ranking)})"


@dataclass(frozen=True)
class TowerWeight:
    t: int
    ys: Tuple[str, ...]
    es: Tuple[Word, ...]

    def reassemble(self) -> Word:
        out: List[str] = []
        for e, y in zip(self.es, self.ys):
            out.extend(e)
            out.append(y)
        out.extend(self.es[-1])
        return tuple(out)


def _split_blocks(w: Word, is_sep) -> Tuple[Tuple[str, ...], Tuple[Word, ...]]:
    seps, blocks, cur = [], [], []
    for x in w:
        if is_sep(x):
            seps.append(x)
            blocks.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    blocks.append(tuple(cur))
    return tuple(seps), tuple(blocks)


class Tower(_Order):
    """Tower order on (A1 u Y)*; A-blocks compared deg-lex by ``a_ranking``,
    Y-letters by ``y_ranking``."""

    kind = "tower"
    monomial_certified = True

    def __init__(self, a_ranking: Sequence[str], y_ranking: Sequence[str]):
        super().__init__()
        self.a_ranking = tuple(a_ranking)
        self.y_ranking = tuple(y_ranking)
        self.a_rank = {x: i for i, x in enumerate(self.a_ranking)}
        self.y_rank = {y: i for i, y in enumerate(self.y_ranking)}
        if set(self.a_rank) & set(self.y_rank):
            raise AlphabetError("A-letters and Y-letters must be disjoint")
        self.alphabet = (Alphabet(tuple((a, LetterClass.A) for a in self.a_ranking))
                         + Alphabet(tuple((y, LetterClass.Y) for y in self.y_ranking)))

    def weight(self, w: Word) -> TowerWeight:
        for x in w:
            if x not in self.a_rank and x not in self.y_rank:
                raise AlphabetError(f"letter {x!r} is outside the domain of the tower order")
        ys, es = _split_blocks(w, self.y_rank.__contains__)
        return TowerWeight(len(ys), ys, es)

    def _key(self, w):
        ys, es = _split_blocks(w, self.y_rank.__contains__)
        ar = self.a_rank
        return (len(ys),) + tuple(self.y_rank[y] for y in ys) + tuple(
            (len(e), tuple(ar[a] for a in e)) for e in es)

    def __repr__(self):
        return f"Tower(A: {' < '.join(self.a_ranking)}; Y: {' < '.join(self.y_ranking)})"


def tower_weight(w: Word, order: Tower) -> TowerWeight:
    return order.weight(w)


# --- HNN order ----------------------------------------------------------------

@dataclass
class HnnOrderData:
    """Everything the three-step order needs.

    ``omega`` ranks H1 (the absolute order, with 1 below everything); the
    rep tuples inside ``C`` and ``D`` give the index orders I and J.
    """

    H: FiniteGroup
    C: SubgroupWithCosets
    D: SubgroupWithCosets
    phi: PartialIso
    omega: Tuple[str, ...]
    a_letters: Tuple[str, ...] = ()
    t: str = "t"
    t_inv: str = "T"

    def __post_init__(self):
        self.omega = tuple(self.omega)
        self.a_letters = tuple(self.a_letters)
        if sorted(self.omega) != sorted(self.H.nonidentity):
            raise AlphabetError("omega must rank exactly the non-identity elements of H")
        if self.C.parent is not self.H or self.D.parent is not self.H:
            raise AlphabetError("C and D must be subgroups of H")
        names = set(self.omega) | set(self.a_letters) | {self.t, self.t_inv}
        if len(names) != len(self.omega) + len(self.a_letters) + 2:
            raise AlphabetError("letter names of A1, H1 and t, t^-1 must be distinct")


@dataclass(frozen=True)
class HWeight:
    """wt_h of an (A1 u H1)-segment: H-letters and the A-blocks between them."""

    n: int
    hs: Tuple[str, ...]
    es: Tuple[Word, ...]


@dataclass(frozen=True)
class HnnWeight:
    k: int
    eps: Tuple[int, ...]
    segments: Tuple[HWeight, ...]

    def segment_orders(self) -> Tuple[str, ...]:
        return tuple("C" if e == 1 else "D" for e in self.eps) + ("absolute",)


class HnnOrder(_Order):
    kind = "hnn"
    monomial_certified = False

    def __init__(self, data: HnnOrderData):
        super().__init__()
        self.data = data
        self.abs_rank = {IDENTITY: 0}
        self.abs_rank.update({h: i + 1 for i, h in enumerate(data.omega)})
        self.a_rank = {a: i for i, a in enumerate(data.a_letters)}
        self.c_key = {h: self._coset_key(data.C, h) for h in data.H.elements}
        self.d_key = {h: self._coset_key(data.D, h) for h in data.H.elements}
        self.alphabet = (Alphabet(tuple((a, LetterClass.A) for a in data.a_letters))
                         + Alphabet(tuple((h, LetterClass.H) for h in data.omega))
                         + Alphabet(((data.t, LetterClass.T), (data.t_inv, LetterClass.T_INV))))

    def _coset_key(self, sub: SubgroupWithCosets, h):
        rep, m = sub.decompose(h)
        return (sub.rep_rank(rep), self.abs_rank[m])

    def with_a_letters(self, a_letters: Sequence[str]) -> "HnnOrder":
        d = self.data
        return HnnOrder(HnnOrderData(d.H, d.C, d.D, d.phi, d.omega, tuple(a_letters), d.t, d.t_inv))

    def _t_split(self, w: Word):
        d = self.data
        eps, segs, cur = [], [], []
        for x in w:
            if x == d.t or x == d.t_inv:
                eps.append(1 if x == d.t else -1)
                segs.append(tuple(cur))
                cur = []
            else:
                if x not in self.abs_rank and x not in self.a_rank:
                    raise KeyError(x)
                cur.append(x)
        segs.append(tuple(cur))
        return tuple(eps), tuple(segs)

    def weight(self, w: Word) -> HnnWeight:
        try:
            eps, segs = self._t_split(w)
        except KeyError as exc:
            raise AlphabetError(f"letter {exc.args[0]!r} is outside the domain of the hnn order") from None
        hw = []
        for s in segs:
            hs, es = _split_blocks(s, lambda x: x in self.abs_rank)
            hw.append(HWeight(len(hs), hs, es))
        return HnnWeight(len(eps), eps, tuple(hw))

    def segment_key(self, seg: Word, mode: str) -> tuple:
        """wt_h key under the absolute (``"abs"``), C- or D-order."""
        hs, es = _split_blocks(seg, lambda x: x in self.abs_rank)
        ar = self.a_rank
        if mode == "abs" or not hs:
            hk = tuple(self.abs_rank[h] for h in hs)
        else:
            table = self.c_key if mode == "C" else self.d_key
            hk = tuple(self.abs_rank[h] for h in hs[:-1]) + (table[hs[-1]],)
        return (len(hs),) + hk + tuple((len(e), tuple(ar[a] for a in e)) for e in es)

    def _key(self, w):
        eps, segs = self._t_split(w)
        # t > t^-1: encode t as 1, t^-1 as 0
        parts = [len(eps)] + [1 if e == 1 else 0 for e in eps]
        for e, s in zip(eps, segs):
            parts.append(self.segment_key(s, "C" if e == 1 else "D"))
        parts.append(self.segment_key(segs[-1], "abs"))
        return tuple(parts)

    def __repr__(self):
        return f"HnnOrder(H={self.data.H.name}, omega={' < '.join(self.data.omega)})"


def hnn_weight(w: Word, order: HnnOrder) -> HnnWeight:
    return order.weight(w)


# --- monomiality certification ----------------------------------------------

@dataclass
class MonomialReport:
    kind: str
    monomial: bool
    total: bool
    exhaustive_words: int
    exhaustive_max_len: int
    random_trials: int
    witness: Optional[Tuple[Word, Word, Word, Word]] = None
    total_witness: Optional[Tuple[Word, ...]] = None
    note: str = "randomized and exhaustive small-domain checks are evidence, not proof"

    @property
    def passed(self) -> bool:
        return self.monomial and self.total


def check_total_order(order: _Order, words: Sequence[Word]) -> Optional[Tuple[Word, ...]]:
    """Return a witness if compare is not a strict total order on ``words``.

    Sorting followed by an all-pairs agreement check establishes
    transitivity, antisymmetry and totality on the finite set.
    """
    import functools
    cmp = order.compare
    for u in words:
        if cmp(u, u) != 0:
            return (u,)
    ordered = sorted(words, key=functools.cmp_to_key(cmp))
    for i, u in enumerate(ordered):
        for v in ordered[i + 1:]:
            c = cmp(u, v)
            if c != -1 or cmp(v, u) != 1:
                return (u, v)
    return None


def _rand_word(rng: random.Random, letters, lo, hi) -> Word:
    return tuple(rng.choice(letters) for _ in range(rng.randint(lo, hi)))


def certify_monomial(order: _Order, trials: int = 1000, seed: int = 0,
                     max_len: Optional[int] = None, random_max_len: int = 8) -> MonomialReport:
    """Look for a violation of u > v => w1 u w2 > w1 v w2.

    Exhaustive over words of length <= max_len with one-letter contexts on
    either side, then ``trials`` random longer cases.  The first violation
    found is recorded as ``witness = (u, v, w1, w2)``.
    """
    letters = order.letters
    if max_len is None:
        max_len = 4 if len(letters) <= 3 else 3 if len(letters) <= 6 else 2
    small = list(all_words(letters, max_len))
    total_w = check_total_order(order, small)
    witness = None
    ctxs = [()] + [(x,) for x in letters]
    for u, v in itertools.permutations(small, 2):
        if not order.greater(u, v):
            continue
        for x in ctxs:
            for y in ctxs:
                if not order.greater(x + u + y, x + v + y):
                    witness = (u, v, x, y)
                    break
            if witness:
                break
        if witness:
            break
    rng = random.Random(seed)
    done = 0
    while done < trials and witness is None:
        u = _rand_word(rng, letters, 0, random_max_len)
        v = _rand_word(rng, letters, 0, random_max_len)
        if u == v:
            continue
        done += 1
        if order.greater(v, u):
            u, v = v, u
        w1 = _rand_word(rng, letters, 0, 4)
        w2 = _rand_word(rng, letters, 0, 4)
        if not order.greater(w1 + u + w2, w1 + v + w2):
            witness = (u, v, w1, w2)
        a, b, c = u, v, w1 + w2
        if total_w is None and order.compare(a, b) == 1 and order.compare(b, c) == 1 and order.compare(a, c) != 1:
            total_w = (a, b, c)
    return MonomialReport(order.kind, witness is None, total_w is None, len(small), max_len, done,
                          witness, total_w)
