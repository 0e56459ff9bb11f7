"""Gröbner-Shirshov machinery for k<X>.

Compositions of intersection and inclusion, reduction with a recorded
trace, triviality, Shirshov completion, minimal bases, enumeration of
S-irreducible words, and the sampled checks of conditions (I) and (II) used
when the word order is not monomial.
"""
from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .words import EMPTY, Polynomial, Word, all_words, is_subword, occurrences, show, word

log = logging.getLogger(__name__)

CANDIDATE = "candidate"
CERTIFIED = "certified-GSB"
FAILED = "certified-failed"


class ReductionLimitExceeded(RuntimeError):
    """Reduction did not terminate within the step budget; with a
    non-monomial order this usually means the order is misconfigured."""


class RewriteSystem:
    """A list of monic polynomials together with the order that makes them monic."""

    def __init__(self, rules: Iterable[Polynomial], order, labels: Optional[Sequence] = None,
                 status: str = CANDIDATE, minimal: bool = False):
        self.order = order
        rules = tuple(rules)
        leads, monic = [], []
        for s in rules:
            if not s:
                raise ValueError("a rewrite system cannot contain the zero polynomial")
            lw, c = s.leading(order)
            if not lw:
                raise ValueError("constant rule: the ideal is the whole algebra")
            if c != 1:
                s = s.scale(1 / c)
            monic.append(s)
            leads.append(lw)
        self.rules: Tuple[Polynomial, ...] = tuple(monic)
        self.leads: Tuple[Word, ...] = tuple(leads)
        self.labels: Tuple = tuple(labels) if labels is not None else (None,) * len(self.rules)
        if len(self.labels) != len(self.rules):
            raise ValueError("one label per rule")
        self.status = status
        self.minimal = minimal
        self._match_cache: Dict[Word, list] = {}
        self._by_first: Dict[str, List[Tuple[int, Word]]] = {}
        for i, lw in enumerate(self.leads):
            self._by_first.setdefault(lw[0], []).append((i, lw))
        self._lead_set = set(self.leads)
        self._lead_lens = sorted({len(l) for l in self.leads})

    @classmethod
    def from_relations(cls, relations: Iterable[Tuple[Word, Word]], order, labels=None, **kw) -> "RewriteSystem":
        """Build from relations ``lhs = rhs``; the leading side is decided by ``order``."""
        polys, labs = [], []
        labels = list(labels) if labels is not None else None
        for n, (l, r) in enumerate(relations):
            l, r = word(l), word(r)
            if l == r:
                continue
            polys.append(Polynomial.binomial(l, r))
            labs.append(labels[n] if labels else None)
        return cls(polys, order, labs, **kw)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __repr__(self):
        return f"RewriteSystem({len(self)} rules, {self.order!r}, {self.status})"

    def with_status(self, status: str, minimal: Optional[bool] = None) -> "RewriteSystem":
        return RewriteSystem(self.rules, self.order, self.labels, status,
                             self.minimal if minimal is None else minimal)

    def rule_sides(self, i: int) -> Tuple[Word, Polynomial]:
        """Leading word and the tail ``lead - rule`` (what the leading word rewrites to)."""
        lw = self.leads[i]
        return lw, Polynomial.monomial(lw) - self.rules[i]

    def matches(self, w: Word) -> list:
        """All (rule index, position) with the rule's leading word at that position,
        ordered by rule index, then position."""
        m = self._match_cache.get(w)
        if m is None:
            m = []
            n = len(w)
            for p, x in enumerate(w):
                for i, lw in self._by_first.get(x, ()):
                    if n - p >= len(lw) and w[p:p + len(lw)] == lw:
                        m.append((i, p))
            m.sort()
            if len(self._match_cache) > 100_000:
                self._match_cache.clear()
            self._match_cache[w] = m
        return m

    def first_match(self, w: Word):
        m = self.matches(w)
        return m[0] if m else None

    def is_irreducible(self, w: Word) -> bool:
        return not self.matches(w)

    def describe_rule(self, i: int) -> str:
        lw, tail = self.rule_sides(i)
        rhs = _poly_str(tail)
        lab = f"  [{self.labels[i]}]" if self.labels[i] else ""
        return f"{show(lw)} -> {rhs}{lab}"

    def describe(self) -> List[str]:
        return [self.describe_rule(i) for i in range(len(self))]


def _poly_str(p: Polynomial) -> str:
    if len(p) == 1:
        (w, c), = p.items()
        if c == 1:
            return show(w)
    return str(p)


# --- reduction ---------------------------------------------------------------

@dataclass(frozen=True)
class ReductionStep:
    rule: int
    a: Word
    b: Word
    coeff: Fraction


@dataclass
class ReductionTrace:
    start: Polynomial
    steps: List[ReductionStep]
    remainder: Polynomial

    def replay(self, S: RewriteSystem) -> Polynomial:
        """Recompute the remainder from the recorded steps."""
        p = self.start
        for st in self.steps:
            p = p - S.rules[st.rule].mul_context(st.a, st.b).scale(st.coeff)
        return p

    def presentation(self, S: RewriteSystem) -> List[Tuple[Fraction, Word, int, Word]]:
        """The start polynomial minus remainder as sum of coeff * a * s_i * b."""
        return [(st.coeff, st.a, st.rule, st.b) for st in self.steps]


def reduce(f: Polynomial, S: RewriteSystem, max_steps: int = 100_000,
           rng: Optional[random.Random] = None) -> ReductionTrace:
    """Reduce ``f`` to an S-irreducible remainder.

    Default strategy: the greatest reducible term, rewritten at the leftmost
    occurrence of the first matching rule (rule index order).  With ``rng``
    the term, rule and occurrence are chosen at random instead.
    """
    order = S.order
    terms: Dict[Word, Fraction] = dict(f.terms)
    steps: List[ReductionStep] = []
    while True:
        if rng is None:
            target = None
            for w in sorted(terms, key=order.key, reverse=True):
                m = S.first_match(w)
                if m is not None:
                    target, (i, p) = w, m
                    break
            if target is None:
                break
        else:
            reducible = [w for w in terms if S.matches(w)]
            if not reducible:
                break
            target = rng.choice(sorted(reducible, key=order.key))
            i, p = rng.choice(S.matches(target))
        if len(steps) >= max_steps:
            raise ReductionLimitExceeded(f"reduction exceeded {max_steps} steps")
        c = terms[target]
        lw = S.leads[i]
        a, b = target[:p], target[p + len(lw):]
        steps.append(ReductionStep(i, a, b, c))
        for w, sc in S.rules[i].items():
            nw = a + w + b
            v = terms.get(nw, Fraction(0)) - c * sc
            if v:
                terms[nw] = v
            else:
                terms.pop(nw, None)
    return ReductionTrace(f, steps, Polynomial(terms))


def normal_form(w: Word, S: RewriteSystem, max_steps: int = 100_000) -> Word:
    """Normal form of a word under a binomial system (rules ``u -> v``)."""
    r = reduce(Polynomial.monomial(word(w)), S, max_steps).remainder
    if len(r) != 1 or next(iter(r.items()))[1] != 1:
        raise ValueError(f"{show(w)} does not reduce to a single word: {r}")
    return next(iter(r.words()))


# --- compositions ------------------------------------------------------------

@dataclass(frozen=True)
class Composition:
    kind: str  # "intersection" or "inclusion"
    f: int
    g: int
    w: Word
    a: Word
    b: Word
    value: Polynomial

    def describe(self) -> str:
        return f"({self.f},{self.g})_{{{show(self.w)}}} {self.kind}"


def compositions_of(S: RewriteSystem, i: int, j: int) -> List[Composition]:
    f, g = S.rules[i], S.rules[j]
    fl, gl = S.leads[i], S.leads[j]
    out = []
    # intersection: w = fl b = a gl, overlap k with a, b nonempty
    for k in range(min(len(fl), len(gl)) - 1, 0, -1):
        if fl[-k:] == gl[:k]:
            a, b = fl[:-k], gl[k:]
            out.append(Composition("intersection", i, j, fl + b, a, b,
                                   f.mul_context(EMPTY, b) - g.mul_context(a, EMPTY)))
    # inclusion: w = fl = a gl b
    if i != j and len(gl) <= len(fl):
        for p in occurrences(gl, fl):
            if fl == gl and i > j:
                continue
            a, b = fl[:p], fl[p + len(gl):]
            out.append(Composition("inclusion", i, j, fl, a, b, f - g.mul_context(a, b)))
    return out


def find_compositions(S: RewriteSystem) -> List[Composition]:
    out = []
    for i in range(len(S)):
        for j in range(len(S)):
            out.extend(compositions_of(S, i, j))
    return out


def is_trivial(c: Composition, S: RewriteSystem, max_steps: int = 100_000) -> Tuple[bool, ReductionTrace]:
    """Zero remainder decides triviality mod (S, w) under a monomial order."""
    if not S.order.monomial_certified:
        raise ValueError("is_trivial needs a monomial order; use check_condition_II")
    tr = reduce(c.value, S, max_steps)
    return (not tr.remainder), tr


@dataclass
class GsbCheck:
    ok: bool
    compositions: int
    failures: List[Tuple[Composition, Polynomial]]


def check_gsb(S: RewriteSystem, max_steps: int = 100_000, stop_at_first: bool = False) -> GsbCheck:
    comps = find_compositions(S)
    fails = []
    for c in comps:
        ok, tr = is_trivial(c, S, max_steps)
        if not ok:
            fails.append((c, tr.remainder))
            if stop_at_first:
                break
    return GsbCheck(not fails, len(comps), fails)


def certify(S: RewriteSystem, max_steps: int = 100_000) -> RewriteSystem:
    res = check_gsb(S, max_steps, stop_at_first=True)
    return S.with_status(CERTIFIED if res.ok else FAILED)


# --- completion ---------------------------------------------------------------

@dataclass
class CompletionResult:
    basis: RewriteSystem
    status: str  # "complete" or "hit_limit"
    compositions_checked: int
    rules_added: int
    pruned: int
    reason: str = ""


def shirshov_complete(S: RewriteSystem, max_rules: int = 500, max_degree: Optional[int] = None,
                      max_steps: int = 1_000_000) -> CompletionResult:
    """Add normal forms of nontrivial compositions until all are trivial."""
    if not S.order.monomial_certified:
        raise ValueError("Shirshov completion needs a monomial order")
    order = S.order
    rules = list(S.rules)
    labels = list(S.labels)
    cur = RewriteSystem(rules, order, labels)
    queue = deque(find_compositions(cur))
    checked = added = pruned = 0
    steps_used = 0
    reason = ""
    while queue:
        comp = queue.popleft()
        if max_degree is not None and len(comp.w) > max_degree:
            pruned += 1
            continue
        checked += 1
        try:
            tr = reduce(comp.value, cur, max_steps - steps_used)
        except ReductionLimitExceeded:
            reason = f"max_steps={max_steps} exhausted"
            break
        steps_used += len(tr.steps)
        r = tr.remainder
        if not r:
            continue
        if len(rules) >= max_rules:
            reason = f"max_rules={max_rules} reached"
            break
        rules.append(r.monic(order))
        labels.append(None)
        added += 1
        cur = RewriteSystem(rules, order, labels)
        n = len(rules) - 1
        log.debug("new rule %s", cur.describe_rule(n))
        for k in range(n + 1):
            queue.extend(compositions_of(cur, n, k))
            if k != n:
                queue.extend(compositions_of(cur, k, n))
    if reason or pruned:
        if not reason:
            reason = f"{pruned} compositions pruned by max_degree={max_degree}"
        return CompletionResult(cur, "hit_limit", checked, added, pruned, reason)
    basis = minimalize(cur.with_status(CERTIFIED))
    return CompletionResult(basis, "complete", checked, added, pruned)


def minimalize(S: RewriteSystem, max_steps: int = 100_000) -> RewriteSystem:
    """Drop rules whose leading word contains another leading word, then
    reduce the tails of the survivors."""
    order = S.order
    idx = sorted(range(len(S)), key=lambda i: (order.key(S.leads[i]), i))
    keep: List[int] = []
    for i in idx:
        if not any(is_subword(S.leads[k], S.leads[i]) for k in keep):
            keep.append(i)
    keep.sort()
    rules, labels = [], []
    for i in keep:
        others = RewriteSystem([S.rules[k] for k in keep if k != i], order)
        lw, tail = S.rule_sides(i)
        tail = reduce(tail, others, max_steps).remainder if len(others) else tail
        rules.append(Polynomial.monomial(lw) - tail)
        labels.append(S.labels[i])
    return RewriteSystem(rules, order, labels, S.status, minimal=True)


def is_minimal(S: RewriteSystem) -> bool:
    L = S.leads
    return all(not (i != j and is_subword(L[i], L[j])) for i in range(len(L)) for j in range(len(L)))


def irr_enumerate(S: RewriteSystem, max_len: int, letters: Optional[Sequence[str]] = None) -> List[Word]:
    """All S-irreducible words of length <= max_len, in increasing order."""
    letters = tuple(letters) if letters is not None else S.order.letters
    leads = S._lead_set
    lens = S._lead_lens
    out = [EMPTY]
    layer = [EMPTY]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in letters:
                u = w + (x,)
                if not any(L <= len(u) and u[-L:] in leads for L in lens):
                    nxt.append(u)
        out.extend(nxt)
        layer = nxt
        if not layer:
            break
    return sorted(out, key=S.order.key)


# --- conditions (I) and (II) for non-monomial orders ---------------------------

@dataclass
class ConditionReport:
    name: str
    passed: bool
    checked: int
    witnesses: List[dict] = field(default_factory=list)
    note: str = "sampled contexts: evidence, not proof"

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "witnesses": self.witnesses, "note": self.note}


def _contexts(letters, samples, max_len, rng):
    yield EMPTY, EMPTY
    for _ in range(samples - 1):
        c = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
        d = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
        yield c, d


def check_condition_I(S: RewriteSystem, samples: int = 500, max_ctx_len: int = 4,
                      seed: int = 0, max_witnesses: int = 5) -> ConditionReport:
    """Sampled check that the leading word of a s b is a (lead s) b."""
    rng = random.Random(seed)
    letters = S.order.letters
    order = S.order
    wit, checked = [], 0
    for i, s in enumerate(S.rules):
        lw = S.leads[i]
        others = [w for w in s.words() if w != lw]
        for a, b in _contexts(letters, samples, max_ctx_len, rng):
            checked += 1
            big = order.key(a + lw + b)
            bad = next((w for w in others if order.key(a + w + b) > big), None)
            if bad is not None:
                wit.append({"rule": i, "rule_text": S.describe_rule(i), "a": show(a), "b": show(b),
                            "beats": show(a + bad + b)})
                if len(wit) >= max_witnesses:
                    return ConditionReport("I", False, checked, wit)
                break
    return ConditionReport("I", not wit, checked, wit)


def check_condition_II(S: RewriteSystem, samples: int = 500, max_ctx_len: int = 4, seed: int = 0,
                       max_steps: int = 10_000, compositions: Optional[List[Composition]] = None,
                       max_witnesses: int = 20) -> ConditionReport:
    """For each composition, reduce it to zero and check the resulting
    presentation sum(alpha_i a_i t_i b_i) stays below w in sampled contexts."""
    rng = random.Random(seed)
    letters = S.order.letters
    key = S.order.key
    comps = find_compositions(S) if compositions is None else compositions
    wit, checked = [], 0
    for comp in comps:
        try:
            tr = reduce(comp.value, S, max_steps)
        except ReductionLimitExceeded:
            wit.append({"composition": comp.describe(), "reason": "step limit"})
            continue
        if tr.remainder:
            wit.append({"composition": comp.describe(), "w": show(comp.w),
                        "reason": "nonzero remainder", "remainder": str(tr.remainder)})
            if len(wit) >= max_witnesses:
                break
            continue
        tops = [st.a + S.leads[st.rule] + st.b for st in tr.steps]
        for c, d in _contexts(letters, samples, max_ctx_len, rng):
            checked += 1
            big = key(c + comp.w + d)
            bad = next((u for u in tops if key(c + u + d) >= big), None)
            if bad is not None:
                wit.append({"composition": comp.describe(), "w": show(comp.w), "reason": "context",
                            "c": show(c), "d": show(d), "term": show(bad)})
                break
        if len(wit) >= max_witnesses:
            break
    return ConditionReport("II", not wit, checked, wit)


# --- presentations -------------------------------------------------------------

@dataclass
class Presentation:
    """A semigroup presentation sgp<Y | R> with a deg-lex ranking of Y.

    ``inverses`` lists declared inverse letter pairs (both directions);
    ``labels`` optionally names the factor attached to each relation.
    """

    letters: Tuple[str, ...]
    relations: List[Tuple[Word, Word]]
    inverses: Dict[str, str] = field(default_factory=dict)
    labels: List[Optional[str]] = field(default_factory=list)
    name: str = "B"

    def __post_init__(self):
        self.letters = tuple(self.letters)
        self.relations = [(word(l), word(r)) for l, r in self.relations]
        if not self.labels:
            self.labels = [None] * len(self.relations)
        if len(self.labels) != len(self.relations):
            raise ValueError("one label per relation")
        for x, y in list(self.inverses.items()):
            self.inverses.setdefault(y, x)
        for l, r in self.relations:
            for x in l + r:
                if x not in self.letters:
                    raise ValueError(f"relation uses undeclared letter {x!r}")

    def order(self):
        from .orders import DegLex
        return DegLex(self.letters)

    def system(self) -> RewriteSystem:
        return RewriteSystem.from_relations(self.relations, self.order(), self.labels)

    def certified_minimal(self) -> RewriteSystem:
        """The relations as a rewrite system, checked to be a minimal GSB."""
        S = certify(self.system())
        if S.status != CERTIFIED:
            raise ValueError(f"presentation {self.name} is not a Gröbner-Shirshov basis; complete it first")
        if not is_minimal(S):
            raise ValueError(f"presentation {self.name} is not a minimal Gröbner-Shirshov basis")
        return S.with_status(CERTIFIED, minimal=True)
