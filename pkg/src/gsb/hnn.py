"""HNN groups B = gp<H, t | t^-1 c t = phi(c)> and Schreier extensions of A by B.

H is finite so that the identities (h1)-(h9) can be checked exhaustively.
The HNN word order is not monomial, so the extension system is certified
through conditions (I) and (II) on sampled contexts in addition to the exact
(h1)-(h9) route.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from . import engine
from .engine import RewriteSystem
from .groups import (IDENTITY, Automorphism, FiniteGroup, PartialIso, SubgroupWithCosets)
from .orders import HnnOrder, HnnOrderData
from .words import EMPTY, Word, show


class HnnSpecError(ValueError):
    pass


@dataclass
class HnnSpec:
    H: FiniteGroup
    C: SubgroupWithCosets
    D: SubgroupWithCosets
    phi: PartialIso
    omega: Tuple[str, ...] = ()
    t: str = "t"
    t_inv: str = "T"

    def __post_init__(self):
        self.omega = tuple(self.omega) or self.H.nonidentity
        if self.C.parent is not self.H or self.D.parent is not self.H:
            raise HnnSpecError("C and D must be subgroups of H")
        if self.phi.source != self.C.members or self.phi.target != self.D.members:
            raise HnnSpecError("phi must map C onto D")

    def order(self, a_letters: Sequence[str] = ()) -> HnnOrder:
        return HnnOrder(HnnOrderData(self.H, self.C, self.D, self.phi, self.omega,
                                     tuple(a_letters), self.t, self.t_inv))

    @property
    def stable(self) -> Tuple[str, str]:
        return self.t, self.t_inv

    def decompose(self, h: str, eps: int) -> Tuple[str, str]:
        """(h_C, c_h) for eps = 1 and (h_D, d_h) for eps = -1."""
        return (self.C if eps == 1 else self.D).decompose(h)

    def across(self, c: str, eps: int) -> str:
        """phi(c) for eps = 1, phi^-1(c) for eps = -1."""
        return self.phi(c) if eps == 1 else self.phi.inv(c)

    def degenerate(self, h: str, eps: int) -> bool:
        return self.decompose(h, eps)[1] == IDENTITY

    def stable_letter(self, eps: int) -> str:
        return self.t if eps == 1 else self.t_inv


def _w(*parts: str) -> Word:
    return tuple(p for p in parts if p != IDENTITY)


def hnn_relations(spec: HnnSpec) -> List[Tuple[Word, Word, str]]:
    """The relations of B with labels; degenerate h t^eps rules are left out."""
    H = spec.H
    out = []
    for h in spec.omega:
        for h2 in spec.omega:
            out.append(((h, h2), _w(H.mul(h, h2)), f"({h},{h2})"))
    for eps in (1, -1):
        s = spec.stable_letter(eps)
        for h in spec.omega:
            if spec.degenerate(h, eps):
                continue
            rep, c = spec.decompose(h, eps)
            out.append(((h, s), _w(rep, s, spec.across(c, eps)), f"({h},{s})"))
    out.append(((spec.t, spec.t_inv), (), ""))
    out.append(((spec.t_inv, spec.t), (), ""))
    return out


def _system(rels, order, labels) -> RewriteSystem:
    S = RewriteSystem.from_relations(rels, order, labels)
    if len(S) != len(rels):
        raise HnnSpecError("a relation has equal sides")
    for (l, r), lw in zip(rels, S.leads):
        if lw != l:
            raise HnnSpecError(f"the HNN order makes {show(lw)} lead instead of {show(l)}")
    return S


def hnn_presentation(spec: HnnSpec) -> RewriteSystem:
    rels = hnn_relations(spec)
    return _system([(l, r) for l, r, _ in rels], spec.order(), [lab or None for _, _, lab in rels])


@dataclass
class HnnExtensionSpec:
    base: HnnSpec
    A: FiniteGroup
    action: Dict[str, Automorphism] = field(default_factory=dict)
    factors: Dict[Tuple[str, str], str] = field(default_factory=dict)

    def __post_init__(self):
        b = self.base
        letters = set(b.omega) | {b.t, b.t_inv}
        clash = set(self.A.nonidentity) & letters
        if clash:
            raise HnnSpecError(f"letters {sorted(clash)} are used by both A and B")
        for y in letters:
            self.action.setdefault(y, Automorphism.identity(self.A))
        for y, psi in self.action.items():
            if y not in letters:
                raise HnnSpecError(f"action given for unknown letter {y!r}")
            if psi.group != self.A:
                raise HnnSpecError(f"automorphism for {y!r} acts on another group")
        for (x, y), val in self.factors.items():
            if val not in self.A:
                raise HnnSpecError(f"factor ({x},{y}) = {val!r} is not an element of {self.A.name}")
            if x not in b.omega or (y not in b.omega and y not in (b.t, b.t_inv)):
                raise HnnSpecError(f"factor ({x},{y}) does not belong to a relation of B")
            if val == IDENTITY:
                continue
            if y in b.omega and y == b.H.inv(x) and y != x:
                raise HnnSpecError(f"factor ({x},{y}) of an inverse pair must be 1")
            if y in (b.t, b.t_inv) and b.degenerate(x, 1 if y == b.t else -1):
                raise HnnSpecError(f"({x},{y}) belongs to no relation: {x}{y} is irreducible")

    # factor values with all conventions applied
    def f(self, h: str, h2: str) -> str:
        if h == IDENTITY or h2 == IDENTITY:
            return IDENTITY
        return self.factors.get((h, h2), IDENTITY)

    def ft(self, h: str, eps: int) -> str:
        if h == IDENTITY:
            return IDENTITY
        return self.factors.get((h, self.base.stable_letter(eps)), IDENTITY)

    def act(self, a: str, *letters: str) -> str:
        for y in letters:
            if y != IDENTITY:
                a = self.action[y](a)
        return a


def build_hnn_extension_system(espec: HnnExtensionSpec) -> RewriteSystem:
    """Relations aa' = [aa'], ay = y a^y, hh' = [hh'](h,h'), h t = h_C t phi(c_h)(h,t),
    h t^-1 = h_D t^-1 phi^-1(d_h)(h,t^-1), t^e t^-e = 1, in this rule order."""
    A, b = espec.A, espec.base
    ys = b.omega + (b.t, b.t_inv)
    rels, labels = [], []
    for a in A.nonidentity:
        for a2 in A.nonidentity:
            rels.append(((a, a2), _w(A.mul(a, a2))))
            labels.append("A")
    for a in A.nonidentity:
        for y in ys:
            rels.append(((a, y), (y,) + _w(espec.action[y](a))))
            labels.append("act")
    for l, r, lab in hnn_relations(b):
        if len(l) == 2 and l[0] in b.omega:
            r = r + _w(espec.f(*l) if l[1] in b.omega else espec.ft(l[0], 1 if l[1] == b.t else -1))
        rels.append((l, r))
        labels.append(lab or None)
    return _system(rels, b.order(A.nonidentity), labels)


# --- (h1)-(h9) -------------------------------------------------------------------

@dataclass
class HFailure:
    condition: str
    instance: Dict[str, str]
    lhs: str
    rhs: str

    def __str__(self):
        inst = ", ".join(f"{k}={v}" for k, v in self.instance.items())
        return f"{self.condition} fails at {inst}: {self.lhs} != {self.rhs}"


@dataclass
class HReport:
    checked: Dict[str, int]
    failures: List[HFailure]

    @property
    def passed(self) -> bool:
        return not self.failures

    def by_condition(self) -> Dict[str, bool]:
        bad = {f.condition for f in self.failures}
        return {c: c not in bad for c in self.checked}

    def as_dict(self) -> dict:
        return {"passed": self.passed, "conditions": self.by_condition(),
                "failures": [str(f) for f in self.failures[:20]]}


H_CONDITIONS = ("h1", "h2", "h3", "h4", "h5", "h6", "h7", "h8", "h9")


def check_h_conditions(espec: HnnExtensionSpec, max_failures: int = 50) -> HReport:
    """Evaluate the nine identities in A over every instance.

    (h1)  (h,[h'h''])(h',h'') = ([hh'],h'')(h,h')^{h''}
    (h2)  ([hh'],t)(h,h')^t = (x,y)(k,t)^{y}(h,h'_C)^{t y}(h',t),
          k = [h h'_C], x = phi(c_k), y = phi(c_h')
    (h3)  the same with t^-1, D and phi^-1
    (h4)  (h_C,c_h)(phi(c_h),t^-1)(h,t)^{t^-1} = 1
    (h5)  (h_D,d_h)(phi^-1(d_h),t)(h,t^-1)^t = 1
    (h6)  (h,h')a^{hh'} = a^{[hh']}(h,h')
    (h7)  (h,t)a^{ht} = a^{h_C t phi(c_h)}(h,t)
    (h8)  the same with t^-1, D and phi^-1
    (h9)  a^{t^e t^-e} = a
    """
    A, b = espec.A, espec.base
    H = b.H
    f, ft, act = espec.f, espec.ft, espec.act
    m = A.mul
    checked: Counter = Counter()
    fails: List[HFailure] = []

    def check(name, inst, lhs, rhs):
        checked[name] += 1
        if lhs != rhs and len(fails) < max_failures:
            fails.append(HFailure(name, inst, lhs, rhs))

    H1 = b.omega
    for h in H1:
        for h2 in H1:
            for h3 in H1:
                lhs = m(f(h, H.mul(h2, h3)), f(h2, h3))
                rhs = m(f(H.mul(h, h2), h3), act(f(h, h2), h3))
                check("h1", {"h": h, "h'": h2, "h''": h3}, lhs, rhs)
    for eps, name in ((1, "h2"), (-1, "h3")):
        s = b.stable_letter(eps)
        for h in H1:
            for h2 in H1:
                g = H.mul(h, h2)
                rep2, c2 = b.decompose(h2, eps)
                k = H.mul(h, rep2)
                _, ck = b.decompose(k, eps)
                x, y = b.across(ck, eps), b.across(c2, eps)
                lhs = m(ft(g, eps), act(f(h, h2), s))
                rhs = A.prod([f(x, y), act(ft(k, eps), y), act(f(h, rep2), s, y), ft(h2, eps)])
                check(name, {"h": h, "h'": h2}, lhs, rhs)
    for eps, name in ((1, "h4"), (-1, "h5")):
        back = b.stable_letter(-eps)
        for h in H1:
            rep, c = b.decompose(h, eps)
            lhs = A.prod([f(rep, c), ft(b.across(c, eps), -eps), act(ft(h, eps), back)])
            check(name, {"h": h}, lhs, IDENTITY)
    for h in H1:
        for h2 in H1:
            for a in A.elements:
                check("h6", {"h": h, "h'": h2, "a": a},
                      m(f(h, h2), act(a, h, h2)), m(act(a, H.mul(h, h2)), f(h, h2)))
    for eps, name in ((1, "h7"), (-1, "h8")):
        s = b.stable_letter(eps)
        for h in H1:
            rep, c = b.decompose(h, eps)
            for a in A.elements:
                check(name, {"h": h, "a": a},
                      m(ft(h, eps), act(a, h, s)), m(act(a, rep, s, b.across(c, eps)), ft(h, eps)))
    for a in A.elements:
        check("h9", {"a": a, "eps": "1"}, act(a, b.t, b.t_inv), a)
        check("h9", {"a": a, "eps": "-1"}, act(a, b.t_inv, b.t), a)
    return HReport({c: checked[c] for c in H_CONDITIONS}, fails)


# --- certification ---------------------------------------------------------------

@dataclass
class HnnReport:
    h: HReport
    condition_I: engine.ConditionReport
    condition_II: engine.ConditionReport
    system: RewriteSystem

    @property
    def passed(self) -> bool:
        return self.h.passed and self.condition_I.passed and self.condition_II.passed

    @property
    def routes_agree(self) -> bool:
        """(h1)-(h9) hold exactly iff the sampled (II) route finds no witness."""
        return self.h.passed == self.condition_II.passed

    def as_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "h_conditions": dict(self.h.as_dict(), route="exact"),
            "condition_I": dict(self.condition_I.as_dict(), route="evidence-based"),
            "condition_II": dict(self.condition_II.as_dict(), route="evidence-based"),
            "routes_agree": self.routes_agree,
        }


def check_extension_hnn(espec: HnnExtensionSpec, samples: int = 500, max_ctx_len: int = 4,
                        seed: int = 0, max_steps: int = 10_000) -> HnnReport:
    S = build_hnn_extension_system(espec)
    h = check_h_conditions(espec)
    c1 = engine.check_condition_I(S, samples, max_ctx_len, seed)
    c2 = engine.check_condition_II(S, samples, max_ctx_len, seed, max_steps)
    return HnnReport(h, c1, c2, S)


# --- normal forms and models -------------------------------------------------------

@dataclass
class NormalFormReport:
    words: List[Word]
    injective: Optional[bool] = None
    collision: Optional[Tuple[Word, Word]] = None
    reducible: List[Word] = field(default_factory=list)


def hnn_normal_forms(espec: HnnExtensionSpec, max_len: int,
                     model: Optional[Callable[[Word], Hashable]] = None,
                     S: Optional[RewriteSystem] = None) -> NormalFormReport:
    """Irr(S) up to ``max_len``; with a model, also check that distinct normal
    forms evaluate to distinct model elements."""
    S = S or build_hnn_extension_system(espec)
    words = engine.irr_enumerate(S, max_len)
    bad = [w for w in words if any(S.matches(w))]
    rep = NormalFormReport(words, reducible=bad)
    if model is not None:
        seen: Dict[Hashable, Word] = {}
        rep.injective = True
        for w in words:
            v = model(w)
            if v in seen:
                rep.injective = False
                rep.collision = (seen[v], w)
                break
            seen[v] = w
    return rep


class ProductModel:
    """A x H x Z, the extension with trivial data when C = D = H and phi = id."""

    def __init__(self, espec: HnnExtensionSpec):
        self.A, self.H, self.b = espec.A, espec.base.H, espec.base

    def __call__(self, w: Word):
        a, h, n = IDENTITY, IDENTITY, 0
        for x in w:
            if x == self.b.t:
                n += 1
            elif x == self.b.t_inv:
                n -= 1
            elif x in self.H:
                h = self.H.mul(h, x)
            else:
                a = self.A.mul(a, x)
        return a, h, n

    def generators(self) -> List[str]:
        return list(self.A.nonidentity) + list(self.H.nonidentity) + [self.b.t, self.b.t_inv]


class FreeProductModel:
    """A x (H * Z), the extension with trivial data when C = D = 1.

    The H * Z part is kept as a reduced sequence of syllables: a non-identity
    element of H, or a nonzero power of t."""

    def __init__(self, espec: HnnExtensionSpec):
        self.A, self.H, self.b = espec.A, espec.base.H, espec.base

    def __call__(self, w: Word):
        a = IDENTITY
        seq: List[Tuple[str, object]] = []
        for x in w:
            if x in (self.b.t, self.b.t_inv):
                syl = ("t", 1 if x == self.b.t else -1)
            elif x in self.H:
                syl = ("h", x)
            else:
                a = self.A.mul(a, x)
                continue
            if seq and seq[-1][0] == syl[0]:
                kind, v = seq.pop()
                v = v + syl[1] if kind == "t" else self.H.mul(v, syl[1])
                if v not in (0, IDENTITY):
                    seq.append((kind, v))
            else:
                seq.append(syl)
        return a, tuple(seq)

    def generators(self) -> List[str]:
        return list(self.A.nonidentity) + list(self.H.nonidentity) + [self.b.t, self.b.t_inv]


class TwistedProductModel(ProductModel):
    """Triples (a, h, n) with (a,h,n)(a',h',n') = (a a' chi(h)^n', h h', n + n').

    This is the extension of an abelian A by H x Z with trivial action,
    (h,h') = 1, (h,t) = chi(h) and (h,t^-1) = chi(h)^-1 for a homomorphism
    chi: H -> A.  chi = 1 gives A x H x Z."""

    def __init__(self, espec: HnnExtensionSpec, chi: Dict[str, str]):
        super().__init__(espec)
        self.chi = chi

    def __call__(self, w: Word):
        A = self.A
        a, h, n = IDENTITY, IDENTITY, 0
        for x in w:
            if x in (self.b.t, self.b.t_inv):
                step = 1 if x == self.b.t else -1
                c = self.chi[h] if step == 1 else A.inv(self.chi[h])
                a = A.mul(a, c)
                n += step
            elif x in self.H:
                h = self.H.mul(h, x)
            else:
                a = A.mul(a, x)
        return a, h, n


def _twist(espec: HnnExtensionSpec) -> Optional[Dict[str, str]]:
    """chi with (h,t) = chi(h), (h,t^-1) = chi(h)^-1, if the data has that shape."""
    A, H = espec.A, espec.base.H
    if not A.is_abelian() or any(espec.f(h, h2) != IDENTITY for h in H.nonidentity for h2 in H.nonidentity):
        return None
    chi = {h: espec.ft(h, 1) for h in H.elements}
    if any(espec.ft(h, -1) != A.inv(chi[h]) for h in H.elements):
        return None
    if any(chi[H.mul(x, y)] != A.mul(chi[x], chi[y]) for x in H.elements for y in H.elements):
        return None
    return chi


def model_for(espec: HnnExtensionSpec):
    """A concrete model of the extension group, when one is known; else None.

    Covered: trivial action with B = H x Z (C = D = H, phi = id) and twisted
    factors, and trivial data with B = H * Z (C = D = 1)."""
    b = espec.base
    if not all(p.is_identity() for p in espec.action.values()):
        return None
    if len(b.C.members) == len(b.H) and all(b.phi(c) == c for c in b.C.members):
        chi = _twist(espec)
        return TwistedProductModel(espec, chi) if chi is not None else None
    if len(b.C.members) == 1 and all(v == IDENTITY for v in espec.factors.values()):
        return FreeProductModel(espec)
    return None


trivial_model = model_for


def model_ball_sizes(model, max_len: int) -> List[int]:
    """Number of model elements of word length <= n, for n = 0..max_len (BFS)."""
    gens = model.generators()
    seen = {model(EMPTY): EMPTY}
    frontier = [EMPTY]
    sizes = [1]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in gens:
                u = w + (x,)
                v = model(u)
                if v not in seen:
                    seen[v] = u
                    nxt.append(u)
        frontier = nxt
        sizes.append(len(seen))
    return sizes
