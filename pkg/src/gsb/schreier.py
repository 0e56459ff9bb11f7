"""Schreier extensions of a finite group A by a group B = sgp<Y | R>.

The extension is presented on A1 u Y by

    a a' = [a a'],   v = h_v (v),   a y = y a^y

and ordered by the tower order.  ``check_extension`` asks the engine whether
every composition of that system is trivial; ``derive_conditions`` runs the
same reductions with the factor values kept as formal letters, which yields
the extension conditions as equations in A.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import engine
from .engine import CERTIFIED, Presentation, RewriteSystem
from .groups import (IDENTITY, Automorphism, ExtensionParams, FiniteGroup, GroupError,
                     SearchGuardExceeded, find_isomorphism)
from .orders import Tower
from .words import EMPTY, Word, show, word


class ExtensionSpecError(ValueError):
    pass


class ShapeFailure(RuntimeError):
    """Symbolic reduction did not end in the shape z (xi - zeta)."""


def is_inverse_relation(v: Word, h: Word, B: Presentation) -> bool:
    return len(v) == 2 and not h and v[0] != v[1] and B.inverses.get(v[0]) == v[1]


@dataclass
class ExtensionSpec:
    A: FiniteGroup
    B: Presentation
    action: Dict[str, Automorphism]
    factors: Dict[Word, str] = field(default_factory=dict)

    def __post_init__(self):
        self.R = self.B.certified_minimal()
        self.factors = {word(v): x for v, x in self.factors.items()}
        clash = set(self.A.nonidentity) & set(self.B.letters)
        if clash:
            raise ExtensionSpecError(f"letters {sorted(clash)} are used by both A and B")
        for y in self.B.letters:
            if y not in self.action:
                raise ExtensionSpecError(f"no automorphism given for letter {y!r}")
            if self.action[y].group is not self.A and self.action[y].group != self.A:
                raise ExtensionSpecError(f"automorphism for {y!r} acts on another group")
        leads = set(self.R.leads)
        for v, x in self.factors.items():
            if v not in leads:
                raise ExtensionSpecError(f"factor given for {show(v)}, which is not a leading word of R")
            if x not in self.A:
                raise ExtensionSpecError(f"factor value {x!r} is not an element of {self.A.name}")
        for v, h in self.omega():
            if is_inverse_relation(v, h, self.B) and self.factor(v) != IDENTITY:
                raise ExtensionSpecError(
                    f"factor of the inverse relation {show(v)} = 1 must be 1, got {self.factor(v)}")

    def omega(self) -> List[Tuple[Word, Word]]:
        """(v, h_v) for every rule of R."""
        out = []
        for i, v in enumerate(self.R.leads):
            _, tail = self.R.rule_sides(i)
            (h, _), = tail.items()
            out.append((v, h))
        return out

    def factor(self, v: Word) -> str:
        return self.factors.get(v, IDENTITY)

    def act(self, a: str, u: Word) -> str:
        return action_on_word(a, u, self.action)

    def params(self) -> ExtensionParams:
        return ExtensionParams(
            action=tuple(sorted((y, self.action[y].images) for y in self.B.letters)),
            factors=tuple(sorted((v, self.factor(v)) for v, _ in self.omega())))


def action_on_word(a: str, u: Word, action: Mapping[str, Automorphism]) -> str:
    """a^u: apply psi_{y1}, then psi_{y2}, ... along u."""
    for y in u:
        if y not in action:
            raise ExtensionSpecError(f"no automorphism for letter {y!r}")
        a = action[y](a)
    return a


def build_extension_system(spec: ExtensionSpec) -> RewriteSystem:
    A = spec.A
    A1 = A.nonidentity
    Y = spec.B.letters
    order = Tower(A1, Y)
    rels, labels = [], []
    for a in A1:
        for a2 in A1:
            p = A.mul(a, a2)
            rels.append(((a, a2), () if p == IDENTITY else (p,)))
            labels.append("A")
    for v, h in spec.omega():
        f = spec.factor(v)
        rels.append((v, h + (() if f == IDENTITY else (f,))))
        labels.append("R")
    for a in A1:
        for y in Y:
            rels.append(((a, y), (y, spec.action[y](a))))
            labels.append("act")
    S = RewriteSystem.from_relations(rels, order, labels)
    for (l, _), lw in zip(rels, S.leads):
        assert l == lw, f"tower order made {show(lw)} leading instead of {show(l)}"
    return S


# --- checking -------------------------------------------------------------------

@dataclass
class ActionCheck:
    v: Word
    a: str
    lhs: str
    rhs: str

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def check_action_condition(spec: ExtensionSpec) -> List[ActionCheck]:
    """(v) a^v = a^{h_v} (v) for every v in Omega and a in A."""
    A = spec.A
    out = []
    for v, h in spec.omega():
        f = spec.factor(v)
        for a in A.elements:
            out.append(ActionCheck(v, a, A.mul(f, spec.act(a, v)), A.mul(spec.act(a, h), f)))
    return out


@dataclass
class SchreierReport:
    passed: bool
    action_failures: List[ActionCheck]
    compositions: int
    composition_failures: List[Tuple[engine.Composition, str]]
    equation_failures: List[str] = field(default_factory=list)
    system: Optional[RewriteSystem] = None

    def as_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "compositions": self.compositions,
            "action_failures": [f"v={show(c.v)} a={c.a}: {c.lhs} != {c.rhs}" for c in self.action_failures],
            "composition_failures": [f"{c.describe()} remainder {r}" for c, r in self.composition_failures],
            "condition_failures": self.equation_failures,
        }


def check_extension(spec: ExtensionSpec, with_equations: bool = True,
                    stop_at_first: bool = False) -> SchreierReport:
    """Every composition of the extension system trivial <=> extension conditions hold."""
    S = build_extension_system(spec)
    acts = [c for c in check_action_condition(spec) if not c.ok]
    comps = engine.find_compositions(S)
    fails = []
    if not (acts and stop_at_first):
        for c in comps:
            ok, tr = engine.is_trivial(c, S)
            if not ok:
                fails.append((c, str(tr.remainder)))
                if stop_at_first:
                    break
    eq_fail = []
    if with_equations and (fails or acts):
        for eq in derive_conditions(spec.B).equations:
            bad = eq.counterexample(spec)
            if bad:
                eq_fail.append(bad)
    return SchreierReport(not fails and not acts, acts, len(comps), fails, eq_fail, S)


def is_gsb_extension(spec: ExtensionSpec) -> bool:
    """Independent route: full engine certification of the extension system."""
    return engine.check_gsb(build_extension_system(spec), stop_at_first=True).ok


# --- symbolic derivation ----------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    """A formal A-letter: factor value (or the generic element ``a``) acted
    on by the Y-word ``sup``."""

    name: str
    sup: Word = EMPTY

    def __str__(self):
        return self.name + ("^{" + " ".join(self.sup) + "}" if self.sup else "")


def _product_str(atoms: Sequence[Atom]) -> str:
    return " ".join(map(str, atoms)) if atoms else "1"


@dataclass
class Equation:
    kind: str  # "composition" or "action"
    lhs: Tuple[Atom, ...]
    rhs: Tuple[Atom, ...]
    source: str = ""

    def __str__(self):
        return f"{_product_str(self.lhs)} = {_product_str(self.rhs)}"

    def normalized(self) -> str:
        """Side-order independent form used to compare equations."""
        l, r = _product_str(self.lhs), _product_str(self.rhs)
        return f"{l} = {r}" if l <= r else f"{r} = {l}"

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    def evaluate(self, spec: ExtensionSpec, a: str = IDENTITY) -> Tuple[str, str]:
        leads = _label_to_lead(spec)
        A = spec.A

        def val(atom: Atom) -> str:
            base = a if atom.name == "a" else spec.factor(leads[atom.name])
            return spec.act(base, atom.sup)

        return A.prod(map(val, self.lhs)), A.prod(map(val, self.rhs))

    def counterexample(self, spec: ExtensionSpec) -> Optional[str]:
        elems = spec.A.elements if self.kind == "action" else (IDENTITY,)
        for a in elems:
            l, r = self.evaluate(spec, a)
            if l != r:
                at = f" at a={a}" if self.kind == "action" else ""
                return f"{self}{at}: {l} != {r}"
        return None


def _label_to_lead(spec: ExtensionSpec) -> Dict[str, Word]:
    R = spec.R
    return {_rule_label(R, i): v for i, v in enumerate(R.leads)}


def _rule_label(R: RewriteSystem, i: int) -> str:
    v = R.leads[i]
    lab = R.labels[i]
    return lab if lab else "(" + ",".join(v) + ")"


@dataclass
class DerivedConditions:
    presentation: str
    equations: List[Equation]
    compositions: int
    header: str = "reduction strategy: leftmost occurrence of the first matching rule; R rules before action moves"

    def lines(self) -> List[str]:
        return [str(e) for e in self.equations]

    def normalized(self) -> set:
        return {e.normalized() for e in self.equations}


def _symbolic_reduce(items: list, R: RewriteSystem, forced: set, max_steps: int = 10_000) -> Tuple[Word, Tuple[Atom, ...]]:
    """Rewrite a mixed list of Y-letters and Atoms to z followed by atoms."""
    for _ in range(max_steps):
        best = None
        # R-rules first: rule index order, leftmost occurrence inside a run of Y-letters
        for i, lw in enumerate(R.leads):
            L = len(lw)
            for p in range(len(items) - L + 1):
                seg = items[p:p + L]
                if all(isinstance(x, str) for x in seg) and tuple(seg) == lw:
                    best = (i, p)
                    break
            if best:
                break
        if best is not None:
            i, p = best
            v = R.leads[i]
            _, tail = R.rule_sides(i)
            (h, _), = tail.items()
            lab = _rule_label(R, i)
            new = list(h) + ([] if v in forced else [Atom(lab)])
            items = items[:p] + new + items[p + len(v):]
            continue
        swap = next((k for k in range(len(items) - 1)
                     if isinstance(items[k], Atom) and isinstance(items[k + 1], str)), None)
        if swap is None:
            z = tuple(x for x in items if isinstance(x, str))
            atoms = tuple(x for x in items if isinstance(x, Atom))
            if items[:len(z)] != list(z):
                raise ShapeFailure("atoms left between Y-letters")
            return z, atoms
        at, y = items[swap], items[swap + 1]
        items = items[:swap] + [y, Atom(at.name, at.sup + (y,))] + items[swap + 2:]
    raise ShapeFailure(f"symbolic reduction exceeded {max_steps} steps")


def _implied(eq: Equation, earlier: Sequence[Equation], slack: int = 2) -> bool:
    """True when eq reads (v)^p = (v)^q and follows from earlier equations
    of the same kind: (v)^s = (v)^s' gives (v)^{s u} = (v)^{s' u}, since every
    a -> a^u is an automorphism.  Bounded search, so a False is inconclusive."""
    if len(eq.lhs) != 1 or len(eq.rhs) != 1 or eq.lhs[0].name != eq.rhs[0].name:
        return False
    name = eq.lhs[0].name
    pairs = [(e.lhs[0].sup, e.rhs[0].sup) for e in earlier
             if len(e.lhs) == 1 and len(e.rhs) == 1 and e.lhs[0].name == name == e.rhs[0].name]
    if not pairs:
        return False
    start, goal = eq.lhs[0].sup, eq.rhs[0].sup
    bound = max(len(start), len(goal)) + slack
    seen, frontier = {start}, [start]
    while frontier:
        nxt = []
        for s in frontier:
            for p, q in pairs + [(q, p) for p, q in pairs]:
                if s[:len(p)] == p:
                    t = q + s[len(p):]
                    if len(t) <= bound and t not in seen:
                        if t == goal:
                            return True
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return False


def derive_conditions(B: Presentation, max_steps: int = 10_000) -> DerivedConditions:
    """Extension conditions of any A by B, with factor values kept formal.

    One equation xi = zeta per composition (v1, v2)_w of R (xi from the
    ``d h_{v2} (v2)`` side, zeta from ``h_{v1} (v1) c``), followed by the
    family (v) a^v = a^{h_v} (v).  Factors of inverse relations are 1 and
    are dropped; equations that hold identically, or that follow from an
    earlier one by acting with an automorphism, are omitted.
    """
    R = B.certified_minimal()
    omega = []
    for i, v in enumerate(R.leads):
        _, tail = R.rule_sides(i)
        (h, _), = tail.items()
        omega.append((v, h))
    forced = {v for v, h in omega if is_inverse_relation(v, h, B)}

    def with_factor(i):
        v, h = omega[i]
        return list(h) + ([] if v in forced else [Atom(_rule_label(R, i))])

    eqs: List[Equation] = []
    seen = set()
    comps = engine.find_compositions(R)
    for comp in comps:
        if comp.kind != "intersection":
            raise ShapeFailure(f"inclusion composition {comp.describe()} in a minimal basis")
        c, d = comp.b, comp.a
        xi_z, xi = _symbolic_reduce(list(d) + with_factor(comp.g), R, forced, max_steps)
        ze_z, zeta = _symbolic_reduce(with_factor(comp.f) + list(c), R, forced, max_steps)
        if xi_z != ze_z:
            raise ShapeFailure(f"{comp.describe()}: B-parts {show(xi_z)} and {show(ze_z)} differ")
        eq = Equation("composition", xi, zeta, f"w={show(comp.w)}")
        if _implied(eq, eqs):
            continue
        if not eq.is_trivial() and eq.normalized() not in seen:
            seen.add(eq.normalized())
            eqs.append(eq)
    for i, (v, h) in enumerate(omega):
        f = [] if v in forced else [Atom(_rule_label(R, i))]
        eq = Equation("action", tuple(f + [Atom("a", v)]), tuple([Atom("a", h)] + f), f"v={show(v)}")
        if not eq.is_trivial() and eq.normalized() not in seen:
            seen.add(eq.normalized())
            eqs.append(eq)
    return DerivedConditions(B.name, eqs, len(comps))


# --- the extension group ------------------------------------------------------------

def presentation_elements(R: RewriteSystem, bound: int = 64) -> List[Word]:
    """Irr(R) when finite; raises if words of length ``bound`` still occur."""
    words = engine.irr_enumerate(R, bound)
    if any(len(w) == bound for w in words):
        raise ValueError("B looks infinite: irreducible words reach the length bound")
    return words


def _name(b: Word, a: str = IDENTITY) -> str:
    parts = list(b) + ([] if a == IDENTITY else [a])
    return ".".join(parts) if parts else IDENTITY


def presentation_group(B: Presentation, name: Optional[str] = None) -> FiniteGroup:
    R = B.certified_minimal()
    els = presentation_elements(R)
    names = [_name(b) for b in els]
    table = [[_name(engine.normal_form(b + b2, R)) for b2 in els] for b in els]
    return FiniteGroup(names, table, name or B.name)


@dataclass
class ExtensionGroup:
    group: FiniteGroup
    pairs: Dict[str, Tuple[Word, str]]   # element name -> (b, a)
    embed: Dict[str, str]                # a -> element name
    spec: ExtensionSpec


def extension_group(spec: ExtensionSpec, check: bool = True) -> ExtensionGroup:
    """The group on normal forms b a (b in Irr(R), a in A)."""
    if check:
        rep = check_extension(spec, with_equations=False)
        if not rep.passed:
            raise ExtensionSpecError("extension conditions fail; no group to build")
    S = build_extension_system(spec)
    A = spec.A
    Bw = presentation_elements(spec.R)
    pairs = [(b, a) for b in Bw for a in A.elements]
    names = [_name(b, a) for b, a in pairs]
    Yset = set(spec.B.letters)

    def split(w: Word) -> Tuple[Word, str]:
        k = len(w)
        while k and w[k - 1] not in Yset:
            k -= 1
        tail = w[k:]
        if len(tail) > 1:
            raise ValueError(f"normal form {show(w)} is not of shape b a")
        return w[:k], (tail[0] if tail else IDENTITY)

    def as_word(b, a):
        return b + (() if a == IDENTITY else (a,))

    table = []
    for b, a in pairs:
        row = []
        for b2, a2 in pairs:
            nf = engine.normal_form(as_word(b, a) + as_word(b2, a2), S)
            row.append(_name(*split(nf)))
        table.append(row)
    G = FiniteGroup(names, table, f"E({A.name},{spec.B.name})")
    return ExtensionGroup(G, dict(zip(names, pairs)), {a: _name(EMPTY, a) for a in A.elements}, spec)


@dataclass
class StructureReport:
    order_ok: bool
    embedding_hom: bool
    normal: bool
    quotient_well_defined: bool
    quotient_isomorphic: bool

    @property
    def passed(self) -> bool:
        return all(vars(self).values())


def verify_extension_structure(E: ExtensionGroup, B_group: Optional[FiniteGroup] = None) -> StructureReport:
    """|G| = |A| |B|, A embeds as a normal subgroup, and G/A is isomorphic to B."""
    G, A, spec = E.group, E.spec.A, E.spec
    Bw = presentation_elements(spec.R)
    order_ok = len(G) == len(A) * len(Bw)
    emb = E.embed
    hom = len(set(emb.values())) == len(A) and all(
        emb[A.mul(x, y)] == G.mul(emb[x], emb[y]) for x in A.elements for y in A.elements)
    image = set(emb.values())
    normal = all(G.prod([G.inv(g), n, g]) in image for g in G.elements for n in image)
    # quotient: the coset of (b, a) is labelled by b
    qname = {b: _name(b) for b in Bw}
    qtable: Dict[Tuple[str, str], str] = {}
    well = True
    for g in G.elements:
        for h in G.elements:
            k = (qname[E.pairs[g][0]], qname[E.pairs[h][0]])
            val = qname[E.pairs[G.mul(g, h)][0]]
            if qtable.setdefault(k, val) != val:
                well = False
    iso = False
    if well:
        names = [qname[b] for b in Bw]
        Q = FiniteGroup(names, [[qtable[(x, y)] for y in names] for x in names], "G/A")
        target = B_group if B_group is not None else presentation_group(spec.B)
        iso = find_isomorphism(Q, target) is not None
    return StructureReport(order_ok, hom, normal, well, iso)


# --- enumeration ------------------------------------------------------------------------

@dataclass
class EnumeratedExtension:
    params: ExtensionParams
    spec: ExtensionSpec
    fingerprint: dict


def enumerate_extensions(A: FiniteGroup, B: Presentation, guard: int = 200_000,
                         fingerprints: bool = True) -> List[EnumeratedExtension]:
    """All (action, factor set) pairs for which the extension system is a GSB."""
    R = B.certified_minimal()
    auts = A.automorphisms()
    omega = []
    for i, v in enumerate(R.leads):
        _, tail = R.rule_sides(i)
        (h, _), = tail.items()
        omega.append((v, h))
    free = [v for v, h in omega if not is_inverse_relation(v, h, B)]
    space = len(auts) ** len(B.letters) * len(A) ** len(free)
    if space > guard:
        raise SearchGuardExceeded(f"search space {space} exceeds guard {guard}")
    out = []
    for acts in itertools.product(auts, repeat=len(B.letters)):
        action = dict(zip(B.letters, acts))
        for vals in itertools.product(A.elements, repeat=len(free)):
            spec = ExtensionSpec(A, B, action, dict(zip(free, vals)))
            if check_extension(spec, with_equations=False, stop_at_first=True).passed:
                fp = extension_group(spec, check=False).group.fingerprint() if fingerprints else {}
                out.append(EnumeratedExtension(spec.params(), spec, fp))
    return out
