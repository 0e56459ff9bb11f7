"""Finite groups given by Cayley tables, and the bits of group theory the
extension machinery needs: automorphisms, subgroups with coset data,
partial isomorphisms, isomorphism testing and a brute-force cocycle oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

IDENTITY = "1"


class GroupError(ValueError):
    pass


class SearchGuardExceeded(RuntimeError):
    pass


class FiniteGroup:
    """A finite group on named elements; ``elements[0]`` is the identity ``"1"``."""

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[str]], name: str = "G",
                 validate: bool = True):
        self.name = name
        self.elements: Tuple[str, ...] = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise GroupError(f"{name}: duplicate element names")
        n = len(self.elements)
        try:
            self._table = [[self.index[x] for x in row] for row in table]
        except KeyError as exc:
            raise GroupError(f"{name}: unknown element {exc.args[0]!r} in table") from None
        if len(self._table) != n or any(len(r) != n for r in self._table):
            raise GroupError(f"{name}: table must be {n}x{n}")
        if validate:
            self._validate()
        self._inv = [self._table[i].index(0) for i in range(n)]

    def _validate(self):
        n = len(self.elements)
        t = self._table
        if self.elements[0] != IDENTITY:
            raise GroupError(f"{self.name}: first element must be the identity '1'")
        for i in range(n):
            if sorted(t[i]) != list(range(n)) or sorted(t[j][i] for j in range(n)) != list(range(n)):
                raise GroupError(f"{self.name}: table is not a Latin square")
            if t[0][i] != i or t[i][0] != i:
                raise GroupError(f"{self.name}: '1' is not an identity")
        if n <= 64:
            for i in range(n):
                for j in range(n):
                    ij = t[i][j]
                    for k in range(n):
                        if t[ij][k] != t[i][t[j][k]]:
                            raise GroupError(
                                f"{self.name}: not associative at "
                                f"({self.elements[i]}, {self.elements[j]}, {self.elements[k]})")

    # basic arithmetic on names
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={len(self)})"

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.elements == other.elements
                and self._table == other._table)

    def __hash__(self):
        return hash((self.elements, tuple(map(tuple, self._table))))

    @property
    def identity(self) -> str:
        return self.elements[0]

    @property
    def nonidentity(self) -> Tuple[str, ...]:
        return self.elements[1:]

    def mul(self, x: str, y: str) -> str:
        return self.elements[self._table[self.index[x]][self.index[y]]]

    def prod(self, xs: Iterable[str]) -> str:
        r = 0
        for x in xs:
            r = self._table[r][self.index[x]]
        return self.elements[r]

    def inv(self, x: str) -> str:
        return self.elements[self._inv[self.index[x]]]

    def table(self) -> List[List[str]]:
        return [[self.elements[j] for j in row] for row in self._table]

    def order_of(self, x: str) -> int:
        k, y = 1, x
        while y != IDENTITY:
            y = self.mul(y, x)
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self._table
        n = len(t)
        return all(t[i][j] == t[j][i] for i in range(n) for j in range(i))

    def center(self) -> List[str]:
        return [x for x in self.elements if all(self.mul(x, y) == self.mul(y, x) for y in self.elements)]

    def is_subgroup(self, members: Iterable[str]) -> bool:
        m = set(members)
        return (IDENTITY in m and all(self.mul(x, y) in m for x in m for y in m)
                and all(self.inv(x) in m for x in m))

    def generators(self) -> List[str]:
        """A small generating set, picked greedily by element order (largest first)."""
        gens: List[str] = []
        span = {IDENTITY}
        for x in sorted(self.elements, key=lambda e: (-self.order_of(e), self.index[e])):
            if x not in span:
                gens.append(x)
                span = self.closure(gens)
            if len(span) == len(self):
                break
        return gens

    def closure(self, gens: Iterable[str]) -> set:
        span = {IDENTITY}
        frontier = [IDENTITY]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
        return span

    def automorphisms(self) -> List["Automorphism"]:
        """All automorphisms, by extending maps on a generating set."""
        if len(self) > 8:
            raise GroupError("Aut(A) enumeration is limited to |A| <= 8")
        gens = self.generators()
        out = []
        choices = [[y for y in self.elements if self.order_of(y) == self.order_of(g)] for g in gens]
        for images in itertools.product(*choices):
            m = _extend_hom(self, self, dict(zip(gens, images)))
            if m is not None and len(set(m.values())) == len(self):
                out.append(Automorphism(self, m))
        out.sort(key=lambda a: a.images)
        return out

    def fingerprint(self) -> dict:
        return {
            "order": len(self),
            "order_profile": sorted(self.order_of(x) for x in self.elements),
            "abelian": self.is_abelian(),
            "center_size": len(self.center()),
        }


def _extend_hom(G: FiniteGroup, H: FiniteGroup, on_gens: Dict[str, str]) -> Optional[Dict[str, str]]:
    """Extend a map on generators of G to a homomorphism G -> H, or None."""
    m = {IDENTITY: H.identity}
    frontier = [IDENTITY]
    gens = list(on_gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                img = H.mul(m[x], on_gens[g])
                if y in m:
                    if m[y] != img:
                        return None
                else:
                    m[y] = img
                    nxt.append(y)
        frontier = nxt
    if len(m) != len(G):
        return None
    for x in G.elements:
        for y in G.elements:
            if m[G.mul(x, y)] != H.mul(m[x], m[y]):
                return None
    return m


class Automorphism:
    """A table-preserving permutation of a finite group."""

    __slots__ = ("group", "_map", "images")

    def __init__(self, group: FiniteGroup, mapping: Mapping[str, str], validate: bool = True):
        self.group = group
        self._map = {x: mapping.get(x, x) for x in group.elements}
        self.images: Tuple[str, ...] = tuple(self._map[x] for x in group.elements)
        if validate:
            self._validate(self._map)

    def _validate(self, m):
        G = self.group
        if sorted(m.values()) != sorted(G.elements):
            raise GroupError("automorphism is not a bijection")
        if m[IDENTITY] != IDENTITY:
            raise GroupError("automorphism must fix the identity")
        for x in G.elements:
            for y in G.elements:
                if m[G.mul(x, y)] != G.mul(m[x], m[y]):
                    raise GroupError(f"map does not preserve the product {x}*{y}")

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Automorphism({self.describe()})"

    @property
    def mapping(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(self._map.items())

    @classmethod
    def identity(cls, group: FiniteGroup) -> "Automorphism":
        return cls(group, {})

    @classmethod
    def inversion(cls, group: FiniteGroup) -> "Automorphism":
        return cls(group, {x: group.inv(x) for x in group.elements})

    def __call__(self, x: str) -> str:
        return self._map[x]

    def then(self, other: "Automorphism") -> "Automorphism":
        """Apply self first, then other."""
        return Automorphism(self.group, {x: other(self(x)) for x in self.group.elements}, validate=False)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.group, {v: k for k, v in self.mapping}, validate=False)

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping)

    def describe(self) -> str:
        moved = [f"{k}:{v}" for k, v in self.mapping if k != v]
        return " ".join(moved) if moved else "id"


class SubgroupWithCosets:
    """A subgroup together with ordered left-coset representatives.

    ``decompose(g)`` returns ``(rep, member)`` with ``g = rep * member``.
    The order of ``reps`` is the index ranking (I or J).
    """

    def __init__(self, parent: FiniteGroup, members: Iterable[str], reps: Sequence[str]):
        self.parent = parent
        self.members: FrozenSet[str] = frozenset(members)
        self.reps: Tuple[str, ...] = tuple(reps)
        self._decomp: Dict[str, Tuple[str, str]] = {}
        self._validate()

    def _validate(self):
        G = self.parent
        if not G.is_subgroup(self.members):
            raise GroupError(f"{sorted(self.members)} is not a subgroup of {G.name}")
        if len(set(self.reps)) != len(self.reps):
            raise GroupError("duplicate coset representatives")
        for r in self.reps:
            if r not in G:
                raise GroupError(f"coset representative {r!r} not in {G.name}")
        for r in self.reps:
            for m in self.members:
                g = G.mul(r, m)
                if g in self._decomp:
                    raise GroupError(f"coset representatives {self._decomp[g][0]} and {r} share a coset")
                self._decomp[g] = (r, m)
        if len(self._decomp) != len(G):
            missing = [g for g in G.elements if g not in self._decomp]
            raise GroupError(f"coset representatives miss {missing}")
        if self._decomp[IDENTITY][0] != IDENTITY:
            raise GroupError("the identity coset must be represented by '1'")

    @classmethod
    def with_default_reps(cls, parent: FiniteGroup, members: Iterable[str]) -> "SubgroupWithCosets":
        members = frozenset(members)
        reps, seen = [], set()
        for g in parent.elements:
            if g not in seen:
                reps.append(g)
                seen.update(parent.mul(g, m) for m in members)
        return cls(parent, members, reps)

    def decompose(self, g: str) -> Tuple[str, str]:
        return self._decomp[g]

    def rep_rank(self, r: str) -> int:
        return self.reps.index(r)

    def __contains__(self, g):
        return g in self.members


def coset_decompose(g: str, sub: SubgroupWithCosets) -> Tuple[str, str]:
    return sub.decompose(g)


class PartialIso:
    """An isomorphism phi: C -> D between subgroups of the same group."""

    def __init__(self, parent: FiniteGroup, source: Iterable[str], target: Iterable[str],
                 mapping: Mapping[str, str]):
        self.parent = parent
        self.source = frozenset(source)
        self.target = frozenset(target)
        self.mapping = dict(mapping)
        self.mapping.setdefault(IDENTITY, IDENTITY)
        if set(self.mapping) != set(self.source):
            raise GroupError("phi must be defined exactly on C")
        if sorted(self.mapping.values()) != sorted(self.target):
            raise GroupError("phi must be a bijection onto D")
        G = parent
        for x in self.source:
            for y in self.source:
                if self.mapping[G.mul(x, y)] != G.mul(self.mapping[x], self.mapping[y]):
                    raise GroupError(f"phi does not preserve {x}*{y}")
        self.inverse_mapping = {v: k for k, v in self.mapping.items()}

    def __call__(self, c: str) -> str:
        return self.mapping[c]

    def inv(self, d: str) -> str:
        return self.inverse_mapping[d]


# --- constructors -----------------------------------------------------------

def cyclic(n: int, gen: str = "a", name: Optional[str] = None) -> FiniteGroup:
    """Z_n with elements 1, a, a2, ..., a{n-1}."""
    names = [IDENTITY] + [gen if k == 1 else f"{gen}{k}" for k in range(1, n)]
    table = [[names[(i + j) % n] for j in range(n)] for i in range(n)]
    return FiniteGroup(names, table, name or f"Z{n}")


def klein(gens: Tuple[str, str] = ("a", "b"), name: str = "V4") -> FiniteGroup:
    a, b = gens
    return direct_product_named([IDENTITY, a], [IDENTITY, b], name)


def direct_product_named(x_names, y_names, name) -> FiniteGroup:
    """Product of two Z2-style groups given as [1, g]; used for V4."""
    G1 = FiniteGroup(x_names, [[x_names[(i + j) % 2] for j in range(2)] for i in range(2)], "X")
    G2 = FiniteGroup(y_names, [[y_names[(i + j) % 2] for j in range(2)] for i in range(2)], "Y")
    return direct_product(G1, G2, name)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """G x H; elements are named gh, or (g,h) when the factors share names."""
    shared = bool(set(G.nonidentity) & set(H.nonidentity))

    def nm(g, h):
        if g == IDENTITY and h == IDENTITY:
            return IDENTITY
        if shared:
            return f"({g},{h})"
        if g == IDENTITY:
            return h
        if h == IDENTITY:
            return g
        return f"{g}{h}"
    pairs = [(g, h) for g in G.elements for h in H.elements]
    pairs.sort(key=lambda p: (p != (IDENTITY, IDENTITY)))
    names = [nm(g, h) for g, h in pairs]
    table = [[nm(G.mul(g, g2), H.mul(h, h2)) for g2, h2 in pairs] for g, h in pairs]
    return FiniteGroup(names, table, name or f"{G.name}x{H.name}")


def symmetric3(name: str = "S3") -> FiniteGroup:
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
    names = [IDENTITY, "s", "u", "v", "r", "r2"]
    def comp(p, q):  # p then q
        return tuple(q[p[i]] for i in range(3))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[names[idx[comp(p, q)]] for q in perms] for p in perms]
    return FiniteGroup(names, table, name)


def trivial_group(name: str = "1") -> FiniteGroup:
    return FiniteGroup([IDENTITY], [[IDENTITY]], name)


# --- isomorphism ------------------------------------------------------------

def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[Dict[str, str]]:
    """Brute-force isomorphism search by mapping a generating set of G."""
    if len(G) != len(H) or G.fingerprint() != H.fingerprint():
        return None
    gens = G.generators()
    choices = [[y for y in H.elements if H.order_of(y) == G.order_of(g)] for g in gens]
    for images in itertools.product(*choices):
        m = _extend_hom(G, H, dict(zip(gens, images)))
        if m is not None and len(set(m.values())) == len(H):
            return m
    return None


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return find_isomorphism(G, H) is not None


def table_presentation(G: FiniteGroup, ranking: Optional[Sequence[str]] = None):
    """sgp<G1 | b b' = [b b']> with deg-lex on ``ranking`` (default: element order)."""
    from .engine import Presentation
    letters = tuple(ranking) if ranking is not None else G.nonidentity
    if sorted(letters) != sorted(G.nonidentity):
        raise GroupError("ranking must list exactly the non-identity elements")
    rels, labels = [], []
    for b in letters:
        for b2 in letters:
            p = G.mul(b, b2)
            rels.append(((b, b2), () if p == IDENTITY else (p,)))
            labels.append(f"({b},{b2})")
    inverses = {b: G.inv(b) for b in letters if G.inv(b) != b}
    return Presentation(letters, rels, inverses, labels, name=G.name)


# --- brute-force extension oracle ------------------------------------------

@dataclass(frozen=True)
class ExtensionParams:
    """Parameter set of an extension: automorphism images per letter and a
    factor value per relation (relation keyed by its leading word)."""

    action: Tuple[Tuple[str, Tuple[str, ...]], ...]
    factors: Tuple[Tuple[Tuple[str, ...], str], ...]

    def action_dict(self, A: FiniteGroup) -> Dict[str, Automorphism]:
        return {y: Automorphism(A, dict(zip(A.elements, imgs)), validate=False) for y, imgs in self.action}

    def factor_dict(self) -> Dict[Tuple[str, ...], str]:
        return dict(self.factors)


def table_factor_pairs(B: FiniteGroup) -> Tuple[List[Tuple[str, str]], List[Tuple[str, str]]]:
    """All (b, b') in B1 x B1, split into free pairs and pairs forced to 1
    (b' = b^-1 with b' != b)."""
    free, forced = [], []
    for b in B.nonidentity:
        for b2 in B.nonidentity:
            if b2 == B.inv(b) and b2 != b:
                forced.append((b, b2))
            else:
                free.append((b, b2))
    return free, forced


def cocycle_conditions_hold(A: FiniteGroup, B: FiniteGroup, action: Mapping[str, Automorphism],
                            factor: Mapping[Tuple[str, str], str]) -> bool:
    """Both identities of the table form of the extension conditions, over all of B and A."""
    def f(b, b2):
        if b == IDENTITY or b2 == IDENTITY:
            return IDENTITY
        return factor.get((b, b2), IDENTITY)

    def act(a, *bs):
        for b in bs:
            if b != IDENTITY:
                a = action[b](a)
        return a

    for b in B.elements:
        for b2 in B.elements:
            fb = f(b, b2)
            bb2 = B.mul(b, b2)
            for a in A.elements:
                if A.mul(fb, act(a, b, b2)) != A.mul(act(a, bb2), fb):
                    return False
            for b3 in B.elements:
                lhs = A.mul(f(b, B.mul(b2, b3)), f(b2, b3))
                rhs = A.mul(f(bb2, b3), act(fb, b3))
                if lhs != rhs:
                    return False
    return True


def brute_force_extensions(A: FiniteGroup, B: FiniteGroup, guard: int = 2_000_000) -> List[ExtensionParams]:
    """Scan every action B1 -> Aut(A) and every normalized factor set, keeping
    the pairs that satisfy the table form of the extension conditions."""
    auts = A.automorphisms()
    free, forced = table_factor_pairs(B)
    space = len(auts) ** len(B.nonidentity) * len(A) ** len(free)
    if space > guard:
        raise SearchGuardExceeded(f"search space {space} exceeds guard {guard}")
    out = []
    for acts in itertools.product(auts, repeat=len(B.nonidentity)):
        action = dict(zip(B.nonidentity, acts))
        for vals in itertools.product(A.elements, repeat=len(free)):
            factor = dict(zip(free, vals))
            if cocycle_conditions_hold(A, B, action, factor):
                allf = dict(factor)
                allf.update({p: IDENTITY for p in forced})
                out.append(ExtensionParams(
                    action=tuple(sorted((b, action[b].images) for b in B.nonidentity)),
                    factors=tuple(sorted(allf.items()))))
    return out
