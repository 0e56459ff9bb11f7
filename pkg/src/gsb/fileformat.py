"""The stanza file format and its translation into library objects.

A file is a list of stanzas::

    # comment
    [group A]
    cyclic: 2

    [presentation B]
    letters: x
    rel: x x -> 1 as a0

    [action]
    x = id

    [factorset]
    x x = a

Words are whitespace-separated letter names and ``1`` alone is the empty
word.  ``[action]`` and ``[factorset]`` entries use ``=``, every other stanza
uses ``key: value``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .engine import Presentation
from .groups import (IDENTITY, Automorphism, FiniteGroup, GroupError, PartialIso, SubgroupWithCosets,
                     cyclic, klein, symmetric3, table_presentation)
from .words import Word, word

EQ_STANZAS = ("action", "factorset")
KNOWN = ("group", "presentation", "order", "action", "factorset", "extension", "hnn", "limits")
_HEADER = re.compile(r"^\[\s*([A-Za-z_]+)(?:\s+([^\]\s]+))?\s*\]$")


class ParseError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None, path: str = ""):
        self.line = line
        where = f"{path or '<input>'}:{line}: " if line is not None else (f"{path}: " if path else "")
        super().__init__(where + msg)


@dataclass
class Entry:
    key: str
    value: str
    line: int = 0

    def __eq__(self, other):
        return isinstance(other, Entry) and (self.key, self.value) == (other.key, other.value)


@dataclass
class Stanza:
    kind: str
    name: str = ""
    entries: List[Entry] = field(default_factory=list)
    line: int = 0

    def __eq__(self, other):
        return (isinstance(other, Stanza) and (self.kind, self.name) == (other.kind, other.name)
                and self.entries == other.entries)

    def get(self, key: str, default=None) -> Optional[str]:
        vals = self.getall(key)
        return vals[-1] if vals else default

    def getall(self, key: str) -> List[str]:
        return [e.value for e in self.entries if e.key == key]

    def entry(self, key: str) -> Optional[Entry]:
        for e in self.entries:
            if e.key == key:
                return e
        return None


@dataclass
class InputDocument:
    stanzas: List[Stanza]
    path: str = ""

    def __eq__(self, other):
        return isinstance(other, InputDocument) and self.stanzas == other.stanzas

    def find(self, kind: str, name: Optional[str] = None) -> Optional[Stanza]:
        hits = [s for s in self.stanzas if s.kind == kind and (name is None or s.name == name)]
        if name is None and len(hits) > 1:
            raise ParseError(f"several [{kind}] stanzas; name the one to use", hits[1].line, self.path)
        return hits[0] if hits else None

    def need(self, kind: str, name: Optional[str] = None) -> Stanza:
        s = self.find(kind, name)
        if s is None:
            label = f"[{kind} {name}]" if name else f"[{kind}]"
            raise ParseError(f"missing stanza {label}", None, self.path)
        return s

    def error(self, msg: str, at=None) -> ParseError:
        return ParseError(msg, getattr(at, "line", None), self.path)


def parse(text: str, path: str = "") -> InputDocument:
    stanzas: List[Stanza] = []
    cur: Optional[Stanza] = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            m = _HEADER.match(line)
            if not m:
                raise ParseError(f"malformed stanza header {raw.strip()!r}", n, path)
            kind = m.group(1).lower()
            if kind not in KNOWN:
                raise ParseError(f"unknown stanza [{kind}]", n, path)
            cur = Stanza(kind, m.group(2) or "", [], n)
            stanzas.append(cur)
            continue
        if cur is None:
            raise ParseError("entry outside of any stanza", n, path)
        sep = "=" if cur.kind in EQ_STANZAS else ":"
        if sep not in line:
            raise ParseError(f"expected 'key {sep} value' in [{cur.kind}]", n, path)
        k, v = line.split(sep, 1)
        k, v = " ".join(k.split()), " ".join(v.split())
        if not k:
            raise ParseError("empty key", n, path)
        cur.entries.append(Entry(k, v, n))
    return InputDocument(stanzas, path)


def load(path: str) -> InputDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), path)


def serialize(doc: InputDocument) -> str:
    out = []
    for s in doc.stanzas:
        out.append(f"[{s.kind} {s.name}]" if s.name else f"[{s.kind}]")
        sep = " = " if s.kind in EQ_STANZAS else ": "
        for e in s.entries:
            out.append(f"{e.key}{sep}{e.value}")
        out.append("")
    return "\n".join(out)


# --- building objects ---------------------------------------------------------------

def build_group(doc: InputDocument, st: Stanza) -> FiniteGroup:
    name = st.name or "A"
    try:
        if st.get("cyclic") is not None:
            parts = st.get("cyclic").split()
            n = int(parts[0])
            return cyclic(n, parts[1] if len(parts) > 1 else "a", name)
        if st.get("klein") is not None:
            a, b = st.get("klein").split()
            return klein((a, b), name)
        if st.get("symmetric") is not None:
            if st.get("symmetric").strip() != "3":
                raise doc.error("only 'symmetric: 3' is built in", st.entry("symmetric"))
            return symmetric3(name)
        elements = st.get("elements")
        if elements is None:
            raise doc.error(f"[group {name}] needs cyclic:, klein:, symmetric: or elements:", st)
        rows = [r.split() for r in st.getall("row")]
        return FiniteGroup(elements.split(), rows, name)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise doc.error(f"[group {name}]: {exc}", st) from None


def group(doc: InputDocument, name: str) -> FiniteGroup:
    return build_group(doc, doc.need("group", name))


def _relation(doc, e: Entry) -> Tuple[Word, Word, Optional[str]]:
    text, label = e.value, None
    m = re.match(r"^(.*?)\s+as\s+(\S+)$", text)
    if m:
        text, label = m.group(1), m.group(2)
    if "->" not in text:
        raise doc.error("relation must read 'lhs -> rhs [as label]'", e)
    l, r = text.split("->", 1)
    return word(l), word(r), label


def build_presentation(doc: InputDocument, st: Stanza) -> Presentation:
    name = st.name or "B"
    if st.get("table") is not None:
        G = group(doc, st.get("table"))
        ranking = st.get("ranking")
        P = table_presentation(G, ranking.split() if ranking else None)
        P.name = name
        return P
    letters = st.get("letters")
    if letters is None:
        raise doc.error(f"[presentation {name}] needs letters: or table:", st)
    order = doc.find("order")
    ranking = letters.split()
    if order is not None and order.get("ranking"):
        ranking = order.get("ranking").split()
        if sorted(ranking) != sorted(letters.split()):
            raise doc.error("[order] ranking must list exactly the presentation's letters", order.entry("ranking"))
    inverses: Dict[str, str] = {}
    for e in (x for x in st.entries if x.key == "inverse"):
        pair = e.value.split()
        if len(pair) != 2:
            raise doc.error("inverse: takes two letters", e)
        inverses[pair[0]] = pair[1]
    rels, labels = [], []
    for e in (x for x in st.entries if x.key == "rel"):
        l, r, lab = _relation(doc, e)
        rels.append((l, r))
        labels.append(lab)
    try:
        return Presentation(tuple(ranking), rels, inverses, labels, name)
    except ValueError as exc:
        raise doc.error(str(exc), st) from None


def presentation(doc: InputDocument, name: Optional[str] = None) -> Presentation:
    return build_presentation(doc, doc.need("presentation", name))


def parse_automorphism(doc, A: FiniteGroup, e: Entry) -> Automorphism:
    v = e.value.strip()
    try:
        if v == "id":
            return Automorphism.identity(A)
        if v == "inv":
            return Automorphism.inversion(A)
        m = {}
        for pair in v.split():
            if ":" not in pair:
                raise doc.error(f"automorphism entries look like 'a:a2', got {pair!r}", e)
            x, y = pair.split(":", 1)
            if x not in A or y not in A:
                raise doc.error(f"{pair!r} names an element outside {A.name}", e)
            m[x] = y
        return Automorphism(A, m)
    except GroupError as exc:
        raise doc.error(f"action of {e.key}: {exc}", e) from None


def action(doc: InputDocument, A: FiniteGroup, letters) -> Dict[str, Automorphism]:
    st = doc.find("action")
    out = {}
    if st is not None:
        for e in st.entries:
            if e.key not in letters:
                raise doc.error(f"action given for unknown letter {e.key!r}", e)
            out[e.key] = parse_automorphism(doc, A, e)
    return out


def factorset(doc: InputDocument, A: FiniteGroup) -> Dict[Word, str]:
    st = doc.find("factorset")
    out = {}
    if st is not None:
        for e in st.entries:
            if e.value not in A:
                raise doc.error(f"factor value {e.value!r} is not an element of {A.name}", e)
            out[word(e.key)] = e.value
    return out


def extension_names(doc: InputDocument) -> Tuple[str, str]:
    st = doc.find("extension")
    if st is not None:
        return st.get("kernel", "A"), st.get("quotient", "B")
    return "A", "B"


def schreier_spec(doc: InputDocument):
    from .schreier import ExtensionSpec, ExtensionSpecError
    kname, qname = extension_names(doc)
    A = group(doc, kname)
    B = presentation(doc, qname)
    acts = action(doc, A, B.letters)
    for y in B.letters:
        acts.setdefault(y, Automorphism.identity(A))
    try:
        return ExtensionSpec(A, B, acts, factorset(doc, A))
    except (ExtensionSpecError, ValueError) as exc:
        raise doc.error(str(exc)) from None


def hnn_base(doc: InputDocument):
    from .hnn import HnnSpec, HnnSpecError
    st = doc.need("hnn")
    H = group(doc, st.get("base", "H"))
    t, T = (st.get("t") or "t T").split()
    try:
        C = st.get("C", IDENTITY).split()
        D = st.get("D", IDENTITY).split()
        Cs = (SubgroupWithCosets(H, C, st.get("C_reps").split()) if st.get("C_reps")
              else SubgroupWithCosets.with_default_reps(H, C))
        Ds = (SubgroupWithCosets(H, D, st.get("D_reps").split()) if st.get("D_reps")
              else SubgroupWithCosets.with_default_reps(H, D))
        phi = {}
        for pair in (st.get("phi") or "").split():
            x, y = pair.split(":", 1)
            phi[x] = y
        if not st.get("phi") and set(C) == set(D):
            phi = {c: c for c in C}
        omega = tuple(st.get("omega").split()) if st.get("omega") else ()
        return HnnSpec(H, Cs, Ds, PartialIso(H, C, D, phi), omega, t, T)
    except (GroupError, HnnSpecError, ValueError) as exc:
        raise doc.error(f"[hnn]: {exc}", st) from None


def hnn_extension_spec(doc: InputDocument):
    from .hnn import HnnExtensionSpec, HnnSpecError
    b = hnn_base(doc)
    kname = doc.find("extension").get("kernel", "A") if doc.find("extension") else "A"
    A = group(doc, kname)
    acts = action(doc, A, set(b.omega) | {b.t, b.t_inv})
    raw = factorset(doc, A)
    factors = {}
    for k, v in raw.items():
        if len(k) != 2:
            raise doc.error(f"HNN factors are keyed by two letters, got {' '.join(k)!r}")
        factors[k] = v
    try:
        return HnnExtensionSpec(b, A, acts, factors)
    except (HnnSpecError, GroupError) as exc:
        raise doc.error(str(exc)) from None


def limits(doc: InputDocument) -> Dict[str, int]:
    st = doc.find("limits")
    out = {}
    if st is not None:
        for e in st.entries:
            try:
                out[e.key] = int(e.value)
            except ValueError:
                raise doc.error(f"limit {e.key} must be an integer", e) from None
    return out
