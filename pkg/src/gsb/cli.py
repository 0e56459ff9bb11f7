"""gsb: command-line front end.

Exit codes: 0 pass, 1 fail (a witness is printed), 2 input error,
3 a limit was hit.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Callable, Dict, List, Optional

from . import engine, fileformat, groups, hnn, schreier
from .engine import ReductionLimitExceeded
from .fileformat import ParseError
from .groups import SearchGuardExceeded
from .words import show, word

SCHEMA = "gsb-report/v1"
EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3
DEFAULT_SEED = 0

log = logging.getLogger("gsb")


class LimitHit(RuntimeError):
    pass


class Report(dict):
    """A JSON-ready dict plus the human-readable lines printed for it."""

    def __init__(self, task: str, path: str):
        super().__init__(schema=SCHEMA, task=task, file=path)
        self.lines: List[str] = []

    def say(self, text: str = ""):
        self.lines.append(text)


def load_report(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    return data


# --- tasks -----------------------------------------------------------------------------

def _complete(doc, args, lim) -> engine.CompletionResult:
    B = fileformat.presentation(doc)
    res = engine.shirshov_complete(B.system(), max_rules=args.max_rules or lim.get("max_rules", 500),
                                   max_degree=args.max_degree or lim.get("max_degree"))
    return res


def cmd_complete(doc, args, rep: Report) -> int:
    lim = fileformat.limits(doc)
    res = _complete(doc, args, lim)
    S = res.basis
    max_len = args.max_len or lim.get("max_len", 6)
    irr = engine.irr_enumerate(S, max_len)
    rep.update(status=res.status, compositions_checked=res.compositions_checked,
               rules_added=res.rules_added, basis=S.describe(), reason=res.reason,
               irreducible_max_len=max_len, irreducible_count=len(irr),
               irreducible_finite=not any(len(w) == max_len for w in irr))
    rep.say(f"status: {res.status}" + (f" ({res.reason})" if res.reason else ""))
    rep.say(f"compositions checked: {res.compositions_checked}, rules added: {res.rules_added}")
    rep.say("basis:")
    for r in S.describe():
        rep.say(f"  {r}")
    rep.say(f"irreducible words of length <= {max_len}: {len(irr)}")
    if res.status != "complete":
        raise LimitHit(res.reason)
    rep["verdict"] = "pass"
    return EXIT_PASS


def _basis(doc, args):
    lim = fileformat.limits(doc)
    res = _complete(doc, args, lim)
    if res.status != "complete":
        raise LimitHit(res.reason)
    return res.basis, lim


def cmd_nf(doc, args, rep: Report) -> int:
    if not args.word:
        raise ParseError("nf needs --word")
    S, _ = _basis(doc, args)
    out = {}
    for text in args.word:
        nf = engine.normal_form(word(text), S)
        out[text] = show(nf)
        rep.say(f"{text} -> {show(nf)}")
    rep.update(verdict="pass", normal_forms=out)
    return EXIT_PASS


def cmd_irr(doc, args, rep: Report) -> int:
    S, lim = _basis(doc, args)
    max_len = args.max_len or lim.get("max_len", 4)
    irr = engine.irr_enumerate(S, max_len)
    rep.update(verdict="pass", max_len=max_len, count=len(irr), words=[show(w) for w in irr])
    rep.say(f"{len(irr)} irreducible words of length <= {max_len}:")
    for w in irr:
        rep.say(f"  {show(w)}")
    return EXIT_PASS


def cmd_check_schreier(doc, args, rep: Report) -> int:
    spec = fileformat.schreier_spec(doc)
    res = schreier.check_extension(spec)
    rep.update(res.as_dict())
    rep.say(f"extension of {spec.A.name} by {spec.B.name}: {len(res.system)} rules, "
            f"{res.compositions} compositions")
    for c in res.action_failures[:10]:
        rep.say(f"  action condition fails: v={show(c.v)} a={c.a}: {c.lhs} != {c.rhs}")
    for c, r in res.composition_failures[:10]:
        rep.say(f"  composition {c.describe()} leaves {r}")
    for w in res.equation_failures:
        rep.say(f"  witness: {w}")
    if not res.passed:
        rep.say("verdict: fail")
        return EXIT_FAIL
    rep.say("verdict: pass")
    try:
        schreier.presentation_elements(spec.R)
    except ValueError:
        rep.say("B is infinite: no group table")
        return EXIT_PASS
    E = schreier.extension_group(spec, check=False)
    st = schreier.verify_extension_structure(E)
    rep.update(group={"elements": list(E.group.elements), "table": E.group.table(),
                      "fingerprint": E.group.fingerprint()},
               structure=dict(vars(st), passed=st.passed))
    rep.say(f"group of order {len(E.group)}: {E.group.fingerprint()}")
    width = max(len(x) for x in E.group.elements)
    for row in E.group.table():
        rep.say("  " + " ".join(x.ljust(width) for x in row))
    rep.say(f"structure: order {st.order_ok}, normal kernel {st.normal}, quotient ~ B {st.quotient_isomorphic}")
    if not st.passed:
        rep["verdict"] = "fail"
        return EXIT_FAIL
    return EXIT_PASS


def cmd_derive(doc, args, rep: Report) -> int:
    B = fileformat.presentation(doc)
    try:
        d = schreier.derive_conditions(B)
    except schreier.ShapeFailure as exc:
        rep.update(verdict="fail", shape_failure=str(exc))
        rep.say(f"shape failure: {exc}")
        return EXIT_FAIL
    rep.update(verdict="pass", header=d.header, compositions=d.compositions,
               equations=[{"kind": e.kind, "equation": str(e), "source": e.source} for e in d.equations])
    rep.say(f"# {d.header}")
    rep.say(f"# {d.compositions} compositions of {B.name}, {len(d.equations)} conditions")
    for e in d.equations:
        rep.say(str(e))
    return EXIT_PASS


def cmd_enumerate(doc, args, rep: Report) -> int:
    kname, qname = fileformat.extension_names(doc)
    A = fileformat.group(doc, kname)
    B = fileformat.presentation(doc, qname)
    lim = fileformat.limits(doc)
    guard = args.guard or lim.get("guard", 200_000)
    found = schreier.enumerate_extensions(A, B, guard)
    rows = []
    for x in found:
        rows.append({"action": {y: groups.Automorphism(A, dict(zip(A.elements, im))).describe()
                                for y, im in x.params.action},
                     "factors": {show(v): a for v, a in x.params.factors if a != groups.IDENTITY},
                     "fingerprint": x.fingerprint})
    rep.update(count=len(rows), extensions=rows, verdict="pass")
    rep.say(f"{len(rows)} extensions of {A.name} by {B.name}")
    for r in rows:
        fac = ", ".join(f"({k})={v}" for k, v in r["factors"].items()) or "trivial"
        act = ", ".join(f"{y}:[{d}]" for y, d in r["action"].items())
        fp = r["fingerprint"]
        rep.say(f"  action {act}; factors {fac}; order {fp['order']}, "
                f"{'abelian' if fp['abelian'] else 'nonabelian'}, center {fp['center_size']}")
    if args.oracle:
        st = doc.need("presentation", qname)
        if st.get("table") is None:
            raise ParseError("--oracle needs B given by 'table:'")
        Bg = fileformat.group(doc, st.get("table"))
        oracle = set(groups.brute_force_extensions(A, Bg))
        mine = {x.params for x in found}
        if args.inject_fault and mine:
            mine.discard(sorted(mine, key=repr)[0])
        agree = oracle == mine
        rep.update(oracle_count=len(oracle), oracle_agrees=agree)
        rep.say(f"brute-force oracle: {len(oracle)} parameter sets, {'agrees' if agree else 'MISMATCH'}")
        if not agree:
            rep["verdict"] = "fail"
            return EXIT_FAIL
    return EXIT_PASS


def cmd_check_hnn(doc, args, rep: Report) -> int:
    espec = fileformat.hnn_extension_spec(doc)
    lim = fileformat.limits(doc)
    samples = args.samples or lim.get("samples", 500)
    ctx = lim.get("max_ctx_len", 4)
    res = hnn.check_extension_hnn(espec, samples=samples, max_ctx_len=ctx, seed=args.seed)
    rep.update(res.as_dict())
    rep.say(f"extension system: {len(res.system)} rules")
    for c, ok in res.h.by_condition().items():
        rep.say(f"  {c}: {'pass' if ok else 'FAIL'} ({res.h.checked[c]} instances, exact)")
    for f in res.h.failures[:10]:
        rep.say(f"  witness: {f}")
    for c in (res.condition_I, res.condition_II):
        rep.say(f"  condition ({c.name}): {'pass' if c.passed else 'FAIL'} "
                f"({c.checked} sampled contexts, evidence-based, seed {args.seed})")
        for w in c.witnesses[:5]:
            rep.say(f"    witness: {w}")
    rep.say(f"  routes agree: {res.routes_agree}")
    if not res.passed:
        rep.say("verdict: fail")
        return EXIT_FAIL
    max_len = args.max_len or lim.get("max_len", 4)
    model = hnn.model_for(espec)
    nf = hnn.hnn_normal_forms(espec, max_len, model, res.system)
    rep["normal_forms"] = {"max_len": max_len, "count": len(nf.words),
                           "model": type(model).__name__ if model else None,
                           "injective": nf.injective,
                           "collision": [show(w) for w in nf.collision] if nf.collision else None}
    rep.say(f"normal forms of length <= {max_len}: {len(nf.words)}")
    if model is None:
        rep.say("  no model group known for this data; injectivity not checked")
    else:
        rep.say(f"  evaluation into {type(model).__name__}: "
                + ("injective" if nf.injective else f"collision {nf.collision}"))
    if nf.injective is False or nf.reducible:
        rep["verdict"] = "fail"
        return EXIT_FAIL
    rep.say("verdict: pass")
    return EXIT_PASS


COMMANDS: Dict[str, Callable] = {
    "complete": cmd_complete,
    "nf": cmd_nf,
    "irr": cmd_irr,
    "check-schreier": cmd_check_schreier,
    "derive": cmd_derive,
    "enumerate": cmd_enumerate,
    "check-hnn": cmd_check_hnn,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gsb", description="Gröbner-Shirshov bases and group extensions")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for all sampling")
    p.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    p.add_argument("--word", action="append", help="word for nf (repeatable)")
    p.add_argument("--max-len", type=int, help="length bound for listings")
    p.add_argument("--max-rules", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--guard", type=int, help="search-space bound for enumerate")
    p.add_argument("--samples", type=int, help="sampled contexts per rule/composition")
    p.add_argument("--oracle", action="store_true", help="cross-check enumerate against brute force")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("-q", "--quiet", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    rep = Report(args.command, args.file)
    t0 = time.perf_counter()
    try:
        doc = fileformat.load(args.file)
        code = COMMANDS[args.command](doc, args, rep)
    except (ParseError, OSError, ValueError, groups.GroupError) as exc:
        code = EXIT_INPUT
        rep.update(verdict="error", error=str(exc))
        rep.say(f"error: {exc}")
    except (LimitHit, SearchGuardExceeded, ReductionLimitExceeded) as exc:
        code = EXIT_LIMIT
        rep.update(verdict="limit", error=str(exc))
        rep.say(f"limit: {exc}")
    rep["exit_code"] = code
    rep["timing_s"] = round(time.perf_counter() - t0, 3)
    if not args.quiet:
        for line in rep.lines:
            print(line, file=out)
    if args.json:
        text = json.dumps(rep, indent=2, sort_keys=True)
        if args.json == "-":
            print(text, file=out)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
