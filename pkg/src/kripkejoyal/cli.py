"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check fails, 2 bad input, 3 a size cap
was hit.  Reports go to stdout; ``--json OUT`` also writes the
machine-readable form, which for ``tfib``/``fib`` searches is a certificate
that ``--verify`` accepts back.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from . import caps
from .caps import CapExceeded
from .classifiers import const_type, count_sections, iter_sections, sections, substitute
from .forcing import Stage, all_stages, forces, forces_prop, forces_unfolded, query_to_prop
from .homotopy.cofibrations import cof_axiom_check
from .homotopy.fibrations import fib_count, fib_search, fib_tfib_agree, fib_verify
from .homotopy.interval import interval_axiom_check
from .homotopy.partial import Partial, monad_law_check
from .homotopy.paths import id_rules_check, path_fib, path_type
from .homotopy.trivial import cof_tfib_factor, tfib_count, tfib_search, tfib_verify
from .kernel import NatTrans
from .workspace import InputError, Workspace, dump_certificate, load_certificate, load_workspace

OK, FAIL, BAD_INPUT, CAP = 0, 1, 2, 3
REPORT_T_LIMIT = 100      # past this, TT and TTT get too large for a routine report


class Out:
    """Collects report lines and the JSON payload so both are emitted in one place."""

    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {}
        self.failed = False

    def say(self, text: str = "") -> None:
        self.lines.append(text)

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.say(f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail and not ok else ""))
        self.data.setdefault("checks", []).append({"check": label, "ok": bool(ok)})
        if not ok:
            self.failed = True
        return ok


def _stage(stage: Stage) -> str:
    return stage.obj if stage.point == "*" else f"{stage.obj}, {stage.point}"


# ---------------------------------------------------------------- commands

def cmd_validate(ws: Workspace, args, out: Out) -> None:
    for label, rep in ws.check():
        out.check(label, rep.ok, str(rep))
    cof = cof_axiom_check(ws.phi)
    for axiom, ok, witness in cof.items:
        out.check(f"cofibrations: {axiom}", ok, repr(witness))
    if ws.interval is not None:
        for law, ok, witness in interval_axiom_check(ws.interval, ws.phi).items:
            out.check(f"interval: {law}", ok, repr(witness))


def cmd_force(ws: Workspace, args, out: Out) -> None:
    results = []
    for q in ws.queries:
        holds = forces_prop(Stage(q.stage, q.point), q.formula).holds
        stage = _stage(Stage(q.stage, q.point))
        out.say(f"{stage} {'⊩' if holds else '⊮'} {q.text}")
        if q.expect is not None:
            out.check(f"expected {'⊩' if q.expect else '⊮'} at {stage}", holds == q.expect)
        # the sieve computation must agree with the clauses
        sieve_says = ws.site.identity[q.stage] in query_to_prop(q.formula).value[q.stage][q.point]
        if sieve_says != holds:
            out.check(f"clauses agree with sieves at {stage}", False)
        results.append({"stage": q.stage, "point": q.point, "formula": q.text, "forced": holds})
    out.data["queries"] = results
    if args.differential:
        for name in _family_names(ws, args):
            _differential(ws.family(name), name, out)


def _differential(alpha, name: str, out: Out) -> None:
    agree = total = 0
    bad = None
    for stage in all_stages(alpha.base):
        candidates = {a for (c, _), fib in alpha.fibers.items() if c == stage.obj for a in fib}
        for a in sorted(candidates, key=repr):
            total += 1
            if forces(stage, a, alpha) == forces_unfolded(stage, a, alpha):
                agree += 1
            elif bad is None:
                bad = (stage, a)
    out.check(f"family {name}: unfolded forcing agrees ({agree}/{total})", bad is None, repr(bad))


def cmd_sections(ws: Workspace, args, out: Out) -> None:
    for name in _family_names(ws, args):
        alpha = ws.family(name)
        if args.count:
            n = count_sections(alpha, cap=caps.current().count)
            out.say(f"{name}: {n} sections")
            out.data[name] = n
            continue
        secs = sections(alpha, cap=caps.current().count)
        out.say(f"{name}: {len(secs)} sections")
        rows = []
        for i, s in enumerate(secs):
            items = [f"{c},{x}->{a}" for (c, x), a in s.items()]
            out.say(f"  [{i}] " + " ".join(items))
            rows.append([[c, x, a] for (c, x), a in s.items()])
        out.data[name] = rows


def cmd_tfib(ws: Workspace, args, out: Out) -> None:
    name = _one_family(ws, args)
    alpha = ws.family(name)
    if args.verify:
        s = load_certificate(_read_json(args.verify), ws)
        rep = tfib_verify(alpha, s, ws.phi)
        out.check(f"{name}: certificate verifies as a trivial fibration", rep.ok, str(rep))
        return
    if args.count:
        n = tfib_count(alpha, ws.phi, cap=caps.current().count)
        out.say(f"{name}: {n} trivial fibration structures")
        out.data = {"family": name, "count": n}
        return
    s = tfib_search(alpha, ws.phi)
    if s is None:
        out.check(f"{name}: trivial fibration structure exists", False, "none found")
        return
    rep = tfib_verify(alpha, s, ws.phi)
    out.say(f"{name}: structure with {len(s.fillers)} fillers")
    out.check(f"{name}: found structure re-verifies", rep.ok, str(rep))
    out.data = dump_certificate(s, name)


def cmd_fib(ws: Workspace, args, out: Out) -> None:
    name = _one_family(ws, args)
    alpha = ws.family(name)
    I = _interval(ws)
    if args.verify:
        s = load_certificate(_read_json(args.verify), ws)
        rep = fib_verify(alpha, s, ws.phi)
        out.check(f"{name}: certificate verifies as a fibration", rep.ok, str(rep))
        return
    if args.count:
        n = fib_count(alpha, I, ws.phi, cap=caps.current().count)
        out.say(f"{name}: {n} fibration structures")
        out.data = {"family": name, "count": n}
        return
    s = fib_search(alpha, I, ws.phi)
    if s is None:
        out.check(f"{name}: fibration structure exists", False, "none found")
        return
    rep = fib_verify(alpha, s, ws.phi)
    out.say(f"{name}: structure with {len(s.fillers)} fillers")
    out.check(f"{name}: found structure re-verifies", rep.ok, str(rep))
    if ws.phi.is_everything():
        direct, halves = fib_tfib_agree(alpha, s)
        out.check(f"{name}: transposed halves are trivial fibration structures", direct and halves)
    out.data = dump_certificate(s, name)


def cmd_factor(ws: Workspace, args, out: Out) -> None:
    for name in _family_names(ws, args):
        fact = cof_tfib_factor(ws.family(name), ws.phi)
        out.say(f"{name}: factored through T({name}) with {fact.partial.family.total_size()} elements")
        out.check(f"{name}: left factor is a cofibration", fact.left_is_cofibration)
        out.check(f"{name}: right factor carries the multiplication as a structure",
                  fact.right_verified.ok, str(fact.right_verified))


def cmd_monad(ws: Workspace, args, out: Out) -> None:
    for name in _family_names(ws, args):
        rep = monad_law_check(ws.family(name), ws.phi)
        for law, ok, witness in rep.items:
            out.check(f"{name}: {law}", ok, repr(witness))


def cmd_id_rules(ws: Workspace, args, out: Out) -> None:
    name = _one_family(ws, args)
    alpha = ws.family(name)
    I = _interval(ws)
    fa = fib_search(alpha, I, ws.phi)
    if fa is None:
        out.check(f"{name}: fibration structure exists", False, "none found")
        return
    P = path_type(alpha, I)
    pf = path_fib(P, fa, ws.phi)
    if args.motive:
        beta = const_type(P.total, ws.presheaf(args.motive), name=args.motive)
    else:
        start = NatTrans(P.total, alpha.base, {c: {e: e[0][0][0] for e in P.total.fibers[c]}
                                               for c in ws.site.objects})
        beta = substitute(alpha, start)
    fb = fib_search(beta, I, ws.phi)
    if fb is None:
        out.check("motive is a fibration", False, "none found")
        return
    b = next(iter_sections(substitute(beta, P.refl_map())), None)
    if b is None:
        out.check("motive has a section over reflexivity", False, "none found")
        return
    rep = id_rules_check(P, beta, b, fa, fb, ws.phi, path_structure=pf)
    for rule, ok, witness in rep.rules.clauses:
        out.check(f"{name}: {rule}", ok, repr(witness))
    out.say(f"{name}: computation rule {rep.computation}")
    for note in rep.notes:
        out.say(f"  note: {note}")
    out.data["computation"] = rep.computation


def cmd_report(ws: Workspace, args, out: Out) -> None:
    out.say(f"site {ws.site.name}: {len(ws.site.objects)} objects, {len(ws.site.morphisms)} morphisms")
    out.say("== validate")
    cmd_validate(ws, args, out)
    if ws.queries:
        out.say("== force")
        args.differential = False
        cmd_force(ws, args, out)
    for name in sorted(ws.families):
        alpha = ws.family(name)
        out.say(f"== family {name}")
        _differential(alpha, name, out)
        out.say(f"{name}: {count_sections(alpha, cap=caps.current().count)} sections")
        s = tfib_search(alpha, ws.phi)
        if s is None:
            out.say(f"{name}: not a trivial fibration")
        else:
            out.check(f"{name}: trivial fibration structure re-verifies", tfib_verify(alpha, s, ws.phi).ok)
        size = Partial(alpha, ws.phi).family.total_size()
        if size > REPORT_T_LIMIT and not args.full:
            out.say(f"{name}: monad laws and factorization skipped, T({name}) has {size} elements"
                    " (use --full or the monad/factor commands)")
        else:
            for law, ok, witness in monad_law_check(alpha, ws.phi).items:
                out.check(f"{name}: {law}", ok, repr(witness))
            out.check(f"{name}: factorization", cof_tfib_factor(alpha, ws.phi).ok)
        if ws.interval is not None:
            f = fib_search(alpha, ws.interval, ws.phi)
            if f is None:
                out.say(f"{name}: not a fibration")
            else:
                out.check(f"{name}: fibration structure re-verifies", fib_verify(alpha, f, ws.phi).ok)


# ---------------------------------------------------------------- plumbing

def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read certificate {path}: {exc}") from exc


def _interval(ws: Workspace):
    if ws.interval is None:
        raise InputError("this command needs a site with an interval")
    return ws.interval


def _family_names(ws: Workspace, args) -> list[str]:
    if getattr(args, "family", None):
        ws.family(args.family)
        return [args.family]
    return sorted(ws.families)


def _one_family(ws: Workspace, args) -> str:
    names = _family_names(ws, args)
    if len(names) != 1:
        raise InputError(f"name one family with --family; bundle has {names}")
    return names[0]


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "force": cmd_force,
    "sections": cmd_sections,
    "tfib": cmd_tfib,
    "fib": cmd_fib,
    "factor": cmd_factor,
    "monad": cmd_monad,
    "id-rules": cmd_id_rules,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--site", help="site JSON file or built-in site name")
    common.add_argument("--bundle", help="bundle JSON file with presheaves, families and queries")
    common.add_argument("--kappa", type=int, help="largest allowed type-family fiber")
    common.add_argument("--max-count", type=int, help="largest enumeration in one call")
    common.add_argument("--json", metavar="OUT", help="also write the machine-readable report here")
    common.add_argument("--family", help="restrict to one family of the bundle")
    parser = argparse.ArgumentParser(prog="kripkejoyal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("sections", "tfib", "fib"):
            p.add_argument("--count", action="store_true", help="only count")
        if name in ("tfib", "fib"):
            p.add_argument("--verify", metavar="CERT", help="verify a certificate instead of searching")
        if name == "force":
            p.add_argument("--differential", action="store_true",
                           help="compare unfolded and direct forcing on every family")
        if name == "report":
            p.add_argument("--full", action="store_true",
                           help="run the monad laws even when T(alpha) is large")
        if name == "id-rules":
            p.add_argument("--motive", help="presheaf used as a constant motive over the path type")
    return parser


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    out = Out()
    try:
        with caps.override(kappa=args.kappa, count=args.max_count):
            ws = load_workspace(args.site, args.bundle)
            if args.command != "validate":
                bad = [(label, rep) for label, rep in ws.check() if not rep.ok]
                if bad:
                    raise InputError(f"{bad[0][0]}: {bad[0][1]}")
            COMMANDS[args.command](ws, args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return CAP
    for line in out.lines:
        print(line, file=stdout)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(out.data, fh, indent=1, ensure_ascii=False)
            fh.write("\n")
    return FAIL if out.failed else OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
