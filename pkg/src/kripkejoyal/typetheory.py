"""Judgements of the category with families and mechanical rule checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .classifiers import (PropInContext, TypeFamily, display, pi_apply, pi_counit,
                          pi_lambda, pi_type, prop_eq, sections, sigma_type, substitute,
                          validate_family)
from .kernel import NatTrans, Presheaf

__all__ = ["Judgement", "Certificate", "check_judgement", "RuleReport", "rule_suite",
           "section_point", "subst_section", "equality_reflection"]

FORMS = ("type", "elem", "type-eq", "elem-eq", "prop-valid", "entailment")


@dataclass(frozen=True)
class Judgement:
    """``form`` is one of FORMS; the payload shape depends on it.

    type: alpha | elem: (alpha, a) | type-eq: (alpha, beta) |
    elem-eq: (alpha, a, b) | prop-valid: sigma | entailment: (premises, conclusion)
    """
    form: str
    context: Presheaf
    payload: Any


@dataclass
class Certificate:
    ok: bool
    checks: list = field(default_factory=list)     # (what, where) in the order performed
    failure: tuple | None = None

    def __bool__(self):
        return self.ok


def _base_check(ctx, *bases):
    for b in bases:
        if b is not ctx and not b.same_as(ctx):
            raise ValueError("payload is not based on the judgement context")


def check_judgement(j: Judgement) -> Certificate:
    ctx, cat = j.context, j.context.cat
    cert = Certificate(True)

    def fail(where):
        cert.ok = False
        cert.failure = where
        return cert

    if j.form == "type":
        _base_check(ctx, j.payload.base)
        rep = validate_family(j.payload)
        cert.checks.append(("family", "all stages"))
        return cert if rep.ok else fail(rep.where)
    if j.form == "elem":
        alpha, a = j.payload
        _base_check(ctx, alpha.base)
        for c, x in ctx.elements():
            cert.checks.append(("member", (c, x)))
            if (c, x) not in a or not alpha.contains(c, x, a[(c, x)]):
                return fail((c, x))
            for f in cat.into(c):
                cert.checks.append(("natural", (f, x)))
                if alpha.restrict(x, f, a[(c, x)]) != a[(cat.dom[f], ctx.act(x, f))]:
                    return fail((f, x))
        return cert
    if j.form == "type-eq":
        alpha, beta = j.payload
        _base_check(ctx, alpha.base, beta.base)
        cert.checks.append(("fibers and restrictions", "all stages"))
        return cert if alpha.same_as(beta) else fail(("type-eq",))
    if j.form == "elem-eq":
        alpha, a, b = j.payload
        for c, x in ctx.elements():
            cert.checks.append(("equal", (c, x)))
            if a[(c, x)] != b[(c, x)]:
                return fail((c, x))
        return cert
    if j.form == "prop-valid":
        sigma = j.payload
        _base_check(ctx, sigma.base)
        for c, x in ctx.elements():
            cert.checks.append(("true", (c, x)))
            if not sigma.holds(c, x):
                return fail((c, x))
        return cert
    if j.form == "entailment":
        premises, conclusion = j.payload
        for c, x in ctx.elements():
            cert.checks.append(("inclusion", (c, x)))
            if all(p.holds(c, x) for p in premises) and not conclusion.holds(c, x):
                return fail((c, x))
        return cert
    raise ValueError(f"unknown judgement form {j.form!r}")


# ---------------------------------------------------------------- helpers

def section_point(alpha: TypeFamily, a: Mapping) -> NatTrans:
    """``(id, a): X -> X.alpha``."""
    X = alpha.base
    total = display(alpha).total
    return NatTrans(X, total, {c: {x: (x, a[(c, x)]) for x in X.fibers[c]} for c in X.cat.objects})


def subst_section(b: Mapping, t: NatTrans) -> dict:
    """``b o t`` for a section b over the codomain of t."""
    Y = t.source
    return {(c, y): b[(c, t.comp[c][y])] for c, y in Y.elements()}


def pair(a: Mapping, b: Mapping) -> dict:
    return {k: (a[k], b[k]) for k in a}


def proj1(t: Mapping) -> dict:
    return {k: v[0] for k, v in t.items()}


def proj2(t: Mapping) -> dict:
    return {k: v[1] for k, v in t.items()}


# ---------------------------------------------------------------- rule suite

@dataclass
class RuleReport:
    clauses: list = field(default_factory=list)    # (name, ok, failing stage or None)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.clauses)

    def first_failure(self):
        for name, ok, where in self.clauses:
            if not ok:
                return name, where
        return None


def rule_suite(alpha: TypeFamily, beta: TypeFamily, witnesses: Mapping | None = None) -> RuleReport:
    """Formation, introduction, elimination, computation and expansion for Sigma and Pi.

    ``witnesses`` may supply ``alpha_sections``, ``beta_sections`` (over the
    comprehension of alpha), ``sigma_sections`` and ``pi_sections``;
    anything missing is enumerated exhaustively.
    """
    witnesses = dict(witnesses or {})
    X = alpha.base
    ext = display(alpha).total
    Sig, Pi = sigma_type(alpha, beta), pi_type(alpha, beta)
    a_secs = witnesses.get("alpha_sections") or sections(alpha)
    b_secs = witnesses.get("beta_sections") or sections(beta)
    s_secs = witnesses.get("sigma_sections") or sections(Sig)
    p_secs = witnesses.get("pi_sections") or sections(Pi)
    report = RuleReport()

    def clause(name, jdgs):
        for j in jdgs:
            cert = check_judgement(j)
            if not cert:
                report.clauses.append((name, False, cert.failure))
                return
        report.clauses.append((name, True, None))

    def at(a):
        return substitute(beta, section_point(alpha, a))

    clause("sigma-formation", [Judgement("type", X, Sig)])
    intro = []
    comp = []
    for a in a_secs:
        ba = at(a)
        for b in sections(ba):
            t = pair(a, b)
            intro.append(Judgement("elem", X, (Sig, t)))
            comp.append(Judgement("elem-eq", X, (alpha, proj1(t), a)))
            comp.append(Judgement("elem-eq", X, (ba, proj2(t), b)))
    clause("sigma-introduction", intro)
    clause("sigma-elimination",
           [Judgement("elem", X, (alpha, proj1(t))) for t in s_secs] +
           [Judgement("elem", X, (at(proj1(t)), proj2(t))) for t in s_secs])
    clause("sigma-computation", comp)
    clause("sigma-expansion",
           [Judgement("elem-eq", X, (Sig, t, pair(proj1(t), proj2(t)))) for t in s_secs])

    clause("pi-formation", [Judgement("type", X, Pi)])
    clause("pi-introduction", [Judgement("elem", X, (Pi, pi_lambda(alpha, beta, b))) for b in b_secs])
    clause("pi-elimination", [Judgement("elem", X, (at(a), pi_apply(alpha, t, a)))
                              for t in p_secs for a in a_secs])
    clause("pi-computation",
           [Judgement("elem-eq", X, (at(a), pi_apply(alpha, pi_lambda(alpha, beta, b), a),
                                     subst_section(b, section_point(alpha, a))))
            for b in b_secs for a in a_secs])
    clause("pi-expansion",
           [Judgement("elem-eq", X, (Pi, t, pi_lambda(alpha, beta, pi_counit(alpha, t))))
            for t in p_secs])
    return report


def equality_reflection(alpha: TypeFamily, a: Mapping, b: Mapping) -> tuple[bool, bool]:
    """(``a =_alpha b`` is valid, ``a == b``); the two always agree."""
    eq = prop_eq(alpha, a, b)
    valid = check_judgement(Judgement("prop-valid", alpha.base, eq)).ok
    return valid, dict(a) == dict(b)
