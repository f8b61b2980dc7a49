"""Uniform trivial fibration structures, the TFib and Talg families, factorization."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..classifiers import (PropInContext, TypeFamily, display, function_type, incl,
                           is_type_morphism, pi_app, pi_type, prop_eq, prop_forall,
                           sections, sigma_type, substitute, weaken)
from ..kernel import NatTrans, Report
from ..search import collect, count, natural_assignments
from .cofibrations import CofClass, is_cofibration
from .partial import Partial

__all__ = ["TrivFibStructure", "tfib_problems", "extensions", "tfib_search", "tfib_count",
           "tfib_structures", "tfib_verify", "tfib_type", "talg_type", "talg_structures",
           "TalgBridge", "talg_bridge", "structure_of_tfib_section", "tfib_section_of_structure",
           "structure_of_talg_section", "Factorization", "cof_tfib_factor"]


@dataclass
class TrivFibStructure:
    """Chosen fillers keyed by ``(c, x, t)`` with ``t = (phi, u)`` in ``T(alpha)(c, x)``."""
    alpha: TypeFamily
    fillers: dict

    def __call__(self, c, x, t):
        return self.fillers[(c, x, t)]

    def certificate(self) -> list:
        """Rows ``(object, sieve, base point, partial section, filler)`` in problem order."""
        return [(c, t[0], x, t[1], a) for (c, x, t), a in self.fillers.items()]


def _partial(alpha: TypeFamily, phi: CofClass | None) -> Partial:
    cached = alpha.extra.get("partial_of")
    if cached is not None and (phi is None or cached.phi is phi):
        return cached
    P = Partial(alpha, phi)
    alpha.extra["partial_of"] = P
    return P


def tfib_problems(alpha: TypeFamily, phi: CofClass | None = None) -> list:
    """Generating problems ``(c, x, t)`` ordered by object, sieve, base point, partial section."""
    P = _partial(alpha, phi)
    X, cat = alpha.base, alpha.cat
    out = []
    for c in cat.objects:
        for s in P.phi.phi[c]:
            for x in X.fibers[c]:
                out.extend((c, x, t) for t in P.family.fiber(c, x) if t[0] == s)
    return out


def extensions(alpha: TypeFamily, c, x, t) -> list:
    """Elements of ``alpha(c, x)`` restricting to the partial element t."""
    return [a for a in alpha.fiber(c, x)
            if all(alpha.restrict(x, f, a) == b for (f, _), b in t[1])]


def _search(alpha, phi):
    P = _partial(alpha, phi)
    X, cat = alpha.base, alpha.cat
    nodes = tfib_problems(alpha, phi)
    index = {n: i for i, n in enumerate(nodes)}
    T = P.family
    domains = [extensions(alpha, c, x, t) for c, x, t in nodes]
    edges = [[(g, index[(cat.dom[g], X.act(x, g), T.restrict(x, g, t))]) for g in cat.into(c)]
             for c, x, t in nodes]

    def act(i, a, g):
        return alpha.restrict(nodes[i][1], g, a)
    order = list(range(len(nodes)))
    return nodes, natural_assignments(domains, edges, act, order)


def tfib_search(alpha: TypeFamily, phi: CofClass | None = None) -> TrivFibStructure | None:
    nodes, it = _search(alpha, phi)
    for vals in it:
        return TrivFibStructure(alpha, dict(zip(nodes, vals)))
    return None


def tfib_count(alpha: TypeFamily, phi: CofClass | None = None, cap: int | None = None) -> int:
    return count(_search(alpha, phi)[1], "trivial fibration structures", cap)


def tfib_structures(alpha: TypeFamily, phi: CofClass | None = None, cap: int | None = None) -> list:
    nodes, it = _search(alpha, phi)
    return [TrivFibStructure(alpha, dict(zip(nodes, v)))
            for v in collect(it, "trivial fibration structures", cap)]


def tfib_verify(alpha: TypeFamily, s: TrivFibStructure, phi: CofClass | None = None) -> Report:
    """Totality, extension of the partial element, and uniformity under restriction."""
    P = _partial(alpha, phi)
    X, cat, T = alpha.base, alpha.cat, P.family
    for c, x, t in tfib_problems(alpha, phi):
        a = s.fillers.get((c, x, t))
        if a is None or not alpha.contains(c, x, a):
            return Report(False, "missing filler", (c, t[0], x, t[1]))
        for (f, _), b in t[1]:
            if alpha.restrict(x, f, a) != b:
                return Report(False, "top triangle", (c, t[0], x, t[1]), f"at {f}")
        for g in cat.into(c):
            key = (cat.dom[g], X.act(x, g), T.restrict(x, g, t))
            if s.fillers.get(key) != alpha.restrict(x, g, a):
                return Report(False, "uniformity", (c, t[0], x, t[1]), f"along {g}")
    return Report(True)


# ---------------------------------------------------------------- TFib and Talg types

def _eq_sections(fam: TypeFamily, left, right) -> PropInContext:
    ctx = fam.base
    a = {(c, y): left(c, y) for c, y in ctx.elements()}
    b = {(c, y): right(c, y) for c, y in ctx.elements()}
    return prop_eq(fam, a, b)


def tfib_type(alpha: TypeFamily, phi: CofClass | None = None) -> TypeFamily:
    """``Pi (t : T alpha). Sigma (a : alpha). (u = lambda a)`` over the context of alpha.

    Elements are Pi tuples ``((f, t), (a, "*"))``.
    """
    P = _partial(alpha, phi)
    T = P.family
    a_T = weaken(alpha, T)
    ctx = display(a_T).total                 # elements ((x, (phi, u)), a)
    proj = NatTrans(ctx, display(P.extents).total,
                    {c: {e: (e[0][0], e[0][1][0]) for e in ctx.fibers[c]} for c in ctx.cat.objects})
    partials = substitute(P.partial_maps, proj)
    alpha_ = alpha

    def given(c, e):
        return e[0][1][1]

    def from_total(c, e):
        (x, (sieve, _)), a = e
        return tuple((node, alpha_.restrict(x, node[0], a)) for node in P.nodes(c, x, sieve))
    ext = _eq_sections(partials, given, from_total)
    fam = pi_type(T, sigma_type(a_T, incl(ext)))
    fam.name = "TFib"
    fam.tag = ("tfib", alpha)
    fam.extra["partial"] = P
    return fam


def talg_type(alpha: TypeFamily, phi: CofClass | None = None) -> TypeFamily:
    """``Sigma (s : T alpha -> alpha). (s . eta = id)``; elements ``(s, "*")``."""
    P = _partial(alpha, phi)
    X, cat = alpha.base, alpha.cat
    maps = function_type(P.family, alpha)
    a_maps = weaken(alpha, maps)
    a_twice = weaken(a_maps, a_maps)         # over elements ((x, s), a)

    def back(c, e):
        (x, s), a = e
        return pi_app(s, cat.identity[c], P.eta(c, x, a))
    law = _eq_sections(a_twice, back, lambda c, e: e[1])
    fam = sigma_type(maps, incl(prop_forall(a_maps, law)))
    fam.name = "Talg"
    fam.tag = ("talg", alpha)
    fam.extra["partial"] = P
    return fam


def talg_structures(alpha: TypeFamily, phi: CofClass | None = None, cap: int | None = None) -> list:
    """Global sections of Talg(alpha)."""
    return sections(talg_type(alpha, phi), cap=cap)


def structure_of_tfib_section(alpha: TypeFamily, sec: dict, phi: CofClass | None = None
                              ) -> TrivFibStructure:
    cat = alpha.cat
    return TrivFibStructure(alpha, {(c, x, t): pi_app(sec[(c, x)], cat.identity[c], t)[0]
                                    for c, x, t in tfib_problems(alpha, phi)})


def tfib_section_of_structure(alpha: TypeFamily, s: TrivFibStructure,
                              fam: TypeFamily | None = None) -> dict:
    fam = fam or tfib_type(alpha)
    X, cat = alpha.base, alpha.cat
    nodes = fam.extra["nodes"]
    return {(c, x): tuple(((f, t), (s.fillers[(cat.dom[f], X.act(x, f), t)], "*"))
                          for f, t in nodes[(c, x)])
            for c, x in X.elements()}


def structure_of_talg_section(alpha: TypeFamily, sec: dict, phi: CofClass | None = None
                              ) -> TrivFibStructure:
    cat = alpha.cat
    return TrivFibStructure(alpha, {(c, x, t): pi_app(sec[(c, x)][0], cat.identity[c], t)
                                    for c, x, t in tfib_problems(alpha, phi)})


@dataclass
class TalgBridge:
    """Mutually inverse maps between the Talg and TFib families."""
    talg: TypeFamily
    tfib: TypeFamily
    to_tfib: dict
    to_talg: dict
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def sections_to_tfib(self, sec: dict) -> dict:
        return {(c, x): self.to_tfib[(c, x, e)] for (c, x), e in sec.items()}

    def sections_to_talg(self, sec: dict) -> dict:
        return {(c, x): self.to_talg[(c, x, e)] for (c, x), e in sec.items()}


def talg_bridge(alpha: TypeFamily, phi: CofClass | None = None) -> TalgBridge:
    """``(s, *) <-> ((f, t), (s(f, t), *))``: choice applied to a Pi of subsingleton Sigmas.

    The maps are built elementwise, then checked to be type morphisms and inverse.
    """
    talg, tfib = talg_type(alpha, phi), tfib_type(alpha, phi)
    X = alpha.base
    to_tfib, to_talg = {}, {}
    for c, x in X.elements():
        for s, star in talg.fiber(c, x):
            to_tfib[(c, x, (s, star))] = tuple((node, (a, "*")) for node, a in s)
        for e in tfib.fiber(c, x):
            to_talg[(c, x, e)] = (tuple((node, pair[0]) for node, pair in e), "*")
    br = TalgBridge(talg, tfib, to_tfib, to_talg)
    br.checks.append(("to TFib natural", is_type_morphism(talg, tfib, to_tfib)))
    br.checks.append(("to Talg natural", is_type_morphism(tfib, talg, to_talg)))
    br.checks.append(("Talg round trip", all(to_talg[(c, x, v)] == e for (c, x, e), v in to_tfib.items())))
    br.checks.append(("TFib round trip", all(to_tfib[(c, x, v)] == e for (c, x, e), v in to_talg.items())))
    return br


# ---------------------------------------------------------------- factorization

@dataclass
class Factorization:
    """``A -> X.T(alpha) -> X``: eta then the display map of T(alpha)."""
    partial: Partial
    left: NatTrans
    right: NatTrans
    structure: TrivFibStructure
    left_is_cofibration: bool
    right_verified: Report

    @property
    def ok(self) -> bool:
        return self.left_is_cofibration and self.right_verified.ok


def _mu_as_structure(P: Partial) -> TrivFibStructure:
    """The algebra mu as fillers: its Talg component at the identity node, bridged to TFib."""
    T = P.family
    return TrivFibStructure(T, {(c, x, t2): P.mu(c, x, t2) for c, x, t2 in tfib_problems(T, P.phi)})


def cof_tfib_factor(alpha: TypeFamily, phi: CofClass | None = None) -> Factorization:
    """Factor the display map of alpha as a cofibration followed by a trivial fibration."""
    P = _partial(alpha, phi)
    T = P.family
    T.extra["partial_of"] = P.lift()
    left = P.eta_display()
    right = display(T).proj
    s = _mu_as_structure(P)
    return Factorization(P, left, right, s, is_cofibration(left, P.phi), tfib_verify(T, s, P.phi))
