"""Kripke-Joyal forcing for types and propositions.

A stage is an object ``c`` together with ``x in X(c)`` (a map ``y(c) -> X``
by Yoneda).  ``c |- a : alpha(x)`` holds exactly when ``a`` lies in the
fiber over ``x`` at the identity of ``c``.  ``forces_unfolded`` evaluates
the per-former clauses instead, recursing into the components, so the two
can be tested against each other.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Mapping

from . import caps
from .classifiers import (PropInContext, TypeFamily, closed_type, display, max_sieve,
                          pi_nodes, prop_and, prop_exists, prop_false, prop_forall,
                          prop_implies, prop_not, prop_or, prop_true)
from .kernel import STAR, NatTrans, Presheaf, category_of_elements, iter_hom, yoneda

__all__ = [
    "Stage", "forces", "forces_eq", "enumerate_forcers", "lifts", "monotone",
    "GlueResult", "glue_uniform_family", "uniform_families", "forces_unfolded",
    "Atom", "And", "Or", "Implies", "Not", "Forall", "Exists", "Top", "Bottom",
    "Answer", "forces_prop", "query_to_prop", "slice_forces", "all_stages",
]


@dataclass(frozen=True)
class Stage:
    obj: Any
    point: Any = STAR

    def restrict(self, X: Presheaf, f) -> "Stage":
        return Stage(X.cat.dom[f], X.act(self.point, f))


def all_stages(X: Presheaf):
    return [Stage(c, x) for c, x in X.elements()]


def forces(stage: Stage, a, alpha: TypeFamily) -> bool:
    return alpha.contains(stage.obj, stage.point, a)


def forces_eq(stage: Stage, a, b, alpha: TypeFamily) -> bool:
    return forces(stage, a, alpha) and forces(stage, b, alpha) and a == b


def enumerate_forcers(stage: Stage, alpha: TypeFamily) -> tuple:
    return alpha.fiber(stage.obj, stage.point)


def lifts(stage: Stage, alpha: TypeFamily) -> list:
    """Lifts of ``x: y(c) -> X`` through the display map, read back as fiber elements."""
    cat = alpha.cat
    c, x = stage.obj, stage.point
    yc = yoneda(cat, c)
    disp = display(alpha)
    X = alpha.base

    def allowed(d, f):
        target = X.act(x, f)
        return [e for e in disp.total.fibers[d] if e[0] == target]
    out = []
    for m in iter_hom(yc, disp.total, allowed):
        out.append(m.comp[c][cat.identity[c]][1])
    return out


def monotone(stage: Stage, a, alpha: TypeFamily) -> bool:
    """Every restriction of a forced element is forced at the restricted stage."""
    X, cat = alpha.base, alpha.cat
    if not forces(stage, a, alpha):
        return True
    return all(forces(stage.restrict(X, f), alpha.restrict(stage.point, f, a), alpha)
               for f in cat.into(stage.obj))


# ---------------------------------------------------------------- uniform families

@dataclass
class GlueResult:
    ok: bool
    section: dict | None = None
    violation: tuple | None = None     # (f, x) of the first failing square

    def __bool__(self):
        return self.ok


def glue_uniform_family(alpha: TypeFamily, family: Mapping) -> GlueResult:
    """Accept ``(c, x) -> a_x`` and check ``a_x . f == a_{x.f}`` for every arrow."""
    X, cat = alpha.base, alpha.cat
    for c, x in X.elements():
        a = family.get((c, x))
        if a is None or not alpha.contains(c, x, a):
            return GlueResult(False, violation=(cat.identity[c], x))
    for c, x in X.elements():
        a = family[(c, x)]
        for f in cat.into(c):
            if alpha.restrict(x, f, a) != family[(cat.dom[f], X.act(x, f))]:
                return GlueResult(False, violation=(f, x))
    return GlueResult(True, section=dict(family))


def uniform_families(alpha: TypeFamily, cap: int | None = None) -> list[dict]:
    """Brute force over all stagewise choices of forcers, kept when they glue."""
    X = alpha.base
    stages = list(X.elements())
    choices = [alpha.fiber(c, x) for c, x in stages]
    total = 1
    for ch in choices:
        total *= len(ch)
    if total > (cap or caps.current().count):
        raise caps.CapExceeded(f"{total} candidate families")
    out = []
    for pick in itertools.product(*choices):
        fam = dict(zip(stages, pick))
        if glue_uniform_family(alpha, fam):
            out.append(fam)
    return out


# ---------------------------------------------------------------- unfolded clauses

def forces_unfolded(stage: Stage, t, alpha: TypeFamily) -> bool:
    kind = alpha.tag[0]
    c, x = stage.obj, stage.point
    X, cat = alpha.base, alpha.cat
    if kind == "empty":
        return False
    if kind == "unit":
        return t == STAR
    if kind == "subst":
        _, inner, sub = alpha.tag
        return forces_unfolded(Stage(c, sub.comp[c][x]), t, inner)
    if kind == "sum":
        _, left, right = alpha.tag
        if not (isinstance(t, tuple) and len(t) == 2):
            return False
        if t[0] == "inl":
            return forces_unfolded(stage, t[1], left)
        if t[0] == "inr":
            return forces_unfolded(stage, t[1], right)
        return False
    if kind in ("sigma", "product"):
        _, first, second = alpha.tag
        if not (isinstance(t, tuple) and len(t) == 2):
            return False
        a, b = t
        if not forces_unfolded(stage, a, first):
            return False
        if kind == "product":
            return forces_unfolded(stage, b, second)
        return forces_unfolded(Stage(c, (x, a)), b, second)
    if kind in ("pi", "function"):
        return _pi_clause(stage, t, alpha)
    if kind in ("incl", "trunc"):
        if t != STAR:
            return False
        if kind == "incl":
            return forces_prop(stage, Atom(alpha.tag[1])).holds
        return len(enumerate_forcers(stage, alpha.tag[1])) > 0
    return forces(stage, t, alpha)


def _pi_clause(stage, t, alpha) -> bool:
    """For all ``f: d -> c`` and ``d``-forcers ``a`` of the domain, a forced ``b(f, a)``
    exists inside ``t``, and ``b(f, a) . g == b(f g, a . g)``."""
    kind, dom, cod = alpha.tag
    X, cat = alpha.base, alpha.cat
    c, x = stage.obj, stage.point
    try:
        table = dict(t)
    except (TypeError, ValueError):
        return False
    expected = set()
    for f in cat.into(c):
        d, xf = cat.dom[f], X.act(x, f)
        for a in enumerate_forcers(Stage(d, xf), dom):
            expected.add((f, a))
            if (f, a) not in table:
                return False
            b = table[(f, a)]
            if kind == "pi":
                ok = forces_unfolded(Stage(d, (xf, a)), b, cod)
            else:
                ok = forces_unfolded(Stage(d, xf), b, cod)
            if not ok:
                return False
    if set(table) != expected or len(table) != len(t):
        return False
    for (f, a), b in table.items():
        d, xf = cat.dom[f], X.act(x, f)
        for g in cat.into(d):
            moved = table[(cat.comp(f, g), dom.restrict(xf, g, a))]
            here = cod.restrict((xf, a), g, b) if kind == "pi" else cod.restrict(xf, g, b)
            if here != moved:
                return False
    return True


# ---------------------------------------------------------------- propositions

@dataclass(frozen=True)
class Atom:
    prop: PropInContext


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: Any
    right: Any


@dataclass(frozen=True)
class Or:
    left: Any
    right: Any


@dataclass(frozen=True)
class Implies:
    left: Any
    right: Any


@dataclass(frozen=True)
class Not:
    body: Any


@dataclass(frozen=True)
class Forall:
    domain: TypeFamily
    body: Any       # a query over display(domain).total


@dataclass(frozen=True)
class Exists:
    domain: TypeFamily
    body: Any


@dataclass
class Answer:
    holds: bool
    witness: Any = None

    def __bool__(self):
        return self.holds


def forces_prop(stage: Stage, query, base: Presheaf | None = None) -> Answer:
    """Evaluate the Kripke-Joyal clauses.

    Existentials report their least witness (a forcer or the disjunct taken);
    failing universals report the least counterexample stage.
    """
    c, x = stage.obj, stage.point
    if isinstance(query, PropInContext):
        query = Atom(query)
    if isinstance(query, Atom):
        sigma = query.prop
        cat = sigma.base.cat
        return Answer(cat.identity[c] in sigma.value[c][x])
    if isinstance(query, Top):
        return Answer(True)
    if isinstance(query, Bottom):
        return Answer(False)
    if isinstance(query, And):
        left = forces_prop(stage, query.left, base)
        if not left:
            return Answer(False, ("left", left.witness))
        right = forces_prop(stage, query.right, base)
        return Answer(right.holds, None if right else ("right", right.witness))
    if isinstance(query, Or):
        if forces_prop(stage, query.left, base):
            return Answer(True, "left")
        if forces_prop(stage, query.right, base):
            return Answer(True, "right")
        return Answer(False)
    X = base if base is not None else _base_of(query)
    cat = X.cat
    if isinstance(query, (Implies, Not)):
        left = query.left if isinstance(query, Implies) else query.body
        right = query.right if isinstance(query, Implies) else Bottom()
        for f in cat.into(c):
            later = Stage(cat.dom[f], X.act(x, f))
            if forces_prop(later, left, X) and not forces_prop(later, right, X):
                return Answer(False, (f, later))
        return Answer(True)
    if isinstance(query, Forall):
        alpha = query.domain
        ext = display(alpha).total
        for f in cat.into(c):
            d, xf = cat.dom[f], X.act(x, f)
            for a in alpha.fiber(d, xf):
                if not forces_prop(Stage(d, (xf, a)), query.body, ext):
                    return Answer(False, (f, a))
        return Answer(True)
    if isinstance(query, Exists):
        alpha = query.domain
        ext = display(alpha).total
        for a in alpha.fiber(c, x):
            if forces_prop(Stage(c, (x, a)), query.body, ext):
                return Answer(True, a)
        return Answer(False)
    raise TypeError(f"unknown query {query!r}")


def _base_of(query) -> Presheaf:
    if isinstance(query, Atom):
        return query.prop.base
    if isinstance(query, PropInContext):
        return query.base
    if isinstance(query, (Forall, Exists)):
        return query.domain.base
    for part in ("left", "right", "body"):
        sub = getattr(query, part, None)
        if sub is not None:
            try:
                return _base_of(sub)
            except TypeError:
                continue
    raise TypeError("cannot infer the context of a closed query; pass base=")


def query_to_prop(query, base: Presheaf | None = None) -> PropInContext:
    """The same query computed with the sieve operations instead of clauses."""
    if isinstance(query, PropInContext):
        return query
    if isinstance(query, Atom):
        return query.prop
    X = base if base is not None else _base_of(query)
    if isinstance(query, Top):
        return prop_true(X)
    if isinstance(query, Bottom):
        return prop_false(X)
    if isinstance(query, And):
        return prop_and(query_to_prop(query.left, X), query_to_prop(query.right, X))
    if isinstance(query, Or):
        return prop_or(query_to_prop(query.left, X), query_to_prop(query.right, X))
    if isinstance(query, Implies):
        return prop_implies(query_to_prop(query.left, X), query_to_prop(query.right, X))
    if isinstance(query, Not):
        return prop_not(query_to_prop(query.body, X))
    if isinstance(query, Forall):
        ext = display(query.domain).total
        return prop_forall(query.domain, query_to_prop(query.body, ext))
    if isinstance(query, Exists):
        ext = display(query.domain).total
        return prop_exists(query.domain, query_to_prop(query.body, ext))
    raise TypeError(f"unknown query {query!r}")


# ---------------------------------------------------------------- slices

def slice_forces(alpha: TypeFamily, stage: Stage, a) -> bool:
    """Forcing ``a`` at ``(c, x)`` for alpha read as a closed type on the elements of X."""
    X = alpha.base
    el = category_of_elements(X)
    fibers = {(c, x): alpha.fiber(c, x) for c, x in X.elements()}
    closed = closed_type(el.cat, fibers, act=None,
                         restrictions={m: {b: alpha.restrict(m[1], m[0], b)
                                           for b in alpha.fiber(el.cat.cod[m][0], m[1])}
                                       for m in el.cat.morphisms})
    return forces(Stage((stage.obj, stage.point), STAR), a, closed)
