"""Sieves, type families in context and the type formers.

A type over a presheaf X is stored as its fibered data: for every stage
``c`` and ``x in X(c)`` the ordered fiber ``alpha(c, x)`` (the elements over
``x`` at the identity of ``c``) plus restriction tables.  The fiber over
``x`` along ``f: d -> c`` is ``alpha(d, x.f)``, so that identification is
built in.

Encodings of composite elements only ever mention fiber data (morphisms,
fiber elements), never base points.  Substitution is then literal
re-indexing and Sigma/Pi commute with it on the nose.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from . import caps
from .kernel import (STAR, FinCat, NatTrans, Packed, Presheaf, Report, SubPresheaf, image,
                     iter_hom, terminal)
from .search import collect, count, natural_assignments

__all__ = [
    "omega", "sieves", "restrict_sieve", "max_sieve", "PropInContext", "TypeFamily",
    "Display", "char_and_comprehend", "comprehension", "classifying_maps",
    "classify_small_map", "display", "substitute", "weaken", "extend_subst",
    "sigma_type", "pi_type", "empty_type", "unit_type", "sum_type", "product_type",
    "function_type", "sections", "iter_sections", "count_sections", "pi_apply", "pi_lambda",
    "pi_app", "prop_and", "prop_or", "prop_implies", "prop_not", "prop_true",
    "prop_false", "prop_forall", "prop_exists", "prop_eq", "incl", "supp", "trunc",
    "type_morphisms", "type_iso_check", "validate_family", "closed_type", "const_type",
]


# ---------------------------------------------------------------- sieves

def sieves(cat: FinCat, c) -> tuple:
    """All sieves on ``c`` as morphism tuples in canonical morphism order."""
    key = ("sieves", c)
    if key in cat.cache:
        return cat.cache[key]
    into = cat.into(c)
    principal = {f: frozenset(cat.comp(f, g) for g in cat.into(cat.dom[f])) for f in into}
    found = {frozenset()}
    for f in into:
        found |= {s | principal[f] for s in found}
    idx = cat.morphism_index
    out = tuple(sorted((tuple(sorted(s, key=idx)) for s in found),
                       key=lambda s: (len(s), [idx(f) for f in s])))
    cat.cache[key] = out
    return out


def max_sieve(cat: FinCat, c) -> tuple:
    key = ("max", c)
    if key not in cat.cache:
        cat.cache[key] = tuple(sorted(cat.into(c), key=cat.morphism_index))
    return cat.cache[key]


def restrict_sieve(cat: FinCat, sieve, f) -> tuple:
    """Pullback ``f*S = {g | f o g in S}``."""
    members = set(sieve)
    return tuple(g for g in max_sieve(cat, cat.dom[f]) if cat.comp(f, g) in members)


def omega(cat: FinCat) -> tuple[Presheaf, NatTrans]:
    """The subobject classifier and ``true: 1 -> Omega``."""
    if "omega" in cat.cache:
        return cat.cache["omega"]
    fibers = {c: sieves(cat, c) for c in cat.objects}
    restr = {}
    for f in cat.morphisms:
        restr[f] = {s: restrict_sieve(cat, s, f) for s in fibers[cat.cod[f]]}
    Om = Presheaf(cat, fibers, restr, name="Omega")
    one = terminal(cat)
    true = NatTrans(one, Om, {c: {STAR: max_sieve(cat, c)} for c in cat.objects})
    cat.cache["omega"] = (Om, true)
    return Om, true


# ---------------------------------------------------------------- propositions

class PropInContext:
    """A map ``X -> Omega``, stored as its sieve table."""

    __slots__ = ("base", "value")

    def __init__(self, base: Presheaf, value: Mapping):
        self.base = base
        self.value = {c: dict(value[c]) for c in base.cat.objects}

    def __call__(self, c, x):
        return self.value[c][x]

    def __eq__(self, other):
        return isinstance(other, PropInContext) and self.value == other.value

    def __hash__(self):
        return hash(repr(sorted(self.value.items(), key=repr)))

    def __repr__(self):
        return f"PropInContext({self.base.name})"

    def holds(self, c, x) -> bool:
        return len(self.value[c][x]) == len(self.base.cat.into(c))

    def as_map(self) -> NatTrans:
        return NatTrans(self.base, omega(self.base.cat)[0], self.value)

    @staticmethod
    def of_map(m: NatTrans) -> "PropInContext":
        return PropInContext(m.source, m.comp)


def comprehension(sigma: PropInContext) -> SubPresheaf:
    X = sigma.base
    return SubPresheaf(X, {c: [x for x in X.fibers[c] if sigma.holds(c, x)]
                           for c in X.cat.objects})


def char_and_comprehend(S: SubPresheaf) -> tuple[PropInContext, SubPresheaf]:
    """``sigma(x) = {f | x.f in S}`` and the subobject it carves out again."""
    X = S.ambient
    cat = X.cat
    value = {}
    for c in cat.objects:
        value[c] = {}
        for x in X.fibers[c]:
            value[c][x] = tuple(f for f in max_sieve(cat, c)
                                if X.act(x, f) in S.selected[cat.dom[f]])
    sigma = PropInContext(X, value)
    return sigma, comprehension(sigma)


def classifying_maps(S: SubPresheaf, cap: int | None = None) -> list[NatTrans]:
    """Every ``X -> Omega`` whose pullback of ``true`` is S (exhaustive scan)."""
    X = S.ambient
    Om, _ = omega(X.cat)

    def allowed(c, x):
        top = max_sieve(X.cat, c)
        if x in S.selected[c]:
            return [top]
        return [s for s in Om.fibers[c] if s != top]
    return collect(iter_hom(X, Om, allowed), "classifying maps", cap)


def prop_true(X: Presheaf) -> PropInContext:
    cat = X.cat
    return PropInContext(X, {c: {x: max_sieve(cat, c) for x in X.fibers[c]} for c in cat.objects})


def prop_false(X: Presheaf) -> PropInContext:
    return PropInContext(X, {c: {x: () for x in X.fibers[c]} for c in X.cat.objects})


def _pointwise(sigma, tau, op):
    X = sigma.base
    cat = X.cat
    idx = cat.morphism_index
    value = {}
    for c in cat.objects:
        value[c] = {}
        for x in X.fibers[c]:
            s = op(set(sigma.value[c][x]), set(tau.value[c][x]))
            value[c][x] = tuple(sorted(s, key=idx))
    return PropInContext(X, value)


def prop_and(sigma: PropInContext, tau: PropInContext) -> PropInContext:
    return _pointwise(sigma, tau, lambda a, b: a & b)


def prop_or(sigma: PropInContext, tau: PropInContext) -> PropInContext:
    return _pointwise(sigma, tau, lambda a, b: a | b)


def prop_implies(sigma: PropInContext, tau: PropInContext) -> PropInContext:
    """Heyting implication of sieves: ``f`` belongs when ``f*S`` is inside ``f*T``."""
    X = sigma.base
    cat = X.cat
    value = {}
    for c in cat.objects:
        value[c] = {}
        below = _composites(cat, c)
        for x in X.fibers[c]:
            outside = set(sigma.value[c][x]).difference(tau.value[c][x])
            value[c][x] = tuple(f for f, fg in below if outside.isdisjoint(fg))
    return PropInContext(X, value)


def _composites(cat: FinCat, c) -> list:
    """For each ``f`` into ``c``, the set of all ``f g``; cached on the category."""
    key = ("composites", c)
    if key not in cat.cache:
        cat.cache[key] = [(f, frozenset(cat.comp(f, g) for g in cat.into(cat.dom[f])))
                          for f in max_sieve(cat, c)]
    return cat.cache[key]


def prop_not(sigma: PropInContext) -> PropInContext:
    return prop_implies(sigma, prop_false(sigma.base))


# ---------------------------------------------------------------- type families

class TypeFamily:
    """A type in context ``base``: fibers over each ``(c, x)`` with restrictions.

    ``tag`` records the former that built the family, e.g. ``("pi", alpha,
    beta)``; untagged families are ``("atomic",)``.
    """

    __slots__ = ("base", "fibers", "_restr", "tag", "name", "_members", "_display", "extra")

    def __init__(self, base: Presheaf, fibers: Mapping, act: Callable | None = None,
                 restr: Mapping | None = None, tag: tuple = ("atomic",), name: str | None = None,
                 check_kappa: bool = True):
        self.base = base
        self.tag = tag
        self.name = name
        self.extra = {}
        self._display = None
        cat = base.cat
        self.fibers = {}
        for c, x in base.elements():
            fib = tuple(fibers.get((c, x), ()))
            if check_kappa:
                caps.check_kappa(len(fib), f"fiber of {name or 'family'} at {(c, x)!r}")
            self.fibers[(c, x)] = fib
        self._members = {k: frozenset(v) for k, v in self.fibers.items()}
        table, shared = {}, {}
        for c, x in base.elements():
            fib = self.fibers[(c, x)]
            for f in cat.into(c):
                if restr is not None and (f, x) in restr:
                    table[(f, x)] = dict(restr[(f, x)])
                elif cat.is_identity(f):
                    table[(f, x)] = {a: a for a in fib}
                elif act is not None:
                    table[(f, x)] = {a: act(c, x, f, a) for a in fib}
                else:
                    table[(f, x)] = {}
                # share element objects with the target fiber so lookups hit by identity
                if table[(f, x)] and not cat.is_identity(f):
                    target = (cat.dom[f], base.act(x, f))
                    lookup = shared.get(target)
                    if lookup is None:
                        lookup = shared[target] = {a: a for a in self.fibers.get(target, ())}
                    table[(f, x)] = {a: lookup.get(b, b) for a, b in table[(f, x)].items()}
        self._restr = table

    def __repr__(self):
        return f"TypeFamily({self.name or self.tag[0]} over {self.base.name})"

    @property
    def cat(self) -> FinCat:
        return self.base.cat

    def fiber(self, c, x) -> tuple:
        return self.fibers[(c, x)]

    def fiber_along(self, c, x, f) -> tuple:
        """``alpha_x(f)``, identified with ``alpha(d, x.f)``."""
        return self.fibers[(self.cat.dom[f], self.base.act(x, f))]

    def contains(self, c, x, a) -> bool:
        return a in self._members[(c, x)]

    def canonical(self, c, x, a):
        """The fiber's own copy of a (equal) element, so later lookups match by identity."""
        key = ("canonical", c, x)
        table = self.extra.get(key)
        if table is None:
            table = self.extra[key] = {e: e for e in self.fibers[(c, x)]}
        return table.get(a, a)

    def restrict(self, x, f, a):
        """``a in alpha(cod f, x)`` restricted to ``alpha(dom f, x.f)``."""
        return self._restr[(f, x)][a]

    def same_as(self, other: "TypeFamily") -> bool:
        """Equality of families: same fibers (in order) and same restrictions."""
        return self.fibers == other.fibers and self._restr == other._restr

    def total_size(self) -> int:
        return sum(len(v) for v in self.fibers.values())


def validate_family(alpha: TypeFamily) -> Report:
    X, cat = alpha.base, alpha.cat
    for c, x in X.elements():
        for f in cat.into(c):
            d, y = cat.dom[f], X.act(x, f)
            tab = alpha._restr[(f, x)]
            for a in alpha.fiber(c, x):
                if a not in tab or not alpha.contains(d, y, tab[a]):
                    return Report(False, "malformed", (c, x, f, a), "restriction leaves the fiber")
        for a in alpha.fiber(c, x):
            if alpha.restrict(x, cat.identity[c], a) != a:
                return Report(False, "functoriality", (c, x, cat.identity[c]), "identity")
            for f in cat.into(c):
                b = alpha.restrict(x, f, a)
                y = X.act(x, f)
                for g in cat.into(cat.dom[f]):
                    if alpha.restrict(y, g, b) != alpha.restrict(x, cat.comp(f, g), a):
                        return Report(False, "functoriality", (c, x, f, g), f"element {a!r}")
    return Report(True)


def closed_type(cat: FinCat, fibers: Mapping, act: Callable | None = None,
                restrictions: Mapping | None = None, name=None) -> TypeFamily:
    """A type over the terminal presheaf: fibers and restrictions per object/morphism."""
    one = terminal(cat)
    fam = {(c, STAR): fibers.get(c, ()) for c in cat.objects}
    if restrictions is not None:
        restr = {(f, STAR): restrictions[f] for f in cat.morphisms if f in restrictions}
        return TypeFamily(one, fam, restr=restr, name=name)
    return TypeFamily(one, fam, act=(lambda c, x, f, a: act(a, f)) if act else None, name=name)


def const_type(X: Presheaf, A: Presheaf, name=None) -> TypeFamily:
    """The presheaf A as a type over X (A weakened along ``X -> 1``)."""
    fibers = {(c, x): A.fibers[c] for c, x in X.elements()}
    return TypeFamily(X, fibers, act=lambda c, x, f, a: A.act(a, f), name=name or A.name,
                      tag=("const", A))


# ---------------------------------------------------------------- display / classify

@dataclass
class Display:
    total: Presheaf
    proj: NatTrans


def display(alpha: TypeFamily) -> Display:
    """``p: X.alpha -> X``; elements of ``X.alpha`` are pairs ``(x, a)``."""
    if alpha._display is not None:
        return alpha._display
    X, cat = alpha.base, alpha.cat
    fibers = {c: [(x, a) for x in X.fibers[c] for a in alpha.fiber(c, x)] for c in cat.objects}
    restr = {f: {(x, a): (X.act(x, f), alpha.restrict(x, f, a)) for x, a in fibers[cat.cod[f]]}
             for f in cat.morphisms}
    total = Presheaf(cat, fibers, restr, name=f"{X.name}.{alpha.name or alpha.tag[0]}")
    proj = NatTrans(total, X, {c: {e: e[0] for e in fibers[c]} for c in cat.objects})
    alpha._display = Display(total, proj)
    return alpha._display


def classify_small_map(p: NatTrans) -> TypeFamily:
    """``alpha(c, x) = {a | p(a) = x}`` with the action of the domain."""
    A, X = p.source, p.target
    for c in A.cat.objects:
        caps.check_kappa(len(A.fibers[c]), "small map domain fiber")
    fibers = {(c, x): [] for c, x in X.elements()}
    for c, a in A.elements():
        fibers[(c, p.comp[c][a])].append(a)
    return TypeFamily(X, fibers, act=lambda c, x, f, a: A.act(a, f), name="classified")


def substitute(alpha: TypeFamily, t: NatTrans) -> TypeFamily:
    """``alpha(t)``: fibers and restrictions read off at ``t(y)``."""
    Y = t.source
    cat = Y.cat
    fibers = {(c, y): alpha.fibers[(c, t.comp[c][y])] for c, y in Y.elements()}
    restr = {(f, y): alpha._restr[(f, t.comp[cat.cod[f]][y])]
             for f in cat.morphisms for y in Y.fibers[cat.cod[f]]}
    return TypeFamily(Y, fibers, restr=restr, tag=("subst", alpha, t),
                      name=alpha.name, check_kappa=False)


def weaken(beta: TypeFamily, alpha: TypeFamily) -> TypeFamily:
    """``beta(p_alpha)``, a type over ``X.alpha``."""
    return substitute(beta, display(alpha).proj)


def extend_subst(t: NatTrans, alpha: TypeFamily, alpha_t: TypeFamily | None = None) -> NatTrans:
    """``Y.alpha(t) -> X.alpha``, ``(y, a) |-> (t(y), a)``."""
    alpha_t = alpha_t or substitute(alpha, t)
    src = display(alpha_t).total
    tgt = display(alpha).total
    return NatTrans(src, tgt, {c: {(y, a): (t.comp[c][y], a) for y, a in src.fibers[c]}
                               for c in src.cat.objects})


# ---------------------------------------------------------------- finite formers

def empty_type(X: Presheaf) -> TypeFamily:
    return TypeFamily(X, {}, tag=("empty",), name="0")


def unit_type(X: Presheaf) -> TypeFamily:
    return TypeFamily(X, {(c, x): (STAR,) for c, x in X.elements()},
                      act=lambda c, x, f, a: STAR, tag=("unit",), name="1")


def sum_type(alpha: TypeFamily, beta: TypeFamily) -> TypeFamily:
    X = alpha.base
    _require_base(beta, X)
    fibers = {(c, x): [("inl", a) for a in alpha.fiber(c, x)] + [("inr", b) for b in beta.fiber(c, x)]
              for c, x in X.elements()}

    def act(c, x, f, e):
        side = alpha if e[0] == "inl" else beta
        return (e[0], side.restrict(x, f, e[1]))
    return TypeFamily(X, fibers, act=act, tag=("sum", alpha, beta), name="sum")


def sigma_type(alpha: TypeFamily, beta: TypeFamily) -> TypeFamily:
    """Dependent pairs ``(a, b)``; ``beta`` lives over ``display(alpha).total``."""
    X = alpha.base
    _require_base(beta, display(alpha).total)
    fibers = {(c, x): [(a, b) for a in alpha.fiber(c, x) for b in beta.fiber(c, (x, a))]
              for c, x in X.elements()}

    def act(c, x, f, e):
        a, b = e
        return (alpha.restrict(x, f, a), beta.restrict((x, a), f, b))
    return TypeFamily(X, fibers, act=act, tag=("sigma", alpha, beta), name="Sigma")


def product_type(alpha: TypeFamily, beta: TypeFamily) -> TypeFamily:
    fam = sigma_type(alpha, weaken(beta, alpha))
    fam.tag = ("product", alpha, beta)
    return fam


def _require_base(beta, expected):
    if beta.base is not expected and not beta.base.same_as(expected):
        raise ValueError("family is not based on the comprehension of the first argument")


def pi_nodes(alpha: TypeFamily, c, x) -> list:
    """Index of a Pi fiber at ``(c, x)``: pairs ``(f, a)`` with ``a in alpha(dom f, x.f)``."""
    X, cat = alpha.base, alpha.cat
    return [(f, a) for f in cat.into(c) for a in alpha.fiber(cat.dom[f], X.act(x, f))]


def pi_type(alpha: TypeFamily, beta: TypeFamily) -> TypeFamily:
    """Natural families ``s(f, a) in beta(dom f, (x.f, a))``.

    An element is the tuple of pairs ``((f, a), s(f, a))`` in node order.
    """
    X, cat = alpha.base, alpha.cat
    _require_base(beta, display(alpha).total)
    fibers, nodes_at = {}, {}
    for c, x in X.elements():
        nodes = nodes_at[(c, x)] = pi_nodes(alpha, c, x)
        index = {n: i for i, n in enumerate(nodes)}
        xs = [X.act(x, f) for f, _ in nodes]
        domains = [beta.fiber(cat.dom[f], (xf, a)) for (f, a), xf in zip(nodes, xs)]
        edges = [[(g, index[(cat.comp(f, g), alpha.restrict(xf, g, a))])
                  for g in cat.into(cat.dom[f])] for (f, a), xf in zip(nodes, xs)]

        def act(i, v, g, nodes=nodes, xs=xs):
            return beta.restrict((xs[i], nodes[i][1]), g, v)
        found = collect(natural_assignments(domains, edges, act), "Pi fiber",
                        caps.current().kappa)
        fibers[(c, x)] = [Packed(zip(nodes, vals)) for vals in found]

    def restrict(c, x, g, s):
        table = dict(s)
        return Packed(((h, a), table[(cat.comp(g, h), a)])
                      for h, a in nodes_at[(cat.dom[g], X.act(x, g))])
    fam = TypeFamily(X, fibers, act=restrict, tag=("pi", alpha, beta), name="Pi")
    fam.extra["nodes"] = nodes_at
    return fam


def function_type(alpha: TypeFamily, beta: TypeFamily) -> TypeFamily:
    fam = pi_type(alpha, weaken(beta, alpha))
    fam.tag = ("function", alpha, beta)
    return fam


def pi_app(s, f, a):
    """Component of a Pi element at ``(f, a)``."""
    for key, value in s:
        if key == (f, a):
            return value
    raise KeyError((f, a))


# ---------------------------------------------------------------- sections

def _section_search(alpha: TypeFamily, allowed: Callable | None = None):
    X, cat = alpha.base, alpha.cat
    nodes = list(X.elements())
    index = {n: i for i, n in enumerate(nodes)}
    edges = [[(f, index[(cat.dom[f], X.act(x, f))]) for f in cat.into(c)] for c, x in nodes]
    domains = []
    for c, x in nodes:
        dom = alpha.fiber(c, x)
        if allowed is not None:
            ok = allowed(c, x)
            if ok is not None:
                ok = set(ok)
                dom = tuple(a for a in dom if a in ok)
        domains.append(dom)

    def act(i, v, f):
        return alpha.restrict(nodes[i][1], f, v)
    for vals in natural_assignments(domains, edges, act):
        yield dict(zip(nodes, vals))


def sections(alpha: TypeFamily, allowed: Callable | None = None, cap: int | None = None) -> list[dict]:
    """All sections ``X -> X.alpha`` as dicts ``(c, x) -> a``, canonical order."""
    return collect(_section_search(alpha, allowed), "sections", cap)


def iter_sections(alpha: TypeFamily, allowed: Callable | None = None):
    """Sections one at a time, in the same order as ``sections``."""
    return _section_search(alpha, allowed)


def count_sections(alpha: TypeFamily, cap: int | None = None) -> int:
    return count(_section_search(alpha), "sections", cap)


def section_as_map(alpha: TypeFamily, a: Mapping) -> NatTrans:
    X = alpha.base
    total = display(alpha).total
    return NatTrans(X, total, {c: {x: (x, a[(c, x)]) for x in X.fibers[c]} for c in X.cat.objects})


def section_of_map(s: NatTrans) -> dict:
    return {(c, x): s.comp[c][x][1] for c in s.source.cat.objects for x in s.source.fibers[c]}


def pi_lambda(alpha: TypeFamily, beta: TypeFamily, b: Mapping) -> dict:
    """Transpose of a section ``b`` of beta over ``X.alpha`` to a section of Pi."""
    X, cat = alpha.base, alpha.cat
    out = {}
    for c, x in X.elements():
        out[(c, x)] = Packed(((f, a), b[(cat.dom[f], (X.act(x, f), a))])
                             for f, a in pi_nodes(alpha, c, x))
    return out


def pi_apply(alpha: TypeFamily, t: Mapping, a: Mapping) -> dict:
    """``app(t, a)``: a section of ``beta(a)`` over X."""
    cat = alpha.cat
    return {(c, x): pi_app(s, cat.identity[c], a[(c, x)]) for (c, x), s in t.items()}


def pi_counit(alpha: TypeFamily, t: Mapping) -> dict:
    """``app(t p, q)``: the section of beta over ``X.alpha`` induced by t."""
    total = display(alpha).total
    cat = alpha.cat
    return {(c, (x, a)): pi_app(t[(c, x)], cat.identity[c], a)
            for c in cat.objects for x, a in total.fibers[c]}


# ---------------------------------------------------------------- quantifiers and {-}

def incl(sigma: PropInContext) -> TypeFamily:
    """``{sigma}``: a singleton fiber exactly where sigma holds."""
    X = sigma.base
    fibers = {(c, x): (STAR,) if sigma.holds(c, x) else () for c, x in X.elements()}
    return TypeFamily(X, fibers, act=lambda c, x, f, a: STAR, tag=("incl", sigma), name="{prop}")


def supp(alpha: TypeFamily) -> PropInContext:
    """Characteristic map of the image of the display map."""
    p = display(alpha).proj
    im, _, mono = image(p)
    sub = SubPresheaf.of_mono(mono)
    return char_and_comprehend(sub)[0]


def trunc(alpha: TypeFamily) -> TypeFamily:
    fam = incl(supp(alpha))
    fam.tag = ("trunc", alpha)
    return fam


def prop_exists(alpha: TypeFamily, sigma: PropInContext) -> PropInContext:
    """Image of the comprehension of sigma under the display map."""
    X = alpha.base
    sub = comprehension(sigma)
    selected = {c: {e[0] for e in sub.selected[c]} for c in X.cat.objects}
    return char_and_comprehend(SubPresheaf(X, selected))[0]


def prop_forall(alpha: TypeFamily, sigma: PropInContext) -> PropInContext:
    """Largest subobject of X whose pullback to ``X.alpha`` lies in sigma."""
    X, cat = alpha.base, alpha.cat
    selected = {}
    for c in cat.objects:
        selected[c] = set()
        for x in X.fibers[c]:
            if all(sigma.holds(cat.dom[f], (X.act(x, f), a))
                   for f in cat.into(c) for a in alpha.fiber(cat.dom[f], X.act(x, f))):
                selected[c].add(x)
    return char_and_comprehend(SubPresheaf(X, selected))[0]


def prop_eq(alpha: TypeFamily, a: Mapping, b: Mapping) -> PropInContext:
    """Stages where two sections restrict to the same element."""
    X, cat = alpha.base, alpha.cat
    value = {c: {x: tuple(f for f in max_sieve(cat, c)
                          if a[(cat.dom[f], X.act(x, f))] == b[(cat.dom[f], X.act(x, f))])
                 for x in X.fibers[c]} for c in cat.objects}
    return PropInContext(X, value)


# ---------------------------------------------------------------- morphisms of types

def _iter_type_morphisms(alpha: TypeFamily, beta: TypeFamily, allowed=None):
    X, cat = alpha.base, alpha.cat
    nodes = [(c, x, a) for c, x in X.elements() for a in alpha.fiber(c, x)]
    index = {n: i for i, n in enumerate(nodes)}
    edges = [[(f, index[(cat.dom[f], X.act(x, f), alpha.restrict(x, f, a))]) for f in cat.into(c)]
             for c, x, a in nodes]
    domains = []
    for c, x, a in nodes:
        dom = beta.fiber(c, x)
        if allowed is not None:
            dom = tuple(b for b in dom if allowed(c, x, a, b))
        domains.append(dom)

    def act(i, v, f):
        return beta.restrict(nodes[i][1], f, v)
    for vals in natural_assignments(domains, edges, act):
        yield dict(zip(nodes, vals))


def type_morphisms(alpha: TypeFamily, beta: TypeFamily, cap: int | None = None) -> list[dict]:
    """Maps ``X.alpha -> X.beta`` over X, as dicts ``(c, x, a) -> b``."""
    _require_base(beta, alpha.base)
    return collect(_iter_type_morphisms(alpha, beta), "type morphisms", cap)


def is_type_morphism(alpha: TypeFamily, beta: TypeFamily, m: Mapping) -> bool:
    X, cat = alpha.base, alpha.cat
    for c, x in X.elements():
        for a in alpha.fiber(c, x):
            b = m.get((c, x, a))
            if b is None or not beta.contains(c, x, b):
                return False
            for f in cat.into(c):
                if m[(cat.dom[f], X.act(x, f), alpha.restrict(x, f, a))] != beta.restrict(x, f, b):
                    return False
    return True


def type_iso_check(alpha: TypeFamily, beta: TypeFamily) -> tuple[bool, tuple | None]:
    """Search for mutually inverse maps over X; returns ``(found, (to, back))``."""
    _require_base(beta, alpha.base)
    if any(len(alpha.fibers[k]) != len(beta.fibers[k]) for k in alpha.fibers):
        return False, None
    for to in _iter_type_morphisms(alpha, beta):
        back = {}
        for (c, x, a), b in to.items():
            if (c, x, b) in back:
                break
            back[(c, x, b)] = a
        else:
            if is_type_morphism(beta, alpha, back):
                return True, (to, back)
    return False, None
