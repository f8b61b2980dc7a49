"""Finite presheaf categories, computed exactly.

Conventions used throughout the package:

* a morphism ``f: d -> c`` acts on a presheaf contravariantly, ``X.act(x, f)``
  sends ``x in X(c)`` to ``x.f in X(d)``;
* ``cat.comp(g, f)`` is ``g o f`` (apply ``f`` first);
* fibers are tuples; their order is the canonical order every search uses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import caps
from .search import collect, natural_assignments

__all__ = [
    "FinCat", "Presheaf", "NatTrans", "SubPresheaf", "ElementsCat", "Report",
    "validate", "yoneda", "hom_set", "terminal", "initial", "product", "pullback",
    "equalizer", "coproduct", "pushout", "image", "exponential", "representable_times",
    "category_of_elements", "identity_map", "is_mono", "is_epi", "STAR", "Packed",
]

STAR = "*"


class Packed(tuple):
    """A tuple that remembers its hash; used for large encoded elements."""

    def __hash__(self):
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = self.__dict__["_h"] = tuple.__hash__(self)
            return h

    def __reduce__(self):
        return (Packed, (tuple(self),))


def _identity_name(c):
    return f"id_{c}" if isinstance(c, str) else ("id", c)


class FinCat:
    """A finite category given by its composition table.

    ``morphisms`` lists ``(id, dom, cod)``.  Unless ``identities`` is given,
    an identity ``id_<c>`` is added for every object and composites with
    identities need not be tabulated.
    """

    __slots__ = ("objects", "morphisms", "dom", "cod", "identity", "_table",
                 "_hom", "_into", "_mindex", "_oindex", "name", "cache")

    def __init__(self, objects: Sequence[Hashable], morphisms: Iterable[tuple],
                 compose: Mapping[tuple, Hashable], identities: Mapping | None = None,
                 name: str | None = None):
        self.name = name
        self.cache = {}
        self.objects = tuple(objects)
        self._oindex = {c: i for i, c in enumerate(self.objects)}
        self.dom, self.cod = {}, {}
        declared = []
        if identities is None:
            identities = {c: _identity_name(c) for c in self.objects}
            for c in self.objects:
                self.dom[identities[c]] = self.cod[identities[c]] = c
        for f, d, c in morphisms:
            self.dom[f], self.cod[f] = d, c
            declared.append(f)
        self.identity = dict(identities)
        ids = [self.identity[c] for c in self.objects]
        idset = set(ids)
        self.morphisms = tuple(ids + [f for f in declared if f not in idset])
        self._mindex = {f: i for i, f in enumerate(self.morphisms)}
        self._table = dict(compose)
        hom = {(d, c): [] for d in self.objects for c in self.objects}
        for f in self.morphisms:
            key = (self.dom[f], self.cod[f])
            if key in hom:
                hom[key].append(f)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._into = {c: tuple(f for d in self.objects for f in self._hom[(d, c)])
                      for c in self.objects}

    def __repr__(self):
        return f"FinCat({self.name or ''}, {len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def hom(self, d, c) -> tuple:
        return self._hom[(d, c)]

    def into(self, c) -> tuple:
        """All morphisms with codomain ``c``, grouped by domain."""
        return self._into[c]

    def is_identity(self, f) -> bool:
        return self.identity.get(self.dom[f]) == f

    def comp(self, g, f):
        """``g o f``; raises KeyError when the table has no entry."""
        h = self._table.get((g, f))
        if h is not None:
            return h
        if self.cod[f] == self.dom[g]:
            if self.identity[self.dom[g]] == g:
                return f
            if self.identity[self.cod[f]] == f:
                return g
        raise KeyError((g, f))

    def morphism_index(self, f) -> int:
        return self._mindex[f]

    def object_index(self, c) -> int:
        return self._oindex[c]

    def composable_pairs(self):
        for g in self.morphisms:
            for f in self.into(self.dom[g]):
                yield g, f


class Presheaf:
    """A finite presheaf: ordered fibers and restriction tables."""

    __slots__ = ("cat", "fibers", "_act", "_index", "name")

    def __init__(self, cat: FinCat, fibers: Mapping, restrictions: Mapping | None = None,
                 name: str | None = None, act: Callable | None = None):
        self.cat = cat
        self.name = name
        self.fibers = {c: tuple(fibers.get(c, ())) for c in cat.objects}
        for c, fib in self.fibers.items():
            caps.check_fiber(len(fib), f"fiber at {c!r}")
        self._index = {c: {x: i for i, x in enumerate(fib)} for c, fib in self.fibers.items()}
        if act is not None:
            restrictions = {f: {x: act(x, f) for x in self.fibers[cat.cod[f]]}
                            for f in cat.morphisms}
        restrictions = restrictions or {}
        table = {}
        for f in cat.morphisms:
            given = restrictions.get(f)
            if given is None and cat.is_identity(f):
                given = {x: x for x in self.fibers[cat.cod[f]]}
            table[f] = dict(given) if given is not None else {}
        self._act = table

    def __repr__(self):
        sizes = ", ".join(f"{c}:{len(v)}" for c, v in self.fibers.items())
        return f"Presheaf({self.name or ''} {sizes})"

    def fiber(self, c) -> tuple:
        return self.fibers[c]

    def act(self, x, f):
        return self._act[f][x]

    def table(self, f) -> dict:
        return self._act[f]

    def index(self, c, x) -> int:
        return self._index[c][x]

    def contains(self, c, x) -> bool:
        return x in self._index[c]

    def elements(self):
        for c in self.cat.objects:
            for x in self.fibers[c]:
                yield c, x

    def size(self) -> int:
        return sum(len(v) for v in self.fibers.values())

    def same_as(self, other: "Presheaf") -> bool:
        """Equal fibers (as ordered tuples) and equal restriction tables."""
        return (self.cat is other.cat and self.fibers == other.fibers
                and all(self._act[f] == other._act[f] for f in self.cat.morphisms))


class NatTrans:
    __slots__ = ("source", "target", "comp")

    def __init__(self, source: Presheaf, target: Presheaf, components: Mapping):
        self.source, self.target = source, target
        self.comp = {c: dict(components.get(c, {})) for c in source.cat.objects}

    def __call__(self, c, x):
        return self.comp[c][x]

    def __eq__(self, other):
        return isinstance(other, NatTrans) and self.comp == other.comp

    def __hash__(self):
        return hash(tuple((c, tuple(sorted(m.items(), key=repr))) for c, m in self.comp.items()))

    def __repr__(self):
        return f"NatTrans({self.source.name or '?'} -> {self.target.name or '?'})"

    def then(self, other: "NatTrans") -> "NatTrans":
        """``other o self``."""
        return NatTrans(self.source, other.target,
                        {c: {x: other.comp[c][y] for x, y in m.items()}
                         for c, m in self.comp.items()})

    def is_natural(self) -> bool:
        return _naturality_violation(self) is None


def identity_map(X: Presheaf) -> NatTrans:
    return NatTrans(X, X, {c: {x: x for x in X.fibers[c]} for c in X.cat.objects})


def is_mono(m: NatTrans) -> bool:
    return all(len(set(comp.values())) == len(comp) for comp in m.comp.values())


def is_epi(m: NatTrans) -> bool:
    return all(set(m.comp[c].values()) == set(m.target.fibers[c]) for c in m.source.cat.objects)


class SubPresheaf:
    __slots__ = ("ambient", "selected")

    def __init__(self, ambient: Presheaf, selected: Mapping):
        self.ambient = ambient
        self.selected = {c: frozenset(selected.get(c, ())) for c in ambient.cat.objects}

    def __eq__(self, other):
        return (isinstance(other, SubPresheaf) and self.ambient is other.ambient
                and self.selected == other.selected)

    def __hash__(self):
        return hash(tuple(sorted(((c, s) for c, s in self.selected.items()), key=repr)))

    def contains(self, c, x) -> bool:
        return x in self.selected[c]

    def is_closed(self) -> bool:
        X = self.ambient
        return all(X.act(x, f) in self.selected[X.cat.dom[f]]
                   for f in X.cat.morphisms for x in self.selected[X.cat.cod[f]])

    def as_presheaf(self, name=None) -> tuple[Presheaf, NatTrans]:
        X = self.ambient
        fibers = {c: [x for x in X.fibers[c] if x in self.selected[c]] for c in X.cat.objects}
        S = Presheaf(X.cat, fibers, {f: {x: X.act(x, f) for x in fibers[X.cat.cod[f]]}
                                     for f in X.cat.morphisms}, name=name)
        return S, NatTrans(S, X, {c: {x: x for x in fibers[c]} for c in X.cat.objects})

    @staticmethod
    def of_mono(m: NatTrans) -> "SubPresheaf":
        return SubPresheaf(m.target, {c: set(comp.values()) for c, comp in m.comp.items()})


# ---------------------------------------------------------------- validation

@dataclass(frozen=True)
class Report:
    ok: bool
    kind: str = "ok"
    where: tuple = ()
    detail: str = ""

    def __str__(self):
        if self.ok:
            return "ok"
        return f"{self.kind} at {self.where}: {self.detail}"


def _category_violation(cat: FinCat) -> Report | None:
    seen = set()
    for f in cat.morphisms:
        if f in seen:
            return Report(False, "malformed", (f,), "duplicate morphism id")
        seen.add(f)
        if cat.dom[f] not in cat._oindex or cat.cod[f] not in cat._oindex:
            return Report(False, "malformed", (f,), "endpoint is not an object")
    for c in cat.objects:
        i = cat.identity.get(c)
        if i is None or cat.dom.get(i) != c or cat.cod.get(i) != c:
            return Report(False, "malformed", (c,), "missing identity")
    for g, f in cat.composable_pairs():
        try:
            h = cat.comp(g, f)
        except KeyError:
            return Report(False, "malformed", (g, f), "composition table is not total")
        if h not in cat.dom or cat.dom[h] != cat.dom[f] or cat.cod[h] != cat.cod[g]:
            return Report(False, "malformed", (g, f), f"composite {h!r} has the wrong type")
    for c in cat.objects:
        i = cat.identity[c]
        for f in cat.into(c):
            if cat.comp(i, f) != f:
                return Report(False, "identity", (i, f), "left unit law fails")
        for d in cat.objects:
            for g in cat.hom(c, d):
                if cat.comp(g, i) != g:
                    return Report(False, "identity", (g, i), "right unit law fails")
    for h in cat.morphisms:
        for g in cat.into(cat.dom[h]):
            hg = cat.comp(h, g)
            for f in cat.into(cat.dom[g]):
                if cat.comp(hg, f) != cat.comp(h, cat.comp(g, f)):
                    return Report(False, "associativity", (h, g, f), "(hg)f != h(gf)")
    return None


def _presheaf_violation(X: Presheaf) -> Report | None:
    cat = X.cat
    name = X.name or "presheaf"
    for f in cat.morphisms:
        tab = X._act[f]
        d, c = cat.dom[f], cat.cod[f]
        for x in X.fibers[c]:
            if x not in tab:
                return Report(False, "malformed", (name, f, x), "restriction table is not total")
            if not X.contains(d, tab[x]):
                return Report(False, "malformed", (name, f, x), "restriction leaves the fiber")
    # composites first, outer non-identity morphisms first; units last
    outer = [g for g in cat.morphisms if not cat.is_identity(g)] + \
            [g for g in cat.morphisms if cat.is_identity(g)]
    for g in outer:
        for f in cat.into(cat.dom[g]):
            gf = cat.comp(g, f)
            for x in X.fibers[cat.cod[g]]:
                if X.act(x, gf) != X.act(X.act(x, g), f):
                    return Report(False, "functoriality", (g, f),
                                  f"{name}: x.(g o f) != (x.g).f for x={x!r}")
    for c in cat.objects:
        i = cat.identity[c]
        for x in X.fibers[c]:
            if X.act(x, i) != x:
                return Report(False, "functoriality", (i,), f"{name}: x.id != x for x={x!r}")
    return None


def _naturality_violation(m: NatTrans) -> Report | None:
    X, Y = m.source, m.target
    cat = X.cat
    for c in cat.objects:
        for x in X.fibers[c]:
            if x not in m.comp[c]:
                return Report(False, "malformed", (c, x), "component is not total")
            if not Y.contains(c, m.comp[c][x]):
                return Report(False, "malformed", (c, x), "component leaves the target fiber")
    for f in cat.morphisms:
        d, c = cat.dom[f], cat.cod[f]
        for x in X.fibers[c]:
            if m.comp[d][X.act(x, f)] != Y.act(m.comp[c][x], f):
                return Report(False, "naturality", (f, x), "square does not commute")
    return None


def validate(cat: FinCat, objs: Iterable[Presheaf] = (), maps: Iterable[NatTrans] = ()) -> Report:
    """First violated law, checked in a fixed order, or an ok report."""
    for check, items in ((_category_violation, [cat]), (_presheaf_violation, objs),
                         (_naturality_violation, maps)):
        for item in items:
            bad = check(item)
            if bad is not None:
                return bad
    return Report(True)


# ---------------------------------------------------------------- basics

def yoneda(cat: FinCat, c) -> Presheaf:
    if c not in cat._oindex:
        raise KeyError(f"unknown object {c!r}")
    fibers = {d: cat.hom(d, c) for d in cat.objects}
    restr = {g: {f: cat.comp(f, g) for f in fibers[cat.cod[g]]} for g in cat.morphisms}
    return Presheaf(cat, fibers, restr, name=f"y({c})")


def terminal(cat: FinCat) -> Presheaf:
    return Presheaf(cat, {c: (STAR,) for c in cat.objects},
                    {f: {STAR: STAR} for f in cat.morphisms}, name="1")


def initial(cat: FinCat) -> Presheaf:
    return Presheaf(cat, {}, {f: {} for f in cat.morphisms}, name="0")


def to_terminal(X: Presheaf, one: Presheaf | None = None) -> NatTrans:
    one = one or terminal(X.cat)
    return NatTrans(X, one, {c: {x: STAR for x in X.fibers[c]} for c in X.cat.objects})


def _nodes_of(X: Presheaf):
    """Node list, index and full down-closure edges for the elements of X."""
    cat = X.cat
    nodes = list(X.elements())
    index = {n: i for i, n in enumerate(nodes)}
    edges = [[(f, index[(cat.dom[f], X.act(x, f))]) for f in cat.into(c)] for c, x in nodes]
    return nodes, index, edges


def hom_set(X: Presheaf, Y: Presheaf, allowed: Callable | None = None,
            cap: int | None = None) -> list[NatTrans]:
    """All natural transformations X -> Y in canonical order.

    ``allowed(c, x)`` may return the admissible images of ``x``; the result is
    then the exhaustive list of natural maps obeying that restriction.
    """
    return collect(iter_hom(X, Y, allowed), "hom_set", cap)


def iter_hom(X: Presheaf, Y: Presheaf, allowed: Callable | None = None):
    nodes, _, edges = _nodes_of(X)
    domains = []
    for c, x in nodes:
        dom = Y.fibers[c]
        if allowed is not None:
            ok = allowed(c, x)
            if ok is not None:
                ok = set(ok)
                dom = tuple(y for y in dom if y in ok)
        domains.append(dom)
    cat = X.cat

    def act(i, v, f):
        return Y.act(v, f)

    for values in natural_assignments(domains, edges, act):
        comps = {c: {} for c in cat.objects}
        for (c, x), y in zip(nodes, values):
            comps[c][x] = y
        yield NatTrans(X, Y, comps)


# ---------------------------------------------------------------- limits

@dataclass
class Cone:
    """A limit or colimit object with its legs and a mediating-map constructor."""
    obj: Presheaf
    legs: tuple
    mediate: Callable = field(repr=False)


def _build(cat, fibers, act, name=None) -> Presheaf:
    return Presheaf(cat, fibers, {f: {x: act(x, f) for x in fibers[cat.cod[f]]}
                                  for f in cat.morphisms}, name=name)


def product(X: Presheaf, Y: Presheaf) -> Cone:
    cat = X.cat
    fibers = {c: [(x, y) for x in X.fibers[c] for y in Y.fibers[c]] for c in cat.objects}
    for c, fib in fibers.items():
        caps.check_fiber(len(fib), "product fiber")
    P = _build(cat, fibers, lambda p, f: (X.act(p[0], f), Y.act(p[1], f)),
               name=f"{X.name}x{Y.name}")
    p1 = NatTrans(P, X, {c: {p: p[0] for p in fibers[c]} for c in cat.objects})
    p2 = NatTrans(P, Y, {c: {p: p[1] for p in fibers[c]} for c in cat.objects})

    def mediate(h1: NatTrans, h2: NatTrans) -> NatTrans:
        Z = h1.source
        return NatTrans(Z, P, {c: {z: (h1.comp[c][z], h2.comp[c][z]) for z in Z.fibers[c]}
                               for c in cat.objects})
    return Cone(P, (p1, p2), mediate)


def pullback(f: NatTrans, g: NatTrans) -> Cone:
    if f.target is not g.target and not f.target.same_as(g.target):
        raise ValueError("pullback needs a cospan")
    X, Y = f.source, g.source
    cat = X.cat
    fibers = {c: [(x, y) for x in X.fibers[c] for y in Y.fibers[c]
                  if f.comp[c][x] == g.comp[c][y]] for c in cat.objects}
    P = _build(cat, fibers, lambda p, h: (X.act(p[0], h), Y.act(p[1], h)), name="pullback")
    p1 = NatTrans(P, X, {c: {p: p[0] for p in fibers[c]} for c in cat.objects})
    p2 = NatTrans(P, Y, {c: {p: p[1] for p in fibers[c]} for c in cat.objects})

    def mediate(h1: NatTrans, h2: NatTrans) -> NatTrans:
        Z = h1.source
        return NatTrans(Z, P, {c: {z: (h1.comp[c][z], h2.comp[c][z]) for z in Z.fibers[c]}
                               for c in cat.objects})
    return Cone(P, (p1, p2), mediate)


def equalizer(f: NatTrans, g: NatTrans) -> Cone:
    X = f.source
    cat = X.cat
    sub = SubPresheaf(X, {c: [x for x in X.fibers[c] if f.comp[c][x] == g.comp[c][x]]
                          for c in cat.objects})
    E, incl = sub.as_presheaf(name="equalizer")

    def mediate(h: NatTrans) -> NatTrans:
        return NatTrans(h.source, E, h.comp)
    return Cone(E, (incl,), mediate)


def coproduct(X: Presheaf, Y: Presheaf) -> Cone:
    cat = X.cat
    fibers = {c: [(0, x) for x in X.fibers[c]] + [(1, y) for y in Y.fibers[c]]
              for c in cat.objects}
    S = _build(cat, fibers, lambda e, f: (e[0], (X, Y)[e[0]].act(e[1], f)),
               name=f"{X.name}+{Y.name}")
    i1 = NatTrans(X, S, {c: {x: (0, x) for x in X.fibers[c]} for c in cat.objects})
    i2 = NatTrans(Y, S, {c: {y: (1, y) for y in Y.fibers[c]} for c in cat.objects})

    def mediate(h1: NatTrans, h2: NatTrans) -> NatTrans:
        Z = h1.target
        return NatTrans(S, Z, {c: {e: (h1, h2)[e[0]].comp[c][e[1]] for e in fibers[c]}
                               for c in cat.objects})
    return Cone(S, (i1, i2), mediate)


def pushout(f: NatTrans, g: NatTrans) -> Cone:
    """Pushout of the span X <-f- S -g-> Y; classes are named by their first member."""
    if f.source is not g.source:
        raise ValueError("pushout needs a span")
    S, X, Y = f.source, f.target, g.target
    cat = S.cat
    fibers, rep = {}, {}
    for c in cat.objects:
        tagged = [(0, x) for x in X.fibers[c]] + [(1, y) for y in Y.fibers[c]]
        parent = {t: t for t in tagged}

        def find(t):
            while parent[t] != t:
                parent[t] = parent[parent[t]]
                t = parent[t]
            return t
        order = {t: i for i, t in enumerate(tagged)}
        for s in S.fibers[c]:
            a, b = find((0, f.comp[c][s])), find((1, g.comp[c][s]))
            if a != b:
                if order[a] < order[b]:
                    parent[b] = a
                else:
                    parent[a] = b
        rep[c] = {t: find(t) for t in tagged}
        fibers[c] = [t for t in tagged if rep[c][t] == t]

    def act(t, h):
        moved = (t[0], (X, Y)[t[0]].act(t[1], h))
        return rep[cat.dom[h]][moved]
    P = _build(cat, fibers, act, name="pushout")
    i1 = NatTrans(X, P, {c: {x: rep[c][(0, x)] for x in X.fibers[c]} for c in cat.objects})
    i2 = NatTrans(Y, P, {c: {y: rep[c][(1, y)] for y in Y.fibers[c]} for c in cat.objects})

    def mediate(h1: NatTrans, h2: NatTrans) -> NatTrans:
        Z = h1.target
        return NatTrans(P, Z, {c: {t: (h1, h2)[t[0]].comp[c][t[1]] for t in fibers[c]}
                               for c in cat.objects})
    return Cone(P, (i1, i2), mediate)


def image(p: NatTrans) -> tuple[Presheaf, NatTrans, NatTrans]:
    """Epi-mono factorisation ``X ->> im(p) >-> Y``."""
    X, Y = p.source, p.target
    sub = SubPresheaf(Y, {c: set(p.comp[c].values()) for c in X.cat.objects})
    im, mono = sub.as_presheaf(name="image")
    epi = NatTrans(X, im, p.comp)
    return im, epi, mono


# ---------------------------------------------------------------- exponentials

def representable_times(cat: FinCat, c, A: Presheaf) -> Presheaf:
    """``y(c) x A`` with elements ``(f, a)``."""
    fibers = {d: [(f, a) for f in cat.hom(d, c) for a in A.fibers[d]] for d in cat.objects}
    return _build(cat, fibers, lambda e, g: (cat.comp(e[0], g), A.act(e[1], g)),
                  name=f"y({c})x{A.name}")


@dataclass
class Exponential:
    obj: Presheaf
    base: Presheaf
    value: Presheaf
    nodes: dict = field(repr=False)

    def apply(self, c, s, f, a):
        """Value of ``s in B^A(c)`` at ``(f: d -> c, a in A(d))``."""
        return dict(s)[(f, a)]

    def eval_map(self) -> NatTrans:
        """``ev: B^A x A -> B``, ``(s, a) |-> s(id, a)``."""
        prod = product(self.obj, self.base).obj
        cat = prod.cat
        return NatTrans(prod, self.value, {c: {(s, a): dict(s)[(cat.identity[c], a)]
                                               for s, a in prod.fibers[c]}
                                           for c in cat.objects})

    def curry(self, h: NatTrans, Z: Presheaf) -> NatTrans:
        """Transpose of ``h: Z x A -> B`` (source must be ``product(Z, A).obj``)."""
        cat = Z.cat
        comps = {}
        for c in cat.objects:
            comps[c] = {}
            for z in Z.fibers[c]:
                comps[c][z] = Packed(((f, a), h.comp[cat.dom[f]][(Z.act(z, f), a)])
                                     for f, a in self.nodes[c])
        return NatTrans(Z, self.obj, comps)


def exponential(A: Presheaf, B: Presheaf) -> Exponential:
    """``(B^A)(c) = Hom(y(c) x A, B)``; an element is a tuple of ``((f, a), b)``."""
    cat = A.cat
    fibers, nodes_at = {}, {}
    for c in cat.objects:
        nodes = [(f, a) for d in cat.objects for f in cat.hom(d, c) for a in A.fibers[d]]
        index = {n: i for i, n in enumerate(nodes)}
        domains = [B.fibers[cat.dom[f]] for f, _ in nodes]
        edges = [[(g, index[(cat.comp(f, g), A.act(a, g))]) for g in cat.into(cat.dom[f])]
                 for f, a in nodes]
        found = collect(natural_assignments(domains, edges, lambda i, v, g: B.act(v, g)),
                        "exponential fiber", caps.current().fiber)
        fibers[c] = [Packed(zip(nodes, vals)) for vals in found]
        nodes_at[c] = nodes

    def act(s, g):
        table = dict(s)
        return Packed(((h, a), table[(cat.comp(g, h), a)]) for h, a in nodes_at[cat.dom[g]])
    E = _build(cat, fibers, act, name=f"{B.name}^{A.name}")
    return Exponential(E, A, B, nodes_at)


# ---------------------------------------------------------------- elements

class ElementsCat:
    """The category of elements of X, with the slice equivalence."""

    def __init__(self, X: Presheaf):
        base = X.cat
        self.base_presheaf = X
        self.base = base
        objects = list(X.elements())
        morphisms, compose, identities = [], {}, {}
        for c, x in objects:
            for f in base.into(c):
                mid = (f, x)
                morphisms.append((mid, (base.dom[f], X.act(x, f)), (c, x)))
            identities[(c, x)] = (base.identity[c], x)
        for (f, x), _, _ in morphisms:
            y = X.act(x, f)
            for g in base.into(base.dom[f]):
                compose[((f, x), (g, y))] = (base.comp(f, g), x)
        self.cat = FinCat(objects, morphisms, compose, identities=identities,
                          name=f"el({X.name})")

    def project(self, m):
        """Underlying morphism of the base category."""
        return m[0]

    def presheaf_to_map(self, P: Presheaf) -> NatTrans:
        """A presheaf on the elements becomes ``A -> X`` with ``A(c) = sum_x P(c, x)``."""
        X, base = self.base_presheaf, self.base
        fibers = {c: [(x, p) for x in X.fibers[c] for p in P.fibers[(c, x)]]
                  for c in base.objects}
        A = _build(base, fibers, lambda e, f: (X.act(e[0], f), P.act(e[1], (f, e[0]))),
                   name="total")
        return NatTrans(A, X, {c: {e: e[0] for e in fibers[c]} for c in base.objects})

    def map_to_presheaf(self, p: NatTrans) -> Presheaf:
        A = p.source
        fibers = {(c, x): [a for a in A.fibers[c] if p.comp[c][a] == x]
                  for c, x in self.cat.objects}
        return _build(self.cat, fibers, lambda a, m: A.act(a, m[0]), name="fibers")

    def round_trip_iso(self, p: NatTrans) -> NatTrans:
        """The canonical iso ``A -> total(map_to_presheaf(p))`` over X."""
        q = self.presheaf_to_map(self.map_to_presheaf(p))
        A = p.source
        return NatTrans(A, q.source, {c: {a: (p.comp[c][a], a) for a in A.fibers[c]}
                                      for c in self.base.objects})


def category_of_elements(X: Presheaf) -> ElementsCat:
    return ElementsCat(X)
