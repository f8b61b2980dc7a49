"""Seeded generators of small sites, presheaves, maps and families.

Used by the property tests and by ``report``; every generator takes a
``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import random
from typing import Optional

from .classifiers import TypeFamily, classify_small_map
from .kernel import FinCat, NatTrans, Presheaf, SubPresheaf, validate
from .search import natural_assignments
from .sites import arrow_site, chain_site, poset_site, terminal_site


def random_category(rng: random.Random, max_objects: int = 3, max_arrows: int = 10) -> FinCat:
    """A random finite category, realised concretely by functions between small sets."""
    for _ in range(200):
        kind = rng.random()
        if kind < 0.3:
            n = rng.randint(1, max_objects)
            objs = [str(i) for i in range(n)]
            pairs = [(a, b) for i, a in enumerate(objs) for b in objs[i + 1:] if rng.random() < 0.6]
            cat = poset_site(objs, pairs)
        else:
            cat = _concrete_category(rng, max_objects, max_arrows)
            if cat is None:
                continue
        if sum(1 for f in cat.morphisms if not cat.is_identity(f)) <= max_arrows:
            return cat
    return arrow_site()


def _concrete_category(rng, max_objects, max_arrows) -> Optional[FinCat]:
    n = rng.randint(1, max_objects)
    objs = [chr(ord("a") + i) for i in range(n)]
    size = {c: rng.randint(1, 3) for c in objs}
    maps = {}   # (dom, cod, table) -> name

    def add(d, c, table):
        key = (d, c, table)
        if key not in maps and not (d == c and table == tuple(range(size[d]))):
            maps[key] = f"m{len(maps)}"
            return True
        return False

    for _ in range(rng.randint(1, 4)):
        d, c = rng.choice(objs), rng.choice(objs)
        add(d, c, tuple(rng.randrange(size[c]) for _ in range(size[d])))
    grew = True
    while grew:
        grew = False
        for (d1, c1, t1) in list(maps):
            for (d2, c2, t2) in list(maps):
                if c1 == d2 and add(d1, c2, tuple(t2[i] for i in t1)):
                    grew = True
        if len(maps) > max_arrows:
            return None
    ident = {c: f"id_{c}" for c in objs}

    def name(d, c, table):
        if d == c and table == tuple(range(size[d])):
            return ident[d]
        return maps[(d, c, table)]
    compose = {}
    for (d1, c1, t1), f in maps.items():
        for (d2, c2, t2), g in maps.items():
            if c1 == d2:
                compose[(g, f)] = name(d1, c2, tuple(t2[i] for i in t1))
    morphisms = [(nm, d, c) for (d, c, _), nm in maps.items()]
    return FinCat(objs, morphisms, compose, name="random")


def random_presheaf(rng: random.Random, cat: FinCat, max_fiber: int = 4,
                    name: str = "X", allow_empty: bool = True) -> Presheaf:
    """Random fibers, then a randomised backtracking search for a functorial action."""
    for _attempt in range(40):
        lo = 0 if allow_empty else 1
        sizes = {c: rng.randint(lo, max_fiber) for c in cat.objects}
        X = _solve_action(rng, cat, sizes, name)
        if X is not None:
            return X
    sizes = {c: 1 for c in cat.objects}
    return _solve_action(rng, cat, sizes, name)


def _solve_action(rng, cat, sizes, name, budget=4000):
    fibers = {c: [f"{c}{i}" if isinstance(c, str) else (c, i) for i in range(sizes[c])]
              for c in cat.objects}
    arrows = [f for f in cat.morphisms if not cat.is_identity(f)]
    variables = [(f, x) for f in arrows for x in fibers[cat.cod[f]]]
    if any(sizes[cat.dom[f]] == 0 for f, _ in variables):
        return None
    value = {}

    def act(x, f):
        if cat.is_identity(f):
            return x
        return value.get((f, x))

    def consistent():
        for g in arrows + [cat.identity[c] for c in cat.objects]:
            for f in cat.into(cat.dom[g]):
                gf = cat.comp(g, f)
                for x in fibers[cat.cod[g]]:
                    a = act(x, g)
                    if a is None:
                        continue
                    b = act(a, f)
                    lhs = act(x, gf)
                    if b is not None and lhs is not None and b != lhs:
                        return False
        return True

    steps = [0]

    def dfs(i):
        steps[0] += 1
        if steps[0] > budget:
            return False
        if i == len(variables):
            return True
        f, x = variables[i]
        options = list(fibers[cat.dom[f]])
        rng.shuffle(options)
        for v in options:
            value[(f, x)] = v
            if consistent() and dfs(i + 1):
                return True
            del value[(f, x)]
        return False

    if not dfs(0):
        return None
    restr = {f: {x: value[(f, x)] for x in fibers[cat.cod[f]]} for f in arrows}
    X = Presheaf(cat, fibers, restr, name=name)
    return X if validate(cat, [X]).ok else None


def random_subpresheaf(rng: random.Random, X: Presheaf, density: float = 0.5) -> SubPresheaf:
    cat = X.cat
    chosen = {c: set() for c in cat.objects}
    for c, x in X.elements():
        if rng.random() < density:
            for f in cat.into(c):
                chosen[cat.dom[f]].add(X.act(x, f))
    return SubPresheaf(X, chosen)


def random_hom(rng: random.Random, X: Presheaf, Y: Presheaf) -> Optional[NatTrans]:
    """A natural map found by search over shuffled domains, or None."""
    cat = X.cat
    nodes = list(X.elements())
    index = {n: i for i, n in enumerate(nodes)}
    edges = [[(f, index[(cat.dom[f], X.act(x, f))]) for f in cat.into(c)] for c, x in nodes]
    domains = []
    for c, _ in nodes:
        dom = list(Y.fibers[c])
        rng.shuffle(dom)
        domains.append(dom)
    order = list(range(len(nodes)))
    rng.shuffle(order)
    order.sort(key=lambda i: -len(edges[i]))
    for vals in natural_assignments(domains, edges, lambda i, v, f: Y.act(v, f), order):
        comps = {c: {} for c in cat.objects}
        for (c, x), y in zip(nodes, vals):
            comps[c][x] = y
        return NatTrans(X, Y, comps)
    return None


def random_family(rng: random.Random, X: Presheaf, max_fiber: int = 2,
                  name: str = "alpha", inhabited: bool = False) -> TypeFamily:
    """A family over X obtained by classifying a random map into X."""
    cat = X.cat
    for _ in range(60):
        A = random_presheaf(rng, cat, max_fiber=max_fiber * 2, name="A",
                            allow_empty=not inhabited)
        p = random_hom(rng, A, X)
        if p is None:
            continue
        fam = classify_small_map(p)
        if max(map(len, fam.fibers.values()), default=0) > max_fiber:
            continue
        if inhabited and any(not v for v in fam.fibers.values()):
            continue
        return _rename(fam, name)
    from .classifiers import unit_type
    return unit_type(X)


def _rename(fam: TypeFamily, name: str) -> TypeFamily:
    fam.name = name
    return fam


def small_sites():
    """The fixed sites used alongside random ones."""
    return [terminal_site(), arrow_site(), chain_site(2), chain_site(3)]
