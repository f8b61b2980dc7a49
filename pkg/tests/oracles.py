"""Brute-force reference computations.

Everything here enumerates candidate tables with itertools and filters by the
defining equations, so it shares no code with the search engine.
"""
from __future__ import annotations

import itertools
import math


def all_nat_maps(X, Y):
    """Every natural transformation X -> Y as ``{(c, x): y}``."""
    cat = X.cat
    keys = [(c, x) for c in cat.objects for x in X.fibers[c]]
    out = []
    for vals in itertools.product(*[Y.fibers[c] for c, _ in keys]):
        m = dict(zip(keys, vals))
        if all(Y.act(m[(c, x)], f) == m[(cat.dom[f], X.act(x, f))]
               for c, x in keys for f in cat.morphisms if cat.cod[f] == c):
            out.append(m)
    return out


def count_nat_maps(X, Y):
    return len(all_nat_maps(X, Y))


def all_sieves(cat, c):
    """Subsets of the arrows into c closed under precomposition."""
    into = [f for f in cat.morphisms if cat.cod[f] == c]
    out = []
    for r in range(len(into) + 1):
        for sub in itertools.combinations(into, r):
            s = set(sub)
            if all(cat.comp(f, g) in s for f in s for g in cat.morphisms
                   if cat.cod[g] == cat.dom[f]):
                out.append(frozenset(s))
    return out


def hom_count(cat, d, c):
    return sum(1 for f in cat.morphisms if cat.dom[f] == d and cat.cod[f] == c)


def monotone_map_count(m, n):
    """Monotone maps {0,1}^m -> {0,1}^n by enumeration."""
    src = list(itertools.product((0, 1), repeat=m))
    dst = list(itertools.product((0, 1), repeat=n))

    def leq(p, q):
        return all(a <= b for a, b in zip(p, q))
    return sum(1 for img in itertools.product(dst, repeat=len(src))
               if all(leq(img[i], img[j]) for i in range(len(src)) for j in range(len(src))
                      if leq(src[i], src[j])))


def all_sections(alpha):
    """Global sections of a family, by product over every stage and naturality filter."""
    X, cat = alpha.base, alpha.cat
    keys = [(c, x) for c in cat.objects for x in X.fibers[c]]
    out = []
    for vals in itertools.product(*[alpha.fibers[k] for k in keys]):
        s = dict(zip(keys, vals))
        if all(alpha.restrict(x, f, s[(c, x)]) == s[(cat.dom[f], X.act(x, f))]
               for c, x in keys for f in cat.morphisms if cat.cod[f] == c):
            out.append(s)
    return out


def count_sections(alpha):
    return len(all_sections(alpha))


def pi_fiber_size(alpha, beta, c, x):
    """Natural families ``(f, a) -> b`` over y(c) with b in beta at (x.f, a)."""
    cat, X = alpha.cat, alpha.base
    nodes = [(f, a) for f in cat.morphisms if cat.cod[f] == c
             for a in alpha.fibers[(cat.dom[f], X.act(x, f))]]
    doms = [beta.fibers[(cat.dom[f], (X.act(x, f), a))] for f, a in nodes]
    n = 0
    for vals in itertools.product(*doms):
        t = dict(zip(nodes, vals))
        ok = True
        for (f, a), b in t.items():
            xf = X.act(x, f)
            for g in cat.morphisms:
                if cat.cod[g] != cat.dom[f]:
                    continue
                key = (cat.comp(f, g), alpha.restrict(xf, g, a))
                if beta.restrict((xf, a), g, b) != t[key]:
                    ok = False
                    break
            if not ok:
                break
        n += ok
    return n


def sigma_fiber_size(alpha, beta, c, x):
    return sum(len(beta.fibers[(c, (x, a))]) for a in alpha.fibers[(c, x)])


def tfib_count_terminal(fiber_sizes):
    """Trivial fibration structures over the one-object site.

    Only the empty sieve carries a choice, one filler per base point.
    """
    return math.prod(fiber_sizes)


def fib_count_two_point(fiber_sizes):
    """Fibration structures over the one-object site with I = {0, 1}.

    A problem with the empty sieve is a base path (x0, x1) with a start a over
    x_k, and its fillers are the elements over x_{1-k}; full-sieve problems are
    already solved.
    """
    n = 1
    for k in (0, 1):
        for s0, s1 in itertools.product(fiber_sizes, repeat=2):
            start, end = (s0, s1) if k == 0 else (s1, s0)
            n *= end ** start
    return n


def partial_count_terminal(n):
    """Partial elements of an n-element set with extent empty or full."""
    return n + 1


def image_sizes(p):
    """Per object, the number of points of the target hit by p."""
    return {c: len(set(p.comp[c].values())) for c in p.source.cat.objects}


def fiber_product_sizes(f, g):
    cat = f.source.cat
    return {c: sum(1 for a in f.source.fibers[c] for b in g.source.fibers[c]
                   if f.comp[c][a] == g.comp[c][b]) for c in cat.objects}


def is_closed_subset(X, selected):
    cat = X.cat
    return all(X.act(x, f) in selected[cat.dom[f]]
               for c in cat.objects for x in selected[c] for f in cat.morphisms
               if cat.cod[f] == c)


def all_subpresheaves(X):
    cat = X.cat
    per = [[frozenset(s) for r in range(len(X.fibers[c]) + 1)
            for s in itertools.combinations(X.fibers[c], r)] for c in cat.objects]
    out = []
    for pick in itertools.product(*per):
        sel = dict(zip(cat.objects, pick))
        if is_closed_subset(X, sel):
            out.append(sel)
    return out


def sieves_by_propagation(cat, c):
    """Down-closed sets of arrows into c, by include/exclude backtracking.

    Including f forces every f.g in; excluding f forces out every h with
    h.g = f for some g.  Used where 2^|arrows| is out of reach.
    """
    into = [f for f in cat.morphisms if cat.cod[f] == c]
    below = {f: {cat.comp(f, g) for g in cat.morphisms if cat.cod[g] == cat.dom[f]} for f in into}
    above = {f: {h for h in into if f in below[h]} for f in into}
    out = []

    def go(i, inside, outside):
        if i == len(into):
            out.append(frozenset(inside))
            return
        f = into[i]
        if f in inside or f in outside:
            go(i + 1, inside, outside)
            return
        if not below[f] & outside:
            go(i + 1, inside | below[f], outside)
        if not above[f] & inside:
            go(i + 1, inside, outside | above[f])
    go(0, frozenset(), frozenset())
    return out


def classifying_maps_count(S, Om):
    """Maps X -> Omega whose true-locus is exactly S."""
    X = S.ambient
    cat = X.cat
    n = 0
    for m in all_nat_maps(X, Om):
        if all((len(m[(c, x)]) == len([f for f in cat.morphisms if cat.cod[f] == c]))
               == (x in S.selected[c]) for c in cat.objects for x in X.fibers[c]):
            n += 1
    return n


def lifts_count(t, proj):
    """Maps s: Y -> X.alpha with proj . s = t."""
    Y = t.source
    total = proj.source
    cat = Y.cat
    return sum(1 for s in all_nat_maps(Y, total)
               if all(proj.comp[c][s[(c, y)]] == t.comp[c][y]
                      for c in cat.objects for y in Y.fibers[c]))


def maps_over_count(alpha_disp, beta_disp):
    """Maps X.alpha -> X.beta commuting with the projections."""
    A, B = alpha_disp.total, beta_disp.total
    cat = A.cat
    return sum(1 for m in all_nat_maps(A, B)
               if all(beta_disp.proj.comp[c][m[(c, e)]] == alpha_disp.proj.comp[c][e]
                      for c in cat.objects for e in A.fibers[c]))


def dominance_holds(cat, phi_sets, omega_fibers):
    """For p in Phi(c) and any sieve q: if f*q is cofibrant for every f in p, then p meet q is.

    ``phi_sets[c]`` is a set of frozensets of arrows.
    """
    for c in cat.objects:
        for p in phi_sets[c]:
            for q in omega_fibers[c]:
                q = frozenset(q)
                ok = all(frozenset(g for g in cat.morphisms if cat.cod[g] == cat.dom[f]
                                   and cat.comp(f, g) in q) in phi_sets[cat.dom[f]]
                         for f in p)
                if ok and (p & q) not in phi_sets[c]:
                    return False
    return True


def tfib_count_brute(alpha, problems, T):
    """Trivial fibration structures by product over all extension choices."""
    X, cat = alpha.base, alpha.cat
    domains = []
    for c, x, t in problems:
        domains.append([a for a in alpha.fibers[(c, x)]
                        if all(alpha.restrict(x, f, a) == b for (f, _), b in t[1])])
    index = {p: i for i, p in enumerate(problems)}
    n = 0
    for pick in itertools.product(*domains):
        ok = True
        for (c, x, t), a in zip(problems, pick):
            for g in cat.morphisms:
                if cat.cod[g] != c:
                    continue
                j = index[(cat.dom[g], X.act(x, g), T.restrict(x, g, t))]
                if pick[j] != alpha.restrict(x, g, a):
                    ok = False
                    break
            if not ok:
                break
        n += ok
    return n
