"""Filling structures as type families, and the closed type Fib(alpha).

Everything here is assembled from the classifier formers, so the sizes grow
quickly with the site; use it to cross-check the search route on small sites.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..classifiers import (PropInContext, TypeFamily, const_type, display, function_type, incl,
                           pi_app, pi_type, product_type, prop_and, prop_eq, sections, sigma_type,
                           substitute, type_iso_check, weaken)
from ..kernel import STAR, NatTrans, Packed, exponential, terminal
from .cofibrations import CofClass, all_monos
from .fibrations import FibStructure, fib_problems
from .interval import Interval
from .trivial import tfib_type

__all__ = ["Filling", "fill_type", "fib_type", "fib_sections", "structure_of_fib_section",
           "fill_tfib_iso"]


def _eq(fam: TypeFamily, left, right) -> PropInContext:
    ctx = fam.base
    return prop_eq(fam, {(c, y): left(c, y) for c, y in ctx.elements()},
                   {(c, y): right(c, y) for c, y in ctx.elements()})


def _map(src, tgt, fn) -> NatTrans:
    return NatTrans(src, tgt, {c: {e: fn(c, e) for e in src.fibers[c]} for c in src.cat.objects})


@dataclass
class Filling:
    """``Fill_k`` over ``1.X^I`` with the intermediate families it is made from."""
    k: int
    family: TypeFamily
    base: object                  # 1.X^I, elements ("*", s)
    paths: TypeFamily             # Pi (i : I). alpha(s_i)
    start: TypeFamily             # alpha(s_k), over the base


class _Builder:
    def __init__(self, alpha: TypeFamily, interval: Interval, phi: CofClass | None):
        self.alpha, self.interval = alpha, interval
        cat = alpha.cat
        self.cat = cat
        self.phi = phi or all_monos(cat)
        X = alpha.base
        self.XI = exponential(interval.I, X)
        self.one = terminal(cat)
        self.XI_type = const_type(self.one, self.XI.obj, name="X^I")
        self.B = display(self.XI_type).total                      # ("*", s)
        I_B = const_type(self.B, interval.I, name="I")
        BI = display(I_B).total                                   # (("*", s), i)
        ev = _map(BI, X, lambda c, e: dict(e[0][1])[(cat.identity[c], e[1])])
        self.paths = pi_type(I_B, substitute(alpha, ev))
        self.starts = {k: substitute(alpha, _map(self.B, X, lambda c, b, k=k: self.point(c, b, k)))
                       for k in (0, 1)}

    def point(self, c, b, k):
        return dict(b[1])[(self.cat.identity[c], self.interval.end(k, c))]

    def path_at(self, c, path, k):
        cat = self.cat
        for (h, i), a in path:
            if h == cat.identity[c] and i == self.interval.end(k, c):
                return a
        raise KeyError(k)

    def build(self, k: int) -> Filling:
        cat, alpha = self.cat, self.alpha
        B = self.B
        extents = const_type(B, self.phi.presheaf, name="Cof")
        G1 = display(extents).total                                  # (b, sieve)
        holds = incl(PropInContext(G1, {c: {e: e[1] for e in G1.fibers[c]} for c in cat.objects}))
        V = function_type(holds, weaken(self.paths, extents))         # partial paths on the sieve
        G2 = display(V).total                                        # ((b, sieve), v)
        to_B2 = _map(G2, B, lambda c, e: e[0][0])
        A0 = substitute(self.starts[k], to_B2)
        G3 = display(A0).total                                       # (((b, sieve), v), a)
        to_G1 = _map(G3, G1, lambda c, e: e[0][0])
        to_B3 = _map(G3, B, lambda c, e: e[0][0][0])
        # the start of v against a, as partial elements on the sieve
        ends_partial = substitute(function_type(holds, weaken(self.starts[k], extents)), to_G1)

        def v_start(c, e):
            ((b, s), v), a = e
            return Packed((node, self.path_at(cat.dom[node[0]], p, k)) for node, p in v)

        def lam_a(c, e):
            ((b, s), v), a = e
            return Packed((node, self.starts[k].restrict(b, node[0], a)) for node, _ in v)
        agrees = incl(_eq(ends_partial, v_start, lam_a))
        # Sigma (s : paths). (s_k = a) and (v = lambda s)
        PA3 = substitute(self.paths, to_B3)
        G4 = display(PA3).total                                      # ((((b, sieve), v), a), s)
        start4 = substitute(A0, _map(G4, G2, lambda c, e: e[0][0]))
        eq_start = _eq(start4, lambda c, e: self.path_at(c, e[1], k), lambda c, e: e[0][1])
        V4 = substitute(V, _map(G4, G1, lambda c, e: e[0][0][0]))

        def restricted(c, e):
            (((b, s), v), a), path = e
            return Packed((node, self.paths.restrict(b, node[0], path)) for node, _ in v)
        eq_partial = _eq(V4, lambda c, e: e[0][0][1], restricted)
        inner = sigma_type(PA3, incl(prop_and(eq_start, eq_partial)))
        fam = pi_type(extents, pi_type(V, pi_type(A0, function_type(agrees, inner))))
        fam.name = f"Fill{k}"
        return Filling(k, fam, B, self.paths, self.starts[k])


def fill_type(alpha: TypeFamily, interval: Interval, k: int, phi: CofClass | None = None) -> Filling:
    return _Builder(alpha, interval, phi).build(k)


def fib_type(alpha: TypeFamily, interval: Interval, phi: CofClass | None = None) -> TypeFamily:
    """``Pi (x : X^I). Fill_0 x Fill_1``, a closed type."""
    b = _Builder(alpha, interval, phi)
    f0, f1 = b.build(0), b.build(1)
    both = product_type(f0.family, f1.family)
    fam = pi_type(b.XI_type, both)
    fam.name = "Fib"
    fam.tag = ("fib", alpha)
    fam.extra["builder"] = b
    return fam


def fib_sections(alpha: TypeFamily, interval: Interval, phi: CofClass | None = None,
                 cap: int | None = None) -> list:
    return sections(fib_type(alpha, interval, phi), cap=cap)


def structure_of_fib_section(alpha: TypeFamily, interval: Interval, fam: TypeFamily, sec: dict,
                             phi: CofClass | None = None) -> FibStructure:
    """Read the filler of every generating problem off a global section of Fib(alpha)."""
    b: _Builder = fam.extra["builder"]
    cat = alpha.cat
    fillers = {}
    for key in fib_problems(alpha, interval, phi):
        c, k, sieve, v, u = key
        cyl = interval.cylinder(c)
        ident = cat.identity[c]
        s = Packed(zip([(h, i) for _, h, i in cyl.nodes], v))
        both = pi_app(sec[(c, STAR)], ident, s)
        fill = both[k]
        partial_paths = {}
        for f in sieve:
            d = cat.dom[f]
            sub = interval.cylinder(d)
            vals = {(h, i): u[q] for (_, h, i), q in zip(sub.nodes, cyl.pull(f))}
            partial_paths[f] = vals
        level1 = pi_app(fill, ident, sieve)
        # the Pi over partial paths is indexed by the encoded partial element
        v_elem = _partial_paths(b, c, s, sieve, partial_paths)
        level2 = pi_app(level1, ident, v_elem)
        level3 = pi_app(level2, ident, u[cyl.top[k]])
        path, _ = pi_app(level3, ident, STAR)
        table = dict(path)
        fillers[key] = Packed(table[(h, i)] for _, h, i in cyl.nodes)
    return FibStructure(alpha, interval, fillers)


def _partial_paths(b: _Builder, c, s, sieve, partial_paths):
    cat = b.cat
    out = []
    for f in cat.into(c):
        if f not in partial_paths:
            continue
        d = cat.dom[f]
        vals = partial_paths[f]
        bf = ("*", b.XI.obj.act(s, f))
        out.append(((f, STAR), Packed(((h, i), vals[(h, i)])
                                      for h, i in b.paths.extra["nodes"][(d, bf)])))
    return Packed(out)


def fill_tfib_iso(alpha: TypeFamily, interval: Interval, k: int, phi: CofClass | None = None):
    """``Fill_k`` against ``Pi (a : alpha(s_k)). TFib(F_k(s, a))``, by type_iso_check."""
    b = _Builder(alpha, interval, phi)
    fill = b.build(k)
    start = b.starts[k]
    paths = weaken(b.paths, start)
    G = display(paths).total                                        # ((b, a), s)
    starts_at = _eq(substitute(start, _map(G, b.B, lambda c, e: e[0][0])),
                    lambda c, e: b.path_at(c, e[1], k), lambda c, e: e[0][1])
    F = sigma_type(paths, incl(starts_at))
    rhs = pi_type(start, tfib_type(F, phi))
    return type_iso_check(fill.family, rhs)
