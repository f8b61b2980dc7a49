"""The partial-element monad T on families over a fixed context.

An element of ``T(alpha)`` at ``(c, x)`` is ``(phi, v)`` where ``phi`` is a
cofibrant sieve on ``c`` and ``v`` is the Pi-encoded partial element
``((f, "*"), a)`` for ``f`` in ``phi``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..classifiers import (PropInContext, TypeFamily, const_type, display, function_type,
                           incl, is_type_morphism, max_sieve, sigma_type, weaken)
from ..kernel import (STAR, NatTrans, Presheaf, SubPresheaf, hom_set, is_mono, pullback,
                      terminal)
from .cofibrations import CofClass, all_monos, is_cofibration

__all__ = ["Partial", "partial_monad", "MonadReport", "monad_law_check", "eta_is_cartesian",
           "closed_presheaf", "classify_partial_map", "PartialMapClassification"]


class Partial:
    """``T(alpha) = Sigma (phi : Cof). ({phi} -> alpha)`` together with eta and mu."""

    def __init__(self, alpha: TypeFamily, phi: CofClass | None = None):
        X, cat = alpha.base, alpha.cat
        self.alpha = alpha
        self.phi = phi or all_monos(cat)
        self.extents = const_type(X, self.phi.presheaf, name="Cof")
        ctx = display(self.extents).total
        holds = PropInContext(ctx, {c: {(x, s): s for x, s in ctx.fibers[c]} for c in cat.objects})
        self.partial_maps = function_type(incl(holds), weaken(alpha, self.extents))
        self.family = sigma_type(self.extents, self.partial_maps)
        self.family.name = f"T({alpha.name or alpha.tag[0]})"
        self.family.extra["partial"] = self
        self._order = {f: i for i, f in enumerate(cat.morphisms)}

    @property
    def base(self) -> Presheaf:
        return self.alpha.base

    def nodes(self, c, x, sieve):
        return self.partial_maps.extra["nodes"][(c, (x, sieve))]

    def make(self, c, x, extent, values) -> tuple:
        """Element with the given extent; ``values`` maps each ``f`` in it to an element."""
        sieve = tuple(sorted(extent, key=self._order.__getitem__))
        return (sieve, tuple((node, values[node[0]]) for node in self.nodes(c, x, sieve)))

    @staticmethod
    def extent(t) -> tuple:
        return t[0]

    @staticmethod
    def value(t, f):
        for (g, _), a in t[1]:
            if g == f:
                return a
        raise KeyError(f)

    def eta(self, c, x, a) -> tuple:
        cat, alpha = self.alpha.cat, self.alpha
        return self.make(c, x, max_sieve(cat, c), {f: alpha.restrict(x, f, a) for f in cat.into(c)})

    def undefined(self, c, x) -> tuple:
        """The totally undefined partial element."""
        return ((), ())

    def eta_map(self) -> dict:
        return {(c, x, a): self.eta(c, x, a)
                for c, x in self.base.elements() for a in self.alpha.fiber(c, x)}

    def apply(self, h: dict, target: "Partial") -> dict:
        """``T(h)`` for a map ``h: alpha -> beta`` over the same context."""
        cat, X = self.alpha.cat, self.base
        out = {}
        for c, x in X.elements():
            for t in self.family.fiber(c, x):
                vals = {f: h[(cat.dom[f], X.act(x, f), a)] for (f, _), a in t[1]}
                out[(c, x, t)] = target.make(c, x, t[0], vals)
        return out

    def lift(self) -> "Partial":
        """``T(T(alpha))`` as a Partial over ``T(alpha)``."""
        if "lift" not in self.family.extra:
            self.family.extra["lift"] = Partial(self.family, self.phi)
        return self.family.extra["lift"]

    def mu_map(self) -> dict:
        """``mu: T(T(alpha)) -> T(alpha)``: extent ``{f in phi | psi_f total}``."""
        cat, X = self.alpha.cat, self.base
        outer = self.lift()
        out = {}
        for c, x in X.elements():
            for t2 in outer.family.fiber(c, x):
                out[(c, x, t2)] = self.mu(c, x, t2)
        return out

    def mu(self, c, x, t2) -> tuple:
        cat = self.alpha.cat
        kept, vals = [], {}
        for (f, _), inner in t2[1]:
            d = cat.dom[f]
            if inner[0] == max_sieve(cat, d):
                kept.append(f)
                vals[f] = self.value(inner, cat.identity[d])
        return self.make(c, x, kept, vals)

    def projection(self) -> NatTrans:
        """``X.T(alpha) -> Cof``, reading off the extent."""
        total = display(self.family).total
        return NatTrans(total, self.phi.presheaf,
                        {c: {e: e[1][0] for e in total.fibers[c]} for c in total.cat.objects})

    def eta_display(self) -> NatTrans:
        """``X.alpha -> X.T(alpha)``."""
        src, tgt = display(self.alpha).total, display(self.family).total
        return NatTrans(src, tgt, {c: {(x, a): (x, self.eta(c, x, a)) for x, a in src.fibers[c]}
                                   for c in src.cat.objects})


def partial_monad(alpha: TypeFamily, phi: CofClass | None = None):
    """``(T(alpha), eta, mu)`` with eta and mu as maps ``(c, x, a) -> b``."""
    P = Partial(alpha, phi)
    return P.family, P.eta_map(), P.mu_map()


@dataclass
class MonadReport:
    items: list = field(default_factory=list)     # (law, ok, witness)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)


def _first_difference(lhs: dict, rhs: dict):
    for k, v in lhs.items():
        if rhs.get(k) != v:
            return k
    return None


def monad_law_check(alpha: TypeFamily, phi: CofClass | None = None) -> MonadReport:
    """Unit and associativity laws pointwise, naturality, eta cartesian and cofibrant."""
    P = Partial(alpha, phi)
    TT = P.lift()
    TTT = TT.lift()
    rep = MonadReport()
    eta, mu = P.eta_map(), P.mu_map()
    eta_T = TT.eta_map()          # T alpha -> T T alpha
    mu_T = TT.mu_map()            # T T T alpha -> T T alpha
    ident = {(c, x, t): t for c, x in P.base.elements() for t in P.family.fiber(c, x)}

    rep.items.append(("eta natural", is_type_morphism(alpha, P.family, eta), None))
    rep.items.append(("mu natural", is_type_morphism(TT.family, P.family, mu), None))
    left = {k: mu[(k[0], k[1], v)] for k, v in eta_T.items()}
    rep.items.append(("mu . eta T = id", left == ident, _first_difference(left, ident)))
    T_eta = P.apply(eta, TT)
    right = {k: mu[(k[0], k[1], v)] for k, v in T_eta.items()}
    rep.items.append(("mu . T eta = id", right == ident, _first_difference(right, ident)))
    T_mu = TTT.apply(mu, TT)
    a1 = {k: mu[(k[0], k[1], v)] for k, v in mu_T.items()}
    a2 = {k: mu[(k[0], k[1], v)] for k, v in T_mu.items()}
    rep.items.append(("mu . mu T = mu . T mu", a1 == a2, _first_difference(a1, a2)))
    rep.items.append(("eta cartesian", eta_is_cartesian(P), None))
    rep.items.append(("eta cofibration", is_cofibration(P.eta_display(), P.phi), None))
    return rep


def eta_is_cartesian(P: Partial) -> bool:
    """``X.alpha`` is the pullback of ``tcof: 1 -> Cof`` along the extent projection."""
    proj = P.projection()
    tcof = P.phi.tcof()
    cone = pullback(proj, tcof)
    total = display(P.alpha).total
    one = tcof.source
    comparison = cone.mediate(P.eta_display(),
                              NatTrans(total, one, {c: {e: STAR for e in total.fibers[c]}
                                                    for c in total.cat.objects}))
    return all(set(comparison.comp[c].values()) == set(cone.obj.fibers[c]) and
               len(set(comparison.comp[c].values())) == len(total.fibers[c])
               for c in total.cat.objects)


def closed_presheaf(alpha: TypeFamily, name=None) -> Presheaf:
    """A family over the terminal presheaf, read as a presheaf."""
    cat = alpha.cat
    fibers = {c: alpha.fiber(c, STAR) for c in cat.objects}
    restr = {f: {a: alpha.restrict(STAR, f, a) for a in fibers[cat.cod[f]]} for f in cat.morphisms}
    return Presheaf(cat, fibers, restr, name=name or alpha.name)


@dataclass
class PartialMapClassification:
    classifier: NatTrans          # Y -> T(A)
    eta: NatTrans                 # A -> T(A)
    unique: bool
    count: int


def classify_partial_map(m: NatTrans, u: NatTrans, phi: CofClass | None = None
                         ) -> PartialMapClassification:
    """The unique map ``Y -> T(A)`` whose pullback square against eta is ``(m, u)``."""
    S, Y, A = m.source, m.target, u.target
    cat = Y.cat
    phi = phi or all_monos(cat)
    if u.source is not S and not u.source.same_as(S):
        raise ValueError("u must be defined on the domain of m")
    if not is_cofibration(m, phi):
        raise ValueError("m is not a cofibration")
    P = Partial(const_type(terminal(cat), A, name=A.name), phi)
    TA = closed_presheaf(P.family, name=f"T({A.name})")
    back = {c: {m.comp[c][s]: s for s in S.fibers[c]} for c in cat.objects}
    comps = {}
    for c in cat.objects:
        comps[c] = {}
        for y in Y.fibers[c]:
            extent, vals = [], {}
            for f in cat.into(c):
                yf = Y.act(y, f)
                s = back[cat.dom[f]].get(yf)
                if s is not None:
                    extent.append(f)
                    vals[f] = u.comp[cat.dom[f]][s]
            comps[c][y] = P.make(c, STAR, extent, vals)
    chi = NatTrans(Y, TA, comps)
    eta = NatTrans(A, TA, {c: {a: P.eta(c, STAR, a) for a in A.fibers[c]} for c in cat.objects})
    top = {c: max_sieve(cat, c) for c in cat.objects}

    def allowed(c, y):
        s = back[c].get(y)
        if s is not None:
            return [eta.comp[c][u.comp[c][s]]]
        return [t for t in TA.fibers[c] if t[0] != top[c]]
    found = hom_set(Y, TA, allowed)
    return PartialMapClassification(chi, eta, len(found) == 1 and found[0] == chi, len(found))
