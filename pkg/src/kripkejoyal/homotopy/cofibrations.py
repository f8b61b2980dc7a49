"""Cofibration classes: sub-presheaves of Omega closed as a dominance."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..classifiers import (PropInContext, char_and_comprehend, max_sieve, omega,
                           restrict_sieve)
from ..forcing import Atom, Implies, query_to_prop
from ..kernel import STAR, FinCat, NatTrans, Presheaf, SubPresheaf, is_mono, product, terminal

__all__ = ["CofClass", "all_monos", "cof_class", "AxiomReport", "cof_axiom_check",
           "is_cofibration", "cof_of"]


class CofClass:
    """The sieves declared cofibrant at each object, in Omega's order."""

    def __init__(self, cat: FinCat, phi: Mapping):
        self.cat = cat
        Om, _ = omega(cat)
        self.omega = Om
        chosen = {c: set(map(frozenset, phi.get(c, ()))) for c in cat.objects}
        for c in cat.objects:
            unknown = chosen[c] - set(map(frozenset, Om.fibers[c]))
            if unknown:
                raise ValueError(f"not sieves on {c!r}: {sorted(map(sorted, unknown))}")
        self.phi = {c: tuple(s for s in Om.fibers[c] if frozenset(s) in chosen[c])
                    for c in cat.objects}
        self._members = {c: frozenset(v) for c, v in self.phi.items()}
        self.presheaf = Presheaf(cat, self.phi,
                                 {f: {s: restrict_sieve(cat, s, f) for s in self.phi[cat.cod[f]]}
                                  for f in cat.morphisms}, name="Cof")

    def __repr__(self):
        return f"CofClass({ {c: len(v) for c, v in self.phi.items()} })"

    def contains(self, c, sieve) -> bool:
        return tuple(sieve) in self._members[c]

    def is_everything(self) -> bool:
        return all(len(self.phi[c]) == len(self.omega.fibers[c]) for c in self.cat.objects)

    def as_subpresheaf(self) -> SubPresheaf:
        return SubPresheaf(self.omega, self.phi)

    def tcof(self) -> NatTrans:
        one = terminal(self.cat)
        return NatTrans(one, self.presheaf, {c: {STAR: max_sieve(self.cat, c)} for c in self.cat.objects})

    def cof_map(self) -> PropInContext:
        """``cof: Omega -> Omega``, the classifying map of Cof inside Omega."""
        return char_and_comprehend(self.as_subpresheaf())[0]


def all_monos(cat: FinCat) -> CofClass:
    Om, _ = omega(cat)
    return CofClass(cat, Om.fibers)


def cof_class(cat: FinCat, sieves_by_object: Mapping) -> CofClass:
    return CofClass(cat, sieves_by_object)


@dataclass
class AxiomReport:
    items: list = field(default_factory=list)     # (axiom, ok, witness)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def failing(self):
        return [(name, w) for name, ok, w in self.items if not ok]


def cof_axiom_check(phi: CofClass) -> AxiomReport:
    """Closure axioms of a cofibration class, dominance by Kripke-Joyal evaluation."""
    cat, Om = phi.cat, phi.omega
    rep = AxiomReport()
    rep.items.append(("monos", True, None))   # Omega only classifies monos
    missing = next((c for c in cat.objects if not phi.contains(c, ())), None)
    rep.items.append(("empty sieve", missing is None, missing))
    missing = next((c for c in cat.objects if not phi.contains(c, max_sieve(cat, c))), None)
    rep.items.append(("maximal sieve", missing is None, missing))
    bad = None
    for f in cat.morphisms:
        for s in phi.phi[cat.cod[f]]:
            if not phi.contains(cat.dom[f], restrict_sieve(cat, s, f)):
                bad = bad or (f, s)
    rep.items.append(("restriction", bad is None, bad))
    rep.items.append(("dominance",) + _dominance(phi))
    return rep


def _dominance(phi: CofClass):
    """``cof p => ((p => cof q) => cof (p and q))`` at every stage of Omega x Omega."""
    cat, Om = phi.cat, phi.omega
    pairs = product(Om, Om).obj
    cof = phi.cof_map()

    def prop(fn):
        return PropInContext(pairs, {c: {pq: fn(c, pq) for pq in pairs.fibers[c]}
                                     for c in cat.objects})
    p = prop(lambda c, pq: pq[0])
    q = prop(lambda c, pq: pq[1])
    cof_p = prop(lambda c, pq: cof.value[c][pq[0]])
    cof_q = prop(lambda c, pq: cof.value[c][pq[1]])
    meet = {c: {pq: tuple(f for f in pq[0] if f in set(pq[1])) for pq in pairs.fibers[c]}
            for c in cat.objects}
    cof_pq = prop(lambda c, pq: cof.value[c][meet[c][pq]])
    formula = Implies(Atom(cof_p), Implies(Implies(Atom(p), Atom(cof_q)), Atom(cof_pq)))
    # one pass with the sieve operations; a stage forces the formula iff its sieve is maximal
    value = query_to_prop(formula, pairs)
    for c, pq in pairs.elements():
        if not value.holds(c, pq):
            return False, (c, pq[0], pq[1])
    return True, None


def is_cofibration(m: NatTrans, phi: CofClass) -> bool:
    """Mono whose characteristic map lands in Cof."""
    if not is_mono(m):
        return False
    sigma, _ = char_and_comprehend(SubPresheaf.of_mono(m))
    return all(phi.contains(c, s) for c in sigma.value for s in sigma.value[c].values())


def cof_of(sigma: PropInContext, phi: CofClass) -> PropInContext:
    """``cof o sigma``."""
    cof = phi.cof_map()
    X = sigma.base
    return PropInContext(X, {c: {x: cof.value[c][sigma.value[c][x]] for x in X.fibers[c]}
                             for c in X.cat.objects})
