"""Intervals with connections, cylinders and the Leibniz constructions."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..kernel import (STAR, FinCat, NatTrans, Presheaf, SubPresheaf, coproduct, exponential,
                      is_mono, product, pullback, pushout, representable_times, terminal, yoneda)
from ..sites import cube_images, cube_name
from .cofibrations import CofClass, all_monos, is_cofibration

__all__ = ["Interval", "cube_interval", "constant_interval", "two_point_interval",
           "trivial_interval", "interval_axiom_check", "IntervalReport", "Cylinder",
           "pushout_product", "leibniz_product", "boundary", "pullback_hom", "swap_iso_check"]


@dataclass
class Interval:
    """``I`` with endpoints ``delta[k]: 1 -> I`` and connections ``conn[k]: I x I -> I``."""
    I: Presheaf
    delta: tuple
    conn: tuple
    name: str = "I"

    @property
    def cat(self) -> FinCat:
        return self.I.cat

    def end(self, k: int, d):
        return self.delta[k].comp[d][STAR]

    def connect(self, k: int, d, i, j):
        return self.conn[k].comp[d][(i, j)]

    def cylinder(self, c) -> "Cylinder":
        cache = self.__dict__.setdefault("_cylinders", {})
        if c not in cache:
            cache[c] = Cylinder(self, c)
        return cache[c]


def _interval(I: Presheaf, ends, meet, join, name) -> Interval:
    cat = I.cat
    one = terminal(cat)
    sq = product(I, I).obj
    delta = tuple(NatTrans(one, I, {d: {STAR: ends(k, d)} for d in cat.objects}) for k in (0, 1))
    conn = tuple(NatTrans(sq, I, {d: {(i, j): op(d, i, j) for i, j in sq.fibers[d]}
                                  for d in cat.objects}) for op in (meet, join))
    return Interval(I, delta, conn, name)


def cube_interval(cat: FinCat) -> Interval:
    """``I = y[1]`` on a cube site; connections are pointwise meet and join of monotone maps."""
    I = yoneda(cat, "1")

    def ends(k, d):
        return cube_name(int(d), 1, [(k,)] * (2 ** int(d)))

    def pointwise(op):
        def run(d, f, g):
            a, b = cube_images(f), cube_images(g)
            return cube_name(int(d), 1, [(op(u[0], v[0]),) for u, v in zip(a, b)])
        return run
    return _interval(I, ends, pointwise(min), pointwise(max), "y[1]")


def constant_interval(cat: FinCat) -> Interval:
    """The constant presheaf ``{0, 1}`` with min and max."""
    I = Presheaf(cat, {c: (0, 1) for c in cat.objects},
                 {f: {0: 0, 1: 1} for f in cat.morphisms}, name="2")
    return _interval(I, lambda k, d: k, lambda d, i, j: min(i, j), lambda d, i, j: max(i, j), "2")


def two_point_interval(cat: FinCat) -> Interval:
    """``I = {0, 1}`` on the terminal site."""
    if len(cat.objects) != 1:
        raise ValueError("the two-point interval is meant for the terminal site")
    return constant_interval(cat)


def trivial_interval(cat: FinCat) -> Interval:
    """``I = 1``: both endpoints coincide."""
    one = terminal(cat)
    return _interval(one, lambda k, d: STAR, lambda d, i, j: STAR, lambda d, i, j: STAR, "1")


@dataclass
class IntervalReport:
    items: list = field(default_factory=list)     # (diagram, ok, witness)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    def failing(self):
        return [name for name, ok, _ in self.items if not ok]


def interval_axiom_check(I: Interval, phi: CofClass | None = None) -> IntervalReport:
    """Distinct endpoints, cofibrant endpoints, and the connection unit/absorption laws.

    For each k, ``conn_k`` absorbs ``delta_k`` and has ``delta_(1-k)`` as a unit on
    both sides, giving four equations per connection.
    """
    cat = I.cat
    phi = phi or all_monos(cat)
    rep = IntervalReport()
    rep.items.append(("endpoints distinct", I.delta[0] != I.delta[1], None))
    for k in (0, 1):
        rep.items.append((f"delta{k} mono", is_mono(I.delta[k]), None))
        rep.items.append((f"delta{k} cofibration", is_cofibration(I.delta[k], phi), None))
    for k in (0, 1):
        e, u = k, 1 - k
        laws = [
            (f"conn{k}(delta{e}, i) = delta{e}", lambda d, i: I.connect(k, d, I.end(e, d), i), lambda d, i: I.end(e, d)),
            (f"conn{k}(i, delta{e}) = delta{e}", lambda d, i: I.connect(k, d, i, I.end(e, d)), lambda d, i: I.end(e, d)),
            (f"conn{k}(delta{u}, i) = i", lambda d, i: I.connect(k, d, I.end(u, d), i), lambda d, i: i),
            (f"conn{k}(i, delta{u}) = i", lambda d, i: I.connect(k, d, i, I.end(u, d)), lambda d, i: i),
        ]
        for name, lhs, rhs in laws:
            bad = next(((d, i) for d in cat.objects for i in I.I.fibers[d] if lhs(d, i) != rhs(d, i)), None)
            rep.items.append((name, bad is None, bad))
    return rep


class Cylinder:
    """``y(c) x I`` with elements ``(h, i)``; nodes ``(d, h, i)`` in canonical order."""

    def __init__(self, interval: Interval, c):
        cat, I = interval.cat, interval.I
        self.interval, self.c = interval, c
        self.presheaf = representable_times(cat, c, I)
        self.nodes = [(d, h, i) for d in cat.objects for h in cat.hom(d, c) for i in I.fibers[d]]
        self.index = {n: k for k, n in enumerate(self.nodes)}
        self.edges = [[(g, self.index[(cat.dom[g], cat.comp(h, g), I.act(i, g))])
                       for g in cat.into(d)] for d, h, i in self.nodes]
        self.top = {k: self.index[(c, cat.identity[c], interval.end(k, c))] for k in (0, 1)}
        self._pull = {}

    def __len__(self):
        return len(self.nodes)

    def pull(self, g) -> tuple:
        """Positions in this cylinder of the nodes of ``cylinder(dom g)`` under ``g x I``."""
        if g not in self._pull:
            cat = self.interval.cat
            other = self.interval.cylinder(cat.dom[g])
            self._pull[g] = tuple(self.index[(d, cat.comp(g, h), i)] for d, h, i in other.nodes)
        return self._pull[g]

    def at(self, h, i) -> int:
        cat = self.interval.cat
        return self.index[(cat.dom[h], h, i)]


def boundary(I: Interval) -> NatTrans:
    """``[delta0, delta1]: 1 + 1 -> I``."""
    one = terminal(I.cat)
    cop = coproduct(one, one)
    return cop.mediate(I.delta[0], I.delta[1])


def pushout_product(m: NatTrans, I: Interval, k: int) -> NatTrans:
    """``m (x) delta_k``: the map ``T +_S (S x I) -> T x I`` out of the pushout."""
    S, T = m.source, m.target
    cat = S.cat
    SI = product(S, I.I)
    TI = product(T, I.I)
    at_end = NatTrans(S, SI.obj, {c: {s: (s, I.end(k, c)) for s in S.fibers[c]} for c in cat.objects})
    po = pushout(m, at_end)
    t_end = NatTrans(T, TI.obj, {c: {t: (t, I.end(k, c)) for t in T.fibers[c]} for c in cat.objects})
    m_I = NatTrans(SI.obj, TI.obj, {c: {(s, i): (m.comp[c][s], i) for s, i in SI.obj.fibers[c]}
                                    for c in cat.objects})
    return po.mediate(t_end, m_I)


def leibniz_product(m1: NatTrans, m2: NatTrans) -> SubPresheaf:
    """Image of ``m1 (x) m2`` for monos: ``B x C  u  A x D`` inside ``B x D``."""
    B, D = m1.target, m2.target
    cat = B.cat
    im1 = {c: set(m1.comp[c].values()) for c in cat.objects}
    im2 = {c: set(m2.comp[c].values()) for c in cat.objects}
    BD = product(B, D).obj
    return SubPresheaf(BD, {c: {(b, d) for b, d in BD.fibers[c] if b in im1[c] or d in im2[c]}
                            for c in cat.objects})


def swap_iso_check(m: NatTrans, I: Interval, k: int) -> bool:
    """``(m (x) delta_k) (x) boundary`` and ``(boundary (x) m) (x) delta_k`` agree up to the swap
    ``((t, i), j) <-> ((t, j), i)`` of ``(T x I) x I``."""
    d_k = I.delta[k]
    bd = boundary(I)
    first = leibniz_product(_as_mono(leibniz_product(m, d_k)), bd)
    second = leibniz_product(_as_mono(leibniz_product(m, bd)), d_k)
    cat = I.cat
    for c in cat.objects:
        swapped = {((t, j), i) for (t, i), j in first.selected[c]}
        if swapped != set(second.selected[c]):
            return False
    return True


def _as_mono(sub: SubPresheaf) -> NatTrans:
    return sub.as_presheaf()[1]


def pullback_hom(I: Interval, k: int, p: NatTrans) -> NatTrans:
    """``delta_k => p: A^I -> X^I x_X A``, ``s |-> (p . s, s_k)``."""
    A, X = p.source, p.target
    cat = A.cat
    AI, XI = exponential(I.I, A), exponential(I.I, X)

    def ev(E, s, c):
        return E.apply(c, s, cat.identity[c], I.end(k, c))
    ev_X = NatTrans(XI.obj, X, {c: {s: ev(XI, s, c) for s in XI.obj.fibers[c]} for c in cat.objects})
    cone = pullback(ev_X, p)
    comps = {}
    for c in cat.objects:
        comps[c] = {}
        for s in AI.obj.fibers[c]:
            ps = tuple((node, p.comp[cat.dom[node[0]]][a]) for node, a in s)
            comps[c][s] = (ps, ev(AI, s, c))
    return NatTrans(AI.obj, cone.obj, comps)
