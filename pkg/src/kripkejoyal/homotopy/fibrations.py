"""Uniform fibration structures against ``m (x) delta_k`` for generating cofibrations m.

A generating problem is a tuple ``(c, k, sieve, v, u)``: ``v`` lists the base
points over the cylinder ``y(c) x I`` in node order, ``u`` the given values on
``D = {(h, i) | h in sieve or i = delta_k}`` with ``None`` elsewhere.  A
filler is the full tuple of values over the cylinder.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..classifiers import TypeFamily, classify_small_map, display, restrict_sieve
from ..kernel import NatTrans, Packed, Report, exponential, pullback
from ..search import collect, count, natural_assignments
from .cofibrations import CofClass, all_monos
from .interval import Cylinder, Interval, pullback_hom
from .trivial import TrivFibStructure, _partial, extensions, tfib_problems, tfib_search, tfib_verify

__all__ = ["FibStructure", "Fibrations", "fib_problems", "fib_fillers", "fib_search", "fib_count",
           "fib_structures", "fib_verify", "endpoint_family", "leibniz_transpose",
           "leibniz_filler_bijection", "transpose_structure", "untranspose_structure",
           "fib_via_tfib", "fib_tfib_agree", "pullback_hom_matches"]


@dataclass
class FibStructure:
    alpha: TypeFamily
    interval: Interval
    fillers: dict

    def __call__(self, key):
        return self.fillers[key]

    def certificate(self) -> list:
        return [(key, j) for key, j in self.fillers.items()]


class Fibrations:
    """Problem enumeration for one family, interval and cofibration class."""

    def __init__(self, alpha: TypeFamily, interval: Interval, phi: CofClass | None = None):
        self.alpha, self.interval = alpha, interval
        self.cat = alpha.cat
        self.phi = phi or all_monos(self.cat)
        self._paths = {}
        self._problems = None

    def cyl(self, c) -> Cylinder:
        return self.interval.cylinder(c)

    def base_paths(self, c) -> list:
        """Maps ``y(c) x I -> X`` as value tuples over the cylinder nodes."""
        if c not in self._paths:
            X, cyl = self.alpha.base, self.cyl(c)
            domains = [X.fibers[d] for d, _, _ in cyl.nodes]
            self._paths[c] = [Packed(v) for v in collect(
                natural_assignments(domains, cyl.edges, lambda p, x, g: X.act(x, g)),
                "paths in the base")]
        return self._paths[c]

    def in_extent(self, c, k, sieve) -> list:
        cyl, I = self.cyl(c), self.interval
        members = set(sieve)
        return [p for p, (d, h, i) in enumerate(cyl.nodes) if h in members or i == I.end(k, d)]

    def sections_over(self, c, v, positions, fixed=None):
        """Sections of ``alpha(v)`` over down-closed cylinder positions, as full tuples."""
        alpha, cyl = self.alpha, self.cyl(c)
        pos = list(positions)
        loc = {p: n for n, p in enumerate(pos)}
        domains = []
        for p in pos:
            if fixed is not None and fixed[p] is not None:
                domains.append((fixed[p],))
            else:
                domains.append(alpha.fiber(cyl.nodes[p][0], v[p]))
        edges = [[(g, loc[q]) for g, q in cyl.edges[p]] for p in pos]

        def act(n, a, g):
            return alpha.restrict(v[pos[n]], g, a)
        size = len(cyl)
        for vals in natural_assignments(domains, edges, act):
            full = [None] * size
            for p, a in zip(pos, vals):
                full[p] = a
            yield Packed(full)

    def problems(self) -> list:
        if self._problems is None:
            out = []
            for c in self.cat.objects:
                for k in (0, 1):
                    for sieve in self.phi.phi[c]:
                        ext = self.in_extent(c, k, sieve)
                        for v in self.base_paths(c):
                            for u in self.sections_over(c, v, ext):
                                out.append((c, k, sieve, v, u))
            self._problems = out
        return self._problems

    def restrict_problem(self, key, g):
        c, k, sieve, v, u = key
        pull = self.cyl(c).pull(g)
        return (self.cat.dom[g], k, restrict_sieve(self.cat, sieve, g),
                Packed(v[q] for q in pull), Packed(u[q] for q in pull))

    def restrict_filler(self, c, j, g):
        return Packed(j[q] for q in self.cyl(c).pull(g))

    def fillers(self, key) -> list:
        c, k, sieve, v, u = key
        return collect(self.sections_over(c, v, range(len(v)), fixed=u), "fillers")

    def _search(self, prefer=None):
        nodes = self.problems()
        index = {n: i for i, n in enumerate(nodes)}
        domains = []
        for key in nodes:
            options = self.fillers(key)
            if prefer is not None:
                options = prefer(key, options)
            domains.append(options)
        edges = [[(g, index[self.restrict_problem(key, g)]) for g in self.cat.into(key[0])]
                 for key in nodes]

        def act(i, j, g):
            return self.restrict_filler(nodes[i][0], j, g)
        return nodes, natural_assignments(domains, edges, act, list(range(len(nodes))))


def _fib(alpha, interval, phi) -> Fibrations:
    key = ("fibrations", id(interval), id(phi))
    F = alpha.extra.get(key)
    if F is None:
        F = alpha.extra[key] = Fibrations(alpha, interval, phi)
    return F


def fib_problems(alpha: TypeFamily, interval: Interval, phi: CofClass | None = None) -> list:
    return _fib(alpha, interval, phi).problems()


def fib_fillers(alpha: TypeFamily, interval: Interval, key, phi: CofClass | None = None) -> list:
    return _fib(alpha, interval, phi).fillers(key)


def fib_search(alpha: TypeFamily, interval: Interval, phi: CofClass | None = None,
               prefer=None) -> FibStructure | None:
    """First uniform structure in canonical order.

    ``prefer(key, fillers)`` may narrow the candidate fillers of a problem.
    """
    nodes, it = _fib(alpha, interval, phi)._search(prefer)
    for vals in it:
        return FibStructure(alpha, interval, dict(zip(nodes, vals)))
    return None


def fib_count(alpha: TypeFamily, interval: Interval, phi: CofClass | None = None,
              cap: int | None = None) -> int:
    return count(_fib(alpha, interval, phi)._search()[1], "fibration structures", cap)


def fib_structures(alpha: TypeFamily, interval: Interval, phi: CofClass | None = None,
                   cap: int | None = None) -> list:
    nodes, it = _fib(alpha, interval, phi)._search()
    return [FibStructure(alpha, interval, dict(zip(nodes, v)))
            for v in collect(it, "fibration structures", cap)]


def fib_verify(alpha: TypeFamily, s: FibStructure, phi: CofClass | None = None) -> Report:
    """Every problem has a filler that lies over v, extends u, is natural, and is uniform."""
    F = _fib(alpha, s.interval, phi)
    for key in F.problems():
        c, k, sieve, v, u = key
        j = s.fillers.get(key)
        cyl = F.cyl(c)
        if j is None or len(j) != len(cyl):
            return Report(False, "missing filler", key[:3])
        for p, (d, _, _) in enumerate(cyl.nodes):
            if not alpha.contains(d, v[p], j[p]):
                return Report(False, "bottom triangle", key[:3], f"at node {cyl.nodes[p]}")
            if u[p] is not None and u[p] != j[p]:
                return Report(False, "top triangle", key[:3], f"at node {cyl.nodes[p]}")
            for g, q in cyl.edges[p]:
                if alpha.restrict(v[p], g, j[p]) != j[q]:
                    return Report(False, "filler not natural", key[:3], f"at node {cyl.nodes[p]}")
        for g in F.cat.into(c):
            if s.fillers.get(F.restrict_problem(key, g)) != F.restrict_filler(c, j, g):
                return Report(False, "uniformity", key[:3], f"along {g}")
    return Report(True)


# ---------------------------------------------------------------- the Leibniz route

def endpoint_family(alpha: TypeFamily, interval: Interval, k: int) -> TypeFamily:
    """``F_k``: over ``X^I x_X X.alpha`` the paths in alpha over the base path starting at a.

    Base elements are ``(s, (x, a))`` with s in ``X^I``; fiber elements are value
    tuples over the cylinder, exactly the shape of fillers.
    """
    key = ("endpoint", id(interval), k)
    if key in alpha.extra:
        return alpha.extra[key]
    X, cat = alpha.base, alpha.cat
    XI = exponential(interval.I, X)
    ev = NatTrans(XI.obj, X, {c: {s: s[interval.cylinder(c).top[k]][1] for s in XI.obj.fibers[c]}
                              for c in cat.objects})
    Y = pullback(ev, display(alpha).proj).obj
    F = Fibrations(alpha, interval)
    fibers = {}
    for c in cat.objects:
        top = interval.cylinder(c).top[k]
        for s, (x, a) in Y.fibers[c]:
            v = Packed(b for _, b in s)
            fixed = [None] * len(v)
            fixed[top] = a
            paths = list(F.sections_over(c, v, range(len(v)), fixed=fixed))
            fibers[(c, (s, (x, a)))] = paths

    def act(c, y, g, j):
        return Packed(j[q] for q in interval.cylinder(c).pull(g))
    fam = TypeFamily(Y, fibers, act=act, tag=("endpoint", alpha, k), name=f"F{k}")
    alpha.extra[key] = fam
    return fam


def leibniz_transpose(alpha: TypeFamily, interval: Interval, key):
    """The problem ``(c, y, t)`` for ``F_k`` corresponding to a generating problem."""
    c, k, sieve, v, u = key
    fam = endpoint_family(alpha, interval, k)
    P = _partial(fam, None)
    cat = alpha.cat
    cyl = interval.cylinder(c)
    top = cyl.top[k]
    s = tuple(zip(_exp_nodes(cyl), v))
    y = (s, (v[top], u[top]))
    values = {f: Packed(u[q] for q in cyl.pull(f)) for f in sieve}
    return fam, (c, y, P.make(c, y, sieve, values))


def _exp_nodes(cyl: Cylinder) -> list:
    return [(h, i) for _, h, i in cyl.nodes]


def leibniz_filler_bijection(alpha: TypeFamily, interval: Interval, key) -> tuple[int, int, bool]:
    """Filler counts on both sides and whether identity on value tuples is a bijection."""
    lhs = fib_fillers(alpha, interval, key)
    fam, (c, y, t) = leibniz_transpose(alpha, interval, key)
    rhs = extensions(fam, c, y, t)
    return len(lhs), len(rhs), sorted(lhs, key=repr) == sorted(rhs, key=repr)


def transpose_structure(s: FibStructure, k: int) -> TrivFibStructure:
    """The k-half of a fibration structure as a trivial fibration structure on ``F_k``."""
    alpha, interval = s.alpha, s.interval
    fam = endpoint_family(alpha, interval, k)
    cat = alpha.cat
    fillers = {}
    for c, y, t in tfib_problems(fam):
        sv, (x, a) = y
        v = Packed(b for _, b in sv)
        cyl = interval.cylinder(c)
        extent = set(t[0])
        paths = {f: j for (f, _), j in t[1]}
        u = []
        for d, h, i in cyl.nodes:
            if h in extent:
                u.append(paths[h][interval.cylinder(d).index[(d, cat.identity[d], i)]])
            elif i == interval.end(k, d):
                u.append(alpha.restrict(x, h, a))
            else:
                u.append(None)
        fillers[(c, y, t)] = s.fillers.get((c, k, t[0], v, Packed(u)))
    return TrivFibStructure(fam, fillers)


def untranspose_structure(alpha: TypeFamily, interval: Interval, halves: tuple) -> FibStructure:
    """Inverse of ``transpose_structure`` applied to both halves."""
    fillers = {}
    for key in fib_problems(alpha, interval):
        fam, prob = leibniz_transpose(alpha, interval, key)
        fillers[key] = halves[key[1]].fillers.get(prob)
    return FibStructure(alpha, interval, fillers)


def fib_via_tfib(alpha: TypeFamily, interval: Interval) -> bool:
    """Fibrancy decided through trivial fibration structures on ``F_0`` and ``F_1``."""
    return all(tfib_search(endpoint_family(alpha, interval, k)) is not None for k in (0, 1))


def fib_tfib_agree(alpha: TypeFamily, s: FibStructure) -> tuple[bool, bool]:
    """``(fib_verify(s), tfib_verify of both transposed halves)``."""
    direct = fib_verify(alpha, s).ok
    halves = [tfib_verify(endpoint_family(alpha, s.interval, k), transpose_structure(s, k)).ok
              for k in (0, 1)]
    return direct, all(halves)


def pullback_hom_matches(alpha: TypeFamily, interval: Interval, k: int) -> bool:
    """The fibers of ``delta_k => p_alpha`` are the fibers of ``F_k``, elementwise."""
    disp = display(alpha)
    m = pullback_hom(interval, k, disp.proj)
    classified = classify_small_map(m)
    fam = endpoint_family(alpha, interval, k)
    for (c, (ps, (x, a))), paths in fam.fibers.items():
        over = classified.fibers.get((c, (ps, (x, a))), ())
        as_values = sorted((tuple(e[1] for _, e in s) for s in over), key=repr)
        if as_values != sorted(paths, key=repr):
            return False
    return True
