"""Path types, transport, contraction of paths and the J eliminator."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..classifiers import TypeFamily, const_type, display, pi_type, substitute, weaken
from ..kernel import NatTrans, Packed
from ..typetheory import Judgement, RuleReport, check_judgement
from .cofibrations import CofClass, all_monos, is_cofibration
from .fibrations import FibStructure, fib_problems, fib_search, fib_verify
from .interval import Interval

__all__ = ["PathType", "path_type", "transport", "path_contract", "path_fib", "JResult",
           "j_eliminator", "IdRulesReport", "id_rules_check"]


class PathType:
    """``alpha^I`` over X, and the family of paths with given endpoints over ``X.alpha.alpha``.

    Paths are Pi elements ``((h, i), a)`` over the constant family I.
    """

    def __init__(self, alpha: TypeFamily, interval: Interval):
        X, cat = alpha.base, alpha.cat
        self.alpha, self.interval = alpha, interval
        self._index, self._plans = {}, {}
        const_I = const_type(X, interval.I, name="I")
        self.paths = pi_type(const_I, weaken(alpha, const_I))
        self.paths.name = "alpha^I"
        self.pairs = weaken(alpha, alpha)                 # over X.alpha
        self.base = display(self.pairs).total            # elements ((x, a), b)
        fibers = {}
        for c, ((x, a), b) in self.base.elements():
            fibers[(c, ((x, a), b))] = [s for s in self.paths.fiber(c, x)
                                        if self.at(c, s, interval.end(0, c)) == a
                                        and self.at(c, s, interval.end(1, c)) == b]
        paths = self.paths
        self.family = TypeFamily(self.base, fibers,
                                 act=lambda c, e, g, s: paths.restrict(e[0][0], g, s),
                                 tag=("path", alpha), name="Path")
        self.total = display(self.family).total           # elements (((x, a), b), s)

    def node_index(self, c) -> dict:
        """Position of ``(h, i)`` in a path at stage c (the same for every base point)."""
        if c not in self._index:
            cat, I = self.alpha.cat, self.interval
            nodes = [(h, i) for h in cat.into(c) for i in I.I.fibers[cat.dom[h]]]
            self._index[c] = {n: p for p, n in enumerate(nodes)}
        return self._index[c]

    def at(self, c, s, i, h=None):
        """Value of the path s at ``(h, i)``; h defaults to the identity."""
        h = self.alpha.cat.identity[c] if h is None else h
        return s[self.node_index(c)[(h, i)]][1]

    def con(self, c, x, a):
        """The constant path at a."""
        return Packed(((h, i), self.alpha.restrict(x, h, a))
                      for h, i in self.paths.extra["nodes"][(c, x)])

    def endpoint_map(self, k: int) -> NatTrans:
        """``epsilon_k: X.alpha^I -> X.alpha``."""
        tot = display(self.paths).total
        I = self.interval
        return NatTrans(tot, display(self.alpha).total,
                        {c: {(x, s): (x, self.at(c, s, I.end(k, c))) for x, s in tot.fibers[c]}
                         for c in tot.cat.objects})

    def con_map(self) -> NatTrans:
        """``X.alpha -> X.alpha^I``."""
        src = display(self.alpha).total
        return NatTrans(src, display(self.paths).total,
                        {c: {(x, a): (x, self.con(c, x, a)) for x, a in src.fibers[c]}
                         for c in src.cat.objects})

    def refl_map(self) -> NatTrans:
        """``X.alpha -> X.alpha.alpha.Path``, ``(x, a) |-> (((x, a), a), con a)``."""
        src = display(self.alpha).total
        return NatTrans(src, self.total,
                        {c: {(x, a): (((x, a), a), self.con(c, x, a)) for x, a in src.fibers[c]}
                         for c in src.cat.objects})

    def diagonal_ok(self) -> bool:
        """``epsilon_k . con = id`` for both k, i.e. the square with the diagonal commutes."""
        con = self.con_map()
        return all(con.then(self.endpoint_map(k)) == _identity(display(self.alpha).total)
                   for k in (0, 1))

    def values(self, c, s) -> tuple:
        """A path as values in cylinder order."""
        table = dict(s)
        return tuple(table[(h, i)] for _, h, i in self.interval.cylinder(c).nodes)

    def contract(self, c, x, s) -> tuple:
        """``epsilon_s``: the path of paths ``j |-> (i |-> s(conn0(i, j)))`` in cylinder order.

        Entry at node ``(d, h, j)`` is a path over ``x.h``.
        """
        I, cat, X = self.interval, self.alpha.cat, self.alpha.base
        table = dict(s)
        out = []
        for d, h, j in I.cylinder(c).nodes:
            xh = X.act(x, h)
            out.append(Packed(((h2, i2), table[(cat.comp(h, h2), I.connect(0, cat.dom[h2], i2, I.I.act(j, h2)))])
                              for h2, i2 in self.paths.extra["nodes"][(d, xh)]))
        return Packed(out)


def _identity(X):
    return NatTrans(X, X, {c: {x: x for x in X.fibers[c]} for c in X.cat.objects})


def path_type(alpha: TypeFamily, interval: Interval) -> PathType:
    return PathType(alpha, interval)


def transport(fib: FibStructure, c, path: tuple, e, k: int = 0):
    """Carry ``e`` over the start of a base path to its other end.

    ``path`` lists base points over ``y(c) x I`` in cylinder order; the answer
    is the chosen filler of the problem with empty sieve, read at the far end.
    """
    beta, I = fib.alpha, fib.interval
    cyl = I.cylinder(c)
    start = path[cyl.top[k]]
    u = tuple(beta.restrict(start, h, e) if i == I.end(k, d) else None for d, h, i in cyl.nodes)
    filler = fib.fillers[(c, k, (), Packed(path), Packed(u))]
    return filler[cyl.top[1 - k]]


def path_contract(P: PathType, c, x, s) -> tuple:
    return P.contract(c, x, s)


def _plan(P: PathType, c, k):
    """Problem-independent data for turning path problems at c into problems for alpha."""
    if (c, k) in P._plans:
        return P._plans[(c, k)]
    I, cat = P.interval, P.alpha.cat
    cylC = I.cylinder(c)
    per_element = []
    for d, h, jj in cylC.nodes:
        cylD = I.cylinder(d)
        parts = []
        for h2 in cat.into(d):
            e = cat.dom[h2]
            parts.append((h2, cat.comp(h, h2), I.I.act(jj, h2) in (I.end(0, e), I.end(1, e))))
        nodes = []
        for e, h2, i2 in cylD.nodes:
            jj2 = I.I.act(jj, h2)
            nodes.append((cylC.index[(e, cat.comp(h, h2), i2)], h2, i2 == I.end(k, e),
                          P.node_index(e)[(cat.identity[e], jj2)],
                          0 if jj2 == I.end(0, e) else 1))
        read = {i: cylD.index[(d, cat.identity[d], i)] for i in I.I.fibers[d]}
        per_element.append((d, parts, nodes, read))
    assemble = []
    for d, h, i in cylC.nodes:
        assemble.append([((h2, jj2), cylC.index[(cat.dom[h2], cat.comp(h, h2), jj2)], I.I.act(i, h2))
                         for h2, jj2 in P.node_index(d)])
    P._plans[(c, k)] = (per_element, assemble)
    return P._plans[(c, k)]


def path_fib(P: PathType, fib_alpha: FibStructure, phi: CofClass | None = None) -> FibStructure:
    """A structure on the family of paths, read off from ``fib_alpha``.

    Each problem for paths is turned into problems for alpha by treating the
    path coordinate as part of the generating cofibration: over an element
    ``(h, j)`` of ``y(c) x I`` the sieve is ``{h2 | h.h2 in sieve or j.h2 is an endpoint}``.
    """
    I = P.interval
    cat = P.alpha.cat
    order = cat.morphism_index
    fillers = {}
    for key in fib_problems(P.family, I, phi):
        c, k, sieve, v, u = key
        per_element, assemble = _plan(P, c, k)
        members = set(sieve)
        inner = []
        for d, parts, nodes, read in per_element:
            sub = {h2 for h2, hh2, at_end in parts if at_end or hh2 in members}
            v_t, u_t = [], []
            for pos, h2, at_k, idx, end in nodes:
                (x_, a_), b_ = v[pos]
                v_t.append(x_)
                if h2 in sub or at_k:
                    given = u[pos]
                    u_t.append(given[idx][1] if given is not None else (a_ if end == 0 else b_))
                else:
                    u_t.append(None)
            j = fib_alpha.fillers[(d, k, tuple(sorted(sub, key=order)), Packed(v_t), Packed(u_t))]
            inner.append({i: j[p] for i, p in read.items()})
        fam = P.family
        fillers[key] = Packed(fam.canonical(d, v[p], Packed((node, inner[q][i]) for node, q, i in row))
                              for p, ((d, _, _), row) in enumerate(zip(I.cylinder(c).nodes, assemble)))
    return FibStructure(P.family, I, fillers)


@dataclass
class JResult:
    section: dict                 # over X.alpha.alpha.Path, keyed (c, element)
    mode: str                     # "strict" or "propositional"
    structure: FibStructure
    witnesses: dict = field(default_factory=dict)   # (c, (x, a)) -> path from J(con a) to b(a)


def _constant_filler(beta, I, key, options):
    """Put the constant filler first when the base path does not move along I."""
    c, k, sieve, v, u = key
    cyl = I.cylinder(c)
    if k != 0 or sieve:
        return options
    start = {}
    for p, (d, h, i) in enumerate(cyl.nodes):
        if i == I.end(0, d):
            start[(d, h)] = p
    if any(v[p] != v[start[(d, h)]] for p, (d, h, _) in enumerate(cyl.nodes)):
        return options
    const = Packed(u[start[(d, h)]] for d, h, _ in cyl.nodes)
    return [const] if const in options else options


def _j_values(P: PathType, beta: TypeFamily, fib: FibStructure, b: dict):
    I, cat, X = P.interval, P.alpha.cat, P.alpha.base
    alpha = P.alpha
    J, problems = {}, {}
    for c, elem in P.total.elements():
        ((x, a), a2), s = elem
        cyl = I.cylinder(c)
        eps = P.contract(c, x, s)
        table = dict(s)
        path = []
        for p, (d, h, j) in enumerate(cyl.nodes):
            xh, ah = X.act(x, h), alpha.restrict(x, h, a)
            path.append((((xh, ah), table[(h, j)]), eps[p]))
        path = Packed(path)
        u = Packed(b[(d, (X.act(x, h), alpha.restrict(x, h, a)))] if j == I.end(0, d) else None
                  for d, h, j in cyl.nodes)
        key = (c, 0, (), path, u)
        problems[(c, elem)] = key
        J[(c, elem)] = fib.fillers[key][cyl.top[1]]
    return J, problems


def j_eliminator(P: PathType, beta: TypeFamily, fib_beta: FibStructure, b: dict,
                 strict: bool = True) -> JResult:
    """``J(a, a', u) = transport of b(a) along the contraction of u``.

    ``beta`` lives over ``X.alpha.alpha.Path`` and ``b`` is a section of
    ``beta`` along the reflexivity map, keyed ``(c, (x, a))``.
    """
    I = P.interval
    refl = P.refl_map()

    def computes(J):
        return all(J[(c, refl.comp[c][xa])] == b[(c, xa)]
                   for c in P.alpha.cat.objects for xa in refl.source.fibers[c])
    J, problems = _j_values(P, beta, fib_beta, b)
    if computes(J):
        return JResult(J, "strict", fib_beta)
    if strict:
        found = fib_search(beta, I, prefer=lambda key, opts: _constant_filler(beta, I, key, opts))
        if found is not None:
            J2, _ = _j_values(P, beta, found, b)
            if computes(J2):
                return JResult(J2, "strict", found)
    witnesses = {}
    for c in P.alpha.cat.objects:
        for xa in refl.source.fibers[c]:
            key = problems[(c, refl.comp[c][xa])]
            witnesses[(c, xa)] = fib_beta.fillers[key]
    return JResult(J, "propositional", fib_beta, witnesses)


@dataclass
class IdRulesReport:
    rules: RuleReport
    computation: str              # "strict", "propositional" or "skipped"
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.rules.ok


def id_rules_check(P: PathType, beta: TypeFamily, b: dict, fib_alpha: FibStructure,
                   fib_beta: FibStructure, phi: CofClass | None = None,
                   path_structure: FibStructure | None = None) -> IdRulesReport:
    """Formation, introduction, elimination and uniformity of J, then the computation rule."""
    cat = P.alpha.cat
    phi = phi or all_monos(cat)
    rep = RuleReport()
    I = P.interval
    X = P.alpha.base
    ctx = display(P.alpha).total

    form = check_judgement(Judgement("type", P.base, P.family)).ok
    pf = path_structure or path_fib(P, fib_alpha, phi)
    rep.clauses.append(("formation", form and fib_verify(P.family, pf, phi).ok, None))

    refl = P.refl_map()
    diag = NatTrans(ctx, P.base, {c: {(x, a): ((x, a), a) for x, a in ctx.fibers[c]} for c in cat.objects})
    at_diag = substitute(P.family, diag)
    con = {(c, (x, a)): P.con(c, x, a) for c, (x, a) in ctx.elements()}
    intro = check_judgement(Judgement("elem", ctx, (at_diag, con))).ok
    rep.clauses.append(("introduction", intro and P.diagonal_ok(), None))

    res = j_eliminator(P, beta, fib_beta, b)
    elim = check_judgement(Judgement("elem", P.total, (beta, res.section)))
    rep.clauses.append(("elimination", elim.ok, elim.failure))

    bad = None
    for c, e in P.total.elements():
        for f in cat.into(c):
            if res.section[(cat.dom[f], P.total.act(e, f))] != beta.restrict(e, f, res.section[(c, e)]):
                bad = bad or (c, e, f)
    rep.clauses.append(("uniformity", bad is None, bad))

    notes = []
    if not is_cofibration(refl, phi):
        notes.append("reflexivity map is not a cofibration; computation rule skipped")
        return IdRulesReport(rep, "skipped", notes)
    if res.mode == "propositional":
        ok = all(w[I.cylinder(c).top[0]] == b[(c, xa)] and
                 w[I.cylinder(c).top[1]] == res.section[(c, refl.comp[c][xa])]
                 for (c, xa), w in res.witnesses.items())
        notes.append("computation holds up to the witnessing transport paths" if ok else
                     "witness paths do not end at J")
    return IdRulesReport(rep, res.mode, notes)
