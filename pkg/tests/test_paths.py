import pytest

from gen import discrete, site
from kripkejoyal.classifiers import TypeFamily, const_type, sections, substitute
from kripkejoyal.homotopy.fibrations import fib_search, fib_verify
from kripkejoyal.homotopy.interval import constant_interval, cube_interval, two_point_interval
from kripkejoyal.homotopy.paths import (id_rules_check, j_eliminator, path_contract, path_fib,
                                        path_type, transport)
from kripkejoyal.kernel import Presheaf, terminal


def _setup(name, size=2):
    cat = site(name)
    I = cube_interval(cat) if name.startswith("cube") else constant_interval(cat)
    K = discrete(cat, range(size))
    alpha = const_type(terminal(cat), K)
    return cat, I, K, alpha, fib_search(alpha, I)


@pytest.mark.parametrize("name", ["terminal", "poset-2", "cube-1", "cube-2"])
def test_path_family(name):
    cat, I, K, alpha, fa = _setup(name)
    P = path_type(alpha, I)
    assert P.diagonal_ok()
    pf = path_fib(P, fa)
    assert fib_verify(P.family, pf).ok


def _constant_paths(cat, I, alpha, x_of):
    for c in cat.objects:
        x = x_of(c)
        yield c, x, tuple(alpha.base.act(x, h) for _, h, _ in I.cylinder(c).nodes)


@pytest.mark.parametrize("name", ["cube-1", "cube-2"])
def test_transport_is_identity_on_cube_interval(name):
    # the cylinder is connected, so every structure moves nothing
    cat, I, K, alpha, fa = _setup(name)
    for c, x, path in _constant_paths(cat, I, alpha, lambda c: alpha.base.fibers[c][0]):
        for e in K.fibers[c]:
            for k in (0, 1):
                assert transport(fa, c, path, e, k) == e


def test_transport_on_disconnected_interval():
    cat, I, K, alpha, fa = _setup("poset-2")
    P = path_type(alpha, I)

    def stay(key, options):
        c, k, sieve, v, u = key
        cyl = I.cylinder(c)
        const = tuple(u[cyl.index[(d, h, I.end(k, d))]] for d, h, _ in cyl.nodes)
        return [const] if const in options else options
    regular = fib_search(alpha, I, prefer=stay)
    for c, x, path in _constant_paths(cat, I, alpha, lambda c: alpha.base.fibers[c][0]):
        for e in K.fibers[c]:
            for k in (0, 1):
                assert transport(regular, c, path, e, k) == e
                moved = transport(fa, c, path, e, k)
                ends = ((x, e), moved) if k == 0 else ((x, moved), e)
                assert P.family.fiber(c, ends)


def test_transport_along_a_set_family():
    cat = site("terminal")
    X = Presheaf(cat, {"*": ("p", "q")})
    alpha = TypeFamily(X, {("*", "p"): ("a",), ("*", "q"): ("b", "c")})
    I = two_point_interval(cat)
    s = fib_search(alpha, I)
    cyl = I.cylinder("*")
    path = tuple("p" if i == 0 else "q" for _, _, i in cyl.nodes)
    assert transport(s, "*", path, "a", 0) in ("b", "c")
    back = tuple("q" if i == 0 else "p" for _, _, i in cyl.nodes)
    assert transport(s, "*", back, "b", 0) == "a"


@pytest.mark.parametrize("name", ["poset-2", "cube-1"])
def test_contraction_of_constant_path_is_constant(name):
    cat, I, K, alpha, fa = _setup(name)
    P = path_type(alpha, I)
    X = alpha.base
    for c in cat.objects:
        for x in X.fibers[c]:
            for a in alpha.fiber(c, x):
                eps = path_contract(P, c, x, P.con(c, x, a))
                for (d, h, _), entry in zip(I.cylinder(c).nodes, eps):
                    assert entry == P.con(d, X.act(x, h), alpha.restrict(x, h, a))


@pytest.mark.parametrize("name", ["terminal", "poset-2", "cube-1"])
def test_contraction_ends(name):
    # at j = delta1 the contraction is the path itself; at j = delta0 it is constant
    cat, I, K, alpha, fa = _setup(name)
    P = path_type(alpha, I)
    for c, ((x, a), b) in P.base.elements():
        for s in P.family.fiber(c, ((x, a), b)):
            eps = P.contract(c, x, s)
            cyl = I.cylinder(c)
            assert eps[cyl.top[1]] == s
            assert eps[cyl.top[0]] == P.con(c, x, a)


def _id_instance(name):
    cat, I, K, alpha, fa = _setup(name)
    P = path_type(alpha, I)
    pf = path_fib(P, fa)
    beta = const_type(P.total, K)
    fb = fib_search(beta, I)
    b = sections(substitute(beta, P.refl_map()))[1]
    return P, beta, b, fa, fb, pf


@pytest.mark.parametrize("name", ["terminal", "poset-2", "cube-1"])
def test_id_rules(name):
    P, beta, b, fa, fb, pf = _id_instance(name)
    rep = id_rules_check(P, beta, b, fa, fb, path_structure=pf)
    assert rep.ok, rep.rules.clauses
    assert [n for n, _, _ in rep.rules.clauses] == ["formation", "introduction", "elimination",
                                                   "uniformity"]
    assert rep.computation == "strict"
    J = j_eliminator(P, beta, fb, b)
    refl = P.refl_map()
    for c in P.alpha.cat.objects:
        for xa in refl.source.fibers[c]:
            assert J.section[(c, refl.comp[c][xa])] == b[(c, xa)]


@pytest.mark.slow
def test_id_rules_cube2():
    P, beta, b, fa, fb, pf = _id_instance("cube-2")
    rep = id_rules_check(P, beta, b, fa, fb, path_structure=pf)
    assert rep.ok and rep.computation == "strict"
