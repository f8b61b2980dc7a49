import itertools
import random

import pytest

import oracles
from gen import discrete, families, random_prop, site
from kripkejoyal.classifiers import (char_and_comprehend, closed_type, const_type, omega,
                                     sections)
from kripkejoyal.homotopy import (all_monos, classify_partial_map, cof_axiom_check, cof_class,
                                  cof_of, eta_is_cartesian, is_cofibration, monad_law_check,
                                  partial_monad, Partial)
from kripkejoyal.kernel import (STAR, NatTrans, Presheaf, SubPresheaf, identity_map, initial,
                                terminal)
from kripkejoyal.random_instances import random_subpresheaf, random_presheaf, random_hom


@pytest.mark.parametrize("name", ["terminal", "arrow", "poset-2", "poset-3", "cube-1", "cube-2"])
def test_all_monos_is_a_cofibration_class(name):
    rep = cof_axiom_check(all_monos(site(name)))
    assert rep.ok, rep.failing()


def _classes(cat):
    """Every restriction-closed Phi containing the empty and maximal sieves."""
    Om, _ = omega(cat)
    options = []
    for c in cat.objects:
        top = max(Om.fibers[c], key=len)
        middle = [s for s in Om.fibers[c] if s not in ((), top)]
        options.append([[(), top] + list(extra) for r in range(len(middle) + 1)
                        for extra in itertools.combinations(middle, r)])
    for pick in itertools.product(*options):
        yield dict(zip(cat.objects, pick))


@pytest.mark.parametrize("name", ["arrow", "poset-3"])
def test_dominance_against_oracle(name):
    cat = site(name)
    Om, _ = omega(cat)
    seen = 0
    for chosen in _classes(cat):
        phi = cof_class(cat, chosen)
        rep = cof_axiom_check(phi)
        restriction_ok = dict((n, ok) for n, ok, _ in rep.items)["restriction"]
        if not restriction_ok:
            continue
        seen += 1
        sets = {c: {frozenset(s) for s in phi.phi[c]} for c in cat.objects}
        expected = oracles.dominance_holds(cat, sets, Om.fibers)
        assert dict((n, ok) for n, ok, _ in rep.items)["dominance"] == expected
    assert seen > 1


def test_arrow_classes_all_pass_dominance():
    cat = site("arrow")
    for chosen in _classes(cat):
        rep = cof_axiom_check(cof_class(cat, chosen))
        if dict((n, ok) for n, ok, _ in rep.items)["restriction"]:
            assert rep.ok


def test_poset3_dominance_failure():
    cat = site("poset-3")
    Om, _ = omega(cat)
    phi = cof_class(cat, {"0": Om.fibers["0"], "1": Om.fibers["1"],
                          "2": [(), ("0<2", "1<2"), max(Om.fibers["2"], key=len)]})
    rep = cof_axiom_check(phi)
    assert rep.failing() == [("dominance", ("2", ("0<2", "1<2"), ("0<2",)))]


def test_unknown_sieve_is_rejected():
    with pytest.raises(ValueError):
        cof_class(site("poset-2"), {"1": [("0<1",), ("id_1",)]})


def test_missing_top_is_reported():
    cat = site("poset-2")
    rep = cof_axiom_check(cof_class(cat, {"0": [()], "1": [()]}))
    assert ("maximal sieve", "0") in rep.failing()


@pytest.mark.parametrize("seed", range(15))
def test_cofibrations_by_forcing(seed):
    rng = random.Random(seed)
    cat = site(rng.choice(["arrow", "poset-2", "poset-3"]))
    X = random_presheaf(rng, cat, 3)
    S = random_subpresheaf(rng, X)
    _, m = S.as_presheaf()
    Om, _ = omega(cat)
    for chosen in list(_classes(cat))[:6]:
        phi = cof_class(cat, chosen)
        sigma = char_and_comprehend(S)[0]
        forced = all(cof_of(sigma, phi).holds(c, x) for c, x in X.elements())
        assert is_cofibration(m, phi) == forced


@pytest.mark.parametrize("n", range(6))
def test_partial_elements_over_sets(n):
    A = closed_type(site("terminal"), {"*": tuple(range(n))})
    T, eta, mu = partial_monad(A)
    assert len(T.fiber("*", STAR)) == oracles.partial_count_terminal(n)


@pytest.mark.parametrize("seed", range(15))
def test_monad_laws(seed):
    (cat, X, alpha), = families(seed, 1)
    rep = monad_law_check(alpha)
    assert rep.ok, [i for i in rep.items if not i[1]]


def test_monad_laws_with_smaller_phi():
    cat = site("poset-2")
    Om, _ = omega(cat)
    phi = cof_class(cat, {"0": Om.fibers["0"], "1": [(), ("id_1", "0<1")]})
    assert cof_axiom_check(phi).ok
    for _, X, alpha in families(3, 4, sites=("poset-2",)):
        assert monad_law_check(alpha, phi).ok
        assert eta_is_cartesian(Partial(alpha, phi))


@pytest.mark.parametrize("seed", range(12))
def test_partial_map_classification(seed):
    rng = random.Random(seed)
    cat = site(rng.choice(["terminal", "arrow", "poset-2"]))
    Y = random_presheaf(rng, cat, 2)
    S = random_subpresheaf(rng, Y)
    Ssh, m = S.as_presheaf()
    A = random_presheaf(rng, cat, 2, allow_empty=False)
    u = random_hom(rng, Ssh, A)
    if u is None:
        return
    res = classify_partial_map(m, u)
    assert res.unique and res.count == 1
    # the square is a pullback: exactly the points of S land in the image of eta
    etas = {c: set(res.eta.comp[c].values()) for c in cat.objects}
    for c in cat.objects:
        for y in Y.fibers[c]:
            assert (res.classifier.comp[c][y] in etas[c]) == (y in S.selected[c])


def test_total_and_empty_partial_maps():
    cat = site("arrow")
    A = Presheaf(cat, {"a": (0, 1), "b": (2,)}, {"f": {2: 0}})
    res = classify_partial_map(identity_map(A), identity_map(A))
    assert res.classifier.comp == res.eta.comp
    empty = NatTrans(initial(cat), A, {c: {} for c in cat.objects})
    res = classify_partial_map(empty, NatTrans(initial(cat), A, {c: {} for c in cat.objects}))
    assert all(t[0] == () for c in cat.objects for t in res.classifier.comp[c].values())


def test_non_cofibration_is_rejected():
    cat = site("poset-2")
    Om, _ = omega(cat)
    phi = cof_class(cat, {"0": Om.fibers["0"], "1": [(), ("id_1", "0<1")]})
    one = terminal(cat)
    S = SubPresheaf(one, {"0": [STAR]})
    Ssh, m = S.as_presheaf()
    K = discrete(cat, (0,))
    u = NatTrans(Ssh, K, {"0": {STAR: 0}, "1": {}})
    assert not is_cofibration(m, phi)
    with pytest.raises(ValueError):
        classify_partial_map(m, u, phi)
