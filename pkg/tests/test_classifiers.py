import random

import pytest
from hypothesis import given, strategies as st

import oracles
from gen import SMALL, any_site, families, prop_type_laws, random_prop, site
from kripkejoyal.classifiers import (char_and_comprehend, classify_small_map, classifying_maps,
                                     closed_type, count_sections, display, empty_type,
                                     extend_subst, incl, omega, pi_apply, pi_counit, pi_lambda,
                                     pi_type, prop_and, prop_true, sections, sigma_type,
                                     substitute, sum_type, supp, type_iso_check,
                                     type_morphisms, unit_type, validate_family, weaken)
from kripkejoyal.kernel import (NatTrans, Presheaf, SubPresheaf, identity_map, initial,
                                is_epi, is_mono, yoneda)
from kripkejoyal.random_instances import (random_family, random_hom, random_presheaf,
                                          random_subpresheaf)
from kripkejoyal.typetheory import pair, proj1, proj2, section_point


def _sizes(cat):
    Om, _ = omega(cat)
    return {c: len(Om.fibers[c]) for c in cat.objects}


def test_omega_sizes():
    assert _sizes(site("terminal")) == {"*": 2}
    assert _sizes(site("arrow")) == {"a": 2, "b": 3}
    assert _sizes(site("poset-2"))["1"] == 3
    assert _sizes(site("cube-2")) == {"0": 2, "1": 5, "2": 84}


@pytest.mark.parametrize("name", ["terminal", "arrow", "poset-2", "poset-3", "cube-1"])
def test_omega_matches_subset_oracle(name):
    cat = site(name)
    Om, true = omega(cat)
    for c in cat.objects:
        assert set(map(frozenset, Om.fibers[c])) == set(oracles.all_sieves(cat, c))
        assert true.comp[c]["*"] == tuple(f for f in cat.morphisms if cat.cod[f] == c)


def test_cube_omega_matches_propagation_oracle():
    cat = site("cube-2")
    Om, _ = omega(cat)
    for c in cat.objects:
        assert set(map(frozenset, Om.fibers[c])) == set(oracles.sieves_by_propagation(cat, c))


@pytest.mark.parametrize("seed", range(30))
def test_classifier_reconstructs_and_is_unique(seed):
    rng = random.Random(seed)
    cat = any_site(rng)
    X = random_presheaf(rng, cat, 3)
    S = random_subpresheaf(rng, X)
    sigma, comp = char_and_comprehend(S)
    assert comp == S
    found = classifying_maps(S)
    assert len(found) == 1 and found[0].comp == sigma.as_map().comp
    if sum(len(v) for v in X.fibers.values()) <= 5:
        assert oracles.classifying_maps_count(S, omega(cat)[0]) == 1


def test_classifier_extremes_and_cube():
    cat = site("arrow")
    X = Presheaf(cat, {"a": (0, 1), "b": (2,)}, {"f": {2: 0}})
    full, _ = char_and_comprehend(SubPresheaf(X, X.fibers))
    assert full == prop_true(X)
    empty, _ = char_and_comprehend(SubPresheaf(X, {}))
    assert all(s == () for c in cat.objects for s in empty.value[c].values())
    rng = random.Random(5)
    cube = site("cube-2")
    for _ in range(3):
        Y = random_presheaf(rng, cube, 2)
        S = random_subpresheaf(rng, Y)
        sigma, comp = char_and_comprehend(S)
        assert comp == S and len(classifying_maps(S)) == 1


def _renaming_iso(alpha, beta):
    """``a -> (x, a)`` identifies alpha with the classification of its display."""
    for (c, x), fib in alpha.fibers.items():
        if [(x, a) for a in fib] != list(beta.fibers[(c, x)]):
            return False
    return all(beta.restrict(x, f, (x, a)) == (alpha.base.act(x, f), alpha.restrict(x, f, a))
               for c, x in alpha.base.elements() for f in alpha.cat.into(c)
               for a in alpha.fiber(c, x))


@pytest.mark.parametrize("seed", range(25))
def test_universe_round_trip(seed):
    (cat, X, alpha), = families(seed, 1, max_base=3, max_fiber=3)
    assert _renaming_iso(alpha, classify_small_map(display(alpha).proj))
    A = random_presheaf(random.Random(seed), cat, 3)
    p = random_hom(random.Random(seed + 1), A, X)
    if p is None:
        return
    disp = display(classify_small_map(p))
    iso = NatTrans(A, disp.total, {c: {a: (p.comp[c][a], a) for a in A.fibers[c]}
                                   for c in cat.objects})
    assert iso.is_natural() and is_mono(iso) and is_epi(iso)
    assert iso.then(disp.proj).comp == p.comp


def test_classify_extremes():
    cat = site("poset-2")
    X = random_presheaf(random.Random(1), cat, 3)
    alpha = classify_small_map(identity_map(X))
    assert all(len(v) == 1 for v in alpha.fibers.values())
    empty = classify_small_map(NatTrans(initial(cat), X, {c: {} for c in cat.objects}))
    assert all(len(v) == 0 for v in empty.fibers.values())
    assert is_mono(display(unit_type(X)).proj) and is_epi(display(unit_type(X)).proj)


@pytest.mark.parametrize("seed", range(20))
def test_display_size(seed):
    (cat, X, alpha), = families(seed, 1, max_base=3, max_fiber=3)
    total = display(alpha).total
    for c in cat.objects:
        assert len(total.fibers[c]) == sum(len(alpha.fiber(c, x)) for x in X.fibers[c])


@pytest.mark.parametrize("seed", range(20))
def test_substitution(seed):
    rng = random.Random(seed)
    (cat, X, alpha), = families(seed, 1, max_base=2, max_fiber=2)
    assert substitute(alpha, identity_map(X)).same_as(alpha)
    Y = random_presheaf(rng, cat, 2)
    Z = random_presheaf(rng, cat, 2)
    t, s = random_hom(rng, Y, X), random_hom(rng, Z, Y)
    if t is None:
        return
    assert count_sections(substitute(alpha, t)) == oracles.lifts_count(t, display(alpha).proj)
    if s is not None:
        assert substitute(substitute(alpha, t), s).same_as(substitute(alpha, s.then(t)))


@pytest.mark.parametrize("seed", range(25))
def test_sigma_and_pi_fibers(seed):
    (cat, X, alpha), = families(seed, 1)
    beta = random_family(random.Random(seed), display(alpha).total, 2)
    S, P = sigma_type(alpha, beta), pi_type(alpha, beta)
    assert validate_family(S).ok and validate_family(P).ok
    for c, x in X.elements():
        assert len(S.fiber(c, x)) == oracles.sigma_fiber_size(alpha, beta, c, x)
        assert len(P.fiber(c, x)) == oracles.pi_fiber_size(alpha, beta, c, x)
    assert count_sections(S) == oracles.count_sections(S)
    assert count_sections(P) == oracles.count_sections(P)


@pytest.mark.parametrize("seed", range(15))
def test_sigma_seely(seed):
    (cat, X, alpha), = families(seed, 1)
    beta = random_family(random.Random(seed), display(alpha).total, 2)
    S = sigma_type(alpha, beta)
    pairs = []
    for a in sections(alpha):
        for b in sections(substitute(beta, section_point(alpha, a))):
            pairs.append((a, b))
    sig = sections(S)
    assert len(sig) == len(pairs)
    assert sorted(map(repr, (pair(a, b) for a, b in pairs))) == sorted(map(repr, sig))
    for t in sig:
        assert pair(proj1(t), proj2(t)) == t


@pytest.mark.parametrize("seed", range(15))
def test_pi_seely(seed):
    (cat, X, alpha), = families(seed, 1)
    beta = random_family(random.Random(seed), display(alpha).total, 2)
    P = pi_type(alpha, beta)
    pis, bs = sections(P), sections(beta)
    assert len(pis) == len(bs)
    for b in bs:
        assert pi_counit(alpha, pi_lambda(alpha, beta, b)) == b
    for t in pis:
        assert pi_lambda(alpha, beta, pi_counit(alpha, t)) == t
    for a in sections(alpha):
        for b in bs:
            app = pi_apply(alpha, pi_lambda(alpha, beta, b), a)
            assert app == {(c, x): b[(c, (x, a[(c, x)]))] for c, x in X.elements()}


def test_unit_and_empty_cases():
    cat = site("poset-2")
    X = random_presheaf(random.Random(3), cat, 2, allow_empty=False)
    alpha = random_family(random.Random(3), X, 2)
    one_over = unit_type(display(alpha).total)
    assert type_iso_check(sigma_type(alpha, one_over), alpha)[0]
    beta = random_family(random.Random(4), display(unit_type(X)).total, 2)
    # Sigma over the unit type is beta re-indexed along X = X.1
    back = NatTrans(X, display(unit_type(X)).total,
                    {c: {x: (x, "*") for x in X.fibers[c]} for c in cat.objects})
    assert type_iso_check(sigma_type(unit_type(X), beta), substitute(beta, back))[0]
    P = pi_type(empty_type(X), random_family(random.Random(5), display(empty_type(X)).total))
    assert all(len(v) == 1 for v in P.fibers.values())
    assert type_iso_check(sum_type(empty_type(X), alpha), alpha)[0]


def test_pi_over_sets():
    cat = site("terminal")
    alpha = closed_type(cat, {"*": (0, 1, 2)})
    total = display(alpha).total
    sizes = {0: 2, 1: 3, 2: 1}
    from kripkejoyal.classifiers import TypeFamily
    beta = TypeFamily(total, {("*", e): tuple(range(sizes[e[1]])) for e in total.fibers["*"]})
    assert len(pi_type(alpha, beta).fiber("*", "*")) == 2 * 3 * 1


@pytest.mark.parametrize("seed", range(15))
def test_beck_chevalley_is_strict(seed):
    rng = random.Random(seed)
    (cat, X, alpha), = families(seed, 1)
    beta = random_family(rng, display(alpha).total, 2)
    Y = random_presheaf(rng, cat, 2)
    t = random_hom(rng, Y, X)
    if t is None:
        return
    at = substitute(alpha, t)
    bt = substitute(beta, extend_subst(t, alpha, at))
    assert substitute(sigma_type(alpha, beta), t).same_as(sigma_type(at, bt))
    assert substitute(pi_type(alpha, beta), t).same_as(pi_type(at, bt))
    # weakening twice equals weakening along the composite
    gamma = random_family(rng, X, 2)
    w = weaken(gamma, alpha)
    assert substitute(w, extend_subst(t, alpha, at)).same_as(weaken(substitute(gamma, t), at))


@pytest.mark.parametrize("seed", range(10))
def test_sum_over_representables(seed):
    rng = random.Random(seed)
    cat = site(rng.choice(SMALL))
    c = rng.choice(cat.objects)
    yc = yoneda(cat, c)
    a, b = random_family(rng, yc, 2), random_family(rng, yc, 2)
    assert count_sections(sum_type(a, b)) == count_sections(a) + count_sections(b)
    disp = display(sum_type(a, b)).total
    for d in cat.objects:
        assert len(disp.fibers[d]) == len(display(a).total.fibers[d]) + len(display(b).total.fibers[d])


@pytest.mark.parametrize("seed", range(20))
def test_propositions_and_types(seed):
    rng = random.Random(seed)
    (cat, X, alpha), = families(seed, 1)
    sigma, tau = random_prop(rng, X), random_prop(rng, X)
    rho = random_prop(rng, display(alpha).total)
    eqs, isos = prop_type_laws(sigma, tau, alpha, rho)
    assert [n for n, ok in eqs if not ok] == []
    assert [n for n, ok in isos if not ok] == []
    assert supp(incl(sigma)) == sigma
    assert prop_and(sigma, tau) == supp(incl(prop_and(sigma, tau)))


@pytest.mark.parametrize("name", ["terminal", "arrow", "poset-2", "poset-3", "cube-1"])
def test_supp_of_incl_is_identity_on_omega(name):
    cat = site(name)
    Om, _ = omega(cat)
    sigma = char_and_comprehend(SubPresheaf(Om, {c: [s for s in Om.fibers[c]
                                                     if len(s) == len(cat.into(c))]
                                                 for c in cat.objects}))[0]
    # the generic proposition: sigma(c, s) = s
    generic = type(sigma)(Om, {c: {s: s for s in Om.fibers[c]} for c in cat.objects})
    assert supp(incl(generic)) == generic
    assert sigma == generic


def test_incl_is_injective():
    cat = site("poset-2")
    X = random_presheaf(random.Random(8), cat, 2)
    props = {}
    for sub in oracles.all_subpresheaves(X):
        sigma = char_and_comprehend(SubPresheaf(X, sub))[0]
        key = tuple(sorted(incl(sigma).fibers.items(), key=repr))
        assert key not in props
        props[key] = sigma


@pytest.mark.parametrize("seed", range(15))
def test_type_morphisms_match_slice_oracle(seed):
    (cat, X, alpha), = families(seed, 1)
    beta = random_family(random.Random(seed), X, 2)
    assert len(type_morphisms(alpha, beta)) == oracles.maps_over_count(display(alpha), display(beta))
    assert type_iso_check(alpha, alpha)[0]
    assert type_iso_check(incl(prop_true(X)), unit_type(X))[0]


@given(st.integers(0, 10 ** 6))
def test_char_round_trip_property(seed):
    rng = random.Random(seed)
    cat = any_site(rng)
    X = random_presheaf(rng, cat, 3)
    S = random_subpresheaf(rng, X)
    assert char_and_comprehend(S)[1] == S


@given(st.integers(0, 10 ** 6))
def test_trunc_is_supported_inhabitation(seed):
    (cat, X, alpha), = families(seed, 1, max_fiber=3)
    sigma = supp(alpha)
    for c, x in X.elements():
        assert sigma.holds(c, x) == bool(alpha.fiber(c, x))
