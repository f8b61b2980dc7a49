import random

import pytest

import oracles
from gen import closed_families, families, site
from kripkejoyal.classifiers import (TypeFamily, const_type, count_sections, sections,
                                     substitute)
from kripkejoyal.homotopy.trivial import (_partial, cof_tfib_factor, talg_bridge, talg_structures,
                                          tfib_count, tfib_problems, tfib_search,
                                          tfib_section_of_structure, tfib_structures,
                                          tfib_type, tfib_verify, structure_of_talg_section,
                                          structure_of_tfib_section)
from kripkejoyal.kernel import Presheaf, initial, terminal
from kripkejoyal.random_instances import random_hom, random_presheaf


def _set_family(sizes):
    cat = site("terminal")
    X = Presheaf(cat, {"*": tuple(range(len(sizes)))})
    return TypeFamily(X, {("*", i): tuple(range(n)) for i, n in enumerate(sizes)})


@pytest.mark.parametrize("sizes", [[], [1], [2], [3, 2], [1, 0, 2], [2, 2, 2], [0]])
def test_terminal_count_is_product(sizes):
    alpha = _set_family(sizes)
    assert tfib_count(alpha) == oracles.tfib_count_terminal(sizes)


def test_empty_fiber_over_inhabited_stage_blocks_search():
    alpha = _set_family([2, 0])
    assert tfib_search(alpha) is None


@pytest.mark.parametrize("seed", range(30))
def test_count_agrees_with_brute_force_and_sections(seed):
    (cat, X, alpha), = families(seed, 1)
    n = tfib_count(alpha)
    assert n == oracles.tfib_count_brute(alpha, tfib_problems(alpha), _partial(alpha, None).family)
    fam = tfib_type(alpha)
    assert count_sections(fam) == n
    assert len(talg_structures(alpha)) == n


@pytest.mark.parametrize("seed", range(20))
def test_structures_verify_and_round_trip(seed):
    (cat, X, alpha), = families(seed, 1)
    fam = tfib_type(alpha)
    structs = tfib_structures(alpha, cap=50)
    for s in structs:
        assert tfib_verify(alpha, s).ok
        sec = tfib_section_of_structure(alpha, s, fam)
        assert structure_of_tfib_section(alpha, sec).fillers == s.fillers
    for sec in sections(fam, cap=50):
        assert tfib_verify(alpha, structure_of_tfib_section(alpha, sec)).ok


def test_broken_structure_fails_verification():
    for seed in range(40):
        (cat, X, alpha), = families(seed, 1, inhabited_base=True)
        s = tfib_search(alpha)
        if s is None or not s.fillers:
            continue
        key = next(iter(s.fillers))
        s.fillers[key] = ("junk",)
        assert not tfib_verify(alpha, s).ok
        return
    pytest.fail("no instance with a structure")


@pytest.mark.parametrize("seed", range(20))
def test_talg_bridge(seed):
    (cat, X, alpha), = families(seed, 1)
    br = talg_bridge(alpha)
    assert br.ok, br.checks
    for sec in sections(br.talg, cap=30):
        s1 = structure_of_talg_section(alpha, sec)
        s2 = structure_of_tfib_section(alpha, br.sections_to_tfib(sec))
        assert s1.fillers == s2.fillers
        assert br.sections_to_talg(br.sections_to_tfib(sec)) == sec


@pytest.mark.parametrize("seed", range(12))
def test_tfib_type_is_stable_under_substitution(seed):
    rng = random.Random(seed)
    (cat, X, alpha), = families(seed, 1)
    Y = random_presheaf(rng, cat, 2)
    t = random_hom(rng, Y, X)
    if t is None:
        return
    assert substitute(tfib_type(alpha), t).same_as(tfib_type(substitute(alpha, t)))


@pytest.mark.parametrize("seed", range(15))
def test_factorization(seed):
    (cat, X, alpha), = families(seed, 1)
    fac = cof_tfib_factor(alpha)
    assert fac.ok, fac.right_verified
    assert fac.left.then(fac.right).comp is not None


def test_factorization_of_identity_and_empty():
    for name in ("terminal", "arrow", "poset-2"):
        cat = site(name)
        one = terminal(cat)
        fac = cof_tfib_factor(const_type(one, one))
        assert fac.ok
        empty = const_type(one, initial(cat))
        fac = cof_tfib_factor(empty)
        assert fac.ok
        # T of the empty family has exactly the empty partial element
        T = fac.partial.family
        assert all(len(T.fiber(c, x)) == 1 for c, x in one.elements())


@pytest.mark.parametrize("seed", range(8))
def test_closed_families_over_richer_sites(seed):
    for cat, alpha in closed_families(seed, 2, sites=("poset-3", "cube-1")):
        s = tfib_search(alpha)
        if s is not None:
            assert tfib_verify(alpha, s).ok
        T = _partial(alpha, None).family
        assert (s is not None) == (oracles.tfib_count_brute(alpha, tfib_problems(alpha), T) > 0)
