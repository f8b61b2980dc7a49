"""Seeded instance generators shared by the test modules."""
from __future__ import annotations

import functools
import random

from kripkejoyal.kernel import Presheaf, terminal
from kripkejoyal.random_instances import (random_category, random_family, random_presheaf,
                                          small_sites)
from kripkejoyal.sites import BUILTIN

SMALL = ("terminal", "arrow", "poset-2")


@functools.lru_cache(maxsize=None)
def site(name):
    return BUILTIN[name]()


def discrete(cat, values, name="K"):
    """The constant presheaf on ``values``."""
    vals = tuple(values)
    return Presheaf(cat, {c: vals for c in cat.objects},
                    {f: {v: v for v in vals} for f in cat.morphisms}, name=name)


def any_site(rng):
    """A random site, or one of the fixed small ones."""
    if rng.random() < 0.5:
        return random_category(rng, max_objects=3, max_arrows=10)
    return rng.choice(small_sites())


def families(seed, n, sites=SMALL, max_base=2, max_fiber=2, inhabited_base=False):
    """``n`` seeded (site, base, family) triples over the named sites."""
    rng = random.Random(seed)
    for _ in range(n):
        cat = site(rng.choice(sites))
        X = random_presheaf(rng, cat, max_fiber=max_base, allow_empty=not inhabited_base)
        yield cat, X, random_family(rng, X, max_fiber=max_fiber)


def closed_families(seed, n, sites=SMALL, max_fiber=3):
    rng = random.Random(seed)
    for _ in range(n):
        cat = site(rng.choice(sites))
        yield cat, random_family(rng, terminal(cat), max_fiber=max_fiber)


def random_prop(rng, X):
    from kripkejoyal.classifiers import char_and_comprehend
    from kripkejoyal.random_instances import random_subpresheaf
    return char_and_comprehend(random_subpresheaf(rng, X, density=rng.random()))[0]


def prop_type_laws(sigma, tau, alpha, rho):
    """The equalities into Omega and the type isomorphisms relating props and types.

    sigma, tau live over X; alpha is a family over X and rho a prop over X.alpha.
    Returns two lists of ``(name, holds)``.
    """
    from kripkejoyal.classifiers import (empty_type, function_type, incl, pi_type, prop_and,
                                         prop_exists, prop_false, prop_forall, prop_implies,
                                         prop_or, prop_true, product_type, sigma_type, sum_type,
                                         supp, trunc, type_iso_check, unit_type)
    X = sigma.base
    s, t, r = incl(sigma), incl(tau), incl(rho)
    equalities = [
        ("true = supp 1", prop_true(X) == supp(unit_type(X))),
        ("false = supp 0", prop_false(X) == supp(empty_type(X))),
        ("and = supp x", prop_and(sigma, tau) == supp(product_type(s, t))),
        ("or = supp +", prop_or(sigma, tau) == supp(sum_type(s, t))),
        ("implies = supp ->", prop_implies(sigma, tau) == supp(function_type(s, t))),
        ("forall = supp Pi", prop_forall(alpha, rho) == supp(pi_type(alpha, r))),
        ("exists = supp Sigma", prop_exists(alpha, rho) == supp(sigma_type(alpha, r))),
    ]
    isos = [
        ("{true} ~ 1", incl(prop_true(X)), unit_type(X)),
        ("{false} ~ 0", incl(prop_false(X)), empty_type(X)),
        ("{and} ~ x", incl(prop_and(sigma, tau)), product_type(s, t)),
        ("{or} ~ trunc +", incl(prop_or(sigma, tau)), trunc(sum_type(s, t))),
        ("{implies} ~ ->", incl(prop_implies(sigma, tau)), function_type(s, t)),
        ("{forall} ~ Pi", incl(prop_forall(alpha, rho)), pi_type(alpha, r)),
        ("{exists} ~ trunc Sigma", incl(prop_exists(alpha, rho)), trunc(sigma_type(alpha, r))),
    ]
    return equalities, [(name, type_iso_check(a, b)[0]) for name, a, b in isos]


def former_instances(rng, X):
    """One family per type former over X, tagged by the former that built it."""
    from kripkejoyal.classifiers import (display, empty_type, function_type, incl, pi_type,
                                         product_type, sigma_type, sum_type, trunc, unit_type)
    a = random_family(rng, X, max_fiber=2)
    b = random_family(rng, X, max_fiber=2)
    beta = random_family(rng, display(a).total, max_fiber=2)
    return [
        ("0", empty_type(X)),
        ("1", unit_type(X)),
        ("+", sum_type(a, b)),
        ("x", product_type(a, b)),
        ("Sigma", sigma_type(a, beta)),
        ("->", function_type(a, b)),
        ("Pi", pi_type(a, beta)),
        ("{}", incl(random_prop(rng, X))),
        ("trunc", trunc(b)),
    ]


def candidates(alpha):
    """Every element occurring anywhere in the family, plus one foreign value."""
    seen = {}
    for fib in alpha.fibers.values():
        for a in fib:
            seen.setdefault(repr(a), a)
    return list(seen.values()) + [("junk",)]
