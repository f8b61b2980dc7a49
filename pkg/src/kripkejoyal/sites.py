"""Built-in index categories."""
from __future__ import annotations

import itertools

from .kernel import FinCat


def terminal_site() -> FinCat:
    return FinCat(["*"], [], {}, name="terminal")


def arrow_site() -> FinCat:
    """a -> b, one non-identity arrow ``f``."""
    return FinCat(["a", "b"], [("f", "a", "b")], {}, name="arrow")


def chain_site(n: int) -> FinCat:
    """The poset 0 < 1 < ... < n-1, with arrows ``i<j`` from i to j."""
    objects = [str(i) for i in range(n)]
    morphisms = [(f"{i}<{j}", str(i), str(j)) for i in range(n) for j in range(i + 1, n)]
    compose = {(f"{j}<{k}", f"{i}<{j}"): f"{i}<{k}"
               for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)}
    return FinCat(objects, morphisms, compose, name=f"poset-{n}")


def poset_site(objects, less) -> FinCat:
    """A finite poset from its strict order pairs (transitively closed by us)."""
    objects = list(objects)
    rel = set(less)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    morphisms = [(f"{a}<{b}", a, b) for a in objects for b in objects if (a, b) in rel]
    compose = {(f"{b}<{c}", f"{a}<{b}"): f"{a}<{c}"
               for a, b in rel for b2, c in rel if b == b2}
    return FinCat(objects, morphisms, compose, name="poset")


def _cube_points(n):
    return list(itertools.product((0, 1), repeat=n))


def _monotone_maps(m, n):
    src, dst = _cube_points(m), _cube_points(n)

    def leq(p, q):
        return all(a <= b for a, b in zip(p, q))
    maps = []
    for images in itertools.product(dst, repeat=len(src)):
        if all(leq(images[i], images[j]) for i, p in enumerate(src)
               for j, q in enumerate(src) if leq(p, q)):
            maps.append(images)
    return maps


def cube_name(m, n, images) -> str:
    body = ",".join("".join(map(str, p)) or "-" for p in images)
    return f"{m}>{n}[{body}]"


def cube_site(top: int = 2) -> FinCat:
    """Dedekind cubes [0..top]: objects are the posets 2^n, arrows all monotone maps."""
    dims = range(top + 1)
    maps = {(m, n): _monotone_maps(m, n) for m in dims for n in dims}
    pts = {n: _cube_points(n) for n in dims}
    morphisms, identities, by_images = [], {}, {}
    for m in dims:
        for n in dims:
            for images in maps[(m, n)]:
                name = cube_name(m, n, images)
                morphisms.append((name, str(m), str(n)))
                by_images[(m, n, images)] = name
                if m == n and list(images) == pts[m]:
                    identities[str(m)] = name
    # identities first so hom sets start with them
    morphisms.sort(key=lambda t: (t[0] not in identities.values(),))
    compose = {}
    for (m, n), fs in maps.items():
        for f in fs:
            lookup_f = dict(zip(pts[m], f))
            for k in dims:
                for g in maps[(n, k)]:
                    lookup_g = dict(zip(pts[n], g))
                    gf = tuple(lookup_g[lookup_f[p]] for p in pts[m])
                    compose[(cube_name(n, k, g), cube_name(m, n, f))] = by_images[(m, k, gf)]
    return FinCat([str(d) for d in dims], morphisms, compose, identities=identities,
                  name=f"cube-{top}")


def cube_images(name: str) -> tuple:
    """Inverse of ``cube_name``: the tuple of image points."""
    body = name[name.index("[") + 1:-1]
    return tuple(() if p == "-" else tuple(int(ch) for ch in p) for p in body.split(","))


BUILTIN = {
    "terminal": terminal_site,
    "arrow": arrow_site,
    "poset-2": lambda: chain_site(2),
    "poset-3": lambda: chain_site(3),
    "cube-1": lambda: cube_site(1),
    "cube-2": lambda: cube_site(2),
}
