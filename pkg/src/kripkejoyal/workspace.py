"""Loading sites and bundles from JSON, and certificate (de)serialization.

Every element read from a file is normalized to a string, so ``2`` and
``"2"`` denote the same element.  A site file either names a built-in
category or lists objects, morphisms and a composition table.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .classifiers import PropInContext, TypeFamily, const_type, restrict_sieve, validate_family
from .forcing import And, Atom, Bottom, Implies, Not, Or, Top
from .homotopy.cofibrations import CofClass, all_monos, cof_class
from .homotopy.fibrations import FibStructure
from .homotopy.interval import (Interval, constant_interval, cube_interval, trivial_interval,
                                two_point_interval)
from .homotopy.trivial import TrivFibStructure
from .kernel import FinCat, NatTrans, Packed, Presheaf, Report, terminal, validate
from .sites import BUILTIN

__all__ = ["InputError", "Workspace", "Query", "load_site", "load_bundle", "load_workspace",
           "formula_text", "site_to_json", "presheaf_to_json", "map_to_json", "dump_certificate", "load_certificate", "to_json", "from_json"]

DATA = Path(__file__).parent / "data"

INTERVALS = {
    "cube": cube_interval,
    "constant": constant_interval,
    "two-point": two_point_interval,
    "trivial": trivial_interval,
}


class InputError(ValueError):
    """Malformed or inconsistent input files."""


@dataclass
class Query:
    stage: str
    point: Any
    formula: Any
    text: str
    expect: bool | None = None


@dataclass
class Workspace:
    site: FinCat
    phi: CofClass
    interval: Interval | None = None
    presheaves: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    props: dict = field(default_factory=dict)
    queries: list = field(default_factory=list)
    source: str = ""

    def family(self, name: str) -> TypeFamily:
        if name not in self.families:
            raise InputError(f"unknown family {name!r}; known: {sorted(self.families)}")
        return self.families[name]

    def presheaf(self, name: str) -> Presheaf:
        if name not in self.presheaves:
            raise InputError(f"unknown presheaf {name!r}; known: {sorted(self.presheaves)}")
        return self.presheaves[name]

    def check(self) -> list[tuple[str, Report]]:
        """Kernel laws for the site and every presheaf, map and family."""
        out = [("site", validate(self.site))]
        for name, X in self.presheaves.items():
            out.append((f"presheaf {name}", validate(self.site, objs=[X])))
        for name, m in self.maps.items():
            out.append((f"map {name}", validate(self.site, maps=[m])))
        for name, fam in self.families.items():
            out.append((f"family {name}", validate_family(fam)))
        for name, p in self.props.items():
            out.append((f"proposition {name}", _prop_report(p)))
        return out


def _read(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _resolve(ref: str, relative_to: Path | None, kind: str = "sites") -> Path:
    """A path as given, else relative to the bundle, else a shipped file of that kind."""
    if Path(ref).is_file():
        return Path(ref)
    if relative_to is not None and (relative_to / ref).is_file():
        return relative_to / ref
    for candidate in (DATA / kind / ref, DATA / kind / f"{ref}.json"):
        if candidate.is_file():
            return candidate
    return Path(ref)


def _s(x) -> str:
    return str(x)


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise InputError(f"{where}: missing {key!r}")
    return obj[key]


def site_from_json(doc: dict, where: str = "site") -> FinCat:
    if "builtin" in doc:
        name = doc["builtin"]
        if name not in BUILTIN:
            raise InputError(f"{where}: unknown built-in site {name!r}; known: {sorted(BUILTIN)}")
        return BUILTIN[name]()
    objects = [_s(o) for o in _need(doc, "objects", where)]
    morphisms = []
    for row in doc.get("morphisms", []):
        if isinstance(row, dict):
            row = [row.get("id"), row.get("dom"), row.get("cod")]
        if len(row) != 3 or None in row:
            raise InputError(f"{where}: a morphism needs id, dom and cod, got {row!r}")
        f, d, c = map(_s, row)
        if d not in objects or c not in objects:
            raise InputError(f"{where}: morphism {f!r} has an unknown end")
        morphisms.append((f, d, c))
    compose = {}
    table = doc.get("compose", {})
    rows = ([k.split("∘") + [v] for k, v in table.items()] if isinstance(table, dict) else table)
    for row in rows:
        if len(row) != 3:
            raise InputError(f"{where}: composites are written \"g∘f\": h, got {row!r}")
        g, f, gf = map(_s, row)
        compose[(g, f)] = gf
    return FinCat(objects, morphisms, compose, name=doc.get("name", "site"))


def load_site(path_or_name) -> tuple[FinCat, CofClass, Interval | None]:
    path = _resolve(str(path_or_name), None)
    if not path.is_file() and str(path_or_name) in BUILTIN:
        cat = BUILTIN[str(path_or_name)]()
        return cat, all_monos(cat), None
    doc = _read(path)
    return _site_parts(doc, str(path))


def _site_parts(doc: dict, where: str):
    cat = site_from_json(doc, where)
    phi = all_monos(cat)
    if "cofibrations" in doc:
        table = doc["cofibrations"]
        try:
            phi = cof_class(cat, {c: [tuple(sorted((_s(f) for f in sieve), key=cat.morphism_index))
                                      for sieve in table[c]] for c in cat.objects})
        except KeyError as exc:
            raise InputError(f"{where}: cofibrations need an entry for object {exc}") from exc
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from exc
    interval = None
    kind = doc.get("interval")
    if kind is not None:
        if kind not in INTERVALS:
            raise InputError(f"{where}: unknown interval {kind!r}; known: {sorted(INTERVALS)}")
        try:
            interval = INTERVALS[kind](cat)
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from exc
    return cat, phi, interval


def _presheaf(cat: FinCat, name: str, doc: dict) -> Presheaf:
    where = f"presheaf {name}"
    fibers_doc = _need(doc, "fibers", where)
    fibers = {c: tuple(_s(x) for x in fibers_doc.get(c, [])) for c in cat.objects}
    act_doc = doc.get("restrictions", {})
    restr = {}
    for f in cat.morphisms:
        table = act_doc.get(f)
        if table is None and cat.is_identity(f):
            restr[f] = {x: x for x in fibers[cat.cod[f]]}
            continue
        if table is None and doc.get("discrete"):
            table = {x: x for x in fibers[cat.cod[f]]}
        if table is None:
            raise InputError(f"{where}: no restriction given for morphism {f!r}")
        restr[f] = {_s(x): _s(y) for x, y in table.items()}
        missing = [x for x in fibers[cat.cod[f]] if x not in restr[f]]
        if missing:
            raise InputError(f"{where}: restriction along {f!r} misses {missing[0]!r}")
    return Presheaf(cat, fibers, restr, name=name)


def _family(cat: FinCat, name: str, doc: dict, presheaves: dict) -> TypeFamily:
    where = f"family {name}"
    base_name = _s(_need(doc, "base", where))
    if base_name not in presheaves:
        raise InputError(f"{where}: unknown base {base_name!r}")
    X = presheaves[base_name]
    if "constant" in doc:
        K = presheaves.get(_s(doc["constant"]))
        if K is None:
            raise InputError(f"{where}: unknown presheaf {doc['constant']!r}")
        fam = const_type(X, K, name=name)
        fam.name = name
        return fam
    fib_doc = _need(doc, "fibers", where)
    fibers = {}
    for c, x in X.elements():
        fibers[(c, x)] = tuple(_s(a) for a in fib_doc.get(c, {}).get(x, []))
    restr = {}
    act_doc = doc.get("restrictions", {})
    for f in cat.morphisms:
        if cat.is_identity(f):
            continue
        per_point = act_doc.get(f, {})
        for x in X.fibers[cat.cod[f]]:
            table = per_point.get(x)
            if table is None and fibers[(cat.cod[f], x)]:
                raise InputError(f"{where}: no restriction along {f!r} over point {x!r}")
            restr[(f, x)] = {_s(a): _s(b) for a, b in (table or {}).items()}
    return TypeFamily(X, fibers, restr=restr, name=name)


def _map(cat: FinCat, name: str, doc: dict, presheaves: dict) -> NatTrans:
    where = f"map {name}"
    src = presheaves.get(_s(_need(doc, "source", where)))
    tgt = presheaves.get(_s(_need(doc, "target", where)))
    if src is None or tgt is None:
        raise InputError(f"{where}: unknown source or target")
    comps = {}
    for c in cat.objects:
        table = doc.get("components", {}).get(c, {})
        comps[c] = {_s(x): _s(y) for x, y in table.items()}
        missing = [x for x in src.fibers[c] if x not in comps[c]]
        if missing:
            raise InputError(f"{where}: component at {c!r} misses {missing[0]!r}")
    return NatTrans(src, tgt, comps)


def _prop(cat: FinCat, name: str, doc: dict, presheaves: dict) -> PropInContext:
    where = f"proposition {name}"
    X = presheaves.get(_s(_need(doc, "base", where)))
    if X is None:
        raise InputError(f"{where}: unknown base")
    table = _need(doc, "sieves", where)
    value = {}
    for c in cat.objects:
        value[c] = {}
        for x in X.fibers[c]:
            raw = table.get(c, {}).get(x)
            if raw is None:
                raise InputError(f"{where}: no sieve at {c!r}, {x!r}")
            fs = [_s(f) for f in raw]
            bad = [f for f in fs if f not in cat.dom or cat.cod[f] != c]
            if bad:
                raise InputError(f"{where}: {bad[0]!r} does not land in {c!r}")
            value[c][x] = tuple(sorted(set(fs), key=cat.morphism_index))
    return PropInContext(X, value)


def _prop_report(p: PropInContext) -> Report:
    cat, X = p.base.cat, p.base
    for c, x in X.elements():
        sieve = p.value[c][x]
        for f in sieve:
            for g in cat.into(cat.dom[f]):
                if cat.comp(f, g) not in sieve:
                    return Report(False, "not a sieve", (c, x), f"{f} . {g} missing")
        for f in cat.into(c):
            if restrict_sieve(cat, sieve, f) != p.value[cat.dom[f]][X.act(x, f)]:
                return Report(False, "naturality", (c, x, f), "sieve does not restrict")
    return Report(True)


def _formula(doc, props: dict, names: dict):
    if isinstance(doc, str):
        doc = {"atom": doc}
    if not isinstance(doc, dict) or len(doc) != 1:
        raise InputError(f"formula must be an object with one connective, got {doc!r}")
    (op, arg), = doc.items()
    if op == "atom":
        if arg not in props:
            raise InputError(f"unknown proposition {arg!r}")
        return Atom(props[arg]), names.get(arg, arg), 0
    if op == "top":
        return Top(), "⊤", 0
    if op == "bottom":
        return Bottom(), "⊥", 0
    if op == "not":
        body, text, prec = _formula(arg, props, names)
        return Not(body), "¬" + (f"({text})" if prec > 0 else text), 0
    binary = {"and": (And, "∧", 1), "or": (Or, "∨", 1), "implies": (Implies, "⇒", 2)}
    if op not in binary or not isinstance(arg, list) or len(arg) != 2:
        raise InputError(f"unknown connective {op!r} or wrong arity")
    ctor, sym, prec = binary[op]
    (l, lt, lp), (r, rt, rp) = (_formula(a, props, names) for a in arg)
    lt = f"({lt})" if lp >= prec else lt
    rt = f"({rt})" if rp >= prec else rt
    return ctor(l, r), f"{lt}{sym}{rt}", prec


def formula_text(doc, props: dict, names: dict | None = None) -> str:
    return _formula(doc, props, names or {})[1]


def load_bundle(doc: dict, cat: FinCat, where: str = "bundle") -> dict:
    one = terminal(cat)
    presheaves = {"1": one}
    for name, body in doc.get("presheaves", {}).items():
        presheaves[name] = _presheaf(cat, name, body)
    maps = {name: _map(cat, name, body, presheaves) for name, body in doc.get("maps", {}).items()}
    families = {name: _family(cat, name, body, presheaves)
                for name, body in doc.get("families", {}).items()}
    props, names = {}, {}
    for name, body in doc.get("props", {}).items():
        props[name] = _prop(cat, name, body, presheaves)
        names[name] = body.get("display", name)
    queries = []
    for i, q in enumerate(doc.get("queries", [])):
        stage = _s(_need(q, "stage", f"query {i}"))
        if stage not in cat.objects:
            raise InputError(f"query {i}: unknown stage {stage!r}")
        formula, text, _ = _formula(_need(q, "formula", f"query {i}"), props, names)
        point = _s(q.get("point", "*"))
        queries.append(Query(stage, point, formula, text, q.get("expect")))
    return dict(presheaves=presheaves, maps=maps, families=families, props=props, queries=queries)


def load_workspace(site: str | None = None, bundle: str | None = None) -> Workspace:
    """Read a bundle (and the site it names, unless ``site`` overrides it)."""
    bdoc, bpath = {}, None
    if bundle is not None:
        bpath = _resolve(bundle, None, "bundles")
        bdoc = _read(bpath)
    site_ref = site or bdoc.get("site")
    if site_ref is None:
        raise InputError("no site given: pass --site or name one in the bundle")
    if isinstance(site_ref, dict):
        cat, phi, interval = _site_parts(site_ref, "inline site")
    else:
        spath = _resolve(str(site_ref), bpath.parent if bpath and not site else None)
        if spath.is_file():
            cat, phi, interval = _site_parts(_read(spath), str(spath))
        elif str(site_ref) in BUILTIN:
            cat, phi, interval = load_site(site_ref)
        else:
            raise InputError(f"site {site_ref!r} not found")
    try:
        parts = load_bundle(bdoc, cat, str(bpath or "bundle"))
    except KeyError as exc:
        raise InputError(f"{bpath}: unresolved name {exc}") from exc
    return Workspace(cat, phi, interval, source=str(bpath or site_ref), **parts)


def site_to_json(cat: FinCat) -> dict:
    """Canonical form: morphisms and composites sorted by identifier, identities left implicit."""
    morphisms = sorted((f for f in cat.morphisms if not cat.is_identity(f)))
    compose = {}
    for g, f in cat.composable_pairs():
        if not (cat.is_identity(g) or cat.is_identity(f)):
            compose[f"{g}∘{f}"] = cat.comp(g, f)
    return {"name": cat.name or "site", "objects": list(cat.objects),
            "morphisms": [{"id": f, "dom": cat.dom[f], "cod": cat.cod[f]} for f in morphisms],
            "compose": dict(sorted(compose.items()))}


def presheaf_to_json(X: Presheaf) -> dict:
    cat = X.cat
    return {"fibers": {c: list(X.fibers[c]) for c in sorted(cat.objects)},
            "restrictions": {f: {x: X.act(x, f) for x in sorted(X.fibers[cat.cod[f]])}
                             for f in sorted(cat.morphisms) if not cat.is_identity(f)}}


def map_to_json(m: NatTrans) -> dict:
    return {"components": {c: dict(sorted(m.comp[c].items())) for c in sorted(m.source.cat.objects)}}


# ---------------------------------------------------------------- certificates

def to_json(value):
    """Tuples become lists, recursively; everything else must already be JSON."""
    if isinstance(value, tuple):
        return [to_json(v) for v in value]
    if isinstance(value, list):
        return [to_json(v) for v in value]
    return value


def from_json(value):
    if isinstance(value, list):
        return Packed(from_json(v) for v in value)
    return value


def dump_certificate(structure, family: str) -> dict:
    if isinstance(structure, TrivFibStructure):
        rows = [[c, x, t, a] for (c, x, t), a in structure.fillers.items()]
        return {"kind": "tfib", "family": family, "fillers": to_json(rows)}
    if isinstance(structure, FibStructure):
        rows = [[key, j] for key, j in structure.fillers.items()]
        return {"kind": "fib", "family": family, "fillers": to_json(rows)}
    raise TypeError(f"no certificate format for {type(structure).__name__}")


def load_certificate(doc: dict, ws: Workspace):
    kind = doc.get("kind")
    fam = ws.family(_need(doc, "family", "certificate"))
    rows = [from_json(r) for r in _need(doc, "fillers", "certificate")]
    if kind == "tfib":
        return TrivFibStructure(fam, {(c, x, tuple(t)): a for c, x, t, a in rows})
    if kind == "fib":
        if ws.interval is None:
            raise InputError("fibration certificates need a site with an interval")
        return FibStructure(fam, ws.interval, {tuple(key): j for key, j in rows})
    raise InputError(f"unknown certificate kind {kind!r}")
