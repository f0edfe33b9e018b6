"""JSON loading for correspondences, markets and matchings.

A correspondence file is a builder spec with a ``students`` list::

    {"kind": "responsive", "students": ["a", "b", "c"], "q": 2, "values": {"a": 3, "b": 2, "c": 1}}

A market file lists students, schools with builder specs, and preferences::

    {"students": [...], "schools": [{"name": "s1", "choice": {...}}], "preferences": {"i1": ["s1"]}}
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from . import applications as ap
from .choice import ChoiceCorrespondence, FeasibleFamily, from_names
from .core import GroundSet, UMWeight, canonical_weight
from .errors import InvalidTable, ParseError, UnknownId
from .matching import Market, Matching


def _frac(v) -> Fraction:
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"not a number: {v!r}") from e


def _need(spec: Mapping, key: str):
    if key not in spec:
        raise ParseError(f"builder {spec.get('kind')!r} needs field {key!r}")
    return spec[key]


def _values(spec: Mapping):
    v = spec.get("values")
    if v is None:
        return None
    if isinstance(v, Mapping):
        return {k: _frac(x) for k, x in v.items()}
    return [_frac(x) for x in v]


def _types(spec: Mapping) -> ap.TypeStructure:
    types = {t: frozenset(m) for t, m in _need(spec, "types").items()}
    return ap.TypeStructure(types, dict(spec.get("lower", {})), dict(spec.get("upper", {})),
                            dict(spec.get("reserves", {})))


def _matroid(gs: GroundSet, m: Mapping) -> ap.Matroid:
    if "uniform" in m:
        return ap.Matroid.uniform(gs, int(m["uniform"]))
    if "laminar" in m:
        return ap.Matroid.laminar(gs, [(gs.mask(members), int(c)) for members, c in m["laminar"]])
    if "transversal" in m:
        return ap.Matroid.transversal(gs, {gs.index(i): list(seats) for i, seats in m["transversal"].items()})
    raise ParseError("matroid needs one of uniform, laminar, transversal")


def build_correspondence(spec: Mapping, students: GroundSet | None = None, name: str = "") -> ChoiceCorrespondence:
    """Correspondence from a builder spec."""
    if not isinstance(spec, Mapping):
        raise ParseError("builder spec must be an object")
    if students is None:
        if "students" not in spec:
            raise ParseError("correspondence spec needs a 'students' list")
        students = GroundSet(spec["students"])
    gs = students
    kind = spec.get("kind")
    name = spec.get("name", name)
    try:
        if kind == "explicit":
            c = from_names(gs, _need(spec, "table"), name=name)
        elif kind == "feasible_family":
            c = FeasibleFamily(gs, [gs.mask(m) for m in _need(spec, "family")], name=name)
        elif kind == "committee":
            c = ap.committee(gs, int(_need(spec, "q")), _need(spec, "referees"), spec.get("pi_set", "all"),
                             name=name or "committee")
        else:
            pi, lad = True, True
            if kind == "responsive":
                u = ap.responsive(gs, int(_need(spec, "q")), _values(spec))
            elif kind == "controlled":
                u = ap.controlled_choice(gs, int(_need(spec, "q")), _types(spec), _values(spec))
            elif kind == "edcr":
                u = ap.edcr(gs, int(_need(spec, "q")), _types(spec), _values(spec))
            elif kind == "overlapping":
                u = ap.overlapping_reserves(gs, int(_need(spec, "q")), _types(spec), _values(spec))
            elif kind == "weighted_matroid":
                u = ap.weighted_matroid_utility(_matroid(gs, _need(spec, "matroid")), _values(spec))
            elif kind == "laminar_concave":
                terms = [(gs.mask(m), [_frac(p) for p in phi]) for m, phi in _need(spec, "terms")]
                u = ap.laminar_concave(gs, terms)
            elif kind == "capacity_constrained":
                caps = [(gs.mask(m), int(c)) for m, c in _need(spec, "caps")]
                u = ap.capacity_constrained(gs, caps, _values(spec))
                pi = False
            else:
                raise ParseError(f"unknown builder kind {kind!r}")
            c = ap.corr(u, pi=pi, lad=lad, name=name)
    except (KeyError, TypeError) as e:
        raise ParseError(f"bad {kind} spec: {e}") from e
    if "assume_pi" in spec or "assume_lad" in spec:
        c = c.flagged(bool(spec.get("assume_pi", c.assume_pi)), bool(spec.get("assume_lad", c.assume_lad)))
    return c


def build_market(data: Mapping) -> Market:
    try:
        gs = GroundSet(data["students"])
        schools = data["schools"]
        names = [s["name"] for s in schools]
        corr = {s["name"]: build_correspondence(s["choice"], gs, name=s["name"]) for s in schools}
        return Market(gs, names, data.get("preferences", {}), corr, name=data.get("name", ""))
    except (KeyError, TypeError) as e:
        raise ParseError(f"bad market: missing or malformed {e}") from e


def parse_weight(gs: GroundSet, text: str | Mapping) -> UMWeight:
    """``a=1/2,b=-3`` (explicit) or ``a,b,c;+,-,+`` (canonical +-2^-j)."""
    if isinstance(text, Mapping):
        return UMWeight.of(gs, {k: _frac(v) for k, v in text.items()})
    if ";" in text:
        order, signs = text.split(";", 1)
        return canonical_weight(gs, [o.strip() for o in order.split(",")], [s.strip() for s in signs.split(",")])
    vals = {}
    for part in text.split(","):
        if "=" not in part:
            raise ParseError(f"bad weight entry {part!r}")
        k, v = part.split("=", 1)
        vals[k.strip()] = _frac(v.strip())
    try:
        return UMWeight.of(gs, vals)
    except ValueError as e:
        raise ParseError(str(e)) from e


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg} at line {e.lineno} column {e.colno} (char {e.pos})") from e


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    return loads(text, str(path))


def load_object(ref: str):
    """Registry id or path to a correspondence/market JSON file."""
    from .instances import INSTANCE_IDS, paper_instance

    if ref in INSTANCE_IDS:
        return paper_instance(ref)
    if not Path(ref).exists():
        raise UnknownId(f"{ref!r} is neither a known instance nor a file")
    data = read_json(ref)
    if isinstance(data, Mapping) and "schools" in data:
        return build_market(data)
    try:
        return build_correspondence(data)
    except InvalidTable as e:
        raise ParseError(str(e)) from e


def load_matching(market: Market, ref: str | Mapping) -> Matching:
    data = read_json(ref) if isinstance(ref, (str, Path)) else ref
    try:
        return Matching.from_json(market, data)
    except (AttributeError, TypeError) as e:
        raise ParseError(f"bad matching: {e}") from e


def dumps(obj: Any, pretty: bool = False) -> str:
    return json.dumps(obj, indent=2 if pretty else None, default=str)
