"""Registry of the worked instances: the five three-element correspondences,
the example markets, the committee examples and the bridging row listing."""
from __future__ import annotations

from fractions import Fraction

from .applications import Matroid, capacity_constrained, committee, corr, laminar_concave, weighted_matroid_utility
from .choice import ChoiceCorrespondence, from_names
from .core import GroundSet
from .errors import UnknownId
from .matching import Market, Matching

ABC = GroundSet("abc")

_TABLE1 = {
    "C0": {"": [""], "a": ["a"], "b": ["b"], "c": ["c"], "a,b": ["a", "b"], "a,c": ["a", "c"],
           "b,c": ["b", "c"], "a,b,c": ["a", "b", "c"]},
    "C1": {"": [""], "a": ["a"], "b": ["b"], "c": ["c"], "a,b": ["a,b"], "a,c": ["a,c"],
           "b,c": ["b", "c"], "a,b,c": ["a,b", "a,c"]},
    "C2": {"": [""], "a": ["a"], "b": ["b"], "c": ["c"], "a,b": ["a"], "a,c": ["a"],
           "b,c": ["b,c"], "a,b,c": ["a", "b,c"]},
    "C3": {"": [""], "a": ["a"], "b": ["b"], "c": ["c"], "a,b": ["b"], "a,c": ["a"],
           "b,c": ["c"], "a,b,c": ["a", "b", "c"]},
    "C4": {"": [""], "a": ["", "a"], "b": ["", "b"], "c": ["", "c"], "a,b": ["", "a,b"],
           "a,c": ["", "a,c"], "b,c": ["", "b,c"], "a,b,c": ["", "a,b,c"]},
}

# expected classification (PI, LAD)
TABLE1_EXPECTED = {"C0": (True, True), "C1": (True, True), "C2": (True, False),
                   "C3": (False, True), "C4": (False, False)}

# rational stand-in for 2*sqrt(2); keeps 2 > 29/10 - 2 and 29/10 < 3
SQRT8_SURROGATE = Fraction(29, 10)


def _split(key: str) -> list[str]:
    return [p for p in key.split(",") if p]


def table1(name: str) -> ChoiceCorrespondence:
    rows = _TABLE1[name]
    return from_names(ABC, {k: [_split(y) for y in v] for k, v in rows.items()}, name=f"table1.{name}")


def _students(k: int) -> GroundSet:
    return GroundSet([f"i{j}" for j in range(1, k + 1)])


def _laminar_corr(gs: GroundSet, caps, name: str):
    m = Matroid.laminar(gs, [(gs.mask(_split(s)), c) for s, c in caps])
    return corr(weighted_matroid_utility(m), name=name)


_EX41_PREFS = {"i1": ["s2", "s1"], "i2": ["s1", "s2"], "i3": ["s3", "s1"], "i4": ["s1", "s3"]}


def _ex41_schools(gs: GroundSet) -> dict:
    return {
        "s1": _laminar_corr(gs, [("i1,i4", 1), ("i2,i3", 1)], "s1"),
        "s2": _laminar_corr(gs, [("i1,i2", 1), ("i3,i4", 0)], "s2"),
        "s3": _laminar_corr(gs, [("i1,i2", 0), ("i3,i4", 1)], "s3"),
    }


def ex41() -> Market:
    gs = _students(4)
    return Market(gs, ["s1", "s2", "s3"], _EX41_PREFS, _ex41_schools(gs), name="ex4.1")


def ex42_s1(gs: GroundSet | None = None) -> ChoiceCorrespondence:
    gs = gs or _students(4)
    caps = [(gs.mask(_split(s)), c) for s, c in [("i1,i4", 1), ("i2,i3", 1), ("i2,i4", 1)]]
    return corr(capacity_constrained(gs, caps), pi=False, lad=True, name="s1'")


def ex42() -> Market:
    gs = _students(4)
    schools = _ex41_schools(gs)
    schools["s1"] = ex42_s1(gs)
    return Market(gs, ["s1", "s2", "s3"], _EX41_PREFS, schools, name="ex4.2")


def ex43() -> Market:
    gs = _students(5)
    m = gs.mask
    u1 = laminar_concave(gs, [(m(["i5"]), [0, 1]), (m(["i1", "i3"]), [0, 2, SQRT8_SURROGATE]),
                              (m(["i2", "i4"]), [0, 3, 6]), (gs.full, [0, 0, 0])])
    u2 = laminar_concave(gs, [(gs.full, [0, 1, 2])])
    prefs = {"i1": ["s1", "s2"], "i3": ["s1", "s2"], "i5": ["s1", "s2"],
             "i2": ["s2", "s1"], "i4": ["s2", "s1"]}
    return Market(gs, ["s1", "s2"], prefs, {"s1": corr(u1, name="s1"), "s2": corr(u2, name="s2")},
                  name="ex4.3")


ADMISSION_REFEREES = {"h1": ["i1", "i2", "i3", "i4"], "h2": ["i1", "i3", "i2", "i4"],
                      "h3": ["i2", "i4", "i1", "i3"]}
APPD_REFEREES = {"h1": ["i1", "i2", "i3", "i5", "i4"], "h2": ["i1", "i3", "i2", "i5", "i4"],
                 "h3": ["i2", "i4", "i1", "i5", "i3"]}
APPD_PI = [("h1", "h1"), ("h2", "h2"), ("h3", "h3")]


def admission() -> ChoiceCorrespondence:
    return committee(_students(4), 2, ADMISSION_REFEREES, "all", name="admission")


def appd_s1(gs: GroundSet | None = None) -> ChoiceCorrespondence:
    return committee(gs or _students(5), 2, APPD_REFEREES, APPD_PI, name="s1")


def appd() -> Market:
    gs = _students(5)
    single = lambda s: corr(weighted_matroid_utility(Matroid.uniform(gs, 1)), name=s)
    prefs = {"i1": ["s2", "s1"], "i2": ["s3", "s1"], "i3": ["s1", "s2"],
             "i4": ["s1", "s3"], "i5": ["s1", "s4"]}
    schools = {"s1": appd_s1(gs), "s2": single("s2"), "s3": single("s3"), "s4": single("s4")}
    return Market(gs, ["s1", "s2", "s3", "s4"], prefs, schools, name="appD")


_MATCHINGS = {
    "ex4.1": {"mu": [("i1", "s1"), ("i2", "s2"), ("i3", "s1"), ("i4", "s3")],
              "mu_prime": [("i1", "s2"), ("i2", "s1"), ("i3", "s3"), ("i4", "s1")]},
    "ex4.2": {"mu": [("i1", "s1"), ("i2", "s2"), ("i3", "s1"), ("i4", "s3")]},
    "ex4.3": {"mu": [("i1", "s2"), ("i2", "s1"), ("i3", "s2"), ("i4", "s1")],
              "nu": [("i1", "s1"), ("i2", "s2"), ("i3", "s1"), ("i4", "s2")],
              "nu_prime": [("i1", "s1"), ("i2", "s2"), ("i3", "s2"), ("i4", "s1")]},
    "appD": {"mu": [("i1", "s1"), ("i2", "s1"), ("i3", "s2"), ("i4", "s3"), ("i5", "s4")]},
}

_REGISTRY = {
    **{f"table1.{k}": (lambda k=k: table1(k)) for k in _TABLE1},
    "ex4.1": ex41, "ex4.2": ex42, "ex4.3": ex43, "appD": appd, "admission": admission,
}

INSTANCE_IDS = tuple(_REGISTRY)


def paper_instance(name: str):
    """Market or correspondence registered under ``name``."""
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise UnknownId(f"unknown instance {name!r}; known: {', '.join(INSTANCE_IDS)}") from None


def instance_matching(market: Market, instance: str, which: str = "mu") -> Matching:
    try:
        pairs = _MATCHINGS[instance][which]
    except KeyError:
        raise UnknownId(f"no matching {which!r} for {instance!r}") from None
    return Matching.from_pairs(market, pairs)


# Restricted bridging rows for the committee school of appD (|Y| > 2, Y strictly inside X),
# one j per row as listed in the reference table.
TABLE2 = (
    ("i1,i2,i3,i4", "i1,i2,i3", "i2,i4", "i1,i2", "i4", "i1"),
    ("i1,i2,i3,i4", "i1,i2,i4", "i1,i3", "i1,i2", "i3", "i2"),
    ("i1,i2,i3,i4", "i1,i3,i4", "i2,i4", "i1,i4", "i2", "i1"),
    ("i1,i2,i3,i4", "i1,i3,i4", "i1,i2", "i1,i4", "i2", "i4"),
    ("i1,i2,i3,i4", "i1,i3,i4", "i1,i2", "i1,i3", "i2", "i3"),
    ("i1,i2,i3,i4", "i2,i3,i4", "i1,i3", "i2,i3", "i1", "i2"),
    ("i1,i2,i3,i4", "i2,i3,i4", "i1,i2", "i2,i4", "i1", "i4"),
    ("i1,i2,i3,i4", "i2,i3,i4", "i1,i2", "i2,i3", "i1", "i3"),
    ("i1,i2,i3,i5", "i1,i2,i5", "i1,i3", "i1,i2", "i3", "i2"),
    ("i1,i2,i3,i5", "i1,i3,i5", "i1,i2", "i1,i5", "i2", "i5"),
    ("i1,i2,i3,i5", "i1,i3,i5", "i1,i2", "i1,i3", "i2", "i3"),
    ("i1,i2,i3,i5", "i2,i3,i5", "i1,i3", "i2,i3", "i1", "i2"),
    ("i1,i2,i3,i5", "i2,i3,i5", "i1,i2", "i2,i5", "i1", "i5"),
    ("i1,i2,i3,i5", "i2,i3,i5", "i1,i2", "i2,i3", "i1", "i3"),
    ("i1,i2,i4,i5", "i1,i2,i5", "i2,i4", "i1,i2", "i4", "i1"),
    ("i1,i2,i4,i5", "i1,i4,i5", "i2,i4", "i1,i4", "i2", "i1"),
    ("i1,i2,i4,i5", "i1,i4,i5", "i1,i2", "i1,i4", "i2", "i4"),
    ("i1,i2,i4,i5", "i1,i4,i5", "i1,i2", "i1,i5", "i2", "i5"),
    ("i1,i2,i4,i5", "i2,i4,i5", "i1,i2", "i2,i4", "i1", "i4"),
    ("i1,i2,i4,i5", "i2,i4,i5", "i1,i2", "i2,i5", "i1", "i5"),
    ("i1,i3,i4,i5", "i1,i3,i5", "i1,i4", "i1,i5", "i4", "i5"),
    ("i1,i3,i4,i5", "i1,i3,i5", "i1,i4", "i1,i3", "i4", "i3"),
    ("i1,i3,i4,i5", "i1,i4,i5", "i1,i3", "i1,i4", "i3", "i4"),
    ("i1,i3,i4,i5", "i1,i4,i5", "i1,i3", "i1,i5", "i3", "i5"),
    ("i1,i3,i4,i5", "i3,i4,i5", "i1,i4", "i4,i5", "i1", "i5"),
    ("i1,i3,i4,i5", "i3,i4,i5", "i1,i3", "i3,i5", "i1", "i5"),
    ("i2,i3,i4,i5", "i2,i3,i5", "i2,i4", "i2,i5", "i4", "i5"),
    ("i2,i3,i4,i5", "i2,i3,i5", "i2,i4", "i2,i3", "i4", "i3"),
    ("i2,i3,i4,i5", "i2,i4,i5", "i2,i3", "i2,i4", "i3", "i4"),
    ("i2,i3,i4,i5", "i2,i4,i5", "i2,i3", "i2,i5", "i3", "i5"),
    ("i2,i3,i4,i5", "i3,i4,i5", "i2,i4", "i4,i5", "i2", "i5"),
    ("i2,i3,i4,i5", "i3,i4,i5", "i2,i3", "i3,i5", "i2", "i5"),
    ("i1,i2,i3,i4,i5", "i1,i2,i3", "i2,i4", "i1,i2", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i2,i4", "i1,i3", "i1,i2", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i1,i2,i5", "i2,i4", "i1,i2", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i2,i5", "i1,i3", "i1,i2", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i1,i3,i4", "i2,i4", "i1,i4", "i2", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i3,i4", "i1,i2", "i1,i4", "i2", "i4"),
    ("i1,i2,i3,i4,i5", "i1,i3,i4", "i1,i2", "i1,i3", "i2", "i3"),
    ("i1,i2,i3,i4,i5", "i1,i3,i5", "i2,i4", "i1,i5", "i2", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i3,i5", "i2,i4", "i1,i5", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i3,i5", "i2,i4", "i1,i3", "i2", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i3,i5", "i2,i4", "i1,i3", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i3,i5", "i1,i2", "i1,i5", "i2", "i4"),
    ("i1,i2,i3,i4,i5", "i1,i3,i5", "i1,i2", "i1,i3", "i2", "i3"),
    ("i1,i2,i3,i4,i5", "i1,i4,i5", "i2,i4", "i1,i4", "i2", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i4,i5", "i1,i3", "i1,i4", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i1,i4,i5", "i1,i3", "i1,i5", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i1,i4,i5", "i1,i2", "i1,i4", "i2", "i3"),
    ("i1,i2,i3,i4,i5", "i1,i4,i5", "i1,i2", "i1,i5", "i2", "i3"),
    ("i1,i2,i3,i4,i5", "i2,i3,i4", "i1,i3", "i2,i3", "i1", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i3,i4", "i1,i2", "i2,i4", "i1", "i4"),
    ("i1,i2,i3,i4,i5", "i2,i3,i4", "i1,i2", "i2,i3", "i1", "i3"),
    ("i1,i2,i3,i4,i5", "i2,i3,i5", "i2,i4", "i2,i5", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i2,i3,i5", "i2,i4", "i2,i3", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i2,i3,i5", "i1,i3", "i2,i3", "i1", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i3,i5", "i1,i2", "i2,i5", "i1", "i4"),
    ("i1,i2,i3,i4,i5", "i2,i3,i5", "i1,i2", "i2,i3", "i1", "i3"),
    ("i1,i2,i3,i4,i5", "i2,i4,i5", "i1,i3", "i2,i4", "i1", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i4,i5", "i1,i3", "i2,i4", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i4,i5", "i1,i3", "i2,i5", "i1", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i4,i5", "i1,i3", "i2,i5", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i4,i5", "i1,i2", "i2,i4", "i1", "i3"),
    ("i1,i2,i3,i4,i5", "i2,i4,i5", "i1,i2", "i2,i5", "i1", "i3"),
    ("i1,i2,i3,i4,i5", "i3,i4,i5", "i2,i4", "i4,i5", "i2", "i1"),
    ("i1,i2,i3,i4,i5", "i3,i4,i5", "i1,i3", "i3,i5", "i1", "i2"),
    ("i1,i2,i3,i4,i5", "i3,i4,i5", "i1,i2", "i4,i5", "i1", "i4"),
    ("i1,i2,i3,i4,i5", "i3,i4,i5", "i1,i2", "i4,i5", "i2", "i4"),
    ("i1,i2,i3,i4,i5", "i3,i4,i5", "i1,i2", "i3,i5", "i1", "i3"),
    ("i1,i2,i3,i4,i5", "i3,i4,i5", "i1,i2", "i3,i5", "i2", "i3"),
    ("i1,i2,i3,i4,i5", "i1,i2,i3,i5", "i2,i4", "i1,i2", "i4", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i2,i4,i5", "i1,i3", "i1,i2", "i3", "i2"),
    ("i1,i2,i3,i4,i5", "i1,i3,i4,i5", "i2,i4", "i1,i4", "i2", "i1"),
    ("i1,i2,i3,i4,i5", "i1,i3,i4,i5", "i1,i2", "i1,i4", "i2", "i4"),
    ("i1,i2,i3,i4,i5", "i1,i3,i4,i5", "i1,i2", "i1,i3", "i2", "i3"),
    ("i1,i2,i3,i4,i5", "i2,i3,i4,i5", "i1,i3", "i2,i3", "i1", "i2"),
    ("i1,i2,i3,i4,i5", "i2,i3,i4,i5", "i1,i2", "i2,i4", "i1", "i4"),
    ("i1,i2,i3,i4,i5", "i2,i3,i4,i5", "i1,i2", "i2,i3", "i1", "i3"),
)


def table2_rows(gs: GroundSet | None = None) -> list[dict]:
    gs = gs or _students(5)
    out = []
    for x, y, a, b, i, j in TABLE2:
        out.append({"X": gs.mask(_split(x)), "Y": gs.mask(_split(y)), "A": gs.mask(_split(a)),
                    "B": gs.mask(_split(b)), "i": gs.index(i), "j": gs.index(j)})
    return out


def restricted_rows(rows: list[dict]) -> list[dict]:
    """Bridging rows with |Y| > 2 and Y a proper subset of X."""
    return [r for r in rows if bin(int(r["Y"])).count("1") > 2 and r["Y"] != r["X"]]
