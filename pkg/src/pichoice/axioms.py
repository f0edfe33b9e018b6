"""Exhaustive verifiers for choice axioms, with replayable witnesses.

Function-level checks tabulate C over all 2^n subsets and compare whole
(X, X') grids with numpy.  Correspondence-level PI and LAD are quantified
over every UM weight; they are tested on the signed-permutation dyadic
weights plus seeded random integer weights, and the best they can report is
``HOLDS_ON_TESTED``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .choice import ChoiceCorrespondence, ChoiceFunction, UtilityFunction
from .core import (
    NEG_INF,
    GroundSet,
    Subset,
    UMWeight,
    bits_of,
    canonical_weight,
    check_cap,
    lex_add,
    popcount,
    random_um_weight,
    submasks,
)
from .errors import EmptyFamily, NotAcceptant, NotInFamily

HOLDS = "holds"
HOLDS_ON_TESTED = "holds-on-tested-family"
VIOLATED = "violated"

PAIR_CAP = 8
TRIPLE_CAP = 5


class Mask(int):
    """Marks a witness value as a subset so JSON output can name its members."""


class Elem(int):
    """Marks a witness value as a single element index."""


@dataclass
class Verdict:
    axiom: str
    status: str
    witness: dict = field(default_factory=dict)
    tested: str = ""
    ground: GroundSet | None = None
    parts: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)

    @property
    def violated(self) -> bool:
        return self.status == VIOLATED

    @property
    def ok(self) -> bool:
        return self.status != VIOLATED

    def _enc(self, v):
        gs = self.ground
        if isinstance(v, Mask):
            return sorted(gs.names(v)) if gs else int(v)
        if isinstance(v, Elem):
            return gs.elements[v] if gs else int(v)
        if isinstance(v, UMWeight):
            return v.to_json()
        if isinstance(v, (list, tuple)):
            return [self._enc(x) for x in v]
        if isinstance(v, dict):
            return {k: self._enc(x) for k, x in v.items()}
        if isinstance(v, Verdict):
            return v.to_json()
        return v

    def to_json(self) -> dict:
        out = {"axiom": self.axiom, "status": self.status}
        for k, v in self.witness.items():
            out[k] = self._enc(v)
        if self.tested:
            out["tested"] = self.tested
        if self.parts:
            out["parts"] = {k: p.to_json() for k, p in self.parts.items()}
        if self.rows:
            out["rows"] = [self._enc(r) for r in self.rows]
        return out


def _holds(axiom, ground=None, **kw) -> Verdict:
    return Verdict(axiom, HOLDS, ground=ground, **kw)


def _violated(axiom, ground, **witness) -> Verdict:
    return Verdict(axiom, VIOLATED, witness=witness, ground=ground)


# --- choice functions -----------------------------------------------------


def _fn_array(c: ChoiceFunction | Sequence[int], cap: int) -> np.ndarray:
    if isinstance(c, ChoiceFunction):
        check_cap(c.ground.n, cap)
        return np.asarray(c.table(cap), dtype=np.int64)
    return np.asarray(c, dtype=np.int64)


def _grid(N: int):
    a = np.arange(N, dtype=np.int64)
    return a[:, None], a[None, :]


def _first(mask: np.ndarray):
    hit = np.argwhere(mask)
    if len(hit) == 0:
        return None
    return int(hit[0][0]), int(hit[0][1])


def _popcounts(N: int) -> np.ndarray:
    return np.array([popcount(x) for x in range(N)], dtype=np.int64)


def _pi_witness(t: np.ndarray):
    X, Xp = _grid(len(t))
    bad = t[X | Xp] != t[t[X] | Xp]
    return _first(bad)


def _lad_witness(t: np.ndarray):
    X, Xp = _grid(len(t))
    pc = _popcounts(len(t))
    sub = (X & Xp) == Xp
    return _first(sub & (pc[t][Xp] > pc[t][X]))


def check_pi_fn(c, cap: int = PAIR_CAP) -> Verdict:
    """C(X u X') = C(C(X) u X') for all pairs."""
    t = _fn_array(c, cap)
    gs = getattr(c, "ground", None)
    hit = _pi_witness(t)
    if hit is None:
        return _holds("PI", gs)
    x, xp = hit
    return _violated("PI", gs, X=Mask(x), Xprime=Mask(xp),
                     lhs=Mask(int(t[x | xp])), rhs=Mask(int(t[t[x] | xp])))


def check_sub_fn(c, cap: int = PAIR_CAP) -> Verdict:
    """C(X) n X' inside C(X') whenever X' is inside X."""
    t = _fn_array(c, cap)
    gs = getattr(c, "ground", None)
    X, Xp = _grid(len(t))
    sub = (X & Xp) == Xp
    hit = _first(sub & (((t[X] & Xp) & ~t[Xp]) != 0))
    if hit is None:
        return _holds("SUB", gs)
    return _violated("SUB", gs, X=Mask(hit[0]), Xprime=Mask(hit[1]))


def check_irc_fn(c, cap: int = PAIR_CAP) -> Verdict:
    """C(X) inside X' inside X implies C(X') = C(X)."""
    t = _fn_array(c, cap)
    gs = getattr(c, "ground", None)
    X, Xp = _grid(len(t))
    between = ((X & Xp) == Xp) & ((t[X] & ~Xp) == 0)
    hit = _first(between & (t[X] != t[Xp]))
    if hit is None:
        return _holds("IRC", gs)
    return _violated("IRC", gs, X=Mask(hit[0]), Xprime=Mask(hit[1]))


def check_lad_fn(c, cap: int = PAIR_CAP) -> Verdict:
    t = _fn_array(c, cap)
    gs = getattr(c, "ground", None)
    hit = _lad_witness(t)
    if hit is None:
        return _holds("LAD", gs)
    return _violated("LAD", gs, X=Mask(hit[0]), Xprime=Mask(hit[1]))


def check_acceptant_fn(c, cap: int = PAIR_CAP) -> Verdict:
    t = _fn_array(c, cap)
    gs = getattr(c, "ground", None)
    N = len(t)
    pc = _popcounts(N)
    q = int(pc[t[N - 1]])
    bad = np.nonzero(pc[t] != np.minimum(pc, q))[0]
    if len(bad) == 0:
        return Verdict("acceptant", HOLDS, witness={"q": q}, ground=gs)
    return _violated("acceptant", gs, q=q, X=Mask(int(bad[0])))


# --- correspondences ------------------------------------------------------


def _corr_table(corr: ChoiceCorrespondence, cap: int) -> list[list[Subset]]:
    check_cap(corr.ground.n, cap)
    return corr.table(cap)


def check_sc1(corr: ChoiceCorrespondence, cap: int = TRIPLE_CAP) -> Verdict:
    """Every Z1 in C(X1) keeps its X2-part inside some Z2 in C(X2)."""
    tab = _corr_table(corr, cap)
    for x1 in corr.ground.subsets():
        for x2 in submasks(x1):
            for z1 in tab[x1]:
                need = x2 & z1
                if not any(need & ~z2 == 0 for z2 in tab[x2]):
                    return _violated("SC1", corr.ground, X1=Mask(x1), X2=Mask(x2), Z1=Mask(z1))
    return _holds("SC1", corr.ground)


def check_sc2(corr: ChoiceCorrespondence, cap: int = TRIPLE_CAP) -> Verdict:
    """Every Z2 in C(X2) contains the X2-part of some Z1 in C(X1)."""
    tab = _corr_table(corr, cap)
    for x1 in corr.ground.subsets():
        for x2 in submasks(x1):
            for z2 in tab[x2]:
                if not any((x2 & z1) & ~z2 == 0 for z1 in tab[x1]):
                    return _violated("SC2", corr.ground, X1=Mask(x1), X2=Mask(x2), Z2=Mask(z2))
    return _holds("SC2", corr.ground)


def check_irc_corr(corr: ChoiceCorrespondence, cap: int = TRIPLE_CAP) -> Verdict:
    tab = _corr_table(corr, cap)
    for x in corr.ground.subsets():
        for y in tab[x]:
            rest = x & ~y
            for extra in submasks(rest):
                yp = y | extra
                if not corr.member(yp, y):
                    return _violated("IRC", corr.ground, X=Mask(x), Y=Mask(y), Yprime=Mask(yp))
    return _holds("IRC", corr.ground)


def check_acceptant_corr(corr: ChoiceCorrespondence, cap: int = TRIPLE_CAP) -> Verdict:
    tab = _corr_table(corr, cap)
    sizes = {popcount(y) for y in tab[corr.ground.full]}
    q = max(sizes)
    for x in corr.ground.subsets():
        for y in tab[x]:
            if popcount(y) != min(popcount(x), q):
                return _violated("acceptant", corr.ground, q=q, X=Mask(x), Y=Mask(y))
    return Verdict("acceptant", HOLDS, witness={"q": q}, ground=corr.ground)


class _Pairs:
    """Flattened (X, Y in C(X)) pairs for vectorized tie-breaking."""

    def __init__(self, corr: ChoiceCorrespondence, cap: int):
        tab = _corr_table(corr, cap)
        px, py = [], []
        for x, ys in enumerate(tab):
            px.extend([x] * len(ys))
            py.extend(ys)
        self.px = np.asarray(px, dtype=np.int64)
        self.py = np.asarray(py, dtype=np.int64)
        self.ends = np.cumsum([len(ys) for ys in tab]) - 1
        self.tab = tab

    def cw(self, w: UMWeight) -> np.ndarray:
        sums = w.table()
        if max(abs(min(sums)), abs(max(sums))) < 2 ** 62:
            key = np.asarray(sums, dtype=np.int64)[self.py]
            order = np.lexsort((key, self.px))
            return self.py[order][self.ends]
        return np.asarray([max(ys, key=w.key) for ys in self.tab], dtype=np.int64)


def tested_weights(gs: GroundSet, random_samples: int = 0, seed: int = 0) -> Iterator[UMWeight]:
    """Signed-permutation dyadic weights (permutations in lexicographic
    order, '+' before '-'), then seeded random integer UM weights."""
    for perm in itertools.permutations(range(gs.n)):
        for signs in itertools.product((1, -1), repeat=gs.n):
            yield canonical_weight(gs, perm, signs)
    rng = random.Random(seed)
    for _ in range(random_samples):
        yield random_um_weight(gs, rng)


def _family_note(n: int, k: int) -> str:
    return f"{n}!*2^{n} signed-permutation dyadic weights + {k} random integer weights"


def _weight_sweep(corr, axiom, finder, random_samples, seed, cap):
    pairs = _Pairs(corr, cap)
    for w in tested_weights(corr.ground, random_samples, seed):
        t = pairs.cw(w)
        hit = finder(t)
        if hit is not None:
            x, xp = hit
            return _violated(axiom, corr.ground, weight=w, X=Mask(x), Xprime=Mask(xp))
    return None


def check_pi_corr(corr: ChoiceCorrespondence, random_samples: int = 32, seed: int = 0,
                  cap: int = TRIPLE_CAP) -> Verdict:
    """PI of every tested tie-breaking C^w, plus necessary conditions."""
    bad = _weight_sweep(corr, "PI", _pi_witness, random_samples, seed, cap)
    if bad is not None:
        return bad
    necessary = [check_sc1(corr, cap), check_sc2(corr, cap), check_irc_corr(corr, cap)]
    for x in corr.ground.subsets():
        g = check_gmatroid(corr.enumerate(x))
        if g.violated:
            g.witness["pool"] = Mask(x)
            g.ground = corr.ground
            necessary.append(g)
            break
    from .rationalize import CycleWitness, sarp_check

    sarp = sarp_check(corr, cap=cap)
    if isinstance(sarp, CycleWitness):
        necessary.append(_violated("rationalizable", corr.ground, cycle=[Mask(s) for s in sarp.sets]))
    for v in necessary:
        if v.violated:
            return Verdict("PI", VIOLATED, witness={"via": v.axiom, **v.witness}, ground=corr.ground)
    return Verdict("PI", HOLDS_ON_TESTED, tested=_family_note(corr.ground.n, random_samples),
                   ground=corr.ground)


def check_lad_corr(corr: ChoiceCorrespondence, random_samples: int = 32, seed: int = 0,
                   cap: int = TRIPLE_CAP) -> Verdict:
    bad = _weight_sweep(corr, "LAD", _lad_witness, random_samples, seed, cap)
    if bad is not None:
        return bad
    return Verdict("LAD", HOLDS_ON_TESTED, tested=_family_note(corr.ground.n, random_samples),
                   ground=corr.ground)


# --- g-matroids -----------------------------------------------------------


def _gm_violation(fam: list[Subset], members: frozenset, split: bool):
    for x in fam:
        for y in fam:
            for e in bits_of(x & ~y):
                ebit = 1 << e
                opts = [0] + [1 << k for k in bits_of(y & ~x)]
                if split:
                    ok1 = any((x & ~ebit) | f in members for f in opts)
                    ok2 = any((y | ebit) & ~f in members for f in opts)
                    ok = ok1 and ok2
                else:
                    ok = any((x & ~ebit) | f in members and (y | ebit) & ~f in members for f in opts)
                if not ok:
                    return x, y, e
    return None


def check_gmatroid(family: Iterable[Subset], ground: GroundSet | None = None) -> Verdict:
    """Symmetric exchange (Tardos) cross-checked with the split form."""
    fam = sorted(set(family))
    if not fam:
        raise EmptyFamily("g-matroid check on an empty family")
    members = frozenset(fam)
    a = _gm_violation(fam, members, split=False)
    b = _gm_violation(fam, members, split=True)
    if (a is None) != (b is None):
        raise AssertionError("g-matroid characterizations disagree")
    if a is None:
        return _holds("gmatroid", ground)
    x, y, e = a
    return _violated("gmatroid", ground, X=Mask(x), Y=Mask(y), e=Elem(e))


def extendable_element(family: Iterable[Subset], x: Subset) -> int | None:
    """Index i with X + i in the family, or None when X has maximum size."""
    members = frozenset(family)
    if x not in members:
        raise NotInFamily("X is not in the family")
    top = max(popcount(y) for y in members)
    if popcount(x) == top:
        return None
    width = max(members).bit_length()
    for i in range(width):
        if not x >> i & 1 and x | (1 << i) in members:
            return i
    raise AssertionError("family is not a g-matroid: no extension of a non-maximum set")


# --- concavity ------------------------------------------------------------


def _ranks(u: UtilityFunction) -> np.ndarray:
    vals = u.values()
    finite = sorted({v for v in vals if v is not NEG_INF})
    pos = {v: k + 1 for k, v in enumerate(finite)}
    return np.asarray([0 if v is NEG_INF else pos[v] for v in vals], dtype=np.int64)


def check_ordinal_concavity(u: UtilityFunction, cap: int = PAIR_CAP) -> Verdict:
    n = u.ground.n
    check_cap(n, cap)
    r = _ranks(u)
    X, Xp = _grid(1 << n)
    best = None
    for i in range(n):
        bi = 1 << i
        # conditions range over dom u only
        base = ((X & bi) != 0) & ((Xp & bi) == 0) & (r[X] > 0) & (r[Xp] > 0)
        ok = np.zeros(base.shape, dtype=bool)
        for j in [None, *range(n)]:
            if j is None:
                valid, xa, xb = base, X & ~bi, Xp | bi
            else:
                bj = 1 << j
                valid = base & ((Xp & bj) != 0) & ((X & bj) == 0)
                xa, xb = (X & ~bi) | bj, (Xp | bi) & ~bj
            rx, ra, rp, rb = r[X], r[xa], r[Xp], r[xb]
            ok |= valid & ((rx < ra) | (rp < rb) | ((rx == ra) & (rp == rb)))
        hit = _first(base & ~ok)
        if hit is not None and (best is None or (hit[0], hit[1], i) < best):
            best = (hit[0], hit[1], i)
    if best is None:
        return _holds("ordinal_concave", u.ground)
    return _violated("ordinal_concave", u.ground, X=Mask(best[0]), Xprime=Mask(best[1]), i=Elem(best[2]))


def check_size_restricted(u: UtilityFunction, cap: int = PAIR_CAP) -> Verdict:
    n = u.ground.n
    check_cap(n, cap)
    r = _ranks(u)
    N = 1 << n
    X, Xp = _grid(N)
    pc = _popcounts(N)
    need = (pc[X] > pc[Xp]) & (r[X] > 0) & (r[Xp] > 0)
    ok = np.zeros(need.shape, dtype=bool)
    for i in range(n):
        bi = 1 << i
        valid = ((X & bi) != 0) & ((Xp & bi) == 0)
        rx, ra, rp, rb = r[X], r[X & ~bi], r[Xp], r[Xp | bi]
        ok |= valid & ((rx < ra) | (rp < rb) | ((rx == ra) & (rp == rb)))
    hit = _first(need & ~ok)
    if hit is None:
        return _holds("size_restricted", u.ground)
    return _violated("size_restricted", u.ground, X=Mask(hit[0]), Xprime=Mask(hit[1]))


def check_mnat(u: UtilityFunction, cap: int = TRIPLE_CAP) -> Verdict:
    """u(X)+u(X') <= u(X-i+j)+u(X'+i-j) for some j, exhaustively."""
    n = u.ground.n
    check_cap(n, cap)
    vals = u.values()
    for x in u.ground.subsets():
        for xp in u.ground.subsets():
            lhs = lex_add(vals[x], vals[xp])
            if lhs is NEG_INF:
                continue
            for i in bits_of(x & ~xp):
                bi = 1 << i
                opts = [0] + [1 << j for j in bits_of(xp & ~x)]
                if not any(lex_add(vals[(x & ~bi) | bj], vals[(xp | bi) & ~bj]) >= lhs for bj in opts):
                    return _violated("mnat", u.ground, X=Mask(x), Xprime=Mask(xp), i=Elem(i))
    return _holds("mnat", u.ground)


# --- closure operator -----------------------------------------------------


def tau_table(corr: ChoiceCorrespondence, cap: int = PAIR_CAP) -> list[Subset]:
    """tau(X) = union of all Y with C(X) and C(Y) sharing a member."""
    tab = _corr_table(corr, cap)
    reach: dict[Subset, Subset] = {}
    for y, zs in enumerate(tab):
        for z in zs:
            reach[z] = reach.get(z, 0) | y
    out = []
    for zs in tab:
        acc = 0
        for z in zs:
            acc |= reach[z]
        out.append(acc)
    return out


def tau(corr: ChoiceCorrespondence, x: Subset, cap: int = PAIR_CAP) -> Subset:
    return tau_table(corr, cap)[x]


def check_closure(corr: ChoiceCorrespondence, cap: int = TRIPLE_CAP) -> Verdict:
    """Closure-operator laws of tau plus the interval and representation properties."""
    gs = corr.ground
    tab = _corr_table(corr, cap)
    sets = [frozenset(ys) for ys in tab]
    t = tau_table(corr, cap)
    subsets = list(gs.subsets())
    parts: dict[str, Verdict] = {}

    def first(name, gen):
        for w in gen:
            parts[name] = _violated(name, gs, **w)
            return
        parts[name] = _holds(name, gs)

    first("extensivity", ({"X": Mask(x)} for x in subsets if x & ~t[x]))
    first("idempotence", ({"X": Mask(x)} for x in subsets if t[t[x]] != t[x]))
    first("monotonicity", ({"X": Mask(x), "Y": Mask(y)}
                           for y in subsets for x in submasks(y) if t[x] & ~t[y]))
    first("chosen_self", ({"X": Mask(x), "S": Mask(s)}
                          for x in subsets for s in tab[x] if s not in sets[s]))
    first("tau_eq", ({"X": Mask(x), "S": Mask(s)}
                     for x in subsets for s in tab[x] if s not in sets[t[x]] or t[s] != t[x]))
    first("taurep", ({"X": Mask(x)} for x in subsets
                     if sets[x] != frozenset(z for z in sets[t[x]] if not z & ~x)))
    first("restrict", ({"S": Mask(s), "Y": Mask(y), "X": Mask(x)}
                       for x in subsets for s in tab[x] for y in submasks(x)
                       if not s & ~y and sets[y] != frozenset(z for z in sets[x] if not z & ~y)))
    first("interval", ({"S": Mask(s), "T": Mask(tt)}
                       for s in subsets if s in sets[s] for tt in subsets
                       if (s in sets[tt]) != (not s & ~tt and not tt & ~t[s])))
    bad = [p for p in parts.values() if p.violated]
    if bad:
        return Verdict("closure", VIOLATED, witness={"part": bad[0].axiom, **bad[0].witness},
                       ground=gs, parts=parts)
    return Verdict("closure", HOLDS, ground=gs, parts=parts)


# --- bridging -------------------------------------------------------------


def check_bridging(corr: ChoiceCorrespondence, q: int, cap: int = TRIPLE_CAP) -> Verdict:
    """Exchange condition for acceptant correspondences with quota q.

    Every row (X, Y, A, B, i) of the quantifier is listed in ``rows`` with the
    smallest valid j and the full list ``js`` of valid choices.
    """
    acc = check_acceptant_corr(corr, cap)
    if acc.violated or (acc.witness["q"] != q and q < corr.ground.n):
        raise NotAcceptant(f"correspondence is not acceptant with quota {q}")
    tab = _corr_table(corr, cap)
    gs = corr.ground
    rows = []
    for x in gs.subsets():
        for y in submasks(x):
            if popcount(y) < q:
                continue
            for a in tab[x]:
                for b in tab[y]:
                    if (y & a) & ~b:
                        continue
                    for i in bits_of(a & ~b):
                        pool = x & ~(1 << i)
                        cand = (b & ~a) | ((x & ~y) & ~a)
                        js = [j for j in bits_of(cand) if corr.member(pool, (a & ~(1 << i)) | (1 << j))]
                        row = {"X": Mask(x), "Y": Mask(y), "A": Mask(a), "B": Mask(b), "i": Elem(i),
                               "j": Elem(js[0]) if js else None, "js": [Elem(j) for j in js]}
                        if not js:
                            return Verdict("bridging", VIOLATED, witness=row, ground=gs)
                        rows.append(row)
    return Verdict("bridging", HOLDS, ground=gs, rows=rows)


# --- replay ---------------------------------------------------------------


def replay(v: Verdict, obj) -> bool:
    """Re-evaluate a violation witness directly; True if it really fails."""
    w = v.witness
    ax = v.axiom
    if ax in ("PI", "LAD") and "weight" in w:
        from .tiebreak import brute_tiebroken

        def c(s):
            return brute_tiebroken(obj, w["weight"], s)

        x, xp = w["X"], w["Xprime"]
        if ax == "PI":
            return c(x | xp) != c(c(x) | xp)
        return not xp & ~x and popcount(c(xp)) > popcount(c(x))
    if ax in ("PI", "SUB", "IRC", "LAD") and isinstance(obj, ChoiceFunction):
        x, xp = w["X"], w["Xprime"]
        if ax == "PI":
            return obj(x | xp) != obj(obj(x) | xp)
        if ax == "SUB":
            return not xp & ~x and bool(obj(x) & xp & ~obj(xp))
        if ax == "IRC":
            return not xp & ~x and not obj(x) & ~xp and obj(x) != obj(xp)
        return not xp & ~x and popcount(obj(xp)) > popcount(obj(x))
    if ax == "SC1":
        return not any((w["X2"] & w["Z1"]) & ~z2 == 0 for z2 in obj.enumerate(w["X2"]))
    if ax == "SC2":
        return not any((w["X2"] & z1) & ~w["Z2"] == 0 for z1 in obj.enumerate(w["X1"]))
    if ax == "IRC":
        return obj.member(w["X"], w["Y"]) and not obj.member(w["Yprime"], w["Y"])
    if ax == "gmatroid":
        fam = obj if not isinstance(obj, ChoiceCorrespondence) else obj.enumerate(w["pool"])
        members = frozenset(fam)
        x, y, e = w["X"], w["Y"], w["e"]
        opts = [0] + [1 << k for k in bits_of(y & ~x)]
        eb = 1 << e
        return not any((x & ~eb) | f in members and (y | eb) & ~f in members for f in opts)
    if ax in ("ordinal_concave", "mnat"):
        vals = obj.values()
        x, xp, i = w["X"], w["Xprime"], w["i"]
        bi = 1 << i
        for bj in [0] + [1 << j for j in bits_of(xp & ~x)]:
            a, b = vals[(x & ~bi) | bj], vals[(xp | bi) & ~bj]
            if ax == "mnat":
                if lex_add(a, b) >= lex_add(vals[x], vals[xp]):
                    return False
            elif vals[x] < a or vals[xp] < b or (vals[x] == a and vals[xp] == b):
                return False
        return True
    if ax == "size_restricted":
        vals = obj.values()
        x, xp = w["X"], w["Xprime"]
        for i in bits_of(x & ~xp):
            a, b = vals[x & ~(1 << i)], vals[xp | (1 << i)]
            if vals[x] < a or vals[xp] < b or (vals[x] == a and vals[xp] == b):
                return False
        return popcount(x) > popcount(xp)
    raise ValueError(f"no replay rule for axiom {ax!r}")
