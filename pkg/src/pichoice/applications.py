"""Utility builders for common school-choice policies.

Every "sufficiently small epsilon" construction is written as a lexicographic
tuple, so the leading component dominates exactly.  Builders return
:class:`UtilityFunction` objects; :func:`corr` wraps one into a choice
correspondence flagged PI and LAD (all builders here except ``committee`` and
``capacity_constrained`` produce M-natural concave utilities).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .choice import ChoiceFunction, UnionOfFunctions, UtilityBacked, UtilityFunction
from .core import NEG_INF, GroundSet, Subset, bits_of, popcount
from .errors import CapExceeded, NonPositiveValue, OverlappingTypes, ReserveOverflow

COMMITTEE_CAP = 10_000


def _values(ground: GroundSet, values: Mapping[str, object] | Sequence | None,
            positive: bool = False) -> list[Fraction]:
    if values is None:
        vals = [Fraction(1)] * ground.n
    elif isinstance(values, Mapping):
        vals = [Fraction(values[e]) for e in ground.elements]
    else:
        vals = [Fraction(v) for v in values]
    if len(vals) != ground.n:
        raise ValueError("one value per student required")
    if positive and any(v <= 0 for v in vals):
        raise NonPositiveValue("valuations must be strictly positive")
    return vals


def _vsum(vals: list[Fraction], x: Subset) -> Fraction:
    return sum((vals[k] for k in bits_of(x)), Fraction(0))


def corr(u: UtilityFunction, pi: bool = True, lad: bool = True, name: str = "") -> UtilityBacked:
    return UtilityBacked(u, name=name or u.name, assume_pi=pi, assume_lad=lad)


# --- matroids -------------------------------------------------------------


def transversal_rank(adjacency: Mapping[int, Iterable], x: Subset) -> int:
    """Maximum matching size from the left vertices in x (augmenting paths)."""
    owner: dict = {}

    def augment(i: int, seen: set) -> bool:
        for p in adjacency.get(i, ()):
            if p in seen:
                continue
            seen.add(p)
            if p not in owner or augment(owner[p], seen):
                owner[p] = i
                return True
        return False

    return sum(1 for i in bits_of(x) if augment(i, set()))


def is_laminar(sets: Iterable[Subset]) -> bool:
    sets = list(sets)
    for a, b in itertools.combinations(sets, 2):
        if a & b and (a & ~b) and (b & ~a):
            return False
    return True


@dataclass(frozen=True)
class Matroid:
    """Independence oracle with a constructor tag."""

    ground: GroundSet
    kind: str
    independent: Callable[[Subset], bool] = field(compare=False)
    params: tuple = ()

    def __call__(self, x: Subset) -> bool:
        return self.independent(x)

    @classmethod
    def uniform(cls, ground: GroundSet, q: int) -> "Matroid":
        return cls(ground, "uniform", lambda x: popcount(x) <= q, (q,))

    @classmethod
    def laminar(cls, ground: GroundSet, caps: Sequence[tuple[Subset, int]]) -> "Matroid":
        caps = tuple((int(s), int(c)) for s, c in caps)
        if not is_laminar(s for s, _ in caps):
            raise ValueError("capacity sets are not laminar")
        return cls(ground, "laminar", _cap_oracle(caps), caps)

    @classmethod
    def transversal(cls, ground: GroundSet, adjacency: Mapping[int, Iterable]) -> "Matroid":
        adj = {int(k): tuple(v) for k, v in adjacency.items()}
        return cls(ground, "transversal", lambda x: transversal_rank(adj, x) == popcount(x),
                   tuple(sorted(adj.items())))


def _cap_oracle(caps):
    return lambda x: all(popcount(x & s) <= c for s, c in caps)


def weighted_matroid_utility(matroid: Matroid, values=None) -> UtilityFunction:
    """v(X) on independent sets, -inf elsewhere."""
    vals = _values(matroid.ground, values)
    return UtilityFunction(
        matroid.ground,
        lambda x: (_vsum(vals, x),) if matroid(x) else NEG_INF,
        name=f"weighted-{matroid.kind}",
    )


def capacity_constrained(ground: GroundSet, caps: Sequence[tuple[Subset, int]], values=None) -> UtilityFunction:
    """v(X) subject to |X n S| <= c for arbitrary (possibly crossing) sets S.

    Not a matroid in general, hence not flagged PI by default."""
    vals = _values(ground, values)
    ok = _cap_oracle(tuple(caps))
    return UtilityFunction(ground, lambda x: (_vsum(vals, x),) if ok(x) else NEG_INF,
                           name="capacity-constrained")


def laminar_concave(ground: GroundSet, terms: Sequence[tuple[Subset, Sequence]], check: bool = True) -> UtilityFunction:
    """Sum of phi_L(|X n L|).  ``phi`` is a value table indexed by the count;
    counts beyond the table give -inf."""
    terms = [(int(s), [Fraction(v) for v in phi]) for s, phi in terms]
    if check:
        if not is_laminar(s for s, _ in terms):
            raise ValueError("family is not laminar")
        for s, phi in terms:
            if not phi or phi[0] != 0:
                raise ValueError("phi(0) must be 0")
            steps = [b - a for a, b in zip(phi, phi[1:])]
            if any(b > a for a, b in zip(steps, steps[1:])):
                raise ValueError("phi must be concave")

    def u(x: Subset):
        total = Fraction(0)
        for s, phi in terms:
            k = popcount(x & s)
            if k >= len(phi):
                return NEG_INF
            total += phi[k]
        return (total,)

    return UtilityFunction(ground, u, name="laminar-concave")


# --- school-choice policies -----------------------------------------------


@dataclass
class TypeStructure:
    """Student types with per-type bounds.  Members are element names."""

    types: dict[str, frozenset]
    lower: dict[str, int] = field(default_factory=dict)
    upper: dict[str, int] = field(default_factory=dict)
    reserves: dict[str, int] = field(default_factory=dict)

    def masks(self, ground: GroundSet) -> dict[str, Subset]:
        return {t: ground.mask(m) for t, m in self.types.items()}

    def check_partition(self, ground: GroundSet) -> dict[str, Subset]:
        masks = self.masks(ground)
        seen = 0
        for m in masks.values():
            if seen & m:
                raise OverlappingTypes("types must be disjoint")
            seen |= m
        if seen != ground.full:
            raise OverlappingTypes("types must cover every student")
        return masks


def responsive(ground: GroundSet, q: int, values=None) -> UtilityFunction:
    vals = _values(ground, values, positive=True)
    return UtilityFunction(
        ground, lambda x: (_vsum(vals, x),) if popcount(x) <= q else NEG_INF, name=f"responsive(q={q})"
    )


def controlled_choice(ground: GroundSet, q: int, types: TypeStructure, values=None) -> UtilityFunction:
    """(|X|, sum_t min(|X_t|, lower_t) + min(|X_t|, upper_t), v(X)) under |X| <= q."""
    vals = _values(ground, values, positive=True)
    masks = types.check_partition(ground)
    if sum(types.lower.get(t, 0) for t in masks) > q:
        raise ReserveOverflow("sum of lower bounds exceeds capacity")
    lo = {t: types.lower.get(t, 0) for t in masks}
    hi = {t: types.upper.get(t, q) for t in masks}

    def u(x: Subset):
        if popcount(x) > q:
            return NEG_INF
        mid = 0
        for t, m in masks.items():
            k = popcount(x & m)
            mid += min(k, lo[t]) + min(k, hi[t])
        return (popcount(x), mid, _vsum(vals, x))

    return UtilityFunction(ground, u, name=f"controlled(q={q})")


def edcr(ground: GroundSet, q: int, types: TypeStructure, values=None) -> UtilityFunction:
    """(|X|, sum_t r_t^2 - sum_t (r_t - |X_t|)^2, v(X)) under |X| <= q.

    The alternative expansion -sum|X_t|^2 + 2 sum_i r_t(i) is compared
    against it on every subset at construction."""
    vals = _values(ground, values, positive=True)
    masks = types.check_partition(ground)
    r = {t: types.reserves.get(t, 0) for t in masks}
    if sum(r.values()) > q:
        raise ReserveOverflow("sum of reserves exceeds capacity")
    base = sum(v * v for v in r.values())

    def u(x: Subset):
        if popcount(x) > q:
            return NEG_INF
        mid = base - sum((r[t] - popcount(x & m)) ** 2 for t, m in masks.items())
        return (popcount(x), mid, _vsum(vals, x))

    def expanded(x: Subset):
        if popcount(x) > q:
            return NEG_INF
        mid = -sum(popcount(x & m) ** 2 for m in masks.values())
        mid += sum(2 * r[t] * popcount(x & m) for t, m in masks.items())
        return (popcount(x), mid, _vsum(vals, x))

    uf = UtilityFunction(ground, u, name=f"edcr(q={q})")
    alt = UtilityFunction(ground, expanded)
    if uf.values() != alt.values():
        raise AssertionError("EDCR expansions disagree")
    return uf


def reserve_graph(ground: GroundSet, types: TypeStructure) -> dict[int, list]:
    """Student index -> reserve seats (t, k) of every type the student has."""
    adj: dict[int, list] = {k: [] for k in range(ground.n)}
    for t, members in types.types.items():
        seats = [(t, k) for k in range(types.reserves.get(t, 0))]
        for e in members:
            adj[ground.index(e)].extend(seats)
    return adj


def overlapping_reserves(ground: GroundSet, q: int, types: TypeStructure, values=None) -> UtilityFunction:
    """(reserve utilization, v(X)) under |X| <= q; types may overlap and each
    student fills at most one reserve seat."""
    vals = _values(ground, values, positive=True)
    if any(v < 0 for v in types.reserves.values()):
        raise ReserveOverflow("reserves must be nonnegative")
    if sum(types.reserves.values()) > q:
        raise ReserveOverflow("sum of reserves exceeds capacity")
    adj = reserve_graph(ground, types)
    return UtilityFunction(
        ground,
        lambda x: (transversal_rank(adj, x), _vsum(vals, x)) if popcount(x) <= q else NEG_INF,
        name=f"overlapping(q={q})",
    )


def meritorious_horizontal(ground: GroundSet, q: int, types: TypeStructure,
                           priority: Sequence[str]) -> ChoiceFunction:
    """Two-stage reference procedure under a strict priority list."""
    adj = reserve_graph(ground, types)
    order = [ground.index(e) for e in priority]

    def choose(x: Subset) -> Subset:
        first = 0
        for i in order:
            if x >> i & 1 and transversal_rank(adj, first | 1 << i) == popcount(first) + 1:
                first |= 1 << i
        out = first
        for i in order:
            if popcount(out) >= q:
                break
            if x >> i & 1:
                out |= 1 << i
        return out

    return ChoiceFunction(ground, choose, name="meritorious-horizontal")


def committee_function(ground: GroundSet, q: int, referees: Mapping[str, Sequence[str]],
                       pi: Sequence[str]) -> ChoiceFunction:
    """Seat l goes to referee pi[l]'s favourite among those still available."""
    orders = {h: [ground.index(e) for e in order] for h, order in referees.items()}
    for h, order in orders.items():
        if sorted(order) != list(range(ground.n)):
            raise ValueError(f"referee {h} must rank every student exactly once")

    def choose(x: Subset) -> Subset:
        out = 0
        for h in pi[: min(q, popcount(x))]:
            for i in orders[h]:
                if x >> i & 1 and not out >> i & 1:
                    out |= 1 << i
                    break
        return out

    return ChoiceFunction(ground, choose, name="committee(" + ",".join(pi) + ")")


def committee(ground: GroundSet, q: int, referees: Mapping[str, Sequence[str]],
              pi_set: str | Sequence[Sequence[str]] = "all", name: str = "committee") -> UnionOfFunctions:
    """Union of the committee choice functions over the allowed assignments."""
    if pi_set == "all":
        if len(referees) ** q > COMMITTEE_CAP:
            raise CapExceeded(f"{len(referees)}^{q} referee assignments")
        pis = list(itertools.product(sorted(referees), repeat=q))
    else:
        pis = [tuple(p) for p in pi_set]
        for p in pis:
            if len(p) != q or any(h not in referees for h in p):
                raise ValueError(f"bad referee assignment {p}")
    fs = [committee_function(ground, q, referees, p) for p in pis]
    return UnionOfFunctions(fs, name=name)
