"""Choice functions, utilities and choice correspondences.

A correspondence answers membership queries ``member(X, Y)`` ("is Y one of the
best subsets of X?") and can enumerate its choice family at desk scale.
Four backings are provided: an explicit table, a utility function, a union of
choice functions, and a fixed feasible family.
"""
from __future__ import annotations

import copy
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .core import (
    DEFAULT_CAP,
    NEG_INF,
    GroundSet,
    LexValue,
    Subset,
    check_cap,
    popcount,
    submasks,
)
from .errors import InvalidTable


def as_lex(v) -> LexValue:
    """Normalize a number, tuple, None or NEG_INF into a LexValue."""
    if v is None or v is NEG_INF:
        return NEG_INF
    if isinstance(v, tuple):
        return tuple(Fraction(p) for p in v)
    return (Fraction(v),)


class UtilityFunction:
    """Set function u: 2^I -> LexValue with u(empty) the zero tuple."""

    def __init__(self, ground: GroundSet, fn: Callable[[Subset], object], name: str = "",
                 cap: int = DEFAULT_CAP):
        check_cap(ground.n, cap)
        self.ground = ground
        self.name = name
        self._values = [as_lex(fn(x)) for x in ground.subsets()]
        base = self._values[0]
        if base is NEG_INF or any(c != 0 for c in base):
            raise ValueError("u(empty set) must be the zero tuple")
        self.arity = len(base)
        for v in self._values:
            if v is not NEG_INF and len(v) != self.arity:
                raise ValueError("utility values must share one arity")
        self._max = None

    @classmethod
    def from_table(cls, ground: GroundSet, values: Sequence, name: str = "") -> "UtilityFunction":
        return cls(ground, lambda x: values[x], name=name)

    def __call__(self, x: Subset) -> LexValue:
        return self._values[x]

    def values(self) -> list:
        return list(self._values)

    def max_table(self) -> list:
        """max_u over all subsets, by the subset DP."""
        if self._max is None:
            m = list(self._values)
            for x in range(1, len(m)):
                best = m[x]
                y = x
                while y:
                    low = y & -y
                    cand = m[x ^ low]
                    if cand > best:
                        best = cand
                    y ^= low
                m[x] = best
            self._max = m
        return self._max

    def __repr__(self) -> str:
        return f"UtilityFunction({self.name or '?'}, n={self.ground.n})"


def max_utility(u: UtilityFunction, x: Subset) -> LexValue:
    return u.max_table()[x]


class ChoiceFunction:
    """Single-valued choice rule with C(X) a subset of X."""

    def __init__(self, ground: GroundSet, choose: Callable[[Subset], Subset] | Sequence[Subset],
                 name: str = ""):
        self.ground = ground
        self.name = name
        if callable(choose):
            self._fn = choose
            self._table = None
        else:
            self._table = list(choose)
            if len(self._table) != 1 << ground.n:
                raise ValueError("choice table must cover every subset")
            self._fn = self._table.__getitem__

    def __call__(self, x: Subset) -> Subset:
        return self._fn(x)

    def table(self, cap: int = DEFAULT_CAP) -> list[Subset]:
        if self._table is None:
            check_cap(self.ground.n, cap)
            t = [self._fn(x) for x in self.ground.subsets()]
            for x, y in enumerate(t):
                if y & ~x:
                    raise ValueError(f"choice {self.ground.fmt(y)} not inside {self.ground.fmt(x)}")
            if t[0] != 0:
                raise ValueError("C(empty) must be empty")
            self._table = t
        return self._table


class ChoiceCorrespondence:
    """Base class.  Subclasses implement ``member`` and ``_choices``.

    ``assume_pi`` / ``assume_lad`` are caller assertions (for instance from a
    builder whose utility is known to be M-natural concave).  They only switch
    on fast algorithms; verifiers never read them.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet, name: str = "", assume_pi: bool = False,
                 assume_lad: bool = False):
        self.ground = ground
        self.name = name
        self.assume_pi = assume_pi
        self.assume_lad = assume_lad
        self._cache: dict[Subset, tuple[Subset, ...]] = {}

    def member(self, x: Subset, y: Subset) -> bool:
        raise NotImplementedError

    def _choices(self, x: Subset) -> tuple[Subset, ...]:
        return tuple(y for y in submasks(x) if self.member(x, y))

    def enumerate(self, x: Subset, cap: int = DEFAULT_CAP) -> list[Subset]:
        """C(X) in ascending bitmask order."""
        got = self._cache.get(x)
        if got is None:
            check_cap(popcount(x), cap, "pool")
            got = self._choices(x)
            self._cache[x] = got
        return list(got)

    def table(self, cap: int = DEFAULT_CAP) -> list[list[Subset]]:
        check_cap(self.ground.n, cap)
        return [self.enumerate(x) for x in self.ground.subsets()]

    def flagged(self, pi: bool = True, lad: bool | None = None) -> "ChoiceCorrespondence":
        c = copy.copy(self)
        c.assume_pi = pi
        if lad is not None:
            c.assume_lad = lad
        return c

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name or '?'}, n={self.ground.n})"


class ExplicitTable(ChoiceCorrespondence):
    kind = "explicit"

    def __init__(self, ground: GroundSet, table: Mapping[Subset, Iterable[Subset]], **kw):
        super().__init__(ground, **kw)
        rows: dict[Subset, tuple[Subset, ...]] = {}
        for x in ground.subsets():
            if x not in table:
                raise InvalidTable(f"no entry for {ground.fmt(x)}")
            ys = sorted(set(table[x]))
            if not ys:
                raise InvalidTable(f"empty choice family at {ground.fmt(x)}")
            for y in ys:
                if y & ~x:
                    raise InvalidTable(f"{ground.fmt(y)} is not a subset of {ground.fmt(x)}")
            rows[x] = tuple(ys)
        extra = set(table) - set(rows)
        if extra:
            raise InvalidTable("table has entries outside the ground set")
        self._rows = rows
        self._sets = {x: frozenset(ys) for x, ys in rows.items()}
        self._cache = dict(rows)

    def member(self, x: Subset, y: Subset) -> bool:
        return y in self._sets[x]

    def _choices(self, x: Subset) -> tuple[Subset, ...]:
        return self._rows[x]


class UtilityBacked(ChoiceCorrespondence):
    """C(X) = argmax of u over subsets of X."""

    kind = "utility"

    def __init__(self, u: UtilityFunction, **kw):
        kw.setdefault("name", u.name)
        super().__init__(u.ground, **kw)
        self.utility = u
        self._vals = u.values()
        self._maxv = u.max_table()

    def member(self, x: Subset, y: Subset) -> bool:
        if y & ~x:
            return False
        v = self._vals[y]
        return v is not NEG_INF and v == self._maxv[x]


class UnionOfFunctions(ChoiceCorrespondence):
    kind = "union"

    def __init__(self, functions: Sequence[ChoiceFunction], **kw):
        if not functions:
            raise ValueError("need at least one choice function")
        ground = functions[0].ground
        if any(f.ground != ground for f in functions):
            raise ValueError("functions must share a ground set")
        super().__init__(ground, **kw)
        self.functions = list(functions)

    def member(self, x: Subset, y: Subset) -> bool:
        return y in self._choices_cached(x)

    def _choices_cached(self, x: Subset) -> tuple[Subset, ...]:
        got = self._cache.get(x)
        if got is None:
            got = self._choices(x)
            self._cache[x] = got
        return got

    def _choices(self, x: Subset) -> tuple[Subset, ...]:
        return tuple(sorted({f(x) for f in self.functions}))


class FeasibleFamily(ChoiceCorrespondence):
    """C(X) = every member of a fixed family that fits inside X."""

    kind = "feasible_family"

    def __init__(self, ground: GroundSet, family: Iterable[Subset], **kw):
        super().__init__(ground, **kw)
        self.family = frozenset(family)
        if 0 not in self.family:
            raise InvalidTable("feasible family must contain the empty set")

    def member(self, x: Subset, y: Subset) -> bool:
        return not (y & ~x) and y in self.family


def union_of_functions(fs: Sequence[ChoiceFunction], **kw) -> UnionOfFunctions:
    return UnionOfFunctions(fs, **kw)


def materialize(corr: ChoiceCorrespondence, cap: int = DEFAULT_CAP) -> ExplicitTable:
    """Freeze any correspondence into an explicit table."""
    t = corr.table(cap)
    return ExplicitTable(corr.ground, dict(enumerate(t)), name=corr.name,
                         assume_pi=corr.assume_pi, assume_lad=corr.assume_lad)


def from_names(ground: GroundSet, rows: Mapping[str, Iterable[Iterable[str]]], **kw) -> ExplicitTable:
    """Explicit table from name keys, e.g. {"a,b": [["a"], ["b"]]}."""
    table = {}
    for key, fam in rows.items():
        table[ground.parse_key(key)] = [ground.mask(y) for y in fam]
    return ExplicitTable(ground, table, **kw)
