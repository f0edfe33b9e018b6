"""Ground sets, bitmask subsets, lexicographic values and UM weights.

Subsets are plain ``int`` bitmasks: bit ``k`` stands for the k-th element of
the ground set.  Set algebra is therefore ``|``, ``&`` and ``& ~``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import CapExceeded, EmptyFamily

Subset = int
Rat = Fraction

MAX_GROUND = 30
DEFAULT_CAP = 12
UM_CAP = 20


def popcount(x: Subset) -> int:
    return x.bit_count()


def bits_of(x: Subset) -> Iterator[int]:
    """Indices of the set bits of x, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def submasks(x: Subset) -> list[Subset]:
    """All subsets of x in ascending bitmask order."""
    out = []
    s = x
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & x
    out.reverse()
    return out


def add(x: Subset, i: int | None) -> Subset:
    """X + i, with X + None = X."""
    return x if i is None else x | (1 << i)


def remove(x: Subset, i: int | None) -> Subset:
    return x if i is None else x & ~(1 << i)


def check_cap(n: int, cap: int, what: str = "ground set") -> None:
    if n > cap:
        raise CapExceeded(f"{what} has {n} elements, cap is {cap}")


@dataclass(frozen=True)
class GroundSet:
    elements: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, elements: Iterable[str]):
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise ValueError("ground set names must be unique")
        if len(elements) > MAX_GROUND:
            raise CapExceeded(f"ground set of size {len(elements)} exceeds {MAX_GROUND}")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_index", {e: k for k, e in enumerate(elements)})

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> Subset:
        return (1 << self.n) - 1

    def __len__(self) -> int:
        return self.n

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    def mask(self, names: Iterable[str]) -> Subset:
        m = 0
        for e in names:
            m |= 1 << self.index(e)
        return m

    def names(self, x: Subset) -> tuple[str, ...]:
        return tuple(self.elements[k] for k in bits_of(x))

    def key(self, x: Subset) -> str:
        """Sorted comma-joined key used by the JSON formats."""
        return ",".join(sorted(self.names(x)))

    def parse_key(self, key: str) -> Subset:
        key = key.strip()
        if not key:
            return 0
        return self.mask(p.strip() for p in key.split(","))

    def fmt(self, x: Subset) -> str:
        return "{" + ",".join(self.names(x)) + "}"

    def subsets(self) -> range:
        return range(1 << self.n)


# --- lexicographic values -------------------------------------------------


class _NegInf:
    """Bottom element below every tuple value."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "NEG_INF"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("NEG_INF")

    def __lt__(self, other) -> bool:
        return other is not self

    def __le__(self, other) -> bool:
        return True

    def __gt__(self, other) -> bool:
        return False

    def __ge__(self, other) -> bool:
        return other is self

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()
LexValue = Union[_NegInf, tuple]


def is_finite(v: LexValue) -> bool:
    return v is not NEG_INF


def lex(*parts) -> tuple:
    """Build a tuple value with every component coerced to Fraction."""
    return tuple(Fraction(p) for p in parts)


def zero(arity: int) -> tuple:
    return tuple(Fraction(0) for _ in range(arity))


def lex_add(a: LexValue, b: LexValue) -> LexValue:
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    if len(a) != len(b):
        raise ValueError("lex values of different arity")
    return tuple(x + y for x, y in zip(a, b))


# --- weights --------------------------------------------------------------


@dataclass(frozen=True)
class UMWeight:
    """Additive weight over a ground set with exact rational entries.

    ``verified`` records that all subset sums are known to be distinct.
    Comparisons go through integer-scaled values, see :meth:`key`.
    """

    ground: GroundSet
    values: tuple[Fraction, ...]
    verified: bool = False
    _scaled: tuple = field(init=False, repr=False, compare=False, hash=False)
    _scale: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != self.ground.n:
            raise ValueError("one weight per element required")
        object.__setattr__(self, "values", vals)
        scale = 1
        for v in vals:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
        object.__setattr__(self, "_scale", scale)
        object.__setattr__(self, "_scaled", tuple(int(v * scale) for v in vals))
        object.__setattr__(self, "_table", None)

    @classmethod
    def of(cls, ground: GroundSet, values, check: bool = True) -> "UMWeight":
        """Build from a sequence or a name->value mapping, checking UM-ness."""
        if isinstance(values, dict):
            values = [values[e] for e in ground.elements]
        w = cls(ground, tuple(values))
        if check:
            if not is_um(w):
                raise ValueError("weight is not unique-maximizing")
            w = cls(ground, w.values, verified=True)
        return w

    @property
    def scaled(self) -> tuple[int, ...]:
        """Per-element integers proportional to the weights."""
        return self._scaled

    def __call__(self, x: Subset) -> Fraction:
        return Fraction(self.key(x), self._scale)

    def key(self, x: Subset) -> int:
        """Integer proportional to w(x); use it for fast comparisons."""
        t = self.table()
        if t is not None:
            return t[x]
        s = self._scaled
        return sum(s[k] for k in bits_of(x))

    def table(self) -> list[int] | None:
        """Scaled subset sums over all 2^n masks (None above 20 elements)."""
        t = self.__dict__.get("_table")
        if t is None and self.ground.n <= UM_CAP:
            s = self._scaled
            t = [0] * (1 << self.ground.n)
            for m in range(1, len(t)):
                low = m & -m
                t[m] = t[m ^ low] + s[low.bit_length() - 1]
            object.__setattr__(self, "_table", t)
        return t

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.ground.elements, self.values))

    def to_json(self) -> dict[str, str]:
        return {e: str(v) for e, v in zip(self.ground.elements, self.values)}

    def __repr__(self) -> str:
        return "UMWeight(" + ", ".join(f"{e}={v}" for e, v in self.as_dict().items()) + ")"


def _sign(s) -> int:
    if s in (1, "+", True):
        return 1
    if s in (-1, "-", False):
        return -1
    raise ValueError(f"bad sign {s!r}")


def canonical_weight(gs: GroundSet, order: Sequence, signs: Sequence) -> UMWeight:
    """Weight giving the j-th element of ``order`` the value +-2^-j.

    ``order`` lists element names (or indices); ``signs`` holds +1/-1 or
    '+'/'-' per rank.  Distinct powers of two make every subset sum distinct.
    """
    n = gs.n
    idx = [gs.index(o) if isinstance(o, str) else int(o) for o in order]
    if sorted(idx) != list(range(n)) or len(signs) != n:
        raise ValueError("order must be a permutation and signs one per element")
    vals = [Fraction(0)] * n
    for j, (k, s) in enumerate(zip(idx, signs), start=1):
        vals[k] = Fraction(_sign(s), 2 ** j)
    return UMWeight(gs, tuple(vals), verified=True)


def is_um(w: UMWeight, cap: int = UM_CAP) -> bool:
    """True iff all 2^n subset sums of w are pairwise distinct."""
    check_cap(w.ground.n, cap)
    sums = sorted(w.table())
    return all(a != b for a, b in zip(sums, sums[1:]))


def argmax_weight(family: Iterable[Subset], w: UMWeight) -> Subset:
    best = None
    best_key = None
    tie = False
    for y in family:
        k = w.key(y)
        if best is None or k > best_key:
            best, best_key, tie = y, k, False
        elif k == best_key and y != best:
            tie = True
    if best is None:
        raise EmptyFamily("argmax over an empty family")
    if tie:
        raise ValueError("weight ties on this family; weight is not UM")
    return best


def random_um_weight(gs: GroundSet, rng: random.Random) -> UMWeight:
    """Uniform integers in [-2^(2n), 2^(2n)], redrawn until UM."""
    bound = 2 ** (2 * gs.n)
    while True:
        vals = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(gs.n))
        w = UMWeight(gs, vals)
        if is_um(w):
            return UMWeight(gs, vals, verified=True)


def positive_weight(gs: GroundSet, order: Sequence | None = None) -> UMWeight:
    """All-positive canonical weight; default order is the ground order."""
    order = list(gs.elements) if order is None else list(order)
    return canonical_weight(gs, order, [1] * gs.n)
