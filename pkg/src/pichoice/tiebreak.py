"""Tie-broken choice C^w(X) = the w-heaviest member of C(X).

Three routes are provided: the local-exchange membership test combined with
the Choice/Discard recursion (valid for PI correspondences), an incremental
routine for PI + LAD correspondences, and plain enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .choice import ChoiceCorrespondence, ChoiceFunction
from .core import DEFAULT_CAP, Subset, UMWeight, argmax_weight, bits_of
from .errors import NoValidCandidate, OracleInconsistent

Membership = Callable[[Subset, Subset], bool]


@dataclass
class CallStats:
    membership_calls: int = 0
    candidate_evals: int = 0


def cw_membership(corr: ChoiceCorrespondence, w: UMWeight, x: Subset, y: Subset) -> bool:
    """Is y = C^w(x)?  Checks y in C(x) and that no single exchange improves w."""
    if not corr.member(x, y):
        return False
    wy = w.key(y)
    outside = [None, *bits_of(x & ~y)]
    inside = [None, *bits_of(y)]
    for u in outside:
        for v in inside:
            if u is None and v is None:
                continue
            z = y
            if v is not None:
                z &= ~(1 << v)
            if u is not None:
                z |= 1 << u
            if w.key(z) > wy and corr.member(x, z):
                return False
    return True


def _discard(m: Membership, x: Subset, z: Subset) -> int:
    # iterative form of Discard(X, Z): returns an element outside C(X u Z)
    while True:
        items = list(bits_of(x))
        if not items:
            raise OracleInconsistent("Discard reached an empty argument")
        # C(empty) = empty needs no query
        if z and not m(z, z):
            raise OracleInconsistent("C(Z) != Z inside Discard")
        prefix = 0
        kstar = None
        for i in items:
            nxt = prefix | (1 << i)
            if not m(nxt | z, nxt | z):
                kstar = i
                break
            prefix = nxt
        if kstar is None:
            raise OracleInconsistent("no breaking index in Discard")
        if m(prefix | (1 << kstar) | z, prefix | z):
            return kstar
        x, z = prefix, z | (1 << kstar)


def algorithm1_choice(membership: Membership, x: Subset, stats: CallStats | None = None) -> Subset:
    """C(X) for a PI choice function given only the oracle ``membership(X, Y)``."""
    stats = stats if stats is not None else CallStats()

    def m(a: Subset, b: Subset) -> bool:
        stats.membership_calls += 1
        return membership(a, b)

    cur = x
    while cur and not m(cur, cur):
        cur &= ~(1 << _discard(m, cur, 0))
    return cur


def choose_tiebroken(corr: ChoiceCorrespondence, w: UMWeight, x: Subset,
                     stats: CallStats | None = None, trust_pi: bool | None = None,
                     cap: int = DEFAULT_CAP) -> Subset:
    """C^w(x).  Uses Algorithm 1 when the correspondence is flagged PI,
    otherwise enumerates C(x) and takes the w-argmax."""
    pi = corr.assume_pi if trust_pi is None else trust_pi
    if pi:
        return algorithm1_choice(lambda a, b: cw_membership(corr, w, a, b), x, stats)
    return argmax_weight(corr.enumerate(x, cap), w)


def choose_pi_lad(corr: ChoiceCorrespondence, w: UMWeight, x: Subset,
                  stats: CallStats | None = None) -> Subset:
    """C^w(x) by adding elements one at a time (PI and LAD required)."""
    stats = stats if stats is not None else CallStats()
    y = 0
    pool = 0
    for i in bits_of(x):
        bit = 1 << i
        pool |= bit
        cands = [y, y | bit] + [(y & ~(1 << k)) | bit for k in bits_of(y)]
        valid = []
        for c in cands:
            stats.candidate_evals += 1
            if corr.member(pool, c):
                valid.append(c)
        if not valid:
            raise NoValidCandidate(f"no candidate is chosen from {corr.ground.fmt(pool)}")
        y = argmax_weight(valid, w)
    return y


def brute_tiebroken(corr: ChoiceCorrespondence, w: UMWeight, x: Subset) -> Subset:
    return argmax_weight(corr.enumerate(x), w)


def tiebroken_function(corr: ChoiceCorrespondence, w: UMWeight, method: str = "auto") -> ChoiceFunction:
    """C^w as a tabulated ChoiceFunction."""
    pick = {
        "auto": lambda x: choose_tiebroken(corr, w, x),
        "brute": lambda x: brute_tiebroken(corr, w, x),
        "algorithm1": lambda x: choose_tiebroken(corr, w, x, trust_pi=True),
        "pi_lad": lambda x: choose_pi_lad(corr, w, x),
    }[method]
    table = [pick(x) for x in corr.ground.subsets()]
    return ChoiceFunction(corr.ground, table, name=f"{corr.name}^w")
