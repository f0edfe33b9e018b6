"""Rationalizing utilities.

``rationalize_pi`` builds a utility from the closure operator for PI
correspondences.  ``sarp_check`` decides rationalizability of any
correspondence through the revealed strict order between chosen sets, and
``utility_from_order`` turns an acyclic revealed order into a utility.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .axioms import PAIR_CAP, tau_table
from .choice import ChoiceCorrespondence, UtilityFunction
from .core import GroundSet, Subset, check_cap, popcount, submasks
from .errors import NotPartialOrder, NotPI


def rationalizes(u: UtilityFunction, corr: ChoiceCorrespondence) -> bool:
    """argmax{u(Y) : Y inside X} equals C(X) for every X."""
    vals = u.values()
    best = u.max_table()
    for x in corr.ground.subsets():
        arg = [y for y in submasks(x) if vals[y] == best[x]]
        if arg != corr.enumerate(x):
            return False
    return True


def rationalize_pi(corr: ChoiceCorrespondence, cap: int = PAIR_CAP) -> UtilityFunction:
    """u(X) = |tau(X)| if X is chosen from itself, else |tau(X)| - 1,
    shifted so that u(empty) = 0."""
    check_cap(corr.ground.n, cap)
    t = tau_table(corr, cap)
    raw = [popcount(t[x]) - (0 if corr.member(x, x) else 1) for x in corr.ground.subsets()]
    u = UtilityFunction.from_table(corr.ground, [v - raw[0] for v in raw], name=f"tau-utility({corr.name})")
    if not rationalizes(u, corr):
        raise NotPI("closure-based utility does not rationalize the correspondence")
    return u


@dataclass
class RevealedOrder:
    ground: GroundSet
    gamma: list[Subset]
    classes: list[tuple[Subset, ...]]
    class_of: dict[Subset, int]
    above: np.ndarray  # above[c, d]: class c strictly preferred to class d (transitive)
    corr: ChoiceCorrespondence


@dataclass
class CycleWitness:
    """Sets X_1..X_k with X_i chosen from Z_i, Z_i containing X_i and X_{i+1}
    (indices cyclic), where X_{s+1} is rejected from Z_s at ``strict``."""

    ground: GroundSet
    sets: list[Subset]
    pools: list[Subset]
    strict: int

    def to_json(self) -> dict:
        g = self.ground
        return {
            "status": "not-rationalizable",
            "cycle": [sorted(g.names(x)) for x in self.sets],
            "pools": [sorted(g.names(z)) for z in self.pools],
            "strict_step": self.strict,
        }


def _closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    while True:
        nxt = m | ((m.astype(np.int64) @ m.astype(np.int64)) > 0)
        if (nxt == m).all():
            return m
        m = nxt


def _edges(tab, gamma):
    """Revealed edges X -> Y with their pool Z and strictness, in a fixed order."""
    out = []
    for z, chosen in enumerate(tab):
        cs = set(chosen)
        for x in chosen:
            for y in gamma:
                if y != x and not y & ~z:
                    out.append((x, y, z, y not in cs))
    return out


def _find_cycle(gs, tab, gamma) -> CycleWitness:
    edges = _edges(tab, gamma)
    adj: dict[Subset, list] = {}
    for x, y, z, strict in edges:
        adj.setdefault(x, []).append((y, z))
    for x, y, z, strict in edges:
        if not strict:
            continue
        # shortest path y ~> x closes a cycle through the strict edge
        prev = {y: None}
        dq = deque([y])
        while dq and x not in prev:
            a = dq.popleft()
            for b, zz in adj.get(a, []):
                if b not in prev:
                    prev[b] = (a, zz)
                    dq.append(b)
        if x in prev:
            back = []
            node = x
            while prev[node] is not None:
                a, zz = prev[node]
                back.append((a, zz))
                node = a
            back.reverse()
            sets = [x] + [a for a, _ in back]
            pools = [z] + [zz for _, zz in back]
            return CycleWitness(gs, sets, pools, 0)
    raise AssertionError("reflexive class found but no cycle reconstructed")


def sarp_check(corr: ChoiceCorrespondence, cap: int = PAIR_CAP) -> RevealedOrder | CycleWitness:
    check_cap(corr.ground.n, cap)
    tab = corr.table(cap)
    gs = corr.ground
    gamma = sorted({y for ys in tab for y in ys})
    parent = {g: g for g in gamma}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for ys in tab:
        for y in ys[1:]:
            ra, rb = find(ys[0]), find(y)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[Subset, list] = {}
    for g in gamma:
        groups.setdefault(find(g), []).append(g)
    classes = [tuple(v) for _, v in sorted(groups.items())]
    class_of = {g: k for k, cl in enumerate(classes) for g in cl}
    k = len(classes)
    m = np.zeros((k, k), dtype=bool)
    for z, chosen in enumerate(tab):
        cs = set(chosen)
        for y in gamma:
            if y & ~z or y in cs:
                continue
            for x in chosen:
                m[class_of[x], class_of[y]] = True
    above = _closure(m)
    if above.diagonal().any():
        return _find_cycle(gs, tab, gamma)
    return RevealedOrder(gs, gamma, classes, class_of, above, corr)


def utility_from_order(order: RevealedOrder) -> UtilityFunction:
    """f(X) = number of chosen sets strictly below X in a linear extension,
    -1 for sets never chosen; shifted so that f(empty) = 0."""
    above = order.above
    k = len(order.classes)
    if above.diagonal().any():
        raise NotPartialOrder("revealed relation is not irreflexive")
    if (above & above.T).any():
        raise NotPartialOrder("revealed relation is not asymmetric")
    placed: list[int] = []
    done = np.zeros(k, dtype=bool)
    while len(placed) < k:
        # a class is ready once everything it beats is placed; ties by smallest member
        ready = [c for c in range(k) if not done[c] and not (above[c] & ~done).any()]
        c = min(ready, key=lambda c: order.classes[c][0])
        placed.append(c)
        done[c] = True
    level = {}
    below = 0
    for c in placed:
        level[c] = below
        below += len(order.classes[c])
    raw = [level[order.class_of[x]] if x in order.class_of else -1
           for x in order.ground.subsets()]
    u = UtilityFunction.from_table(order.ground, [v - raw[0] for v in raw], name="revealed-order utility")
    if not rationalizes(u, order.corr):
        raise AssertionError("order-based utility failed its post-check")
    return u
