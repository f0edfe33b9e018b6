"""Many-to-one matching markets with choice correspondences on the school side.

Stability, maximality, cumulative-offer deferred acceptance, the chain
procedure that lifts a stable matching to a maximal one, the exchange graph
with shortest improvement cycles, and a brute-force efficiency oracle.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .axioms import HOLDS, VIOLATED, Elem, Mask, Verdict, extendable_element
from .choice import ChoiceCorrespondence
from .core import GroundSet, Subset, UMWeight, bits_of, canonical_weight, check_cap, positive_weight, submasks
from .errors import CapExceeded, InvalidCycle, NotPI, NotStableInput, UnknownId
from .tiebreak import choose_tiebroken

ORACLE_MAX_STUDENTS = 6
ORACLE_MAX_SCHOOLS = 4


class Market:
    """Students with strict preference lists over acceptable schools, and one
    choice correspondence (over students) per school."""

    def __init__(self, students: GroundSet | Sequence[str], schools: Sequence[str],
                 prefs: Mapping[str, Sequence[str]],
                 corr: Mapping[str, ChoiceCorrespondence] | Sequence[ChoiceCorrespondence],
                 name: str = ""):
        self.students = students if isinstance(students, GroundSet) else GroundSet(students)
        self.schools = tuple(schools)
        self.name = name
        if len(set(self.schools)) != len(self.schools):
            raise ValueError("duplicate school names")
        self._sidx = {s: k for k, s in enumerate(self.schools)}
        pl = []
        for i in self.students.elements:
            lst = list(prefs.get(i, ()))
            for s in lst:
                if s not in self._sidx:
                    raise UnknownId(f"student {i} ranks unknown school {s}")
            if len(set(lst)) != len(lst):
                raise ValueError(f"preference list of {i} repeats a school")
            pl.append(tuple(self._sidx[s] for s in lst))
        extra = set(prefs) - set(self.students.elements)
        if extra:
            raise UnknownId(f"preferences for unknown students {sorted(extra)}")
        self.prefs = tuple(pl)
        self._rank = [{s: r for r, s in enumerate(p)} for p in self.prefs]
        if isinstance(corr, Mapping):
            missing = [s for s in self.schools if s not in corr]
            if missing:
                raise UnknownId(f"no choice correspondence for {missing}")
            self.corr = tuple(corr[s] for s in self.schools)
        else:
            self.corr = tuple(corr)
        if len(self.corr) != len(self.schools):
            raise ValueError("one correspondence per school is required")
        for c in self.corr:
            if c.ground != self.students:
                raise ValueError("school correspondences must range over the student set")

    @property
    def n_students(self) -> int:
        return self.students.n

    @property
    def n_schools(self) -> int:
        return len(self.schools)

    def school_index(self, name: str) -> int:
        try:
            return self._sidx[name]
        except KeyError:
            raise UnknownId(f"unknown school {name!r}") from None

    def rank(self, i: int, s: int | None) -> int:
        """Position of s in i's list; unmatched ranks just below every
        acceptable school and unacceptable schools rank below unmatched."""
        p = self._rank[i]
        if s is None:
            return len(p)
        return p.get(s, len(p) + 1)

    def prefers(self, i: int, s: int | None, t: int | None) -> bool:
        return self.rank(i, s) < self.rank(i, t)

    def school_name(self, s: int | None):
        return None if s is None else self.schools[s]

    def __repr__(self) -> str:
        return f"Market({self.name or '?'}, {self.n_students} students, {self.n_schools} schools)"


@dataclass(frozen=True)
class Matching:
    """assignment[i] is a school index or None."""

    assignment: tuple

    def school_of(self, i: int) -> int | None:
        return self.assignment[i]

    def roster(self, s: int) -> Subset:
        m = 0
        for i, t in enumerate(self.assignment):
            if t == s:
                m |= 1 << i
        return m

    def moved(self, i: int, s: int | None) -> "Matching":
        a = list(self.assignment)
        a[i] = s
        return Matching(tuple(a))

    @classmethod
    def empty(cls, market: Market) -> "Matching":
        return cls((None,) * market.n_students)

    @classmethod
    def from_pairs(cls, market: Market, pairs: Iterable[tuple[str, str]]) -> "Matching":
        a: list = [None] * market.n_students
        for i, s in pairs:
            k = market.students.index(i)
            if a[k] is not None:
                raise ValueError(f"student {i} appears in two pairs")
            a[k] = market.school_index(s)
        return cls(tuple(a))

    @classmethod
    def from_json(cls, market: Market, data: Mapping) -> "Matching":
        asg = data.get("assignment", data)
        a: list = [None] * market.n_students
        for i, s in asg.items():
            a[market.students.index(i)] = None if s is None else market.school_index(s)
        return cls(tuple(a))

    def to_json(self, market: Market) -> dict:
        return {"assignment": {market.students.elements[i]: market.school_name(s)
                               for i, s in enumerate(self.assignment)}}

    def pairs(self, market: Market) -> list[tuple[str, str]]:
        return [(market.students.elements[i], market.schools[s])
                for i, s in enumerate(self.assignment) if s is not None]


def weak_pool(market: Market, mu: Matching, s: int) -> Subset:
    """Students who like s at least as much as their current assignment."""
    m = 0
    for i in range(market.n_students):
        if market.rank(i, s) <= market.rank(i, mu.assignment[i]):
            m |= 1 << i
    return m


def strict_pool(market: Market, mu: Matching, s: int) -> Subset:
    m = 0
    for i in range(market.n_students):
        if market.prefers(i, s, mu.assignment[i]):
            m |= 1 << i
    return m


def _names(market: Market, x: Subset) -> list[str]:
    return sorted(market.students.names(x))


def is_stable(market: Market, mu: Matching, fast: bool = False, cap: int = 12) -> Verdict:
    """Individual rationality plus no blocking coalition.

    The coalition check is exhaustive over subsets of the strict preferrers.
    ``fast`` tests only the full strict-preferrer set, which suffices when
    every school correspondence is PI.
    """
    gs = market.students
    for i, s in enumerate(mu.assignment):
        if s is not None and s not in market._rank[i]:
            return Verdict("stable", VIOLATED, {"kind": "individual_rationality", "student": Elem(i)}, ground=gs)
    for s in range(market.n_schools):
        c = market.corr[s]
        r = mu.roster(s)
        strict = strict_pool(market, mu, s)
        check_cap(bin(strict).count("1"), cap, "strict-preferrer pool")
        for x in ([strict] if fast else submasks(strict)):
            if not c.member(r | x, r):
                return Verdict("stable", VIOLATED, {"kind": "blocking_coalition", "school": market.schools[s],
                                                    "X": Mask(x), "pool": Mask(r | x)}, ground=gs)
    return Verdict("stable", HOLDS, ground=gs)


def _max_size(corr: ChoiceCorrespondence, x: Subset) -> int:
    return max(bin(y).count("1") for y in corr.enumerate(x))


def is_maximal(market: Market, mu: Matching) -> bool:
    """Every roster has the largest size choosable from its weak pool."""
    for s in range(market.n_schools):
        if bin(mu.roster(s)).count("1") != _max_size(market.corr[s], weak_pool(market, mu, s)):
            return False
    return True


def pareto_dominates(market: Market, a: Matching, b: Matching) -> bool:
    """a weakly better for every student and strictly better for one."""
    strict = False
    for i in range(market.n_students):
        ra, rb = market.rank(i, a.assignment[i]), market.rank(i, b.assignment[i])
        if ra > rb:
            return False
        strict |= ra < rb
    return strict


# --- deferred acceptance --------------------------------------------------


def _resolve_weights(market: Market, weights) -> list[UMWeight]:
    if weights is None:
        return [positive_weight(market.students) for _ in market.schools]
    if isinstance(weights, Mapping):
        return [weights[s] if s in weights else positive_weight(market.students) for s in market.schools]
    ws = list(weights)
    if len(ws) != market.n_schools:
        raise ValueError("one weight per school is required")
    return ws


def deferred_acceptance(market: Market, weights=None) -> Matching:
    """Student-proposing deferred acceptance against the tie-broken choice
    functions C_s^w.  Each round every unheld student proposes to the next
    school on their list; each school keeps C^w(held + new proposals)."""
    ws = _resolve_weights(market, weights)
    nxt = [0] * market.n_students
    held = [0] * market.n_schools
    holder: list[int | None] = [None] * market.n_students
    while True:
        props: dict[int, Subset] = {}
        for i in range(market.n_students):
            if holder[i] is None and nxt[i] < len(market.prefs[i]):
                s = market.prefs[i][nxt[i]]
                nxt[i] += 1
                props[s] = props.get(s, 0) | (1 << i)
        if not props:
            break
        for s in sorted(props):
            pool = held[s] | props[s]
            keep = choose_tiebroken(market.corr[s], ws[s], pool)
            for i in bits_of(pool & ~keep):
                holder[i] = None
            for i in bits_of(keep):
                holder[i] = s
            held[s] = keep
    mu = Matching(tuple(holder))
    if is_stable(market, mu).violated:
        raise NotPI("deferred acceptance produced an unstable matching")
    for s in range(market.n_schools):
        if choose_tiebroken(market.corr[s], ws[s], weak_pool(market, mu, s)) != mu.roster(s):
            raise NotPI(f"roster of {market.schools[s]} is not the tie-broken choice from its pool")
    return mu


# --- chains towards maximality ---------------------------------------------


def _move(market: Market, i: int, src, dst) -> dict:
    return {"student": market.students.elements[i], "from": market.school_name(src), "to": market.school_name(dst)}


def _roster_first_weight(gs: GroundSet, first: Subset) -> UMWeight:
    # members of ``first`` get the heaviest positive weights, everyone else negative
    inside = list(bits_of(first))
    outside = [k for k in range(gs.n) if not first >> k & 1]
    return canonical_weight(gs, inside + outside, [1] * len(inside) + [-1] * len(outside))


def _find_extension(market: Market, mu: Matching):
    for s in range(market.n_schools):
        fam = market.corr[s].enumerate(weak_pool(market, mu, s))
        e = extendable_element(fam, mu.roster(s))
        if e is not None:
            return s, e
    return None


def _chain(market: Market, mu: Matching, s_star: int, i_star: int) -> tuple[Matching, list[dict]]:
    gs = market.students
    ws = [_roster_first_weight(gs, mu.roster(s)) for s in range(market.n_schools)]
    ws[s_star] = _roster_first_weight(gs, mu.roster(s_star) | (1 << i_star))
    moves = []
    i, s = i_star, s_star
    limit = market.n_students * market.n_schools + 1
    for _ in range(limit):
        old = mu.assignment[i]
        mu = mu.moved(i, s)
        moves.append(_move(market, i, old, s))
        if old is None:
            return mu, moves
        r = mu.roster(old)
        got = choose_tiebroken(market.corr[old], ws[old], weak_pool(market, mu, old))
        if got == r:
            return mu, moves
        added = got & ~r
        if got & ~added != r or bin(added).count("1") != 1:
            raise NotPI(f"chain step at {market.schools[old]} is not a single-student extension")
        i, s = added.bit_length() - 1, old
    raise AssertionError("chain did not terminate")


def improve_to_maximal(market: Market, mu: Matching) -> tuple[Matching, list[dict]]:
    """Run chains until every school is maximal.  Returns the final matching
    and one trace entry per chain."""
    if is_stable(market, mu).violated:
        raise NotStableInput("improve_to_maximal needs a stable matching")
    trace = []
    for _ in range(market.n_students * market.n_schools + 1):
        hit = _find_extension(market, mu)
        if hit is None:
            return mu, trace
        new, moves = _chain(market, mu, *hit)
        if is_stable(market, new).violated or not pareto_dominates(market, new, mu):
            raise NotPI("chain result is not a dominating stable matching")
        trace.append({"kind": "chain", "moves": moves})
        mu = new
    raise AssertionError("too many chains")


# --- improvement cycles ---------------------------------------------------


@dataclass(frozen=True)
class ExchangeGraph:
    n: int
    edges: frozenset

    def successors(self, i: int) -> list[int]:
        return sorted(j for a, j in self.edges if a == i)

    def to_json(self, market: Market) -> list:
        e = market.students.elements
        return [[e[a], e[b]] for a, b in sorted(self.edges)]


def _edge(market: Market, mu: Matching, i: int, j: int) -> bool:
    s = mu.assignment[j]
    if i == j or s is None or not market.prefers(i, s, mu.assignment[i]):
        return False
    pool = weak_pool(market, mu, s) & ~(1 << j)
    return market.corr[s].member(pool, (mu.roster(s) & ~(1 << j)) | (1 << i))


def build_exchange_graph(market: Market, mu: Matching) -> ExchangeGraph:
    """Edge (i, j): i strictly prefers j's school s, and s may swap j for i."""
    n = market.n_students
    return ExchangeGraph(n, frozenset((i, j) for i in range(n) for j in range(n) if _edge(market, mu, i, j)))


def is_psic(market: Market, mu: Matching, cycle: Sequence[int]) -> bool:
    m = len(cycle)
    if m < 2 or len(set(cycle)) != m:
        return False
    if any(mu.assignment[i] is None for i in cycle):
        return False
    return all(_edge(market, mu, cycle[k], cycle[(k + 1) % m]) for k in range(m))


def find_psic(market: Market, mu: Matching) -> tuple[int, ...] | None:
    """A shortest cycle of the exchange graph; ties broken by the smallest
    cycle as a tuple of student indices."""
    g = build_exchange_graph(market, mu)
    succ = {i: g.successors(i) for i in range(g.n)}
    best = None
    for v in range(g.n):
        prev = {v: None}
        dq = deque([v])
        found = None
        while dq and found is None:
            a = dq.popleft()
            for b in succ[a]:
                if b == v:
                    found = a
                    break
                if b not in prev:
                    prev[b] = a
                    dq.append(b)
        if found is None:
            continue
        path = []
        node = found
        while node is not None:
            path.append(node)
            node = prev[node]
        cyc = tuple(reversed(path))
        if best is None or (len(cyc), cyc) < (len(best), best):
            best = cyc
    if best is not None and not is_psic(market, mu, best):
        raise AssertionError("exchange-graph cycle fails the improvement-cycle definition")
    return best


def apply_psic(market: Market, mu: Matching, cycle: Sequence[int]) -> Matching:
    """Move every cycle member to the next member's school."""
    cycle = [market.students.index(c) if isinstance(c, str) else c for c in cycle]
    if not is_psic(market, mu, cycle):
        raise InvalidCycle("not an improvement cycle for this matching")
    a = list(mu.assignment)
    m = len(cycle)
    for k, i in enumerate(cycle):
        a[i] = mu.assignment[cycle[(k + 1) % m]]
    return Matching(tuple(a))


def constrained_efficient(market: Market, mu0: Matching) -> tuple[Matching, list[dict]]:
    """Alternate maximality chains and shortest improvement cycles until
    neither applies."""
    if is_stable(market, mu0).violated:
        raise NotStableInput("starting matching is not stable")
    mu = mu0
    trace: list[dict] = []
    while True:
        mu, chains = improve_to_maximal(market, mu)
        trace.extend(chains)
        cyc = find_psic(market, mu)
        if cyc is None:
            return mu, trace
        new = apply_psic(market, mu, cyc)
        if is_stable(market, new).violated:
            raise NotPI("applying a shortest improvement cycle broke stability")
        trace.append({"kind": "psic", "moves": [_move(market, i, mu.assignment[i], new.assignment[i]) for i in cyc]})
        mu = new


# --- brute force ----------------------------------------------------------


def _oracle_cap(market: Market) -> None:
    if market.n_students > ORACLE_MAX_STUDENTS or market.n_schools > ORACLE_MAX_SCHOOLS:
        raise CapExceeded(f"oracle limited to {ORACLE_MAX_STUDENTS} students and {ORACLE_MAX_SCHOOLS} schools")


def stable_matchings(market: Market) -> list[Matching]:
    """Every stable matching, by enumerating individually rational assignments."""
    _oracle_cap(market)
    options = [(None, *p) for p in market.prefs]
    return [m for m in (Matching(a) for a in itertools.product(*options)) if not is_stable(market, m).violated]


def oracle_constrained_efficient(market: Market, mu: Matching, stable: Sequence[Matching] | None = None) -> bool:
    """Stable and not Pareto dominated by any stable matching."""
    _oracle_cap(market)
    if is_stable(market, mu).violated:
        return False
    stable = stable_matchings(market) if stable is None else stable
    return not any(pareto_dominates(market, nu, mu) for nu in stable)
