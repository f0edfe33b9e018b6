import itertools
import random

import pytest

from pichoice import applications as ap
from pichoice import axioms as ax
from pichoice.choice import UtilityBacked
from pichoice.core import GroundSet, popcount
from pichoice.errors import CapExceeded, NonPositiveValue, OverlappingTypes, ReserveOverflow
from pichoice.instances import admission, appd_s1, ex41

from _gen import ground


def fam(gs, *groups):
    return sorted(gs.mask(g) for g in groups)


def test_responsive_tied_seconds():
    gs = ground(4)
    c = ap.corr(ap.responsive(gs, 2, [3, 2, 2, 1]))
    assert c.enumerate(gs.full) == fam(gs, ["i1", "i2"], ["i1", "i3"])


def test_responsive_zero_capacity_and_full_capacity():
    gs = ground(4)
    zero = ap.corr(ap.responsive(gs, 0, [1, 2, 3, 4]))
    every = ap.corr(ap.responsive(gs, 4))
    for x in gs.subsets():
        assert zero.enumerate(x) == [0]
        assert every.enumerate(x) == [x]


def test_responsive_rejects_nonpositive():
    with pytest.raises(NonPositiveValue):
        ap.responsive(ground(3), 1, [1, 0, 2])


def _weak_order_values(n, rng):
    tiers = [rng.randint(0, 2) for _ in range(n)]
    lo = [1, 2, 3]
    hi = [rng.randint(1, 3)]
    for _ in range(2):
        hi.append(hi[-1] + rng.randint(1, 5))
    return [lo[t] for t in tiers], [hi[t] for t in tiers]


def test_responsive_valuation_independence():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 5)
        gs = ground(n)
        q = rng.randint(0, n)
        v1, v2 = _weak_order_values(n, rng)
        a = ap.corr(ap.responsive(gs, q, v1)).table()
        b = ap.corr(ap.responsive(gs, q, v2)).table()
        assert a == b


def test_controlled_lower_bound_forces_minority():
    gs = ground(4)
    types = ap.TypeStructure({"maj": frozenset({"i1", "i2", "i3"}), "min": frozenset({"i4"})},
                             lower={"maj": 1, "min": 1})
    c = ap.corr(ap.controlled_choice(gs, 2, types, [3, 3, 2, 1]))
    chosen = c.enumerate(gs.full)
    assert chosen and all(y >> 3 & 1 and popcount(y) == 2 for y in chosen)


def test_controlled_without_bounds_is_responsive():
    gs = ground(4)
    v = [2, 1, 1, 3]
    types = ap.TypeStructure({"a": frozenset({"i1", "i2"}), "b": frozenset({"i3", "i4"})},
                             lower={"a": 0, "b": 0}, upper={"a": 0, "b": 0})
    assert ap.corr(ap.controlled_choice(gs, 2, types, v)).table() == ap.corr(ap.responsive(gs, 2, v)).table()


def test_controlled_type_errors():
    gs = ground(3)
    overlap = ap.TypeStructure({"a": frozenset({"i1", "i2"}), "b": frozenset({"i2", "i3"})})
    with pytest.raises(OverlappingTypes):
        ap.controlled_choice(gs, 2, overlap)
    uncovered = ap.TypeStructure({"a": frozenset({"i1"})})
    with pytest.raises(OverlappingTypes):
        ap.controlled_choice(gs, 2, uncovered)
    heavy = ap.TypeStructure({"a": frozenset({"i1"}), "b": frozenset({"i2", "i3"})}, lower={"a": 1, "b": 2})
    with pytest.raises(ReserveOverflow):
        ap.controlled_choice(gs, 2, heavy)


def test_edcr_reserves_pick_best_of_each_type():
    gs = ground(4)
    types = ap.TypeStructure({"A": frozenset({"i1", "i2", "i3"}), "B": frozenset({"i4"})},
                             reserves={"A": 1, "B": 1})
    c = ap.corr(ap.edcr(gs, 2, types, [1, 3, 2, 1]))
    assert c.enumerate(gs.full) == fam(gs, ["i2", "i4"])
    assert ax.check_acceptant_corr(c).ok


def test_edcr_single_type_matches_responsive():
    gs = ground(4)
    v = [1, 4, 2, 3]
    types = ap.TypeStructure({"A": frozenset(gs.elements)}, reserves={"A": 1})
    assert ap.corr(ap.edcr(gs, 2, types, v)).table() == ap.corr(ap.responsive(gs, 2, v)).table()


def test_edcr_reserve_overflow():
    gs = ground(2)
    types = ap.TypeStructure({"A": frozenset({"i1"}), "B": frozenset({"i2"})}, reserves={"A": 1, "B": 1})
    with pytest.raises(ReserveOverflow):
        ap.edcr(gs, 1, types)


def test_overlapping_single_type_is_top_by_merit():
    gs = ground(3)
    types = ap.TypeStructure({"t": frozenset(gs.elements)}, reserves={"t": 1})
    u = ap.overlapping_reserves(gs, 2, types, [1, 3, 2])
    assert ap.corr(u).enumerate(gs.full) == fam(gs, ["i2", "i3"])
    assert u(0) == (0, 0)


def test_overlapping_reserve_overflow():
    gs = ground(2)
    with pytest.raises(ReserveOverflow):
        ap.overlapping_reserves(gs, 1, ap.TypeStructure({"t": frozenset({"i1"})}, reserves={"t": 2}))
    with pytest.raises(ReserveOverflow):
        ap.overlapping_reserves(gs, 1, ap.TypeStructure({"t": frozenset({"i1"})}, reserves={"t": -1}))


def test_overlapping_matches_meritorious_horizontal():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 6)
        gs = ground(n)
        q = rng.randint(1, n)
        types = {}
        for t in range(rng.randint(1, 3)):
            members = frozenset(e for e in gs.elements if rng.random() < 0.5)
            if members:
                types[f"t{t}"] = members
        res = {t: rng.randint(0, 2) for t in types}
        while sum(res.values()) > q:
            res[rng.choice([t for t in sorted(res) if res[t]])] -= 1
        ts = ap.TypeStructure(types, reserves=res)
        # strict priority: distinct powers of two
        order = list(gs.elements)
        rng.shuffle(order)
        vals = {e: 2 ** (n - k) for k, e in enumerate(order)}
        c = ap.corr(ap.overlapping_reserves(gs, q, ts, vals))
        ref = ap.meritorious_horizontal(gs, q, ts, order)
        for x in gs.subsets():
            assert c.enumerate(x) == [ref(x)]


def _brute_rank(adj, x):
    elems = [i for i in range(8) if x >> i & 1]
    best = 0
    for pick in itertools.product(*[[None, *adj.get(i, ())] for i in elems]):
        used = [p for p in pick if p is not None]
        if len(used) == len(set(used)):
            best = max(best, len(used))
    return best


def test_transversal_rank_small_cases():
    star = {0: [0], 1: [0], 2: [0]}
    assert ap.transversal_rank(star, 0b111) == 1
    perfect = {0: [0], 1: [1], 2: [2]}
    assert ap.transversal_rank(perfect, 0b111) == 3


def test_transversal_rank_matches_brute_force():
    rng = random.Random(9)
    for _ in range(40):
        adj = {i: [p for p in range(4) if rng.random() < 0.4] for i in range(6)}
        for x in range(1 << 6):
            assert ap.transversal_rank(adj, x) == _brute_rank(adj, x)


def _is_matroid(m, n):
    indep = [x for x in range(1 << n) if m(x)]
    s = set(indep)
    if 0 not in s:
        return False
    for x in indep:
        for i in range(n):
            if x >> i & 1 and (x & ~(1 << i)) not in s:
                return False
    for x in indep:
        for y in indep:
            if popcount(y) > popcount(x):
                if not any((x | 1 << i) in s for i in range(n) if y >> i & 1 and not x >> i & 1):
                    return False
    return True


def test_matroid_constructors_satisfy_axioms():
    from _gen import laminar_family

    rng = random.Random(2)
    for _ in range(15):
        n = rng.randint(1, 6)
        gs = ground(n)
        assert _is_matroid(ap.Matroid.uniform(gs, rng.randint(0, n)), n)
        caps = [(s, rng.randint(0, popcount(s))) for s in laminar_family(n, rng)]
        assert _is_matroid(ap.Matroid.laminar(gs, caps), n)
        adj = {i: [p for p in range(3) if rng.random() < 0.5] for i in range(n)}
        assert _is_matroid(ap.Matroid.transversal(gs, adj), n)


def test_laminar_matroid_rejects_crossing_sets():
    with pytest.raises(ValueError):
        ap.Matroid.laminar(ground(3), [(0b011, 1), (0b110, 1)])


def test_weighted_matroid_examples():
    gs = ground(4)
    empty = ap.corr(ap.weighted_matroid_utility(ap.Matroid.uniform(gs, 0), [1, 2, 3, 4]))
    assert all(empty.enumerate(x) == [0] for x in gs.subsets())
    uni = ap.weighted_matroid_utility(ap.Matroid.uniform(gs, 2), [1, 2, 3, 4])
    assert ap.corr(uni).table() == ap.corr(ap.responsive(gs, 2, [1, 2, 3, 4])).table()
    assert ax.check_mnat(uni).status == ax.HOLDS


def test_ex41_school_one_picks_transversal_pairs():
    mk = ex41()
    gs = mk.students
    got = mk.corr[0].enumerate(gs.full)
    assert got == fam(gs, ["i1", "i2"], ["i1", "i3"], ["i4", "i2"], ["i4", "i3"])


def test_weighted_matroids_are_mnat():
    from _gen import builder_utility

    rng = random.Random(4)
    for _ in range(10):
        u = builder_utility(ground(4), rng, "matroid")
        assert ax.check_mnat(u).status == ax.HOLDS


def test_laminar_concave_validation():
    gs = ground(3)
    with pytest.raises(ValueError):
        ap.laminar_concave(gs, [(0b011, [0, 1, 3])])
    with pytest.raises(ValueError):
        ap.laminar_concave(gs, [(0b011, [1, 2])])
    with pytest.raises(ValueError):
        ap.laminar_concave(gs, [(0b011, [0, 1]), (0b110, [0, 1])])


def test_committee_examples():
    c = admission()
    gs = c.ground
    assert c.enumerate(gs.full) == fam(gs, ["i1", "i2"], ["i1", "i3"], ["i2", "i4"])
    s1 = appd_s1()
    assert s1.enumerate(s1.ground.full) == fam(s1.ground, ["i1", "i2"], ["i1", "i3"], ["i2", "i4"])


def test_committee_single_referee_is_a_function():
    gs = GroundSet(["a", "b", "c", "d"])
    c = ap.committee(gs, 2, {"h": ["c", "a", "d", "b"]})
    v = {"c": 4, "a": 3, "d": 2, "b": 1}
    assert c.table() == ap.corr(ap.responsive(gs, 2, v)).table()


def test_committee_substitutable_and_acceptant():
    c = admission()
    assert ax.check_sc1(c).ok and ax.check_sc2(c).ok and ax.check_acceptant_corr(c).ok


def test_committee_errors():
    gs = GroundSet(["a", "b"])
    with pytest.raises(ValueError):
        ap.committee(gs, 1, {"h": ["a"]})
    with pytest.raises(ValueError):
        ap.committee(gs, 2, {"h": ["a", "b"]}, pi_set=[("h",)])
    refs = {f"h{k}": ["a", "b"] for k in range(11)}
    with pytest.raises(CapExceeded):
        ap.committee(gs, 4, refs)


def test_corr_flags():
    c = ap.corr(ap.responsive(ground(2), 1))
    assert isinstance(c, UtilityBacked) and c.assume_pi and c.assume_lad
