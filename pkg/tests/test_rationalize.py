import itertools
import random

import pytest

from _gen import pi_correspondence
from pichoice.choice import UtilityFunction, UtilityBacked
from pichoice.core import GroundSet
from pichoice.errors import NotPI
from pichoice.instances import admission, table1
from pichoice.rationalize import CycleWitness, RevealedOrder, rationalize_pi, rationalizes, sarp_check, utility_from_order

ABC = GroundSet("abc")


def _brute_rationalizable(c) -> bool:
    """Search utilities with values in {-1,...,3}; only a positive answer is conclusive."""
    n = 1 << c.ground.n
    for vals in itertools.product(range(-1, 4), repeat=n - 1):
        u = UtilityFunction.from_table(c.ground, (0,) + vals)
        if rationalizes(u, c):
            return True
    return False


@pytest.mark.parametrize("name", ["C0", "C1"])
def test_closure_utility_roundtrip(name):
    c = table1(name)
    assert rationalizes(rationalize_pi(c), c)


@pytest.mark.parametrize("name", ["C0", "C1", "C2"])
def test_revealed_order_roundtrip(name):
    c = table1(name)
    order = sarp_check(c)
    assert isinstance(order, RevealedOrder)
    assert rationalizes(utility_from_order(order), c)


def test_c4_has_cycle_and_brute_force_agrees():
    c = table1("C4")
    w = sarp_check(c)
    assert isinstance(w, CycleWitness)
    assert w.to_json()["status"] == "not-rationalizable"
    # every set in the cycle is chosen from its own pool, and the next set fits in the pool
    k = len(w.sets)
    for s in range(k):
        assert c.member(w.pools[s], w.sets[s])
        assert not w.sets[(s + 1) % k] & ~w.pools[s]
    assert not c.member(w.pools[w.strict], w.sets[(w.strict + 1) % k])


def test_c2_is_rationalizable_by_brute_force():
    assert _brute_rationalizable(table1("C2"))


def test_admission_not_rationalizable():
    assert isinstance(sarp_check(admission()), CycleWitness)


def test_rationalize_pi_rejects_non_pi():
    with pytest.raises(NotPI):
        rationalize_pi(admission())


def test_random_pi_roundtrip():
    rng = random.Random(4)
    for _ in range(10):
        c = pi_correspondence(4, rng)
        assert rationalizes(rationalize_pi(c), c)
        assert rationalizes(utility_from_order(sarp_check(c)), c)


def test_utility_backed_is_rationalized_by_itself():
    u = UtilityFunction.from_table(ABC, [0, 1, 1, 2, 0, 1, 1, 1])
    assert rationalizes(u, UtilityBacked(u))


def test_c3_ties_conflict_with_strict_pair():
    # {b} beats {a} from {a,b}, but {a} and {b} tie from {a,b,c}
    assert isinstance(sarp_check(table1("C3")), CycleWitness)
