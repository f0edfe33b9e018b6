import random
from fractions import Fraction

import pytest

from pichoice.core import (
    NEG_INF,
    GroundSet,
    UMWeight,
    argmax_weight,
    bits_of,
    canonical_weight,
    is_um,
    lex,
    lex_add,
    positive_weight,
    random_um_weight,
    submasks,
)
from pichoice.errors import CapExceeded, EmptyFamily

ABC = GroundSet("abc")


def test_ground_set_roundtrip():
    x = ABC.mask(["c", "a"])
    assert x == 0b101
    assert ABC.names(x) == ("a", "c")
    assert ABC.key(x) == "a,c"
    assert ABC.parse_key("c, a") == x
    assert ABC.parse_key("") == 0
    assert ABC.fmt(0) == "{}"


def test_ground_set_rejects_duplicates_and_unknown():
    with pytest.raises(ValueError):
        GroundSet(["a", "a"])
    with pytest.raises(KeyError):
        ABC.mask(["z"])
    with pytest.raises(CapExceeded):
        GroundSet([str(k) for k in range(31)])


def test_submasks_ascending_and_complete():
    x = 0b1011
    subs = submasks(x)
    assert subs == sorted(subs)
    assert subs == [y for y in range(16) if not y & ~x]
    assert list(bits_of(x)) == [0, 1, 3]


def test_neg_inf_is_bottom():
    assert NEG_INF < lex(-10**9)
    assert not NEG_INF > lex(0)
    assert NEG_INF == NEG_INF
    assert lex_add(NEG_INF, lex(1)) is NEG_INF
    assert lex_add(lex(1, 2), lex(3, -2)) == lex(4, 0)
    with pytest.raises(ValueError):
        lex_add(lex(1), lex(1, 2))


def test_canonical_weight_values():
    w = canonical_weight(ABC, ["b", "a", "c"], ["+", "-", "+"])
    assert w.as_dict() == {"a": Fraction(-1, 4), "b": Fraction(1, 2), "c": Fraction(1, 8)}
    assert is_um(w)
    assert w(ABC.full) == Fraction(3, 8)


def test_um_detection():
    assert not is_um(UMWeight(ABC, (1, 2, 3)))
    assert is_um(UMWeight(ABC, (1, 2, 4)))
    with pytest.raises(ValueError):
        UMWeight.of(ABC, {"a": 1, "b": 1, "c": 4})


def test_argmax_weight():
    w = UMWeight.of(ABC, [-1, 2, -4])
    assert argmax_weight([0, 0b011, 0b111], w) == 0b011
    with pytest.raises(EmptyFamily):
        argmax_weight([], w)
    with pytest.raises(ValueError):
        argmax_weight([0b001, 0b010], UMWeight(ABC, (1, 1, 5)))


def test_random_weights_are_um_and_seeded():
    a = random_um_weight(GroundSet("abcde"), random.Random(5))
    b = random_um_weight(GroundSet("abcde"), random.Random(5))
    assert a == b and is_um(a)


def test_positive_weight_prefers_earlier():
    w = positive_weight(ABC)
    assert w(ABC.mask("a")) > w(ABC.mask("bc"))
