from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from coarse_abelian.groups import (
    Cyclic,
    CyclicSum,
    DescriptorError,
    DirectSum,
    IntPower,
    Localized,
    ParseError,
    Prufer,
    Rationals,
    RationalsModLocalized,
    RationalsModOne,
    Support,
    add,
    enumerate_ball,
    format_element,
    identity,
    invariants,
    negate,
    parse_descriptor,
    parse_element,
)

DESCRIPTORS = [
    "Z^1",
    "Z^2",
    "Z/6",
    "Z[1/2]",
    "Z[1/3]",
    "Prufer(2)",
    "Prufer(3)",
    "Q",
    "Q/Z",
    "CyclicSum([3,5])",
    "CyclicSum([2]; repeat-last)",
    "CyclicSum([2,3]; cycle)",
    "CyclicSum([]; odd-primes)",
    "Sum(Z^1, Q/Z)",
    "Sum(Z^1, CyclicSum([3]; repeat-last))",
]


def test_identity_examples():
    assert identity(IntPower(2)) == (0, 0)
    assert identity(Rationals()) == 0
    assert identity(Prufer(2)) == 0


def test_add_and_negate_examples():
    assert add(Rationals(), F(1, 3), F(1, 6)) == F(1, 2)
    assert add(Prufer(2), F(1, 2), F(1, 2)) == 0
    G = CyclicSum([3, 5])
    assert add(G, Support([(0, 2)]), Support([(0, 2)])) == Support([(0, 1)])
    assert negate(Rationals(), F(5, 9)) == F(-5, 9)
    assert Prufer(3).pair(negate(Prufer(3), F(1, 3))) == (2, 1)
    assert negate(IntPower(1), (0,)) == (0,)


def test_enumerate_ball_examples():
    assert enumerate_ball(IntPower(1), 2) == [(-2,), (-1,), (0,), (1,), (2,)]
    assert {Prufer(2).pair(x) for x in enumerate_ball(Prufer(2), 2)} == {(0, 0), (1, 1), (1, 2), (3, 2)}
    assert enumerate_ball(Localized(2), 2) == [F(k, 2) for k in range(-4, 5)]


def test_enumerate_ball_rejects_small_bound():
    with pytest.raises(ValueError):
        enumerate_ball(IntPower(1), 0)


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_group_laws_on_small_balls(text):
    G = parse_descriptor(text)
    ball = enumerate_ball(G, 2)[:12]
    z = G.zero()
    for a in ball:
        assert G.add(a, z) == a
        assert G.add(a, G.neg(a)) == z
        assert G.canon(a) == a
    for a, b in product(ball, repeat=2):
        assert G.add(a, b) == G.add(b, a)
    for a, b, c in product(ball[:6], repeat=3):
        assert G.add(G.add(a, b), c) == G.add(a, G.add(b, c))


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_ball_is_deterministic_and_monotone(text):
    G = parse_descriptor(text)
    small, big = enumerate_ball(G, 2), enumerate_ball(G, 3)
    assert small == enumerate_ball(G, 2)
    assert set(small) <= set(big)
    assert len(set(small)) == len(small)


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_descriptor_text_round_trips(text):
    G = parse_descriptor(text)
    assert parse_descriptor(G.text()) == G
    assert G.text() == parse_descriptor(G.text()).text()


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_element_text_round_trips(text):
    G = parse_descriptor(text)
    for x in enumerate_ball(G, 2):
        s = format_element(G, x)
        assert parse_element(G, s) == x
        assert format_element(G, parse_element(G, s)) == s


def test_parse_examples():
    assert parse_descriptor("Q") == Rationals()
    G = parse_descriptor("Sum(Z^1, CyclicSum([3]; repeat-last))")
    assert isinstance(G, DirectSum)
    assert G.parts[0] == IntPower(1)
    assert [G.parts[1].index(i) for i in range(4)] == [3, 3, 3, 3]
    assert parse_descriptor("Z/4") == Cyclic(4)
    assert parse_descriptor("Q/Z") == RationalsModOne()
    assert parse_descriptor("Q/Z[1/2]") == RationalsModLocalized(2)


@pytest.mark.parametrize("bad", ["Z[1/4]", "Prufer(6)", "Z/1", "CyclicSum([1,2])", "Sum(Q,", "Z^", "W"])
def test_parse_errors(bad):
    with pytest.raises((ParseError, DescriptorError)):
        parse_descriptor(bad)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_descriptor("Z[1/4]")
    assert "4" in str(info.value)
    assert info.value.pos >= 0


def test_odd_primes_rule_lists_odd_primes():
    G = parse_descriptor("CyclicSum([]; odd-primes)")
    assert [G.index(i) for i in range(6)][:3] == [3, 3, 5]
    assert all(G.index(i) % 2 for i in range(20))


def test_quotient_representatives():
    Q2 = RationalsModLocalized(2)
    # 5/6 = 1/2 + 1/3, so its class has the odd-denominator representative 1/3
    assert Q2.canon(F(5, 6)) == F(1, 3)
    assert RationalsModOne().canon(F(-1, 3)) == F(2, 3)


@given(st.fractions(max_denominator=64), st.fractions(max_denominator=64))
def test_rationals_mod_one_is_a_homomorphic_image(a, b):
    T = RationalsModOne()
    assert T.add(T.canon(a), T.canon(b)) == T.canon(a + b)
    assert 0 <= T.canon(a) < 1


@given(st.integers(-50, 50), st.integers(0, 6))
def test_prufer_pair_is_canonical(a, i):
    P = Prufer(2)
    x = P.canon(F(a, 2**i))
    k, j = P.pair(x)
    assert F(k, 2**j) == x
    assert (k, j) == (0, 0) or (k % 2 == 1 and 0 < k < 2**j)


INVARIANT_TABLE = {
    "Q": (1, False, 2, 1),
    "Z^3": (3, True, 3, 3),
    "CyclicSum([2]; repeat-last)": (0, False, 1, 0),
    "Z^1": (1, True, 1, 1),
    "Z[1/3]": (1, False, 2, 1),
    "Sum(Z^1, Q/Z)": (1, False, 2, 1),
    "Z/6": (0, True, 0, 0),
    "Sum(Z^2, Z/3)": (2, True, 2, 2),
}


@pytest.mark.parametrize("text,expected", sorted(INVARIANT_TABLE.items()))
def test_invariants(text, expected):
    rec = invariants(parse_descriptor(text))
    assert (rec.torsion_free_rank, rec.finitely_generated, rec.cd_q, rec.asdim) == expected


@pytest.mark.parametrize("text", DESCRIPTORS)
def test_invariant_record_consistency(text):
    rec = invariants(parse_descriptor(text))
    assert rec.cd_q - rec.torsion_free_rank == (0 if rec.finitely_generated else 1)
    assert rec.asdim == rec.torsion_free_rank
