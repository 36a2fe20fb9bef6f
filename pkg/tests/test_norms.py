from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from coarse_abelian.chains import Scales, standard_chain
from coarse_abelian.groups import IntPower, Localized, Rationals, enumerate_ball, parse_descriptor
from coarse_abelian.norms import (
    ChainUltraNorm,
    DyadicNorm,
    NormError,
    PruferNorm,
    PseudoUltraNorm,
    SumNorm,
    WordNorm,
    default_norm,
    dyadic_decomposition,
    dyadic_delta,
    dyadic_norm,
    k_sequence_min,
    prufer_norm,
    pseudo_ultrametric_norm,
    sum_metric,
    word_norm,
)
from coarse_abelian.splitting import ScaleError, odd_pair_for

dyadics = st.builds(lambda a, i: F(a, 2**i), st.integers(-400, 400), st.integers(0, 6))


def dyadic_norm_oracle(x):
    i = 0
    while (x * 2**i).denominator != 1:
        i += 1
    return abs(int(x)) + i


def prufer_norm_oracle(x, p):
    n = 0
    while (x * p**n).denominator != 1:
        n += 1
    return n


def bfs_l1(v):
    """Word length in Z^2 by explicit BFS from the origin."""
    seen = {(0, 0): 0}
    frontier = [(0, 0)]
    while v not in seen:
        nxt = []
        for x in frontier:
            for d in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                y = (x[0] + d[0], x[1] + d[1])
                if y not in seen:
                    seen[y] = seen[x] + 1
                    nxt.append(y)
        frontier = nxt
    return seen[v]


def test_word_norm_examples():
    assert word_norm(IntPower(2), None, (2, -3)) == 5
    assert word_norm(IntPower(2), None, (0, 0)) == 0
    assert word_norm(IntPower(1), None, (7,)) == 7


def test_word_norm_matches_bfs_oracle():
    N = WordNorm(IntPower(2))
    for v in product(range(-4, 5), repeat=2):
        assert N(v) == bfs_l1(v)


def test_word_norm_radius_cap():
    N = WordNorm(IntPower(1), gens=[(2,)], radius_cap=20)
    assert N((6,)) == 3
    with pytest.raises(NormError):
        N((1,))


def test_dyadic_norm_examples():
    assert dyadic_norm(F(0)) == 0
    assert dyadic_norm(F(5, 8)) == 3
    assert dyadic_norm(F(-11, 4)) == 4
    assert dyadic_norm(F(1, 2)) == 1
    assert dyadic_decomposition(F(-11, 4)) == (-2, -3, 2)


def test_dyadic_norm_rejects_non_dyadic():
    with pytest.raises(NormError):
        dyadic_norm(F(1, 3))


@given(dyadics)
def test_dyadic_norm_oracle(x):
    assert dyadic_norm(x) == dyadic_norm_oracle(x)


@given(dyadics, dyadics)
def test_dyadic_delta_is_the_carry(x, y):
    mx, my = dyadic_decomposition(x)[0], dyadic_decomposition(y)[0]
    assert dyadic_decomposition(x + y)[0] == mx + my + dyadic_delta(x, y)


def test_dyadic_delta_examples():
    assert dyadic_delta(F(0), F(0)) == 0
    assert dyadic_delta(F(1, 2), F(1, 2)) == 1
    # 1 + (-1/2) = 1/2 has integer part 0 = 1 + 0 - 1
    assert dyadic_delta(F(1), F(-1, 2)) == -1


def test_prufer_norm_examples():
    assert prufer_norm(F(0)) == 0
    assert prufer_norm(F(1, 2)) == 1
    assert prufer_norm(F(3, 8)) == 3


@given(st.integers(0, 500), st.sampled_from([2, 3, 5]), st.integers(0, 5))
def test_prufer_norm_oracle(a, p, i):
    x = F(a, p**i) % 1
    assert prufer_norm(x, p) == prufer_norm_oracle(x, p)


def test_chain_ultra_norm_values():
    N = ChainUltraNorm(standard_chain(parse_descriptor("CyclicSum([3,5,7])")))
    G = N.group
    assert N(G.zero()) == 0
    assert N(G.basis(0)) == 1
    assert N(G.add(G.basis(0), G.basis(2))) == 3


def test_chain_ultra_norm_with_custom_scales():
    chain = standard_chain(parse_descriptor("CyclicSum([3,5])"), Scales([F(1, 2), 4]))
    N = ChainUltraNorm(chain)
    assert N(N.group.basis(1)) == 4


def test_k_sequence_min_examples():
    split = odd_pair_for(parse_descriptor("Sum(Z^1, CyclicSum([3]; repeat-last))"))
    assert [k_sequence_min(split, n) for n in range(1, 5)] == [0, 0, 0, 0]
    loc = odd_pair_for(Localized(3))
    assert [k_sequence_min(loc, n) for n in range(1, 5)] == [1, 2, 3, 4]
    q = odd_pair_for(Rationals(), [3, 3])
    assert k_sequence_min(q, 2) == 2


def test_pseudo_ultrametric_norm_on_subgroup_and_example():
    pair = odd_pair_for(Localized(3))
    for n in range(-5, 6):
        assert pseudo_ultrametric_norm(pair, F(n)) == abs(n)
    # 5/9 = 1 - 1/3 - 1/9: ||1|| + K_2
    assert pseudo_ultrametric_norm(pair, F(5, 9)) == 1 + 2


def test_pseudo_norm_refuses_inadmissible_scales():
    with pytest.raises(ScaleError):
        odd_pair_for(Localized(3), scales=Scales([F(1, 2), 1]))
    pair = odd_pair_for(Localized(3), scales=Scales([F(1, 2), 1]), check_scales=False)
    assert PseudoUltraNorm(pair)(F(5, 9)) == 2


def test_sum_metric_and_sum_norm():
    d = lambda a, b: abs(a - b)
    assert sum_metric(d, d, (1, 2), (1, 2)) == 0
    assert sum_metric(d, d, (1, 2), (4, 0)) == 5
    N = SumNorm([DyadicNorm(), PruferNorm(2)])
    assert N((F(5, 8), F(3, 4))) == 5
    assert N.distance((F(1, 2), F(1, 4)), (F(1, 2), F(1, 4))) == 0


@pytest.mark.parametrize(
    "text", ["Z^2", "Z[1/2]", "Prufer(3)", "CyclicSum([2]; repeat-last)", "Q/Z", "Sum(Z^1, Prufer(2))"]
)
def test_default_norms_vanish_only_at_identity(text):
    G = parse_descriptor(text)
    N = default_norm(G, 3)
    for x in enumerate_ball(G, 3):
        assert (N(x) == 0) == (x == G.zero())
        assert N(x) == N(G.neg(x))


def test_default_norm_unavailable():
    with pytest.raises(NormError):
        default_norm(Rationals())
