from fractions import Fraction as F
from itertools import combinations

import pytest

from coarse_abelian.chains import standard_chain
from coarse_abelian.groups import IntPower, Localized, Rationals, enumerate_ball, parse_descriptor
from coarse_abelian.norms import ChainUltraNorm, DyadicNorm, WordNorm
from coarse_abelian.splitting import odd_pair_for
from coarse_abelian.verify import (
    TruncationError,
    classify,
    control_function,
    decomposition_uniqueness,
    displacement,
    embeddable,
    generated_subgroup,
    growth,
    growth_compare,
    norm_axioms,
    scale_component,
    short_elements,
    table_function,
)


def eps_oracle(f, sample, d_dom, d_cod, delta):
    best = None
    for x in sample:
        for y in sample:
            if d_dom(x, y) <= delta:
                v = d_cod(f(x), f(y))
                best = v if best is None else max(best, v)
    return best


def test_control_function_matches_oracle():
    N = DyadicNorm()
    sample = enumerate_ball(Localized(2), 3)
    double = lambda x: 2 * x
    cert = control_function(double, sample, N.distance, N.distance, [1, 2, 3, 4])
    for row in cert.rows:
        assert row.eps_max == eps_oracle(double, sample, N.distance, N.distance, row.delta)
    assert cert.monotone


def test_control_function_identity_and_prediction():
    N = WordNorm(IntPower(1))
    sample = enumerate_ball(IntPower(1), 4)
    cert = control_function(lambda x: x, sample, N.distance, N.distance, [1, 2], predicted=lambda d: d)
    assert [r.eps_max for r in cert.rows] == [1, 2]
    assert cert.passed
    cert = control_function(lambda x: (3 * x[0],), sample, N.distance, N.distance, [1], predicted=lambda d: d)
    assert not cert.passed
    assert cert.rows[0].witness is not None


def test_control_rows_grow_with_sample():
    N = DyadicNorm()
    f = lambda x: 3 * x
    small = control_function(f, enumerate_ball(Localized(2), 2), N.distance, N.distance, [1, 2, 3])
    big = control_function(f, enumerate_ball(Localized(2), 4), N.distance, N.distance, [1, 2, 3])
    assert all(a.eps_max <= b.eps_max for a, b in zip(small.rows, big.rows))


def test_control_function_rejects_empty_sample():
    with pytest.raises(ValueError):
        control_function(lambda x: x, [], None, None, [1])


def test_displacement_of_exact_inverse():
    N = WordNorm(IntPower(1))
    sample = enumerate_ball(IntPower(1), 5)
    neg = lambda x: (-x[0],)
    assert displacement(neg, neg, sample, N.distance, sample, N.distance) == (0, 0)


def test_scale_component_examples():
    Z = IntPower(1)
    N = WordNorm(Z)
    trunc = enumerate_ball(Z, 10)
    assert scale_component(N, trunc, 1) == {(0,)}
    assert len(scale_component(N, trunc, F(3, 2))) == 21
    G = parse_descriptor("CyclicSum([3,5])")
    U = ChainUltraNorm(standard_chain(G))
    comp = scale_component(U, enumerate_ball(G, 6), F(3, 2))
    assert comp == {G.zero(), G.basis(0), G.mul(2, G.basis(0))}


def test_generated_subgroup_examples():
    Z2 = IntPower(2)
    trunc = enumerate_ball(Z2, 5)
    assert generated_subgroup(Z2, [], trunc) == {(0, 0)}
    assert generated_subgroup(Z2, [(1, 0)], trunc) == {(k, 0) for k in range(-5, 6)}
    G = parse_descriptor("CyclicSum([3,5])")
    assert generated_subgroup(G, [G.basis(0)], enumerate_ball(G, 6)) == {G.zero(), G.basis(0), G.mul(2, G.basis(0))}
    with pytest.raises(TruncationError):
        generated_subgroup(Z2, [(1, 0)], trunc, strict=True)


@pytest.mark.parametrize("s", [F(3, 2), F(5, 2), F(7, 2)])
def test_components_are_generated_by_short_elements(s):
    G = parse_descriptor("CyclicSum([3,5,7]; repeat-last)")
    U = ChainUltraNorm(standard_chain(G))
    trunc = enumerate_ball(G, 4)
    comp = scale_component(U, trunc, s)
    assert comp == generated_subgroup(G, short_elements(U, trunc, s), trunc)
    assert len(comp) < len(trunc)


def test_growth_of_z_and_z2():
    Z = IntPower(1)
    table = growth(Z, WordNorm(Z), F(3, 2), 10, 12)
    assert table.counts == [2 * n + 1 for n in range(11)]
    Z2 = IntPower(2)
    table = growth(Z2, WordNorm(Z2), F(3, 2), 8, 10)
    assert table.counts == [2 * n * n + 2 * n + 1 for n in range(9)]


def test_growth_refuses_small_truncation():
    Z = IntPower(1)
    with pytest.raises(TruncationError):
        growth(Z, WordNorm(Z), F(3, 2), 10, 9)


def test_ultrametric_growth_is_flat():
    G = parse_descriptor("CyclicSum([3,5]; repeat-last)")
    U = ChainUltraNorm(standard_chain(G))
    table = growth(G, U, F(5, 2), 6, 3)
    assert table.counts == [1] + [15] * 6


def test_growth_compare_examples():
    lin = [2 * n + 1 for n in range(21)]
    assert growth_compare(lin, table_function(lin)).witness == 1
    res = growth_compare(lin, lambda n: n)
    assert res.consistent
    assert res.witness <= 3
    assert growth_compare([1] + [15] * 20, lambda n: 1).witness == 15
    quad = [n * n for n in range(31)]
    assert not growth_compare(quad, lambda n: n).consistent


def test_norm_axioms_detects_bad_norm():
    class Squared(WordNorm):
        def __call__(self, x):
            return x[0] ** 2

    Z = IntPower(1)
    assert norm_axioms(WordNorm(Z), enumerate_ball(Z, 5)).passed
    report = norm_axioms(Squared(Z), enumerate_ball(Z, 5))
    assert not report.passed
    assert report.violations > 0


def test_decomposition_uniqueness_report():
    pair = odd_pair_for(Localized(3))
    sample = [F(a, 27) for a in range(-54, 55)]
    report = decomposition_uniqueness(pair, sample, 3)
    assert report.passed
    q = odd_pair_for(Rationals(), [3, 3])
    assert decomposition_uniqueness(q, [F(a, 18) for a in range(-36, 37)], 2).passed


# Predicted verdicts from torsion-free rank and the finitely generated flag.
FIXTURES = {
    "Z": ("Z^1", 1, True),
    "Z2": ("Z^2", 2, True),
    "Q": ("Q", 1, False),
    "Z+Q/Z": ("Sum(Z^1, Q/Z)", 1, False),
    "sumZ2": ("CyclicSum([2]; repeat-last)", 0, False),
    "Q/Z": ("Q/Z", 0, False),
    "Z+sumZ3": ("Sum(Z^1, CyclicSum([3]; repeat-last))", 1, False),
    "Z[1/3]": ("Z[1/3]", 1, False),
}


@pytest.mark.parametrize("a,b", list(combinations(sorted(FIXTURES), 2)))
def test_classifier_matrix(a, b):
    ta, ra, fa = FIXTURES[a]
    tb, rb, fb = FIXTURES[b]
    A, B = parse_descriptor(ta), parse_descriptor(tb)
    expected = "equivalent" if (ra, fa) == (rb, fb) else "not-equivalent"
    assert classify(A, B).verdict == expected
    assert classify(B, A).verdict == expected


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_classifier_reflexive(name):
    G = parse_descriptor(FIXTURES[name][0])
    assert classify(G, G).verdict == "equivalent"


def test_classifier_rule_tags():
    assert classify(Rationals(), parse_descriptor("Sum(Z^1, Q/Z)")).rule == "rank-and-cd"
    assert classify(parse_descriptor("CyclicSum([2]; repeat-last)"), parse_descriptor("Q/Z")).rule == "locally-finite"


def test_embeddable_examples():
    lf = parse_descriptor("CyclicSum([2]; repeat-last)")
    assert embeddable(parse_descriptor("Sum(Z^1, CyclicSum([2]; repeat-last))"), IntPower(2)).verdict == "embeds"
    assert embeddable(lf, IntPower(1)).verdict == "embeds"
    assert embeddable(parse_descriptor("Sum(Z^2, CyclicSum([3]; repeat-last))"), IntPower(2)).verdict == "no-embedding"
    assert embeddable(IntPower(1), IntPower(2)).verdict == "undecided-by-implemented-criteria"
