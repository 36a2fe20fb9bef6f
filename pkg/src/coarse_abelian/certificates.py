"""Ready-made certification runs for the explicit maps, shared by the CLI
and the acceptance suite."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .chains import Scales, standardize, ultrametric_distance
from .groups import Group, Localized, Prufer, enumerate_ball, parse_descriptor
from .norms import dyadic_norm, prufer_norm
from .splitting import (
    OddPair,
    RationalSplit,
    Transfer,
    dyadic_split,
    dyadic_unsplit,
    odd_pair_for,
    odd_split,
    odd_split_inverse,
    transfer_bound,
)
from .verify import ControlCertificate, control_function, displacement, displacement_witnesses


def split_distance(a: tuple, b: tuple) -> Fraction:
    """|m - m'| + Prüfer norm of q - q' on Z + Z(2^inf)."""
    return Fraction(abs(a[0] - b[0]) + prufer_norm(b[1] - a[1], 2))


def dyadic_distance(x, y) -> Fraction:
    return Fraction(dyadic_norm(y - x))


# ---------------------------------------------------------------------------


def certify_dyadic_split(bound: int = 16, grid: Sequence = range(1, 9), slack=0) -> ControlCertificate:
    """Control rows of x -> (m_x, x mod 1) against delta + slack, and the
    displacements of the section (predicted (1, 0))."""
    sample = enumerate_ball(Localized(2), bound)
    cert = control_function(
        dyadic_split, sample, dyadic_distance, split_distance, grid, predicted=lambda d: d + Fraction(slack)
    )
    images = [dyadic_split(x) for x in sample]
    extra = [(m, q) for m in range(-bound, bound + 1) for q in enumerate_ball(Prufer(2), bound.bit_length() - 1)]
    ys = sorted(set(images) | set(extra))
    unsplit = lambda p: dyadic_unsplit(*p)
    k1, k2 = displacement(dyadic_split, unsplit, sample, dyadic_distance, ys, split_distance)
    cert.displacement = (k1, k2)
    cert.displacement_predicted = (Fraction(1), Fraction(0))
    witnesses = displacement_witnesses(dyadic_split, unsplit, sample, dyadic_distance, k1)
    cert.notes["displacement_witness"] = str(witnesses[0]) if witnesses else None
    cert.notes["section_exact"] = all(dyadic_split(unsplit(y)) == y for y in ys)
    return cert


def odd_sample(pair: OddPair, h_bound: int, top: int) -> list:
    """Elements h + sum r_i g_i with ||h|| small and top index <= top."""
    G = pair.ext.ambient
    subs = [h for h in _sub_ball(pair, h_bound)]
    ranges = [range(-pair.half_index(i), pair.half_index(i) + 1) for i in range(1, top + 1)]
    out = []
    for h in subs:
        for r in itertools.product(*ranges):
            x = pair.ext.include(h)
            for i, c in enumerate(r, start=1):
                x = G.add(x, G.mul(c, pair.lift(i)))
            out.append(x)
    return out


def _sub_ball(pair: OddPair, bound: int) -> list:
    H = pair.ext.sub
    return enumerate_ball(H, bound)


def certify_odd_split(pair: OddPair, h_bound: int = 2, top: int = 2) -> dict:
    """Exact round trips of the odd split on a sample; displacements are (0, 0)."""
    sample = odd_sample(pair, h_bound, top)
    back = [odd_split_inverse(pair, *odd_split(pair, g)) for g in sample]
    ok_back = all(b == g for b, g in zip(back, sample))
    pairs = [odd_split(pair, g) for g in sample]
    ok_fwd = all(odd_split(pair, odd_split_inverse(pair, h, q)) == (h, q) for h, q in pairs)
    sub_ok = all(odd_split(pair, pair.ext.include(h)) == (h, pair.ext.quotient.zero()) for h in _sub_ball(pair, h_bound))
    proj_ok = all(odd_split(pair, g)[1] == pair.ext.project(g) for g in sample)
    return {
        "sample_size": len(sample),
        "inverse_after_split": ok_back,
        "split_after_inverse": ok_fwd,
        "identity_on_subgroup": sub_ok,
        "projection_compatible": proj_ok,
        "displacement": (0 if ok_back else None, 0 if ok_fwd else None),
        "passed": ok_back and ok_fwd and sub_ok and proj_ok,
    }


@dataclass
class TransferCertificate:
    sample_size: int
    injective: bool
    image_matches: bool
    inverse_exact: bool
    rows: list  # (K, eps_max, C_K, passed)

    @property
    def passed(self) -> bool:
        return self.injective and self.image_matches and self.inverse_exact and all(r[3] for r in self.rows)


def certify_transfer(pair_a: OddPair, pair_b: OddPair, Ks: Sequence = (1, 2, 3), h_bound: int = 3, top: int = 3) -> TransferCertificate:
    T = Transfer(pair_a, pair_b)
    back = Transfer(pair_b, pair_a)
    dom = odd_sample(pair_a, h_bound, top)
    cod = odd_sample(pair_b, h_bound, top)
    images = [T(x) for x in dom]
    injective = len(set(images)) == len(dom)
    image_matches = set(images) == set(cod)
    inverse_exact = all(back(y) == x for x, y in zip(dom, images)) and all(T(back(y)) == y for y in cod)
    cert = control_function(T, dom, pair_a.distance, pair_b.distance, Ks, predicted=lambda K: transfer_bound(pair_a, pair_b, K))
    rows = [(r.delta, r.eps_max, r.predicted, r.passed) for r in cert.rows]
    return TransferCertificate(len(dom), injective, image_matches, inverse_exact, rows)


def standard_transfer_pairs() -> tuple[OddPair, OddPair]:
    """(Z + sum Z_3, Z) and (Z[1/3], Z), both with index sequence 3, 3, 3, ..."""
    a = odd_pair_for(parse_descriptor("Sum(Z^1, CyclicSum([3]; repeat-last))"))
    b = odd_pair_for(Localized(3))
    return a, b


@dataclass
class RationalSplitCertificate:
    sample_size: int
    quotient_exact: bool
    integers_fixed: bool
    section_exact: bool
    control: ControlCertificate
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        finite = all(r.eps_max is not None for r in self.control.rows)
        return self.quotient_exact and self.integers_fixed and self.section_exact and finite and self.control.monotone


def rational_sample(den: int = 72, bound: int = 8) -> list[Fraction]:
    return [Fraction(a, den) for a in range(-bound * den, bound * den + 1)]


def certify_rational_split(schedule=(3, 3), den: int = 72, bound: int = 8, grid: Sequence = range(1, 9)) -> RationalSplitCertificate:
    F = RationalSplit(schedule)
    sample = rational_sample(den, bound)
    failures = [x for x in sample if F(x)[1] != x % 1]
    ints_ok = all(F(x) == (int(x), Fraction(0)) for x in sample if x.denominator == 1)
    images = {x: F(x) for x in sample}
    section_ok = all(F(F.inverse(*y)) == y for y in set(images.values()))
    # Distances depend only on differences; index the sample by numerators
    # over ``den`` so the pair sweep hashes ints instead of Fractions.
    nums = [int(x * den) for x in sample]
    coded = {a: (images[Fraction(a, den)][0], int(images[Fraction(a, den)][1] * den)) for a in nums}
    dom_cache: dict = {}
    cod_cache: dict = {}

    def d_dom(a, b):
        k = b - a
        if k not in dom_cache:
            dom_cache[k] = F.outer.norm(Fraction(k, den))
        return dom_cache[k]

    def d_cod(u, v):
        k = (v[1] - u[1]) % den
        if k not in cod_cache:
            cod_cache[k] = F.inner.norm(Fraction(k, den))
        return abs(u[0] - v[0]) + cod_cache[k]

    control = control_function(coded.__getitem__, nums, d_dom, d_cod, grid)
    control.rows = [
        replace(r, witness=tuple(Fraction(a, den) for a in r.witness) if r.witness else None) for r in control.rows
    ]
    return RationalSplitCertificate(len(sample), not failures, ints_ok, section_ok, control, failures[:5])


@dataclass
class StandardizeCertificate:
    source: str
    target: str
    indexes: list
    block_products: list
    elements: int
    bijective: bool
    isometric: bool

    @property
    def passed(self) -> bool:
        return self.bijective and self.isometric


def certify_standardize(G: Group, bound: int = 4, scales: Scales | None = None) -> StandardizeCertificate:
    S = standardize(G, scales)
    refined = S.chain
    horizon = refined.length if refined.length is not None else None
    sample = enumerate_ball(G, bound)
    fwd = {x: S.forward(x) for x in sample}
    bijective = all(S.backward(y) == x for x, y in fwd.items()) and len(set(fwd.values())) == len(sample)
    isometric = all(
        ultrametric_distance(refined, a, b) == ultrametric_distance(S.target_chain, fwd[a], fwd[b])
        for a in sample
        for b in sample
    )
    n = horizon if horizon is not None else max((refined.level(x) for x in sample), default=0)
    originals = refined.original.length if refined.original.finite else max((refined.original.level(x) for x in sample), default=0)
    return StandardizeCertificate(
        G.text(),
        S.target.text(),
        [refined.index(j) for j in range(1, n + 1)],
        refined.block_products(originals),
        len(sample),
        bijective,
        isometric,
    )
