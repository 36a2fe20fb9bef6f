"""Balanced decompositions for odd pairs and the explicit splitting maps
built on them: odd split, transfer between pairs, dyadic split, finite
powers, the composite split of Q, and restriction of the dyadic power
split to concrete subgroups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .chains import (
    ChainError,
    Extension,
    OneStepChain,
    Scales,
    denominator_chain,
    derived_chain,
    standard_chain,
)
from .groups import (
    CoarseError,
    DescriptorError,
    DirectSum,
    ElementError,
    Group,
    IntPower,
    Localized,
    Prufer,
    Rationals,
    RationalsModLocalized,
    RationalsModOne,
    format_value,
)
from .norms import (
    DyadicNorm,
    L1Norm,
    Norm,
    PruferNorm,
    dyadic_decomposition,
    k_sequence_min,
    prufer_norm,
)


class SplitError(CoarseError):
    pass


class ScaleError(CoarseError):
    pass


# ---------------------------------------------------------------------------
# concrete extensions


def _integer_restrict(x: Fraction):
    if x.denominator != 1:
        raise ElementError(f"{x} is not an integer")
    return (x.numerator,)


def localization_extension(p: int) -> Extension:
    """0 -> Z -> Z[1/p] -> Z(p^inf) -> 0."""
    return Extension(
        ambient=Localized(p),
        sub=IntPower(1),
        quotient=Prufer(p),
        include=lambda h: Fraction(h[0]),
        restrict=_integer_restrict,
        project=lambda x: x % 1,
        name=f"(Z[1/{p}], Z)",
    )


def split_extension(n: int, torsion: Group) -> Extension:
    """0 -> Z^n -> Z^n + T -> T -> 0 with the obvious inclusion and projection."""
    if torsion.rank != 0:
        raise DescriptorError(f"{torsion.text()} is not a torsion group")
    ambient = DirectSum((IntPower(n), torsion))
    zero_t = torsion.zero()

    def restrict(x):
        if x[1] != zero_t:
            raise ElementError(f"{ambient.format(x)} has a torsion part")
        return x[0]

    return Extension(
        ambient=ambient,
        sub=IntPower(n),
        quotient=torsion,
        include=lambda h: (h, zero_t),
        restrict=restrict,
        project=lambda x: x[1],
        name=f"({ambient.text()}, Z^{n})",
    )


def rational_extension() -> Extension:
    """0 -> Z[1/2] -> Q -> Q/Z[1/2] -> 0."""
    dyadics = Localized(2)
    quotient = RationalsModLocalized(2)
    return Extension(
        ambient=Rationals(),
        sub=dyadics,
        quotient=quotient,
        include=lambda h: h,
        restrict=dyadics.canon,
        project=quotient.canon,
        name="(Q, Z[1/2])",
    )


def torsion_rational_extension() -> Extension:
    """0 -> Z(2^inf) -> Q/Z -> Q/Z[1/2] -> 0."""
    prufer = Prufer(2)
    quotient = RationalsModLocalized(2)
    return Extension(
        ambient=RationalsModOne(),
        sub=prufer,
        quotient=quotient,
        include=lambda h: h,
        restrict=prufer.canon,
        project=quotient.canon,
        name="(Q/Z, Z(2^inf))",
    )


# ---------------------------------------------------------------------------
# odd pairs


@dataclass(frozen=True)
class Decomposition:
    """g = h + sum r_i g_i with r_i in [-k_i, k_i]; absent indexes mean 0."""

    h: Any
    coeffs: dict = field(default_factory=dict)

    def top(self) -> int:
        return max(self.coeffs, default=0)

    def text(self, sub: Group | None = None) -> str:
        h = sub.format(self.h) if sub is not None else format_value(self.h)
        body = ", ".join(f"{i}: {r}" for i, r in sorted(self.coeffs.items()))
        return f"h = {h}; r = {{{body}}}"

    def __eq__(self, other):
        return (
            isinstance(other, Decomposition)
            and self.h == other.h
            and {i: r for i, r in self.coeffs.items() if r}
            == {i: r for i, r in other.coeffs.items() if r}
        )

    def __hash__(self):
        return hash((self.h, tuple(sorted((i, r) for i, r in self.coeffs.items() if r))))


class AdmissibleScales(Scales):
    """K_n = max(k_sequence_min(n), K_{n-1} + 1): the smallest admissible scales."""

    def __init__(self, pair: "OddPair"):
        self.pair = pair
        self._memo = [Fraction(0)]
        self.prefix = ()
        self.step = Fraction(1)

    def __call__(self, i: int) -> Fraction:
        if i <= 0:
            return Fraction(0)
        while len(self._memo) <= i:
            n = len(self._memo)
            self._memo.append(max(k_sequence_min(self.pair, n), self._memo[-1] + 1))
        return self._memo[i]

    def text(self) -> str:
        return "admissible"

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


class OddPair:
    """A pair (G, H) whose quotient carries a chain with odd indexes.

    ``lifts`` default to the quotient generators themselves (when the
    quotient generators are also ambient elements). ``sub_norm`` is the
    norm on H; ``scales`` default to the admissible rule.
    """

    def __init__(
        self,
        ext: Extension,
        quotient_chain: OneStepChain,
        lifts=None,
        sub_norm: Norm | None = None,
        scales: Scales | None = None,
        check_scales: bool = True,
        check: int = 8,
    ):
        self.ext = ext
        self.quotient_chain = quotient_chain
        if lifts is None:
            lifts = quotient_chain.generator
        self.chain = derived_chain(ext, quotient_chain, lifts, check=check)
        for i in range(1, min(self.chain.horizon(), check) + 1):
            if self.chain.index(i) % 2 == 0:
                raise ChainError(f"index m_{i} = {self.chain.index(i)} is even; not an odd pair")
        self.sub_norm = sub_norm
        self.check_scales = check_scales
        self._corrections: dict[int, Any] = {}
        self._checked_upto = 0
        self.scales = scales if scales is not None else AdmissibleScales(self)
        if scales is not None and check_scales:
            self._check_scales(min(self.chain.horizon(), check))

    # structure -------------------------------------------------------------

    def half_index(self, i: int) -> int:
        return self.chain.index(i) // 2

    def lift(self, i: int):
        return self.chain.generator(i)

    def correction(self, i: int):
        """The H-part of m_i g_i under this pair's own decomposition."""
        if i not in self._corrections:
            G = self.ext.ambient
            self._corrections[i] = self.decompose(G.mul(self.chain.index(i), self.lift(i))).h
        return self._corrections[i]

    def correction_norm(self, i: int) -> Fraction:
        if self.sub_norm is None:
            raise ScaleError("pair has no norm on H")
        return Fraction(self.sub_norm(self.correction(i)))

    def scale(self, n: int) -> Fraction:
        if n and self.check_scales and not isinstance(self.scales, AdmissibleScales):
            self._check_scales(n)
        return self.scales(n)

    def _check_scales(self, n: int) -> None:
        while self._checked_upto < n:
            i = self._checked_upto + 1
            need = k_sequence_min(self, i)
            if self.scales(i) < need:
                raise ScaleError(f"inadmissible scales: K_{i} = {self.scales(i)} < {need}")
            self._checked_upto = i

    # decomposition ---------------------------------------------------------

    def decompose(self, g) -> Decomposition:
        if not self.ext.ambient.contains(g):
            raise ElementError(f"{format_value(g)} is not in {self.ext.ambient.text()}")
        coeffs, rest = self.chain.expand(g, balanced=True)
        return Decomposition(self.ext.restrict(rest), coeffs)

    def recompose(self, d: Decomposition):
        G = self.ext.ambient
        x = self.ext.include(d.h)
        for i, r in sorted(d.coeffs.items()):
            k = self.half_index(i)
            if not -k <= r <= k:
                raise SplitError(f"coefficient r_{i} = {r} outside [-{k}, {k}]")
            x = G.add(x, G.mul(r, self.lift(i)))
        return x

    def norm(self, g) -> Fraction:
        d = self.decompose(g)
        if self.sub_norm is None:
            raise ScaleError("pair has no norm on H")
        top = d.top()
        return Fraction(self.sub_norm(d.h)) + (self.scale(top) if top else 0)

    def distance(self, a, b) -> Fraction:
        return self.norm(self.ext.ambient.sub(b, a))

    def index_sequence(self, n: int) -> list[int]:
        return [self.chain.index(i) for i in range(1, n + 1)]

    def text(self) -> str:
        return self.ext.text()


def odd_split(pair: OddPair, g):
    """g -> (h_g, class of g)."""
    return (pair.decompose(g).h, pair.ext.project(g))


def odd_split_inverse(pair: OddPair, h, q):
    """(h, q) -> h + sum r_i g_i, with r the balanced digits of q in the quotient chain."""
    G = pair.ext.ambient
    x = pair.ext.include(h)
    for i, r in pair.quotient_chain.digits(q, balanced=True).items():
        x = G.add(x, G.mul(r, pair.lift(i)))
    return x


def _schedule_chain(quotient: Group, schedule, scales=None) -> OneStepChain:
    return denominator_chain(quotient, schedule, scales)


def odd_pair_for(
    G: Group,
    schedule: Sequence[int] | None = None,
    scales: Scales | None = None,
    check_scales: bool = True,
) -> OddPair:
    """The canonical odd pair of a concrete descriptor.

    Z[1/p] (p odd) over Z; Z^n + T over Z^n for T with odd chain indexes;
    Q over Z[1/2] and Q/Z over Z(2^inf), both along an odd denominator
    ``schedule`` (default: the diagonal enumeration of odd primes).
    """
    if isinstance(G, Localized):
        if G.p == 2:
            raise DescriptorError("(Z[1/2], Z) is an even pair; use the dyadic split")
        ext = localization_extension(G.p)
        return OddPair(ext, standard_chain(Prufer(G.p)), sub_norm=L1Norm(1), scales=scales, check_scales=check_scales)
    if isinstance(G, DirectSum) and isinstance(G.parts[0], IntPower) and G.rank == G.parts[0].n:
        if len(G.parts) != 2:
            raise DescriptorError(f"{G.text()}: expected Sum(Z^n, T) with a single torsion summand T")
        torsion = G.parts[1]
        ext = split_extension(G.parts[0].n, torsion)
        qchain = standard_chain(torsion, schedule=schedule)
        n = G.parts[0].n
        zero_h = (0,) * n
        return OddPair(
            ext,
            qchain,
            lifts=lambda i: (zero_h, qchain.generator(i)),
            sub_norm=L1Norm(n),
            scales=scales,
            check_scales=check_scales,
        )
    if isinstance(G, Rationals):
        ext = rational_extension()
        qchain = _schedule_chain(ext.quotient, schedule)
        lifts = lambda i: Fraction(1, qchain.generator(i).denominator)
        return OddPair(ext, qchain, lifts=lifts, sub_norm=DyadicNorm(), scales=scales, check_scales=check_scales)
    if isinstance(G, RationalsModOne):
        ext = torsion_rational_extension()
        qchain = _schedule_chain(ext.quotient, schedule)
        lifts = lambda i: Fraction(1, qchain.generator(i).denominator)
        return OddPair(ext, qchain, lifts=lifts, sub_norm=PruferNorm(2), scales=scales, check_scales=check_scales)
    raise DescriptorError(f"no canonical odd pair for {G.text()}")


# ---------------------------------------------------------------------------
# transfer between odd pairs with equal index sequences


class Transfer:
    """g = h_g + sum r_i g_i  ->  iso(h_g) + sum r_i g'_i."""

    def __init__(self, pair_a: OddPair, pair_b: OddPair, iso: Callable | None = None, check: int = 16):
        n = min(pair_a.chain.horizon(), pair_b.chain.horizon(), check)
        if pair_a.chain.length != pair_b.chain.length or pair_a.index_sequence(n) != pair_b.index_sequence(n):
            raise SplitError("transfer needs equal index sequences")
        self.pair_a = pair_a
        self.pair_b = pair_b
        self.iso = iso or (lambda h: h)

    def __call__(self, g):
        d = self.pair_a.decompose(g)
        return self.pair_b.recompose(Decomposition(self.iso(d.h), d.coeffs))


def transfer(pair_a: OddPair, pair_b: OddPair, g, iso: Callable | None = None):
    return Transfer(pair_a, pair_b, iso)(g)


def transfer_bound(pair_a: OddPair, pair_b: OddPair, K) -> Fraction:
    """C_K = K + K'_{i_K} + sum_{i <= i_K} (i_K - i + 1)(||h'_i|| + ||h_i||),
    with i_K the largest i such that K_i <= K on the first pair's scales."""
    K = Fraction(K)
    horizon = pair_a.chain.horizon()
    i_K = 0
    while i_K < horizon and pair_a.scale(i_K + 1) <= K:
        i_K += 1
    total = K + (pair_b.scale(i_K) if i_K else 0)
    for i in range(1, i_K + 1):
        total += (i_K - i + 1) * (pair_b.correction_norm(i) + pair_a.correction_norm(i))
    return total


# ---------------------------------------------------------------------------
# dyadic split and powers


def dyadic_split(x: Fraction) -> tuple[int, Fraction]:
    """x -> (m_x, x mod 1)."""
    m, _, _ = dyadic_decomposition(x)
    return (m, Fraction(x) % 1)


def dyadic_unsplit(m: int, q: Fraction) -> Fraction:
    """Section of ``dyadic_split``: m + k/2^i for m >= 0, m + (k - 2^i)/2^i for m < 0,
    where q = k/2^i with 0 <= k < 2^i. The zero class maps to m on both branches."""
    q = Fraction(q) % 1
    if q == 0:
        return Fraction(m)
    i = prufer_norm(q, 2)
    k = q.numerator * (2**i // q.denominator)
    if m >= 0:
        return m + Fraction(k, 2**i)
    return m + Fraction(k - 2**i, 2**i)


def power_split(xs: Sequence[Fraction]) -> tuple:
    return tuple(dyadic_split(x) for x in xs)


def power_unsplit(pairs: Sequence[tuple[int, Fraction]]) -> tuple:
    return tuple(dyadic_unsplit(m, q) for m, q in pairs)


# ---------------------------------------------------------------------------
# the composite split of Q


class RationalSplit:
    """Q -> Z + Q/Z, composed from three splits:
    the odd split of (Q, Z[1/2]), the dyadic split of Z[1/2], and the
    inverse odd split of (Q/Z, Z(2^inf)). Both odd pairs use the same
    denominator schedule, so the second coordinate is x mod Z."""

    def __init__(self, schedule: Sequence[int] | None = None):
        self.schedule = list(schedule) if schedule is not None else None
        self.outer = odd_pair_for(Rationals(), self.schedule)
        self.inner = odd_pair_for(RationalsModOne(), self.schedule)

    def __call__(self, x: Fraction) -> tuple[int, Fraction]:
        h, c = odd_split(self.outer, Fraction(x))
        m, p = dyadic_split(h)
        return (m, odd_split_inverse(self.inner, p, c))

    def inverse(self, z: int, q: Fraction) -> Fraction:
        p, c = odd_split(self.inner, Fraction(q) % 1)
        return odd_split_inverse(self.outer, dyadic_unsplit(z, p), c)


def rational_split(x: Fraction, schedule: Sequence[int] | None = None) -> tuple[int, Fraction]:
    return RationalSplit(schedule)(x)


# ---------------------------------------------------------------------------
# restriction of the dyadic power split to a concrete subgroup


@dataclass
class RestrictionReport:
    sample_size: int
    forward_ok: bool
    forward_failures: list
    backward_checked: int
    backward_ok: bool
    backward_unresolved: int
    backward_failures: list
    images: dict

    @property
    def passed(self) -> bool:
        return self.forward_ok and self.backward_ok


def _target_group(K: int, r2: int) -> DirectSum:
    return DirectSum(tuple([Localized(2)] * K + [Prufer(2)] * r2))


def restricted_split(y: tuple, K: int) -> tuple:
    """Dyadic split on the first K coordinates; Prüfer coordinates pass through."""
    dy = power_split(y[:K])
    return (tuple(m for m, _ in dy), tuple(q for _, q in dy) + tuple(y[K:]))


def restricted_unsplit(a: tuple, b: tuple, K: int) -> tuple:
    return power_unsplit(list(zip(a, b[:K]))) + tuple(b[K:])


def even_split_restrict(
    source: Group,
    generators: Sequence,
    images: Sequence,
    K: int,
    r2: int = 0,
    coeff_bound: int = 4,
) -> RestrictionReport:
    """Evaluate the dyadic power split on the image of a concrete embedding.

    The embedding sends ``generators`` of ``source`` to ``images`` in
    Z[1/2]^K + Z(2^inf)^r2. The sample is every integer combination with
    coefficients in [-coeff_bound, coeff_bound]. Forward check: the first
    component of every image lies in G ∩ Z^K and the second is the class of
    the image. Backward check: each (a, b) with a from that intersection and
    b a sampled class is hit by an element of the image subgroup; membership
    is decided against a sample with doubled coefficient bound, and pairs it
    cannot decide are counted as unresolved.
    """
    T = _target_group(K, r2)
    imgs = [T.canon(v) for v in images]
    gens = [source.canon(g) for g in generators]
    if len(gens) != len(imgs):
        raise SplitError("need one image per generator")

    def span(bound: int) -> dict:
        out: dict = {}
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
            x, y = source.zero(), T.zero()
            for c, g, v in zip(coeffs, gens, imgs):
                x = source.add(x, source.mul(c, g))
                y = T.add(y, T.mul(c, v))
            if x in out and out[x] != y:
                raise SplitError(
                    f"inconsistent images: {source.format(x)} maps to both "
                    f"{T.format(out[x])} and {T.format(y)}"
                )
            out[x] = y
        return out

    inner = span(coeff_bound)
    outer_images = set(span(2 * coeff_bound).values())
    int_part = [y for y in outer_images if all(c.denominator == 1 for c in y[:K]) and all(c == 0 for c in y[K:])]
    h_sub = {tuple(int(c) for c in y[:K]) for y in int_part}

    forward_failures = []
    results = {}
    for x, y in inner.items():
        a, b = restricted_split(y, K)
        results[x] = (a, b)
        cls = tuple(c % 1 for c in y[:K]) + tuple(y[K:])
        if b != cls or a not in h_sub:
            forward_failures.append(source.format(x))

    classes = {b for _, b in results.values()}
    inner_h = {tuple(int(c) for c in y[:K]) for y in inner.values() if all(c.denominator == 1 for c in y[:K]) and all(c == 0 for c in y[K:])}
    checked = unresolved = 0
    backward_failures = []
    for a in sorted(inner_h):
        for b in sorted(classes):
            checked += 1
            y = restricted_unsplit(a, b, K)
            if restricted_split(y, K) != (a, b):
                backward_failures.append((a, b))
            elif y not in outer_images:
                unresolved += 1
    return RestrictionReport(
        sample_size=len(inner),
        forward_ok=not forward_failures,
        forward_failures=forward_failures,
        backward_checked=checked,
        backward_ok=not backward_failures,
        backward_unresolved=unresolved,
        backward_failures=backward_failures,
        images=results,
    )
