"""Proper norms and the left-invariant metrics they induce.

A norm object is callable on elements and exposes ``distance(a, b)``,
computed as the norm of ``b - a``. All values are exact (int or Fraction).
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Any, Sequence

from .chains import OneStepChain, standard_chain
from .groups import (
    CoarseError,
    Cyclic,
    CyclicSum,
    DirectSum,
    Group,
    IntPower,
    Localized,
    Prufer,
    format_value,
    is_power_of,
    p_valuation,
)


class NormError(CoarseError):
    pass


class Norm:
    group: Group
    name = "norm"

    def __call__(self, x: Any):
        raise NotImplementedError

    def distance(self, a: Any, b: Any):
        return self(self.group.sub(b, a))


# ---------------------------------------------------------------------------
# word norms


def standard_generators(G: Group) -> list:
    """Symmetric generating set of a finitely generated descriptor."""
    if isinstance(G, IntPower):
        gens = []
        for j in range(G.n):
            e = [0] * G.n
            e[j] = 1
            gens.append(tuple(e))
            e[j] = -1
            gens.append(tuple(e))
        return gens
    if isinstance(G, Cyclic):
        return sorted({1, G.m - 1})
    if isinstance(G, CyclicSum) and G.finitely_generated:
        gens = []
        for i in range(len(G.indexes)):
            e = G.basis(i)
            gens.extend(dict.fromkeys([e, G.neg(e)]))
        return gens
    if isinstance(G, DirectSum) and G.finitely_generated:
        gens = []
        zero = G.zero()
        for j, part in enumerate(G.parts):
            for g in standard_generators(part):
                x = list(zero)
                x[j] = g
                gens.append(tuple(x))
        return gens
    raise NormError(f"{G.text()} is not finitely generated; no word norm")


class WordNorm(Norm):
    """Word length with respect to a finite symmetric generating set, by BFS.

    The explored ball is cached across calls and guarded by a lock, so one
    instance can be shared between threads.
    """

    name = "word"

    def __init__(self, group: Group, gens: Sequence | None = None, radius_cap: int = 1000):
        self.group = group
        gens = list(standard_generators(group) if gens is None else gens)
        closed = list(dict.fromkeys(gens + [group.neg(g) for g in gens]))
        self.gens = [g for g in closed if g != group.zero()]
        self.radius_cap = radius_cap
        self._dist = {group.zero(): 0}
        self._frontier = [group.zero()]
        self._radius = 0
        self._lock = threading.Lock()

    def _grow(self) -> None:
        G = self.group
        nxt = []
        for x in self._frontier:
            for g in self.gens:
                y = G.add(x, g)
                if y not in self._dist:
                    self._dist[y] = self._radius + 1
                    nxt.append(y)
        self._frontier = nxt
        self._radius += 1

    def __call__(self, x):
        with self._lock:
            while x not in self._dist:
                if self._radius >= self.radius_cap or not self._frontier:
                    raise NormError(
                        f"{format_value(x)} not reached within word radius {self._radius}"
                    )
                self._grow()
            return self._dist[x]


class L1Norm(Norm):
    """Sum of absolute coordinates on Z^n: the word norm for the unit vectors."""

    name = "l1"

    def __init__(self, n: int = 1):
        self.group = IntPower(n)

    def __call__(self, x):
        return sum(abs(c) for c in x)


def word_norm(G: Group, gens: Sequence | None, x: Any, radius_cap: int = 1000) -> int:
    return WordNorm(G, gens, radius_cap)(x)


# ---------------------------------------------------------------------------
# dyadic norm


def dyadic_decomposition(x: Fraction) -> tuple[int, int, int]:
    """(m, k, i) with x = m + k/2^i, k odd and i >= 1 off the integers.

    m is the floor for positive x and the ceiling for negative x, so k has
    the sign of x. Integers give (x, 0, 0).
    """
    x = Fraction(x)
    if not is_power_of(x.denominator, 2):
        raise NormError(f"{x} is not dyadic")
    if x.denominator == 1:
        return (x.numerator, 0, 0)
    m = math.floor(x) if x > 0 else math.ceil(x)
    frac = x - m
    return (m, frac.numerator, p_valuation(frac.denominator, 2))


def dyadic_norm(x: Fraction) -> int:
    m, k, i = dyadic_decomposition(x)
    if k == 0:
        return abs(m)
    return abs(m) + i


def _frac_part(x: Fraction) -> tuple[int, Fraction]:
    m, k, i = dyadic_decomposition(x)
    return m, Fraction(k, 2**i) if k else Fraction(0)


def dyadic_delta(x: Fraction, y: Fraction) -> int:
    """Carry term: ||x + y|| = |m_x + m_y + delta| + max i over non-integral terms."""
    mx, fx = _frac_part(x)
    my, fy = _frac_part(y)
    M, s = mx + my, fx + fy
    if (M > 0 and s < 0) or (M < 0 and s <= -1):
        return -1
    if (M >= 0 and 0 <= s < 1) or (M <= 0 and -1 < s <= 0):
        return 0
    return 1


def pair_exponent(x: Fraction, y: Fraction) -> int:
    """max of i_x, i_y over the terms that are not integers (0 if both are)."""
    _, kx, ix = dyadic_decomposition(x)
    _, ky, iy = dyadic_decomposition(y)
    return max(ix if kx else 0, iy if ky else 0)


class DyadicNorm(Norm):
    name = "dyadic"
    group = Localized(2)

    def __call__(self, x):
        return dyadic_norm(x)


# ---------------------------------------------------------------------------
# Prüfer and chain ultrametrics


def prufer_norm(x: Fraction, p: int = 2) -> int:
    """Minimal n with p^n x = 0 in Z(p^inf)."""
    x = Fraction(x) % 1
    if x == 0:
        return 0
    return p_valuation(x.denominator, p)


class PruferNorm(Norm):
    name = "prufer"

    def __init__(self, p: int = 2):
        self.p = p
        self.group = Prufer(p)

    def __call__(self, x):
        return prufer_norm(x, self.p)


class ChainUltraNorm(Norm):
    """x -> K_n for the minimal n with x in G_n (0 at the identity)."""

    name = "ultra"

    def __init__(self, chain: OneStepChain):
        if not chain.trivial_bottom:
            raise NormError("the chain ultrametric needs G_0 trivial")
        self.chain = chain
        self.group = chain.base

    def __call__(self, x):
        n = self.chain.level(x)
        return self.chain.scale(n) if n else Fraction(0)


class PseudoUltraNorm(Norm):
    """||h_x||_H + K_top for the balanced decomposition of an odd pair."""

    name = "pseudo"

    def __init__(self, pair):
        self.pair = pair
        self.group = pair.ext.ambient

    def __call__(self, x):
        return self.pair.norm(x)


class _Integers(Group):
    """Bare-int copy of Z, used for the integer coordinate of split maps."""

    def zero(self):
        return 0

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool)

    def text(self):
        return "Z"


INTEGERS = _Integers()


class IntegerNorm(Norm):
    name = "abs"
    group = INTEGERS

    def __call__(self, x):
        return abs(x)


class SumNorm(Norm):
    """l1 combination of component norms on tuples."""

    name = "sum"

    def __init__(self, norms: Sequence[Norm], group: Group | None = None):
        self.norms = list(norms)
        self.group = group or DirectSum(tuple(n.group for n in self.norms))

    def __call__(self, x):
        return sum((n(v) for n, v in zip(self.norms, x)), Fraction(0))

    def distance(self, a, b):
        return sum((n.distance(u, v) for n, u, v in zip(self.norms, a, b)), Fraction(0))


def sum_metric(dA, dB, p1, p2):
    """l1 sum of two component metrics on pairs."""
    return dA(p1[0], p2[0]) + dB(p1[1], p2[1])


# ---------------------------------------------------------------------------
# odd-pair scale bounds


def k_sequence_min(pair, n: int) -> Fraction:
    """Least admissible K_n for an odd pair: sum_{i<=n} (n - i + 1) ||h_{m_i g_i}||_H."""
    total = Fraction(0)
    for i in range(1, n + 1):
        total += (n - i + 1) * pair.correction_norm(i)
    return total


def pseudo_ultrametric_norm(pair, x) -> Fraction:
    return pair.norm(x)


def default_norm(G: Group, bound: int | None = None) -> Norm:
    """A reasonable proper norm for a descriptor, used by the CLI."""
    if isinstance(G, Localized) and G.p == 2:
        return DyadicNorm()
    if isinstance(G, Prufer):
        return PruferNorm(G.p)
    if G.finitely_generated:
        cap = 10 * bound if bound else 1000
        return WordNorm(G, radius_cap=cap)
    if G.rank == 0:
        return ChainUltraNorm(standard_chain(G))
    if isinstance(G, DirectSum):
        return SumNorm([default_norm(p, bound) for p in G.parts], G)
    raise NormError(f"no default norm for {G.text()}; pick a metric explicitly")
