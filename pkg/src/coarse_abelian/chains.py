"""One-step ascending chains, their ultrametrics, prime refinement and
standardization of locally finite groups onto prime cyclic sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from sympy import factorint, prime

from .groups import (
    CoarseError,
    Cyclic,
    CyclicSum,
    DescriptorError,
    DirectSum,
    Group,
    Prufer,
    RationalsModLocalized,
    RationalsModOne,
    Support,
    format_value,
    p_valuation,
)

MEMBER_LIMIT = 10**6


class ChainError(CoarseError):
    pass


def _rational(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


class Scales:
    """Strictly increasing scale sequence K_1 < K_2 < ... with K_0 = 0.

    An explicit prefix is followed by an affine continuation with the given
    step, so the sequence is unbounded.
    """

    def __init__(self, prefix: Sequence = (), step=1):
        self.prefix = tuple(_rational(k) for k in prefix)
        self.step = _rational(step)
        if self.step <= 0:
            raise ChainError(f"scale step must be positive, got {self.step}")
        prev = Fraction(0)
        for k in self.prefix:
            if k <= prev:
                raise ChainError(f"scales must be positive and strictly increasing: {list(map(str, self.prefix))}")
            prev = k

    def __call__(self, i: int) -> Fraction:
        if i <= 0:
            return Fraction(0)
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        last = self.prefix[-1] if self.prefix else Fraction(0)
        return last + self.step * (i - len(self.prefix))

    def last_below(self, K, limit: int = 10**6) -> int:
        """Largest i >= 0 with K_i <= K."""
        K = _rational(K)
        i = 0
        while i < limit and self(i + 1) <= K:
            i += 1
        return i

    @classmethod
    def parse(cls, text: str, step=None) -> "Scales":
        """"1/2,1" or "1/2,1;+2"; without a step the last gap continues."""
        text, _, tail = text.partition(";")
        if tail.strip():
            step = Fraction(tail.strip().lstrip("+"))
        parts = [t.strip() for t in text.split(",") if t.strip()]
        prefix = [Fraction(t) for t in parts]
        if step is None:
            step = prefix[-1] - prefix[-2] if len(prefix) >= 2 else 1
        return cls(prefix, step)

    def text(self) -> str:
        return ",".join(str(k) for k in self.prefix) + f";+{self.step}"

    def __eq__(self, other):
        return isinstance(other, Scales) and (self.prefix, self.step) == (other.prefix, other.step)

    def __hash__(self):
        return hash((self.prefix, self.step))

    def __repr__(self):
        return f"Scales({[str(k) for k in self.prefix]}, step={self.step})"


def _as_lookup(obj) -> tuple[Callable[[int], Any], int | None]:
    if callable(obj):
        return obj, None
    seq = tuple(obj)
    return (lambda i: seq[i - 1]), len(seq)


class OneStepChain:
    """G_0 < G_1 < ... with G_i = <G_{i-1}, g_i> and m_i = [G_i : G_{i-1}].

    Generators and indexes are 1-based and may be given as lists or as
    callables (lazy, infinite chains). ``level(x)`` is the minimal n with
    x in G_n; when no level function is supplied it is found by brute force
    from ``members``, which needs G_0 trivial.
    """

    def __init__(
        self,
        base: Group,
        generator,
        index,
        length: int | None = None,
        scales: Scales | None = None,
        level: Callable[[Any], int] | None = None,
        cap: int = 64,
        trivial_bottom: bool = True,
    ):
        self.base = base
        self._gen, glen = _as_lookup(generator)
        self._idx, ilen = _as_lookup(index)
        lengths = {n for n in (length, glen, ilen) if n is not None}
        if len(lengths) > 1:
            raise ChainError(f"inconsistent chain lengths {sorted(lengths)}")
        self.length = lengths.pop() if lengths else None
        self.scales = scales or Scales()
        self._level = level
        self.cap = cap
        self.trivial_bottom = trivial_bottom
        self._gens: dict[int, Any] = {}
        self._members: dict[int, frozenset] = {}

    @property
    def finite(self) -> bool:
        return self.length is not None

    def _check_i(self, i: int) -> None:
        if i < 1 or (self.length is not None and i > self.length):
            raise ChainError(f"chain step {i} outside 1..{self.length if self.length is not None else 'inf'}")

    def generator(self, i: int) -> Any:
        self._check_i(i)
        if i not in self._gens:
            self._gens[i] = self._gen(i)
        return self._gens[i]

    def index(self, i: int) -> int:
        self._check_i(i)
        return self._idx(i)

    def scale(self, i: int) -> Fraction:
        return self.scales(i)

    def horizon(self) -> int:
        """Number of materializable steps: the length, or the safety cap."""
        return self.length if self.length is not None else self.cap

    def members(self, n: int) -> frozenset:
        """All elements of G_n, by closure (G_0 trivial)."""
        if not self.trivial_bottom:
            raise ChainError("members() needs a chain starting at the trivial subgroup")
        if n in self._members:
            return self._members[n]
        G = self.base
        if n == 0:
            out = frozenset([G.zero()])
        else:
            prev = self.members(n - 1)
            m = self.index(n)
            if len(prev) * m > MEMBER_LIMIT:
                raise ChainError(f"G_{n} has more than {MEMBER_LIMIT} elements")
            g = self.generator(n)
            layer = set()
            shift = G.zero()
            for _ in range(m):
                layer.update(G.add(x, shift) for x in prev)
                shift = G.add(shift, g)
            out = frozenset(layer)
        self._members[n] = out
        return out

    def level(self, x: Any) -> int:
        if self._level is not None:
            n = self._level(x)
            if self.length is not None and n > self.length:
                raise ChainError(f"{format_value(x)} lies outside the chain")
            return n
        for n in range(0, self.horizon() + 1):
            if x in self.members(n):
                return n
        raise ChainError(f"{format_value(x)} not found in the first {self.horizon()} chain steps")

    def digits(self, x: Any, balanced: bool = False) -> dict[int, int]:
        """Coefficients r_i with x = sum r_i g_i (G_0 trivial).

        Plain digits lie in [0, m_i); balanced digits lie in [-k_i, k_i]
        and need every index odd, m_i = 2 k_i + 1.
        """
        out, rest = self.expand(x, balanced)
        if self.trivial_bottom and rest != self.base.zero():
            raise ChainError("digit expansion left a non-zero remainder")
        return out

    def expand(self, x: Any, balanced: bool = False) -> tuple[dict[int, int], Any]:
        """Top-down coset solving: x = rest + sum r_i g_i with rest in G_0."""
        G = self.base
        out: dict[int, int] = {}
        n = self.level(x)
        while n > 0:
            m = self.index(n)
            if balanced:
                if m % 2 == 0:
                    raise ChainError(f"balanced digits need odd indexes, step {n} has {m}")
                k = m // 2
                candidates = range(-k, k + 1)
            else:
                candidates = range(m)
            g = self.generator(n)
            for r in candidates:
                y = G.sub(x, G.mul(r, g))
                lower = self.level(y)
                if lower < n:
                    break
            else:
                raise ChainError(f"no coset solution at step {n} for {format_value(x)}")
            if r:
                out[n] = r
            x, n = y, lower
        return out, x

    def combine(self, digits: dict[int, int]) -> Any:
        G = self.base
        x = G.zero()
        for i, r in digits.items():
            x = G.add(x, G.mul(r, self.generator(i)))
        return x

    def with_scales(self, scales: Scales) -> "OneStepChain":
        clone = object.__new__(type(self))
        clone.__dict__.update(self.__dict__)
        clone.scales = scales
        return clone

    def rows(self, n: int | None = None) -> list[tuple[int, str, int, Fraction]]:
        """(i, generator, m_i, K_i) rows for report serialization."""
        n = self.horizon() if n is None else min(n, self.horizon())
        return [
            (i, self.base.format(self.generator(i)), self.index(i), self.scale(i))
            for i in range(1, n + 1)
        ]


def ultrametric_distance(chain: OneStepChain, a: Any, b: Any) -> Fraction:
    if a == b:
        return Fraction(0)
    return chain.scale(chain.level(chain.base.sub(b, a)))


# ---------------------------------------------------------------------------
# standard chains


def diagonal_schedule(exclude: Sequence[int] = ()) -> Callable[[int], int]:
    """1-based schedule q_1, q_2, ... running through the primes outside
    ``exclude`` in growing initial segments: with exclude=(2,) this is
    3; 3,5; 3,5,7; ..."""
    excluded = set(exclude)
    pool: list[int] = []

    scanned = [0]

    def nth(j: int) -> int:
        while len(pool) <= j:
            scanned[0] += 1
            p = prime(scanned[0])
            if p not in excluded:
                pool.append(p)
        return pool[j]

    def q(i: int) -> int:
        i -= 1
        block = 1
        while i >= block:
            i -= block
            block += 1
        return nth(i)

    return q


def denominator_chain(G: Group, schedule=None, scales: Scales | None = None, cap: int = 64) -> OneStepChain:
    """Chain 0 < <1/Q_1> < <1/Q_2> < ... of a rational torsion group, Q_i = q_1...q_i."""
    if isinstance(G, RationalsModOne):
        default_exclude: tuple[int, ...] = ()
    elif isinstance(G, RationalsModLocalized):
        default_exclude = (G.p,)
    else:
        raise DescriptorError(f"denominator chains are for Q/Z and Q/Z[1/p], not {G.text()}")
    q, length = _as_lookup(schedule if schedule is not None else diagonal_schedule(default_exclude))
    if isinstance(G, RationalsModLocalized):
        for i in range(1, (length or 8) + 1):
            if q(i) % G.p == 0:
                raise ChainError(f"schedule entry {q(i)} is divisible by {G.p}")
    products = [1]

    def Q(i: int) -> int:
        while len(products) <= i:
            products.append(products[-1] * q(len(products)))
        return products[i]

    def level(x: Fraction) -> int:
        den = x.denominator
        horizon = length if length is not None else cap
        for i in range(0, horizon + 1):
            if Q(i) % den == 0:
                return i
        raise ChainError(f"{x} lies beyond {horizon} steps of the denominator schedule")

    return OneStepChain(
        G,
        lambda i: G.canon(Fraction(1, Q(i))),
        q,
        length=length,
        scales=scales,
        level=level,
        cap=cap,
    )


def _cyclic_sum_level(x: Support) -> int:
    return x.top() + 1


def standard_chain(G: Group, scales: Scales | None = None, schedule=None, cap: int = 64) -> OneStepChain:
    """Standard one-step chain of a locally finite descriptor.

    CyclicSum: basis vectors e_i with the listed indexes. Cyclic(m): one
    step of index m. Prufer(p): generators 1/p^i. Q/Z and Q/Z[1/p]:
    denominator chain over ``schedule``. DirectSum: parts chained in order;
    all parts but the last must be finite.
    """
    if isinstance(G, Cyclic):
        return OneStepChain(G, [1], [G.m], scales=scales, level=lambda x: 0 if x == 0 else 1)
    if isinstance(G, CyclicSum):
        return OneStepChain(
            G,
            lambda i: G.basis(i - 1),
            lambda i: G.index(i - 1),
            length=G.length,
            scales=scales,
            level=_cyclic_sum_level,
            cap=cap,
        )
    if isinstance(G, Prufer):
        return OneStepChain(
            G,
            lambda i: Fraction(1, G.p**i),
            lambda i: G.p,
            scales=scales,
            level=lambda x: 0 if x == 0 else p_valuation(x.denominator, G.p),
            cap=cap,
        )
    if isinstance(G, (RationalsModOne, RationalsModLocalized)):
        return denominator_chain(G, schedule, scales, cap)
    if isinstance(G, DirectSum):
        return _sum_chain(G, scales, cap)
    raise DescriptorError(f"{G.text()} is not locally finite")


def _sum_chain(G: DirectSum, scales, cap) -> OneStepChain:
    chains = [standard_chain(part, cap=cap) for part in G.parts]
    for c in chains[:-1]:
        if not c.finite:
            raise DescriptorError(f"{G.text()}: only the last summand may be infinite")
    offsets = [0]
    for c in chains[:-1]:
        offsets.append(offsets[-1] + c.length)
    total = None if not chains[-1].finite else offsets[-1] + chains[-1].length
    zero = G.zero()

    def locate(i: int) -> tuple[int, int]:
        for j in reversed(range(len(chains))):
            if i > offsets[j]:
                return j, i - offsets[j]
        raise ChainError(i)

    def gen(i):
        j, local = locate(i)
        out = list(zero)
        out[j] = chains[j].generator(local)
        return tuple(out)

    def idx(i):
        j, local = locate(i)
        return chains[j].index(local)

    def level(x):
        best = 0
        for j, c in enumerate(chains):
            n = c.level(x[j])
            if n:
                best = offsets[j] + n
        return best

    return OneStepChain(G, gen, idx, length=total, scales=scales, level=level, cap=cap)


# ---------------------------------------------------------------------------
# prime refinement


def prime_factors(m: int) -> list[int]:
    """Prime factors with multiplicity, ascending."""
    out = []
    for p, e in sorted(factorint(m).items()):
        out.extend([p] * e)
    return out


class RefinedChain(OneStepChain):
    """Prime refinement of a chain: a step of index m = p_1...p_n (ascending)
    becomes n steps with generators (m / (p_1...p_k)) g and indexes p_k."""

    def __init__(self, original: OneStepChain, scales: Scales | None = None):
        self.original = original
        self._blocks: list[list[int]] = []
        self._offsets: list[int] = [0]
        length = None
        if original.finite:
            for i in range(1, original.length + 1):
                self._block(i)
            length = self._offsets[original.length]
        super().__init__(
            original.base,
            self._refined_generator,
            self._refined_index,
            length=length,
            scales=scales,
            level=self._refined_level,
            cap=original.cap * 8,
        )

    def _block(self, i: int) -> list[int]:
        while len(self._blocks) < i:
            step = len(self._blocks) + 1
            factors = prime_factors(self.original.index(step))
            self._blocks.append(factors)
            self._offsets.append(self._offsets[-1] + len(factors))
        return self._blocks[i - 1]

    def block_products(self, n: int) -> list[int]:
        out = []
        for i in range(1, n + 1):
            prod = 1
            for p in self._block(i):
                prod *= p
            out.append(prod)
        return out

    def offset(self, i: int) -> int:
        """Number of refined steps before original step i + 1."""
        if i > 0:
            self._block(i)
        return self._offsets[i]

    def _locate(self, j: int) -> tuple[int, int]:
        i = 1
        while self.offset(i) < j:
            i += 1
            if i > self.original.horizon():
                raise ChainError(f"refined step {j} beyond the original chain")
        return i, j - self.offset(i - 1)

    def _refined_generator(self, j: int):
        i, k = self._locate(j)
        factors = self._block(i)
        m = self.original.index(i)
        div = 1
        for p in factors[:k]:
            div *= p
        return self.base.mul(m // div, self.original.generator(i))

    def _refined_index(self, j: int) -> int:
        i, k = self._locate(j)
        return self._block(i)[k - 1]

    def _refined_level(self, x) -> int:
        n = self.original.level(x)
        if n == 0:
            return 0
        G = self.base
        m = self.original.index(n)
        g = self.original.generator(n)
        for r in range(1, m):
            if self.original.level(G.sub(x, G.mul(r, g))) < n:
                break
        else:
            raise ChainError(f"no coset digit at step {n}")
        div = 1
        for k, p in enumerate(self._block(n), start=1):
            div *= p
            if r % (m // div) == 0:
                return self.offset(n - 1) + k
        raise ChainError("unreachable refinement level")


def refine_to_prime(chain: OneStepChain) -> RefinedChain:
    return RefinedChain(chain)


# ---------------------------------------------------------------------------
# standardization


@dataclass(frozen=True)
class Standardization:
    source: Group
    target: CyclicSum
    chain: OneStepChain
    target_chain: OneStepChain

    def forward(self, x):
        digits = self.chain.digits(x)
        return Support(sorted((j - 1, r) for j, r in digits.items() if r))

    def backward(self, y):
        return self.chain.combine({j + 1: r for j, r in y})


def _target_descriptor(G: Group, refined: RefinedChain) -> CyclicSum:
    if refined.finite:
        return CyclicSum(tuple(refined.index(j) for j in range(1, refined.length + 1)))
    if isinstance(G, Prufer):
        return CyclicSum((G.p,), "repeat-last")
    if isinstance(G, CyclicSum):
        flat = tuple(p for m in G.indexes for p in prime_factors(m))
        last_prime = len(prime_factors(G.indexes[-1])) == 1 if G.indexes else True
        if G.rule in ("cycle", "odd-primes") or last_prime:
            return CyclicSum(flat, G.rule)
    raise DescriptorError(f"the prime refinement of {G.text()} is not expressible as a CyclicSum descriptor")


def standardize(G: Group, scales: Scales | None = None) -> Standardization:
    """Isometric identification of a locally finite group with a prime cyclic sum.

    Both sides carry the ultrametric of their chain with the same scales
    (default K_i = i): the source uses the prime refinement of its standard
    chain, the target its standard basis chain.
    """
    if G.rank != 0:
        raise DescriptorError(f"{G.text()} is not locally finite")
    refined = RefinedChain(standard_chain(G), scales=scales)
    target = _target_descriptor(G, refined)
    target_chain = standard_chain(target, scales=scales)
    return Standardization(G, target, refined, target_chain)


# ---------------------------------------------------------------------------
# pairs (G, H) and their derived chains


@dataclass(frozen=True)
class Extension:
    """A short exact sequence 0 -> sub -> ambient -> quotient -> 0.

    ``include`` maps sub elements into the ambient group, ``restrict`` is its
    partial inverse (raising on elements outside the subgroup), and
    ``project`` is the quotient map.
    """

    ambient: Group
    sub: Group
    quotient: Group
    include: Callable[[Any], Any]
    restrict: Callable[[Any], Any]
    project: Callable[[Any], Any]
    name: str = ""

    def in_sub(self, x) -> bool:
        return self.project(x) == self.quotient.zero()

    def text(self) -> str:
        return self.name or f"({self.ambient.text()}, {self.sub.text()})"


def derived_chain(ext: Extension, quotient_chain: OneStepChain, lifts=None, check: int = 8) -> OneStepChain:
    """Chain H = G_0 < G_1 < ... of the ambient group with G_i the preimage
    of the i-th quotient chain subgroup, generated over H by the lifts."""
    if quotient_chain.base != ext.quotient:
        raise ChainError(f"quotient chain lives on {quotient_chain.base.text()}, expected {ext.quotient.text()}")
    if lifts is None:
        raise ChainError("derived_chain needs lifts of the quotient generators")
    lift, llen = _as_lookup(lifts)
    length = quotient_chain.length
    if llen is not None:
        if length is None or llen < length:
            length = llen if length is None else min(llen, length)
    horizon = length if length is not None else min(check, quotient_chain.cap)
    for i in range(1, min(horizon, check) + 1):
        g = lift(i)
        if not ext.ambient.contains(g):
            raise ChainError(f"lift {i} is not an element of {ext.ambient.text()}")
        if ext.project(g) != quotient_chain.generator(i):
            raise ChainError(
                f"lift {i} = {ext.ambient.format(g)} does not project to "
                f"{ext.quotient.format(quotient_chain.generator(i))}"
            )
    return OneStepChain(
        ext.ambient,
        lift,
        quotient_chain.index,
        length=length,
        scales=quotient_chain.scales,
        level=lambda x: quotient_chain.level(ext.project(x)),
        cap=quotient_chain.cap,
        trivial_bottom=False,
    )
