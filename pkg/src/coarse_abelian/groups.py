"""Symbolic countable abelian groups with exact canonical elements.

Element representations by descriptor:

    IntPower(n)               tuple of n ints
    Cyclic(m)                 int in [0, m)
    CyclicSum(...)            Support: sorted ((index, residue), ...) with
                              non-zero residues, indexes 0-based
    Localized(p), Rationals   Fraction (denominator a power of p for Localized)
    Prufer(p)                 Fraction in [0, 1) with p-power denominator
    RationalsModOne           Fraction in [0, 1)
    RationalsModLocalized(p)  Fraction in [0, 1) with denominator prime to p
    DirectSum(parts)          tuple of part elements
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

from sympy import isprime, prime


class CoarseError(Exception):
    """Base class for errors raised by this package."""


class DescriptorError(CoarseError, ValueError):
    pass


class ElementError(CoarseError, ValueError):
    pass


class ParseError(CoarseError, ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}: {text[:pos]}<<{text[pos:]}"
        super().__init__(message)


class Support(tuple):
    """Finite-support vector of a cyclic sum, as sorted (index, residue) pairs."""

    __slots__ = ()

    def __new__(cls, items: Iterable[tuple[int, int]] = ()):
        return super().__new__(cls, items)

    def get(self, i: int) -> int:
        for j, r in self:
            if j == i:
                return r
        return 0

    def top(self) -> int:
        """Largest index in the support, -1 for the zero vector."""
        return self[-1][0] if self else -1

    def __str__(self) -> str:
        return "{" + ",".join(f"{i}:{r}" for i, r in self) + "}"

    def __repr__(self) -> str:
        return f"Support({str(self)})"


def format_value(x: Any) -> str:
    """Canonical text for a bare value (no descriptor context)."""
    if isinstance(x, bool):
        raise ElementError(f"not a group value: {x!r}")
    if isinstance(x, Support):
        return str(x)
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, tuple):
        return "(" + ",".join(format_value(v) for v in x) + ")"
    raise ElementError(f"not a group value: {x!r}")


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _to_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if _is_int(x):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ElementError(f"expected a rational, got {x!r}")


def p_valuation(n: int, p: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def odd_primes_diagonal(i: int) -> int:
    """i-th term (0-based) of 3, 3,5, 3,5,7, 3,5,7,11, ..."""
    block = 1
    while i >= block:
        i -= block
        block += 1
    return prime(i + 2)


RULES = ("repeat-last", "cycle", "odd-primes")
_RULE_ALIASES = {
    "repeat-last": "repeat-last",
    "cycle": "cycle",
    "cycle-list": "cycle",
    "odd-primes": "odd-primes",
    "all-odd-primes-diagonal": "odd-primes",
}


class Group:
    """Common interface; subclasses are frozen dataclasses."""

    def zero(self) -> Any:
        raise NotImplementedError

    def add(self, a: Any, b: Any) -> Any:
        raise NotImplementedError

    def neg(self, a: Any) -> Any:
        raise NotImplementedError

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def mul(self, n: int, a: Any) -> Any:
        if n < 0:
            return self.mul(-n, self.neg(a))
        result = self.zero()
        while n:
            if n & 1:
                result = self.add(result, a)
            a = self.add(a, a)
            n >>= 1
        return result

    def canon(self, x: Any) -> Any:
        """Coerce a loose value (ints, Fractions, dicts, tuples) to canonical form."""
        raise NotImplementedError

    def contains(self, x: Any) -> bool:
        """True iff ``x`` is a canonical element of this group."""
        raise NotImplementedError

    def elements(self, bound: int) -> list:
        raise NotImplementedError

    def format(self, x: Any) -> str:
        return format_value(x)

    def text(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.text()

    # structural invariants
    rank: int = 0
    finitely_generated: bool = True

    @property
    def finite(self) -> bool:
        return self.rank == 0 and self.finitely_generated

    @property
    def locally_finite(self) -> bool:
        return self.rank == 0


@dataclass(frozen=True)
class IntPower(Group):
    n: int

    def __post_init__(self):
        if not _is_int(self.n) or self.n < 0:
            raise DescriptorError(f"Z^n needs n >= 0, got {self.n!r}")

    @property
    def rank(self) -> int:
        return self.n

    finitely_generated = True

    def zero(self):
        return (0,) * self.n

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, k, a):
        return tuple(k * x for x in a)

    def canon(self, x):
        if _is_int(x) and self.n == 1:
            return (x,)
        if isinstance(x, Fraction) and self.n == 1 and x.denominator == 1:
            return (x.numerator,)
        if isinstance(x, (tuple, list)) and len(x) == self.n:
            out = []
            for v in x:
                if isinstance(v, Fraction) and v.denominator == 1:
                    v = v.numerator
                if not _is_int(v):
                    raise ElementError(f"{x!r} is not in {self.text()}")
                out.append(v)
            return tuple(out)
        raise ElementError(f"{x!r} is not in {self.text()}")

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == self.n and all(_is_int(v) for v in x)

    def elements(self, bound):
        r = range(-bound, bound + 1)
        return [tuple(c) for c in itertools.product(r, repeat=self.n)]

    def format(self, x):
        if self.n == 1:
            return str(x[0])
        return format_value(x)

    def text(self):
        return f"Z^{self.n}"


@dataclass(frozen=True)
class Cyclic(Group):
    m: int

    def __post_init__(self):
        if not _is_int(self.m) or self.m < 2:
            raise DescriptorError(f"Z/m needs m >= 2, got {self.m!r}")

    rank = 0
    finitely_generated = True

    def zero(self):
        return 0

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return -a % self.m

    def mul(self, k, a):
        return k * a % self.m

    def canon(self, x):
        if isinstance(x, Fraction) and x.denominator == 1:
            x = x.numerator
        if not _is_int(x):
            raise ElementError(f"{x!r} is not in {self.text()}")
        return x % self.m

    def contains(self, x):
        return _is_int(x) and 0 <= x < self.m

    def elements(self, bound):
        return list(range(self.m))

    def text(self):
        return f"Z/{self.m}"


@dataclass(frozen=True)
class CyclicSum(Group):
    """Direct sum of cyclic groups; infinite when a continuation rule is set."""

    indexes: tuple[int, ...]
    rule: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "indexes", tuple(self.indexes))
        if self.rule is not None:
            if self.rule not in _RULE_ALIASES:
                raise DescriptorError(f"unknown continuation rule {self.rule!r}")
            object.__setattr__(self, "rule", _RULE_ALIASES[self.rule])
        if not self.indexes and self.rule != "odd-primes":
            raise DescriptorError("CyclicSum needs at least one index")
        for m in self.indexes:
            if not _is_int(m) or m < 2:
                raise DescriptorError(f"cyclic index must be >= 2, got {m!r}")

    rank = 0

    @property
    def finitely_generated(self) -> bool:
        return self.rule is None

    @property
    def length(self) -> int | None:
        return None if self.rule else len(self.indexes)

    def index(self, i: int) -> int:
        """Order of the i-th summand (0-based)."""
        if i < 0:
            raise IndexError(i)
        if i < len(self.indexes):
            return self.indexes[i]
        if self.rule is None:
            raise IndexError(f"{self.text()} has only {len(self.indexes)} summands")
        if self.rule == "repeat-last":
            return self.indexes[-1]
        if self.rule == "cycle":
            return self.indexes[i % len(self.indexes)]
        return odd_primes_diagonal(i - len(self.indexes))

    def zero(self):
        return Support()

    def add(self, a, b):
        out = dict(a)
        for i, r in b:
            v = (out.get(i, 0) + r) % self.index(i)
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return Support(sorted(out.items()))

    def neg(self, a):
        return Support((i, self.index(i) - r) for i, r in a)

    def mul(self, k, a):
        out = []
        for i, r in a:
            v = k * r % self.index(i)
            if v:
                out.append((i, v))
        return Support(out)

    def basis(self, i: int) -> Support:
        """Standard basis vector e_{i+1} (0-based slot i)."""
        self.index(i)
        return Support(((i, 1),))

    def canon(self, x):
        if isinstance(x, dict):
            items = x.items()
        elif isinstance(x, (tuple, list)):
            items = list(x)
        else:
            raise ElementError(f"{x!r} is not in {self.text()}")
        out = {}
        for i, r in items:
            if isinstance(r, Fraction) and r.denominator == 1:
                r = r.numerator
            if not (_is_int(i) and _is_int(r)) or i < 0:
                raise ElementError(f"bad support entry {i!r}:{r!r}")
            try:
                m = self.index(i)
            except IndexError as exc:
                raise ElementError(str(exc)) from None
            v = (out.get(i, 0) + r) % m
            if v:
                out[i] = v
            else:
                out.pop(i, None)
        return Support(sorted(out.items()))

    def contains(self, x):
        if not isinstance(x, Support):
            return False
        last = -1
        for i, r in x:
            if not (_is_int(i) and _is_int(r)) or i <= last:
                return False
            try:
                m = self.index(i)
            except IndexError:
                return False
            if not 0 < r < m:
                return False
            last = i
        return True

    def elements(self, bound):
        width = bound if self.rule else min(bound, len(self.indexes))
        ranges = [range(self.index(i)) for i in range(width)]
        out = []
        for combo in itertools.product(*ranges):
            out.append(Support((i, r) for i, r in enumerate(combo) if r))
        return out

    def text(self):
        body = "[" + ",".join(str(m) for m in self.indexes) + "]"
        if self.rule:
            return f"CyclicSum({body}; {self.rule})"
        return f"CyclicSum({body})"


@dataclass(frozen=True)
class Localized(Group):
    """Z[1/p]: rationals whose denominator is a power of p."""

    p: int

    def __post_init__(self):
        if not _is_int(self.p) or not isprime(self.p):
            raise DescriptorError(f"Z[1/p] needs p prime, got {self.p!r}")

    rank = 1
    finitely_generated = False

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, k, a):
        return k * a

    def canon(self, x):
        q = _to_fraction(x)
        if not is_power_of(q.denominator, self.p):
            raise ElementError(f"{q} is not in {self.text()}")
        return q

    def contains(self, x):
        return isinstance(x, Fraction) and is_power_of(x.denominator, self.p)

    def elements(self, bound):
        dens = []
        d = 1
        while d <= bound:
            dens.append(d)
            d *= self.p
        out = set()
        for d in dens:
            for a in range(-bound * d, bound * d + 1):
                out.add(Fraction(a, d))
        return sorted(out)

    def text(self):
        return f"Z[1/{self.p}]"


@dataclass(frozen=True)
class Prufer(Group):
    """Z(p^inf), realized as p-power-denominator classes in [0, 1)."""

    p: int

    def __post_init__(self):
        if not _is_int(self.p) or not isprime(self.p):
            raise DescriptorError(f"Prufer(p) needs p prime, got {self.p!r}")

    rank = 0
    finitely_generated = False

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return (a + b) % 1

    def neg(self, a):
        return -a % 1

    def mul(self, k, a):
        return k * a % 1

    def canon(self, x):
        if isinstance(x, tuple) and len(x) == 2 and all(_is_int(v) for v in x):
            a, i = x
            x = Fraction(a, self.p**i)
        q = _to_fraction(x) % 1
        if not is_power_of(q.denominator, self.p):
            raise ElementError(f"{x} is not in {self.text()}")
        return q

    def contains(self, x):
        return isinstance(x, Fraction) and 0 <= x < 1 and is_power_of(x.denominator, self.p)

    def pair(self, x: Fraction) -> tuple[int, int]:
        """The (a, i) form: x = a / p^i with p not dividing a (or (0, 0))."""
        if x == 0:
            return (0, 0)
        return (x.numerator, p_valuation(x.denominator, self.p))

    def elements(self, bound):
        out = [Fraction(0)]
        for i in range(1, bound + 1):
            d = self.p**i
            out.extend(Fraction(a, d) for a in range(1, d) if a % self.p)
        return out

    def text(self):
        return f"Prufer({self.p})"


@dataclass(frozen=True)
class Rationals(Group):
    rank = 1
    finitely_generated = False

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, k, a):
        return k * a

    def canon(self, x):
        return _to_fraction(x)

    def contains(self, x):
        return isinstance(x, Fraction)

    def elements(self, bound):
        out = set()
        for d in range(1, bound + 1):
            for a in range(-bound * d, bound * d + 1):
                out.add(Fraction(a, d))
        return sorted(out)

    def text(self):
        return "Q"


@dataclass(frozen=True)
class RationalsModOne(Group):
    rank = 0
    finitely_generated = False

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return (a + b) % 1

    def neg(self, a):
        return -a % 1

    def mul(self, k, a):
        return k * a % 1

    def canon(self, x):
        return _to_fraction(x) % 1

    def contains(self, x):
        return isinstance(x, Fraction) and 0 <= x < 1

    def elements(self, bound):
        out = [Fraction(0)]
        for d in range(2, bound + 1):
            out.extend(Fraction(a, d) for a in range(1, d) if math.gcd(a, d) == 1)
        return out

    def text(self):
        return "Q/Z"


def _mod_localized(q: Fraction, p: int) -> Fraction:
    """Representative of q + Z[1/p] in [0, 1) with denominator prime to p."""
    den = q.denominator
    ppart = 1
    while den % p == 0:
        den //= p
        ppart *= p
    if den == 1:
        return Fraction(0)
    c = q.numerator * pow(ppart, -1, den) % den
    return Fraction(c, den)


@dataclass(frozen=True)
class RationalsModLocalized(Group):
    """Q/Z[1/p], represented by classes in [0, 1) with denominator prime to p."""

    p: int

    def __post_init__(self):
        if not _is_int(self.p) or not isprime(self.p):
            raise DescriptorError(f"Q/Z[1/p] needs p prime, got {self.p!r}")

    rank = 0
    finitely_generated = False

    def zero(self):
        return Fraction(0)

    def add(self, a, b):
        return _mod_localized(a + b, self.p)

    def neg(self, a):
        return _mod_localized(-a, self.p)

    def mul(self, k, a):
        return _mod_localized(k * a, self.p)

    def canon(self, x):
        return _mod_localized(_to_fraction(x), self.p)

    def contains(self, x):
        return isinstance(x, Fraction) and 0 <= x < 1 and x.denominator % self.p != 0

    def elements(self, bound):
        out = [Fraction(0)]
        for d in range(2, bound + 1):
            if d % self.p:
                out.extend(Fraction(a, d) for a in range(1, d) if math.gcd(a, d) == 1)
        return out

    def text(self):
        return f"Q/Z[1/{self.p}]"


@dataclass(frozen=True)
class DirectSum(Group):
    parts: tuple[Group, ...] = field(default_factory=tuple)

    def __post_init__(self):
        flat: list[Group] = []
        for part in self.parts:
            if isinstance(part, DirectSum):
                flat.extend(part.parts)
            elif isinstance(part, Group):
                flat.append(part)
            else:
                raise DescriptorError(f"not a group descriptor: {part!r}")
        if not flat:
            raise DescriptorError("Sum needs at least one part")
        object.__setattr__(self, "parts", tuple(flat))

    @property
    def rank(self) -> int:
        return sum(p.rank for p in self.parts)

    @property
    def finitely_generated(self) -> bool:
        return all(p.finitely_generated for p in self.parts)

    def zero(self):
        return tuple(p.zero() for p in self.parts)

    def add(self, a, b):
        return tuple(p.add(x, y) for p, x, y in zip(self.parts, a, b))

    def neg(self, a):
        return tuple(p.neg(x) for p, x in zip(self.parts, a))

    def mul(self, k, a):
        return tuple(p.mul(k, x) for p, x in zip(self.parts, a))

    def canon(self, x):
        if not isinstance(x, (tuple, list)) or len(x) != len(self.parts):
            raise ElementError(f"{x!r} does not match {self.text()}")
        return tuple(p.canon(v) for p, v in zip(self.parts, x))

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == len(self.parts)
            and all(p.contains(v) for p, v in zip(self.parts, x))
        )

    def elements(self, bound):
        return [tuple(c) for c in itertools.product(*(p.elements(bound) for p in self.parts))]

    def format(self, x):
        return "(" + ",".join(p.format(v) for p, v in zip(self.parts, x)) + ")"

    def text(self):
        return "Sum(" + ", ".join(p.text() for p in self.parts) + ")"


# ---------------------------------------------------------------------------
# module-level operations with descriptor/element validation


def _check(G: Group, *xs: Any) -> None:
    for x in xs:
        if not G.contains(x):
            raise ElementError(f"{x!r} is not a canonical element of {G.text()}")


def identity(G: Group) -> Any:
    return G.zero()


def add(G: Group, a: Any, b: Any) -> Any:
    _check(G, a, b)
    return G.add(a, b)


def negate(G: Group, a: Any) -> Any:
    _check(G, a)
    return G.neg(a)


def enumerate_ball(G: Group, bound: int) -> list:
    """Deterministic, duplicate-free finite truncation of ``G``.

    Monotone in ``bound``: ``enumerate_ball(G, B)`` is contained in
    ``enumerate_ball(G, B + 1)``.
    """
    if not _is_int(bound) or bound < 1:
        raise ValueError(f"enumeration bound must be a positive integer, got {bound!r}")
    return G.elements(bound)


@dataclass(frozen=True)
class InvariantRecord:
    torsion_free_rank: int | float
    finitely_generated: bool
    cd_q: int | None
    asdim: int | float

    @property
    def locally_finite(self) -> bool:
        return self.torsion_free_rank == 0

    def as_dict(self) -> dict:
        def enc(v):
            return "inf" if v == math.inf else v

        return {
            "torsion_free_rank": enc(self.torsion_free_rank),
            "finitely_generated": self.finitely_generated,
            "cd_q": self.cd_q,
            "asdim": enc(self.asdim),
        }


def invariant_record(rank: int | float, finitely_generated: bool) -> InvariantRecord:
    if rank == math.inf:
        return InvariantRecord(rank, False, None, math.inf)
    cd = rank if finitely_generated else rank + 1
    return InvariantRecord(rank, finitely_generated, cd, rank)


def invariants(G: Group) -> InvariantRecord:
    """Torsion-free rank, finite generation, rational cohomological dimension, asdim.

    Finite generation is read off the descriptor: a finite sum of ``Z^n``
    and finite cyclic parts.
    """
    return invariant_record(G.rank, G.finitely_generated)


# ---------------------------------------------------------------------------
# text grammar

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z\-]*)|(?P<sym>[\^/\[\](),;{}:\-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message: str):
        raise ParseError(message, self.text, self.tok[2])

    def take(self, kind: str, value: str | None = None) -> str:
        k, v, _ = self.tok
        if k != kind or (value is not None and v != value):
            want = value or kind
            self.error(f"expected {want!r}, found {v or 'end of input'!r}")
        self.i += 1
        return v

    def peek(self, kind: str, value: str | None = None) -> bool:
        k, v, _ = self.tok
        return k == kind and (value is None or v == value)

    def number(self) -> int:
        return int(self.take("num"))

    def prime_number(self, what: str) -> int:
        pos = self.tok[2]
        p = self.number()
        if not isprime(p):
            raise ParseError(f"{p} is not prime in {what}", self.text, pos)
        return p

    def descriptor(self) -> Group:
        pos = self.tok[2]
        name = self.take("name")
        if name == "Z":
            if self.peek("sym", "^"):
                self.take("sym", "^")
                return IntPower(self.number())
            if self.peek("sym", "/"):
                self.take("sym", "/")
                mpos = self.tok[2]
                m = self.number()
                if m < 2:
                    raise ParseError(f"cyclic index {m} < 2", self.text, mpos)
                return Cyclic(m)
            if self.peek("sym", "["):
                return Localized(self.localizer("Z[1/p]"))
            return IntPower(1)
        if name == "Q":
            if self.peek("sym", "/"):
                self.take("sym", "/")
                self.take("name", "Z")
                if self.peek("sym", "["):
                    return RationalsModLocalized(self.localizer("Q/Z[1/p]"))
                return RationalsModOne()
            return Rationals()
        if name == "Prufer":
            self.take("sym", "(")
            p = self.prime_number("Prufer(p)")
            self.take("sym", ")")
            return Prufer(p)
        if name == "Sum":
            self.take("sym", "(")
            parts = [self.descriptor()]
            while self.peek("sym", ","):
                self.take("sym", ",")
                parts.append(self.descriptor())
            self.take("sym", ")")
            return DirectSum(tuple(parts))
        if name == "CyclicSum":
            self.take("sym", "(")
            self.take("sym", "[")
            idx = []
            while not self.peek("sym", "]"):
                if idx:
                    self.take("sym", ",")
                mpos = self.tok[2]
                m = self.number()
                if m < 2:
                    raise ParseError(f"cyclic index {m} < 2", self.text, mpos)
                idx.append(m)
            self.take("sym", "]")
            rule = None
            if self.peek("sym", ";"):
                self.take("sym", ";")
                rpos = self.tok[2]
                rule = self.take("name")
                if rule not in _RULE_ALIASES:
                    raise ParseError(f"unknown continuation rule {rule!r}", self.text, rpos)
            self.take("sym", ")")
            try:
                return CyclicSum(tuple(idx), rule)
            except DescriptorError as exc:
                raise ParseError(str(exc), self.text, pos) from None
        raise ParseError(f"unknown group {name!r}", self.text, pos)

    def localizer(self, what: str) -> int:
        self.take("sym", "[")
        one_pos = self.tok[2]
        if self.number() != 1:
            raise ParseError("expected 1/p", self.text, one_pos)
        self.take("sym", "/")
        p = self.prime_number(what)
        self.take("sym", "]")
        return p

    def value(self) -> Any:
        if self.peek("sym", "("):
            self.take("sym", "(")
            items = [self.value()]
            while self.peek("sym", ","):
                self.take("sym", ",")
                items.append(self.value())
            self.take("sym", ")")
            return tuple(items)
        if self.peek("sym", "{"):
            self.take("sym", "{")
            items = {}
            while not self.peek("sym", "}"):
                if items:
                    self.take("sym", ",")
                i = self.number()
                self.take("sym", ":")
                items[i] = self.rational()
            self.take("sym", "}")
            return items
        return self.rational()

    def rational(self) -> Any:
        sign = 1
        if self.peek("sym", "-"):
            self.take("sym", "-")
            sign = -1
        a = self.number()
        if self.peek("sym", "/"):
            self.take("sym", "/")
            bpos = self.tok[2]
            b = self.number()
            if b == 0:
                raise ParseError("zero denominator", self.text, bpos)
            return Fraction(sign * a, b)
        return sign * a

    def finish(self):
        if not self.peek("end"):
            self.error("trailing input")


def parse_descriptor(text: str) -> Group:
    """Parse ``Z^n``, ``Z/m``, ``Z[1/p]``, ``Prufer(p)``, ``Q``, ``Q/Z``,
    ``Q/Z[1/p]``, ``Sum(...)`` or ``CyclicSum([m1,...]; rule)``."""
    p = _Parser(text)
    d = p.descriptor()
    p.finish()
    return d


def parse_value(text: str) -> Any:
    """Parse element text into nested ints, Fractions, tuples and dicts."""
    p = _Parser(text)
    v = p.value()
    p.finish()
    return v


def parse_element(G: Group, text: str) -> Any:
    return G.canon(parse_value(text))


def format_element(G: Group, x: Any) -> str:
    return G.format(x)
