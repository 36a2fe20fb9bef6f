"""Finite-sample certification: control functions and displacements of maps,
scale components, growth tables, norm axioms, decomposition uniqueness and
the rank-based classifier."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .groups import CoarseError, Group, InvariantRecord, enumerate_ball, format_value, invariants


class TruncationError(CoarseError):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# control functions and displacement


@dataclass(frozen=True)
class ControlRow:
    delta: Fraction
    eps_max: Fraction
    predicted: Fraction | None
    passed: bool
    witness: tuple | None = None


@dataclass
class ControlCertificate:
    sample_size: int
    rows: list[ControlRow]
    displacement: tuple | None = None
    displacement_predicted: tuple | None = None
    notes: dict = field(default_factory=dict)

    @property
    def monotone(self) -> bool:
        eps = [r.eps_max for r in self.rows]
        return all(a <= b for a, b in zip(eps, eps[1:]))

    @property
    def rows_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def displacement_passed(self) -> bool:
        if self.displacement is None or self.displacement_predicted is None:
            return True
        return all(
            bound is None or (value is not None and value <= bound)
            for value, bound in zip(self.displacement, self.displacement_predicted)
        )

    @property
    def passed(self) -> bool:
        return self.rows_passed and self.displacement_passed


def _bound_for(predicted, delta):
    if predicted is None:
        return None
    if callable(predicted):
        return Fraction(predicted(delta))
    if isinstance(predicted, dict):
        return Fraction(predicted[delta])
    return Fraction(predicted)


def control_function(
    f: Callable,
    sample: Sequence,
    d_dom: Callable,
    d_cod: Callable,
    grid: Iterable,
    predicted=None,
) -> ControlCertificate:
    """For each delta in ``grid``: the largest codomain distance between images
    of sample pairs whose domain distance is at most delta.

    ``predicted`` is a number, a dict keyed by delta, or a callable; rows
    without a prediction always pass.
    """
    sample = list(sample)
    if not sample:
        raise ValueError("empty sample")
    images = [f(x) for x in sample]
    records = []  # (domain distance, codomain distance, i, j)
    for i in range(len(sample)):
        x, fx = sample[i], images[i]
        records.append((0, d_cod(fx, fx), i, i))
        for j in range(i + 1, len(sample)):
            records.append((d_dom(x, sample[j]), d_cod(fx, images[j]), i, j))
    records.sort(key=lambda r: r[0])
    rows = []
    best: tuple | None = None
    pos = 0
    for delta in sorted(Fraction(d) for d in grid):
        while pos < len(records) and records[pos][0] <= delta:
            if best is None or records[pos][1] > best[1]:
                best = records[pos]
            pos += 1
        eps = Fraction(best[1]) if best else Fraction(0)
        witness = (sample[best[2]], sample[best[3]]) if best else None
        bound = _bound_for(predicted, delta)
        rows.append(ControlRow(delta, eps, bound, bound is None or eps <= bound, witness))
    return ControlCertificate(len(sample), rows)


def displacement(f: Callable, g: Callable, sample_x: Sequence, d_x: Callable, sample_y=None, d_y=None):
    """(K1, K2) = (max d_x(g(f(x)), x), max d_y(f(g(y)), y)); K2 is None without a y-sample."""
    sample_x = list(sample_x)
    if not sample_x:
        raise ValueError("empty sample")
    k1 = max(Fraction(d_x(g(f(x)), x)) for x in sample_x)
    k2 = None
    if sample_y is not None:
        sample_y = list(sample_y)
        if not sample_y:
            raise ValueError("empty sample")
        k2 = max(Fraction(d_y(f(g(y)), y)) for y in sample_y)
    return (k1, k2)


def displacement_witnesses(f, g, sample_x, d_x, value) -> list:
    return [x for x in sample_x if d_x(g(f(x)), x) == value]


# ---------------------------------------------------------------------------
# components and generated subgroups


def scale_component(norm, truncation: Sequence, s, base=None) -> frozenset:
    """Elements of the truncation reachable from ``base`` by steps of
    distance strictly less than s, staying inside the truncation."""
    G = norm.group
    s = Fraction(s)
    members = list(truncation)
    pool = set(members)
    base = G.zero() if base is None else base
    if base not in pool:
        raise TruncationError(f"base {format_value(base)} not in truncation", base)
    cache: dict = {}

    def close(x, y) -> bool:
        diff = G.sub(y, x)
        if diff not in cache:
            cache[diff] = norm(diff) < s
        return cache[diff]

    seen = {base}
    queue = deque([base])
    while queue:
        x = queue.popleft()
        for y in members:
            if y not in seen and close(x, y):
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def generated_subgroup(G: Group, gens: Iterable, truncation: Sequence, strict: bool = False) -> frozenset:
    """Closure of ``gens`` under addition and negation, clipped to the truncation.

    With ``strict`` the closure must not leave the truncation; the first
    escaping element is reported as a witness.
    """
    pool = set(truncation)
    steps = []
    for g in gens:
        steps.extend([g, G.neg(g)])
    zero = G.zero()
    if zero not in pool:
        raise TruncationError("identity not in truncation", zero)
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for a in steps:
            y = G.add(x, a)
            if y in seen:
                continue
            if y not in pool:
                if strict:
                    raise TruncationError(f"closure escapes the truncation at {format_value(y)}", y)
                continue
            seen.add(y)
            queue.append(y)
    return frozenset(seen)


def short_elements(norm, truncation: Sequence, s) -> list:
    s = Fraction(s)
    return [a for a in truncation if norm(a) < s]


# ---------------------------------------------------------------------------
# growth


@dataclass
class GrowthTable:
    group: str
    metric: str
    s: Fraction
    base: str
    bound: int
    counts: list[int]

    def rows(self) -> list[tuple[int, int]]:
        return list(enumerate(self.counts))


def growth(G: Group, norm, s, n_max: int, bound: int, metric_name: str | None = None) -> GrowthTable:
    """counts[n] = number of points reached from the identity by s-scale chains
    of length at most n.

    Steps are the truncation elements of norm < s. The table is refused
    when the step set is not yet stable at the bound, or when a chain of
    length below ``n_max`` would leave the truncation.
    """
    s = Fraction(s)
    truncation = enumerate_ball(G, bound)
    steps = set(short_elements(norm, truncation, s))
    wider = set(short_elements(norm, enumerate_ball(G, bound + 1), s))
    if wider != steps:
        extra = sorted(map(format_value, wider - steps))[:3]
        raise TruncationError(f"steps of norm < {s} reach beyond bound {bound}: {extra}", extra)
    steps.discard(G.zero())
    pool = set(truncation)
    zero = G.zero()
    seen = {zero}
    frontier = [zero]
    counts = [1]
    for n in range(1, n_max + 1):
        nxt = []
        for x in frontier:
            for a in steps:
                y = G.add(x, a)
                if y in seen:
                    continue
                if y not in pool:
                    raise TruncationError(
                        f"chain of length {n} leaves the bound-{bound} truncation at {format_value(y)}", y
                    )
                seen.add(y)
                nxt.append(y)
        frontier = nxt
        counts.append(len(seen))
    return GrowthTable(G.text(), metric_name or getattr(norm, "name", "norm"), s, G.format(zero), bound, counts)


@dataclass
class GrowthComparison:
    witness: int | None
    half_witness: int | None
    verdict: str
    start: int
    note: str = "finite-data heuristic: consistent-with / refuted-on-tabulated-range, not a proof"

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"


def _least_witness(counts: Sequence[int], f: Callable, C_range, start: int, stop: int) -> int | None:
    for C in C_range:
        try:
            if all(counts[n] <= C * f(C * n) for n in range(start, stop + 1)):
                return C
        except (IndexError, KeyError):
            continue
    return None


def growth_compare(counts: Sequence[int], f: Callable, C_range=range(1, 1001), start: int = 1) -> GrowthComparison:
    """Least C in ``C_range`` with counts[n] <= C f(C n) for start <= n <= n_max.

    The search is repeated on the first half of the table. A relation that
    holds asymptotically has a least witness that stabilizes, so the
    verdict is "consistent" when both searches succeed with the same C and
    "refuted" when no witness exists or it still grows with the range.
    """
    counts = list(counts)
    if not counts:
        raise ValueError("empty growth table")
    n_max = len(counts) - 1
    C_range = list(C_range)
    full = _least_witness(counts, f, C_range, start, n_max)
    half = _least_witness(counts, f, C_range, start, max(start, n_max // 2))
    verdict = "consistent" if full is not None and full == half else "refuted"
    return GrowthComparison(full, half, verdict, start)


def table_function(counts: Sequence[int]) -> Callable[[int], int]:
    return lambda n: counts[n]


# ---------------------------------------------------------------------------
# norm axioms and decomposition uniqueness


@dataclass
class AxiomReport:
    sample_size: int
    identity_violations: list
    symmetry_violations: list
    triangle_violations: list
    triangle_checked: int

    @property
    def violations(self) -> int:
        return len(self.identity_violations) + len(self.symmetry_violations) + len(self.triangle_violations)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def norm_axioms(norm, sample: Sequence, limit: int = 5) -> AxiomReport:
    """Exhaustive check of ||x|| = 0 iff x = 0, ||-x|| = ||x||, and
    ||x + y|| <= ||x|| + ||y|| over all pairs of the sample."""
    G = norm.group
    sample = list(sample)
    values = {x: norm(x) for x in sample}
    ident, sym, tri = [], [], []
    zero = G.zero()
    for x, v in values.items():
        if v < 0 or (v == 0) != (x == zero):
            ident.append(x)
        if norm(G.neg(x)) != v:
            sym.append(x)
    checked = 0
    for x, y in itertools.combinations_with_replacement(sample, 2):
        checked += 1
        if norm(G.add(x, y)) > values[x] + values[y]:
            tri.append((x, y))
    return AxiomReport(len(sample), ident, sym, tri, checked)


@dataclass
class UniquenessReport:
    checked: int
    failures: list
    candidates: int

    @property
    def passed(self) -> bool:
        return not self.failures


def decomposition_uniqueness(pair, sample: Sequence, top: int) -> UniquenessReport:
    """Brute force over every coefficient vector r in prod [-k_i, k_i] (i <= top):
    exactly one has g - sum r_i g_i in H, and it agrees with ``decompose``."""
    from .splitting import Decomposition

    G = pair.ext.ambient
    ranges = [range(-pair.half_index(i), pair.half_index(i) + 1) for i in range(1, top + 1)]
    lifts = [pair.lift(i) for i in range(1, top + 1)]
    vectors = list(itertools.product(*ranges))
    combos = []
    for r in vectors:
        x = G.zero()
        for c, g in zip(r, lifts):
            x = G.add(x, G.mul(c, g))
        combos.append((r, x))
    failures = []
    for g in sample:
        valid = []
        for r, x in combos:
            rest = G.sub(g, x)
            if pair.ext.in_sub(rest):
                valid.append(Decomposition(pair.ext.restrict(rest), {i + 1: c for i, c in enumerate(r) if c}))
        d = pair.decompose(g)
        if len(valid) != 1 or valid[0] != d or pair.recompose(d) != g:
            failures.append((g, valid, d))
    return UniquenessReport(len(list(sample)), failures, len(vectors))


# ---------------------------------------------------------------------------
# classification

RULE_RANK_CD = "rank-and-cd"
RULE_LOCALLY_FINITE = "locally-finite"
RULE_INFINITE_RANK = "infinite-rank-unsupported"
RULE_EMBED = "rank-below-finitely-generated"
RULE_EMBED_HYPOTHESIS = "embedding-hypothesis-unmet"


@dataclass(frozen=True)
class Verdict:
    left: InvariantRecord
    right: InvariantRecord
    verdict: str
    rule: str

    def as_dict(self) -> dict:
        return {
            "left": self.left.as_dict(),
            "right": self.right.as_dict(),
            "verdict": self.verdict,
            "rule": self.rule,
        }


def classify_records(a: InvariantRecord, b: InvariantRecord) -> Verdict:
    if a.torsion_free_rank == math.inf or b.torsion_free_rank == math.inf:
        return Verdict(a, b, "undecided-by-implemented-criteria", RULE_INFINITE_RANK)
    same = a.torsion_free_rank == b.torsion_free_rank and a.cd_q == b.cd_q
    verdict = "equivalent" if same else "not-equivalent"
    both_lf = a.locally_finite and b.locally_finite and not a.finitely_generated and not b.finitely_generated
    return Verdict(a, b, verdict, RULE_LOCALLY_FINITE if both_lf else RULE_RANK_CD)


def classify(A: Group, B: Group) -> Verdict:
    return classify_records(invariants(A), invariants(B))


def embeddable_records(a: InvariantRecord, b: InvariantRecord) -> Verdict:
    if not b.finitely_generated or a.finitely_generated or a.torsion_free_rank == math.inf:
        return Verdict(a, b, "undecided-by-implemented-criteria", RULE_EMBED_HYPOTHESIS)
    ok = a.torsion_free_rank < b.torsion_free_rank
    return Verdict(a, b, "embeds" if ok else "no-embedding", RULE_EMBED)


def embeddable(A: Group, B: Group) -> Verdict:
    return embeddable_records(invariants(A), invariants(B))
