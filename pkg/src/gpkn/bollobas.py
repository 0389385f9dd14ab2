"""Exact-rational verification engine for set-pair inequalities.

Two inequality forms are implemented literally and kept side by side:

* ``classic_lhs``: for disjoint pairs (A_i, B_i) with A_i meeting B_j for
  i != j, the sum of 1/C(|A_i|+|B_i|, |A_i|), classically at most 1.
* ``lemma5_lhs``: for a system of pairs and triples of disjoint sets whose
  parts pairwise intersect across items, the doubled sum plus per-triple
  correction terms 2/C(|A|+|C|,|A|) + 2/C(|B|+|C|,|B|)
  - 2/C(|A|+|B|+|C|,|A|) - 2/C(|A|+|B|+|C|,|B|).

``eq3_check`` evaluates the uniform-size relaxation with coefficient 6 on
the subtracted C(3k,k) term; since that subtracts more than the 4 the
per-triple correction yields, the relaxation is implied by the doubled
form.  The permutation oracle reproduces the double-counting argument
behind these bounds by exhaustive enumeration.

All arithmetic in this module is exact (``fractions.Fraction``); floating
point is deliberately never used.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import ResourceCapError

Part = frozenset[int]

ORACLE_CAP = 9  # largest ground size for m! permutation enumeration


class SetPairValidationError(ValueError):
    """A system violates a structural or cross-intersection condition; the
    message names the offending 1-based item indices."""


def _check_parts(label: str, parts: tuple[Part, ...]) -> None:
    for p in parts:
        if not p:
            raise SetPairValidationError(f"{label}: parts must be nonempty")
    for a, b in itertools.combinations(range(len(parts)), 2):
        if parts[a] & parts[b]:
            raise SetPairValidationError(f"{label}: parts {a + 1} and {b + 1} are not disjoint")


@dataclass(frozen=True)
class SetPairSystem:
    """alpha disjoint pairs plus beta disjoint triples of finite sets.

    Construction checks each item in isolation (nonempty pairwise-disjoint
    parts).  The cross condition between items is checked by ``validate``,
    which the evaluation operations call first.
    """

    pairs: tuple[tuple[Part, Part], ...]
    triples: tuple[tuple[Part, Part, Part], ...]

    def __post_init__(self):
        for i, pr in enumerate(self.pairs, start=1):
            _check_parts(f"pair {i}", pr)
        for j, tr in enumerate(self.triples, start=1):
            _check_parts(f"triple {j}", tr)

    @classmethod
    def of(cls, pairs=(), triples=()) -> "SetPairSystem":
        return cls(
            tuple(tuple(frozenset(p) for p in pr) for pr in pairs),
            tuple(tuple(frozenset(p) for p in tr) for tr in triples),
        )

    @property
    def alpha(self) -> int:
        return len(self.pairs)

    @property
    def beta(self) -> int:
        return len(self.triples)

    def items(self) -> list[tuple[Part, ...]]:
        """Items in index order: the pairs first, then the triples."""
        return list(self.pairs) + list(self.triples)

    def ground(self) -> frozenset[int]:
        out: set[int] = set()
        for it in self.items():
            for p in it:
                out |= p
        return frozenset(out)

    def validate(self) -> None:
        """Cross condition: every part of item i meets every part of item j."""
        items = self.items()
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                for x in items[i]:
                    for y in items[j]:
                        if not x & y:
                            raise SetPairValidationError(
                                f"items {i + 1} and {j + 1}: parts {sorted(x)} and {sorted(y)}"
                                " are disjoint"
                            )

    def to_json(self) -> str:
        return json.dumps(
            {
                "pairs": [[sorted(p) for p in pr] for pr in self.pairs],
                "triples": [[sorted(p) for p in tr] for tr in self.triples],
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "SetPairSystem":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SetPairValidationError(f"bad JSON: {exc}") from None
        if not isinstance(data, dict):
            raise SetPairValidationError("top level must be an object")
        pairs = data.get("pairs", [])
        triples = data.get("triples", [])
        try:
            pr = tuple(tuple(frozenset(int(e) for e in p) for p in item) for item in pairs)
            tr = tuple(tuple(frozenset(int(e) for e in p) for p in item) for item in triples)
        except (TypeError, ValueError) as exc:
            raise SetPairValidationError(f"bad element lists: {exc}") from None
        for i, item in enumerate(pr, start=1):
            if len(item) != 2:
                raise SetPairValidationError(f"pair {i} must have exactly 2 parts")
        for j, item in enumerate(tr, start=1):
            if len(item) != 3:
                raise SetPairValidationError(f"triple {j} must have exactly 3 parts")
        return cls(pr, tr)


def classic_lhs(pairs) -> Fraction:
    """Exact sum of 1/C(|A_i|+|B_i|, |A_i|) for a classic set-pair system.

    Validates the classic condition first: A_i disjoint from B_i, and
    A_i meeting B_j for every i != j.
    """
    norm = [(frozenset(a), frozenset(b)) for a, b in pairs]
    for i, (a, b) in enumerate(norm, start=1):
        if not a or not b:
            raise SetPairValidationError(f"pair {i}: parts must be nonempty")
        if a & b:
            raise SetPairValidationError(f"pair {i}: A and B are not disjoint")
    for i in range(len(norm)):
        for j in range(len(norm)):
            if i != j and not norm[i][0] & norm[j][1]:
                raise SetPairValidationError(
                    f"pairs {i + 1} and {j + 1}: A_{i + 1} does not meet B_{j + 1}"
                )
    return sum(
        (Fraction(1, math.comb(len(a) + len(b), len(a))) for a, b in norm),
        Fraction(0),
    )


def pair_contribution(a: int, b: int) -> Fraction:
    """Doubled-pair term 2/C(a+b, a) of the extended inequality."""
    return Fraction(2, math.comb(a + b, a))


def triple_contribution(a: int, b: int, c: int) -> Fraction:
    """Full per-triple term: its own doubled pair plus the correction block."""
    return (
        Fraction(2, math.comb(a + b, a))
        + Fraction(2, math.comb(a + c, a))
        + Fraction(2, math.comb(b + c, b))
        - Fraction(2, math.comb(a + b + c, a))
        - Fraction(2, math.comb(a + b + c, b))
    )


def lemma5_lhs(sys: SetPairSystem) -> Fraction:
    """Exact left-hand side of the extended (pairs + triples) inequality,
    evaluated literally as stated: the doubled pair sum over all items plus
    the A/B correction terms of each triple."""
    sys.validate()
    total = Fraction(0)
    for a, b in sys.pairs:
        total += pair_contribution(len(a), len(b))
    for a, b, c in sys.triples:
        total += triple_contribution(len(a), len(b), len(c))
    return total


@dataclass(frozen=True)
class Eq3Result:
    """Uniform-size relaxation 2(m2-m3)/C(2k,k) + 6*m3/C(2k,k) - 6*m3/C(3k,k) <= 1,
    plus the derived pair-count consequence when C(3k,k) >= 3*C(2k,k)."""

    lhs: Fraction
    holds: bool
    consequence_applicable: bool
    consequence_bound: int
    consequence_holds: bool | None


def eq3_check(k: int, m2: int, m3: int) -> Eq3Result:
    if k < 2:
        raise ValueError("eq3_check: k must be >= 2")
    if not 0 <= m3 <= m2:
        raise ValueError("eq3_check: need m2 >= m3 >= 0")
    c2k = math.comb(2 * k, k)
    c3k = math.comb(3 * k, k)
    lhs = Fraction(2 * (m2 - m3), c2k) + Fraction(6 * m3, c2k) - Fraction(6 * m3, c3k)
    applicable = c3k >= 3 * c2k
    bound = math.comb(2 * k - 1, k - 1)
    return Eq3Result(
        lhs=lhs,
        holds=lhs <= 1,
        consequence_applicable=applicable,
        consequence_bound=bound,
        consequence_holds=(m2 + m3 <= bound) if applicable else None,
    )


def precedes(pi, S, T) -> bool:
    """True iff every element of S appears before every element of T in pi."""
    s, t = frozenset(S), frozenset(T)
    if s & t:
        raise ValueError("precedes: S and T must be disjoint")
    pos = {e: i for i, e in enumerate(pi)}
    try:
        return max(pos[e] for e in s) < min(pos[e] for e in t)
    except KeyError as exc:
        raise ValueError(f"precedes: element {exc.args[0]} not in the permutation") from None


@dataclass(frozen=True)
class DoubledPairCount:
    """Census for one doubled pair: observed permutation count against the
    closed form |S|! |T|! (m-|S|-|T|)! C(m, |S|+|T|)."""

    index: int
    s: tuple[int, ...]
    t: tuple[int, ...]
    count: int
    expected: int

    @property
    def matches(self) -> bool:
        return self.count == self.expected


@dataclass(frozen=True)
class OracleReport:
    """Exhaustive permutation census over the ground set of a system."""

    ground: tuple[int, ...]
    total_permutations: int
    counts: tuple[DoubledPairCount, ...]
    at_most_one_ok: bool
    max_hits_per_permutation: int
    lhs: Fraction

    @property
    def counts_match(self) -> bool:
        return all(c.matches for c in self.counts)

    @property
    def lhs_le_1(self) -> bool:
        return self.lhs <= 1


def permutation_oracle(sys: SetPairSystem, cap: int = ORACLE_CAP) -> OracleReport:
    """Count, for every doubled pair (S_j, T_j) of the system, the permutations
    of the ground set with all of S_j before all of T_j.

    Each item (A, B, ...) contributes the doubled pairs (A, B) and (B, A);
    the census verifies the factorial closed form per index and that no
    permutation serves two doubled pairs.
    """
    sys.validate()
    ground = sorted(sys.ground())
    m = len(ground)
    if m > cap:
        raise ResourceCapError(f"permutation_oracle: ground size {m} exceeds cap {cap}")
    index = {e: i for i, e in enumerate(ground)}

    items = sys.items()
    doubled: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for it in items:
        a = tuple(sorted(index[e] for e in it[0]))
        b = tuple(sorted(index[e] for e in it[1]))
        doubled.append((a, b))
    for it in items:
        a = tuple(sorted(index[e] for e in it[0]))
        b = tuple(sorted(index[e] for e in it[1]))
        doubled.append((b, a))

    counts = [0] * len(doubled)
    max_hits = 0
    pos = [0] * m
    for perm in itertools.permutations(range(m)):
        for i, e in enumerate(perm):
            pos[e] = i
        hits = 0
        for j, (s, t) in enumerate(doubled):
            if max(pos[e] for e in s) < min(pos[e] for e in t):
                counts[j] += 1
                hits += 1
        if hits > max_hits:
            max_hits = hits

    total = math.factorial(m)
    census = []
    for j, (s, t) in enumerate(doubled):
        ls, lt = len(s), len(t)
        expected = (
            math.factorial(ls)
            * math.factorial(lt)
            * math.factorial(m - ls - lt)
            * math.comb(m, ls + lt)
        )
        census.append(
            DoubledPairCount(
                index=j + 1,
                s=tuple(ground[e] for e in s),
                t=tuple(ground[e] for e in t),
                count=counts[j],
                expected=expected,
            )
        )

    lhs = Fraction(0)
    for a, b in sys.pairs:
        lhs += pair_contribution(len(a), len(b))
    for a, b, c in sys.triples:
        lhs += triple_contribution(len(a), len(b), len(c))

    return OracleReport(
        ground=tuple(ground),
        total_permutations=total,
        counts=tuple(census),
        at_most_one_ok=max_hits <= 1,
        max_hits_per_permutation=max_hits,
        lhs=lhs,
    )


# ---------------------------------------------------------------------------
# Exhaustive sweeps over small systems


def _small_parts(ground_size: int, max_part: int) -> list[int]:
    parts = []
    for size in range(1, max_part + 1):
        for combo in itertools.combinations(range(ground_size), size):
            mask = 0
            for e in combo:
                mask |= 1 << e
            parts.append(mask)
    return parts


def _mask_to_part(mask: int) -> Part:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class SweepReport:
    """Outcome of an exhaustive sweep: number of systems visited, the largest
    LHS seen, how many systems exceeded 1, and collected examples of them."""

    systems: int
    max_lhs: Fraction
    violation_count: int
    violations: tuple[tuple[SetPairSystem, Fraction], ...]

    @property
    def all_within_bound(self) -> bool:
        return self.violation_count == 0


def _clique_sweep(items, compat, contrib, to_system, collect_cap):
    systems = 0
    max_lhs = Fraction(0)
    violation_count = 0
    violations = []

    def dfs(allowed: int, chosen: list[int], lhs: Fraction) -> None:
        nonlocal systems, max_lhs, violation_count
        m = allowed
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            value = lhs + contrib[i]
            systems += 1
            if value > max_lhs:
                max_lhs = value
            chosen.append(i)
            if value > 1:
                violation_count += 1
                if len(violations) < collect_cap:
                    violations.append((to_system(chosen), value))
            dfs(allowed & compat[i] & ~((1 << (i + 1)) - 1), chosen, value)
            chosen.pop()

    dfs((1 << len(items)) - 1, [], Fraction(0))
    return systems, max_lhs, violation_count, tuple(violations)


def sweep_classic(ground_size: int = 6, max_part: int = 2, collect_cap: int = 10) -> SweepReport:
    """Evaluate classic_lhs on every classic-valid pair system whose parts
    have at most ``max_part`` elements of [ground_size]."""
    parts = _small_parts(ground_size, max_part)
    items = [(a, b) for a in parts for b in parts if a & b == 0]
    n = len(items)
    compat = [0] * n
    for i in range(n):
        ai, bi = items[i]
        for j in range(i + 1, n):
            aj, bj = items[j]
            if ai & bj and aj & bi:
                compat[i] |= 1 << j
                compat[j] |= 1 << i
    contrib = [
        Fraction(1, math.comb(a.bit_count() + b.bit_count(), a.bit_count())) for a, b in items
    ]

    def to_system(chosen):
        return SetPairSystem.of(
            pairs=[(_mask_to_part(items[i][0]), _mask_to_part(items[i][1])) for i in chosen]
        )

    systems, max_lhs, count, violations = _clique_sweep(items, compat, contrib, to_system, collect_cap)
    return SweepReport(systems, max_lhs, count, violations)


def sweep_lemma5(ground_size: int = 6, max_part: int = 2, collect_cap: int = 10) -> SweepReport:
    """Evaluate lemma5_lhs on every cross-intersecting system of pairs and
    triples with parts of at most ``max_part`` elements of [ground_size]."""
    parts = _small_parts(ground_size, max_part)
    pair_items = [(a, b) for a in parts for b in parts if a & b == 0]
    triple_items = [
        (a, b, c) for a in parts for b in parts if a & b == 0 for c in parts if c & (a | b) == 0
    ]
    items: list[tuple[int, ...]] = pair_items + triple_items
    n = len(items)
    compat = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            ok = True
            for x in items[i]:
                for y in items[j]:
                    if x & y == 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                compat[i] |= 1 << j
                compat[j] |= 1 << i
    contrib = []
    for it in items:
        sizes = [p.bit_count() for p in it]
        if len(it) == 2:
            contrib.append(pair_contribution(*sizes))
        else:
            contrib.append(triple_contribution(*sizes))

    def to_system(chosen):
        return SetPairSystem.of(
            pairs=[
                tuple(_mask_to_part(p) for p in items[i]) for i in chosen if len(items[i]) == 2
            ],
            triples=[
                tuple(_mask_to_part(p) for p in items[i]) for i in chosen if len(items[i]) == 3
            ],
        )

    systems, max_lhs, count, violations = _clique_sweep(items, compat, contrib, to_system, collect_cap)
    return SweepReport(systems, max_lhs, count, violations)
