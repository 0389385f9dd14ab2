"""Exact k-subset combinatorics: bitmask sets, binomial coefficients, colex
ranking, family containers and the family text file format.

Conventions used throughout the package:

* ground-set elements are 1-based (element ``i`` lives at bit ``i-1``),
* vertex ranks produced by colex ranking are 0-based,
* for k-subsets of a common ground set, colexicographic order coincides
  with numeric order of the bitmasks, so masks double as sort keys.

Everything here is an immutable value and all arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_GROUND = 64  # masks must fit one machine word in ports of this code

_WORD = 0xFFFFFFFFFFFFFFFF


class ParseError(ValueError):
    """Malformed input file; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ResourceCapError(RuntimeError):
    """An operation was asked to exceed its configured size cap."""


def binomial(n: int, k: int) -> int:
    """Exact C(n, k); 0 when k < 0 or k > n.  Requires 0 <= n <= 64."""
    if n < 0 or n > MAX_GROUND:
        raise ValueError(f"binomial: n={n} outside supported range 0..{MAX_GROUND}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    base = 0
    while mask:
        word = mask & _WORD
        while word:
            low = word & -word
            yield base + low.bit_length() - 1
            word ^= low
        mask >>= 64
        base += 64


def select_bit(mask: int, j: int) -> int:
    """Index of the j-th (0-based) set bit of ``mask``."""
    if j < 0 or j >= mask.bit_count():
        raise ValueError(f"select_bit: j={j} out of range for popcount {mask.bit_count()}")
    base = 0
    while True:
        word = mask & _WORD
        c = word.bit_count()
        if j < c:
            while True:
                low = word & -word
                if j == 0:
                    return base + low.bit_length() - 1
                word ^= low
                j -= 1
        j -= c
        mask >>= 64
        base += 64


@dataclass(frozen=True, order=True)
class KSet:
    """A k-element subset of [n] stored as a bitmask (bit i-1 <-> element i).

    ``k`` is derived from the mask popcount, so the popcount invariant holds
    by construction.  Ordering compares masks first, which on a fixed (n, k)
    is exactly colexicographic order.
    """

    mask: int
    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_GROUND:
            raise ValueError(f"KSet: n={self.n} outside supported range 0..{MAX_GROUND}")
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError("KSet: mask has bits outside the ground set")

    @property
    def k(self) -> int:
        return self.mask.bit_count()

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int) -> "KSet":
        mask = 0
        for e in elements:
            if not 1 <= e <= n:
                raise ValueError(f"KSet: element {e} outside [1..{n}]")
            bit = 1 << (e - 1)
            if mask & bit:
                raise ValueError(f"KSet: duplicate element {e}")
            mask |= bit
        return cls(mask, n)

    def elements(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in iter_bits(self.mask))

    def isdisjoint(self, other: "KSet") -> bool:
        return self.mask & other.mask == 0

    def intersection_size(self, other: "KSet") -> int:
        return (self.mask & other.mask).bit_count()

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.elements())


def _colex_masks(n: int, k: int) -> Iterator[int]:
    # Largest element outermost and ascending gives colex order directly.
    if k == 0:
        yield 0
        return
    for top in range(k - 1, n):
        high = 1 << top
        for rest in _colex_masks(top, k - 1):
            yield rest | high


def enumerate_ksets(n: int, k: int) -> Iterator[KSet]:
    """All k-subsets of [n] in colexicographic order."""
    if not 0 <= k <= n <= MAX_GROUND:
        raise ValueError(f"enumerate_ksets: need 0 <= k <= n <= {MAX_GROUND}, got n={n} k={k}")
    for mask in _colex_masks(n, k):
        yield KSet(mask, n)


def rank_colex(s: KSet) -> int:
    """Colex rank of a KSet among all k-subsets of its ground set."""
    return sum(math.comb(pos, i + 1) for i, pos in enumerate(iter_bits(s.mask)))


def unrank_colex(r: int, n: int, k: int) -> KSet:
    """Inverse of rank_colex: the k-subset of [n] with colex rank ``r``."""
    if not 0 <= k <= n <= MAX_GROUND:
        raise ValueError(f"unrank_colex: need 0 <= k <= n <= {MAX_GROUND}, got n={n} k={k}")
    if not 0 <= r < binomial(n, k):
        raise ValueError(f"unrank_colex: rank {r} out of range 0..{binomial(n, k) - 1}")
    mask = 0
    top = n
    for i in range(k, 0, -1):
        e = top - 1
        while math.comb(e, i) > r:
            e -= 1
        mask |= 1 << e
        r -= math.comb(e, i)
        top = e
    return KSet(mask, n)


@dataclass(frozen=True)
class Family:
    """An ordered duplicate-free collection of KSets sharing (n, k).

    May be empty (cross-intersection predicates are vacuous on empty input);
    systems reject empty member families separately.
    """

    sets: tuple[KSet, ...]

    def __post_init__(self):
        seen = set()
        for s in self.sets:
            if (s.mask, s.n) in seen:
                raise ValueError(f"Family: duplicate member {{{s}}}")
            seen.add((s.mask, s.n))
        if self.sets:
            n, k = self.sets[0].n, self.sets[0].k
            for s in self.sets[1:]:
                if s.n != n or s.k != k:
                    raise ValueError("Family: members must share (n, k)")

    @classmethod
    def of(cls, *element_lists: Iterable[int], n: int) -> "Family":
        return cls(tuple(KSet.from_elements(es, n) for es in element_lists))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[KSet]:
        return iter(self.sets)

    @property
    def n(self) -> int:
        if not self.sets:
            raise ValueError("empty family has no ground-set size")
        return self.sets[0].n

    @property
    def k(self) -> int:
        if not self.sets:
            raise ValueError("empty family has no member size")
        return self.sets[0].k


@dataclass(frozen=True)
class FamilySystem:
    """An ordered list of nonempty families over a common (n, k).

    Construction enforces structural sanity only.  The cross-family
    conditions (no shared member sets, internal pairwise disjointness,
    cross-intersection) are checked by ``families.validate_system`` so that
    violating systems can be built, validated and reported.
    """

    families: tuple[Family, ...]
    n: int
    k: int

    def __post_init__(self):
        for i, f in enumerate(self.families):
            if len(f) == 0:
                raise ValueError(f"FamilySystem: family {i + 1} is empty")
            if f.n != self.n or f.k != self.k:
                raise ValueError(f"FamilySystem: family {i + 1} does not match (n={self.n}, k={self.k})")

    @property
    def h(self) -> int:
        return len(self.families)

    def total_size(self) -> int:
        return sum(len(f) for f in self.families)


@dataclass(frozen=True)
class ProfileVector:
    """Size profile of a system: m[j-1] = number of families with >= j members."""

    h: int
    t: int
    m: tuple[int, ...]


def profile(sys: FamilySystem) -> ProfileVector:
    """Profile vector of a system; satisfies sum|F_i| = h + sum_{j>=2} m_j."""
    sizes = [len(f) for f in sys.families]
    t = max(sizes)
    m = tuple(sum(1 for s in sizes if s >= j) for j in range(1, t + 1))
    return ProfileVector(h=len(sizes), t=t, m=m)


def parse_family_file(text: str) -> FamilySystem:
    """Parse the family text format.

    First line: ``n=<int> k=<int>``.  Each following non-blank line holds one
    family, its sets separated by ``;`` and elements comma-separated.  Lines
    consisting of ``--`` are accepted as redundant family separators.
    """
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "missing header 'n=<int> k=<int>'")
    header = lines[0].split()
    try:
        if len(header) != 2 or not header[0].startswith("n=") or not header[1].startswith("k="):
            raise ValueError
        n = int(header[0][2:])
        k = int(header[1][2:])
    except ValueError:
        raise ParseError(1, f"bad header {lines[0]!r}, expected 'n=<int> k=<int>'") from None
    if not 0 <= k <= n <= MAX_GROUND:
        raise ParseError(1, f"unsupported parameters n={n} k={k}")

    families = []
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line == "--":
            continue
        sets = []
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                raise ParseError(line_no, "empty set specification")
            try:
                elems = [int(tok) for tok in chunk.split(",")]
            except ValueError:
                raise ParseError(line_no, f"bad set specification {chunk!r}") from None
            try:
                s = KSet.from_elements(elems, n)
            except ValueError as exc:
                raise ParseError(line_no, str(exc)) from None
            if s.k != k:
                raise ParseError(line_no, f"set {{{s}}} has {s.k} elements, expected k={k}")
            sets.append(s)
        try:
            families.append(Family(tuple(sets)))
        except ValueError as exc:
            raise ParseError(line_no, str(exc)) from None
    return FamilySystem(tuple(families), n=n, k=k)


def serialize_family_file(sys: FamilySystem) -> str:
    """Canonical text form: elements ascending, sets colex-sorted per family."""
    out = [f"n={sys.n} k={sys.k}"]
    for f in sys.families:
        out.append(";".join(str(s) for s in sorted(f.sets)))
    return "\n".join(out) + "\n"


class Lcg64:
    """Deterministic 64-bit linear congruential generator.

    state' = (6364136223846793383 * state + 1442695040888963407) mod 2**64,
    started from ``seed`` mod 2**64.  ``draw_below(b)`` advances once and
    returns ``(state' >> 33) % b``.  The recurrence and draw rule are fixed
    so seeded streams can be reproduced exactly in other languages.
    """

    MULT = 6364136223846793383
    INC = 1442695040888963407

    def __init__(self, seed: int):
        self.state = seed & _WORD

    def next_u64(self) -> int:
        self.state = (self.MULT * self.state + self.INC) & _WORD
        return self.state

    def draw_below(self, bound: int) -> int:
        if bound <= 0:
            raise ValueError("draw_below: bound must be positive")
        return (self.next_u64() >> 33) % bound
