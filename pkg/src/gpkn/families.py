"""Intersecting-family toolkit: disjointness and cross-intersection
predicates, the star and Hilton-Milner extremal constructions, validation
and bound evaluation for systems of pairwise-disjoint cross-intersecting
families, a brute-force maximizer for (<=1)-almost intersecting families,
and a seeded random maximal-system generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import (
    Family,
    FamilySystem,
    KSet,
    Lcg64,
    ResourceCapError,
    binomial,
    enumerate_ksets,
    iter_bits,
    select_bit,
    unrank_colex,
)


def is_pairwise_disjoint(f: Family) -> bool:
    """True iff all distinct members of the family are disjoint."""
    acc = 0
    for s in f:
        if acc & s.mask:
            return False
        acc |= s.mask
    return True


def are_cross_intersecting(f1: Family, f2: Family) -> bool:
    """True iff every member of f1 meets every member of f2 (vacuous on empty)."""
    if len(f1) and len(f2) and (f1.n != f2.n or f1.k != f2.k):
        raise ValueError("are_cross_intersecting: families must share (n, k)")
    for a in f1:
        for b in f2:
            if a.mask & b.mask == 0:
                return False
    return True


@dataclass(frozen=True)
class SystemCheck:
    """Validation outcome; ``condition`` names the first violated one:
    1 = families share a member set, 2 = a family is not pairwise disjoint,
    3 = two families are not cross-intersecting."""

    ok: bool
    condition: int | None = None
    indices: tuple[int, ...] | None = None
    message: str = "ok"


def validate_system(sys: FamilySystem) -> SystemCheck:
    """Check the three system conditions in order, reporting the first violation.

    Indices in the report are 1-based family (and member) positions.
    """
    seen: dict[int, int] = {}
    for i, f in enumerate(sys.families, start=1):
        for s in f:
            if s.mask in seen:
                return SystemCheck(
                    False, 1, (seen[s.mask], i),
                    f"condition 1: families {seen[s.mask]} and {i} share the set {{{s}}}",
                )
        for s in f:
            seen[s.mask] = i

    for i, f in enumerate(sys.families, start=1):
        sets = f.sets
        for a in range(len(sets)):
            for b in range(a + 1, len(sets)):
                if sets[a].mask & sets[b].mask:
                    return SystemCheck(
                        False, 2, (i, a + 1, b + 1),
                        f"condition 2: family {i} members {a + 1} and {b + 1} intersect",
                    )

    fams = sys.families
    for i in range(len(fams)):
        for j in range(i + 1, len(fams)):
            for a in fams[i]:
                for b in fams[j]:
                    if a.mask & b.mask == 0:
                        return SystemCheck(
                            False, 3, (i + 1, j + 1),
                            f"condition 3: families {i + 1} and {j + 1} contain the disjoint"
                            f" sets {{{a}}} and {{{b}}}",
                        )
    return SystemCheck(True)


def star(n: int, k: int, x: int) -> Family:
    """All k-subsets of [n] containing x, colex-sorted; size C(n-1, k-1)."""
    if not 1 <= x <= n:
        raise ValueError(f"star: x={x} outside [1..{n}]")
    xbit = 1 << (x - 1)
    members = [KSet(s.mask | xbit, n) for s in _ksets_avoiding(n, k - 1, x)]
    members.sort()
    return Family(tuple(members))


def _ksets_avoiding(n: int, k: int, x: int) -> list[KSet]:
    out = []
    for s in enumerate_ksets(n, k):
        if not s.mask >> (x - 1) & 1:
            out.append(s)
    return out


@dataclass(frozen=True)
class HMFamily:
    """The extremal intersecting family with empty common intersection:
    {G} together with every k-set containing x that meets G."""

    x: int
    g: KSet
    members: Family


def hilton_milner(n: int, k: int, x: int, g: KSet) -> HMFamily:
    """Build the Hilton-Milner family for center x and avoided set G.

    Size is exactly C(n-1, k-1) - C(n-k-1, k-1) + 1; the family is
    intersecting but has empty common intersection.
    """
    if g.n != n or g.k != k:
        raise ValueError("hilton_milner: G must be a k-subset of [n]")
    if n < 2 * k:
        raise ValueError(f"hilton_milner: need n >= 2k, got n={n} k={k}")
    if g.mask >> (x - 1) & 1:
        raise ValueError(f"hilton_milner: x={x} must not belong to G")
    xbit = 1 << (x - 1)
    members = [g]
    members.extend(
        s for s in (KSet(t.mask | xbit, n) for t in _ksets_avoiding(n, k - 1, x))
        if s.mask & g.mask
    )
    fam = HMFamily(x=x, g=g, members=Family(tuple(members)))
    expected = binomial(n - 1, k - 1) - binomial(n - k - 1, k - 1) + 1
    if len(fam.members) != expected:
        raise AssertionError(f"hilton_milner: size {len(fam.members)} != expected {expected}")
    return fam


def is_le1_almost_intersecting(f: Family) -> bool:
    """True iff every member is disjoint from at most one other member."""
    masks = [s.mask for s in f]
    for i, m in enumerate(masks):
        partners = 0
        for j, w in enumerate(masks):
            if i != j and m & w == 0:
                partners += 1
                if partners > 1:
                    return False
    return True


BRUTE_CAP = 24  # candidate-count bound for the subset search


def max_le1_almost_intersecting_bruteforce(n: int, k: int, cap: int = BRUTE_CAP) -> tuple[int, Family]:
    """Exact maximum size of a (<=1)-almost intersecting family in C([n], k).

    Branch and bound over colex-ordered candidates: a candidate can join only
    if it gains at most one disjoint partner and saturates no member that
    already has one; branches that cannot beat the incumbent are cut.  The
    first maximum found in this fixed order is returned as witness.
    """
    m = binomial(n, k)
    if m > cap:
        raise ResourceCapError(f"max_le1_almost_intersecting_bruteforce: C({n},{k})={m} exceeds cap {cap}")
    cand = [s.mask for s in enumerate_ksets(n, k)]
    disj = [0] * m
    for i in range(m):
        for j in range(m):
            if i != j and cand[i] & cand[j] == 0:
                disj[i] |= 1 << j

    best = 0
    best_sets: tuple[int, ...] = ()

    def rec(idx: int, chosen: int, size: int, saturated: int) -> None:
        nonlocal best, best_sets
        if size + (m - idx) <= best:
            return
        if idx == m:
            return
        partners = disj[idx] & chosen
        if partners.bit_count() <= 1 and partners & saturated == 0:
            new_sat = saturated
            if partners:
                new_sat |= partners | (1 << idx)
            if size + 1 > best:
                best = size + 1
                best_sets = tuple(iter_bits(chosen | (1 << idx)))
            rec(idx + 1, chosen | (1 << idx), size + 1, new_sat)
        rec(idx + 1, chosen, size, saturated)

    rec(0, 0, 0, 0)
    witness = Family(tuple(unrank_colex(r, n, k) for r in best_sets))
    return best, witness


@dataclass(frozen=True)
class FisherCheck:
    """Uniform pairwise-intersection report.  When ``uniform``, the family has
    common intersection size ``lam`` and ``bound_satisfied`` records the
    at-most-ground-size bound on the family size."""

    uniform: bool
    lam: int | None
    family_size: int
    ground_size: int
    bound_satisfied: bool | None


def fisher_uniform_intersection(f: Family) -> FisherCheck:
    """Detect a constant pairwise intersection size and check |f| <= n."""
    if len(f) < 2:
        raise ValueError("fisher_uniform_intersection: need at least two members")
    masks = [s.mask for s in f]
    lam = (masks[0] & masks[1]).bit_count()
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if (masks[i] & masks[j]).bit_count() != lam:
                return FisherCheck(False, None, len(f), f.n, None)
    return FisherCheck(True, lam, len(f), f.n, len(f) <= f.n)


@dataclass(frozen=True)
class Theorem4Result:
    """Total size versus the C(n-1, k-1) bound for a validated system."""

    total: int
    bound: int
    satisfied: bool
    within_hypothesis: bool  # n >= 2k+2 and k >= 4


def theorem4_bound(sys: FamilySystem) -> Theorem4Result:
    """Evaluate sum |F_i| against C(n-1, k-1) for a valid system."""
    check = validate_system(sys)
    if not check.ok:
        raise ValueError(f"theorem4_bound: invalid system ({check.message})")
    total = sys.total_size()
    bound = binomial(sys.n - 1, sys.k - 1)
    return Theorem4Result(
        total=total,
        bound=bound,
        satisfied=total <= bound,
        within_hypothesis=sys.n >= 2 * sys.k + 2 and sys.k >= 4,
    )


@lru_cache(maxsize=8)
def _disjointness_tables(n: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Per-candidate masks over colex ranks: (disjoint-from, intersecting), full mask."""
    cand = [s.mask for s in enumerate_ksets(n, k)]
    m = len(cand)
    disj = [0] * m
    for i in range(m):
        ci = cand[i]
        for j in range(i + 1, m):
            if ci & cand[j] == 0:
                disj[i] |= 1 << j
                disj[j] |= 1 << i
    full = (1 << m) - 1
    inter = tuple(full & ~d for d in disj)  # a set intersects itself
    return tuple(disj), inter, full


def random_maximal_system(n: int, k: int, seed: int) -> FamilySystem:
    """Grow a random system until no k-set can join any family or start a new
    one without breaking a system condition.

    Uses the documented Lcg64 stream: each step draws a uniformly random
    feasible k-set (by feasible-count), then a uniformly random placement
    among its admissible families (existing families in order, then "new").
    Feasibility masks are maintained incrementally, so termination implies
    maximality.  Deterministic per seed.
    """
    if n < 2 * k + 1:
        raise ValueError(f"random_maximal_system: need n >= 2k+1, got n={n} k={k}")
    disj, inter, full = _disjointness_tables(n, k)
    rng = Lcg64(seed)

    joinable: list[int] = []  # per existing family: ranks that could join it
    new_ok = full  # ranks that could start a new family
    families: list[list[int]] = []

    while True:
        feasible = new_ok
        for mask in joinable:
            feasible |= mask
        count = feasible.bit_count()
        if count == 0:
            break
        r = select_bit(feasible, rng.draw_below(count))
        rbit = 1 << r
        placements = [i for i, mask in enumerate(joinable) if mask & rbit]
        if new_ok & rbit:
            placements.append(-1)  # -1 encodes "start a new family"
        choice = placements[rng.draw_below(len(placements))] if len(placements) > 1 else placements[0]

        if choice == -1:
            fresh = new_ok & disj[r] & ~rbit
            families.append([r])
            new_ok &= inter[r] & ~rbit
            joinable = [mask & inter[r] & ~rbit for mask in joinable]
            joinable.append(fresh)
        else:
            families[choice].append(r)
            new_ok &= inter[r] & ~rbit
            for i in range(len(joinable)):
                if i == choice:
                    joinable[i] &= disj[r] & ~rbit
                else:
                    joinable[i] &= inter[r] & ~rbit

    fams = tuple(
        Family(tuple(unrank_colex(r, n, k) for r in members)) for members in families
    )
    return FamilySystem(fams, n=n, k=k)
