import pytest

from gpkn.core import Family, FamilySystem, KSet, binomial, profile
from gpkn.families import (
    are_cross_intersecting,
    fisher_uniform_intersection,
    hilton_milner,
    is_le1_almost_intersecting,
    is_pairwise_disjoint,
    max_le1_almost_intersecting_bruteforce,
    random_maximal_system,
    star,
    theorem4_bound,
    validate_system,
)


class TestPredicates:
    def test_pairwise_disjoint(self):
        assert is_pairwise_disjoint(Family.of([1, 2], [3, 4], n=5))
        assert not is_pairwise_disjoint(Family.of([1, 2], [2, 3], n=5))
        assert is_pairwise_disjoint(Family.of([1, 2], n=5))

    def test_disjoint_family_size_at_most_n_over_k(self):
        f = Family.of([1, 2], [3, 4], n=5)
        assert is_pairwise_disjoint(f)
        assert len(f) <= f.n // f.k

    def test_cross_intersecting(self):
        assert are_cross_intersecting(Family.of([1, 2], [1, 3], n=5), Family.of([1, 4], n=5))
        assert not are_cross_intersecting(Family.of([1, 2], n=5), Family.of([3, 4], n=5))
        assert are_cross_intersecting(Family(()), Family.of([3, 4], n=5))

    def test_le1_almost_intersecting(self):
        assert is_le1_almost_intersecting(star(6, 2, 1))
        assert not is_le1_almost_intersecting(Family.of([1, 2], [3, 4], [5, 6], n=6))
        assert is_le1_almost_intersecting(Family.of([1, 2], [3, 4], n=6))


class TestValidateSystem:
    def system(self, *families, n, k):
        return FamilySystem(tuple(Family.of(*f, n=n) for f in families), n=n, k=k)

    def test_single_family_ok(self):
        sys = self.system([[1, 2, 3, 4], [5, 6, 7, 8]], n=10, k=4)
        assert validate_system(sys).ok

    def test_condition1_repeated_singleton(self):
        sys = self.system([[1, 2]], [[1, 2]], n=5, k=2)
        check = validate_system(sys)
        assert not check.ok and check.condition == 1
        assert check.indices == (1, 2)

    def test_condition2_internal_intersection(self):
        sys = self.system([[1, 2], [2, 3]], n=5, k=2)
        check = validate_system(sys)
        assert not check.ok and check.condition == 2

    def test_condition3_not_cross_intersecting(self):
        sys = self.system([[1, 2]], [[3, 4]], n=5, k=2)
        check = validate_system(sys)
        assert not check.ok and check.condition == 3
        assert check.indices == (1, 2)


class TestStar:
    def test_sizes(self):
        assert len(star(10, 4, 1)) == 84
        for n in range(4, 17):
            for k in range(1, n // 2 + 1):
                assert len(star(n, k, 1)) == binomial(n - 1, k - 1)

    def test_explicit(self):
        assert [s.elements() for s in star(5, 2, 3)] == [(1, 3), (2, 3), (3, 4), (3, 5)]

    def test_star_is_intersecting(self):
        members = star(7, 3, 2).sets
        for a in members:
            for b in members:
                assert a.mask & b.mask


class TestHiltonMilner:
    def test_sizes(self):
        assert len(hilton_milner(10, 4, 1, KSet.from_elements([2, 3, 4, 5], 10)).members) == 75
        assert len(hilton_milner(16, 4, 1, KSet.from_elements([2, 3, 4, 5], 16)).members) == 291

    def test_size_formula_range(self):
        for k in (4, 5, 6):
            for n in range(2 * k, 17):
                g = KSet.from_elements(range(2, k + 2), n)
                fam = hilton_milner(n, k, 1, g)
                assert len(fam.members) == binomial(n - 1, k - 1) - binomial(n - k - 1, k - 1) + 1

    def test_intersecting_with_empty_common_intersection(self):
        fam = hilton_milner(10, 4, 1, KSet.from_elements([2, 3, 4, 5], 10))
        members = fam.members.sets
        common = members[0].mask
        for a in members:
            common &= a.mask
            for b in members:
                assert a.mask & b.mask
        assert common == 0

    def test_x_in_g_rejected(self):
        with pytest.raises(ValueError):
            hilton_milner(10, 4, 2, KSet.from_elements([2, 3, 4, 5], 10))


class TestBruteForce:
    def test_true_maxima(self):
        # all 2-subsets of a 4-point core: six members, each disjoint from
        # exactly one other, beating the star bound C(5,1)=5 at n=6
        size, witness = max_le1_almost_intersecting_bruteforce(6, 2)
        assert size == 6
        assert [s.elements() for s in witness] == [
            (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4),
        ]
        assert is_le1_almost_intersecting(witness)

    def test_7_2(self):
        size, witness = max_le1_almost_intersecting_bruteforce(7, 2)
        assert size == 6 == binomial(6, 1)
        assert is_le1_almost_intersecting(witness)

    def test_5_2(self):
        size, witness = max_le1_almost_intersecting_bruteforce(5, 2)
        assert size == 6  # below n=2k+2 the star bound fails badly
        assert is_le1_almost_intersecting(witness)

    def test_cap(self):
        from gpkn.core import ResourceCapError

        with pytest.raises(ResourceCapError):
            max_le1_almost_intersecting_bruteforce(10, 3)


class TestFisher:
    def test_examples(self):
        r = fisher_uniform_intersection(Family.of([1, 2], [1, 3], [1, 4], n=5))
        assert r.uniform and r.lam == 1 and r.bound_satisfied
        r = fisher_uniform_intersection(Family.of([1, 2], [3, 4], n=5))
        assert r.uniform and r.lam == 0
        r = fisher_uniform_intersection(Family.of([1, 2], [1, 3], [2, 3], n=3))
        assert r.uniform and r.lam == 1
        assert r.family_size == 3 and r.ground_size == 3 and r.bound_satisfied

    def test_not_uniform(self):
        r = fisher_uniform_intersection(Family.of([1, 2], [1, 3], [4, 5], n=5))
        assert not r.uniform and r.lam is None

    def test_requires_two_members(self):
        with pytest.raises(ValueError):
            fisher_uniform_intersection(Family.of([1, 2], n=5))


class TestTheorem4Bound:
    def test_star_split_into_singletons_is_tight(self):
        members = star(10, 4, 1)
        sys = FamilySystem(tuple(Family((s,)) for s in members), n=10, k=4)
        r = theorem4_bound(sys)
        assert r.total == 84 and r.bound == 84 and r.satisfied and r.within_hypothesis

    def test_single_disjoint_pair_family(self):
        sys = FamilySystem((Family.of([1, 2, 3, 4], [5, 6, 7, 8], n=10),), n=10, k=4)
        r = theorem4_bound(sys)
        assert r.total == 2 and r.bound == 84 and r.satisfied

    def test_invalid_system_rejected(self):
        sys = FamilySystem(
            (Family.of([1, 2, 3, 4], n=10), Family.of([5, 6, 7, 8], n=10)), n=10, k=4
        )
        with pytest.raises(ValueError):
            theorem4_bound(sys)


class TestRandomMaximalSystem:
    def test_determinism(self):
        assert random_maximal_system(10, 4, 1) == random_maximal_system(10, 4, 1)
        assert random_maximal_system(10, 4, 1) != random_maximal_system(10, 4, 2)

    def test_validity_and_bound(self):
        for seed in range(25):
            sys = random_maximal_system(10, 4, seed)
            assert validate_system(sys).ok
            assert theorem4_bound(sys).satisfied

    def test_t_bounded_by_n_over_k(self):
        sys = random_maximal_system(9, 4, 7)
        assert profile(sys).t <= 9 // 4

    def test_maximality(self):
        # no leftover k-set can join any family or stand alone
        from gpkn.core import enumerate_ksets

        sys = random_maximal_system(9, 4, 3)
        used = {s.mask for f in sys.families for s in f}
        for cand in enumerate_ksets(9, 4):
            if cand.mask in used:
                continue
            can_new = all(
                cand.mask & s.mask for f in sys.families for s in f
            )
            assert not can_new
            for i, f in enumerate(sys.families):
                fits = all(cand.mask & s.mask == 0 for s in f) and all(
                    cand.mask & s.mask
                    for j, g in enumerate(sys.families)
                    if j != i
                    for s in g
                )
                assert not fits

    def test_m2_bound(self):
        for seed in range(20):
            sys = random_maximal_system(12, 5, seed)
            p = profile(sys)
            m2 = p.m[1] if p.t >= 2 else 0
            assert m2 <= binomial(2 * 5 - 1, 4)

    def test_union_is_le1_almost_intersecting_when_t_le_2(self):
        # for n >= 2k+2 with families of size at most 2, each member's only
        # possible disjoint partner is its own family mate
        found = 0
        for seed in range(30):
            sys = random_maximal_system(10, 4, seed)
            if profile(sys).t > 2:
                continue
            union = Family(tuple(s for f in sys.families for s in f))
            assert is_le1_almost_intersecting(union)
            found += 1
        assert found >= 10
