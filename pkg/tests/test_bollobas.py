from fractions import Fraction

import pytest

from gpkn.bollobas import (
    SetPairSystem,
    SetPairValidationError,
    classic_lhs,
    eq3_check,
    lemma5_lhs,
    pair_contribution,
    permutation_oracle,
    precedes,
    sweep_classic,
    sweep_lemma5,
    triple_contribution,
)
from gpkn.core import ResourceCapError


class TestClassic:
    def test_tight_pair_flip(self):
        assert classic_lhs([({1}, {2}), ({2}, {1})]) == 1

    def test_single_pair_k4(self):
        assert classic_lhs([({1, 2, 3, 4}, {5, 6, 7, 8})]) == Fraction(1, 70)

    def test_doubling_construction(self):
        # m2 disjoint pairs of k-sets, doubled, give 2*m2 / C(2k, k)
        k, m2 = 2, 3
        base = [({1, 2}, {3, 4}), ({1, 3}, {2, 4}), ({1, 4}, {2, 3})]
        doubled = base + [(b, a) for a, b in base]
        value = classic_lhs(doubled)
        assert value == Fraction(2 * m2, 6)
        assert value <= 1

    def test_validation_names_indices(self):
        with pytest.raises(SetPairValidationError) as exc:
            classic_lhs([({1}, {2}), ({3}, {4})])
        assert "1" in str(exc.value) and "2" in str(exc.value)
        with pytest.raises(SetPairValidationError):
            classic_lhs([({1, 2}, {2, 3})])


class TestLemma5:
    def test_single_singleton_pair_is_tight(self):
        assert lemma5_lhs(SetPairSystem.of(pairs=[({1}, {2})])) == 1

    def test_single_triple_k2(self):
        sys = SetPairSystem.of(triples=[({1, 2}, {3, 4}, {5, 6})])
        assert lemma5_lhs(sys) == Fraction(11, 15)

    def test_uniform_triple_value(self):
        for k in (2, 3, 4):
            from math import comb

            tri = tuple(frozenset(range(i * k + 1, (i + 1) * k + 1)) for i in range(3))
            got = lemma5_lhs(SetPairSystem.of(triples=[tri]))
            assert got == Fraction(6, comb(2 * k, k)) - Fraction(4, comb(3 * k, k))

    def test_cross_condition_enforced(self):
        sys = SetPairSystem.of(pairs=[({1}, {2}), ({2}, {1})])
        with pytest.raises(SetPairValidationError) as exc:
            lemma5_lhs(sys)
        assert "items 1 and 2" in str(exc.value)

    def test_structure_enforced(self):
        with pytest.raises(SetPairValidationError):
            SetPairSystem.of(pairs=[({1, 2}, {2, 3})])
        with pytest.raises(SetPairValidationError):
            SetPairSystem.of(triples=[({1}, {2}, set())])

    def test_known_violations_of_literal_form(self):
        # a lone triple with singleton parts exceeds 1 under the literal
        # two-negative-term form; with all parts of size >= 2 it does not
        sys = SetPairSystem.of(triples=[({1}, {2}, {3})])
        assert lemma5_lhs(sys) == Fraction(5, 3)
        sys = SetPairSystem.of(triples=[({1}, {2}, {3, 4})])
        assert lemma5_lhs(sys) == Fraction(4, 3)

    def test_json_round_trip(self):
        sys = SetPairSystem.of(pairs=[({1, 2}, {3, 4})], triples=[({1, 2}, {3, 4}, {5, 6})])
        again = SetPairSystem.from_json(sys.to_json())
        assert again == sys

    def test_json_errors(self):
        with pytest.raises(SetPairValidationError):
            SetPairSystem.from_json("not json")
        with pytest.raises(SetPairValidationError):
            SetPairSystem.from_json('{"pairs": [[[1],[2],[3]]]}')


class TestEq3:
    def test_tight_at_m2_35(self):
        r = eq3_check(4, 35, 0)
        assert r.holds and r.lhs == 1
        assert r.consequence_applicable and r.consequence_holds

    def test_fails_with_one_triple(self):
        r = eq3_check(4, 35, 1)
        assert not r.holds
        assert r.lhs == Fraction(68, 70) + Fraction(6, 70) - Fraction(6, 495)

    def test_zero_case(self):
        assert eq3_check(3, 0, 0).holds

    def test_relaxation_of_triple_form(self):
        # coefficient 6 on the subtracted term lowers the LHS below the
        # literal triple form, so the triple form implies this one
        from math import comb

        for k in (2, 3, 4):
            m3 = 1
            literal = Fraction(6, comb(2 * k, k)) - Fraction(4, comb(3 * k, k))
            relaxed = eq3_check(k, m3, m3).lhs
            assert relaxed <= literal

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            eq3_check(1, 0, 0)
        with pytest.raises(ValueError):
            eq3_check(4, 1, 2)


class TestPrecedes:
    def test_examples(self):
        assert precedes((1, 2, 3), {1}, {3})
        assert not precedes((1, 2, 3), {2}, {1})
        assert precedes((1, 3, 2), {1, 3}, {2})

    def test_validation(self):
        with pytest.raises(ValueError):
            precedes((1, 2, 3), {1}, {1})
        with pytest.raises(ValueError):
            precedes((1, 2), {1}, {3})


class TestOracle:
    def test_single_pair_counts(self):
        rep = permutation_oracle(SetPairSystem.of(pairs=[({1}, {2})]))
        assert rep.total_permutations == 2
        assert [c.count for c in rep.counts] == [1, 1]
        assert rep.counts_match and rep.at_most_one_ok

    def test_singleton_triple_counts(self):
        rep = permutation_oracle(SetPairSystem.of(triples=[({1}, {2}, {3})]))
        assert rep.total_permutations == 6
        assert [c.count for c in rep.counts] == [3, 3]
        assert rep.counts_match and rep.at_most_one_ok
        assert not rep.lhs_le_1  # the literal triple form fails here

    def test_two_pair_system(self):
        sys = SetPairSystem.of(pairs=[({1, 2}, {3, 4}), ({1, 3}, {2, 4})])
        rep = permutation_oracle(sys)
        assert rep.counts_match and rep.at_most_one_ok and rep.lhs_le_1

    def test_uniform_k2_triple(self):
        sys = SetPairSystem.of(triples=[({1, 2}, {3, 4}, {5, 6})])
        rep = permutation_oracle(sys)
        assert rep.counts_match and rep.at_most_one_ok
        assert rep.lhs == Fraction(11, 15)

    def test_invalid_system_rejected(self):
        with pytest.raises(SetPairValidationError):
            permutation_oracle(SetPairSystem.of(pairs=[({1}, {2}), ({1}, {2})]))

    def test_cap(self):
        big = SetPairSystem.of(pairs=[(set(range(1, 6)), set(range(6, 11)))])
        with pytest.raises(ResourceCapError):
            permutation_oracle(big)


class TestSweeps:
    def test_classic_sweep_has_no_violations(self):
        rep = sweep_classic(5, 2)
        assert rep.all_within_bound
        assert rep.max_lhs == 1

    def test_lemma5_sweep_violations_characterized(self):
        # exactly the one-item triples with some singleton part exceed 1
        rep = sweep_lemma5(5, 2, collect_cap=10_000)
        assert not rep.all_within_bound
        for sys, value in rep.violations:
            assert sys.alpha == 0 and sys.beta == 1
            assert min(len(p) for p in sys.triples[0]) == 1
            assert value > 1
        expected = sum(
            1
            for a in (1, 2)
            for b in (1, 2)
            for c in (1, 2)
            if min(a, b, c) == 1
            and triple_contribution(a, b, c) > 1
        )
        assert expected == 7  # every mixed-size pattern except (2,2,2)

    def test_lemma5_sweep_multi_item_systems_all_pass(self):
        rep = sweep_lemma5(6, 2, collect_cap=10_000)
        for sys, _ in rep.violations:
            assert sys.alpha + sys.beta == 1  # only one-item systems ever fail

    def test_pair_contribution(self):
        assert pair_contribution(1, 1) == 1
        assert pair_contribution(2, 2) == Fraction(1, 3)
