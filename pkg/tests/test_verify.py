from fractions import Fraction

import pytest

from natexlib import (
    AssessmentSet,
    ConditioningFamily,
    JointModel,
    MassFunction,
    PreconditionError,
    SuiteConfig,
    check_external_additivity,
    check_factorisation,
    check_theorem_factadd,
    indicator,
    product_expectation,
    run_property_suite,
)
from natexlib.reports import CheckStatus
from natexlib.verify import PROPERTIES, PROPERTY_GROUPS, run_property, suite_for_groups


class TestFactorisation:
    def test_vacuous_locals_with_constant_multiplier(self, ab, cd):
        jm = JointModel(
            AssessmentSet.vacuous(ab),
            AssessmentSet.vacuous(cd),
            ConditioningFamily.singletons(ab),
            ConditioningFamily.singletons(cd),
        )
        f, h = ab.gamble([2, -1]), cd.gamble([0, 3])
        check = check_theorem_factadd(jm, 1, f, ab.constant(1), h)
        assert check.holds
        assert check.lhs == check.rhs == -1

    def test_precise_locals(self, precise_pair, ab, cd):
        g, h = indicator(ab.event(["a"])), cd.gamble([1, -1])
        check = check_theorem_factadd(precise_pair, 1, ab.constant(0), g, h)
        assert check.holds
        assert check.lhs == Fraction(-1, 6)
        assert dict(check.extra)["inner"] == Fraction(-1, 3)

    def test_interval_with_vacuous_local(self, interval_vacuous_pair, ab, cd):
        check = check_theorem_factadd(
            interval_vacuous_pair, 1, ab.constant(0), indicator(ab.event(["a"])), indicator(cd.event(["c"]))
        )
        assert check.holds
        assert check.lhs == 0

    def test_sign_split(self, precise_pair, ab, cd):
        check = check_factorisation(precise_pair, 1, indicator(ab.event(["a"])), cd.gamble([1, -1]))
        assert check.status is CheckStatus.HOLDS
        assert check.lhs == Fraction(-1, 6)
        assert dict(check.extra)["sign split"] == Fraction(-1, 6)

    def test_zero_inner_value(self, precise_pair, ab, cd):
        h = cd.gamble([2, -1])  # E(h) = 2/3 - 2/3 = 0
        check = check_factorisation(precise_pair, 1, ab.gamble([1, 3]), h)
        assert check.holds
        assert check.lhs == 0

    def test_nonnegative_factor(self, precise_pair, ab, cd):
        check = check_factorisation(precise_pair, 1, indicator(ab.event(["a"])), indicator(cd.event(["d"])))
        assert check.lhs == Fraction(1, 3)

    def test_second_factor_as_multiplier(self, precise_pair, ab, cd):
        check = check_factorisation(precise_pair, 2, indicator(cd.event(["d"])), ab.gamble([2, -2]))
        assert check.holds
        assert check.lhs == 0

    def test_non_measurable_multiplier_is_only_reported(self, interval, abc):
        jm = JointModel(
            AssessmentSet.vacuous(abc),
            interval,
            ConditioningFamily(abc, (abc.event(["a"]),)),
            ConditioningFamily.singletons(interval.space),
        )
        check = check_theorem_factadd(
            jm, 1, abc.constant(0), abc.gamble([0, 1, 2]), interval.space.gamble([1, 0])
        )
        assert check.status is CheckStatus.HYPOTHESIS_NOT_MET

    def test_negative_multiplier(self, precise_pair, ab, cd):
        with pytest.raises(PreconditionError):
            check_factorisation(precise_pair, 1, ab.gamble([-1, 0]), cd.gamble([1, 0]))


class TestExternalAdditivity:
    def test_vacuous(self, ab, cd):
        jm = JointModel(
            AssessmentSet.vacuous(ab),
            AssessmentSet.vacuous(cd),
            ConditioningFamily.empty(ab),
            ConditioningFamily.empty(cd),
        )
        check = check_external_additivity(jm, ab.gamble([3, 1]), cd.gamble([-2, 4]))
        assert check.holds
        assert check.lhs == -1

    def test_precise(self, precise_pair, ab, cd):
        check = check_external_additivity(precise_pair, indicator(ab.event(["a"])), indicator(cd.event(["d"])))
        assert check.lhs == check.rhs == Fraction(7, 6)

    def test_interval_with_vacuous_local(self, interval_vacuous_pair, ab, cd):
        check = check_external_additivity(interval_vacuous_pair, indicator(ab.event(["a"])), cd.constant(0))
        assert check.lhs == check.rhs == Fraction(3, 10)


class TestProductExpectation:
    def test_brute_force(self, ab, cd, precise_pair):
        p1 = MassFunction(ab, (Fraction(1, 2), Fraction(1, 2)))
        p2 = MassFunction(cd, (Fraction(1, 3), Fraction(2, 3)))
        f = precise_pair.product.space.gamble([6, 0, 0, 3])
        assert product_expectation(p1, p2, f) == 2


class TestPropertySuite:
    def test_every_group_names_known_properties(self):
        for names in PROPERTY_GROUPS.values():
            assert set(names) <= set(PROPERTIES)

    def test_groups_restrict_the_run(self):
        config = suite_for_groups(SuiteConfig(), ["additivity", "envelope"])
        assert config.only == (
            "external additivity",
            "natural extension matches credal envelope",
            "credal vertices match grid oracle",
        )
        assert suite_for_groups(SuiteConfig(), ["all"]).only == ()

    def test_small_spaces_cover_every_property(self):
        config = SuiteConfig(seed=11, max_space=2, max_assessments=1, models=1, samples=1)
        report = run_property_suite(config)
        assert report.property_count == len(PROPERTIES)
        assert report.passed, report.to_text()

    def test_same_seed_same_report(self):
        config = SuiteConfig(seed=4, max_space=2, models=1, samples=2, only=("external additivity",))
        assert run_property_suite(config).to_document() == run_property_suite(config).to_document()

    def test_corrupted_oracle_is_attributed(self):
        config = SuiteConfig(
            seed=2,
            max_space=2,
            models=1,
            samples=1,
            corrupt="external additivity",
            only=("external additivity", "factor symmetry"),
        )
        report = run_property_suite(config)
        assert [r.name for r in report.failed()] == ["external additivity"]
        assert report.to_text().endswith("1 properties failed")

    def test_unknown_property(self):
        with pytest.raises(PreconditionError):
            run_property_suite(SuiteConfig(only=("no such property",)))

    def test_single_property(self):
        result = run_property("coherence routes agree", SuiteConfig(seed=1, max_space=2, models=2))
        assert result.passed
        assert result.checked == 2
        assert result.instances == 2

    def test_acceptance_models_raise_the_instance_count(self):
        config = SuiteConfig(seed=3, max_space=2, models=1, samples=1, acceptance_models=5)
        assert run_property("natural extension matches credal envelope", config).instances == 5

    def test_grid_oracle_property(self):
        config = SuiteConfig(seed=5, max_space=3, models=1, grid_models=3, grid_denominator=4)
        result = run_property("credal vertices match grid oracle", config)
        assert result.passed, result.violations
        assert result.instances == 3
        assert result.checked > 0

    def test_grid_oracle_property_can_be_corrupted(self):
        config = SuiteConfig(seed=5, max_space=2, models=1, corrupt="credal vertices match grid oracle")
        assert not run_property("credal vertices match grid oracle", config).passed

    @pytest.mark.slow
    def test_desk_scale(self):
        report = run_property_suite(SuiteConfig.desk_scale(seed=0, workers=2))
        assert report.passed, report.to_text()
        by_name = {r.name: r for r in report.results}
        assert by_name["coherence routes agree"].instances >= 200
        assert by_name["natural extension matches credal envelope"].instances >= 200
        assert by_name["credal vertices match grid oracle"].instances >= 20
