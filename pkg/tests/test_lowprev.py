from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from natexlib import (
    AssessmentSet,
    ConditionalAssessment,
    IncoherentError,
    NaturalExtension,
    ScopeError,
    Space,
    Verdict,
    check_coherence,
    check_coherence_direct,
    indicator,
    is_coherent_extension,
    lp_axiom_suite,
    natural_extension_value,
    upper_natural_extension_value,
)
from natexlib.lowprev import natural_extension

from conftest import lower_probabilities

payoffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


class TestCheckCoherence:
    def test_vacuous(self, ab):
        report = check_coherence(AssessmentSet.vacuous(ab))
        assert report.is_coherent
        assert report.summary() == "coherent (0 assessments)"

    def test_partial_loss_certificate(self, sure_loss):
        report = check_coherence(sure_loss)
        assert report.verdict is Verdict.INCURS_PARTIAL_LOSS
        assert report.certificate.weights == (1, 1)
        assert report.certificate.margin == Fraction(3, 20)

    def test_interval_is_coherent(self, interval):
        report = check_coherence(interval)
        assert report.is_coherent
        assert [d.natural_extension for d in report.details] == [Fraction(3, 10), Fraction(3, 5)]

    def test_dominated_assessment(self, ab):
        Ia = indicator(ab.event(["a"]))
        P = AssessmentSet(
            ab,
            (
                ConditionalAssessment(Ia, ab.full(), Fraction(1, 5)),
                ConditionalAssessment(Ia * 2, ab.full(), Fraction(1, 5)),
            ),
        )
        report = check_coherence(P)
        assert report.verdict is Verdict.DOMINATED
        assert report.index == 1
        assert report.value == Fraction(2, 5)
        assert report.summary() == "dominated assessment #1 (natural extension 2/5)"

    def test_certain_conditional_assessment(self, ab):
        # P(I_a) = 1 leaves every conditional query on {b} at its minimum
        P = lower_probabilities(ab, {"a": Fraction(1)})
        assert check_coherence(P).is_coherent
        f = ab.gamble([3, 2])
        assert natural_extension_value(P, f, ab.event(["b"])) == 2


class TestDirectRoute:
    def test_vacuous(self, ab):
        assert check_coherence_direct(AssessmentSet.vacuous(ab)).is_coherent

    def test_partial_loss(self, sure_loss):
        report = check_coherence_direct(sure_loss)
        assert report.verdict is Verdict.INCURS_PARTIAL_LOSS
        assert report.route == "direct"
        assert report.certificate.weights == (1, 1)

    def test_interval(self, interval):
        assert check_coherence_direct(interval).is_coherent

    def test_dominated_value(self, ab):
        Ia = indicator(ab.event(["a"]))
        P = AssessmentSet(
            ab,
            (
                ConditionalAssessment(Ia, ab.full(), Fraction(1, 5)),
                ConditionalAssessment(Ia * 2, ab.full(), Fraction(1, 5)),
            ),
        )
        report = check_coherence_direct(P)
        assert report.same_verdict(check_coherence(P))
        assert report.value == Fraction(2, 5)

    def test_dominated_value_uses_every_assessment(self, abc):
        # {b} alone already dominates P(I_ab) = 3/10; with {a} the natural extension is 7/10
        P = AssessmentSet(
            abc,
            (
                ConditionalAssessment(indicator(abc.event(["a"])), abc.full(), Fraction(1, 5)),
                ConditionalAssessment(indicator(abc.event(["b"])), abc.full(), Fraction(1, 2)),
                ConditionalAssessment(indicator(abc.event(["a", "b"])), abc.full(), Fraction(3, 10)),
            ),
        )
        direct, cone = check_coherence_direct(P), check_coherence(P)
        assert direct.verdict is cone.verdict is Verdict.DOMINATED
        assert direct.index == cone.index == 2
        assert direct.value == cone.value == Fraction(7, 10)

    def test_subset_cap(self, interval):
        with pytest.raises(ScopeError):
            check_coherence_direct(interval, max_assessments=1)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.tuples(payoffs, payoffs, st.sampled_from(["all", "a", "b"]), payoffs), max_size=3))
    def test_routes_agree(self, rows):
        ab = Space(("a", "b"))
        items = {}
        for x, y, event, bound in rows:
            f = ab.gamble([x, y])
            B = ab.full() if event == "all" else ab.event([event])
            low, high = f.min(B), f.max(B)
            items[(f, B)] = ConditionalAssessment(f, B, min(max(bound, low), high))
        P = AssessmentSet(ab, tuple(items.values()))
        assert check_coherence(P).same_verdict(check_coherence_direct(P))


class TestNaturalExtension:
    def test_vacuous_gives_the_minimum(self, abc):
        P = AssessmentSet.vacuous(abc)
        f = abc.gamble([2, -1, 5])
        assert natural_extension_value(P, f) == -1
        assert natural_extension_value(P, f, abc.event(["a", "c"])) == 2

    def test_lower_probability_of_the_complement(self, single_bound, ab):
        assert natural_extension_value(single_bound, ab.gamble([0, 1])) == 0

    def test_conditional_lower_probability(self, abc):
        P = lower_probabilities(abc, {"a": Fraction(1, 2)})
        assert natural_extension_value(P, indicator(abc.event(["a"])), abc.event(["a", "b"])) == Fraction(1, 2)

    def test_upper_is_conjugate(self, interval, ab):
        assert upper_natural_extension_value(interval, ab.gamble([1, 0])) == Fraction(2, 5)

    def test_reproduces_the_assessments(self, interval):
        for a in interval:
            assert natural_extension_value(interval, a.gamble, a.event) == a.lower_bound

    def test_probabilities(self, interval, ab):
        natex = NaturalExtension(interval)
        assert natex.lower_probability(ab.event(["a"])) == Fraction(3, 10)
        assert natex.upper_probability(ab.event(["a"])) == Fraction(2, 5)

    def test_incoherent_input_is_refused(self, sure_loss, ab):
        with pytest.raises(IncoherentError) as info:
            natural_extension_value(sure_loss, ab.gamble([1, 0]))
        assert info.value.report.verdict is Verdict.INCURS_PARTIAL_LOSS

    def test_results_are_cached(self, interval):
        assert natural_extension(interval) is natural_extension(interval)

    def test_coherent_extension(self, single_bound, ab):
        Ib = indicator(ab.event(["b"]))
        assert is_coherent_extension(single_bound, Ib, ab.full(), Fraction(1, 2))
        assert not is_coherent_extension(single_bound, Ib, ab.full(), Fraction(4, 5))

    def test_constant_shift(self, single_bound, ab):
        f = ab.gamble([1, -2])
        natex = natural_extension(single_bound)
        assert natex.lower(f + 5) == natex.lower(f) + 5


class TestAxiomSuite:
    def test_vacuous(self, abc):
        result = lp_axiom_suite(AssessmentSet.vacuous(abc), samples=10, seed=3)
        assert result.passed
        assert result.checked > 0

    def test_interval(self, interval):
        assert lp_axiom_suite(interval, samples=10, seed=1).passed
