from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from natexlib import (
    AssessmentSet,
    ConditionalAssessment,
    IncoherentError,
    LinearPrevision,
    MassFunction,
    PreconditionError,
    ScopeError,
    Space,
    cdd_vertices,
    credal_vertices,
    grid_oracle_check,
    indicator,
    lower_envelope_value,
    natural_extension_value,
    p_axiom_suite,
)
from natexlib.envelope import grid_points, in_convex_hull, vertex_supports_active_constraints

from conftest import lower_probabilities

payoffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def vertices(polytope):
    return {v.probabilities for v in polytope.vertices}


class TestCredalVertices:
    def test_full_simplex(self, ab):
        polytope = credal_vertices(AssessmentSet.vacuous(ab))
        assert vertices(polytope) == {(1, 0), (0, 1)}

    def test_lower_probability(self, single_bound):
        polytope = credal_vertices(single_bound)
        assert vertices(polytope) == {(Fraction(3, 10), Fraction(7, 10)), (1, 0)}
        assert vertex_supports_active_constraints(polytope)

    def test_conditional_assessments_are_out_of_scope(self, ab):
        P = AssessmentSet(ab, (ConditionalAssessment(ab.gamble([1, 0]), ab.event(["a"]), 1),))
        with pytest.raises(ScopeError):
            credal_vertices(P)

    def test_incoherent_input(self, sure_loss):
        with pytest.raises(IncoherentError):
            credal_vertices(sure_loss)

    @settings(max_examples=25, deadline=None)
    @given(payoffs, payoffs, payoffs)
    def test_envelope_matches_natural_extension(self, x, y, z):
        abc = Space(("a", "b", "c"))
        P = lower_probabilities(abc, {"a": Fraction(1, 5), "b": Fraction(1, 4)})
        polytope = credal_vertices(P)
        f = abc.gamble([x, y, z])
        assert lower_envelope_value(polytope, f) == natural_extension_value(P, f)


class TestGridOracle:
    def test_half_lower_probability_on_three_outcomes(self, abc):
        P = lower_probabilities(abc, {"a": Fraction(1, 2)})
        half = Fraction(1, 2)
        assert vertices(credal_vertices(P)) == {(1, 0, 0), (half, half, 0), (half, 0, half)}

    def test_grid_points(self):
        assert grid_points(2, 2) == [(0, 1), (Fraction(1, 2), Fraction(1, 2)), (1, 0)]
        assert len(grid_points(3, 1)) == 3

    def test_in_convex_hull(self, ab):
        polytope = credal_vertices(lower_probabilities(ab, {"a": Fraction(3, 10)}))
        assert in_convex_hull(polytope.vertices, (Fraction(1, 2), Fraction(1, 2)))
        assert not in_convex_hull(polytope.vertices, (Fraction(1, 5), Fraction(4, 5)))

    def test_enumerated_vertices_pass(self, abc):
        P = lower_probabilities(abc, {"a": Fraction(1, 5), "b": Fraction(1, 4)})
        result = grid_oracle_check(credal_vertices(P), max_denominator=10)
        assert result.passed, result.violations
        assert result.checked > len(credal_vertices(P).vertices)

    def test_missing_vertex_is_caught(self, abc):
        polytope = credal_vertices(lower_probabilities(abc, {"a": Fraction(1, 2)}))
        truncated = replace(polytope, vertices=polytope.vertices[:-1])
        result = grid_oracle_check(truncated, max_denominator=4)
        assert not result.passed
        assert all(v.detail["direction"] == "complete" for v in result.violations)

    def test_large_spaces_are_out_of_scope(self):
        space = Space(("a", "b", "c", "d", "e"))
        with pytest.raises(ScopeError):
            grid_oracle_check(credal_vertices(AssessmentSet.vacuous(space)))

    def test_matches_double_description(self, abc):
        pytest.importorskip("cdd")
        P = lower_probabilities(abc, {"a": Fraction(1, 5), "b": Fraction(1, 4)})
        assert cdd_vertices(P) == vertices(credal_vertices(P))


class TestLowerEnvelope:
    def test_values(self, single_bound, ab):
        polytope = credal_vertices(single_bound)
        assert lower_envelope_value(polytope, ab.gamble([1, 0])) == Fraction(3, 10)
        assert lower_envelope_value(polytope, ab.gamble([0, 1])) == 0

    def test_zero_mass_condition(self, single_bound, ab):
        polytope = credal_vertices(single_bound)
        with pytest.raises(ScopeError):
            lower_envelope_value(polytope, ab.gamble([0, 1]), ab.event(["b"]))


class TestMassFunction:
    def test_validation(self, ab):
        with pytest.raises(PreconditionError):
            MassFunction(ab, (Fraction(1, 2), Fraction(1, 3)))
        with pytest.raises(PreconditionError):
            MassFunction(ab, (Fraction(3, 2), Fraction(-1, 2)))

    def test_expectation_and_probability(self, abc):
        p = MassFunction(abc, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
        assert p.expectation(abc.gamble([4, 0, 8])) == 4
        assert p.probability(abc.event(["b", "c"])) == Fraction(1, 2)
        assert p.has_full_support()

    def test_as_assessments_is_a_precise_model(self, ab):
        p = MassFunction(ab, (Fraction(1, 3), Fraction(2, 3)))
        P = p.as_assessments()
        f = ab.gamble([3, -3])
        assert natural_extension_value(P, f) == p.expectation(f)


class TestLinearPrevision:
    def test_conditional_prevision(self, ab):
        P = LinearPrevision(MassFunction.uniform(ab))
        assert P(indicator(ab.event(["a"]))) == Fraction(1, 2)
        assert P(ab.gamble([2, 6]), ab.event(["a"])) == 2

    def test_zero_probability(self, ab):
        P = LinearPrevision(MassFunction(ab, (1, 0)))
        with pytest.raises(PreconditionError):
            P(ab.gamble([1, 0]), ab.event(["b"]))

    def test_axiom_suite(self, abc):
        p = MassFunction(abc, (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)))
        result = p_axiom_suite(p, samples=10, seed=5)
        assert result.passed
        assert result.checked == 50

    def test_axiom_suite_needs_full_support(self, ab):
        with pytest.raises(PreconditionError):
            p_axiom_suite(MassFunction(ab, (1, 0)))
