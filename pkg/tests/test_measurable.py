from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from natexlib import (
    ConditioningFamily,
    NotMeasurable,
    PreconditionError,
    ScopeError,
    SimpleDecomposition,
    Space,
    is_measurable,
    is_simple_measurable,
    threshold_condition,
)
from natexlib.measurable import MAX_FAMILY_SEARCH

ABC = Space(("a", "b", "c"))
SPLIT = ConditioningFamily(ABC, (ABC.event(["a"]), ABC.event(["b", "c"])))
nonnegative = st.lists(st.fractions(min_value=0, max_value=3, max_denominator=4), min_size=3, max_size=3)


class TestSimpleMeasurable:
    def test_read_off_decomposition(self):
        verdict = is_simple_measurable(ABC.gamble([2, 1, 1]), SPLIT)
        assert verdict == SimpleDecomposition(Fraction(1), ((Fraction(1), ABC.event(["a"])),))

    def test_not_measurable(self):
        assert isinstance(is_simple_measurable(ABC.gamble([0, 1, 2]), SPLIT), NotMeasurable)

    def test_layered_decomposition_for_all_subsets(self):
        verdict = is_simple_measurable(ABC.gamble([0, 1, 2]), ConditioningFamily.all_subsets(ABC))
        assert verdict.c0 == 0
        assert verdict.terms == ((1, ABC.event(["b", "c"])), (1, ABC.event(["c"])))

    def test_linear_program_fallback(self):
        # {a,b} and {b,c} overlap: [1,2,1] = I_{a,b} + I_{b,c}, no superlevel layering
        family = ConditioningFamily(ABC, (ABC.event(["a", "b"]), ABC.event(["b", "c"])))
        g = ABC.gamble([1, 2, 1])
        verdict = is_simple_measurable(g, family)
        assert isinstance(verdict, SimpleDecomposition)
        assert verdict.reconstruct(g) == g

    def test_negative_gambles_are_rejected(self):
        with pytest.raises(PreconditionError):
            is_simple_measurable(ABC.gamble([-1, 0, 0]), SPLIT)

    @settings(max_examples=40, deadline=None)
    @given(nonnegative)
    def test_decompositions_reconstruct_the_gamble(self, values):
        g = ABC.gamble(values)
        for family in (SPLIT, ConditioningFamily.singletons(ABC), ConditioningFamily.empty(ABC)):
            verdict = is_simple_measurable(g, family)
            if isinstance(verdict, SimpleDecomposition):
                assert verdict.reconstruct(g) == g
                assert verdict.c0 >= 0
                assert all(c > 0 for c, _ in verdict.terms)

    @settings(max_examples=40, deadline=None)
    @given(nonnegative)
    def test_every_gamble_is_measurable_for_all_subsets(self, values):
        assert is_measurable(ABC.gamble(values), ConditioningFamily.all_subsets(ABC))


class TestThresholdCondition:
    def test_superlevel_sets_in_the_family(self):
        family = ConditioningFamily(ABC, (ABC.event(["a"]),))
        assert threshold_condition(ABC.gamble([2, 1, 1]), family)

    def test_missing_superlevel_set(self):
        family = ConditioningFamily(ABC, (ABC.event(["a"]),))
        assert not threshold_condition(ABC.gamble([0, 1, 2]), family)

    def test_constant_gamble(self):
        ab = Space(("a", "b"))
        assert threshold_condition(ab.constant(3), ConditioningFamily.empty(ab))

    @settings(max_examples=40, deadline=None)
    @given(nonnegative)
    def test_threshold_condition_implies_measurability(self, values):
        g = ABC.gamble(values)
        for family in (SPLIT, ConditioningFamily.singletons(ABC)):
            if threshold_condition(g, family):
                assert is_measurable(g, family)

    def test_search_is_capped(self):
        space = Space(tuple(f"x{k}" for k in range(5)))
        family = ConditioningFamily.all_subsets(space)
        assert len(family) > MAX_FAMILY_SEARCH
        with pytest.raises(ScopeError):
            threshold_condition(space.constant(1), family)

    def test_measurable_without_the_threshold_condition(self):
        # superlevel set {b} is no disjoint union of {a,b} and {b,c}, yet [1,2,1] = I_{a,b} + I_{b,c}
        family = ConditioningFamily(ABC, (ABC.event(["a", "b"]), ABC.event(["b", "c"])))
        g = ABC.gamble([1, 2, 1])
        assert is_measurable(g, family)
        assert not threshold_condition(g, family)
