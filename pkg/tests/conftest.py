import json
from fractions import Fraction

import pytest

from natexlib import AssessmentSet, ConditionalAssessment, ConditioningFamily, JointModel, MassFunction, Space, indicator


@pytest.fixture
def ab() -> Space:
    return Space(("a", "b"))


@pytest.fixture
def abc() -> Space:
    return Space(("a", "b", "c"))


@pytest.fixture
def cd() -> Space:
    return Space(("c", "d"))


def lower_probabilities(space: Space, bounds: dict[str, Fraction]) -> AssessmentSet:
    """Unconditional lower probabilities of singletons."""
    return AssessmentSet(
        space,
        tuple(
            ConditionalAssessment(indicator(space.event([label])), space.full(), Fraction(bound))
            for label, bound in bounds.items()
        ),
    )


@pytest.fixture
def single_bound(ab) -> AssessmentSet:
    """P(I_a) = 3/10 on {a,b}."""
    return lower_probabilities(ab, {"a": Fraction(3, 10)})


@pytest.fixture
def interval(ab) -> AssessmentSet:
    """P(I_a) = 3/10 and P(I_b) = 3/5 on {a,b}."""
    return lower_probabilities(ab, {"a": Fraction(3, 10), "b": Fraction(3, 5)})


@pytest.fixture
def sure_loss(ab) -> AssessmentSet:
    """P(I_a) = 4/5 and P(I_b) = 1/2 on {a,b}: lower probabilities sum above one."""
    return lower_probabilities(ab, {"a": Fraction(4, 5), "b": Fraction(1, 2)})


@pytest.fixture
def precise_pair(ab, cd) -> JointModel:
    """Precise locals (1/2, 1/2) and (1/3, 2/3) with singleton families."""
    p1 = MassFunction(ab, (Fraction(1, 2), Fraction(1, 2)))
    p2 = MassFunction(cd, (Fraction(1, 3), Fraction(2, 3)))
    return JointModel(
        p1.as_assessments(),
        p2.as_assessments(),
        ConditioningFamily.singletons(ab),
        ConditioningFamily.singletons(cd),
    )


@pytest.fixture
def interval_vacuous_pair(interval, cd) -> JointModel:
    return JointModel(
        interval,
        AssessmentSet.vacuous(cd),
        ConditioningFamily.singletons(interval.space),
        ConditioningFamily.singletons(cd),
    )


@pytest.fixture
def write_json(tmp_path):
    """Writes a document to a JSON file under tmp_path and returns its path as a string."""

    def write(name: str, document) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf8")
        return str(path)

    return write
