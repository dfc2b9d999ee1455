from __future__ import annotations

import random
from fractions import Fraction

from logtools import get_logger

from .core import AssessmentSet, ConditionalAssessment, ConditioningFamily, Event, Gamble, Space, indicator

logger = get_logger(__name__)

# Largest denominator of sampled lower bounds
MAX_DENOMINATOR = 20


def random_rational(rng: random.Random, low: int, high: int, denominator: int = 4) -> Fraction:
    return Fraction(rng.randint(low * denominator, high * denominator), denominator)


def random_space(rng: random.Random, size: int, prefix: str = "x") -> Space:
    return Space(tuple(f"{prefix}{k}" for k in range(size)))


def random_gamble(rng: random.Random, space: Space, low: int = -3, high: int = 3) -> Gamble:
    return space.gamble([random_rational(rng, low, high, denominator=2) for _ in space.labels])


def random_nonnegative_gamble(rng: random.Random, space: Space, high: int = 3) -> Gamble:
    return random_gamble(rng, space, 0, high)


def random_event(rng: random.Random, space: Space) -> Event:
    while True:
        members = [label for label in space.labels if rng.random() < 0.5]
        if members:
            return space.event(members)


def random_mass(rng: random.Random, space: Space, full_support: bool = True) -> tuple[Fraction, ...]:
    low = 1 if full_support else 0
    weights = [rng.randint(low, 6) for _ in space.labels]
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


def random_lower_bound(
    rng: random.Random, gamble: Gamble, event: Event, mass: tuple[Fraction, ...] | None = None
) -> Fraction:
    """A rational with denominator at most MAX_DENOMINATOR between min and max of gamble on event.

    With a mass function, the bound is drawn below its conditional expectation, which makes
    coherent samples much more likely.
    """
    low, high = gamble.min(event), gamble.max(event)
    if mass is not None:
        weight = sum((mass[x] for x in event.positions), Fraction(0))
        if weight:
            expected = sum((mass[x] * gamble.values[x] for x in event.positions), Fraction(0)) / weight
            high = expected
    if low == high:
        return low
    denominator = rng.randint(1, MAX_DENOMINATOR)
    start = -((-low * denominator) // 1)
    stop = (high * denominator) // 1
    if start > stop:
        return low
    return Fraction(rng.randint(int(start), int(stop)), denominator)


def random_assessment_set(
    rng: random.Random,
    space: Space,
    count: int,
    unconditional: bool = False,
    indicators: bool = False,
    max_retries: int = 50,
) -> tuple[AssessmentSet, int]:
    """Samples a coherent assessment set by rejection; returns it with the number of retries.

    Falls back to the vacuous set after max_retries rejected samples.
    """
    from .lowprev import check_coherence

    for attempt in range(max_retries + 1):
        biased = rng.random() < 0.7
        mass = random_mass(rng, space) if biased else None
        items = []
        for _ in range(count):
            event = space.full() if unconditional else random_event(rng, space)
            if indicators:
                gamble = indicator(random_event(rng, space))
            else:
                gamble = random_gamble(rng, space)
            if gamble.is_constant_on(event):
                continue
            items.append(ConditionalAssessment(gamble, event, random_lower_bound(rng, gamble, event, mass)))
        candidate = AssessmentSet.build(space, items)
        if check_coherence(candidate).is_coherent:
            if attempt:
                logger.debug(f"Coherent sample found after {attempt} retries")
            return candidate, attempt
    logger.warning(f"No coherent sample after {max_retries} retries; using the vacuous set")
    return AssessmentSet.vacuous(space), max_retries


def random_candidate_set(rng: random.Random, space: Space, count: int) -> AssessmentSet:
    """An assessment set with no coherence filtering, for comparing coherence routes."""
    items = []
    for _ in range(count):
        event = random_event(rng, space)
        gamble = random_gamble(rng, space)
        items.append(ConditionalAssessment(gamble, event, random_lower_bound(rng, gamble, event)))
    return AssessmentSet.build(space, items)


def random_family(rng: random.Random, space: Space) -> ConditioningFamily:
    choice = rng.randrange(4)
    if choice == 0:
        return ConditioningFamily.empty(space)
    if choice == 1:
        return ConditioningFamily.singletons(space)
    if choice == 2:
        return ConditioningFamily.all_subsets(space)
    return ConditioningFamily(space, tuple(random_event(rng, space) for _ in range(rng.randint(1, 3))))
