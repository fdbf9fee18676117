"""Evaluation of probability aggregates over answer sets.

An aggregate collects the `value : annotation` pairs of a ground set whose
condition holds in an answer set, then folds the resulting multiset.  The
interval-valued family (#vale, #sume, #timese, #mine, #maxe, #counte)
returns a single rational interval; the pair-valued family (#sump,
#timesp, #minp, #maxp, #countp) returns the folded value together with the
product of the annotations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import (
    ZERO,
    ONE,
    Aggregate,
    AggregateAtom,
    AggregateFunction,
    AnswerSet,
    EvaluationError,
    GroundSet,
    NumberTerm,
    ProbabilityAnnotation,
    RationalInterval,
    Term,
    evaluate_term,
    format_term,
    interval_scale,
    interval_sum,
    product_of_annotations,
    satisfies_body_literal,
    truth_leq,
    truth_lt,
)


class Undefined:
    """Result of an aggregate that has no value (min/max of nothing)."""

    _instance: Optional["Undefined"] = None

    def __new__(cls) -> "Undefined":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undefined"


UNDEFINED = Undefined()


@dataclass(frozen=True)
class IntervalResult:
    interval: RationalInterval


@dataclass(frozen=True)
class PairResult:
    value: Fraction
    annotation: ProbabilityAnnotation


AggregateResult = Union[IntervalResult, PairResult, Undefined]


@dataclass(frozen=True)
class Multiset:
    """The evaluated content of a ground set: (value, annotation) pairs with
    duplicates preserved."""

    elements: tuple[tuple[Term, ProbabilityAnnotation], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def numeric_values(self) -> Optional[list[Fraction]]:
        """The values as rationals, or None when one of them is symbolic.

        A multiset with symbolic values is outside the domain of every
        arithmetic fold, which makes the aggregate undefined rather than an
        error; only the counting folds accept arbitrary values.
        """
        values = []
        for term, _ in self.elements:
            if not isinstance(term, NumberTerm):
                return None
            values.append(term.value)
        return values

    def annotations(self) -> list[ProbabilityAnnotation]:
        return [ann for _, ann in self.elements]


def build_multiset(ground_set: GroundSet, h: AnswerSet) -> Multiset:
    """Collect the pairs whose condition holds in `h`, in canonical order."""
    elements = []
    for pair in ground_set.pairs:
        if all(satisfies_body_literal(h.mapping, c) for c in pair.condition):
            elements.append((pair.value, pair.annotation))
    elements.sort(key=lambda e: (format_term(e[0]), e[1].lo, e[1].hi))
    return Multiset(tuple(elements))


def _product(values: list[Fraction]) -> Fraction:
    result = ONE
    for v in values:
        result *= v
    return result


def eval_expectation_aggregate(
    function: AggregateFunction, multiset: Multiset
) -> Union[IntervalResult, Undefined]:
    """Fold an interval-valued aggregate.  Empty multisets give [0,0] for
    #vale, #sume and #counte, [1,1] for #timese, and no value for #mine
    and #maxe."""
    if not function.is_interval_valued:
        raise EvaluationError(f"#{function.value} is not interval-valued")
    combined = product_of_annotations(multiset.annotations())
    if function is AggregateFunction.COUNTE:
        return IntervalResult(interval_scale(Fraction(len(multiset)), combined))
    values = multiset.numeric_values()
    if values is None:
        return UNDEFINED
    if function is AggregateFunction.VALE:
        parts = [interval_scale(x, ann) for x, ann in zip(values, multiset.annotations())]
        return IntervalResult(interval_sum(parts))
    if function is AggregateFunction.SUME:
        return IntervalResult(interval_scale(sum(values, ZERO), combined))
    if function is AggregateFunction.TIMESE:
        return IntervalResult(interval_scale(_product(values), combined))
    if multiset.is_empty:
        return UNDEFINED
    if function is AggregateFunction.MINE:
        return IntervalResult(interval_scale(min(values), combined))
    return IntervalResult(interval_scale(max(values), combined))


def eval_pair_aggregate(
    function: AggregateFunction, multiset: Multiset
) -> Union[PairResult, Undefined]:
    """Fold a pair-valued aggregate.  Empty multisets give (0, [1,1]) for
    #sump and #countp, (1, [1,1]) for #timesp, and no value for #minp and
    #maxp."""
    if not function.is_pair_valued:
        raise EvaluationError(f"#{function.value} is not pair-valued")
    combined = product_of_annotations(multiset.annotations())
    if function is AggregateFunction.COUNTP:
        return PairResult(Fraction(len(multiset)), combined)
    values = multiset.numeric_values()
    if values is None:
        return UNDEFINED
    if function is AggregateFunction.SUMP:
        return PairResult(sum(values, ZERO), combined)
    if function is AggregateFunction.TIMESP:
        return PairResult(_product(values), combined)
    if multiset.is_empty:
        return UNDEFINED
    if function is AggregateFunction.MINP:
        return PairResult(min(values), combined)
    return PairResult(max(values), combined)


def evaluate_aggregate(aggregate: Aggregate, h: AnswerSet) -> AggregateResult:
    """Evaluate an aggregate over a ground set against an answer set."""
    if not isinstance(aggregate.source, GroundSet):
        raise EvaluationError("aggregates must be grounded before evaluation")
    multiset = build_multiset(aggregate.source, h)
    if aggregate.function.is_interval_valued:
        return eval_expectation_aggregate(aggregate.function, multiset)
    return eval_pair_aggregate(aggregate.function, multiset)


def _guard_interval(atom: AggregateAtom) -> RationalInterval:
    lo = evaluate_term(atom.guard_lo)
    hi = evaluate_term(atom.guard_hi)
    if not isinstance(lo, NumberTerm) or not isinstance(hi, NumberTerm):
        raise EvaluationError("aggregate guards must be numeric")
    return RationalInterval(lo.value, hi.value)


def compare_interval(relation: str, value: RationalInterval, guard: RationalInterval) -> bool:
    """Compare two intervals under the truth order; `=` and `!=` are exact.

    The order relations are partial: overlapping intervals satisfy neither
    `<=` nor `>=`.
    """
    if relation == "=":
        return value == guard
    if relation == "!=":
        return value != guard
    if relation == "<=":
        return truth_leq(value, guard)
    if relation == "<":
        return truth_lt(value, guard)
    if relation == ">=":
        return truth_leq(guard, value)
    if relation == ">":
        return truth_lt(guard, value)
    raise EvaluationError(f"unknown relation {relation!r}")


def eval_aggregate_atom(atom: AggregateAtom, h: AnswerSet, negated: bool = False) -> bool:
    """Truth of an aggregate atom (or its negation as failure) in `h`.

    An undefined aggregate never satisfies the positive atom and always
    satisfies the negated one.
    """
    result = evaluate_aggregate(atom.aggregate, h)
    guard = _guard_interval(atom)
    if isinstance(result, Undefined):
        return negated
    if isinstance(result, IntervalResult):
        holds = compare_interval(atom.relation, result.interval, guard)
        return not holds if negated else holds
    value_interval = RationalInterval(result.value, result.value)
    holds = compare_interval(atom.relation, value_interval, guard)
    dominated = truth_leq(atom.annotation.constant_value(), result.annotation)
    if negated:
        return not holds or not dominated
    return holds and dominated
