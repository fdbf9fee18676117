"""Preference satisfaction and answer set ranking.

Answer sets are compared at three levels: against a single boolean
combination, against a preference rule (through satisfaction degrees), and
against the whole set of preference rules under either the Pareto or the
Maximal relation.  Every comparison returns one of four outcomes; pair
orders are genuinely partial, so Incomparable is a normal result.

Optimization aggregates are the one construct whose satisfaction depends
on the entire pool of answer sets, not just the set under evaluation, so
all entry points take the pool (wrapped in an EvaluationContext that also
memoizes aggregate values and comparisons).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .aggregates import (
    AggregateResult,
    IntervalResult,
    PairResult,
    Undefined,
    eval_aggregate_atom,
    evaluate_aggregate,
)
from .core import (
    Aggregate,
    AnswerSet,
    BodyAggregate,
    BodyComparison,
    BodyElement,
    BodyLiteral,
    BooleanCombination,
    CombinationAnd,
    CombinationLeaf,
    OptimizationAggregate,
    OptimizationKind,
    Ordering,
    PreferenceRule,
    Program,
    eval_comparison,
    satisfies_body_literal,
    truth_leq,
    truth_lt,
)


@dataclass(frozen=True)
class SatisfactionDegree:
    """Position of the first satisfied head combination (1-based), or
    irrelevance when the body fails or no combination holds."""

    index: Optional[int] = None

    @property
    def is_irrelevant(self) -> bool:
        return self.index is None

    @classmethod
    def at(cls, index: int) -> "SatisfactionDegree":
        if index < 1:
            raise ValueError("combination positions count from 1")
        return cls(index)

    def __str__(self) -> str:
        return "irr" if self.index is None else str(self.index)


IRRELEVANT = SatisfactionDegree()


class EvaluationContext:
    """A pool of answer sets plus memo tables for everything derived from it.

    Memo keys are object identities: hashing a ground set or a combination
    walks its whole structure, which dominated the runtime on realistic
    pools.  Keyed objects are pinned so an identity is never reused.
    """

    def __init__(self, pool: Sequence[AnswerSet]):
        self.pool = tuple(pool)
        self._pinned: dict[int, object] = {}
        self._values: dict[tuple[int, int], AggregateResult] = {}
        self._satisfied: dict[tuple[int, int], bool] = {}
        self._degrees: dict[tuple[int, int], SatisfactionDegree] = {}
        self._compared: dict[tuple[int, int, int], Ordering] = {}

    def _key(self, *objects: object) -> tuple[int, ...]:
        parts = []
        for obj in objects:
            ident = id(obj)
            self._pinned.setdefault(ident, obj)
            parts.append(ident)
        return tuple(parts)

    # -- aggregate values ---------------------------------------------------

    def value_of(self, h: AnswerSet, aggregate: Aggregate) -> AggregateResult:
        key = self._key(h, aggregate)
        result = self._values.get(key)
        if result is None:
            result = evaluate_aggregate(aggregate, h)
            self._values[key] = result
        return result

    # -- satisfaction -------------------------------------------------------

    def satisfies_optimization(self, h: AnswerSet, element: OptimizationAggregate) -> bool:
        own = self.value_of(h, element.aggregate)
        if isinstance(own, Undefined):
            return False
        for other_set in self.pool:
            other = self.value_of(other_set, element.aggregate)
            if isinstance(other, Undefined):
                continue
            if not _optimum_holds(element.kind, own, other):
                return False
        return True

    def satisfies_element(self, h: AnswerSet, element: BodyElement | OptimizationAggregate) -> bool:
        if isinstance(element, BodyLiteral):
            return satisfies_body_literal(h.mapping, element)
        if isinstance(element, BodyComparison):
            return eval_comparison(element.relation, element.left, element.right)
        if isinstance(element, BodyAggregate):
            return eval_aggregate_atom(element.atom, h, element.negated)
        return self.satisfies_optimization(h, element)

    def satisfies_combination(self, h: AnswerSet, combination: BooleanCombination) -> bool:
        key = self._key(h, combination)
        cached = self._satisfied.get(key)
        if cached is not None:
            return cached
        if isinstance(combination, CombinationLeaf):
            result = self.satisfies_element(h, combination.element)
        elif isinstance(combination, CombinationAnd):
            result = self.satisfies_combination(
                h, combination.left
            ) and self.satisfies_combination(h, combination.right)
        else:
            result = self.satisfies_combination(
                h, combination.left
            ) or self.satisfies_combination(h, combination.right)
        self._satisfied[key] = result
        return result

    def satisfies_body(self, h: AnswerSet, body: Iterable[BodyElement]) -> bool:
        return all(self.satisfies_element(h, element) for element in body)

    def degree(self, h: AnswerSet, rule: PreferenceRule) -> SatisfactionDegree:
        key = self._key(h, rule)
        cached = self._degrees.get(key)
        if cached is not None:
            return cached
        degree = IRRELEVANT
        if self.satisfies_body(h, rule.body):
            for position, combination in enumerate(rule.head, start=1):
                if self.satisfies_combination(h, combination):
                    degree = SatisfactionDegree.at(position)
                    break
        self._degrees[key] = degree
        return degree

    # -- pairwise comparison ------------------------------------------------

    def compare_combination(
        self, first: AnswerSet, second: AnswerSet, combination: BooleanCombination
    ) -> Ordering:
        key = self._key(first, second, combination)
        cached = self._compared.get(key)
        if cached is not None:
            return cached
        if self._strictly_preferred(first, second, combination):
            result = Ordering.BETTER
        elif self._strictly_preferred(second, first, combination):
            result = Ordering.WORSE
        elif self._equally_preferred(first, second, combination):
            result = Ordering.EQUAL
        else:
            result = Ordering.INCOMPARABLE
        self._compared[key] = result
        self._compared[self._key(second, first, combination)] = result.inverse()
        return result

    def _strictly_preferred(
        self, first: AnswerSet, second: AnswerSet, combination: BooleanCombination
    ) -> bool:
        first_holds = self.satisfies_combination(first, combination)
        second_holds = self.satisfies_combination(second, combination)
        if first_holds and not second_holds:
            return True
        if not (first_holds and second_holds):
            return False
        if isinstance(combination, CombinationLeaf):
            return self._strict_leaf(first, second, combination.element)
        children = (combination.left, combination.right)
        orders = [self.compare_combination(first, second, child) for child in children]
        return Ordering.BETTER in orders and all(
            order in (Ordering.BETTER, Ordering.EQUAL) for order in orders
        )

    def _strict_leaf(
        self,
        first: AnswerSet,
        second: AnswerSet,
        element: BodyElement | OptimizationAggregate,
    ) -> bool:
        """Both sets satisfy the leaf; decide whether the first wins outright."""
        if isinstance(element, BodyLiteral):
            first_value = first.value_of_hybrid(element.literal)
            second_value = second.value_of_hybrid(element.literal)
            if element.negated:
                if first_value is None:
                    return second_value is not None
                return second_value is not None and truth_lt(first_value, second_value)
            return truth_lt(second_value, first_value)
        if isinstance(element, BodyComparison):
            return False
        if isinstance(element, BodyAggregate):
            first_result = self.value_of(first, element.atom.aggregate)
            second_result = self.value_of(second, element.atom.aggregate)
            if element.negated:
                if isinstance(first_result, Undefined):
                    return not isinstance(second_result, Undefined)
                if isinstance(second_result, Undefined):
                    return False
                return _result_lt(first_result, second_result)
            if isinstance(first_result, Undefined) or isinstance(second_result, Undefined):
                return False
            return _result_lt(second_result, first_result)
        return False

    def _equally_preferred(
        self, first: AnswerSet, second: AnswerSet, combination: BooleanCombination
    ) -> bool:
        first_holds = self.satisfies_combination(first, combination)
        second_holds = self.satisfies_combination(second, combination)
        if not first_holds and not second_holds:
            return True
        if not (first_holds and second_holds):
            return False
        if isinstance(combination, CombinationLeaf):
            return self._equal_leaf(first, second, combination.element)
        children = (combination.left, combination.right)
        orders = [self.compare_combination(first, second, child) for child in children]
        if isinstance(combination, CombinationAnd):
            return all(order is Ordering.EQUAL for order in orders)
        at_least = sum(1 for o in orders if o in (Ordering.BETTER, Ordering.EQUAL))
        at_most = sum(1 for o in orders if o in (Ordering.WORSE, Ordering.EQUAL))
        return at_least == at_most

    def _equal_leaf(
        self,
        first: AnswerSet,
        second: AnswerSet,
        element: BodyElement | OptimizationAggregate,
    ) -> bool:
        if isinstance(element, BodyLiteral):
            first_value = first.value_of_hybrid(element.literal)
            second_value = second.value_of_hybrid(element.literal)
            if element.negated and first_value is None and second_value is None:
                return True
            return first_value is not None and first_value == second_value
        if isinstance(element, BodyComparison):
            return True
        if isinstance(element, BodyAggregate):
            first_result = self.value_of(first, element.atom.aggregate)
            second_result = self.value_of(second, element.atom.aggregate)
            first_undefined = isinstance(first_result, Undefined)
            second_undefined = isinstance(second_result, Undefined)
            if element.negated and first_undefined and second_undefined:
                return True
            if first_undefined or second_undefined:
                return False
            return _result_eq(first_result, second_result)
        return True

    def compare_rule(
        self, first: AnswerSet, second: AnswerSet, rule: PreferenceRule
    ) -> Ordering:
        first_degree = self.degree(first, rule)
        second_degree = self.degree(second, rule)
        if first_degree.is_irrelevant and second_degree.is_irrelevant:
            return Ordering.EQUAL
        if second_degree.is_irrelevant:
            return Ordering.BETTER
        if first_degree.is_irrelevant:
            return Ordering.WORSE
        if first_degree.index < second_degree.index:
            return Ordering.BETTER
        if first_degree.index > second_degree.index:
            return Ordering.WORSE
        return self.compare_combination(first, second, rule.head[first_degree.index - 1])

    def compare(
        self, first: AnswerSet, second: AnswerSet, rules: Sequence[PreferenceRule], mode: str
    ) -> Ordering:
        if mode == "pareto":
            return self.pareto_compare(first, second, rules)
        if mode == "maximal":
            return self.maximal_compare(first, second, rules)
        raise ValueError(f"unknown preference mode {mode!r}")

    def pareto_compare(
        self, first: AnswerSet, second: AnswerSet, rules: Sequence[PreferenceRule]
    ) -> Ordering:
        orders = [self.compare_rule(first, second, rule) for rule in rules]
        if all(order is Ordering.EQUAL for order in orders):
            return Ordering.EQUAL
        if all(order in (Ordering.BETTER, Ordering.EQUAL) for order in orders):
            return Ordering.BETTER
        if all(order in (Ordering.WORSE, Ordering.EQUAL) for order in orders):
            return Ordering.WORSE
        return Ordering.INCOMPARABLE

    def maximal_compare(
        self, first: AnswerSet, second: AnswerSet, rules: Sequence[PreferenceRule]
    ) -> Ordering:
        orders = [self.compare_rule(first, second, rule) for rule in rules]
        at_least = sum(1 for o in orders if o in (Ordering.BETTER, Ordering.EQUAL))
        at_most = sum(1 for o in orders if o in (Ordering.WORSE, Ordering.EQUAL))
        if at_least > at_most:
            return Ordering.BETTER
        if at_least < at_most:
            return Ordering.WORSE
        return Ordering.EQUAL


def _optimum_holds(kind: OptimizationKind, own: AggregateResult, other: AggregateResult) -> bool:
    """Is `own` still optimal when `other` is also defined?"""
    if kind.wants_interval_family:
        assert isinstance(own, IntervalResult) and isinstance(other, IntervalResult)
        if kind.maximizes:
            return truth_leq(other.interval, own.interval)
        return truth_leq(own.interval, other.interval)
    assert isinstance(own, PairResult) and isinstance(other, PairResult)
    if kind.compares_value:
        if kind.maximizes:
            if not other.value <= own.value:
                return False
        elif not own.value <= other.value:
            return False
    if kind.compares_annotation:
        if kind.maximizes:
            if not truth_leq(other.annotation, own.annotation):
                return False
        elif not truth_leq(own.annotation, other.annotation):
            return False
    return True


def _result_lt(smaller: AggregateResult, larger: AggregateResult) -> bool:
    """Strict order on defined results: intervals under the truth order,
    pairs by their probability annotation."""
    if isinstance(smaller, IntervalResult) and isinstance(larger, IntervalResult):
        return truth_lt(smaller.interval, larger.interval)
    assert isinstance(smaller, PairResult) and isinstance(larger, PairResult)
    return truth_lt(smaller.annotation, larger.annotation)


def _result_eq(first: AggregateResult, second: AggregateResult) -> bool:
    if isinstance(first, IntervalResult) and isinstance(second, IntervalResult):
        return first.interval == second.interval
    assert isinstance(first, PairResult) and isinstance(second, PairResult)
    return first.annotation == second.annotation


# ---------------------------------------------------------------------------
# Module-level conveniences


def satisfaction_degree(
    h: AnswerSet, rule: PreferenceRule, pool: Sequence[AnswerSet]
) -> SatisfactionDegree:
    return EvaluationContext(pool).degree(h, rule)


def compare_answer_sets(
    first: AnswerSet,
    second: AnswerSet,
    program: Program,
    pool: Sequence[AnswerSet],
    mode: str = "pareto",
) -> Ordering:
    return EvaluationContext(pool).compare(first, second, program.preferences, mode)


def rank(
    program: Program,
    answer_sets: Sequence[AnswerSet],
    mode: str = "pareto",
    context: Optional[EvaluationContext] = None,
) -> list[list[AnswerSet]]:
    """Partition the answer sets into preference fronts, most preferred first.

    Front n holds the sets not beaten by anything remaining once fronts
    0..n-1 are removed.  The Maximal relation may order a remainder
    cyclically so that every set is beaten; those sets are emitted together
    as the final front instead of looping forever.
    """
    if context is None:
        context = EvaluationContext(answer_sets)
    rules = program.preferences
    remaining = list(answer_sets)
    fronts: list[list[AnswerSet]] = []
    while remaining:
        front = [
            h
            for h in remaining
            if not any(
                context.compare(h, other, rules, mode) is Ordering.WORSE
                for other in remaining
            )
        ]
        if not front:
            fronts.append(remaining)
            break
        fronts.append(front)
        taken = {id(h) for h in front}
        remaining = [h for h in remaining if id(h) not in taken]
    return fronts


def optimal_answer_sets(
    program: Program, answer_sets: Sequence[AnswerSet], mode: str = "pareto"
) -> list[AnswerSet]:
    fronts = rank(program, answer_sets, mode)
    return fronts[0] if fronts else []
