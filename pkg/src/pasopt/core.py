"""Domain types and exact arithmetic for probability answer set optimization.

Programs manipulate probability annotations: closed subintervals of [0, 1]
with exact rational endpoints, ordered pointwise (the "truth order":
[a1, a2] <= [b1, b2] iff a1 <= b1 and a2 <= b2).  Every numeric quantity in
the semantics is a `fractions.Fraction`; floating point is never used.

The module also owns the canonical text rendering of every construct, so
that the parser, the grounder and the solver all print rules identically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Optional, Union

ZERO = Fraction(0)
ONE = Fraction(1)

RELATIONS = ("=", "!=", "<", ">", "<=", ">=")
ARITH_OPS = ("+", "-", "*")


class PasoptError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PasoptError):
    """A structurally invalid construct (bad interval, bad arity, ...)."""


class EvaluationError(PasoptError):
    """A ground expression could not be evaluated."""


class OutOfRangeError(EvaluationError):
    """An annotation evaluated outside [0, 1]."""


class UnboundVariableError(EvaluationError):
    """A variable had no binding during evaluation."""


# ---------------------------------------------------------------------------
# Rationals


def parse_rational(text: str) -> Fraction:
    """Read an integer, a decimal or a num/den string as an exact rational."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"invalid rational literal {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Render exactly: integers plainly, terminating decimals as decimals,
    everything else as num/den.  `parse_rational` inverts this."""
    num, den = value.numerator, value.denominator
    if den == 1:
        return str(num)
    twos = 0
    rest = den
    while rest % 2 == 0:
        rest //= 2
        twos += 1
    fives = 0
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        return f"{num}/{den}"
    digits = max(twos, fives)
    scaled = abs(num) * 10**digits // den
    text = str(scaled).rjust(digits + 1, "0")
    sign = "-" if num < 0 else ""
    # den has no prime factors besides 2 and 5, so the last digit is nonzero
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class ProbabilityAnnotation:
    """Closed subinterval of [0, 1]; the degree attached to a literal."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not (ZERO <= self.lo <= self.hi <= ONE):
            raise ValidationError(
                f"[{self.lo}, {self.hi}] is not a closed subinterval of [0, 1]"
            )

    @classmethod
    def point(cls, p: Fraction | int | str) -> "ProbabilityAnnotation":
        p = Fraction(p)
        return cls(p, p)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def __str__(self) -> str:
        if self.is_point:
            return format_rational(self.lo)
        return f"[{format_rational(self.lo)},{format_rational(self.hi)}]"


CERTAIN = ProbabilityAnnotation(ONE, ONE)


@dataclass(frozen=True)
class RationalInterval:
    """Closed rational interval, not restricted to [0, 1].

    Aggregate results live here: scaling a probability annotation by an
    arbitrary rational can leave the unit interval.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValidationError(f"empty interval [{self.lo}, {self.hi}]")

    def __str__(self) -> str:
        if self.lo == self.hi:
            return format_rational(self.lo)
        return f"[{format_rational(self.lo)},{format_rational(self.hi)}]"


AnyInterval = Union[ProbabilityAnnotation, RationalInterval]


def truth_leq(a: AnyInterval, b: AnyInterval) -> bool:
    """Pointwise (truth) order on intervals.  This is a partial order:
    overlapping intervals such as [0.2, 0.9] and [0.3, 0.8] are incomparable."""
    return a.lo <= b.lo and a.hi <= b.hi


def truth_lt(a: AnyInterval, b: AnyInterval) -> bool:
    return truth_leq(a, b) and (a.lo, a.hi) != (b.lo, b.hi)


def interval_product(a: ProbabilityAnnotation, b: ProbabilityAnnotation) -> ProbabilityAnnotation:
    """Pointwise product; closed on subintervals of [0, 1]."""
    return ProbabilityAnnotation(a.lo * b.lo, a.hi * b.hi)


def product_of_annotations(annotations: Iterable[ProbabilityAnnotation]) -> ProbabilityAnnotation:
    result = CERTAIN
    for ann in annotations:
        result = interval_product(result, ann)
    return result


def interval_scale(x: Fraction, ann: AnyInterval) -> RationalInterval:
    """Scale an interval by a rational, flipping endpoints when x < 0."""
    if x < 0:
        return RationalInterval(x * ann.hi, x * ann.lo)
    return RationalInterval(x * ann.lo, x * ann.hi)


def interval_sum(intervals: Iterable[RationalInterval]) -> RationalInterval:
    lo = ZERO
    hi = ZERO
    for iv in intervals:
        lo += iv.lo
        hi += iv.hi
    return RationalInterval(lo, hi)


# ---------------------------------------------------------------------------
# P-strategies

Combinator = Callable[[ProbabilityAnnotation, ProbabilityAnnotation], ProbabilityAnnotation]


class StrategyKind(enum.Enum):
    CONJUNCTIVE = "conjunctive"
    DISJUNCTIVE = "disjunctive"


@dataclass(frozen=True)
class PStrategy:
    """A named probabilistic combination strategy.

    The combinator must be commutative and associative; the disjunctive ones
    are also inflationary (the combination dominates each argument in the
    truth order), which is what makes chosen head disjuncts self-supporting.
    """

    name: str
    kind: StrategyKind
    combine: Combinator


def _conj_ind(a: ProbabilityAnnotation, b: ProbabilityAnnotation) -> ProbabilityAnnotation:
    return ProbabilityAnnotation(a.lo * b.lo, a.hi * b.hi)


def _conj_min(a: ProbabilityAnnotation, b: ProbabilityAnnotation) -> ProbabilityAnnotation:
    return ProbabilityAnnotation(min(a.lo, b.lo), min(a.hi, b.hi))


def _disj_ind(a: ProbabilityAnnotation, b: ProbabilityAnnotation) -> ProbabilityAnnotation:
    return ProbabilityAnnotation(a.lo + b.lo - a.lo * b.lo, a.hi + b.hi - a.hi * b.hi)


def _disj_max(a: ProbabilityAnnotation, b: ProbabilityAnnotation) -> ProbabilityAnnotation:
    return ProbabilityAnnotation(max(a.lo, b.lo), max(a.hi, b.hi))


CONJUNCTIVE_STRATEGIES: dict[str, PStrategy] = {
    "ind": PStrategy("ind", StrategyKind.CONJUNCTIVE, _conj_ind),
    "min": PStrategy("min", StrategyKind.CONJUNCTIVE, _conj_min),
}

DISJUNCTIVE_STRATEGIES: dict[str, PStrategy] = {
    "ind": PStrategy("ind", StrategyKind.DISJUNCTIVE, _disj_ind),
    "max": PStrategy("max", StrategyKind.DISJUNCTIVE, _disj_max),
}

DEFAULT_DISJUNCTIVE_STRATEGY = "ind"


def combine_annotations(
    strategy: PStrategy, annotations: Iterable[ProbabilityAnnotation]
) -> ProbabilityAnnotation:
    """Fold a non-empty multiset of annotations with a strategy combinator."""
    result: Optional[ProbabilityAnnotation] = None
    for ann in annotations:
        result = ann if result is None else strategy.combine(result, ann)
    if result is None:
        raise ValueError("cannot combine an empty multiset of annotations")
    return result


# ---------------------------------------------------------------------------
# Annotation items (possibly symbolic endpoints of annotations)


@dataclass(frozen=True)
class AnnotationConstant:
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))
        if not (ZERO <= self.value <= ONE):
            raise ValidationError(f"annotation constant {self.value} outside [0, 1]")


@dataclass(frozen=True)
class AnnotationVariable:
    name: str


@dataclass(frozen=True)
class AnnotationFunction:
    """Application of one of the built-in maps over [0, 1].

    `add`, `mul`, `min` and `max` take two or more arguments; `sub` exactly
    two.  Every intermediate result must stay inside [0, 1].
    """

    symbol: str
    args: tuple["AnnotationItem", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if self.symbol not in ANNOTATION_FUNCTION_SYMBOLS:
            raise ValidationError(f"unknown annotation function {self.symbol!r}")
        if self.symbol == "sub":
            if len(self.args) != 2:
                raise ValidationError("sub takes exactly two arguments")
        elif len(self.args) < 2:
            raise ValidationError(f"{self.symbol} takes at least two arguments")


AnnotationItem = Union[AnnotationConstant, AnnotationVariable, AnnotationFunction]

ANNOTATION_FUNCTION_SYMBOLS = ("add", "sub", "mul", "min", "max")


def _check_unit(value: Fraction, origin: str) -> Fraction:
    if not (ZERO <= value <= ONE):
        raise OutOfRangeError(f"{origin} evaluates to {value}, outside [0, 1]")
    return value


def eval_annotation_item(
    item: AnnotationItem, bindings: Optional[Mapping[str, Fraction]] = None
) -> Fraction:
    """Evaluate a ground annotation item to a rational in [0, 1]."""
    if isinstance(item, AnnotationConstant):
        return item.value
    if isinstance(item, AnnotationVariable):
        if bindings is None or item.name not in bindings:
            raise UnboundVariableError(f"annotation variable {item.name} is unbound")
        return _check_unit(Fraction(bindings[item.name]), f"binding of {item.name}")
    values = [eval_annotation_item(arg, bindings) for arg in item.args]
    if item.symbol == "add":
        result = sum(values, ZERO)
    elif item.symbol == "sub":
        result = values[0] - values[1]
    elif item.symbol == "mul":
        result = ONE
        for v in values:
            result *= v
    elif item.symbol == "min":
        result = min(values)
    else:
        result = max(values)
    return _check_unit(result, f"{item.symbol}(...)")


@dataclass(frozen=True)
class Annotation:
    """An annotation as written in a rule: a pair of items.

    Both endpoints are constants after grounding; `constant_value` then
    yields the `ProbabilityAnnotation`.
    """

    lo: AnnotationItem
    hi: AnnotationItem

    @classmethod
    def point(cls, p: Fraction | int | str) -> "Annotation":
        item = AnnotationConstant(Fraction(p))
        return cls(item, item)

    @classmethod
    def constant(cls, lo: Fraction, hi: Fraction) -> "Annotation":
        return cls(AnnotationConstant(lo), AnnotationConstant(hi))

    @property
    def is_constant(self) -> bool:
        return isinstance(self.lo, AnnotationConstant) and isinstance(self.hi, AnnotationConstant)

    def constant_value(self) -> ProbabilityAnnotation:
        if not self.is_constant:
            raise EvaluationError(f"annotation {self} is not constant")
        return ProbabilityAnnotation(self.lo.value, self.hi.value)

    def evaluate(self, bindings: Optional[Mapping[str, Fraction]] = None) -> ProbabilityAnnotation:
        lo = eval_annotation_item(self.lo, bindings)
        hi = eval_annotation_item(self.hi, bindings)
        if lo > hi:
            raise EvaluationError(f"annotation {self} evaluates to empty interval [{lo}, {hi}]")
        return ProbabilityAnnotation(lo, hi)

    def __str__(self) -> str:
        return format_annotation(self)


CERTAIN_ANNOTATION = Annotation.point(1)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class NumberTerm:
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class VariableTerm:
    name: str


@dataclass(frozen=True)
class ArithTerm:
    op: str
    left: "Term"
    right: "Term"

    def __post_init__(self) -> None:
        if self.op not in ARITH_OPS:
            raise ValidationError(f"unknown arithmetic operator {self.op!r}")


@dataclass(frozen=True)
class FunctionTerm:
    """A symbolic constant (empty args) or an uninterpreted function term."""

    symbol: str
    args: tuple["Term", ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


Term = Union[NumberTerm, VariableTerm, ArithTerm, FunctionTerm]


def term_variables(term: Term) -> set[str]:
    if isinstance(term, VariableTerm):
        return {term.name}
    if isinstance(term, ArithTerm):
        return term_variables(term.left) | term_variables(term.right)
    if isinstance(term, FunctionTerm):
        names: set[str] = set()
        for arg in term.args:
            names |= term_variables(arg)
        return names
    return set()


def is_ground_term(term: Term) -> bool:
    return not term_variables(term)


def substitute_term(term: Term, binding: Mapping[str, Term]) -> Term:
    if isinstance(term, VariableTerm):
        return binding.get(term.name, term)
    if isinstance(term, ArithTerm):
        return ArithTerm(term.op, substitute_term(term.left, binding), substitute_term(term.right, binding))
    if isinstance(term, FunctionTerm) and term.args:
        return FunctionTerm(term.symbol, tuple(substitute_term(a, binding) for a in term.args))
    return term


def evaluate_term(term: Term) -> Term:
    """Normalize a ground term: fold arithmetic into a `NumberTerm`.

    Symbolic constants pass through untouched; arithmetic over a symbolic
    operand is an error.
    """
    if isinstance(term, VariableTerm):
        raise UnboundVariableError(f"variable {term.name} in a ground context")
    if isinstance(term, NumberTerm):
        return term
    if isinstance(term, FunctionTerm):
        if not term.args:
            return term
        return FunctionTerm(term.symbol, tuple(evaluate_term(a) for a in term.args))
    left = evaluate_term(term.left)
    right = evaluate_term(term.right)
    if not isinstance(left, NumberTerm) or not isinstance(right, NumberTerm):
        raise EvaluationError(f"arithmetic over non-numeric term {format_term(term)}")
    if term.op == "+":
        return NumberTerm(left.value + right.value)
    if term.op == "-":
        return NumberTerm(left.value - right.value)
    return NumberTerm(left.value * right.value)


def eval_comparison(relation: str, left: Term, right: Term) -> bool:
    """Compare two ground terms.  Order relations need numeric operands;
    (in)equality falls back to structural comparison."""
    lhs = evaluate_term(left)
    rhs = evaluate_term(right)
    if relation == "=":
        return lhs == rhs
    if relation == "!=":
        return lhs != rhs
    if not isinstance(lhs, NumberTerm) or not isinstance(rhs, NumberTerm):
        raise EvaluationError(
            f"ordered comparison {relation} over non-numeric terms "
            f"{format_term(lhs)} and {format_term(rhs)}"
        )
    if relation == "<":
        return lhs.value < rhs.value
    if relation == ">":
        return lhs.value > rhs.value
    if relation == "<=":
        return lhs.value <= rhs.value
    if relation == ">=":
        return lhs.value >= rhs.value
    raise ValidationError(f"unknown relation {relation!r}")


# ---------------------------------------------------------------------------
# Literals


@dataclass(frozen=True)
class Literal:
    """An atom or its classical negation."""

    predicate: str
    args: tuple[Term, ...] = ()
    negated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def complement(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.negated)

    def __str__(self) -> str:
        return format_literal(self)


class HybridKind(enum.Enum):
    SIMPLE = "simple"
    CONJUNCTION = "conjunction"
    DISJUNCTION = "disjunction"


@dataclass(frozen=True)
class HybridLiteral:
    """A literal, or a conjunction/disjunction of distinct literals whose
    joint degree is derived through a p-strategy combinator."""

    literals: tuple[Literal, ...]
    kind: HybridKind = HybridKind.SIMPLE
    strategy: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "literals", tuple(self.literals))
        if self.kind is HybridKind.SIMPLE:
            if len(self.literals) != 1 or self.strategy is not None:
                raise ValidationError("a simple hybrid literal wraps exactly one literal")
            return
        if len(self.literals) < 2:
            raise ValidationError("a hybrid combination needs at least two literals")
        if len(set(self.literals)) != len(self.literals):
            raise ValidationError("hybrid combination members must be distinct")
        library = (
            CONJUNCTIVE_STRATEGIES
            if self.kind is HybridKind.CONJUNCTION
            else DISJUNCTIVE_STRATEGIES
        )
        if self.strategy not in library:
            raise ValidationError(
                f"unknown {self.kind.value} p-strategy {self.strategy!r}"
            )

    @classmethod
    def simple(cls, literal: Literal) -> "HybridLiteral":
        return cls((literal,))

    @property
    def is_simple(self) -> bool:
        return self.kind is HybridKind.SIMPLE

    def combinator(self) -> PStrategy:
        if self.kind is HybridKind.CONJUNCTION:
            return CONJUNCTIVE_STRATEGIES[self.strategy]
        if self.kind is HybridKind.DISJUNCTION:
            return DISJUNCTIVE_STRATEGIES[self.strategy]
        raise ValidationError("simple literals have no combinator")

    def __str__(self) -> str:
        return format_hybrid(self)


def hybrid_value(
    mapping: Mapping[Literal, ProbabilityAnnotation], hybrid: HybridLiteral
) -> Optional[ProbabilityAnnotation]:
    """Derived valuation of a hybrid literal; None when any member is undefined."""
    values = []
    for lit in hybrid.literals:
        value = mapping.get(lit)
        if value is None:
            return None
        values.append(value)
    if hybrid.is_simple:
        return values[0]
    return combine_annotations(hybrid.combinator(), values)


# ---------------------------------------------------------------------------
# Body elements


@dataclass(frozen=True)
class BodyLiteral:
    """An annotated hybrid literal, possibly under negation as failure."""

    literal: HybridLiteral
    annotation: Annotation = CERTAIN_ANNOTATION
    negated: bool = False

    def __str__(self) -> str:
        return format_body_literal(self)


@dataclass(frozen=True)
class BodyComparison:
    left: Term
    relation: str
    right: Term

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValidationError(f"unknown relation {self.relation!r}")

    def __str__(self) -> str:
        return f"{format_term(self.left)} {self.relation} {format_term(self.right)}"


def satisfies_annotated_literal(
    mapping: Mapping[Literal, ProbabilityAnnotation],
    literal: HybridLiteral,
    annotation: ProbabilityAnnotation,
    negated: bool = False,
) -> bool:
    """Truth of `literal:annotation` (or its negation as failure) in a
    valuation: positive needs a defined value dominating the annotation."""
    value = hybrid_value(mapping, literal)
    if negated:
        return value is None or not truth_leq(annotation, value)
    return value is not None and truth_leq(annotation, value)


def satisfies_body_literal(
    mapping: Mapping[Literal, ProbabilityAnnotation], element: BodyLiteral
) -> bool:
    return satisfies_annotated_literal(
        mapping, element.literal, element.annotation.constant_value(), element.negated
    )


# ---------------------------------------------------------------------------
# Probability sets and aggregates (AST side)


@dataclass(frozen=True)
class SymbolicSet:
    """`{ value : annotation | condition }` before grounding."""

    value: Term
    annotation: Annotation
    condition: tuple[BodyLiteral, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "condition", tuple(self.condition))
        for element in self.condition:
            if element.negated:
                raise ValidationError("set conditions must be positive literals")

    def variables(self) -> set[str]:
        names = term_variables(self.value)
        for item in (self.annotation.lo, self.annotation.hi):
            names |= annotation_item_variables(item)
        for element in self.condition:
            names |= body_literal_variables(element)
        return names

    def __str__(self) -> str:
        return format_symbolic_set(self)


@dataclass(frozen=True)
class GroundPair:
    """One `value : annotation | condition` element of a ground set."""

    value: Term
    annotation: ProbabilityAnnotation
    condition: tuple[BodyLiteral, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "condition", tuple(self.condition))


@dataclass(frozen=True)
class GroundSet:
    pairs: tuple[GroundPair, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(self.pairs))

    def __str__(self) -> str:
        return format_ground_set(self)


class AggregateFunction(enum.Enum):
    """The eleven aggregate functions, named after their keywords."""

    VALE = "vale"
    SUME = "sume"
    TIMESE = "timese"
    MINE = "mine"
    MAXE = "maxe"
    COUNTE = "counte"
    SUMP = "sump"
    TIMESP = "timesp"
    MINP = "minp"
    MAXP = "maxp"
    COUNTP = "countp"

    @property
    def is_interval_valued(self) -> bool:
        """Interval-valued functions fold value and degree into one interval;
        the others return a (value, degree) pair."""
        return self.value.endswith("e")

    @property
    def is_pair_valued(self) -> bool:
        return not self.is_interval_valued


@dataclass(frozen=True)
class Aggregate:
    function: AggregateFunction
    source: Union[SymbolicSet, GroundSet]

    def __str__(self) -> str:
        return f"#{self.function.value} {format_set(self.source)}"


@dataclass(frozen=True)
class AggregateAtom:
    """`f{S} rel guard : annotation`; interval-valued functions always carry
    the certain annotation."""

    aggregate: Aggregate
    relation: str
    guard_lo: Term
    guard_hi: Term
    annotation: Annotation = CERTAIN_ANNOTATION

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ValidationError(f"unknown relation {self.relation!r}")
        if self.aggregate.function.is_interval_valued and self.annotation != CERTAIN_ANNOTATION:
            raise ValidationError(
                f"#{self.aggregate.function.value} atoms cannot carry an annotation"
            )

    def __str__(self) -> str:
        return format_aggregate_atom(self)


class OptimizationKind(enum.Enum):
    """Head-only optimization over the pool of answer sets."""

    MAX = "max"
    MIN = "min"
    MAX_PROB = "maxmu"
    MIN_PROB = "minmu"
    MAX_VALUE = "maxx"
    MIN_VALUE = "minx"
    MAX_VALUE_PROB = "maxxmu"
    MIN_VALUE_PROB = "minxmu"

    @property
    def wants_interval_family(self) -> bool:
        return self in (OptimizationKind.MAX, OptimizationKind.MIN)

    @property
    def maximizes(self) -> bool:
        return self in (
            OptimizationKind.MAX,
            OptimizationKind.MAX_PROB,
            OptimizationKind.MAX_VALUE,
            OptimizationKind.MAX_VALUE_PROB,
        )

    @property
    def compares_value(self) -> bool:
        return self in (
            OptimizationKind.MAX_VALUE,
            OptimizationKind.MIN_VALUE,
            OptimizationKind.MAX_VALUE_PROB,
            OptimizationKind.MIN_VALUE_PROB,
        )

    @property
    def compares_annotation(self) -> bool:
        return self in (
            OptimizationKind.MAX_PROB,
            OptimizationKind.MIN_PROB,
            OptimizationKind.MAX_VALUE_PROB,
            OptimizationKind.MIN_VALUE_PROB,
        )


@dataclass(frozen=True)
class OptimizationAggregate:
    kind: OptimizationKind
    aggregate: Aggregate

    def __post_init__(self) -> None:
        if self.kind.wants_interval_family != self.aggregate.function.is_interval_valued:
            raise ValidationError(
                f"#{self.kind.value} needs a "
                f"{'interval' if self.kind.wants_interval_family else 'pair'}-valued aggregate"
            )

    def __str__(self) -> str:
        return f"#{self.kind.value} {format_set(self.aggregate.source)}"


@dataclass(frozen=True)
class BodyAggregate:
    """An aggregate atom used as a body element or combination leaf."""

    atom: AggregateAtom
    negated: bool = False

    def __str__(self) -> str:
        prefix = "not " if self.negated else ""
        return prefix + str(self.atom)


BodyElement = Union[BodyLiteral, BodyComparison, BodyAggregate]


# ---------------------------------------------------------------------------
# Boolean combinations (preference rule heads)

CombinationElement = Union[BodyLiteral, BodyAggregate, OptimizationAggregate]


@dataclass(frozen=True)
class CombinationLeaf:
    element: CombinationElement

    def __str__(self) -> str:
        return str(self.element)


@dataclass(frozen=True)
class CombinationAnd:
    left: "BooleanCombination"
    right: "BooleanCombination"

    def __str__(self) -> str:
        return format_combination(self)


@dataclass(frozen=True)
class CombinationOr:
    left: "BooleanCombination"
    right: "BooleanCombination"

    def __str__(self) -> str:
        return format_combination(self)


BooleanCombination = Union[CombinationLeaf, CombinationAnd, CombinationOr]


def combination_elements(combination: BooleanCombination) -> Iterable[CombinationElement]:
    if isinstance(combination, CombinationLeaf):
        yield combination.element
    else:
        yield from combination_elements(combination.left)
        yield from combination_elements(combination.right)


# ---------------------------------------------------------------------------
# Rules and programs


@dataclass(frozen=True)
class SourceSpan:
    filename: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.filename}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class HeadAtom:
    literal: Literal
    annotation: Annotation = CERTAIN_ANNOTATION

    def __str__(self) -> str:
        return format_head_atom(self)


@dataclass(frozen=True)
class GeneratorRule:
    """`a1:mu1 | ... | an:mun :- body.`; an empty head makes a constraint."""

    head: tuple[HeadAtom, ...]
    body: tuple[BodyElement, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))
        if not self.head and not self.body:
            raise ValidationError("a constraint needs a non-empty body")
        for element in self.body:
            if isinstance(element, BodyAggregate):
                raise ValidationError("aggregate atoms cannot appear in generator rules")

    @property
    def is_constraint(self) -> bool:
        return not self.head

    def __str__(self) -> str:
        return format_generator_rule(self)


@dataclass(frozen=True)
class PreferenceRule:
    """`C1 >> C2 >> ... >> Ck :- body.` ranking combinations by preference."""

    head: tuple[BooleanCombination, ...]
    body: tuple[BodyElement, ...] = ()
    span: Optional[SourceSpan] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "head", tuple(self.head))
        object.__setattr__(self, "body", tuple(self.body))
        if not self.head:
            raise ValidationError("a preference rule needs at least one head combination")

    def __str__(self) -> str:
        return format_preference_rule(self)


Rule = Union[GeneratorRule, PreferenceRule]


@dataclass(frozen=True)
class Program:
    generator: tuple[GeneratorRule, ...] = ()
    preferences: tuple[PreferenceRule, ...] = ()
    atom_strategies: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "generator", tuple(self.generator))
        object.__setattr__(self, "preferences", tuple(self.preferences))
        object.__setattr__(self, "atom_strategies", tuple(self.atom_strategies))
        seen: dict[str, str] = {}
        for predicate, name in self.atom_strategies:
            if name not in DISJUNCTIVE_STRATEGIES:
                raise ValidationError(
                    f"atom strategies must be disjunctive; {name!r} is not"
                )
            if seen.setdefault(predicate, name) != name:
                raise ValidationError(f"conflicting strategies for predicate {predicate!r}")

    def disjunctive_strategy(self, predicate: str) -> PStrategy:
        for pred, name in self.atom_strategies:
            if pred == predicate:
                return DISJUNCTIVE_STRATEGIES[name]
        return DISJUNCTIVE_STRATEGIES[DEFAULT_DISJUNCTIVE_STRATEGY]

    def __str__(self) -> str:
        return format_program(self)


# ---------------------------------------------------------------------------
# Answer sets


@dataclass(frozen=True)
class AnswerSet:
    """A partial valuation: the defined ground literals with their degrees.

    `items` is canonically ordered so that equal valuations compare equal and
    enumeration output is reproducible.  Hybrid literals are never stored;
    their degrees are derived on demand through the p-strategy combinators.
    """

    items: tuple[tuple[Literal, ProbabilityAnnotation], ...]
    index: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))

    @classmethod
    def from_mapping(
        cls, mapping: Mapping[Literal, ProbabilityAnnotation], index: int = -1
    ) -> "AnswerSet":
        items = tuple(sorted(mapping.items(), key=lambda kv: answer_item_key(*kv)))
        return cls(items, index)

    @cached_property
    def _table(self) -> dict[Literal, ProbabilityAnnotation]:
        return dict(self.items)

    def value(self, literal: Literal) -> Optional[ProbabilityAnnotation]:
        return self._table.get(literal)

    def defines(self, literal: Literal) -> bool:
        return literal in self._table

    @property
    def mapping(self) -> Mapping[Literal, ProbabilityAnnotation]:
        return self._table

    def value_of_hybrid(self, hybrid: HybridLiteral) -> Optional[ProbabilityAnnotation]:
        return hybrid_value(self._table, hybrid)

    def atoms(self) -> tuple[Literal, ...]:
        return tuple(lit for lit, _ in self.items)

    def __str__(self) -> str:
        parts = []
        for literal, ann in self.items:
            if ann == CERTAIN:
                parts.append(format_literal(literal))
            else:
                parts.append(f"{format_literal(literal)}:{ann}")
        return "{" + ", ".join(parts) + "}"


def answer_item_key(literal: Literal, ann: ProbabilityAnnotation) -> tuple:
    return (format_literal(literal), ann.lo, ann.hi)


class Ordering(enum.Enum):
    """Four-valued outcome of comparing two answer sets."""

    BETTER = "better"
    EQUAL = "equal"
    WORSE = "worse"
    INCOMPARABLE = "incomparable"

    def inverse(self) -> "Ordering":
        if self is Ordering.BETTER:
            return Ordering.WORSE
        if self is Ordering.WORSE:
            return Ordering.BETTER
        return self


# ---------------------------------------------------------------------------
# Variable collection over rule structure


def annotation_item_variables(item: AnnotationItem) -> set[str]:
    if isinstance(item, AnnotationVariable):
        return {item.name}
    if isinstance(item, AnnotationFunction):
        names: set[str] = set()
        for arg in item.args:
            names |= annotation_item_variables(arg)
        return names
    return set()


def annotation_variables(annotation: Annotation) -> set[str]:
    return annotation_item_variables(annotation.lo) | annotation_item_variables(annotation.hi)


def literal_variables(literal: Literal) -> set[str]:
    names: set[str] = set()
    for arg in literal.args:
        names |= term_variables(arg)
    return names


def hybrid_variables(hybrid: HybridLiteral) -> set[str]:
    names: set[str] = set()
    for lit in hybrid.literals:
        names |= literal_variables(lit)
    return names


def body_literal_variables(element: BodyLiteral) -> set[str]:
    return hybrid_variables(element.literal) | annotation_variables(element.annotation)


# ---------------------------------------------------------------------------
# Canonical rendering


def format_term(term: Term, parent_precedence: int = 0, right_side: bool = False) -> str:
    if isinstance(term, NumberTerm):
        return format_rational(term.value)
    if isinstance(term, VariableTerm):
        return term.name
    if isinstance(term, FunctionTerm):
        if not term.args:
            return term.symbol
        inner = ", ".join(format_term(a) for a in term.args)
        return f"{term.symbol}({inner})"
    precedence = 2 if term.op == "*" else 1
    left = format_term(term.left, precedence, False)
    right = format_term(term.right, precedence, True)
    text = f"{left} {term.op} {right}"
    # parenthesize when binding looser than the context, or equally on the
    # right of a left-associative operator
    if precedence < parent_precedence or (precedence == parent_precedence and right_side):
        return f"({text})"
    return text


def format_annotation_item(item: AnnotationItem) -> str:
    if isinstance(item, AnnotationConstant):
        return format_rational(item.value)
    if isinstance(item, AnnotationVariable):
        return item.name
    inner = ", ".join(format_annotation_item(a) for a in item.args)
    return f"{item.symbol}({inner})"


def format_annotation(annotation: Annotation) -> str:
    if annotation.lo == annotation.hi:
        return format_annotation_item(annotation.lo)
    return f"[{format_annotation_item(annotation.lo)}, {format_annotation_item(annotation.hi)}]"


def _annotation_suffix(annotation: Annotation) -> str:
    if annotation == CERTAIN_ANNOTATION:
        return ""
    return f":{format_annotation(annotation)}"


def format_literal(literal: Literal) -> str:
    sign = "-" if literal.negated else ""
    if not literal.args:
        return f"{sign}{literal.predicate}"
    inner = ", ".join(format_term(a) for a in literal.args)
    return f"{sign}{literal.predicate}({inner})"


def format_hybrid(hybrid: HybridLiteral) -> str:
    if hybrid.is_simple:
        return format_literal(hybrid.literals[0])
    symbol = "^" if hybrid.kind is HybridKind.CONJUNCTION else "v"
    connective = f" {symbol}{hybrid.strategy} "
    return "(" + connective.join(format_literal(l) for l in hybrid.literals) + ")"


def format_body_literal(element: BodyLiteral) -> str:
    prefix = "not " if element.negated else ""
    return f"{prefix}{format_hybrid(element.literal)}{_annotation_suffix(element.annotation)}"


def format_head_atom(atom: HeadAtom) -> str:
    return f"{format_literal(atom.literal)}{_annotation_suffix(atom.annotation)}"


def format_symbolic_set(sset: SymbolicSet) -> str:
    condition = ", ".join(format_body_literal(c) for c in sset.condition)
    body = f"{format_term(sset.value)} : {format_annotation(sset.annotation)}"
    if condition:
        body += f" | {condition}"
    return "{ " + body + " }"


def format_ground_pair(pair: GroundPair) -> str:
    condition = ", ".join(format_body_literal(c) for c in pair.condition)
    text = f"{format_term(pair.value)} : {pair.annotation}"
    if condition:
        text += f" | {condition}"
    return text


def format_ground_set(gset: GroundSet) -> str:
    # the trailing semicolon marks a ground set even with 0 or 1 pairs
    if not gset.pairs:
        return "{ ; }"
    return "{ " + " ; ".join(format_ground_pair(p) for p in gset.pairs) + " ; }"


def format_set(source: Union[SymbolicSet, GroundSet]) -> str:
    if isinstance(source, GroundSet):
        return format_ground_set(source)
    return format_symbolic_set(source)


def format_guard(lo: Term, hi: Term) -> str:
    if lo == hi:
        return format_term(lo)
    return f"[{format_term(lo)}, {format_term(hi)}]"


def format_aggregate_atom(atom: AggregateAtom) -> str:
    text = (
        f"#{atom.aggregate.function.value} {format_set(atom.aggregate.source)} "
        f"{atom.relation} {format_guard(atom.guard_lo, atom.guard_hi)}"
    )
    return text + _annotation_suffix(atom.annotation)


def format_combination(
    combination: BooleanCombination, parent_precedence: int = 0, right_side: bool = False
) -> str:
    if isinstance(combination, CombinationLeaf):
        return str(combination.element)
    precedence = 1 if isinstance(combination, CombinationOr) else 2
    symbol = "||" if isinstance(combination, CombinationOr) else "&&"
    left = format_combination(combination.left, precedence, False)
    right = format_combination(combination.right, precedence, True)
    text = f"{left} {symbol} {right}"
    if precedence < parent_precedence or (precedence == parent_precedence and right_side):
        return f"({text})"
    return text


def format_body(body: tuple[BodyElement, ...]) -> str:
    return ", ".join(str(element) for element in body)


def format_generator_rule(rule: GeneratorRule) -> str:
    head = " | ".join(format_head_atom(a) for a in rule.head)
    if not rule.body:
        return f"{head}."
    body = format_body(rule.body)
    if not rule.head:
        return f":- {body}."
    return f"{head} :- {body}."


def format_preference_rule(rule: PreferenceRule) -> str:
    head = " >> ".join(format_combination(c) for c in rule.head)
    if len(rule.head) == 1:
        # the trailing marker keeps single-option heads recognizable
        head += " >>"
    if not rule.body:
        return f"{head} ."
    return f"{head} :- {format_body(rule.body)}."


def format_rule(rule: Rule) -> str:
    if isinstance(rule, GeneratorRule):
        return format_generator_rule(rule)
    return format_preference_rule(rule)


def format_program(program: Program) -> str:
    lines = []
    for predicate, name in sorted(program.atom_strategies):
        lines.append(f"#strategy {predicate} {name}.")
    for rule in program.generator:
        lines.append(format_generator_rule(rule))
    for rule in program.preferences:
        lines.append(format_preference_rule(rule))
    return "\n".join(lines) + ("\n" if lines else "")
