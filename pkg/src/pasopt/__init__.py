"""Solver for probability answer set optimization programs.

Programs combine annotated disjunctive generator rules with preference
rules ranking the resulting probability answer sets through probability
aggregates and optimization aggregates.  The usual pipeline is
parse -> ground -> enumerate -> rank:

    from pasopt import parse_program, ground_program, enumerate_answer_sets, rank

    result = parse_program(source)
    ground = ground_program(result.program)
    answer_sets = enumerate_answer_sets(ground)
    fronts = rank(ground, answer_sets, mode="pareto")
"""

from .core import (
    Aggregate,
    AggregateAtom,
    AggregateFunction,
    Annotation,
    AnswerSet,
    BodyAggregate,
    BodyComparison,
    BodyLiteral,
    BooleanCombination,
    CombinationAnd,
    CombinationLeaf,
    CombinationOr,
    EvaluationError,
    GeneratorRule,
    GroundPair,
    GroundSet,
    HeadAtom,
    HybridKind,
    HybridLiteral,
    Literal,
    OptimizationAggregate,
    OptimizationKind,
    Ordering,
    OutOfRangeError,
    PasoptError,
    PreferenceRule,
    ProbabilityAnnotation,
    Program,
    SymbolicSet,
    ValidationError,
    format_literal,
    format_program,
    format_rational,
    format_rule,
    parse_rational,
    truth_leq,
    truth_lt,
)
from .aggregates import (
    UNDEFINED,
    IntervalResult,
    Multiset,
    PairResult,
    build_multiset,
    eval_aggregate_atom,
    evaluate_aggregate,
)
from .grounder import (
    GroundingCapExceededError,
    GroundingOptions,
    HerbrandUniverse,
    ground_program,
    ground_symbolic_set,
    herbrand_universe,
)
from .engine import (
    UnsupportedProgramError,
    check_answer_set,
    enumerate_answer_sets,
    satisfies_rule,
)
from .parser import Diagnostic, ParseResult, Severity, parse_file, parse_program
from .prefrank import (
    IRRELEVANT,
    EvaluationContext,
    SatisfactionDegree,
    compare_answer_sets,
    optimal_answer_sets,
    rank,
    satisfaction_degree,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregate",
    "AggregateAtom",
    "AggregateFunction",
    "Annotation",
    "AnswerSet",
    "BodyAggregate",
    "BodyComparison",
    "BodyLiteral",
    "BooleanCombination",
    "CombinationAnd",
    "CombinationLeaf",
    "CombinationOr",
    "Diagnostic",
    "EvaluationContext",
    "EvaluationError",
    "GeneratorRule",
    "GroundPair",
    "GroundSet",
    "GroundingCapExceededError",
    "GroundingOptions",
    "HeadAtom",
    "HerbrandUniverse",
    "HybridKind",
    "HybridLiteral",
    "IRRELEVANT",
    "IntervalResult",
    "Literal",
    "Multiset",
    "OptimizationAggregate",
    "OptimizationKind",
    "Ordering",
    "OutOfRangeError",
    "PairResult",
    "ParseResult",
    "PasoptError",
    "PreferenceRule",
    "ProbabilityAnnotation",
    "Program",
    "SatisfactionDegree",
    "Severity",
    "SymbolicSet",
    "UNDEFINED",
    "UnsupportedProgramError",
    "ValidationError",
    "build_multiset",
    "check_answer_set",
    "compare_answer_sets",
    "enumerate_answer_sets",
    "eval_aggregate_atom",
    "evaluate_aggregate",
    "format_literal",
    "format_program",
    "format_rational",
    "format_rule",
    "ground_program",
    "ground_symbolic_set",
    "herbrand_universe",
    "optimal_answer_sets",
    "parse_file",
    "parse_program",
    "parse_rational",
    "rank",
    "satisfaction_degree",
    "satisfies_rule",
    "truth_leq",
    "truth_lt",
    "__version__",
]
