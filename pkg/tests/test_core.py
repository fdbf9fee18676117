"""Unit tests for intervals, annotations, p-strategies and term evaluation."""

import random
from fractions import Fraction

import pytest

from pasopt import (
    Annotation,
    AnswerSet,
    Literal,
    OutOfRangeError,
    ProbabilityAnnotation,
    Program,
    ValidationError,
    format_literal,
    format_program,
    format_rational,
    format_rule,
    parse_rational,
    truth_leq,
    truth_lt,
)
from pasopt.core import (
    CONJUNCTIVE_STRATEGIES,
    DISJUNCTIVE_STRATEGIES,
    AnnotationConstant,
    AnnotationFunction,
    AnnotationVariable,
    ArithTerm,
    FunctionTerm,
    HybridKind,
    HybridLiteral,
    NumberTerm,
    RationalInterval,
    answer_item_key,
    combine_annotations,
    eval_comparison,
    evaluate_term,
    hybrid_value,
    interval_product,
    interval_scale,
    interval_sum,
    satisfies_annotated_literal,
    satisfies_body_literal,
)

from conftest import parse


def inter(lo, hi=None):
    lo = Fraction(lo)
    hi = lo if hi is None else Fraction(hi)
    return ProbabilityAnnotation(lo, hi)


# ---------------------------------------------------------------------------
# rationals


@pytest.mark.parametrize(
    "text, value",
    [
        ("0.5", Fraction(1, 2)),
        ("1/3", Fraction(1, 3)),
        ("0.964", Fraction(964, 1000)),
        ("1", Fraction(1)),
        ("0", Fraction(0)),
        ("7/8", Fraction(7, 8)),
    ],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize(
    "value, text",
    [
        (Fraction(1, 2), "0.5"),
        (Fraction(1, 3), "1/3"),
        (Fraction(964, 1000), "0.964"),
        (Fraction(0), "0"),
        (Fraction(1), "1"),
        (Fraction(3, 8), "0.375"),
    ],
)
def test_format_rational(value, text):
    assert format_rational(value) == text


def test_rational_round_trip():
    rng = random.Random(7)
    for _ in range(200):
        value = Fraction(rng.randrange(0, 1000), rng.randrange(1, 1000))
        assert parse_rational(format_rational(value)) == value


# ---------------------------------------------------------------------------
# intervals and the truth order


def test_interval_validation():
    with pytest.raises(ValidationError):
        ProbabilityAnnotation(Fraction(3, 4), Fraction(1, 2))
    with pytest.raises(ValidationError):
        ProbabilityAnnotation(Fraction(-1, 2), Fraction(1, 2))
    with pytest.raises(ValidationError):
        ProbabilityAnnotation(Fraction(1, 2), Fraction(3, 2))


def test_truth_order_pointwise():
    a = inter("0.2", "0.6")
    b = inter("0.3", "0.8")
    assert truth_leq(a, b)
    assert not truth_leq(b, a)
    # overlapping intervals where neither end dominates are incomparable
    c = inter("0.5", "0.5")
    d = inter("0.1", "0.9")
    assert not truth_leq(c, d) and not truth_leq(d, c)
    assert truth_lt(a, b)
    assert not truth_lt(a, a)


def test_truth_order_is_partial_order():
    rng = random.Random(11)
    samples = []
    for _ in range(40):
        lo = rng.randrange(0, 5)
        hi = rng.randrange(lo, 5)
        samples.append(ProbabilityAnnotation(Fraction(lo, 4), Fraction(hi, 4)))
    for a in samples:
        assert truth_leq(a, a)
        for b in samples:
            if truth_leq(a, b) and truth_leq(b, a):
                assert a == b
            for c in samples:
                if truth_leq(a, b) and truth_leq(b, c):
                    assert truth_leq(a, c)


def test_interval_arithmetic():
    assert interval_sum([inter("0.2", "0.3"), inter("0.1", "0.4")]) == RationalInterval(
        Fraction(3, 10), Fraction(7, 10)
    )
    assert interval_product(inter("0.5", "0.8"), inter("0.5")) == inter("0.25", "0.4")
    # scaling by a negative weight flips the endpoints
    assert interval_scale(Fraction(-2), inter("0.1", "0.3")) == RationalInterval(
        Fraction(-3, 5), Fraction(-1, 5)
    )


# ---------------------------------------------------------------------------
# p-strategies


def test_independence_disjunction():
    # 1 - (1-0.9)(1-0.4)(1-0.4) = 0.964
    ind = DISJUNCTIVE_STRATEGIES["ind"]
    folded = combine_annotations(ind, [inter("0.9"), inter("0.4"), inter("0.4")])
    assert folded == inter("0.964")


def test_max_disjunction_and_conjunctions():
    values = [inter("0.2", "0.5"), inter("0.4", "0.45")]
    assert combine_annotations(DISJUNCTIVE_STRATEGIES["max"], values) == inter("0.4", "0.5")
    assert combine_annotations(CONJUNCTIVE_STRATEGIES["min"], values) == inter("0.2", "0.45")
    assert combine_annotations(CONJUNCTIVE_STRATEGIES["ind"], values) == inter("0.08", "0.225")


def test_disjunctive_folds_are_inflationary_and_commutative():
    rng = random.Random(3)
    for strategy in DISJUNCTIVE_STRATEGIES.values():
        for _ in range(100):
            values = []
            for _ in range(rng.randrange(1, 4)):
                lo = rng.randrange(0, 5)
                hi = rng.randrange(lo, 5)
                values.append(ProbabilityAnnotation(Fraction(lo, 4), Fraction(hi, 4)))
            folded = combine_annotations(strategy, values)
            for value in values:
                assert truth_leq(value, folded)
            shuffled = values[:]
            rng.shuffle(shuffled)
            assert combine_annotations(strategy, shuffled) == folded


def test_combine_rejects_empty_multiset():
    with pytest.raises(ValueError):
        combine_annotations(DISJUNCTIVE_STRATEGIES["ind"], [])


def test_program_rejects_non_disjunctive_strategy():
    with pytest.raises(ValidationError):
        Program(atom_strategies=(("fault", "plus"),))
    with pytest.raises(ValidationError):
        # "min" exists only as a conjunctive combinator
        Program(atom_strategies=(("fault", "min"),))


def test_strategy_lookup_defaults_to_independence():
    program = parse("#strategy fault max. fault:0.5 | other:0.5.")
    assert program.disjunctive_strategy("fault") is DISJUNCTIVE_STRATEGIES["max"]
    assert program.disjunctive_strategy("other") is DISJUNCTIVE_STRATEGIES["ind"]


# ---------------------------------------------------------------------------
# annotations


def test_annotation_constant_and_point():
    ann = Annotation.point(Fraction(1, 2))
    assert ann.is_constant
    assert ann.constant_value() == inter("0.5")
    ann = Annotation.constant(Fraction(1, 4), Fraction(3, 4))
    assert ann.constant_value() == inter("0.25", "0.75")


def test_annotation_evaluate_with_bindings():
    item = AnnotationFunction(
        "mul", (AnnotationConstant(Fraction(1, 2)), AnnotationVariable("X"))
    )
    ann = Annotation(item, item)
    assert ann.evaluate({"X": Fraction(1, 2)}) == inter("0.25")


@pytest.mark.parametrize(
    "symbol, args, expected",
    [
        ("add", ("0.2", "0.3"), "0.5"),
        ("sub", ("0.7", "0.2"), "0.5"),
        ("mul", ("0.5", "0.5"), "0.25"),
        ("min", ("0.3", "0.8"), "0.3"),
        ("max", ("0.3", "0.8"), "0.8"),
    ],
)
def test_annotation_functions(symbol, args, expected):
    item = AnnotationFunction(
        symbol, tuple(AnnotationConstant(parse_rational(a)) for a in args)
    )
    assert Annotation(item, item).evaluate({}) == inter(expected)


def test_annotation_out_of_range():
    item = AnnotationFunction(
        "sub", (AnnotationConstant(Fraction(3, 10)), AnnotationConstant(Fraction(1, 2)))
    )
    with pytest.raises(OutOfRangeError):
        Annotation(item, item).evaluate({})
    item = AnnotationFunction(
        "add", (AnnotationConstant(Fraction(3, 4)), AnnotationConstant(Fraction(1, 2)))
    )
    with pytest.raises(OutOfRangeError):
        Annotation(item, item).evaluate({})


# ---------------------------------------------------------------------------
# terms and comparisons


def test_evaluate_arithmetic_terms():
    term = ArithTerm(
        "+",
        NumberTerm(Fraction(2)),
        ArithTerm("*", NumberTerm(Fraction(3)), NumberTerm(Fraction(4))),
    )
    assert evaluate_term(term) == NumberTerm(Fraction(14))


def test_eval_comparison_numbers_and_symbols():
    two, three = NumberTerm(Fraction(2)), NumberTerm(Fraction(3))
    assert eval_comparison("<", two, three)
    assert not eval_comparison("<=", three, two)
    assert eval_comparison("!=", two, three)
    a, b = FunctionTerm("a", ()), FunctionTerm("b", ())
    assert eval_comparison("=", a, a)
    assert eval_comparison("!=", a, b)


def test_ordering_symbols_requires_numbers():
    a = FunctionTerm("a", ())
    with pytest.raises(Exception):
        eval_comparison("<", a, NumberTerm(Fraction(1)))


# ---------------------------------------------------------------------------
# literals and answer sets


def test_literal_complement():
    lit = Literal("bird", (FunctionTerm("tweety", ()),))
    neg = lit.complement
    assert neg.negated and neg.complement == lit


def test_answer_set_construction_and_lookup():
    a = Literal("a", ())
    b = Literal("b", ())
    h = AnswerSet.from_mapping({b: inter("0.4"), a: inter("0.9")})
    assert h.defines(a) and not h.defines(Literal("c", ()))
    assert h.value(a) == inter("0.9")
    assert h.value(Literal("c", ())) is None
    # items are kept sorted so equal sets compare equal
    g = AnswerSet.from_mapping({a: inter("0.9"), b: inter("0.4")})
    assert h == g
    assert h.mapping == {a: inter("0.9"), b: inter("0.4")}


def test_answer_set_index_is_not_identity():
    a = Literal("a", ())
    h = AnswerSet.from_mapping({a: inter("0.9")})
    g = AnswerSet(h.items, index=5)
    assert h == g


def test_answer_item_key_sorts_by_rendered_literal():
    a = Literal("a", (NumberTerm(Fraction(10)),))
    b = Literal("a", (NumberTerm(Fraction(2)),))
    items = sorted(
        [(a, inter("0.5")), (b, inter("0.5"))],
        key=lambda item: answer_item_key(*item),
    )
    assert format_literal(items[0][0]) == "a(10)"


# ---------------------------------------------------------------------------
# hybrid literals


def test_hybrid_value_folds_members():
    a, b = Literal("a", ()), Literal("b", ())
    mapping = {a: inter("0.9"), b: inter("0.4")}
    lit = HybridLiteral((a, b), HybridKind.DISJUNCTION, "ind")
    assert hybrid_value(mapping, lit) == inter("0.94")
    lit = HybridLiteral((a, b), HybridKind.CONJUNCTION, "min")
    assert hybrid_value(mapping, lit) == inter("0.4")


def test_hybrid_value_undefined_member():
    a, b = Literal("a", ()), Literal("b", ())
    lit = HybridLiteral((a, b), HybridKind.CONJUNCTION, "ind")
    assert hybrid_value({a: inter("0.9")}, lit) is None


def test_hybrid_literal_requires_distinct_members():
    a = Literal("a", ())
    with pytest.raises(ValidationError):
        HybridLiteral((a, a), HybridKind.CONJUNCTION, "ind")


# ---------------------------------------------------------------------------
# body satisfaction


def test_satisfies_annotated_literal():
    a = Literal("a", ())
    mapping = {a: inter("0.6", "0.8")}
    simple = HybridLiteral.simple(a)
    assert satisfies_annotated_literal(mapping, simple, inter("0.5"))
    assert not satisfies_annotated_literal(mapping, simple, inter("0.7", "0.9"))
    missing = HybridLiteral.simple(Literal("b", ()))
    assert not satisfies_annotated_literal(mapping, missing, inter("0"))


def test_naf_swaps_satisfaction():
    program = parse("b:0.7 :- not a:0.5. a:0.5 | c:0.5.")
    body = program.generator[0].body[0]
    a = Literal("a", ())
    assert satisfies_body_literal({}, body)
    assert not satisfies_body_literal({a: inter("0.5")}, body)


def test_naf_default_annotation_is_certainty():
    # a bare `not a` asks whether a:1 fails, so a weaker a still passes it
    program = parse("b:0.7 :- not a. a:0.5 | c:0.5.")
    body = program.generator[0].body[0]
    a = Literal("a", ())
    assert satisfies_body_literal({a: inter("0.5")}, body)
    assert not satisfies_body_literal({a: inter("1")}, body)


# ---------------------------------------------------------------------------
# formatting round trips


@pytest.mark.parametrize(
    "text",
    [
        "a:0.5 | b:[0.2, 0.4] :- c, not d.",
        ":- a:0.5, b.",
        "-a | b.",
        "p(f(X), 3) :- q(X), X < 3.",
        "#strategy fault max.",
        "a >> b || c >> d && e.",
        "(a ^ind b) >> (a vmax c) :- not d.",
        "#sume { V : 0.5 | cost(V) } >= 2 >> a.",
        "#maxmu #sump { 1 : [0.3, 0.6] ; 2 : 0.5 ; } >> b.",
    ],
)
def test_format_parse_round_trip(text):
    program = parse(text)
    assert parse(format_program(program)) == program


def test_format_rule_shapes():
    program = parse("a:0.5 | b :- c. :- d.")
    assert format_rule(program.generator[0]) == "a:0.5 | b :- c."
    assert format_rule(program.generator[1]) == ":- d."
