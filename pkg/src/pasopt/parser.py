"""Parser for probability answer set optimization programs.

Concrete syntax, one statement per period:

    directive   := "#strategy" name name "."
    rule        := heads? (":-" body)? "."
    gen-head    := headatom ("|" headatom)*
    headatom    := literal (":" annotation)?
    pref-head   := combination (">>" combination)* ">>"?
    combination := conjunct ("||" conjunct)*
    conjunct    := leaf ("&&" leaf)*
    leaf        := "not"? (annotated-literal | aggregate-atom)
                 | optimization | "(" combination ")"
    body        := element ("," element)*
    element     := "not"? annotated-literal | aggregate-atom | comparison
    annotated-literal := hybrid (":" annotation)?
    hybrid      := literal | "(" literal (connective literal)+ ")"
    connective  := "^" name | "v<name>"        (conjunctive / disjunctive)
    literal     := "-"? name ("(" term ("," term)* ")")?
    comparison  := term rel term               rel in = != < > <= >=
    annotation  := item | "[" item "," item "]"
    item        := number | variable | func "(" item ("," item)+ ")"
                                               func in add sub mul min max
    aggregate-atom := "#"func set rel guard (":" annotation)?
                      func in vale sume timese mine maxe counte
                              sump timesp minp maxp countp
    optimization   := "#"kind ("#"func)? set
                      kind in max min maxmu minmu maxx minx maxxmu minxmu
    guard       := term | "[" term "," term "]"
    set         := "{" spec "}"
    spec        := term ":" annotation ("|" condition)?          (symbolic)
                 | (pair ";")* ";"?                              (ground)

Rules whose head contains ">>" or an optimization aggregate are preference
rules; everything else must fit the generator shape.  A missing annotation
always means the certain interval [1,1].  Comments run from "%" to the end
of the line.  Numbers are unsigned integers, decimals or num/den rationals.

When an optimization aggregate omits its function, pair-comparing kinds
default to #sump and interval-comparing kinds to #sume; on the singleton
sets the shorthand is meant for, every non-count function of the family
agrees anyway.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from . import grounder as _grounder
from .core import (
    CERTAIN_ANNOTATION,
    CONJUNCTIVE_STRATEGIES,
    Aggregate,
    AggregateAtom,
    AggregateFunction,
    Annotation,
    AnnotationConstant,
    AnnotationFunction,
    AnnotationItem,
    AnnotationVariable,
    ANNOTATION_FUNCTION_SYMBOLS,
    ArithTerm,
    BodyAggregate,
    BodyComparison,
    BodyElement,
    BodyLiteral,
    BooleanCombination,
    CombinationAnd,
    CombinationLeaf,
    CombinationOr,
    DISJUNCTIVE_STRATEGIES,
    FunctionTerm,
    GeneratorRule,
    GroundPair,
    GroundSet,
    HeadAtom,
    HybridKind,
    HybridLiteral,
    Literal,
    NumberTerm,
    OptimizationAggregate,
    OptimizationKind,
    PasoptError,
    PreferenceRule,
    Program,
    RELATIONS,
    SourceSpan,
    SymbolicSet,
    Term,
    ValidationError,
    VariableTerm,
    body_literal_variables,
    combination_elements,
    evaluate_term,
    format_program,
    format_rational,
    is_ground_term,
    parse_rational,
)

__all__ = [
    "Severity",
    "Diagnostic",
    "ParseResult",
    "parse_program",
    "parse_file",
    "format_program",
]

AGGREGATE_KEYWORDS = {f"#{fn.value}": fn for fn in AggregateFunction}
OPTIMIZATION_KEYWORDS = {f"#{kind.value}": kind for kind in OptimizationKind}
RELATION_TOKENS = set(RELATIONS)
ARITH_TOKENS = {"+", "-", "*"}


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    span: SourceSpan

    def render(self) -> str:
        return (
            f"{self.span.filename}:{self.span.start_line}:{self.span.start_col}: "
            f"{self.severity.value}: {self.message}"
        )

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class ParseResult:
    program: Optional[Program]
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.program is not None

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity is Severity.ERROR]


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>%[^\n]*)
    | (?P<number>\d+(?:\.\d+|/\d+)?)
    | (?P<hashword>\#[a-zA-Z_][a-zA-Z0-9_]*)
    | (?P<name>[a-z][A-Za-z0-9_]*)
    | (?P<variable>[A-Z_][A-Za-z0-9_]*)
    | (?P<punct>:-|>>|\|\||&&|<=|>=|!=|[.,:;|\[\]{}()=<>+\-*^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int

    @property
    def end_col(self) -> int:
        return self.col + len(self.text)


_EOF = "eof"


def _tokenize(source: str, filename: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(source):
        match = _TOKEN_RE.match(source, pos)
        if match is None:
            col = pos - line_start + 1
            span = SourceSpan(filename, line, col, line, col + 1)
            diagnostics.append(
                Diagnostic(Severity.ERROR, f"unexpected character {source[pos]!r}", span)
            )
            pos += 1
            continue
        kind = match.lastgroup or ""
        text = match.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, text, line, pos - line_start + 1))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token(_EOF, "", line, pos - line_start + 1))
    return tokens, diagnostics


# ---------------------------------------------------------------------------
# Parser


class _ParseFailure(Exception):
    """Internal signal; the diagnostic has already been recorded."""


class _Parser:
    def __init__(self, tokens: list[Token], filename: str, diagnostics: list[Diagnostic]):
        self.tokens = tokens
        self.filename = filename
        self.diagnostics = diagnostics
        self.pos = 0

    # -- token plumbing

    def peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not _EOF:
            self.pos += 1
        return token

    def at_punct(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == text

    def accept_punct(self, text: str) -> Optional[Token]:
        if self.at_punct(text):
            return self.advance()
        return None

    def expect_punct(self, text: str) -> Token:
        if self.at_punct(text):
            return self.advance()
        self.fail(f"expected {text!r}")

    def at_name(self, text: Optional[str] = None) -> bool:
        token = self.peek()
        return token.kind == "name" and (text is None or token.text == text)

    def span_of(self, token: Token, end: Optional[Token] = None) -> SourceSpan:
        last = end or token
        return SourceSpan(self.filename, token.line, token.col, last.line, last.end_col)

    def report(self, message: str, token: Optional[Token] = None) -> None:
        token = token or self.peek()
        self.diagnostics.append(Diagnostic(Severity.ERROR, message, self.span_of(token)))

    def fail(self, message: str, token: Optional[Token] = None) -> None:
        self.report(message, token)
        raise _ParseFailure()

    def attempt(self, parse: Callable[[], object]) -> tuple[bool, object]:
        """Backtracking trial: on failure, restore position and drop the
        diagnostics the trial produced."""
        saved_pos = self.pos
        saved_len = len(self.diagnostics)
        try:
            return True, parse()
        except _ParseFailure:
            self.pos = saved_pos
            del self.diagnostics[saved_len:]
            return False, None

    def build(self, factory: Callable[[], object], token: Token) -> object:
        """Construct an AST node, turning validation errors into diagnostics."""
        try:
            return factory()
        except ValidationError as exc:
            self.fail(str(exc), token)

    # -- program level

    def parse_program_body(self) -> tuple[list[GeneratorRule], list[PreferenceRule], list[tuple[str, str]]]:
        generator: list[GeneratorRule] = []
        preferences: list[PreferenceRule] = []
        strategies: list[tuple[str, str]] = []
        while self.peek().kind is not _EOF:
            try:
                self.parse_statement(generator, preferences, strategies)
            except _ParseFailure:
                self.synchronize()
        return generator, preferences, strategies

    def synchronize(self) -> None:
        while self.peek().kind is not _EOF:
            if self.advance().text == ".":
                return

    def parse_statement(
        self,
        generator: list[GeneratorRule],
        preferences: list[PreferenceRule],
        strategies: list[tuple[str, str]],
    ) -> None:
        start = self.peek()
        if start.kind == "hashword" and start.text == "#strategy":
            strategies.append(self.parse_strategy_directive())
            return
        rule = self.parse_rule(start)
        if isinstance(rule, GeneratorRule):
            generator.append(rule)
        else:
            preferences.append(rule)

    def parse_strategy_directive(self) -> tuple[str, str]:
        self.advance()
        if not self.at_name():
            self.fail("expected a predicate name after #strategy")
        predicate = self.advance().text
        if not self.at_name():
            self.fail("expected a p-strategy name")
        strategy_token = self.advance()
        if strategy_token.text not in DISJUNCTIVE_STRATEGIES:
            self.fail(
                f"atom strategies must be disjunctive; {strategy_token.text!r} is not",
                strategy_token,
            )
        self.expect_punct(".")
        return predicate, strategy_token.text

    # -- rules

    def parse_rule(self, start: Token) -> Union[GeneratorRule, PreferenceRule]:
        if self.at_punct(":-"):
            self.advance()
            body = self.parse_body()
            dot = self.expect_punct(".")
            span = self.span_of(start, dot)
            return self.build(lambda: GeneratorRule((), tuple(body), span), start)

        first = self.parse_combination()
        if self.at_punct(">>"):
            return self.parse_preference_tail(start, first)
        if self.at_punct("|"):
            return self.parse_generator_tail(start, first)
        if any(
            isinstance(el, OptimizationAggregate) for el in combination_elements(first)
        ):
            return self.parse_preference_tail(start, first)
        head_atom = self.downgrade_to_head_atom(first, start)
        body: list[BodyElement] = []
        if self.accept_punct(":-"):
            body = self.parse_body()
        dot = self.expect_punct(".")
        span = self.span_of(start, dot)
        return self.build(lambda: GeneratorRule((head_atom,), tuple(body), span), start)

    def parse_preference_tail(
        self, start: Token, first: BooleanCombination
    ) -> PreferenceRule:
        heads = [first]
        while self.accept_punct(">>"):
            if self.at_punct(":-") or self.at_punct("."):
                break
            heads.append(self.parse_combination())
        body: list[BodyElement] = []
        if self.accept_punct(":-"):
            body = self.parse_body()
        dot = self.expect_punct(".")
        span = self.span_of(start, dot)
        return self.build(lambda: PreferenceRule(tuple(heads), tuple(body), span), start)

    def parse_generator_tail(self, start: Token, first: BooleanCombination) -> GeneratorRule:
        head = [self.downgrade_to_head_atom(first, start)]
        while self.accept_punct("|"):
            head.append(self.parse_head_atom())
        body: list[BodyElement] = []
        if self.accept_punct(":-"):
            body = self.parse_body()
        dot = self.expect_punct(".")
        span = self.span_of(start, dot)
        return self.build(lambda: GeneratorRule(tuple(head), tuple(body), span), start)

    def downgrade_to_head_atom(self, combination: BooleanCombination, token: Token) -> HeadAtom:
        if isinstance(combination, CombinationLeaf):
            element = combination.element
            if isinstance(element, BodyLiteral) and not element.negated and element.literal.is_simple:
                return HeadAtom(element.literal.literals[0], element.annotation)
            if isinstance(element, BodyAggregate):
                self.fail(
                    "aggregate atoms cannot appear in generator rules; "
                    "preference heads need '>>'",
                    token,
                )
        self.fail(
            "generator rule heads take plain annotated literals separated by '|'",
            token,
        )

    def parse_head_atom(self) -> HeadAtom:
        token = self.peek()
        literal = self.parse_literal()
        annotation = self.parse_optional_annotation()
        return self.build(lambda: HeadAtom(literal, annotation), token)

    # -- combinations

    def parse_combination(self) -> BooleanCombination:
        left = self.parse_combination_and()
        while self.accept_punct("||"):
            right = self.parse_combination_and()
            left = CombinationOr(left, right)
        return left

    def parse_combination_and(self) -> BooleanCombination:
        left = self.parse_combination_unary()
        while self.accept_punct("&&"):
            right = self.parse_combination_unary()
            left = CombinationAnd(left, right)
        return left

    def parse_combination_unary(self) -> BooleanCombination:
        token = self.peek()
        if self.at_name("not"):
            self.advance()
            inner = self.peek()
            if inner.kind == "hashword":
                if inner.text in OPTIMIZATION_KEYWORDS:
                    self.fail("optimization aggregates cannot be negated", inner)
                atom = self.parse_aggregate_atom()
                return CombinationLeaf(BodyAggregate(atom, negated=True))
            return CombinationLeaf(self.parse_annotated_literal(negated=True))
        if token.kind == "hashword":
            if token.text in OPTIMIZATION_KEYWORDS:
                return CombinationLeaf(self.parse_optimization())
            if token.text in AGGREGATE_KEYWORDS:
                return CombinationLeaf(BodyAggregate(self.parse_aggregate_atom()))
            self.fail(f"unexpected keyword {token.text!r} in a combination", token)
        if self.at_punct("("):
            ok, value = self.attempt(lambda: self.parse_annotated_literal(negated=False))
            if ok:
                return CombinationLeaf(value)
            self.expect_punct("(")
            inner = self.parse_combination()
            self.expect_punct(")")
            return inner
        return CombinationLeaf(self.parse_annotated_literal(negated=False))

    # -- aggregates

    def parse_aggregate_atom(self) -> AggregateAtom:
        keyword = self.advance()
        function = AGGREGATE_KEYWORDS.get(keyword.text)
        if function is None:
            self.fail(f"unknown aggregate {keyword.text!r}", keyword)
        source = self.parse_set()
        relation = self.parse_relation()
        guard_lo, guard_hi = self.parse_guard()
        annotation = self.parse_optional_annotation()
        return self.build(
            lambda: AggregateAtom(Aggregate(function, source), relation, guard_lo, guard_hi, annotation),
            keyword,
        )

    def parse_optimization(self) -> OptimizationAggregate:
        keyword = self.advance()
        kind = OPTIMIZATION_KEYWORDS[keyword.text]
        function: Optional[AggregateFunction] = None
        token = self.peek()
        if token.kind == "hashword":
            function = AGGREGATE_KEYWORDS.get(token.text)
            if function is None:
                self.fail(f"unknown aggregate {token.text!r}", token)
            self.advance()
        if function is None:
            function = AggregateFunction.SUME if kind.wants_interval_family else AggregateFunction.SUMP
        source = self.parse_set()
        return self.build(
            lambda: OptimizationAggregate(kind, Aggregate(function, source)), keyword
        )

    def parse_relation(self) -> str:
        token = self.peek()
        if token.kind == "punct" and token.text in RELATION_TOKENS:
            return self.advance().text
        self.fail("expected a relation (=, !=, <, >, <=, >=)")

    def parse_guard(self) -> tuple[Term, Term]:
        if self.accept_punct("["):
            lo = self.parse_guard_term()
            self.expect_punct(",")
            hi = self.parse_guard_term()
            self.expect_punct("]")
            return lo, hi
        term = self.parse_guard_term()
        return term, term

    def parse_guard_term(self) -> Term:
        token = self.peek()
        term = self.parse_term()
        if isinstance(term, FunctionTerm):
            self.fail("aggregate guards must be numeric", token)
        return term

    def parse_set(self) -> Union[SymbolicSet, GroundSet]:
        open_token = self.expect_punct("{")
        if self.accept_punct(";"):
            self.expect_punct("}")
            return GroundSet(())
        value, annotation, condition = self.parse_set_spec()
        if self.at_punct(";"):
            pairs = [self.make_ground_pair(value, annotation, condition, open_token)]
            while self.accept_punct(";"):
                if self.at_punct("}"):
                    break
                value, annotation, condition = self.parse_set_spec()
                pairs.append(self.make_ground_pair(value, annotation, condition, open_token))
            self.expect_punct("}")
            return GroundSet(tuple(pairs))
        self.expect_punct("}")
        return self.build(
            lambda: SymbolicSet(value, annotation, tuple(condition)), open_token
        )

    def parse_set_spec(self) -> tuple[Term, Annotation, list[BodyLiteral]]:
        value = self.parse_term()
        self.expect_punct(":")
        annotation = self.parse_annotation()
        condition: list[BodyLiteral] = []
        if self.accept_punct("|"):
            condition.append(self.parse_condition_literal())
            while self.accept_punct(","):
                condition.append(self.parse_condition_literal())
        return value, annotation, condition

    def parse_condition_literal(self) -> BodyLiteral:
        if self.at_name("not"):
            self.fail("set conditions must be positive literals")
        return self.parse_annotated_literal(negated=False)

    def make_ground_pair(
        self,
        value: Term,
        annotation: Annotation,
        condition: list[BodyLiteral],
        token: Token,
    ) -> GroundPair:
        if not is_ground_term(value) or not annotation.is_constant:
            self.fail("ground set pairs cannot contain variables", token)
        for element in condition:
            if _body_literal_has_variables(element) or not element.annotation.is_constant:
                self.fail("ground set pairs cannot contain variables", token)
        try:
            normalized = evaluate_term(value)
            probability = annotation.constant_value()
            fixed = tuple(_normalize_ground_condition(c) for c in condition)
        except PasoptError as exc:
            self.fail(str(exc), token)
        return GroundPair(normalized, probability, fixed)

    # -- bodies

    def parse_body(self) -> list[BodyElement]:
        elements = [self.parse_body_element()]
        while self.accept_punct(","):
            elements.append(self.parse_body_element())
        return elements

    def parse_body_element(self) -> BodyElement:
        token = self.peek()
        if self.at_name("not"):
            self.advance()
            inner = self.peek()
            if inner.kind == "hashword":
                if inner.text in OPTIMIZATION_KEYWORDS:
                    self.fail("optimization aggregates may appear only in preference heads", inner)
                return BodyAggregate(self.parse_aggregate_atom(), negated=True)
            return self.parse_annotated_literal(negated=True)
        if token.kind == "hashword":
            if token.text in OPTIMIZATION_KEYWORDS:
                self.fail("optimization aggregates may appear only in preference heads", token)
            if token.text in AGGREGATE_KEYWORDS:
                return BodyAggregate(self.parse_aggregate_atom())
            self.fail(f"unexpected keyword {token.text!r} in a rule body", token)
        if token.kind in ("number", "variable") or (
            token.kind == "punct" and token.text == "-" and self.peek(1).kind == "number"
        ):
            return self.parse_comparison()
        ok, value = self.attempt(self.parse_literal_element)
        if ok:
            return value
        return self.parse_comparison()

    def parse_literal_element(self) -> BodyLiteral:
        element = self.parse_annotated_literal(negated=False)
        follow = self.peek()
        if follow.kind == "punct" and (
            follow.text in RELATION_TOKENS or follow.text in ARITH_TOKENS
        ):
            # this was the left-hand side of a comparison after all
            self.fail("not a literal element", follow)
        return element

    def parse_comparison(self) -> BodyComparison:
        left = self.parse_term()
        relation = self.parse_relation()
        right = self.parse_term()
        return BodyComparison(left, relation, right)

    # -- literals

    def parse_annotated_literal(self, negated: bool) -> BodyLiteral:
        hybrid = self.parse_hybrid_literal()
        annotation = self.parse_optional_annotation()
        return BodyLiteral(hybrid, annotation, negated)

    def parse_hybrid_literal(self) -> HybridLiteral:
        if self.at_punct("("):
            open_token = self.advance()
            members = [self.parse_literal()]
            kind, strategy = self.parse_connective()
            members.append(self.parse_literal())
            while not self.at_punct(")"):
                next_kind, next_strategy = self.parse_connective()
                if next_kind is not kind or next_strategy != strategy:
                    self.fail("mixed connectives inside a hybrid literal")
                members.append(self.parse_literal())
            self.expect_punct(")")
            return self.build(
                lambda: HybridLiteral(tuple(members), kind, strategy), open_token
            )
        return HybridLiteral.simple(self.parse_literal())

    def parse_connective(self) -> tuple[HybridKind, str]:
        token = self.peek()
        if self.accept_punct("^"):
            if not self.at_name():
                self.fail("expected a conjunctive p-strategy name after '^'")
            name = self.advance().text
            if name not in CONJUNCTIVE_STRATEGIES:
                self.fail(f"unknown conjunctive p-strategy {name!r}", token)
            return HybridKind.CONJUNCTION, name
        if token.kind == "name" and token.text.startswith("v") and len(token.text) > 1:
            name = token.text[1:]
            if name in DISJUNCTIVE_STRATEGIES:
                self.advance()
                return HybridKind.DISJUNCTION, name
        self.fail("expected a hybrid connective ('^strategy' or 'vstrategy')")

    def parse_literal(self) -> Literal:
        negated = bool(self.accept_punct("-"))
        token = self.peek()
        if not self.at_name():
            self.fail("expected a predicate name")
        if token.text == "not":
            self.fail("'not' is reserved", token)
        name = self.advance().text
        args: list[Term] = []
        if self.accept_punct("("):
            args.append(self.parse_term())
            while self.accept_punct(","):
                args.append(self.parse_term())
            self.expect_punct(")")
        return Literal(name, tuple(args), negated)

    # -- annotations

    def parse_optional_annotation(self) -> Annotation:
        if self.accept_punct(":"):
            return self.parse_annotation()
        return CERTAIN_ANNOTATION

    def parse_annotation(self) -> Annotation:
        token = self.peek()
        if self.accept_punct("["):
            lo = self.parse_annotation_item()
            self.expect_punct(",")
            hi = self.parse_annotation_item()
            self.expect_punct("]")
            if (
                isinstance(lo, AnnotationConstant)
                and isinstance(hi, AnnotationConstant)
                and lo.value > hi.value
            ):
                self.fail(
                    f"empty annotation interval [{format_rational(lo.value)}, "
                    f"{format_rational(hi.value)}]",
                    token,
                )
            return Annotation(lo, hi)
        item = self.parse_annotation_item()
        return Annotation(item, item)

    def parse_annotation_item(self) -> AnnotationItem:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return self.build(
                lambda: AnnotationConstant(parse_rational(token.text)), token
            )
        if token.kind == "variable":
            self.advance()
            return AnnotationVariable(token.text)
        if token.kind == "name" and token.text in ANNOTATION_FUNCTION_SYMBOLS:
            self.advance()
            self.expect_punct("(")
            args = [self.parse_annotation_item()]
            while self.accept_punct(","):
                args.append(self.parse_annotation_item())
            self.expect_punct(")")
            return self.build(lambda: AnnotationFunction(token.text, tuple(args)), token)
        self.fail("expected an annotation item (number, variable or add/sub/mul/min/max)")

    # -- terms

    def parse_term(self) -> Term:
        left = self.parse_multiplicative()
        while True:
            if self.at_punct("+") or self.at_punct("-"):
                op = self.advance().text
                right = self.parse_multiplicative()
                left = ArithTerm(op, left, right)
            else:
                return left

    def parse_multiplicative(self) -> Term:
        left = self.parse_primary_term()
        while self.at_punct("*"):
            self.advance()
            right = self.parse_primary_term()
            left = ArithTerm("*", left, right)
        return left

    def parse_primary_term(self) -> Term:
        token = self.peek()
        if token.kind == "number":
            self.advance()
            return NumberTerm(parse_rational(token.text))
        if token.kind == "punct" and token.text == "-" and self.peek(1).kind == "number":
            self.advance()
            number = self.advance()
            return NumberTerm(-parse_rational(number.text))
        if token.kind == "variable":
            self.advance()
            return VariableTerm(token.text)
        if token.kind == "name":
            if token.text == "not":
                self.fail("'not' is reserved", token)
            self.advance()
            if self.accept_punct("("):
                args = [self.parse_term()]
                while self.accept_punct(","):
                    args.append(self.parse_term())
                self.expect_punct(")")
                return FunctionTerm(token.text, tuple(args))
            return FunctionTerm(token.text, ())
        if self.accept_punct("("):
            inner = self.parse_term()
            self.expect_punct(")")
            return inner
        self.fail("expected a term")


def _body_literal_has_variables(element: BodyLiteral) -> bool:
    return bool(body_literal_variables(element))


def _normalize_ground_condition(element: BodyLiteral) -> BodyLiteral:
    literals = tuple(
        Literal(l.predicate, tuple(evaluate_term(a) for a in l.args), l.negated)
        for l in element.literal.literals
    )
    hybrid = HybridLiteral(literals, element.literal.kind, element.literal.strategy)
    return BodyLiteral(hybrid, element.annotation, element.negated)


# ---------------------------------------------------------------------------
# Program-level validation


def _rule_span(rule: Union[GeneratorRule, PreferenceRule], filename: str) -> SourceSpan:
    return rule.span or SourceSpan(filename, 1, 1, 1, 1)


def _validate_arities(
    generator: Sequence[GeneratorRule],
    preferences: Sequence[PreferenceRule],
    filename: str,
    diagnostics: list[Diagnostic],
) -> None:
    arities: dict[str, int] = {}

    def check(literal: Literal, span: SourceSpan) -> None:
        known = arities.setdefault(literal.predicate, len(literal.args))
        if known != len(literal.args):
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    f"predicate {literal.predicate!r} used with arity "
                    f"{len(literal.args)} and {known}",
                    span,
                )
            )

    for rule in generator:
        span = _rule_span(rule, filename)
        for atom in rule.head:
            check(atom.literal, span)
        for literal in _grounder.rule_body_literals(rule):
            check(literal, span)
    for rule in preferences:
        span = _rule_span(rule, filename)
        for literal in _grounder.preference_rule_literals(rule):
            check(literal, span)


def _validate_safety(
    generator: Sequence[GeneratorRule],
    preferences: Sequence[PreferenceRule],
    filename: str,
    diagnostics: list[Diagnostic],
) -> None:
    for rule in list(generator) + list(preferences):
        unsafe = _grounder.unsafe_variables(rule)
        if unsafe:
            names = ", ".join(sorted(unsafe))
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    f"unsafe variables ({names}): every global variable must "
                    "appear in a positive body literal",
                    _rule_span(rule, filename),
                )
            )


# ---------------------------------------------------------------------------
# Entry points


def parse_program(source: str, filename: str = "<string>") -> ParseResult:
    """Parse and validate a program.  On any error the result carries no
    program, only diagnostics."""
    tokens, diagnostics = _tokenize(source, filename)
    parser = _Parser(tokens, filename, diagnostics)
    generator, preferences, strategies = parser.parse_program_body()
    _validate_arities(generator, preferences, filename, diagnostics)
    _validate_safety(generator, preferences, filename, diagnostics)
    program: Optional[Program] = None
    if not any(d.severity is Severity.ERROR for d in diagnostics):
        try:
            program = Program(tuple(generator), tuple(preferences), tuple(strategies))
        except ValidationError as exc:
            diagnostics.append(
                Diagnostic(Severity.ERROR, str(exc), SourceSpan(filename, 1, 1, 1, 1))
            )
    return ParseResult(program, tuple(diagnostics))


def parse_file(path: str | Path) -> ParseResult:
    """Parse a program file; a suffix other than .paso earns a warning."""
    path = Path(path)
    source = path.read_text(encoding="utf-8")
    result = parse_program(source, str(path))
    if path.suffix != ".paso":
        warning = Diagnostic(
            Severity.WARNING,
            f"expected a .paso file, got {path.suffix or 'no suffix'!r}",
            SourceSpan(str(path), 1, 1, 1, 1),
        )
        result = ParseResult(result.program, result.diagnostics + (warning,))
    return result
