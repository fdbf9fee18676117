"""Enumerate the probability answer sets of a ground generator program.

The engine handles a precisely bounded class of generator programs: ground
disjunctive rules with constant annotations, negation as failure on body
literals, arbitrary constraints, and no recursion (the dependency graph of
the non-constraint rules must be acyclic, counting both positive and
negated body literals).  Anything outside that class raises
UnsupportedProgramError instead of guessing.

An interpretation is an answer set when
  (a) every rule is satisfied,
  (b) some selection of one head disjunct per satisfied-body rule defines
      exactly the interpretation, the value of each defined atom being the
      fold of the contributing head annotations under the atom's
      disjunctive p-strategy, and
  (c) no interpretation satisfying (a) and (b) has a strictly smaller
      defined set, or the same defined set with pointwise smaller (under
      the truth order, somewhere strictly) values.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .core import (
    AnswerSet,
    BodyComparison,
    BodyLiteral,
    GeneratorRule,
    Literal,
    PasoptError,
    ProbabilityAnnotation,
    Program,
    answer_item_key,
    combine_annotations,
    eval_comparison,
    format_rule,
    satisfies_body_literal,
    truth_leq,
    truth_lt,
)
from .grounder import rule_variables

Valuation = dict[Literal, ProbabilityAnnotation]


class UnsupportedProgramError(PasoptError):
    """The generator program falls outside the class the engine handles."""


# ---------------------------------------------------------------------------
# Satisfaction


def satisfies_body(
    mapping: Mapping[Literal, ProbabilityAnnotation],
    body: Iterable[BodyLiteral | BodyComparison],
) -> bool:
    for element in body:
        if isinstance(element, BodyComparison):
            if not eval_comparison(element.relation, element.left, element.right):
                return False
        elif not satisfies_body_literal(mapping, element):
            return False
    return True


def satisfies_rule(
    mapping: Mapping[Literal, ProbabilityAnnotation], rule: GeneratorRule
) -> bool:
    """A rule holds when its body fails or some head disjunct a:mu has
    mu below the value of a; a constraint holds only when its body fails."""
    if not satisfies_body(mapping, rule.body):
        return True
    for atom in rule.head:
        value = mapping.get(atom.literal)
        if value is not None and truth_leq(atom.annotation.constant_value(), value):
            return True
    return False


# ---------------------------------------------------------------------------
# Program checks and rule ordering


def _require_supported(program: Program) -> tuple[list[GeneratorRule], list[GeneratorRule]]:
    """Split generator rules into ordered non-constraints and constraints,
    rejecting programs outside the engine's class."""
    rules: list[GeneratorRule] = []
    constraints: list[GeneratorRule] = []
    for rule in program.generator:
        if rule_variables(rule):
            raise UnsupportedProgramError(
                f"rule is not ground: {format_rule(rule)}"
            )
        for atom in rule.head:
            if not atom.annotation.is_constant:
                raise UnsupportedProgramError(
                    f"head annotation is not constant: {format_rule(rule)}"
                )
        for element in rule.body:
            if isinstance(element, BodyLiteral) and not element.annotation.is_constant:
                raise UnsupportedProgramError(
                    f"body annotation is not constant: {format_rule(rule)}"
                )
        if rule.is_constraint:
            constraints.append(rule)
        else:
            rules.append(rule)
    return _topological_order(rules), constraints


def _body_literals(rule: GeneratorRule) -> Iterator[Literal]:
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            yield from element.literal.literals


def _topological_order(rules: list[GeneratorRule]) -> list[GeneratorRule]:
    """Order rules so every atom a rule reads is fully produced first.

    Rule r waits on rule s when s can define an atom read by r.  Ties are
    broken by rule text so enumeration is deterministic.
    """
    producers: dict[Literal, list[int]] = {}
    for index, rule in enumerate(rules):
        for atom in rule.head:
            producers.setdefault(atom.literal, []).append(index)
    waits_on: list[set[int]] = [set() for _ in rules]
    dependents: list[set[int]] = [set() for _ in rules]
    for index, rule in enumerate(rules):
        for literal in _body_literals(rule):
            for producer in producers.get(literal, ()):
                waits_on[index].add(producer)
                dependents[producer].add(index)
    for index in range(len(rules)):
        if index in dependents[index]:
            raise UnsupportedProgramError(
                f"rule depends on its own head: {format_rule(rules[index])}"
            )
    keys = [format_rule(rule) for rule in rules]
    ready = sorted(
        (i for i, deps in enumerate(waits_on) if not deps), key=keys.__getitem__
    )
    order: list[GeneratorRule] = []
    pending = {i: set(deps) for i, deps in enumerate(waits_on) if deps}
    while ready:
        current = ready.pop(0)
        order.append(rules[current])
        released = []
        for follower in dependents[current]:
            deps = pending.get(follower)
            if deps is None:
                continue
            deps.discard(current)
            if not deps:
                del pending[follower]
                released.append(follower)
        if released:
            ready.extend(released)
            ready.sort(key=keys.__getitem__)
    if pending:
        cycle = sorted(format_rule(rules[i]) for i in pending)
        raise UnsupportedProgramError(
            "recursive rules are not supported: " + " / ".join(cycle)
        )
    return order


# ---------------------------------------------------------------------------
# Enumeration


class _Search:
    def __init__(self, program: Program):
        self.program = program
        self.rules, self.constraints = _require_supported(program)
        self.results: dict[frozenset, Valuation] = {}

    def run(self) -> list[Valuation]:
        self._extend(0, {}, {})
        return list(self.results.values())

    def _extend(
        self,
        index: int,
        contributions: dict[Literal, list[ProbabilityAnnotation]],
        mapping: Valuation,
    ) -> None:
        if index == len(self.rules):
            if all(not satisfies_body(mapping, c.body) for c in self.constraints):
                key = frozenset(mapping.items())
                self.results.setdefault(key, dict(mapping))
            return
        rule = self.rules[index]
        if not satisfies_body(mapping, rule.body):
            self._extend(index + 1, contributions, mapping)
            return
        for atom in rule.head:
            literal = atom.literal
            if literal.complement in mapping:
                continue
            history = contributions.setdefault(literal, [])
            history.append(atom.annotation.constant_value())
            previous = mapping.get(literal)
            strategy = self.program.disjunctive_strategy(literal.predicate)
            mapping[literal] = combine_annotations(strategy, history)
            self._extend(index + 1, contributions, mapping)
            history.pop()
            if not history:
                del contributions[literal]
                del mapping[literal]
            elif previous is not None:
                mapping[literal] = previous

    # the body of a satisfied rule stays satisfied along a branch: later
    # rules never touch atoms an earlier rule read (topological order), so
    # re-checking downstream of the recursion is unnecessary


def _smaller(candidate: Valuation, other: Valuation) -> bool:
    """True when `other` makes `candidate` non-minimal."""
    defined_c = set(candidate)
    defined_o = set(other)
    if defined_o < defined_c:
        return True
    if defined_o != defined_c:
        return False
    some_strict = False
    for literal, value in candidate.items():
        other_value = other[literal]
        if not truth_leq(other_value, value):
            return False
        if truth_lt(other_value, value):
            some_strict = True
    return some_strict


def _minimal(valuations: list[Valuation]) -> list[Valuation]:
    return [
        candidate
        for candidate in valuations
        if not any(other is not candidate and _smaller(candidate, other) for other in valuations)
    ]


def enumerate_answer_sets(program: Program) -> list[AnswerSet]:
    """All probability answer sets of the ground generator rules, in a
    deterministic order, each carrying its position as the stable index."""
    candidates = _Search(program).run()
    kept = _minimal(candidates)
    kept.sort(key=_valuation_key)
    return [
        AnswerSet.from_mapping(mapping, index=index) for index, mapping in enumerate(kept)
    ]


def _valuation_key(mapping: Valuation) -> tuple:
    return tuple(sorted(answer_item_key(lit, ann) for lit, ann in mapping.items()))


# ---------------------------------------------------------------------------
# Verification


def _selection_supports(
    h: Mapping[Literal, ProbabilityAnnotation],
    program: Program,
    rules: list[GeneratorRule],
) -> bool:
    """Does some choice of one defined head disjunct per satisfied-body rule
    reproduce h exactly through the p-strategy folds?"""
    chooseable: list[list[Literal]] = []
    annotations: list[dict[Literal, ProbabilityAnnotation]] = []
    for rule in rules:
        if not satisfies_body(h, rule.body):
            continue
        options = [atom.literal for atom in rule.head if atom.literal in h]
        if not options:
            return False
        chooseable.append(options)
        annotations.append(
            {atom.literal: atom.annotation.constant_value() for atom in rule.head}
        )

    defined = set(h)

    def assign(index: int, chosen: dict[Literal, list[ProbabilityAnnotation]]) -> bool:
        if index == len(chooseable):
            if set(chosen) != defined:
                return False
            for literal, values in chosen.items():
                strategy = program.disjunctive_strategy(literal.predicate)
                if combine_annotations(strategy, values) != h[literal]:
                    return False
            return True
        for literal in chooseable[index]:
            chosen.setdefault(literal, []).append(annotations[index][literal])
            if assign(index + 1, chosen):
                return True
            chosen[literal].pop()
            if not chosen[literal]:
                del chosen[literal]
        return False

    return assign(0, {})


def check_answer_set(h: AnswerSet, program: Program) -> bool:
    """Independent verification of the three answer set conditions."""
    rules, constraints = _require_supported(program)
    mapping = dict(h.mapping)
    for literal in mapping:
        if literal.complement in mapping:
            return False
    for rule in rules:
        if not satisfies_rule(mapping, rule):
            return False
    for constraint in constraints:
        if satisfies_body(mapping, constraint.body):
            return False
    if not _selection_supports(mapping, program, rules):
        return False
    for other in _Search(program).run():
        if _smaller(mapping, other):
            return False
    return True
