"""Grounding: replace variables by constants, evaluate arithmetic and
annotation expressions, and expand symbolic probability sets.

The default mode is typed: a fixpoint over the generator rules computes the
set of possible ground atoms, and every variable only ranges over the
constants it can actually match there.  The naive mode (`typed=False`)
instantiates over the full Herbrand universe instead; it exists to check
the typed grounder against the brute-force semantics on small programs.

Ground instances whose body contains a false comparison are kept: they are
vacuous for the solver but part of the ground program.  Exact duplicate
instances are dropped and instances are put in a canonical order, which
makes grounding idempotent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .core import (
    Aggregate,
    AggregateAtom,
    Annotation,
    BodyAggregate,
    BodyComparison,
    BodyElement,
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
    HybridLiteral,
    Literal,
    NumberTerm,
    OptimizationAggregate,
    PasoptError,
    PreferenceRule,
    Program,
    SymbolicSet,
    Term,
    annotation_variables,
    body_literal_variables,
    combination_elements,
    evaluate_term,
    format_body_literal,
    format_literal,
    format_rule,
    format_term,
    is_ground_term,
    literal_variables,
    substitute_term,
    term_variables,
)

DEFAULT_CAP = 1_000_000


class GroundingCapExceededError(PasoptError):
    def __init__(self, cap: int):
        super().__init__(f"grounding exceeded the cap of {cap} work units")
        self.cap = cap


@dataclass(frozen=True)
class GroundingOptions:
    cap: int = DEFAULT_CAP
    typed: bool = True


class _Counter:
    """Work budget shared across the grounding passes: rules, possible
    atoms and set pairs all count."""

    def __init__(self, cap: int):
        self.cap = cap
        self.count = 0

    def tick(self, amount: int = 1) -> None:
        self.count += amount
        if self.count > self.cap:
            raise GroundingCapExceededError(self.cap)


@dataclass(frozen=True)
class HerbrandUniverse:
    """The ground constants of a program plus the possible ground atoms the
    generator rules can derive."""

    constants: tuple[Term, ...]
    atoms: tuple[Literal, ...]


Binding = dict[str, Term]


# ---------------------------------------------------------------------------
# Structure walks


def rule_body_literals(rule: GeneratorRule) -> Iterator[Literal]:
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            yield from element.literal.literals


def _set_condition_literals(source: Union[SymbolicSet, GroundSet]) -> Iterator[Literal]:
    if isinstance(source, SymbolicSet):
        for element in source.condition:
            yield from element.literal.literals
    else:
        for pair in source.pairs:
            for element in pair.condition:
                yield from element.literal.literals


def preference_rule_literals(rule: PreferenceRule) -> Iterator[Literal]:
    for combination in rule.head:
        for element in combination_elements(combination):
            if isinstance(element, BodyLiteral):
                yield from element.literal.literals
            elif isinstance(element, BodyAggregate):
                yield from _set_condition_literals(element.atom.aggregate.source)
            else:
                yield from _set_condition_literals(element.aggregate.source)
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            yield from element.literal.literals
        elif isinstance(element, BodyAggregate):
            yield from _set_condition_literals(element.atom.aggregate.source)


def _rule_aggregates(rule: Union[GeneratorRule, PreferenceRule]) -> list[Aggregate]:
    if isinstance(rule, GeneratorRule):
        return []
    found: list[Aggregate] = []
    for combination in rule.head:
        for element in combination_elements(combination):
            if isinstance(element, BodyAggregate):
                found.append(element.atom.aggregate)
            elif isinstance(element, OptimizationAggregate):
                found.append(element.aggregate)
    for element in rule.body:
        if isinstance(element, BodyAggregate):
            found.append(element.atom.aggregate)
    return found


def _set_variables(source: Union[SymbolicSet, GroundSet]) -> set[str]:
    if isinstance(source, SymbolicSet):
        return source.variables()
    return set()


def _body_element_variables(element: BodyElement) -> set[str]:
    if isinstance(element, BodyLiteral):
        return body_literal_variables(element)
    if isinstance(element, BodyComparison):
        return term_variables(element.left) | term_variables(element.right)
    atom = element.atom
    names = _set_variables(atom.aggregate.source)
    names |= term_variables(atom.guard_lo) | term_variables(atom.guard_hi)
    names |= annotation_variables(atom.annotation)
    return names


def rule_variables(rule: Union[GeneratorRule, PreferenceRule]) -> set[str]:
    names: set[str] = set()
    if isinstance(rule, GeneratorRule):
        for atom in rule.head:
            names |= literal_variables(atom.literal)
            names |= annotation_variables(atom.annotation)
    else:
        for combination in rule.head:
            for element in combination_elements(combination):
                if isinstance(element, BodyLiteral):
                    names |= body_literal_variables(element)
                elif isinstance(element, BodyAggregate):
                    names |= _body_element_variables(element)
                else:
                    names |= _set_variables(element.aggregate.source)
    for element in rule.body:
        names |= _body_element_variables(element)
    return names


@dataclass(frozen=True)
class VariableClassification:
    """Variables local to each aggregate's set (in rule order) versus the
    rule's global variables."""

    global_variables: frozenset[str]
    local_variables: tuple[frozenset[str], ...]


def classify_variables(rule: Union[GeneratorRule, PreferenceRule]) -> VariableClassification:
    """A variable is local to an aggregate when it appears in that set and
    nowhere else in the rule; every other variable is global."""
    aggregates = _rule_aggregates(rule)
    set_vars = [_set_variables(agg.source) for agg in aggregates]
    all_vars = rule_variables(rule)
    outside_sets = _variables_outside_sets(rule)
    locals_per_aggregate = []
    for i, vars_ in enumerate(set_vars):
        other_sets: set[str] = set()
        for j, other in enumerate(set_vars):
            if j != i:
                other_sets |= other
        locals_per_aggregate.append(frozenset(vars_ - outside_sets - other_sets))
    local_union: set[str] = set()
    for loc in locals_per_aggregate:
        local_union |= loc
    return VariableClassification(
        frozenset(all_vars - local_union), tuple(locals_per_aggregate)
    )


def _variables_outside_sets(rule: Union[GeneratorRule, PreferenceRule]) -> set[str]:
    names: set[str] = set()
    if isinstance(rule, GeneratorRule):
        return rule_variables(rule)
    for combination in rule.head:
        for element in combination_elements(combination):
            if isinstance(element, BodyLiteral):
                names |= body_literal_variables(element)
            elif isinstance(element, BodyAggregate):
                atom = element.atom
                names |= term_variables(atom.guard_lo) | term_variables(atom.guard_hi)
                names |= annotation_variables(atom.annotation)
    for element in rule.body:
        if isinstance(element, BodyAggregate):
            atom = element.atom
            names |= term_variables(atom.guard_lo) | term_variables(atom.guard_hi)
            names |= annotation_variables(atom.annotation)
        else:
            names |= _body_element_variables(element)
    return names


def positive_body_bound_variables(rule: Union[GeneratorRule, PreferenceRule]) -> set[str]:
    """Variables bound by matching positive body literals (term positions)."""
    bound: set[str] = set()
    for element in rule.body:
        if isinstance(element, BodyLiteral) and not element.negated:
            for literal in element.literal.literals:
                bound |= literal_variables(literal)
    return bound


def unsafe_variables(rule: Union[GeneratorRule, PreferenceRule]) -> set[str]:
    classification = classify_variables(rule)
    bound = positive_body_bound_variables(rule)
    return set(classification.global_variables) - bound


# ---------------------------------------------------------------------------
# Matching ground atoms against literal patterns


def _match_term(pattern: Term, ground: Term, binding: Binding) -> Optional[Binding]:
    from .core import VariableTerm, FunctionTerm

    if isinstance(pattern, VariableTerm):
        known = binding.get(pattern.name)
        if known is None:
            extended = dict(binding)
            extended[pattern.name] = ground
            return extended
        return binding if known == ground else None
    if isinstance(pattern, NumberTerm):
        return binding if pattern == ground else None
    if isinstance(pattern, FunctionTerm):
        if (
            not isinstance(ground, FunctionTerm)
            or pattern.symbol != ground.symbol
            or len(pattern.args) != len(ground.args)
        ):
            return None
        for parg, garg in zip(pattern.args, ground.args):
            next_binding = _match_term(parg, garg, binding)
            if next_binding is None:
                return None
            binding = next_binding
        return binding
    # arithmetic pattern: all its variables must already be bound
    if not term_variables(pattern) <= set(binding):
        raise EvaluationError(
            f"cannot solve {format_term(pattern)} for its variables during matching"
        )
    return binding if evaluate_term(substitute_term(pattern, binding)) == ground else None


def _is_arith_free(term: Term) -> bool:
    from .core import ArithTerm, FunctionTerm

    if isinstance(term, ArithTerm):
        return False
    if isinstance(term, FunctionTerm):
        return all(_is_arith_free(a) for a in term.args)
    return True


def _match_literal(pattern: Literal, ground: Literal, binding: Binding) -> Optional[Binding]:
    if (
        pattern.predicate != ground.predicate
        or pattern.negated != ground.negated
        or len(pattern.args) != len(ground.args)
    ):
        return None
    # bind plain positions first so arithmetic positions can evaluate
    deferred: list[tuple[Term, Term]] = []
    for parg, garg in zip(pattern.args, ground.args):
        if _is_arith_free(parg):
            next_binding = _match_term(parg, garg, binding)
            if next_binding is None:
                return None
            binding = next_binding
        else:
            deferred.append((parg, garg))
    for parg, garg in deferred:
        next_binding = _match_term(parg, garg, binding)
        if next_binding is None:
            return None
        binding = next_binding
    return binding


def _arith_variables(term: Term) -> set[str]:
    from .core import ArithTerm, FunctionTerm

    if isinstance(term, ArithTerm):
        return term_variables(term)
    if isinstance(term, FunctionTerm):
        names: set[str] = set()
        for arg in term.args:
            names |= _arith_variables(arg)
        return names
    return set()


def _order_patterns(patterns: Sequence[Literal], preset: set[str]) -> list[Literal]:
    """Order join patterns so every arithmetic argument sees bound variables."""
    remaining = list(patterns)
    ordered: list[Literal] = []
    bound = set(preset)
    while remaining:
        for i, pattern in enumerate(remaining):
            needs: set[str] = set()
            plain: set[str] = set()
            for arg in pattern.args:
                if _is_arith_free(arg):
                    plain |= term_variables(arg)
                else:
                    needs |= _arith_variables(arg)
            if needs <= bound | plain:
                ordered.append(remaining.pop(i))
                bound |= literal_variables(pattern)
                break
        else:
            raise EvaluationError(
                "cannot order body literals so that arithmetic arguments are bound"
            )
    return ordered


def _join(
    patterns: Sequence[Literal],
    atoms_by_key: Mapping[tuple[str, bool, int], list[Literal]],
    start: Binding,
) -> Iterator[Binding]:
    ordered = _order_patterns(patterns, set(start))

    def extend(index: int, binding: Binding) -> Iterator[Binding]:
        if index == len(ordered):
            yield binding
            return
        pattern = ordered[index]
        key = (pattern.predicate, pattern.negated, len(pattern.args))
        for atom in atoms_by_key.get(key, ()):
            matched = _match_literal(pattern, atom, binding)
            if matched is not None:
                yield from extend(index + 1, matched)

    yield from extend(0, dict(start))


def _atoms_by_key(atoms: Iterable[Literal]) -> dict[tuple[str, bool, int], list[Literal]]:
    table: dict[tuple[str, bool, int], list[Literal]] = {}
    for atom in atoms:
        table.setdefault((atom.predicate, atom.negated, len(atom.args)), []).append(atom)
    return table


# ---------------------------------------------------------------------------
# Substitution helpers


def _fraction_bindings(binding: Binding) -> dict[str, Fraction]:
    values: dict[str, Fraction] = {}
    for name, term in binding.items():
        if isinstance(term, NumberTerm):
            values[name] = term.value
    return values


def _ground_annotation(annotation: Annotation, binding: Binding) -> Annotation:
    probability = annotation.evaluate(_fraction_bindings(binding))
    return Annotation.constant(probability.lo, probability.hi)


def _ground_literal(literal: Literal, binding: Binding) -> Literal:
    args = tuple(evaluate_term(substitute_term(a, binding)) for a in literal.args)
    return Literal(literal.predicate, args, literal.negated)


def _ground_hybrid(hybrid: HybridLiteral, binding: Binding) -> HybridLiteral:
    literals = tuple(_ground_literal(l, binding) for l in hybrid.literals)
    return HybridLiteral(literals, hybrid.kind, hybrid.strategy)


def _ground_body_literal(element: BodyLiteral, binding: Binding) -> BodyLiteral:
    return BodyLiteral(
        _ground_hybrid(element.literal, binding),
        _ground_annotation(element.annotation, binding),
        element.negated,
    )


def _ground_comparison(element: BodyComparison, binding: Binding) -> BodyComparison:
    left = evaluate_term(substitute_term(element.left, binding))
    right = evaluate_term(substitute_term(element.right, binding))
    return BodyComparison(left, element.relation, right)


def _comparisons_hold(rule: GeneratorRule, binding: Binding) -> bool:
    from .core import eval_comparison

    for element in rule.body:
        if isinstance(element, BodyComparison):
            grounded = _ground_comparison(element, binding)
            if not eval_comparison(grounded.relation, grounded.left, grounded.right):
                return False
    return True


# ---------------------------------------------------------------------------
# Symbolic set grounding


def ground_symbolic_set(
    source: Union[SymbolicSet, GroundSet],
    universe: HerbrandUniverse,
    binding: Optional[Mapping[str, Term]] = None,
    *,
    typed: bool = True,
    counter: Optional[_Counter] = None,
) -> GroundSet:
    """Expand a symbolic set under a binding of the rule's global variables.

    Typed mode joins the condition literals against the possible atoms;
    locals that no condition position binds range over all constants.
    Naive mode enumerates every local over the whole universe.
    """
    if isinstance(source, GroundSet):
        return source
    start: Binding = dict(binding or {})
    local_names = sorted(source.variables() - set(start))
    pairs: list[GroundPair] = []
    seen: set[GroundPair] = set()
    for assignment in _set_bindings(source, universe, start, local_names, typed):
        # every candidate binding is a unit of work, so naive-mode blowups
        # hit the cap instead of spinning without emitting anything
        if counter is not None:
            counter.tick()
        value = evaluate_term(substitute_term(source.value, assignment))
        probability = source.annotation.evaluate(_fraction_bindings(assignment))
        condition = tuple(_ground_body_literal(c, assignment) for c in source.condition)
        pair = GroundPair(value, probability, condition)
        if pair not in seen:
            seen.add(pair)
            pairs.append(pair)
    pairs.sort(key=format_ground_pair_key)
    return GroundSet(tuple(pairs))


def format_ground_pair_key(pair: GroundPair) -> tuple:
    condition = tuple(format_body_literal(c) for c in pair.condition)
    return (format_term(pair.value), pair.annotation.lo, pair.annotation.hi, condition)


def _set_bindings(
    source: SymbolicSet,
    universe: HerbrandUniverse,
    start: Binding,
    local_names: list[str],
    typed: bool,
) -> Iterator[Binding]:
    if not typed:
        yield from _enumerate_over_constants(universe, start, local_names)
        return
    patterns = [lit for element in source.condition for lit in element.literal.literals]
    table = _atoms_by_key(universe.atoms)
    for joined in _join(patterns, table, start):
        rest = [name for name in local_names if name not in joined]
        yield from _enumerate_over_constants(universe, joined, rest)


def _enumerate_over_constants(
    universe: HerbrandUniverse, start: Binding, names: list[str]
) -> Iterator[Binding]:
    if not names:
        yield dict(start)
        return
    for combo in itertools.product(universe.constants, repeat=len(names)):
        binding = dict(start)
        binding.update(zip(names, combo))
        yield binding


# ---------------------------------------------------------------------------
# Constants


def _term_constants(term: Term) -> set[Term]:
    from .core import ArithTerm, FunctionTerm, VariableTerm

    if isinstance(term, NumberTerm):
        return {term}
    if isinstance(term, VariableTerm):
        return set()
    if isinstance(term, ArithTerm):
        return _term_constants(term.left) | _term_constants(term.right)
    if is_ground_term(term):
        return {evaluate_term(term)}
    found: set[Term] = set()
    for arg in term.args:
        found |= _term_constants(arg)
    return found


def _literal_constants(literal: Literal) -> set[Term]:
    found: set[Term] = set()
    for arg in literal.args:
        found |= _term_constants(arg)
    return found


def _program_constants(program: Program) -> set[Term]:
    found: set[Term] = set()

    def from_body_literal(element: BodyLiteral) -> None:
        for literal in element.literal.literals:
            found.update(_literal_constants(literal))

    def from_set(source: Union[SymbolicSet, GroundSet]) -> None:
        if isinstance(source, SymbolicSet):
            found.update(_term_constants(source.value))
            for element in source.condition:
                from_body_literal(element)
        else:
            for pair in source.pairs:
                found.update(_term_constants(pair.value))
                for element in pair.condition:
                    from_body_literal(element)

    def from_element(element: BodyElement) -> None:
        if isinstance(element, BodyLiteral):
            from_body_literal(element)
        elif isinstance(element, BodyComparison):
            found.update(_term_constants(element.left))
            found.update(_term_constants(element.right))
        else:
            from_set(element.atom.aggregate.source)
            found.update(_term_constants(element.atom.guard_lo))
            found.update(_term_constants(element.atom.guard_hi))

    for rule in program.generator:
        for atom in rule.head:
            found.update(_literal_constants(atom.literal))
        for element in rule.body:
            from_element(element)
    for rule in program.preferences:
        for combination in rule.head:
            for element in combination_elements(combination):
                if isinstance(element, OptimizationAggregate):
                    from_set(element.aggregate.source)
                else:
                    from_element(element)
        for element in rule.body:
            from_element(element)
    return found


# ---------------------------------------------------------------------------
# Generator rules


def _positive_patterns(rule: GeneratorRule) -> list[Literal]:
    patterns: list[Literal] = []
    for element in rule.body:
        if isinstance(element, BodyLiteral) and not element.negated:
            patterns.extend(element.literal.literals)
    return patterns


def _possible_atoms(program: Program, counter: _Counter) -> set[Literal]:
    possible: set[Literal] = set()
    changed = True
    while changed:
        changed = False
        table = _atoms_by_key(possible)
        for rule in program.generator:
            if rule.is_constraint:
                continue
            for binding in _join(_positive_patterns(rule), table, {}):
                if not _comparisons_hold(rule, binding):
                    continue
                for atom in rule.head:
                    literal = _ground_literal(atom.literal, binding)
                    if literal not in possible:
                        possible.add(literal)
                        counter.tick()
                        changed = True
    return possible


def _instantiate_generator_rule(rule: GeneratorRule, binding: Binding) -> GeneratorRule:
    head = tuple(
        HeadAtom(
            _ground_literal(atom.literal, binding),
            _ground_annotation(atom.annotation, binding),
        )
        for atom in rule.head
    )
    body = []
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            body.append(_ground_body_literal(element, binding))
        else:
            body.append(_ground_comparison(element, binding))
    return GeneratorRule(head, tuple(body), rule.span)


def _generator_bindings(
    rule: GeneratorRule,
    table: Mapping[tuple[str, bool, int], list[Literal]],
    universe_constants: Optional[tuple[Term, ...]],
) -> Iterator[Binding]:
    names = sorted(rule_variables(rule))
    if not names:
        yield {}
        return
    if universe_constants is not None:
        for combo in itertools.product(universe_constants, repeat=len(names)):
            yield dict(zip(names, combo))
        return
    for binding in _join(_positive_patterns(rule), table, {}):
        missing = [n for n in names if n not in binding]
        if missing:
            raise EvaluationError(
                f"variables {', '.join(missing)} not bound by positive body literals"
            )
        yield binding


# ---------------------------------------------------------------------------
# Preference rules


def _ground_aggregate(
    aggregate: Aggregate,
    universe: HerbrandUniverse,
    binding: Binding,
    typed: bool,
    counter: _Counter,
) -> Aggregate:
    source = ground_symbolic_set(
        aggregate.source, universe, binding, typed=typed, counter=counter
    )
    return Aggregate(aggregate.function, source)


def _ground_aggregate_atom(
    atom: AggregateAtom,
    universe: HerbrandUniverse,
    binding: Binding,
    typed: bool,
    counter: _Counter,
) -> AggregateAtom:
    return AggregateAtom(
        _ground_aggregate(atom.aggregate, universe, binding, typed, counter),
        atom.relation,
        evaluate_term(substitute_term(atom.guard_lo, binding)),
        evaluate_term(substitute_term(atom.guard_hi, binding)),
        _ground_annotation(atom.annotation, binding),
    )


def _ground_combination(
    combination: BooleanCombination,
    universe: HerbrandUniverse,
    binding: Binding,
    typed: bool,
    counter: _Counter,
) -> BooleanCombination:
    if isinstance(combination, CombinationLeaf):
        element = combination.element
        if isinstance(element, BodyLiteral):
            return CombinationLeaf(_ground_body_literal(element, binding))
        if isinstance(element, BodyAggregate):
            return CombinationLeaf(
                BodyAggregate(
                    _ground_aggregate_atom(element.atom, universe, binding, typed, counter),
                    element.negated,
                )
            )
        return CombinationLeaf(
            OptimizationAggregate(
                element.kind,
                _ground_aggregate(element.aggregate, universe, binding, typed, counter),
            )
        )
    left = _ground_combination(combination.left, universe, binding, typed, counter)
    right = _ground_combination(combination.right, universe, binding, typed, counter)
    if isinstance(combination, CombinationAnd):
        return CombinationAnd(left, right)
    return CombinationOr(left, right)


def _instantiate_preference_rule(
    rule: PreferenceRule,
    universe: HerbrandUniverse,
    binding: Binding,
    typed: bool,
    counter: _Counter,
) -> PreferenceRule:
    head = tuple(
        _ground_combination(c, universe, binding, typed, counter) for c in rule.head
    )
    body = []
    for element in rule.body:
        if isinstance(element, BodyLiteral):
            body.append(_ground_body_literal(element, binding))
        elif isinstance(element, BodyComparison):
            body.append(_ground_comparison(element, binding))
        else:
            body.append(
                BodyAggregate(
                    _ground_aggregate_atom(element.atom, universe, binding, typed, counter),
                    element.negated,
                )
            )
    return PreferenceRule(head, tuple(body), rule.span)


def _preference_bindings(
    rule: PreferenceRule,
    universe: HerbrandUniverse,
    typed: bool,
) -> Iterator[Binding]:
    classification = classify_variables(rule)
    names = sorted(classification.global_variables)
    if not names:
        yield {}
        return
    if not typed:
        yield from _enumerate_over_constants(universe, {}, names)
        return
    patterns: list[Literal] = []
    for element in rule.body:
        if isinstance(element, BodyLiteral) and not element.negated:
            patterns.extend(element.literal.literals)
    table = _atoms_by_key(universe.atoms)
    for binding in _join(patterns, table, {}):
        missing = [n for n in names if n not in binding]
        if missing:
            raise EvaluationError(
                f"variables {', '.join(missing)} not bound by positive body literals"
            )
        yield binding


# ---------------------------------------------------------------------------
# Entry points


def ground_program(program: Program, options: Optional[GroundingOptions] = None) -> Program:
    """Ground every rule of the program; idempotent on ground programs."""
    opts = options or GroundingOptions()
    counter = _Counter(opts.cap)

    constants = _program_constants(program)
    possible = _possible_atoms(program, counter)
    for literal in possible:
        for arg in literal.args:
            constants.update(_term_constants(arg))
    universe = HerbrandUniverse(
        tuple(sorted(constants, key=format_term)),
        tuple(sorted(possible, key=format_literal)),
    )

    table = _atoms_by_key(universe.atoms)
    naive_constants = universe.constants if not opts.typed else None

    ground_generator: list[GeneratorRule] = []
    seen_generator: set[GeneratorRule] = set()
    for rule in program.generator:
        instances = []
        for binding in _generator_bindings(rule, table, naive_constants):
            counter.tick()
            instance = _instantiate_generator_rule(rule, binding)
            if instance not in seen_generator:
                seen_generator.add(instance)
                instances.append(instance)
        instances.sort(key=format_rule)
        ground_generator.extend(instances)

    ground_preferences: list[PreferenceRule] = []
    seen_preferences: set[PreferenceRule] = set()
    for rule in program.preferences:
        instances = []
        for binding in _preference_bindings(rule, universe, opts.typed):
            counter.tick()
            instance = _instantiate_preference_rule(
                rule, universe, binding, opts.typed, counter
            )
            if instance not in seen_preferences:
                seen_preferences.add(instance)
                instances.append(instance)
        instances.sort(key=format_rule)
        ground_preferences.extend(instances)

    return Program(
        tuple(ground_generator), tuple(ground_preferences), program.atom_strategies
    )


def herbrand_universe(program: Program) -> HerbrandUniverse:
    """The constants and possible atoms of a program (computed as in
    `ground_program`)."""
    counter = _Counter(DEFAULT_CAP)
    constants = _program_constants(program)
    possible = _possible_atoms(program, counter)
    for literal in possible:
        for arg in literal.args:
            constants.update(_term_constants(arg))
    return HerbrandUniverse(
        tuple(sorted(constants, key=format_term)),
        tuple(sorted(possible, key=format_literal)),
    )
