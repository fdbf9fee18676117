"""Answer set enumeration: folds, minimality, NAF, complements, checking."""

from fractions import Fraction

import pytest

from pasopt import (
    AnswerSet,
    Literal,
    ProbabilityAnnotation,
    check_answer_set,
    enumerate_answer_sets,
    format_literal,
    satisfies_rule,
)
from pasopt.engine import UnsupportedProgramError

import oracle
from conftest import parse


def inter(lo, hi=None):
    lo = Fraction(lo)
    hi = lo if hi is None else Fraction(hi)
    return ProbabilityAnnotation(lo, hi)


def mappings(sets):
    return [
        {format_literal(lit): (value.lo, value.hi) for lit, value in h.mapping.items()}
        for h in sets
    ]


def agrees_with_oracle(text):
    program = parse(text)
    ours = {
        frozenset((lit, (v.lo, v.hi)) for lit, v in h.mapping.items())
        for h in enumerate_answer_sets(program)
    }
    theirs = {frozenset(valuation) for valuation in oracle.answer_sets(program)}
    return ours == theirs


# ---------------------------------------------------------------------------
# basic shapes


def test_single_fact():
    sets = enumerate_answer_sets(parse("a:0.5."))
    assert mappings(sets) == [{"a": (Fraction(1, 2), Fraction(1, 2))}]


def test_plain_disjunction_splits():
    sets = enumerate_answer_sets(parse("a:0.5 | b:0.5."))
    assert len(sets) == 2
    assert {frozenset(m) for m in mappings(sets)} == {
        frozenset({"a"}), frozenset({"b"})
    }


def test_two_rules_fold_their_contributions():
    # both facts fire, so the value is the independence fold of both
    sets = enumerate_answer_sets(parse("a:0.5. a:0.6."))
    assert mappings(sets) == [{"a": (Fraction(4, 5), Fraction(4, 5))}]


def test_strategy_directive_changes_the_fold():
    sets = enumerate_answer_sets(parse("#strategy a max. a:0.5. a:[0.2, 0.9]."))
    assert mappings(sets) == [{"a": (Fraction(1, 2), Fraction(9, 10))}]


def test_constraint_prunes():
    sets = enumerate_answer_sets(parse("a:0.5 | b:0.5. :- a:0.5."))
    assert mappings(sets) == [{"b": (Fraction(1, 2), Fraction(1, 2))}]


def test_unsatisfiable_program_has_no_answer_sets():
    assert enumerate_answer_sets(parse("a. :- a.")) == []


def test_naf_body():
    sets = enumerate_answer_sets(parse("a:0.5 | b:0.5. c:0.7 :- not a:0.5."))
    maps = mappings(sets)
    assert {"a": (Fraction(1, 2), Fraction(1, 2))} in maps
    assert {
        "b": (Fraction(1, 2), Fraction(1, 2)),
        "c": (Fraction(7, 10), Fraction(7, 10)),
    } in maps
    assert len(maps) == 2


def test_complement_literals_never_coexist():
    sets = enumerate_answer_sets(parse("a:0.5 | b:0.5. -a | c."))
    assert len(sets) == 3
    for h in sets:
        defined = {format_literal(lit) for lit in h.atoms()}
        assert not ({"a", "-a"} <= defined)


def test_chained_derivation():
    sets = enumerate_answer_sets(parse("a:0.8. b:0.5 :- a:0.8. c :- b:0.5."))
    assert mappings(sets) == [
        {
            "a": (Fraction(4, 5), Fraction(4, 5)),
            "b": (Fraction(1, 2), Fraction(1, 2)),
            "c": (Fraction(1), Fraction(1)),
        }
    ]


def test_weaker_body_threshold_still_fires():
    # the body asks for at least 0.3 and the fact provides 0.8
    sets = enumerate_answer_sets(parse("a:0.8. b:0.5 :- a:0.3."))
    assert len(sets) == 1 and mappings(sets)[0]["b"] == (Fraction(1, 2), Fraction(1, 2))
    # asking for more than the fact provides leaves the body unsatisfied
    sets = enumerate_answer_sets(parse("a:0.8. b:0.5 :- a:0.9."))
    assert mappings(sets) == [{"a": (Fraction(4, 5), Fraction(4, 5))}]


def test_minimality_prefers_fewer_atoms_then_weaker_values():
    # h = {a} alone satisfies both rules once the disjunct choice lands on a
    sets = enumerate_answer_sets(parse("a:0.5. a:0.5 | b:0.5."))
    assert mappings(sets) == [{"a": (Fraction(3, 4), Fraction(3, 4))}]


def test_hybrid_conjunction_in_body():
    text = "a:0.9. b:0.4. c :- (a ^ind b):0.3."
    sets = enumerate_answer_sets(parse(text))
    (only,) = mappings(sets)
    assert only["c"] == (Fraction(1), Fraction(1))  # 0.36 >= 0.3
    text = "a:0.9. b:0.4. c :- (a ^ind b):0.4."
    sets = enumerate_answer_sets(parse(text))
    (only,) = mappings(sets)
    assert "c" not in only


def test_hybrid_disjunction_in_body():
    text = "a:0.9. b:0.4. c :- (a vmax b):0.9."
    (only,) = mappings(enumerate_answer_sets(parse(text)))
    assert "c" in only


# ---------------------------------------------------------------------------
# ordering and determinism


def test_enumeration_is_deterministic_and_indexed():
    text = "a:0.5 | b:0.5 | c:0.5. d:0.3 :- not a:0.5."
    first = enumerate_answer_sets(parse(text))
    second = enumerate_answer_sets(parse(text))
    assert first == second
    assert [h.index for h in first] == list(range(len(first)))
    assert mappings(first) == mappings(second)


# ---------------------------------------------------------------------------
# the checker


def test_check_answer_set_accepts_enumerated_sets():
    program = parse("a:0.5 | b:0.5. c:0.7 :- not a:0.5.")
    for h in enumerate_answer_sets(program):
        assert check_answer_set(h, program)


def test_check_answer_set_rejects_tampering():
    program = parse("a:0.5 | b:0.5.")
    good = enumerate_answer_sets(program)[0]
    wrong_value = AnswerSet.from_mapping(
        {lit: inter("0.6") for lit in good.atoms()}
    )
    assert not check_answer_set(wrong_value, program)
    superset = AnswerSet.from_mapping(
        {**good.mapping, Literal("zzz", ()): inter("1")}
    )
    assert not check_answer_set(superset, program)
    non_minimal = AnswerSet.from_mapping(
        {Literal("a", ()): inter("0.5"), Literal("b", ()): inter("0.5")}
    )
    assert not check_answer_set(non_minimal, program)


def test_satisfies_rule():
    program = parse("b:0.5 :- a:0.5. a:0.5|c.")
    rule = program.generator[0]
    a, b = Literal("a", ()), Literal("b", ())
    assert satisfies_rule({a: inter("0.5"), b: inter("0.5")}, rule)
    assert satisfies_rule({}, rule)  # body fails, rule holds vacuously
    assert not satisfies_rule({a: inter("0.5")}, rule)


# ---------------------------------------------------------------------------
# unsupported programs


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p(X) :- q(X). q(1).", "not ground"),
        ("a :- b. b :- a. a:0.5|c. b:0.5|d.", "recursive"),
        ("a :- a. a:0.5|b.", "depends on its own head"),
        ("a :- not b. b :- not a. a:0.5|c. b:0.5|d.", "recursive"),
    ],
)
def test_unsupported_programs_are_refused(text, fragment):
    with pytest.raises(UnsupportedProgramError, match=fragment):
        enumerate_answer_sets(parse(text))


def test_unsupported_error_names_the_rule():
    with pytest.raises(UnsupportedProgramError, match=r"p\(X\) :- q\(X\)\."):
        enumerate_answer_sets(parse("p(X) :- q(X). q(1)."))


# ---------------------------------------------------------------------------
# cross-checks against the brute-force reference


@pytest.mark.parametrize(
    "text",
    [
        "a:0.5 | b:0.5. -a | c.",
        "a:0.5. a:0.6.",
        "#strategy a max. a:0.5. a:[0.2, 0.9].",
        "a:0.5 | b:0.5. c:0.7 :- not a:0.5. :- c:0.7, b:0.5.",
        "a:[0.2, 0.8] | b. c:0.5 :- a:[0.2, 0.2].",
    ],
)
def test_engine_matches_reference_on_toys(text):
    assert agrees_with_oracle(text)


@pytest.mark.parametrize("seed", range(12))
def test_engine_matches_reference_on_random_programs(seed):
    program = oracle.random_program(seed, max_space=2000)
    ours = {
        frozenset((lit, (v.lo, v.hi)) for lit, v in h.mapping.items())
        for h in enumerate_answer_sets(program)
    }
    theirs = {frozenset(valuation) for valuation in oracle.answer_sets(program)}
    assert ours == theirs
