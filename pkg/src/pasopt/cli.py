"""Command line front end.

Subcommands:
  solve FILE   parse, ground, enumerate and rank; text or JSON report
  ground FILE  print the ground program in canonical syntax
  check FILE   parse and validate, reporting positioned diagnostics

Exit codes: 0 success, 1 usage/parse/validation error, 2 no answer sets,
3 grounding cap exceeded.  Diagnostics always go to the error stream.

The JSON report is deterministic: keys are sorted, rationals are rendered
as exact decimal or "num/den" strings, and the "timings" entry is always
null so repeated runs stay byte-identical (wall-clock numbers appear in
the text format only).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from . import __version__
from .core import (
    AnswerSet,
    PasoptError,
    ProbabilityAnnotation,
    Program,
    format_literal,
    format_program,
    format_rational,
)
from .engine import enumerate_answer_sets
from .grounder import GroundingCapExceededError, GroundingOptions, ground_program
from .parser import ParseResult, parse_file
from .prefrank import EvaluationContext, rank

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_ANSWER_SETS = 2
EXIT_CAP_EXCEEDED = 3


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pasopt",
        description="solver for probability answer set optimization programs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="enumerate and rank answer sets")
    solve.add_argument("file", help="program file (.paso)")
    solve.add_argument(
        "--mode",
        choices=("pareto", "maximal"),
        default="pareto",
        help="preference relation used for ranking (default: pareto)",
    )
    solve.add_argument(
        "--fronts",
        type=int,
        default=1,
        metavar="N",
        help="number of preference fronts to report; 0 means all (default: 1)",
    )
    solve.add_argument(
        "--enumerate-only",
        action="store_true",
        help="skip preference evaluation and list every answer set",
    )
    solve.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="report format (default: text)",
    )
    solve.add_argument(
        "--ground-cap",
        type=int,
        default=None,
        metavar="N",
        help="abort grounding after N ground rules/pairs (default: 1000000)",
    )

    ground = commands.add_parser("ground", help="print the ground program")
    ground.add_argument("file", help="program file (.paso)")
    ground.add_argument(
        "--ground-cap",
        type=int,
        default=None,
        metavar="N",
        help="abort grounding after N ground rules/pairs (default: 1000000)",
    )

    check = commands.add_parser("check", help="parse and validate a program")
    check.add_argument("file", help="program file (.paso)")

    return parser


def _emit_diagnostics(result: ParseResult) -> None:
    for diagnostic in result.diagnostics:
        print(diagnostic.render(), file=sys.stderr)


def _load(path: str) -> Optional[Program]:
    try:
        result = parse_file(path)
    except OSError as error:
        print(f"pasopt: cannot read {path}: {error.strerror or error}", file=sys.stderr)
        return None
    _emit_diagnostics(result)
    return result.program


def _grounding_options(cap: Optional[int]) -> GroundingOptions:
    if cap is None:
        return GroundingOptions()
    return GroundingOptions(cap=cap)


# ---------------------------------------------------------------------------
# Report assembly


def _annotation_json(annotation: ProbabilityAnnotation) -> dict:
    return {"lo": format_rational(annotation.lo), "hi": format_rational(annotation.hi)}


def _answer_set_json(h: AnswerSet, degrees: Optional[list[str]]) -> dict:
    return {
        "index": h.index,
        "items": [
            {"literal": format_literal(literal), **_annotation_json(annotation)}
            for literal, annotation in h.items
        ],
        "degrees": degrees,
    }


def _summary_json(program: Program, ground: Program, count: int) -> dict:
    return {
        "generator_rules": len(ground.generator),
        "preference_rules": len(ground.preferences),
        "source_generator_rules": len(program.generator),
        "source_preference_rules": len(program.preferences),
        "answer_sets": count,
    }


def _format_answer_set(h: AnswerSet) -> str:
    if not h.items:
        return "(empty)"
    return ", ".join(
        format_literal(literal) + _annotation_text(annotation)
        for literal, annotation in h.items
    )


def _annotation_text(annotation: ProbabilityAnnotation) -> str:
    if annotation == ProbabilityAnnotation.point(1):
        return ""
    if annotation.is_point:
        return f":{format_rational(annotation.lo)}"
    return f":[{format_rational(annotation.lo)}, {format_rational(annotation.hi)}]"


def _run_solve(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    program = _load(args.file)
    if program is None:
        return EXIT_ERROR
    parsed_at = time.perf_counter()
    try:
        ground = ground_program(program, _grounding_options(args.ground_cap))
    except GroundingCapExceededError as error:
        print(f"pasopt: {error}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except PasoptError as error:
        print(f"pasopt: {error}", file=sys.stderr)
        return EXIT_ERROR
    grounded_at = time.perf_counter()
    try:
        answer_sets = enumerate_answer_sets(ground)
    except PasoptError as error:
        print(f"pasopt: {error}", file=sys.stderr)
        return EXIT_ERROR
    enumerated_at = time.perf_counter()

    fronts: list[list[AnswerSet]] = []
    degrees: dict[int, list[str]] = {}
    if not args.enumerate_only and answer_sets:
        context = EvaluationContext(answer_sets)
        try:
            fronts = rank(ground, answer_sets, args.mode, context)
            for h in answer_sets:
                degrees[h.index] = [
                    str(context.degree(h, rule)) for rule in ground.preferences
                ]
        except PasoptError as error:
            print(f"pasopt: {error}", file=sys.stderr)
            return EXIT_ERROR
    finished = time.perf_counter()

    shown = fronts if args.fronts == 0 else fronts[: max(args.fronts, 0)]
    timings_ms = {
        "parse": (parsed_at - started) * 1000,
        "ground": (grounded_at - parsed_at) * 1000,
        "enumerate": (enumerated_at - grounded_at) * 1000,
        "rank": (finished - enumerated_at) * 1000,
        "total": (finished - started) * 1000,
    }

    if args.format == "json":
        report = {
            "mode": None if args.enumerate_only else args.mode,
            "summary": _summary_json(program, ground, len(answer_sets)),
            "answer_sets": [
                _answer_set_json(h, degrees.get(h.index)) for h in answer_sets
            ],
            "fronts": [[h.index for h in front] for front in shown],
            "timings": None,
        }
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(
            f"{args.file}: {len(ground.generator)} ground generator rules, "
            f"{len(ground.preferences)} ground preference rules"
        )
        print(f"{len(answer_sets)} answer sets")
        if args.enumerate_only:
            for h in answer_sets:
                print(f"  answer set {h.index}: {_format_answer_set(h)}")
        else:
            for position, front in enumerate(shown):
                print(f"front {position} ({args.mode}):")
                for h in front:
                    print(f"  answer set {h.index}: {_format_answer_set(h)}")
                    if degrees.get(h.index):
                        print(f"    degrees: {', '.join(degrees[h.index])}")
        print(
            "timing: "
            + ", ".join(f"{name} {value:.1f} ms" for name, value in timings_ms.items())
        )

    if not answer_sets:
        print("pasopt: no answer sets", file=sys.stderr)
        return EXIT_NO_ANSWER_SETS
    return EXIT_OK


def _run_ground(args: argparse.Namespace) -> int:
    program = _load(args.file)
    if program is None:
        return EXIT_ERROR
    try:
        ground = ground_program(program, _grounding_options(args.ground_cap))
    except GroundingCapExceededError as error:
        print(f"pasopt: {error}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except PasoptError as error:
        print(f"pasopt: {error}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(format_program(ground))
    return EXIT_OK


def _run_check(args: argparse.Namespace) -> int:
    program = _load(args.file)
    if program is None:
        return EXIT_ERROR
    print(
        f"{args.file}: ok ({len(program.generator)} generator rules, "
        f"{len(program.preferences)} preference rules)"
    )
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        # argparse exits 2 on usage errors; the contract reserves 2 for
        # unsatisfiable programs, so usage problems map to 1
        code = error.code if isinstance(error.code, int) else 0
        return EXIT_ERROR if code != 0 else EXIT_OK
    if args.command == "solve":
        return _run_solve(args)
    if args.command == "ground":
        return _run_ground(args)
    return _run_check(args)


if __name__ == "__main__":
    sys.exit(main())
