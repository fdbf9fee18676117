"""Shared helpers for the test suite."""

from pathlib import Path

from pasopt import parse_program

REPO_ROOT = Path(__file__).resolve().parent.parent
PROGRAMS_DIR = REPO_ROOT / "programs"


def parse(text: str):
    """Parse a program snippet, failing loudly on any diagnostic."""
    result = parse_program(text)
    assert result.ok, [str(d) for d in result.diagnostics]
    return result.program


def program_path(name: str) -> Path:
    return PROGRAMS_DIR / name
