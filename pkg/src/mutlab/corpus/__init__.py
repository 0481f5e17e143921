"""Bundled MiniLang corpus: programs with handwritten green suites."""

from __future__ import annotations

from pathlib import Path

CORPUS_DIR = Path(__file__).parent


def program_paths() -> tuple[Path, ...]:
    return tuple(sorted(CORPUS_DIR.glob("*.ml5")))


def tests_path(program: Path) -> Path:
    return program.with_name(program.stem + ".tests.json")


def program_names() -> tuple[str, ...]:
    return tuple(p.stem for p in program_paths())
