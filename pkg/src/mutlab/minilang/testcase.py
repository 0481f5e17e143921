"""Test cases for MiniLang programs and the JSON suite format.

A suite file is one JSON document per program: an array of
``{name, entry, args, expect}`` objects where ``expect`` is either
``{"return": value}`` or ``{"trap": kind}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import TestCaseError

TRAP_KINDS = ("div-by-zero", "missing-return", "unknown-variable")


@dataclass(frozen=True)
class Expectation:
    kind: str  # "return" or "trap"
    value: int | bool | None = None
    trap: str | None = None

    def matches(self, outcome) -> bool:
        if self.kind == "return":
            return (
                outcome.status == "returned"
                and outcome.value == self.value
                and isinstance(outcome.value, bool) == isinstance(self.value, bool)
            )
        return outcome.status == "trap" and outcome.trap == self.trap

    def describe(self) -> str:
        if self.kind == "return":
            return f"return {_literal(self.value)}"
        return f"trap {self.trap}"


def _literal(value: int | bool | None) -> str:
    if value is None:
        return "nothing"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


@dataclass(frozen=True)
class TestCase:
    name: str
    entry: str
    args: tuple[int | bool, ...]
    expect: Expectation
    source: str | None = None  # provenance file path


def _parse_expect(raw: object, name: str) -> Expectation:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise TestCaseError(f"{name}: expect must be {{'return': v}} or {{'trap': kind}}")
    if "return" in raw:
        value = raw["return"]
        if value is not None and not isinstance(value, (int, bool)):
            raise TestCaseError(f"{name}: return expectation must be int, bool, or null")
        return Expectation("return", value=value)
    if "trap" in raw:
        trap = raw["trap"]
        if trap not in TRAP_KINDS:
            raise TestCaseError(f"{name}: unknown trap kind {trap!r}")
        return Expectation("trap", trap=trap)
    raise TestCaseError(f"{name}: expect must contain 'return' or 'trap'")


def load_tests(path: str | Path) -> tuple[TestCase, ...]:
    """Load a JSON test suite; validates shape, not program binding."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise TestCaseError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise TestCaseError(f"{path}: suite must be a JSON array")
    tests = []
    seen: set[str] = set()
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise TestCaseError(f"{path}: entry {i} is not an object")
        try:
            name = item["name"]
            entry = item["entry"]
            args = item["args"]
            expect = item["expect"]
        except KeyError as exc:
            raise TestCaseError(f"{path}: entry {i} is missing {exc}") from exc
        if not isinstance(name, str) or not isinstance(entry, str):
            raise TestCaseError(f"{path}: entry {i}: name and entry must be strings")
        if name in seen:
            raise TestCaseError(f"{path}: duplicate test name {name!r}")
        seen.add(name)
        if not isinstance(args, list) or not all(
            isinstance(a, (int, bool)) for a in args
        ):
            raise TestCaseError(f"{name}: args must be ints or bools")
        tests.append(
            TestCase(
                name=name,
                entry=entry,
                args=tuple(args),
                expect=_parse_expect(expect, name),
                source=str(path),
            )
        )
    return tuple(tests)
