"""Test execution harness: green checking and kill-matrix construction.

A suite must be green (every test's outcome matches its expectation on the
unmutated program) before a matrix is built. Each (test, mutant) pair runs
under a deterministic step budget of ``max(budget_floor, ceil(budget_factor *
baseline_steps))``; a run that exhausts its budget counts as a kill, the
deterministic analog of PIT's timeout kills. Matrices are bit-identical
across parallelism degrees: cells depend only on (program, mutant, test,
budget) and results are merged by position.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .minilang import ast
from .minilang.errors import MiniLangError
from .minilang.interp import BUDGET_EXCEEDED, Outcome, execute
from .minilang.testcase import TestCase
from .mutation import MutantDescriptor, apply_mutant

DEFAULT_BUDGET_FACTOR = 10.0
DEFAULT_BUDGET_FLOOR = 10_000


class NotGreenError(MiniLangError):
    def __init__(self, failing: list[str]):
        super().__init__(f"suite is not green; failing tests: {', '.join(failing)}")
        self.failing = tuple(failing)


@dataclass(frozen=True)
class GreenReport:
    test_names: tuple[str, ...]
    passed: tuple[bool, ...]
    outcomes: tuple[Outcome, ...]

    @property
    def green(self) -> bool:
        return all(self.passed)

    @property
    def failing(self) -> tuple[str, ...]:
        return tuple(n for n, ok in zip(self.test_names, self.passed) if not ok)

    @property
    def baseline_steps(self) -> tuple[int, ...]:
        return tuple(o.steps for o in self.outcomes)


def verify_green(
    program: ast.Program,
    tests: tuple[TestCase, ...] | list[TestCase],
    budget: int = DEFAULT_BUDGET_FLOOR,
) -> GreenReport:
    """Run every test on the original program and record pass/fail."""
    names = []
    passed = []
    outcomes = []
    for test in tests:
        outcome = execute(program, test, budget)
        names.append(test.name)
        outcomes.append(outcome)
        passed.append(test.expect.matches(outcome))
    return GreenReport(tuple(names), tuple(passed), tuple(outcomes))


def kill_check(baseline: Outcome, mutated: Outcome) -> bool:
    """True iff the mutant run's observable behavior differs from baseline.

    Budget exhaustion on the mutant always kills (timeout convention); steps
    and trace hashes are diagnostics, never behavior.
    """
    if mutated.status == BUDGET_EXCEEDED:
        return True
    return baseline.behavior() != mutated.behavior()


@dataclass(frozen=True, eq=False)
class KillMatrix:
    """tests x mutants kill bits plus per-cell step counts."""

    test_names: tuple[str, ...]
    mutant_ids: tuple[int, ...]
    kills: np.ndarray  # bool, shape (tests, mutants)
    steps: np.ndarray | None = None  # int64, same shape
    baseline: tuple[Outcome, ...] | None = None
    budgets: tuple[int, ...] | None = None

    def __post_init__(self):
        expect = (len(self.test_names), len(self.mutant_ids))
        if self.kills.shape != expect:
            raise ValueError(f"kill matrix shape {self.kills.shape} != {expect}")

    @property
    def num_tests(self) -> int:
        return len(self.test_names)

    @property
    def num_mutants(self) -> int:
        return len(self.mutant_ids)

    def column(self, mutant_id: int) -> np.ndarray:
        return self.kills[:, self.mutant_ids.index(mutant_id)]

    def killers(self, mutant_id: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.column(mutant_id)))

    def select_mutants(self, mutant_ids: tuple[int, ...]) -> "KillMatrix":
        idx = [self.mutant_ids.index(m) for m in mutant_ids]
        return KillMatrix(
            test_names=self.test_names,
            mutant_ids=tuple(mutant_ids),
            kills=self.kills[:, idx],
            steps=None if self.steps is None else self.steps[:, idx],
            baseline=self.baseline,
            budgets=self.budgets,
        )

    @property
    def total_steps(self) -> int:
        return 0 if self.steps is None else int(self.steps.sum())

    def equals(self, other: "KillMatrix") -> bool:
        return (
            self.test_names == other.test_names
            and self.mutant_ids == other.mutant_ids
            and bool(np.array_equal(self.kills, other.kills))
        )


def _mutant_budgets(
    baseline: tuple[Outcome, ...], budget_factor: float, budget_floor: int
) -> tuple[int, ...]:
    return tuple(
        max(budget_floor, math.ceil(budget_factor * o.steps)) for o in baseline
    )


def _evaluate_chunk(
    program: ast.Program,
    descriptors: list[MutantDescriptor],
    tests: tuple[TestCase, ...],
    budgets: tuple[int, ...],
    baseline: tuple[Outcome, ...],
) -> tuple[list[list[bool]], list[list[int]]]:
    """Columns (kills, steps) for one slice of mutants; pure and order-free."""
    kill_cols = []
    step_cols = []
    for descriptor in descriptors:
        mutant = apply_mutant(program, descriptor)
        kills = []
        steps = []
        for test, budget, base in zip(tests, budgets, baseline):
            outcome = execute(mutant, test, budget)
            kills.append(kill_check(base, outcome))
            steps.append(outcome.steps)
        kill_cols.append(kills)
        step_cols.append(steps)
    return kill_cols, step_cols


def build_kill_matrix(
    program: ast.Program,
    mutants: list[MutantDescriptor],
    tests: tuple[TestCase, ...] | list[TestCase],
    budget_factor: float = DEFAULT_BUDGET_FACTOR,
    budget_floor: int = DEFAULT_BUDGET_FLOOR,
    jobs: int = 1,
) -> KillMatrix:
    """Execute every (test, mutant) pair and assemble the kill matrix.

    Raises NotGreenError when the suite fails on the original program.
    """
    tests = tuple(tests)
    report = verify_green(program, tests, budget=budget_floor)
    if not report.green:
        raise NotGreenError(list(report.failing))
    budgets = _mutant_budgets(report.outcomes, budget_factor, budget_floor)

    num_tests = len(tests)
    num_mutants = len(mutants)
    kills = np.zeros((num_tests, num_mutants), dtype=bool)
    steps = np.zeros((num_tests, num_mutants), dtype=np.int64)

    if jobs <= 1 or num_mutants <= 1:
        chunks = [(0, mutants)]
        results = [
            _evaluate_chunk(program, mutants, tests, budgets, report.outcomes)
        ]
    else:
        size = math.ceil(num_mutants / jobs)
        chunks = [
            (start, mutants[start : start + size])
            for start in range(0, num_mutants, size)
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(
                    _evaluate_chunk, program, chunk, tests, budgets, report.outcomes
                )
                for _start, chunk in chunks
            ]
            results = [f.result() for f in futures]

    for (start, chunk), (kill_cols, step_cols) in zip(chunks, results):
        for offset in range(len(chunk)):
            kills[:, start + offset] = kill_cols[offset]
            steps[:, start + offset] = step_cols[offset]

    return KillMatrix(
        test_names=tuple(t.name for t in tests),
        mutant_ids=tuple(m.mutant_id for m in mutants),
        kills=kills,
        steps=steps,
        baseline=report.outcomes,
        budgets=budgets,
    )


# --- file formats ---


def write_matrix_csv(matrix: KillMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["test"] + [str(m) for m in matrix.mutant_ids])
        for i, name in enumerate(matrix.test_names):
            writer.writerow([name] + [str(int(v)) for v in matrix.kills[i]])


def read_matrix_csv(path: str | Path) -> KillMatrix:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "test":
        raise ValueError(f"{path}: missing 'test' header row")
    try:
        mutant_ids = tuple(int(c) for c in rows[0][1:])
    except ValueError as exc:
        raise ValueError(f"{path}: mutant ids must be integers: {exc}") from exc
    names = []
    bits = []
    for row in rows[1:]:
        if not row:
            continue
        if len(row) != len(mutant_ids) + 1:
            raise ValueError(f"{path}: row {row[0]!r} has {len(row) - 1} cells")
        if any(c not in ("0", "1") for c in row[1:]):
            raise ValueError(f"{path}: row {row[0]!r} has non-binary cells")
        names.append(row[0])
        bits.append([c == "1" for c in row[1:]])
    kills = np.array(bits, dtype=bool).reshape(len(names), len(mutant_ids))
    return KillMatrix(tuple(names), mutant_ids, kills)


def _outcome_to_dict(outcome: Outcome) -> dict:
    return {
        "status": outcome.status,
        "value": outcome.value,
        "trap": outcome.trap,
        "steps": outcome.steps,
    }


def write_matrix_meta(
    matrix: KillMatrix,
    path: str | Path,
    budget_factor: float,
    budget_floor: int,
    extra: dict | None = None,
) -> None:
    payload = {
        "budget_factor": budget_factor,
        "budget_floor": budget_floor,
        "budgets": list(matrix.budgets or ()),
        "baseline_steps": [o.steps for o in (matrix.baseline or ())],
        "baseline_outcomes": [_outcome_to_dict(o) for o in (matrix.baseline or ())],
        "tests": matrix.num_tests,
        "mutants": matrix.num_mutants,
        "total_steps": matrix.total_steps,
    }
    if extra:
        payload.update(extra)
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
