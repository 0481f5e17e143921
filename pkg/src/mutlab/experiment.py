"""Experiment pipeline: random incremental test selection on the common
matrix, objective comparison against the comprehensive matrix, rank-sum
significance, easiness medians, and step-count timing.

Each repetition draws a fresh permutation of the test pool from a seeded
PCG64 generator (numpy's documented, portable default) and keeps a test iff
it kills at least one not-yet-killed common mutant. The kept tests are then
scored against the comprehensive matrix twice: over all its mutants and over
its disjoint set only. Measure (a) is the number of comprehensive mutants
the selection kills; measure (b) is the number killable by the whole pool;
the (a) sample across repetitions is compared against (b) with the two-sided
rank-sum test at the 0.05 level. All outputs are deterministic functions of
(program, tests, base seed); timing is reported in interpreter steps so
reports are byte-stable across machines and parallelism degrees.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analysis import DisjointResult, all_easiness, disjoint_mutants, mutation_score
from .harness import (
    DEFAULT_BUDGET_FACTOR,
    DEFAULT_BUDGET_FLOOR,
    KillMatrix,
    build_kill_matrix,
)
from .minilang.errors import MiniLangError
from .minilang.parser import parse
from .minilang.testcase import load_tests
from .mutation import COMMON, COMPREHENSIVE, edit_key, generate_mutants
from .stats import rank_sum_test

SIGNIFICANCE_LEVEL = 0.05


class MismatchedTestsError(MiniLangError):
    """The selection and the comprehensive matrix disagree on the test pool."""


@dataclass(frozen=True)
class SelectionRun:
    seed: int
    selected: tuple[int, ...]  # kept test indices, in selection order
    common_score: float
    all_ratio: float | None = None
    disjoint_ratio: float | None = None
    rep_index: int = -1


def _select_with_order(matrix: KillMatrix, order) -> tuple[int, ...]:
    """Greedy filter: keep a test iff it kills a not-yet-killed mutant."""
    killed = np.zeros(matrix.num_mutants, dtype=bool)
    selected: list[int] = []
    for i in order:
        row = matrix.kills[i]
        if (row & ~killed).any():
            selected.append(int(i))
            killed |= row
    return tuple(selected)


def select_tests(common_matrix: KillMatrix, seed: int) -> SelectionRun:
    """One seeded repetition of random incremental test selection."""
    if common_matrix.num_tests == 0:
        raise ValueError("selection needs a non-empty test pool")
    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(common_matrix.num_tests)
    selected = _select_with_order(common_matrix, order)
    return SelectionRun(
        seed=seed,
        selected=selected,
        common_score=mutation_score(common_matrix, selected),
    )


def _killed_counts(comp_matrix: KillMatrix, selected) -> tuple[int, int]:
    """(a, b): comprehensive mutants killed by the selection / by all tests."""
    rows = np.zeros(comp_matrix.num_tests, dtype=bool)
    for i in selected:
        if not 0 <= i < comp_matrix.num_tests:
            raise MismatchedTestsError(f"test index {i} out of range")
        rows[i] = True
    killable = comp_matrix.kills.any(axis=0)
    by_selection = (
        comp_matrix.kills[rows].any(axis=0) if rows.any() else np.zeros_like(killable)
    )
    return int(by_selection.sum()), int(killable.sum())


def objective_scores(
    selection: SelectionRun,
    comp_matrix: KillMatrix,
    comp_disjoint: DisjointResult,
    common_test_names: tuple[str, ...] | None = None,
) -> tuple[float, float]:
    """(all_ratio, disjoint_ratio) of the selection against the comprehensive set."""
    if common_test_names is not None and common_test_names != comp_matrix.test_names:
        raise MismatchedTestsError("matrices were built over different test pools")
    a, b = _killed_counts(comp_matrix, selection.selected)
    all_ratio = a / b if b else 1.0
    d = comp_disjoint.disjoint
    if d:
        rows = list(selection.selected)
        killed_d = sum(1 for m in d if rows and comp_matrix.column(m)[rows].any())
        disjoint_ratio = killed_d / len(d)
    else:
        disjoint_ratio = 1.0
    return all_ratio, disjoint_ratio


def timing_report(common_meta: dict, comp_meta: dict) -> dict:
    """Step-count timing block: totals, per-mutant cost, overhead percent."""

    def block(meta: dict) -> dict:
        total = meta["total_steps"]
        count = meta["mutants"]
        return {
            "total_steps": total,
            "mutants": count,
            "steps_per_mutant": total / count if count else 0.0,
        }

    common = block(common_meta)
    comp = block(comp_meta)
    if common["total_steps"]:
        overhead = (comp["total_steps"] / common["total_steps"] - 1.0) * 100.0
    else:
        overhead = 0.0
    return {"common": common, "comprehensive": comp, "overhead_pct": overhead}


@dataclass(frozen=True)
class ExperimentReport:
    program: str
    reps: int
    base_seed: int
    test_count: int
    runs: tuple[SelectionRun, ...]
    p_value: float
    significant: bool
    quartiles: dict  # {"all"|"disjoint": {"q1","median","q3"}}
    easiness_medians: dict
    counts: dict
    timing: dict
    flags: dict

    def to_dict(self) -> dict:
        return {
            "program": self.program,
            "reps": self.reps,
            "base_seed": self.base_seed,
            "tests": self.test_count,
            "significance": {
                "p_value": self.p_value,
                "significant": self.significant,
                "level": SIGNIFICANCE_LEVEL,
            },
            "quartiles": self.quartiles,
            "easiness_medians": self.easiness_medians,
            "counts": self.counts,
            "timing": self.timing,
            "flags": self.flags,
            "runs": [
                {
                    "rep": r.rep_index,
                    "seed": r.seed,
                    "selected": list(r.selected),
                    "tests_kept": len(r.selected),
                    "common_score": r.common_score,
                    "objective_all": r.all_ratio,
                    "objective_disjoint": r.disjoint_ratio,
                }
                for r in self.runs
            ],
        }


def _quartiles(values) -> dict:
    q1, med, q3 = (float(v) for v in np.percentile(values, [25, 50, 75]))
    return {"q1": q1, "median": med, "q3": q3}


def _median(values: np.ndarray) -> float | None:
    return float(np.median(values)) if values.size else None


def run_experiment(
    program_path: str | Path,
    tests_path: str | Path,
    reps: int = 30,
    base_seed: int = 0,
    budget_factor: float = DEFAULT_BUDGET_FACTOR,
    budget_floor: int = DEFAULT_BUDGET_FLOOR,
    jobs: int = 1,
) -> ExperimentReport:
    """Full deterministic reproduction of the analysis procedure.

    Builds COMMON and COMPREHENSIVE kill matrices, runs ``reps`` seeded
    selections (seeds ``base_seed .. base_seed + reps - 1``), compares the
    killed-count samples with the rank-sum test, and aggregates quartiles,
    easiness medians, and step timing.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    program_path = Path(program_path)
    program = parse(program_path.read_text(encoding="utf-8"))
    tests = load_tests(tests_path)

    common_muts = generate_mutants(program, COMMON)
    comp_muts = generate_mutants(program, COMPREHENSIVE)
    m_common = build_kill_matrix(
        program, common_muts, tests, budget_factor, budget_floor, jobs
    )
    m_comp = build_kill_matrix(
        program, comp_muts, tests, budget_factor, budget_floor, jobs
    )
    d_common = disjoint_mutants(m_common)
    d_comp = disjoint_mutants(m_comp)

    runs: list[SelectionRun] = []
    sample_a: list[float] = []
    sample_b: list[float] = []
    for k in range(reps):
        run = select_tests(m_common, base_seed + k)
        all_ratio, disjoint_ratio = objective_scores(
            run, m_comp, d_comp, m_common.test_names
        )
        a, b = _killed_counts(m_comp, run.selected)
        sample_a.append(float(a))
        sample_b.append(float(b))
        runs.append(
            replace(run, all_ratio=all_ratio, disjoint_ratio=disjoint_ratio, rep_index=k)
        )

    p_value = rank_sum_test(sample_a, sample_b)

    ease_common = all_easiness(m_common)
    ease_comp = all_easiness(m_comp)
    common_keys = {edit_key(d) for d in common_muts}
    comp_only_idx = [
        j for j, d in enumerate(comp_muts) if edit_key(d) not in common_keys
    ]
    d_common_idx = [m_common.mutant_ids.index(m) for m in d_common.disjoint]
    d_comp_idx = [m_comp.mutant_ids.index(m) for m in d_comp.disjoint]

    comp_killable = int(m_comp.kills.any(axis=0).sum())
    report = ExperimentReport(
        program=program_path.stem,
        reps=reps,
        base_seed=base_seed,
        test_count=len(tests),
        runs=tuple(runs),
        p_value=float(p_value),
        significant=bool(p_value < SIGNIFICANCE_LEVEL),
        quartiles={
            "all": _quartiles([r.all_ratio for r in runs]),
            "disjoint": _quartiles([r.disjoint_ratio for r in runs]),
        },
        easiness_medians={
            "common_all": _median(ease_common),
            "common_disjoint": _median(ease_common[d_common_idx]),
            "comprehensive_all": _median(ease_comp),
            "comprehensive_disjoint": _median(ease_comp[d_comp_idx]),
            "comprehensive_only": _median(ease_comp[comp_only_idx]),
        },
        counts={
            "common": {
                "mutants": m_common.num_mutants,
                "killable": int(m_common.kills.any(axis=0).sum()),
                "disjoint": len(d_common.disjoint),
            },
            "comprehensive": {
                "mutants": m_comp.num_mutants,
                "killable": comp_killable,
                "disjoint": len(d_comp.disjoint),
            },
        },
        timing=timing_report(
            {"total_steps": m_common.total_steps, "mutants": m_common.num_mutants},
            {"total_steps": m_comp.total_steps, "mutants": m_comp.num_mutants},
        ),
        flags={
            "objective_denominator_empty": comp_killable == 0,
            "comprehensive_disjoint_empty": not d_comp.disjoint,
        },
    )
    return report


# --- report files ---


def write_report_json(report: ExperimentReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def write_report_csv(report: ExperimentReport, path: str | Path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["seed", "tests_kept", "common_score", "objective_all", "objective_disjoint"]
        )
        for r in report.runs:
            writer.writerow(
                [r.seed, len(r.selected), r.common_score, r.all_ratio, r.disjoint_ratio]
            )


def write_quartiles_csv(report: ExperimentReport, path: str | Path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["program", "variant", "q1", "median", "q3"])
        for variant in ("all", "disjoint"):
            q = report.quartiles[variant]
            writer.writerow([report.program, variant, q["q1"], q["median"], q["q3"]])
