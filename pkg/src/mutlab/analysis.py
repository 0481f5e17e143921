"""Kill-matrix analytics: scores, easiness, and disjoint mutants.

The disjoint computation is the greedy approximation of the minimum mutant
set (the exact problem is NP-complete): drop live mutants, collapse mutants
with identical kill patterns, then repeatedly select the mutant whose killers
are contained in the most other mutants' killer sets, remove everything it
subsumes, and repeat until nothing is left. Ties break on the lowest mutant
id, and the duplicate representative is the lowest id of its pattern group,
so results are deterministic. Duplicates here are relative to the test suite
(equal kill patterns), not semantic equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .harness import KillMatrix
from .minilang.errors import MiniLangError


class LiveMutantError(MiniLangError):
    """Raised when a subsumption query targets a live mutant."""


@dataclass(frozen=True)
class DisjointResult:
    """Output of the greedy disjoint-mutant selection."""

    disjoint: tuple[int, ...]  # D, in selection order
    subsumed: dict[int, tuple[int, ...]]  # selected id -> ids removed with it
    live: tuple[int, ...]
    duplicates: dict[int, int]  # duplicate id -> representative id

    def covers(self, matrix: KillMatrix) -> bool:
        """Every killable mutant has a subsumer in D (killer-set containment)."""
        for m in matrix.mutant_ids:
            col = matrix.column(m)
            if not col.any():
                continue
            if not any(
                not (matrix.column(d) & ~col).any() for d in self.disjoint
            ):
                return False
        return True


@dataclass(frozen=True)
class ScoreSummary:
    total: int
    killable: int
    live: int
    score: float
    disjoint_score: float
    empty: bool  # no mutants at all: score pinned to 1.0 by convention


def _subset_rows(matrix: KillMatrix, tests) -> np.ndarray:
    if tests is None:
        return np.ones(matrix.num_tests, dtype=bool)
    rows = np.zeros(matrix.num_tests, dtype=bool)
    for i in tests:
        if not 0 <= i < matrix.num_tests:
            raise IndexError(f"test index {i} out of range")
        rows[i] = True
    return rows


def mutation_score(matrix: KillMatrix, tests=None) -> float:
    """Killed mutants over total mutants for a test subset (default: all).

    An empty mutant set scores 1.0 by convention; ScoreSummary carries the
    ``empty`` flag for report layers.
    """
    if matrix.num_mutants == 0:
        return 1.0
    rows = _subset_rows(matrix, tests)
    killed = int(matrix.kills[rows].any(axis=0).sum()) if rows.any() else 0
    return killed / matrix.num_mutants


def remove_live(matrix: KillMatrix) -> KillMatrix:
    """Drop all-zero columns, preserving survivor order."""
    keep = [m for j, m in enumerate(matrix.mutant_ids) if matrix.kills[:, j].any()]
    return matrix.select_mutants(tuple(keep))


def remove_duplicates(matrix: KillMatrix) -> tuple[KillMatrix, dict[int, int]]:
    """Collapse identical kill patterns onto the lowest mutant id."""
    representative: dict[bytes, int] = {}
    keep = []
    mapping: dict[int, int] = {}
    for j, m in enumerate(matrix.mutant_ids):
        key = np.packbits(matrix.kills[:, j]).tobytes()
        if key in representative:
            mapping[m] = representative[key]
        else:
            representative[key] = m
            keep.append(m)
    return matrix.select_mutants(tuple(keep)), mapping


def subsumed_set(matrix: KillMatrix, mutant_id: int) -> set[int]:
    """All mutants killed by every test that kills ``mutant_id`` (inclusive)."""
    col = matrix.column(mutant_id)
    if not col.any():
        raise LiveMutantError(f"mutant {mutant_id} is live")
    hit = matrix.kills[col].all(axis=0)
    return {m for j, m in enumerate(matrix.mutant_ids) if hit[j]}


def disjoint_mutants(matrix: KillMatrix) -> DisjointResult:
    """Greedy disjoint mutant set from a kill matrix."""
    live = tuple(
        m for j, m in enumerate(matrix.mutant_ids) if not matrix.kills[:, j].any()
    )
    work = remove_live(matrix)
    work, duplicates = remove_duplicates(work)

    remaining = list(work.mutant_ids)
    disjoint: list[int] = []
    subsumed: dict[int, tuple[int, ...]] = {}
    while remaining:
        cols = np.stack([work.column(m) for m in remaining], axis=1)
        best_id = None
        best_sub: np.ndarray | None = None
        best_size = 0
        for idx, m in enumerate(remaining):
            sub = cols[cols[:, idx]].all(axis=0)
            size = int(sub.sum())
            if size > best_size:  # strict: first max wins -> lowest id on ties
                best_size = size
                best_id = m
                best_sub = sub
        assert best_id is not None and best_sub is not None
        removed = tuple(m for i, m in enumerate(remaining) if best_sub[i])
        disjoint.append(best_id)
        subsumed[best_id] = removed
        remaining = [m for i, m in enumerate(remaining) if not best_sub[i]]
    return DisjointResult(tuple(disjoint), subsumed, live, duplicates)


def easiness(matrix: KillMatrix, mutant_id: int) -> float:
    """Fraction of all test cases that kill the mutant; 0.0 iff live."""
    if matrix.num_tests < 1:
        raise ValueError("easiness needs at least one test")
    return int(matrix.column(mutant_id).sum()) / matrix.num_tests


def all_easiness(matrix: KillMatrix) -> np.ndarray:
    if matrix.num_tests < 1:
        raise ValueError("easiness needs at least one test")
    return matrix.kills.sum(axis=0) / matrix.num_tests


def score_summary(matrix: KillMatrix, tests=None) -> ScoreSummary:
    total = matrix.num_mutants
    killable = int(matrix.kills.any(axis=0).sum())
    result = disjoint_mutants(matrix)
    if result.disjoint:
        rows = _subset_rows(matrix, tests)
        killed_d = sum(
            1 for d in result.disjoint if rows.any() and matrix.column(d)[rows].any()
        )
        disjoint_score = killed_d / len(result.disjoint)
    else:
        disjoint_score = 1.0
    return ScoreSummary(
        total=total,
        killable=killable,
        live=total - killable,
        score=mutation_score(matrix, tests),
        disjoint_score=disjoint_score,
        empty=total == 0,
    )


def write_disjoint_json(result: DisjointResult, path: str | Path) -> None:
    payload = {
        "D": list(result.disjoint),
        "subsumed": {str(k): list(v) for k, v in result.subsumed.items()},
        "live": list(result.live),
        "duplicates": {str(k): v for k, v in result.duplicates.items()},
    }
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
