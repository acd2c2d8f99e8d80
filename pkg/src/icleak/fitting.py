"""Fitting matrices and exact searches over them.

A fitting matrix has one row per (singleton-normalized, non-degenerate)
receiver: a 1 at the wanted message, free entries on the side information,
and 0 elsewhere.  Searches enumerate the free entries in row-major order with
field elements ordered ``0 < 1 < ... < q-1``; the first assignment reaching
the minimum is returned, which makes it the lexicographically least one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Literal, Sequence, Union

from . import _kernels
from .gf import MatrixGF, PrimeField, rank, row_basis, select_columns
from .instance import AdversarySplit, Instance, normalize_singleton_wants

ONE, ZERO, FREE = "1", "0", "?"

Objective = Union[Literal["rank"], AdversarySplit]


class SearchLimitError(ValueError):
    """The search space exceeds the configured exhaustive limit."""


@dataclass(frozen=True)
class FittingPattern:
    field: PrimeField
    cells: tuple[tuple[str, ...], ...]
    cols: int
    receivers: tuple[int, ...] = ()

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def free_cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.cells) for j, c in enumerate(row) if c == FREE]

    def fill(self, values: Sequence[int], cells: Sequence[tuple[int, int]] | None = None) -> MatrixGF:
        """Matrix with ``values`` placed on ``cells`` (default: all free cells) and 0 elsewhere."""
        if cells is None:
            cells = self.free_cells
        if len(values) != len(cells):
            raise ValueError(f"expected {len(cells)} values, got {len(values)}")
        rows = [[1 if c == ONE else 0 for c in row] for row in self.cells]
        for (i, j), v in zip(cells, values):
            rows[i][j] = int(v) % self.q
        return MatrixGF.from_rows(self.field, rows, cols=self.cols)

    def matches(self, m: MatrixGF) -> bool:
        if (m.rows, m.cols) != (self.rows, self.cols) or m.q != self.q:
            return False
        for i, row in enumerate(self.cells):
            for j, c in enumerate(row):
                if c == ONE and m[i, j] != 1 or c == ZERO and m[i, j] != 0:
                    return False
        return True

    def render(self) -> str:
        return "\n".join(" ".join(row) for row in self.cells)


def pattern_from_instance(inst: Instance) -> FittingPattern:
    norm = normalize_singleton_wants(inst)
    cells, owners = [], []
    # map normalized receivers back to the original ones for reporting
    origin = [i for i, w in enumerate(inst.wants) for _ in range(max(len(w), 1))]
    for r, (w, a) in enumerate(norm.receivers()):
        if not w:
            continue
        (target,) = w
        cells.append(tuple(ONE if j == target else FREE if j in a else ZERO
                           for j in range(inst.n)))
        owners.append(origin[r])
    return FittingPattern(inst.field, tuple(cells), inst.n, tuple(owners))


@dataclass(frozen=True)
class SearchLimits:
    """``max_free_cells=None`` means about 2^24 assignments for the field at hand."""

    max_free_cells: int | None = None
    mode: Literal["exhaustive", "randomized"] = "exhaustive"
    seed: int = 0
    iterations: int = 10_000

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "randomized"):
            raise ValueError(f"unknown search mode {self.mode!r}")
        if self.mode == "randomized" and self.iterations < 1:
            raise ValueError("randomized mode needs iterations >= 1")

    def free_cell_limit(self, q: int) -> int:
        if self.max_free_cells is not None:
            return self.max_free_cells
        return int(24 // math.log2(q))


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: MatrixGF
    certified: bool
    nodes: int
    free_cells: int


def _objective_value(m: MatrixGF, objective: Objective) -> int:
    if objective == "rank":
        return rank(m)
    return leakage_objective(m, objective)


def leakage_objective(m: MatrixGF, split: AdversarySplit) -> int:
    """rank of the S-then-U column block minus rank of the U block."""
    _, s, u = split.columns()
    return rank(select_columns(m, s + u)) - rank(select_columns(m, u))


def _kernel_args(pattern: FittingPattern, cells: list[tuple[int, int]]):
    base = [1 if c == ONE else 0 for row in pattern.cells for c in row]
    per_row: list[list[int]] = [[] for _ in range(pattern.rows)]
    for i, j in cells:
        per_row[i].append(j)
    return base, per_row


def _col_class(pattern: FittingPattern, split: AdversarySplit | None) -> list[int]:
    if split is None:
        return [0] * pattern.cols
    return [1 if j in split.sensitive else 2 if j in split.nonsensitive else 0
            for j in range(pattern.cols)]


def search_min(pattern: FittingPattern, objective: Objective = "rank",
               limits: SearchLimits = SearchLimits(), floor: int | None = None) -> SearchResult:
    """Minimize rank (``objective="rank"``) or the linear leakage for a split.

    ``floor`` is a known lower bound on the optimum; the exhaustive search
    stops as soon as it is met.  Both objectives are nondecreasing as rows are
    appended, so partial matrices whose prefix value already reaches the
    incumbent are pruned.
    """
    split = None if objective == "rank" else objective
    if split is not None:
        split.check_partition(pattern.cols)
    cells = pattern.free_cells
    if split is not None:
        # K columns do not enter the objective; the lex-least optimum has them 0
        cells = [(i, j) for i, j in cells if j not in split.known]
    if floor is None:
        floor = 0 if split is not None or pattern.rows == 0 else 1

    if limits.mode == "randomized":
        return _random_search(pattern, objective, cells, limits)

    limit = limits.free_cell_limit(pattern.q)
    if len(cells) > limit:
        raise SearchLimitError(
            f"{len(cells)} free cells exceed the exhaustive limit {limit} "
            "(raise --max-free-cells or use --mode randomized)")
    base, per_row = _kernel_args(pattern, cells)
    kind = _kernels.RANK if split is None else _kernels.LEAKAGE
    value, assign, nodes = _kernels.fitting_search(
        pattern.q, pattern.rows, pattern.cols, base, per_row,
        _col_class(pattern, split), kind, floor)
    witness = pattern.fill(assign, cells)
    return SearchResult(value, witness, True, nodes, len(cells))


def _random_search(pattern: FittingPattern, objective: Objective,
                   cells: list[tuple[int, int]], limits: SearchLimits) -> SearchResult:
    rng = random.Random(limits.seed)
    best, best_m = None, None
    for _ in range(limits.iterations):
        m = pattern.fill([rng.randrange(pattern.q) for _ in cells], cells)
        v = _objective_value(m, objective)
        if best is None or v < best:
            best, best_m = v, m
    return SearchResult(best, best_m, False, limits.iterations, len(cells))


def pareto_sweep(pattern: FittingPattern, split: AdversarySplit,
                 limits: SearchLimits = SearchLimits(),
                 with_witness: bool = False) -> list[tuple]:
    """Minimum leakage among fitting matrices of each attainable rank.

    Returns ``[(rank, leakage), ...]`` in increasing rank order, or
    ``[(rank, leakage, witness), ...]`` with ``with_witness=True``.
    """
    if limits.mode != "exhaustive":
        raise ValueError("pareto_sweep requires exhaustive mode")
    split.check_partition(pattern.cols)
    cells = pattern.free_cells
    limit = limits.free_cell_limit(pattern.q)
    if len(cells) > limit:
        raise SearchLimitError(f"{len(cells)} free cells exceed the exhaustive limit {limit}")
    base, per_row = _kernel_args(pattern, cells)
    vals, wits, _ = _kernels.fitting_search(
        pattern.q, pattern.rows, pattern.cols, base, per_row,
        _col_class(pattern, split), _kernels.PARETO, -1)
    out = []
    for r, (v, w) in enumerate(zip(vals, wits)):
        if v < 0:
            continue
        out.append((r, v, pattern.fill(w, cells)) if with_witness else (r, v))
    return out


def extract_encoder(m: MatrixGF) -> MatrixGF:
    """Encoding matrix made of a maximal set of independent rows of ``m``."""
    return row_basis(m)


def enumerate_fitting_matrices(pattern: FittingPattern):
    """Every fitting matrix of the pattern, in lexicographic assignment order."""
    import itertools

    cells = pattern.free_cells
    for vals in itertools.product(range(pattern.q), repeat=len(cells)):
        yield pattern.fill(vals, cells)
