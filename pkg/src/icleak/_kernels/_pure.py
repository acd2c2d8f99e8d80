"""Pure-Python kernels.

These define the reference search order.  The compiled core in ``_ccore.pyx``
must visit nodes in exactly the same order and return identical witnesses.
"""

from __future__ import annotations

import itertools
from typing import Sequence

RANK, LEAKAGE, PARETO = 0, 1, 2

# projections: 0 = all columns, 1 = S and U columns, 2 = U columns
_PROJECTIONS = {RANK: (0,), LEAKAGE: (1, 2), PARETO: (0, 1, 2)}


class _Basis:
    __slots__ = ("q", "cols", "rows")

    def __init__(self, q: int, cols: list[int]):
        self.q = q
        self.cols = cols
        self.rows: list[tuple[int, list[int]]] = []

    def insert(self, full_row: list[int]) -> bool:
        q = self.q
        v = [full_row[c] for c in self.cols]
        for piv, b in self.rows:
            f = v[piv]
            if f:
                v = [(a - f * x) % q for a, x in zip(v, b)]
        for piv, x in enumerate(v):
            if x:
                inv = pow(x, -1, q)
                self.rows.append((piv, [(y * inv) % q for y in v]))
                return True
        return False


def fitting_search(q: int, nrows: int, ncols: int, base: Sequence[int],
                   free: Sequence[Sequence[int]], col_class: Sequence[int],
                   objective: int, floor: int = -1):
    """Depth-first search over free-cell assignments in lexicographic order.

    ``objective`` is RANK, LEAKAGE or PARETO.  For the first two the search
    returns ``(best, assignment, nodes)`` and stops once ``best <= floor``.
    For PARETO it returns ``(per_rank_min_leak, per_rank_assignment, nodes)``
    where unattained ranks hold ``-1`` / ``None``.
    """
    proj_cols = [
        list(range(ncols)),
        [c for c in range(ncols) if col_class[c] in (1, 2)],
        [c for c in range(ncols) if col_class[c] == 2],
    ]
    used = _PROJECTIONS[objective]
    bases = {p: _Basis(q, proj_cols[p]) for p in used}
    assign: list[int] = []
    nodes = 0

    big = nrows + ncols + 1
    best = big
    best_assign: list[int] | None = None
    pareto_val = [-1] * (nrows + 1)
    pareto_wit: list[list[int] | None] = [None] * (nrows + 1)

    def bound() -> int:
        if objective == RANK:
            return len(bases[0].rows)
        if objective == LEAKAGE:
            return len(bases[1].rows) - len(bases[2].rows)
        return -1

    def rec(i: int) -> None:
        nonlocal best, best_assign, nodes
        nodes += 1
        if i == nrows:
            if objective == PARETO:
                r = len(bases[0].rows)
                leak = len(bases[1].rows) - len(bases[2].rows)
                if pareto_val[r] < 0 or leak < pareto_val[r]:
                    pareto_val[r] = leak
                    pareto_wit[r] = list(assign)
                return
            val = bound()
            if val < best:
                best = val
                best_assign = list(assign)
            return
        row = list(base[i * ncols:(i + 1) * ncols])
        cells = free[i]
        for vals in itertools.product(range(q), repeat=len(cells)):
            for c, x in zip(cells, vals):
                row[c] = x
            added = [(p, bases[p].insert(row)) for p in used]
            if objective == PARETO or bound() < best:
                assign.extend(vals)
                rec(i + 1)
                del assign[len(assign) - len(vals):]
            for p, a in added:
                if a:
                    bases[p].rows.pop()
            if objective != PARETO and best <= floor:
                return

    rec(0)
    if objective == PARETO:
        return pareto_val, pareto_wit, nodes
    return best, best_assign, nodes


def max_independent_set(nv: int, adj: Sequence[int]):
    """Exact maximum independent set by branch and bound.

    ``adj[v]`` is the neighbour bitset of vertex ``v`` (Python int).  Candidate
    sets are bounded with a greedy clique cover computed in index order.
    Returns ``(size, vertices, nodes)``.
    """
    best = 0
    best_set: list[int] = []
    cur: list[int] = []
    nodes = 0

    def expand(P: int) -> None:
        nonlocal best, best_set, nodes
        nodes += 1
        order: list[int] = []
        bounds: list[int] = []
        U = P
        k = 0
        while U:
            k += 1
            Q = U
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                U &= ~low
                Q &= ~low
                Q &= adj[v]
                order.append(v)
                bounds.append(k)
        for idx in range(len(order) - 1, -1, -1):
            if len(cur) + bounds[idx] <= best:
                return
            v = order[idx]
            cur.append(v)
            newP = P & ~adj[v] & ~(1 << v)
            if newP:
                expand(newP)
            elif len(cur) > best:
                best = len(cur)
                best_set = list(cur)
            cur.pop()
            P &= ~(1 << v)

    if nv:
        expand((1 << nv) - 1)
    return best, sorted(best_set), nodes
