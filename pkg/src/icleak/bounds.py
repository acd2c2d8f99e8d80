"""Broadcast-rate quantities: single-letter beta, the MAIS lower bound, minrank."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .confusion import DEFAULT_VERTEX_CAP, build_confusion_graph, log_q, max_independent_set
from .fitting import SearchLimits, pattern_from_instance, search_min
from .gf import MatrixGF
from .instance import Instance, normalize_singleton_wants

MAIS_MAX_N = 24


@dataclass(frozen=True)
class BetaValue:
    """``n - log_q(alpha)`` kept as the exact pair (n, alpha)."""

    n: int
    alpha: int
    q: int

    @property
    def value(self) -> float:
        return self.n - log_q(self.alpha, self.q)

    @property
    def exact(self) -> int | None:
        """Integer value when alpha is a power of q, else None."""
        a, e = self.alpha, 0
        while a % self.q == 0:
            a //= self.q
            e += 1
        return self.n - e if a == 1 else None

    def __float__(self) -> float:
        return float(self.exact) if self.exact is not None else self.value


def beta_exact(inst: Instance, vertex_cap: int = DEFAULT_VERTEX_CAP) -> tuple[float, int]:
    """Scalar broadcast rate ``n - log_q alpha(Gamma_1)`` and the independence number.

    This is the optimal rate among block-length-1 codes.  It can exceed the
    rate reachable with longer blocks, so it is an upper bound on the limit
    over block lengths that is only certified tight when it meets the MAIS
    bound (see :func:`rate_report`).
    """
    b = beta_value(inst, vertex_cap)
    return float(b), b.alpha


def beta_value(inst: Instance, vertex_cap: int = DEFAULT_VERTEX_CAP) -> BetaValue:
    g = build_confusion_graph(inst, 1, vertex_cap)
    alpha, _ = max_independent_set(g, vertex_cap)
    return BetaValue(inst.n, alpha, inst.q)


def _mais_tables(inst: Instance):
    norm = normalize_singleton_wants(inst)
    # per message: side-information masks of the receivers that want it
    options: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
    for r, (w, a) in enumerate(norm.receivers()):
        if w:
            (j,) = w
            options[j].append((sum(1 << x for x in a), r))
    return norm, options


def mais_bound(inst: Instance) -> tuple[int, list[int]]:
    """Generalized maximum acyclic induced subgraph bound.

    Returns ``(size, order)`` where ``order`` lists 0-based messages
    ``j_1, ..., j_k`` such that each ``j_k`` is wanted by some receiver whose
    side information inside the set lies in ``{j_1, ..., j_{k-1}}``.
    A set qualifies iff some member is wanted by a receiver with no side
    information inside the set and the remainder qualifies.
    """
    n = inst.n
    if n > MAIS_MAX_N:
        raise ValueError(f"mais_bound supports n <= {MAIS_MAX_N}, got {n}")
    if n == 0:
        return 0, []
    _, options = _mais_tables(inst)
    size = 1 << n
    subsets = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int8)
    for j in range(n):
        pop += ((subsets >> j) & 1).astype(np.int8)
    ok = np.zeros(size, dtype=bool)
    ok[0] = True
    for k in range(1, n + 1):
        layer = subsets[pop == k]
        for j in range(n):
            if not options[j]:
                continue
            sel = layer[(layer >> j) & 1 == 1]
            free = np.zeros(sel.size, dtype=bool)
            for mask, _ in options[j]:
                free |= (sel & mask) == 0
            sel = sel[free]
            ok[sel] |= ok[sel ^ (1 << j)]
    qual = np.flatnonzero(ok)
    best = int(pop[qual].max())
    J = int(qual[pop[qual] == best][0])
    order, _ = _peel(J, options)
    return best, order


def _peel(J: int, options) -> tuple[list[int], list[int]]:
    """Order a qualifying set, smallest available message first."""
    order, recv = [], []
    rest = J
    while rest:
        for j in range(len(options)):
            if rest >> j & 1:
                hit = next((r for mask, r in options[j] if rest & mask == 0), None)
                if hit is not None:
                    order.append(j)
                    recv.append(hit)
                    rest &= ~(1 << j)
                    break
        else:
            raise AssertionError("set does not qualify")
    return order, recv


def mais_receivers(inst: Instance, order: Sequence[int]) -> list[int]:
    """Receivers (indices in the singleton-normalized instance) realizing ``order``."""
    _, options = _mais_tables(inst)
    J = sum(1 << j for j in order)
    out = []
    for j in order:
        hit = next((r for mask, r in options[j] if J & mask == 0), None)
        if hit is None:
            raise ValueError(f"message {j + 1} has no receiver with side information outside the set")
        out.append(hit)
        J &= ~(1 << j)
    return out


def check_mais_order(inst: Instance, order: Sequence[int]) -> bool:
    """Replay the decodability condition literally for an ordered set."""
    norm = normalize_singleton_wants(inst)
    J = set(order)
    if len(J) != len(order):
        return False
    for k, j in enumerate(order):
        before = set(order[:k])
        if not any(w == frozenset({j}) and (a & J) <= before for w, a in norm.receivers()):
            return False
    return True


def minrank(inst: Instance, limits: SearchLimits = SearchLimits(),
            floor: int | None = None) -> tuple[int, MatrixGF]:
    """Minimum rank over fitting matrices, with the lexicographically least witness.

    ``floor`` (for example the MAIS bound) only lets the search stop early; the
    result is the same.
    """
    res = search_min(pattern_from_instance(inst), "rank", limits, floor=floor)
    if not res.certified:
        raise ValueError("minrank requires exhaustive mode")
    return res.value, res.witness


@dataclass
class RateReport:
    n: int
    q: int
    beta: BetaValue | None
    mais: int
    mais_order: list[int]
    minrank: int | None = None
    minrank_witness: MatrixGF | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def beta_certified(self) -> bool:
        """True when the single-letter beta provably equals the broadcast rate."""
        b = self.beta
        if b is None:
            return False
        return b.exact is not None and b.exact == self.mais

    def check(self) -> None:
        eps = 1e-9
        if self.beta is not None:
            if self.mais > self.beta.value + eps:
                raise AssertionError("mais exceeds beta")
            if self.minrank is not None and self.beta.value > self.minrank + eps:
                raise AssertionError("beta exceeds minrank")
        elif self.minrank is not None and self.mais > self.minrank:
            raise AssertionError("mais exceeds minrank")


def rate_report(inst: Instance, limits: SearchLimits = SearchLimits(),
                vertex_cap: int = DEFAULT_VERTEX_CAP, with_minrank: bool = True) -> RateReport:
    mais, order = mais_bound(inst)
    notes = []
    beta = None
    if inst.q ** inst.n <= vertex_cap:
        beta = beta_value(inst, vertex_cap)
    else:
        notes.append("beta skipped: vertex cap")
    rep = RateReport(inst.n, inst.q, beta, mais, order, notes=notes)
    if with_minrank:
        rep.minrank, rep.minrank_witness = minrank(inst, limits, floor=mais)
    if beta is not None and not rep.beta_certified:
        rep.notes.append("beta is the block-length-1 rate; longer blocks may do better")
    rep.check()
    return rep
