"""Confusion graphs of index coding instances, stored as Cayley graphs.

A vertex is a message tuple in GF(q)^(n*t), encoded as an integer whose
base-q digits are the coordinates, most significant first.  Coordinate
``i*t + tau`` carries symbol ``tau`` of message ``i``.  Two tuples are adjacent
iff their coordinate-wise difference lies in the connection set, so the graph
is determined by a boolean membership mask over difference vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._kernels import max_independent_set as _mis_kernel
from .gf import PrimeField
from .instance import Instance

DEFAULT_VERTEX_CAP = 2 ** 20
CHROMATIC_CAP = 256
DOT_CAP = 1024


class GraphCapError(ValueError):
    """A graph (or a computation on it) exceeds the configured size cap."""


def _digits(count: int, ncoords: int, q: int) -> np.ndarray:
    """(count, ncoords) array of base-q digits, most significant first."""
    idx = np.arange(count, dtype=np.int64)
    out = np.empty((count, ncoords), dtype=np.int64)
    for c in range(ncoords - 1, -1, -1):
        out[:, c] = idx % q
        idx //= q
    return out


@dataclass(frozen=True, eq=False)
class ConfusionGraph:
    q: int
    n: int
    t: int
    member: np.ndarray
    labels: tuple[tuple[int, int], ...]

    @property
    def ncoords(self) -> int:
        return len(self.labels)

    @property
    def vertex_count(self) -> int:
        return self.q ** self.ncoords

    @property
    def connection_set(self) -> frozenset[int]:
        return frozenset(int(d) for d in np.flatnonzero(self.member))

    @property
    def degree(self) -> int:
        return int(self.member.sum())

    @property
    def edge_count(self) -> int:
        return self.degree * self.vertex_count // 2

    def digits(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.ncoords):
            out.append(v % self.q)
            v //= self.q
        return tuple(reversed(out))

    def vertex(self, digits: Sequence[int]) -> int:
        v = 0
        for x in digits:
            v = v * self.q + int(x) % self.q
        return v

    def sub(self, x: int, z: int) -> int:
        if self.q == 2:
            return x ^ z
        return self.vertex(a - b for a, b in zip(self.digits(x), self.digits(z)))

    def add(self, x: int, d: int) -> int:
        if self.q == 2:
            return x ^ d
        return self.vertex(a + b for a, b in zip(self.digits(x), self.digits(d)))

    def adjacent(self, x: int, z: int) -> bool:
        return bool(self.member[self.sub(x, z)])

    @cached_property
    def _conn(self) -> np.ndarray:
        return np.flatnonzero(self.member)

    @cached_property
    def _conn_digits(self) -> np.ndarray:
        return _digits(self.vertex_count, self.ncoords, self.q)[self._conn]

    def neighbors(self, x: int) -> np.ndarray:
        """Sorted neighbour array of ``x`` (translate of the connection set)."""
        if self.q == 2:
            return np.sort(self._conn ^ x)
        dx = np.array(self.digits(x), dtype=np.int64)
        w = self.q ** np.arange(self.ncoords - 1, -1, -1, dtype=np.int64)
        return np.sort(((self._conn_digits + dx) % self.q) @ w)

    def label(self, v: int) -> str:
        """Base-q digits of ``v`` grouped per message (``.`` between messages when t > 1)."""
        digs = self.digits(v)
        if self.t == 1:
            return "".join(map(str, digs))
        groups: dict[int, list[str]] = {}
        for (msg, _), x in zip(self.labels, digs):
            groups.setdefault(msg, []).append(str(x))
        return ".".join("".join(g) for _, g in sorted(groups.items()))

    def canonical(self) -> "ConfusionGraph":
        """Reorder coordinates so labels are sorted (message-major)."""
        perm = sorted(range(self.ncoords), key=lambda c: self.labels[c])
        if perm == list(range(self.ncoords)):
            return self
        digs = _digits(self.vertex_count, self.ncoords, self.q)
        w = self.q ** np.arange(self.ncoords - 1, -1, -1, dtype=np.int64)
        new_index = digs[:, perm] @ w
        member = np.zeros_like(self.member)
        member[new_index] = self.member
        member.flags.writeable = False
        return ConfusionGraph(self.q, self.n, self.t, member,
                              tuple(self.labels[c] for c in perm))

    def __repr__(self) -> str:
        return (f"ConfusionGraph(q={self.q}, n={self.n}, t={self.t}, "
                f"|V|={self.vertex_count}, degree={self.degree})")


def _freeze(member: np.ndarray) -> np.ndarray:
    member.flags.writeable = False
    return member


def build_confusion_graph(inst: Instance, t: int = 1,
                          vertex_cap: int = DEFAULT_VERTEX_CAP) -> ConfusionGraph:
    """Confusion graph of ``inst`` for block length ``t``."""
    if t < 1:
        raise ValueError("block length t must be >= 1")
    q, N = inst.q, inst.n * t
    V = q ** N
    if V > vertex_cap:
        raise GraphCapError(f"q^(n*t) = {V} exceeds the vertex cap {vertex_cap}")
    digs = _digits(V, N, q)
    nonzero = digs != 0
    member = np.zeros(V, dtype=bool)
    for w, a in inst.receivers():
        if not w:
            continue
        wc = [i * t + tau for i in sorted(w) for tau in range(t)]
        ac = [i * t + tau for i in sorted(a) for tau in range(t)]
        hit = nonzero[:, wc].any(axis=1)
        if ac:
            hit &= ~nonzero[:, ac].any(axis=1)
        member |= hit
    labels = tuple((i, tau) for i in range(inst.n) for tau in range(t))
    return ConfusionGraph(q, inst.n, t, _freeze(member), labels)


def confusable_at(inst: Instance, t: int, x: Sequence[int], z: Sequence[int]) -> int | None:
    """First receiver at which message tuples ``x`` and ``z`` are confusable.

    Works straight from the receiver definitions, independently of any graph.
    Tuples are flat coordinate sequences of length ``n*t``.
    """
    for i, (w, a) in enumerate(inst.receivers()):
        differs = any(x[j * t + tau] != z[j * t + tau] for j in w for tau in range(t))
        same = all(x[j * t + tau] == z[j * t + tau] for j in a for tau in range(t))
        if differs and same:
            return i
    return None


def edgeless_graph(q: int, ncoords: int) -> ConfusionGraph:
    return build_confusion_graph(Instance(ncoords, (), (), PrimeField(q)))


def complete_graph(q: int) -> ConfusionGraph:
    """K_q as the confusion graph of one message wanted without side information."""
    return build_confusion_graph(Instance.build(1, [[1]], [[]], q=q))


def is_independent_set(g: ConfusionGraph, verts: Iterable[int]) -> bool:
    verts = sorted(set(int(v) for v in verts))
    for v in verts:
        if not 0 <= v < g.vertex_count:
            raise ValueError(f"vertex {v} out of range")
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if g.adjacent(verts[a], verts[b]):
                return False
    return True


def _bitset(indices: np.ndarray, size: int) -> int:
    row = np.zeros(size, dtype=bool)
    row[indices] = True
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def max_independent_set(g: ConfusionGraph,
                        vertex_cap: int = DEFAULT_VERTEX_CAP) -> tuple[int, list[int]]:
    """Exact independence number with a witness set.

    Some maximum independent set of a vertex-transitive graph contains vertex
    0, so the search starts from 0 and branches only over its non-neighbours.
    """
    V = g.vertex_count
    if V > vertex_cap:
        raise GraphCapError(f"{V} vertices exceeds the vertex cap {vertex_cap}")
    cand = np.flatnonzero(~g.member)
    cand = cand[cand != 0]
    if cand.size == 0:
        return 1, [0]
    pos = np.full(V, -1, dtype=np.int64)
    pos[cand] = np.arange(cand.size)
    local_nbrs = []
    for v in cand:
        nb = pos[g.neighbors(int(v))]
        local_nbrs.append(nb[nb >= 0])
    degree = np.array([len(nb) for nb in local_nbrs])
    # descending degree inside the candidate set, ties by vertex index
    order = sorted(range(cand.size), key=lambda i: (-degree[i], i))
    relabel = np.empty(cand.size, dtype=np.int64)
    relabel[order] = np.arange(cand.size)
    adj = [0] * cand.size
    for i in range(cand.size):
        adj[relabel[i]] = _bitset(relabel[local_nbrs[i]], cand.size)
    size, local, _ = _mis_kernel(cand.size, adj)
    witness = sorted([0] + [int(cand[order[j]]) for j in local])
    return size + 1, witness


def fractional_chromatic(g: ConfusionGraph, alpha: int | None = None) -> Fraction:
    """|V| / alpha, exact for vertex-transitive graphs."""
    if alpha is None:
        alpha, _ = max_independent_set(g)
    return Fraction(g.vertex_count, alpha)


def _adjacency_bitsets(g: ConfusionGraph) -> list[int]:
    V = g.vertex_count
    return [_bitset(g.neighbors(v), V) for v in range(V)]


def _greedy_clique(adj: list[int], V: int) -> int:
    best = 1 if V else 0
    for start in range(V):
        cand, size = adj[start], 1
        while cand:
            v = (cand & -cand).bit_length() - 1
            size += 1
            cand &= adj[v]
        best = max(best, size)
    return best


def _dsatur_colorable(adj: list[int], V: int, k: int) -> bool:
    colors = [-1] * V
    forbidden = [0] * V  # bitmask of colours used by neighbours

    def pick() -> int:
        best_v, best_key = -1, None
        for v in range(V):
            if colors[v] < 0:
                key = (forbidden[v].bit_count(), adj[v].bit_count())
                if best_key is None or key > best_key:
                    best_v, best_key = v, key
        return best_v

    def rec(done: int, used: int) -> bool:
        if done == V:
            return True
        v = pick()
        limit = min(used + 1, k)
        for c in range(limit):
            if forbidden[v] >> c & 1:
                continue
            colors[v] = c
            touched = []
            nb = adj[v]
            while nb:
                low = nb & -nb
                u = low.bit_length() - 1
                nb ^= low
                if colors[u] < 0 and not forbidden[u] >> c & 1:
                    forbidden[u] |= 1 << c
                    touched.append(u)
            if rec(done + 1, max(used, c + 1)):
                return True
            for u in touched:
                forbidden[u] &= ~(1 << c)
            colors[v] = -1
        return False

    return rec(0, 0)


def chromatic_number(g: ConfusionGraph, cap: int = CHROMATIC_CAP) -> int:
    """Exact chromatic number by DSATUR backtracking on increasing k."""
    V = g.vertex_count
    if V > cap:
        raise GraphCapError(f"{V} vertices exceeds the chromatic-number cap {cap}")
    if g.degree == 0:
        return 1
    adj = _adjacency_bitsets(g)
    alpha, _ = max_independent_set(g)
    k = max(_greedy_clique(adj, V), -(-V // alpha))
    while not _dsatur_colorable(adj, V, k):
        k += 1
    return k


def or_product(g1: ConfusionGraph, g2: ConfusionGraph) -> ConfusionGraph:
    """Disjunctive (OR) product as a Cayley graph on the product group.

    ``(d1, d2)`` is a connection element iff ``d1`` is one for ``g1`` or ``d2``
    is one for ``g2``.  When both factors describe the same messages the
    second factor's symbols are numbered after the first's.
    """
    if g1.q != g2.q:
        raise ValueError("or_product: field mismatch")
    m = np.logical_or.outer(g1.member, g2.member).reshape(-1)
    if g1.n == g2.n:
        labels = g1.labels + tuple((i, tau + g1.t) for i, tau in g2.labels)
        n, t = g1.n, g1.t + g2.t
    else:
        labels = (tuple((i, tau) for i, tau in g1.labels)
                  + tuple((i + g1.n, tau) for i, tau in g2.labels))
        n, t = g1.n + g2.n, max(g1.t, g2.t)
    return ConfusionGraph(g1.q, n, t, _freeze(m), labels)


def to_dot(g: ConfusionGraph, name: str = "confusion") -> str:
    V = g.vertex_count
    if V > DOT_CAP:
        raise GraphCapError(f"{V} vertices exceeds the DOT cap {DOT_CAP}")
    lines = [f"graph {name} {{"]
    for v in range(V):
        lines.append(f'  v{v} [label="{g.label(v)}"];')
    for v in range(V):
        for u in g.neighbors(v):
            if v < u:
                lines.append(f"  v{v} -- v{int(u)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def log_q(x: int | Fraction, q: int) -> float:
    return math.log(x) / math.log(q)
