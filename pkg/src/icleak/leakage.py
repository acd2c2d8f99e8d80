"""Exact leakage of index codes against a guessing adversary.

The adversary knows the messages in K, wants to guess the sensitive messages
S, and is indifferent to the non-sensitive messages U.  Leakage is measured in
q-ary units as the log-ratio of its best single-guess success probability
after and before seeing the codeword.  All probabilities are exact fractions;
logarithms are taken only when a real value is requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .bounds import mais_bound
from .confusion import (DEFAULT_VERTEX_CAP, GraphCapError, _adjacency_bitsets, _digits,
                        build_confusion_graph, log_q, max_independent_set)
from .gf import MatrixGF, rank, select_columns
from .instance import (AdversarySplit, Instance, extend_with_adversary_receiver,
                       induce_subproblem)

ORACLE_CAP = 2 ** 20
EXHAUSTIVE_CAP = 64


class EncoderError(ValueError):
    """Malformed encoder table or kernel."""


class DecodeError(ValueError):
    """Decoding failed: the preimage is ambiguous or empty."""


# --- encoders -----------------------------------------------------------------

def _coords(msgs, t: int) -> list[int]:
    return [i * t + tau for i in sorted(msgs) for tau in range(t)]


@dataclass(frozen=True, eq=False)
class EncoderTable:
    """An encoder over all tuples of GF(q)^(n*t), indexed as confusion-graph vertices.

    Deterministic encoders store one codeword id per tuple; stochastic ones
    store, per tuple, a mapping from codeword id to a rational probability.
    """

    q: int
    n: int
    t: int
    M: int
    codewords: np.ndarray | None = None
    kernel: tuple[Mapping[int, Fraction], ...] | None = None

    def __post_init__(self) -> None:
        V = self.q ** (self.n * self.t)
        if (self.codewords is None) == (self.kernel is None):
            raise EncoderError("exactly one of codewords / kernel must be given")
        if self.M < 1:
            raise EncoderError("M must be >= 1")
        if self.codewords is not None:
            cw = self.codewords
            if cw.shape != (V,):
                raise EncoderError(f"expected {V} codewords, got {cw.shape[0]}")
            if V and (cw.min() < 0 or cw.max() >= self.M):
                raise EncoderError(f"codeword ids must lie in [0, {self.M})")
        else:
            if len(self.kernel) != V:
                raise EncoderError(f"expected {V} kernel rows, got {len(self.kernel)}")
            for x, row in enumerate(self.kernel):
                if any(not 0 <= y < self.M for y in row):
                    raise EncoderError(f"row {x}: codeword id outside [0, {self.M})")
                if any(w < 0 for w in row.values()):
                    raise EncoderError(f"row {x}: negative weight")
                if sum(row.values(), Fraction(0)) != 1:
                    raise EncoderError(f"row {x}: weights do not sum to 1")

    @property
    def kind(self) -> Literal["deterministic", "stochastic"]:
        return "deterministic" if self.codewords is not None else "stochastic"

    @property
    def tuples(self) -> int:
        return self.q ** (self.n * self.t)

    @classmethod
    def deterministic(cls, q: int, n: int, t: int, codewords: Sequence[int],
                      M: int | None = None) -> "EncoderTable":
        cw = np.asarray(codewords, dtype=np.int64).copy()
        cw.flags.writeable = False
        if M is None:
            M = int(cw.max()) + 1 if cw.size else 1
        return cls(q, n, t, M, codewords=cw)

    @classmethod
    def stochastic(cls, q: int, n: int, t: int, rows: Sequence[Mapping[int, Any]],
                   M: int | None = None) -> "EncoderTable":
        kernel = tuple({int(y): Fraction(w) for y, w in row.items() if Fraction(w) != 0}
                       for row in rows)
        if M is None:
            M = max((y for row in kernel for y in row), default=0) + 1
        return cls(q, n, t, M, kernel=kernel)

    @classmethod
    def from_function(cls, q: int, n: int, t: int,
                      fn: Callable[[tuple[int, ...]], int], M: int | None = None) -> "EncoderTable":
        digs = _digits(q ** (n * t), n * t, q)
        return cls.deterministic(q, n, t, [fn(tuple(int(v) for v in d)) for d in digs], M)

    @classmethod
    def constant(cls, q: int, n: int, t: int = 1) -> "EncoderTable":
        return cls.deterministic(q, n, t, np.zeros(q ** (n * t), dtype=np.int64), 1)

    @classmethod
    def from_linear(cls, E: MatrixGF) -> "EncoderTable":
        """Scalar linear code ``y = E x``; the codeword id is ``y`` read in base q."""
        q, n = E.q, E.cols
        if q ** n > ORACLE_CAP:
            raise GraphCapError(f"q^n = {q ** n} exceeds the tuple cap {ORACLE_CAP}")
        digs = _digits(q ** n, n, q)
        if E.rows == 0:
            return cls.constant(q, n)
        mat = np.array(E.to_rows(), dtype=np.int64)
        ys = (digs @ mat.T) % q
        weights = q ** np.arange(E.rows - 1, -1, -1, dtype=np.int64)
        return cls.deterministic(q, n, 1, ys @ weights, q ** E.rows)

    def support(self, x: int) -> list[int]:
        if self.codewords is not None:
            return [int(self.codewords[x])]
        return sorted(self.kernel[x])

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {"kind": self.kind, "q": self.q, "n": self.n, "t": self.t, "M": self.M}
        if self.codewords is not None:
            doc["codewords"] = [int(c) for c in self.codewords]
        else:
            doc["entries"] = [[x, y, str(w.numerator), str(w.denominator)]
                              for x, row in enumerate(self.kernel) for y, w in sorted(row.items())]
        return doc

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "EncoderTable":
        try:
            q, n, t, M = (int(doc[k]) for k in ("q", "n", "t", "M"))
            if doc["kind"] == "deterministic":
                return cls.deterministic(q, n, t, doc["codewords"], M)
            if doc["kind"] == "stochastic":
                rows: list[dict[int, Fraction]] = [{} for _ in range(q ** (n * t))]
                for x, y, num, den in doc["entries"]:
                    rows[int(x)][int(y)] = Fraction(int(num), int(den))
                return cls.stochastic(q, n, t, rows, M)
        except (KeyError, TypeError, IndexError) as exc:
            raise EncoderError(f"malformed encoder document: {exc}") from exc
        raise EncoderError(f"unknown encoder kind {doc.get('kind')!r}")


# --- leakage values -----------------------------------------------------------

@dataclass(frozen=True)
class LeakageResult:
    qL: Fraction
    t: int
    q: int
    method: Literal["formula", "oracle"]

    def __post_init__(self) -> None:
        if self.qL < 1:
            raise ValueError(f"q^L = {self.qL} < 1")

    @property
    def L(self) -> float:
        return log_q(self.qL, self.q)

    @property
    def rate(self) -> float:
        return self.L / self.t

    @property
    def bits(self) -> float:
        return self.L * math.log2(self.q)


def prior_success(split: AdversarySplit, q: int, t: int = 1) -> Fraction:
    """Best blind guess of the sensitive messages: ``q^(-t*s)``."""
    return Fraction(1, q ** (t * split.s))


def _check_encoder(enc: EncoderTable, split: AdversarySplit) -> None:
    split.check_partition(enc.n)
    if enc.tuples > ORACLE_CAP:
        raise GraphCapError(f"{enc.tuples} tuples exceed the oracle cap {ORACLE_CAP}")


def _keys(enc: EncoderTable, msgs) -> np.ndarray:
    cols = _coords(msgs, enc.t)
    digs = _digits(enc.tuples, enc.n * enc.t, enc.q)[:, cols]
    return digs @ (enc.q ** np.arange(len(cols) - 1, -1, -1, dtype=np.int64))


def _joint(enc: EncoderTable, split: AdversarySplit):
    """Joint counts N(y, x_K, x_S) summed over x_U, as {(y, xK): {xS: N}}.

    Deterministic encoders return integer counts, stochastic ones fractions.
    """
    kK, kS = _keys(enc, split.known), _keys(enc, split.sensitive)
    out: dict[tuple[int, int], dict[int, Any]] = {}
    if enc.codewords is not None:
        QK, QS = enc.q ** (enc.t * split.k), enc.q ** (enc.t * split.s)
        key = (enc.codewords * QK + kK) * QS + kS
        uniq, counts = np.unique(key, return_counts=True)
        for k, c in zip(uniq.tolist(), counts.tolist()):
            out.setdefault((k // QS // QK, k // QS % QK), {})[k % QS] = c
        return out
    for x, row in enumerate(enc.kernel):
        for y, w in row.items():
            cell = out.setdefault((y, int(kK[x])), {})
            cell[int(kS[x])] = cell.get(int(kS[x]), 0) + w
    return out


def _max_sum(enc: EncoderTable, split: AdversarySplit) -> Fraction:
    return sum((Fraction(max(cell.values())) for cell in _joint(enc, split).values()), Fraction(0))


def posterior_success(enc: EncoderTable, split: AdversarySplit) -> Fraction:
    """Best single-guess success probability for X_S given (X_K, Y)."""
    _check_encoder(enc, split)
    return _max_sum(enc, split) / enc.tuples


def oracle_leakage(enc: EncoderTable, split: AdversarySplit) -> LeakageResult:
    """Leakage computed from the full joint distribution of (X_K, X_S, Y)."""
    _check_encoder(enc, split)
    qL = _max_sum(enc, split) / enc.q ** ((split.k + split.u) * enc.t)
    return LeakageResult(qL, enc.t, enc.q, "oracle")


def linear_leakage(E: MatrixGF, split: AdversarySplit, t: int = 1) -> LeakageResult:
    """Closed form for ``y = E x``: rank of the S and U columns minus rank of the U columns."""
    if t != 1:
        raise NotImplementedError("only scalar (t = 1) linear codes are supported")
    n = split.k + split.s + split.u
    if E.cols != n * t:
        raise ValueError(f"encoder has {E.cols} columns, expected {n * t}")
    split.check_partition(n)
    _, s, u = split.columns()
    L = rank(select_columns(E, s + u)) - rank(select_columns(E, u))
    return LeakageResult(Fraction(E.q ** L), t, E.q, "formula")


def mutual_info_leakage(enc: EncoderTable, split: AdversarySplit) -> float:
    """I(X_S; Y | X_K) in q-ary units for uniform independent messages."""
    _check_encoder(enc, split)
    scale = enc.q ** (enc.t * split.s)
    total = 0.0
    for cell in _joint(enc, split).values():
        row_sum = sum(cell.values())
        for c in cell.values():
            if c:
                total += float(c) * math.log(float(Fraction(c * scale) / row_sum))
    return total / enc.tuples / math.log(enc.q)


# --- validity and decoding -----------------------------------------------------

@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    pair: tuple[int, int] | None = None
    receiver: int | None = None

    def __bool__(self) -> bool:
        return self.valid


def _classes(enc: EncoderTable) -> list[np.ndarray]:
    if enc.codewords is not None:
        order = np.argsort(enc.codewords, kind="stable")
        cw = enc.codewords[order]
        cuts = np.flatnonzero(np.diff(cw)) + 1
        return [c for c in np.split(order, cuts) if c.size > 1]
    groups: dict[int, list[int]] = {}
    for x, row in enumerate(enc.kernel):
        for y in row:
            groups.setdefault(y, []).append(x)
    return [np.array(v, dtype=np.int64) for _, v in sorted(groups.items()) if len(v) > 1]


def validate_encoder(enc: EncoderTable, inst: Instance,
                     vertex_cap: int = DEFAULT_VERTEX_CAP) -> ValidationResult:
    """Check that no codeword (support) contains two confusable tuples.

    On failure, returns the lexicographically first offending pair ``(x, z)``
    with ``x < z`` and the first receiver at which they are confusable.
    """
    if (enc.q, enc.n) != (inst.q, inst.n):
        raise ValueError("encoder and instance disagree on q or n")
    g = build_confusion_graph(inst, enc.t, vertex_cap)
    N, q = enc.n * enc.t, enc.q
    digs = _digits(enc.tuples, N, q)
    weights = q ** np.arange(N - 1, -1, -1, dtype=np.int64)
    best: tuple[int, int] | None = None
    for cls in _classes(enc):
        cd = digs[cls]
        chunk = max(1, (1 << 22) // (cls.size * max(N, 1)))
        for start in range(0, cls.size, chunk):
            a = cd[start:start + chunk]
            diff = ((a[:, None, :] - cd[None, :, :]) % q) @ weights
            hit = g.member[diff]
            xs, zs = cls[start:start + chunk][:, None], cls[None, :]
            hit &= xs < zs
            if hit.any():
                i, j = np.argwhere(hit).T
                cand = min(zip(cls[start + i].tolist(), cls[j].tolist()))
                if best is None or cand < best:
                    best = cand
                break
    if best is None:
        return ValidationResult(True)
    from .confusion import confusable_at

    x, z = best
    recv = confusable_at(inst, enc.t, digs[x].tolist(), digs[z].tolist())
    return ValidationResult(False, best, recv)


def decode_receiver(enc: EncoderTable, inst: Instance, i: int, y: int,
                    sideinfo: Mapping[int, Any] | Sequence[Any]) -> tuple[int, ...]:
    """Recover receiver ``i``'s wanted messages from ``y`` and its side information.

    ``sideinfo`` maps each 0-based message in ``A_i`` to its value (a tuple of
    ``t`` symbols when ``t > 1``), or lists the values in message order.
    Returns the wanted values, message-major.
    """
    w, a = inst.receivers()[i]
    if not w:
        return ()
    a_sorted = sorted(a)
    if not isinstance(sideinfo, Mapping):
        sideinfo = dict(zip(a_sorted, sideinfo))
    if set(sideinfo) != set(a_sorted):
        raise DecodeError(f"side information must cover exactly messages {[j + 1 for j in a_sorted]}")
    t, N = enc.t, enc.n * enc.t
    want_vals = []
    for j in a_sorted:
        v = sideinfo[j]
        want_vals.extend([v] if t == 1 and not isinstance(v, (tuple, list)) else list(v))
    digs = _digits(enc.tuples, N, enc.q)
    if enc.codewords is not None:
        pre = np.flatnonzero(enc.codewords == y)
    else:
        pre = np.array([x for x, row in enumerate(enc.kernel) if y in row], dtype=np.int64)
    ac, wc = _coords(a, t), _coords(w, t)
    sel = digs[pre]
    if ac:
        sel = sel[(sel[:, ac] == np.array(want_vals) % enc.q).all(axis=1)]
    found = {tuple(int(v) for v in row) for row in sel[:, wc]}
    if not found:
        raise DecodeError("no tuple matches the codeword and side information")
    if len(found) > 1:
        raise DecodeError(f"ambiguous: {len(found)} candidate values (code is not valid)")
    return found.pop()


# --- converse bound -----------------------------------------------------------

@dataclass(frozen=True)
class Theorem2Bound:
    """Lower bound ``beta(extended subproblem on S and U) - u``.

    ``alpha`` is the independence number of the extended subproblem's
    block-length-1 confusion graph (None when it exceeded the vertex cap).
    ``value`` bounds the leakage of every block-length-1 code.  It bounds the
    asymptotic optimum too when ``beta_certified`` is set; ``mais_value`` is
    always such a bound.
    """

    value: float
    q: int
    s: int
    u: int
    alpha: int | None
    mais: int
    method: Literal["confusion-graph", "mais"]
    beta_certified: bool

    @property
    def mais_value(self) -> int:
        return self.mais - self.u

    @property
    def qL_floor(self) -> Fraction:
        """Exact lower bound on q^L for block-length-1 codes."""
        if self.alpha is None:
            return Fraction(self.q ** self.mais_value)
        return Fraction(self.q ** self.s, self.alpha)

    @property
    def exact(self) -> int | None:
        f = self.qL_floor
        if f.denominator != 1:
            return None
        e, v = 0, f.numerator
        while v % self.q == 0:
            v //= self.q
            e += 1
        return e if v == 1 else None


def theorem2_lower_bound(inst: Instance, split: AdversarySplit,
                         vertex_cap: int = DEFAULT_VERTEX_CAP) -> Theorem2Bound:
    split.check_partition(inst.n)
    ext = extend_with_adversary_receiver(inst, split)
    sub, _ = induce_subproblem(ext, split.sensitive | split.nonsensitive)
    mais, _ = mais_bound(sub)
    s, u, q = split.s, split.u, inst.q
    if q ** sub.n <= vertex_cap:
        alpha, _ = max_independent_set(build_confusion_graph(sub, 1, vertex_cap), vertex_cap)
        value = s - log_q(alpha, q)
        certified = q ** (sub.n - mais) == alpha
        if certified:
            value = float(mais - u)
        bound = Theorem2Bound(value, q, s, u, alpha, mais, "confusion-graph", certified)
    else:
        bound = Theorem2Bound(float(mais - u), q, s, u, None, mais, "mais", True)
    if bound.value < -1e-12 or bound.mais_value < 0:
        raise AssertionError("converse bound is negative")
    return bound


# --- exhaustive search over deterministic block-length-1 codes -------------------

@dataclass(frozen=True)
class ExhaustiveResult:
    qL: Fraction
    witness: EncoderTable
    nodes: int
    q: int

    @property
    def L(self) -> float:
        return log_q(self.qL, self.q)


def _partition_setup(inst: Instance, cap: int):
    V = inst.q ** inst.n
    if V > cap:
        raise GraphCapError(f"q^n = {V} exceeds the exhaustive cap {cap}")
    return V, _adjacency_bitsets(build_confusion_graph(inst, 1))


def iter_valid_partitions(inst: Instance, max_classes: int | None = None,
                          cap: int = EXHAUSTIVE_CAP) -> Iterator[list[int]]:
    """Every partition of the tuples into independent sets, as class labels.

    Labels follow restricted growth (vertex 0 in class 0, each new class gets
    the next label), so each partition appears exactly once.
    """
    V, adj = _partition_setup(inst, cap)
    labels = [0] * V
    bits: list[int] = []

    def rec(v: int) -> Iterator[list[int]]:
        if v == V:
            yield list(labels)
            return
        for c in range(len(bits)):
            if not bits[c] & adj[v]:
                bits[c] |= 1 << v
                labels[v] = c
                yield from rec(v + 1)
                bits[c] &= ~(1 << v)
        if max_classes is None or len(bits) < max_classes:
            bits.append(1 << v)
            labels[v] = len(bits) - 1
            yield from rec(v + 1)
            bits.pop()

    if V:
        yield from rec(0)


def exhaustive_min_det_leakage_t1(inst: Instance, split: AdversarySplit,
                                  cap: int = EXHAUSTIVE_CAP,
                                  seed_linear: bool = True) -> ExhaustiveResult:
    """Least leakage over all valid deterministic block-length-1 codes.

    Branch and bound over partitions into independent sets.  The objective is
    the sum over (codeword, x_K) of the largest class count over x_S, which
    only grows as vertices are placed; the search stops once it meets the
    converse floor ``q^n / alpha``.  The incumbent starts from the best scalar
    linear code when that search is small enough, else from the identity code.
    """
    from .fitting import SearchLimitError, SearchLimits, extract_encoder, pattern_from_instance, search_min

    split.check_partition(inst.n)
    V, adj = _partition_setup(inst, cap)
    q = inst.q
    enc_keys = EncoderTable.constant(q, inst.n)
    kK = _keys(enc_keys, split.known).tolist()
    kS = _keys(enc_keys, split.sensitive).tolist()
    floor = theorem2_lower_bound(inst, split).qL_floor * q ** (split.k + split.u)
    floor_count = math.ceil(floor)

    bits: list[int] = []
    counts: list[dict[tuple[int, int], int]] = []
    maxes: list[dict[int, int]] = []
    labels = [0] * V
    best = V + 1
    best_labels: list[int] = list(range(V))
    try:
        if not seed_linear:
            raise SearchLimitError("seeding disabled")
        lin = search_min(pattern_from_instance(inst), split, SearchLimits(max_free_cells=16))
        seed = EncoderTable.from_linear(extract_encoder(lin.witness))
        _, first = np.unique(seed.codewords, return_inverse=True)
        # restricted-growth relabeling keeps witnesses canonical
        relabel: dict[int, int] = {}
        best_labels = [relabel.setdefault(int(c), len(relabel)) for c in first]
        best = int(_max_sum(seed, split))
    except SearchLimitError:
        pass
    nodes = 0
    total = 0

    def place(c: int, v: int) -> int:
        key = (kK[v], kS[v])
        cnt = counts[c].get(key, 0) + 1
        counts[c][key] = cnt
        if cnt > maxes[c].get(kK[v], 0):
            maxes[c][kK[v]] = cnt
            return 1
        return 0

    def unplace(c: int, v: int, inc: int) -> None:
        key = (kK[v], kS[v])
        counts[c][key] -= 1
        if inc:
            maxes[c][kK[v]] -= 1

    def rec(v: int) -> None:
        nonlocal best, best_labels, nodes, total
        nodes += 1
        if v == V:
            if total < best:
                best, best_labels = total, list(labels)
            return
        for c in range(len(bits) + 1):
            if c == len(bits):
                bits.append(0)
                counts.append({})
                maxes.append({})
            elif bits[c] & adj[v]:
                continue
            inc = place(c, v)
            if total + inc < best:
                bits[c] |= 1 << v
                labels[v] = c
                total += inc
                rec(v + 1)
                total -= inc
                bits[c] &= ~(1 << v)
            unplace(c, v, inc)
            if c == len(bits) - 1 and bits[c] == 0:
                bits.pop()
                counts.pop()
                maxes.pop()
            if best <= floor_count:
                return

    if best > floor_count:
        rec(0)
    witness = EncoderTable.deterministic(q, inst.n, 1, best_labels)
    qL = Fraction(best, q ** (split.k + split.u))
    return ExhaustiveResult(qL, witness, nodes, q)
