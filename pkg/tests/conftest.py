"""Independent oracles shared by the test modules.

Everything here works straight from definitions with plain Python loops and
shares no code with the library beyond the data types.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest

from icleak.instance import Instance, random_instance, random_split


def span_rank(rows: list[list[int]], q: int) -> int:
    """Rank as log_q of the number of distinct linear combinations of the rows."""
    if not rows:
        return 0
    cols = len(rows[0])
    seen = set()
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        seen.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % q for j in range(cols)))
    r = round(math.log(len(seen), q))
    assert q ** r == len(seen)
    return r


def tuples(q: int, n: int):
    return list(itertools.product(range(q), repeat=n))


def confusable(inst: Instance, x, z) -> bool:
    for w, a in inst.receivers():
        if any(x[j] != z[j] for j in w) and all(x[j] == z[j] for j in a):
            return True
    return False


def brute_alpha(inst: Instance) -> int:
    """Independence number of the block-length-1 confusion graph.

    Built from the receiver definitions and solved as a 0/1 integer program
    (maximize the chosen count, at most one endpoint per edge) with scipy.
    """
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    xs = tuples(inst.q, inst.n)
    V = len(xs)
    edges = [(a, b) for a in range(V) for b in range(a + 1, V) if confusable(inst, xs[a], xs[b])]
    if not edges:
        return V
    A = np.zeros((len(edges), V))
    for r, (a, b) in enumerate(edges):
        A[r, a] = A[r, b] = 1
    res = milp(-np.ones(V), constraints=LinearConstraint(A, -np.inf, 1),
               integrality=np.ones(V), bounds=Bounds(0, 1))
    return round(-res.fun)


def brute_leakage_qL(q, n, encode, split) -> Fraction:
    """q^L = sum over (x_K, y) of max over x_S of P(y, x_K | x_S), uniform messages."""
    K, S, U = (sorted(p) for p in (split.known, split.sensitive, split.nonsensitive))
    table: dict = {}
    for x in itertools.product(range(q), repeat=n):
        key = (tuple(x[j] for j in K), encode(x))
        xs = tuple(x[j] for j in S)
        table.setdefault(key, {}).setdefault(xs, Fraction(0))
        table[key][xs] += Fraction(1, q ** (len(K) + len(U)))
    return sum((max(v.values()) for v in table.values()), Fraction(0))


def brute_mais(inst: Instance) -> int:
    """Largest message set with an ordering satisfying the peeling condition."""
    singles = []
    for w, a in inst.receivers():
        for j in w:
            singles.append((j, a))
    best = 0
    for size in range(1, inst.n + 1):
        found = False
        for J in itertools.combinations(range(inst.n), size):
            Jset = set(J)
            for order in itertools.permutations(J):
                if all(any(j == jj and (a & Jset) <= set(order[:k]) for jj, a in singles)
                       for k, j in enumerate(order)):
                    found = True
                    break
            if found:
                break
        if found:
            best = size
    return best


def random_cases(seed: int, count: int, n_max: int = 5, qs=(2, 3), n3_max: int = 3):
    """Seeded (instance, split) pairs with q^n small enough for brute force."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        q = rng.choice(qs)
        n = rng.randint(1, n_max if q == 2 else n3_max)
        inst = random_instance(rng, n, rng.randint(0, 5), q)
        out.append((inst, random_split(rng, n)))
    return out


@pytest.fixture(scope="session")
def cases():
    return random_cases(2024, 60)


# acceptance lines are collected here and echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
