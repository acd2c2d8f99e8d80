"""Reference instances and the expectations checked by ``icleak verify-paper``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .bounds import beta_exact, mais_bound, minrank
from .confusion import build_confusion_graph, chromatic_number, fractional_chromatic, max_independent_set
from .fitting import extract_encoder, pareto_sweep, pattern_from_instance, search_min
from .gf import MatrixGF
from .instance import AdversarySplit, Instance, extend_with_adversary_receiver, induce_subproblem
from .leakage import (EncoderTable, exhaustive_min_det_leakage_t1, iter_valid_partitions,
                      linear_leakage, oracle_leakage, posterior_success, prior_success,
                      theorem2_lower_bound, validate_encoder)


def example1() -> tuple[Instance, AdversarySplit]:
    inst = Instance.build(5, [[1], [2], [3], [4], [5]], [[4, 5], [1], [2], [3], [4]], q=2)
    return inst, AdversarySplit.build([5], [1, 3], [2, 4])


EXAMPLE1_M = ((1, 0, 0, 1, 0), (1, 1, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, 1, 1, 0), (0, 0, 0, 0, 1))


def example2() -> tuple[Instance, AdversarySplit]:
    inst = Instance.build(4, [[1], [2]], [[2, 3], [1, 4]], q=2)
    return inst, AdversarySplit.build([], [1, 2], [3, 4])


EXAMPLE2_M = ((1, 1, 0, 0), (1, 1, 0, 0))
EXAMPLE2_M_TILDE = ((1, 0, 1, 0), (0, 1, 0, 1))


def two_cycle() -> Instance:
    """Two receivers, each wanting one message and holding the other."""
    return Instance.build(2, [[1], [2]], [[2], [1]], q=2)


def xor_pair_split() -> AdversarySplit:
    return AdversarySplit.build([], [1, 2], [3, 4])


def xor_pair_codes() -> tuple[EncoderTable, EncoderTable]:
    """(x1+x2, x3+x4) and (x1+x3, x2+x4) over GF(2)."""
    y = EncoderTable.from_function(2, 4, 1, lambda v: 2 * (v[0] ^ v[1]) + (v[2] ^ v[3]))
    y_tilde = EncoderTable.from_function(2, 4, 1, lambda v: 2 * (v[0] ^ v[2]) + (v[1] ^ v[3]))
    return y, y_tilde


def example1_tilde_sub() -> Instance:
    inst, split = example1()
    sub, _ = induce_subproblem(extend_with_adversary_receiver(inst, split), [0, 1, 2, 3])
    return sub


@dataclass(frozen=True)
class Fixture:
    name: str
    compute: Callable[[], Any]
    expected: Any


def _ex1_validity():
    inst, _ = example1()
    enc = EncoderTable.from_linear(extract_encoder(MatrixGF.from_rows(2, EXAMPLE1_M)))
    return validate_encoder(enc, inst).valid


def _two_cycle_constant():
    res = validate_encoder(EncoderTable.constant(2, 2), two_cycle())
    return res.valid, res.pair, res.receiver


def _ex2_two_codeword_min():
    inst, split = example2()
    vals = [oracle_leakage(EncoderTable.deterministic(2, 4, 1, lab), split).qL
            for lab in iter_valid_partitions(inst, max_classes=2) if max(lab) == 1]
    return min(vals) >= 2 if vals else True


def _ex2_search(objective):
    inst, split = example2()
    return search_min(pattern_from_instance(inst), split if objective else "rank").value


def _two_cycle_graph():
    g = build_confusion_graph(two_cycle())
    a, _ = max_independent_set(g)
    return g.vertex_count, g.edge_count, a, chromatic_number(g), fractional_chromatic(g, a)


def _converse_without_u():
    inst = Instance.build(3, [[1], [2], [3]], [[2], [3], [1]], q=2)
    split = AdversarySplit.build([3], [1, 2], [])
    sub, _ = induce_subproblem(inst, [0, 1])
    return theorem2_lower_bound(inst, split).value == beta_exact(sub)[0]


def fixtures() -> list[Fixture]:
    ex1, sp1 = example1()
    ex2, sp2 = example2()
    y, y_tilde = xor_pair_codes()
    f1 = xor_pair_split()
    return [
        Fixture("xor_pair.prior_success", lambda: prior_success(f1, 2, 1), Fraction(1, 4)),
        Fixture("xor_pair.posterior_success", lambda: posterior_success(y, f1), Fraction(1, 2)),
        Fixture("xor_pair.leakage_Y", lambda: oracle_leakage(y, f1).qL, Fraction(2)),
        Fixture("xor_pair.leakage_Y_tilde", lambda: oracle_leakage(y_tilde, f1).qL, Fraction(1)),
        Fixture("two_cycle.constant_code_confusable", _two_cycle_constant, (False, (0, 1), 1)),
        Fixture("two_cycle.graph_stats", _two_cycle_graph, (4, 4, 2, 2, Fraction(2))),
        Fixture("example1.minrank", lambda: minrank(ex1)[0], 4),
        Fixture("example1.matrix_leakage",
                lambda: linear_leakage(extract_encoder(MatrixGF.from_rows(2, EXAMPLE1_M)), sp1).qL,
                Fraction(2)),
        Fixture("example1.matrix_valid", _ex1_validity, True),
        Fixture("example1.search_leakage",
                lambda: search_min(pattern_from_instance(ex1), sp1).value, 1),
        Fixture("example1.pareto_has_(4,1)",
                lambda: (4, 1) in pareto_sweep(pattern_from_instance(ex1), sp1), True),
        Fixture("example2.minrank", lambda: minrank(ex2)[0], 1),
        Fixture("example2.rank1_leakage",
                lambda: linear_leakage(extract_encoder(MatrixGF.from_rows(2, EXAMPLE2_M)), sp2).qL,
                Fraction(2)),
        Fixture("example2.zero_leakage_matrix",
                lambda: linear_leakage(MatrixGF.from_rows(2, EXAMPLE2_M_TILDE), sp2).qL, Fraction(1)),
        Fixture("example2.search_leakage", lambda: _ex2_search(True), 0),
        Fixture("example2.pareto",
                lambda: pareto_sweep(pattern_from_instance(ex2), sp2), [(1, 1), (2, 0)]),
        Fixture("example2.exhaustive_t1", lambda: exhaustive_min_det_leakage_t1(ex2, sp2).qL, Fraction(1)),
        Fixture("example2.rate1_codes_leak", _ex2_two_codeword_min, True),
        Fixture("example3.mais", lambda: mais_bound(example1_tilde_sub())[0], 3),
        Fixture("example3.beta", lambda: beta_exact(example1_tilde_sub()), (3.0, 2)),
        Fixture("example3.minrank", lambda: minrank(example1_tilde_sub())[0], 3),
        Fixture("example3.converse", lambda: theorem2_lower_bound(ex1, sp1).value, 1.0),
        Fixture("converse.u_empty_bound_is_beta", _converse_without_u, True),
    ]


@dataclass(frozen=True)
class FixtureOutcome:
    name: str
    passed: bool
    actual: str
    expected: str


def run_fixtures(corrupt: str | None = None) -> list[FixtureOutcome]:
    """Evaluate every fixture.  ``corrupt`` names one whose expectation is
    deliberately altered, to check that the harness reports failures."""
    out = []
    names = {f.name for f in fixtures()}
    if corrupt is not None and corrupt not in names:
        raise KeyError(f"unknown fixture {corrupt!r}")
    for f in fixtures():
        expected = ("corrupted", f.expected) if f.name == corrupt else f.expected
        try:
            actual = f.compute()
            ok = actual == expected
        except Exception as exc:  # report, do not abort the table
            actual, ok = f"error: {exc}", False
        out.append(FixtureOutcome(f.name, ok, repr(actual), repr(expected)))
    return out
