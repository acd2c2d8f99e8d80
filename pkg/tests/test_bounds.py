import random

import pytest

from conftest import brute_alpha, brute_mais, random_cases, span_rank
from icleak.bounds import (BetaValue, beta_exact, check_mais_order, mais_bound, mais_receivers,
                           minrank, rate_report)
from icleak.fitting import SearchLimitError, SearchLimits, enumerate_fitting_matrices, pattern_from_instance
from icleak.fixtures import example1, example1_tilde_sub, example2, two_cycle
from icleak.instance import Instance, disjoint_union, random_instance


def brute_minrank(inst):
    return min(span_rank(m.to_rows(), inst.q) for m in enumerate_fitting_matrices(pattern_from_instance(inst)))


def test_beta_two_cycle():
    assert beta_exact(two_cycle()) == (1.0, 2)


def test_beta_example3_subproblem():
    assert beta_exact(example1_tilde_sub()) == (3.0, 2)


def test_beta_complete_instance():
    inst = Instance.build(3, [[1], [2], [3]], [[], [], []])
    assert beta_exact(inst) == (3.0, 1)


def test_beta_value_exactness():
    assert BetaValue(4, 8, 2).exact == 1
    assert BetaValue(2, 3, 2).exact is None
    assert BetaValue(2, 3, 2).value == pytest.approx(2 - 1.584962500721156)
    assert BetaValue(3, 9, 3).exact == 1


def test_mais_examples():
    assert mais_bound(example1_tilde_sub())[0] == 3
    assert mais_bound(two_cycle()) == (1, [0])
    inst = Instance.build(4, [[1], [2], [3], [4]], [[], [], [], []])
    size, order = mais_bound(inst)
    assert size == 4 and sorted(order) == [0, 1, 2, 3]


def test_mais_rejects_large_n():
    with pytest.raises(ValueError):
        mais_bound(Instance.build(25, [], []))


def test_mais_counts_multi_wants():
    # one receiver with no side information wanting two messages: both peel
    inst = Instance.build(2, [[1, 2]], [[]])
    assert mais_bound(inst)[0] == 2


def test_minrank_examples():
    assert minrank(example1()[0])[0] == 4
    assert minrank(example2()[0])[0] == 1
    assert minrank(Instance.build(3, [[1], [2], [3]], [[], [], []]))[0] == 3
    assert minrank(example1_tilde_sub())[0] == 3


def test_minrank_limit():
    with pytest.raises(SearchLimitError):
        minrank(example1()[0], SearchLimits(max_free_cells=3))
    with pytest.raises(ValueError):
        minrank(example1()[0], SearchLimits(mode="randomized", iterations=5))


def test_rate_report_example1():
    rep = rate_report(example1()[0])
    assert (rep.mais, rep.beta.exact, rep.minrank) == (4, 4, 4)
    assert rep.beta_certified


def test_quantities_match_oracles(cases):
    for inst, _ in cases:
        if inst.q ** inst.n > 32:
            continue
        assert beta_exact(inst)[1] == brute_alpha(inst)
        size, order = mais_bound(inst)
        assert size == brute_mais(inst)
        assert check_mais_order(inst, order)
        assert len(mais_receivers(inst, order)) == size
        if len(pattern_from_instance(inst).free_cells) <= 8:
            assert minrank(inst)[0] == brute_minrank(inst)


def test_sandwich_on_random_binary_instances():
    rng = random.Random(77)
    for _ in range(80):
        inst = random_instance(rng, rng.randint(1, 5), rng.randint(0, 6))
        rep = rate_report(inst, SearchLimits(max_free_cells=30))
        rep.check()
        assert rep.mais <= rep.beta.value + 1e-9 <= rep.minrank + 2e-9


def test_beta_additive_over_disjoint_union():
    rng = random.Random(5)
    for _ in range(30):
        a = random_instance(rng, rng.randint(1, 3), rng.randint(0, 3))
        b = random_instance(rng, rng.randint(1, 3), rng.randint(0, 3))
        ua, ub, uu = beta_exact(a), beta_exact(b), beta_exact(disjoint_union(a, b))
        assert uu[1] == ua[1] * ub[1]
        assert uu[0] == pytest.approx(ua[0] + ub[0])


def test_check_mais_order_rejects_bad_orders():
    assert not check_mais_order(two_cycle(), [0, 1])
    assert not check_mais_order(two_cycle(), [0, 0])
    with pytest.raises(ValueError):
        mais_receivers(two_cycle(), [0, 1])
