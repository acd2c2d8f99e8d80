import itertools
import random

import pytest

from conftest import span_rank
from icleak.fitting import (FREE, ONE, ZERO, SearchLimitError, SearchLimits, enumerate_fitting_matrices,
                            extract_encoder, leakage_objective, pareto_sweep, pattern_from_instance,
                            search_min)
from icleak.fixtures import EXAMPLE1_M, example1, example2
from icleak.gf import MatrixGF, select_columns
from icleak.instance import AdversarySplit, Instance, random_instance, random_split
from icleak.leakage import EncoderTable, theorem2_lower_bound, validate_encoder


def objective(m, split):
    if split is None:
        return span_rank(m.to_rows(), m.q)
    _, s, u = split.columns()
    return (span_rank(select_columns(m, s + u).to_rows(), m.q)
            - span_rank(select_columns(m, u).to_rows(), m.q))


def brute_search(pattern, split):
    """(min value, first minimizer) over all matrices in lexicographic order.

    In leakage mode the K-column cells are held at 0, as the library does.
    """
    best = None
    for m in enumerate_fitting_matrices(pattern):
        if split is not None and any(m[i, j] for i, j in pattern.free_cells if j in split.known):
            continue
        v = objective(m, split)
        if best is None or v < best[0]:
            best = (v, m)
    return best


def test_pattern_example1():
    pat = pattern_from_instance(example1()[0])
    assert pat.render().splitlines()[0] == "1 0 0 ? ?"
    assert len(pat.free_cells) == 6
    assert pat.matches(MatrixGF.from_rows(2, EXAMPLE1_M))


def test_pattern_normalizes_and_drops_degenerate():
    inst = Instance.build(3, [[1, 2], []], [[3], [1]])
    pat = pattern_from_instance(inst)
    assert pat.cells == ((ONE, ZERO, FREE), (ZERO, ONE, FREE))
    assert pat.receivers == (0, 0)


def test_example1_leakage_search_returns_published_matrix():
    inst, split = example1()
    res = search_min(pattern_from_instance(inst), split)
    assert res.value == 1 and res.certified
    assert res.witness.to_rows() == [list(r) for r in EXAMPLE1_M]


def test_example2_searches():
    inst, split = example2()
    pat = pattern_from_instance(inst)
    assert search_min(pat, "rank").value == 1
    assert search_min(pat, split).value == 0
    assert pareto_sweep(pat, split) == [(1, 1), (2, 0)]


def test_example1_pareto_contains_optimum():
    inst, split = example1()
    assert (4, 1) in pareto_sweep(pattern_from_instance(inst), split)


def test_pareto_witnesses_attain_their_points():
    inst, split = example2()
    for r, leak, m in pareto_sweep(pattern_from_instance(inst), split, with_witness=True):
        assert span_rank(m.to_rows(), 2) == r and objective(m, split) == leak


def test_limits_and_modes():
    inst, split = example1()
    pat = pattern_from_instance(inst)
    with pytest.raises(SearchLimitError):
        search_min(pat, "rank", SearchLimits(max_free_cells=5))
    with pytest.raises(ValueError):
        SearchLimits(mode="greedy")
    assert SearchLimits().free_cell_limit(2) == 24
    assert SearchLimits().free_cell_limit(3) == 15
    with pytest.raises(ValueError):
        pareto_sweep(pat, split, SearchLimits(mode="randomized"))


def test_randomized_mode_is_flagged_and_reproducible():
    inst, split = example1()
    pat = pattern_from_instance(inst)
    lim = SearchLimits(mode="randomized", seed=3, iterations=50)
    a, b = search_min(pat, split, lim), search_min(pat, split, lim)
    assert not a.certified
    assert a.value == b.value and a.witness == b.witness
    assert a.value >= 1 and pat.matches(a.witness)


def test_exhaustive_matches_brute_force_with_lex_first_witness():
    rng = random.Random(12)
    checked = 0
    while checked < 60:
        q = rng.choice([2, 3])
        n = rng.randint(1, 5 if q == 2 else 3)
        inst = random_instance(rng, n, rng.randint(0, 5), q)
        pat = pattern_from_instance(inst)
        if len(pat.free_cells) > (9 if q == 2 else 5):
            continue
        split = random_split(rng, n)
        for sp in (None, split):
            res = search_min(pat, "rank" if sp is None else sp)
            v, m = brute_search(pat, sp)
            assert res.value == v and res.witness == m
        brute = {}
        for m in enumerate_fitting_matrices(pat):
            r = span_rank(m.to_rows(), q)
            brute[r] = min(brute.get(r, 99), objective(m, split))
        assert pareto_sweep(pat, split) == sorted(brute.items())
        checked += 1


def test_witness_codes_are_valid_and_respect_converse(cases):
    for inst, split in cases:
        pat = pattern_from_instance(inst)
        if len(pat.free_cells) > 12:
            continue
        for obj in ("rank", split):
            res = search_min(pat, obj)
            enc = EncoderTable.from_linear(extract_encoder(res.witness))
            assert validate_encoder(enc, inst).valid
        bound = theorem2_lower_bound(inst, split).value
        for m in enumerate_fitting_matrices(pat):
            assert leakage_objective(m, split) >= bound - 1e-9


def test_leakage_invariant_under_column_permutation_within_blocks():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(2, 5)
        inst = random_instance(rng, n, rng.randint(1, 5))
        split = random_split(rng, n)
        pat = pattern_from_instance(inst)
        if len(pat.free_cells) > 12:
            continue
        base = search_min(pat, split).value
        # relabel messages by a permutation that maps S to S and U to U
        perm = list(range(n))
        for block in (sorted(split.sensitive), sorted(split.nonsensitive)):
            shuffled = block[:]
            rng.shuffle(shuffled)
            for a, b in zip(block, shuffled):
                perm[a] = b
        inst2 = Instance(n, tuple(frozenset(perm[j] for j in w) for w in inst.wants),
                         tuple(frozenset(perm[j] for j in a) for a in inst.has), inst.field)
        assert search_min(pattern_from_instance(inst2), split).value == base


def test_extract_encoder_keeps_row_space():
    m = MatrixGF.from_rows(2, [[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    e = extract_encoder(m)
    assert e.rows == 2 and span_rank(e.to_rows(), 2) == 2


def test_empty_pattern():
    inst = Instance.build(3, [], [])
    pat = pattern_from_instance(inst)
    split = AdversarySplit.build([], [1], [2, 3])
    assert search_min(pat, "rank").value == 0
    assert search_min(pat, split).value == 0
    assert pareto_sweep(pat, split) == [(0, 0)]
