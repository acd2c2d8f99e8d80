import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import span_rank
from icleak.gf import (MatrixGF, PrimeField, in_row_space, is_prime, matvec, rank, row_basis,
                       select_columns)


def test_is_prime_small_values():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("q", [0, 1, 4, 9, 15])
def test_non_prime_field_rejected(q):
    with pytest.raises(ValueError):
        PrimeField(q)


def test_inverse_table_gf7():
    f = PrimeField(7)
    assert all(a * f.inv(a) % 7 == 1 for a in range(1, 7))
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_entries_reduced_and_validated():
    m = MatrixGF.from_rows(3, [[4, -1], [3, 5]])
    assert m.to_rows() == [[1, 2], [0, 2]]
    with pytest.raises(ValueError):
        MatrixGF(PrimeField(3), 1, 2, (0, 3))
    with pytest.raises(ValueError):
        MatrixGF.from_rows(2, [[1, 0], [1]])


def test_rank_known_values():
    # identity, all-ones, and a dependent triple over GF(2)
    assert rank(MatrixGF.identity(5, 4)) == 4
    assert rank(MatrixGF.from_rows(2, [[1, 1, 1]] * 3)) == 1
    assert rank(MatrixGF.from_rows(2, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2
    # the same triple is independent over GF(3)
    assert rank(MatrixGF.from_rows(3, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 3


def test_empty_matrices_have_rank_zero():
    assert rank(MatrixGF.zeros(2, 0, 4)) == 0
    assert rank(MatrixGF.zeros(2, 3, 0)) == 0


def test_select_columns_order_and_range():
    m = MatrixGF.from_rows(2, [[1, 0, 1], [0, 1, 1]])
    assert select_columns(m, [2, 0]).to_rows() == [[1, 1], [1, 0]]
    with pytest.raises(IndexError):
        select_columns(m, [3])


def test_row_basis_is_greedy_top_down():
    m = MatrixGF.from_rows(2, [[1, 1, 0], [1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert row_basis(m).to_rows() == [[1, 1, 0], [0, 1, 1]]


def test_in_row_space_and_matvec():
    m = MatrixGF.from_rows(3, [[1, 2, 0], [0, 1, 1]])
    assert in_row_space(m, [1, 0, 1])  # row0 + row1
    assert not in_row_space(m, [0, 0, 1])
    with pytest.raises(ValueError):
        in_row_space(m, [1, 0])
    assert matvec(m, [1, 1, 1]) == (0, 2)


matrices = st.sampled_from([2, 3, 5]).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(0, 4), st.integers(1, 4)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.lists(
            st.lists(st.integers(0, t[0] - 1), min_size=t[2], max_size=t[2]),
            min_size=t[1], max_size=t[1]), st.just(t[2]))))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_span_count(data):
    q, rows, cols = data
    m = MatrixGF.from_rows(q, rows, cols=cols)
    assert rank(m) == span_rank(rows, q) if rows else rank(m) == 0


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_invariants(data):
    q, rows, cols = data
    m = MatrixGF.from_rows(q, rows, cols=cols)
    r = rank(m)
    assert r <= min(m.rows, m.cols)
    assert rank(m.transpose()) == r
    assert rank(row_basis(m)) == row_basis(m).rows == r
    for i in range(m.rows):
        assert in_row_space(row_basis(m), m.row(i))
    # dropping a column never raises the rank
    for j in range(cols):
        assert rank(select_columns(m, [c for c in range(cols) if c != j])) <= r


def test_rank_exhaustive_2x3_gf2():
    for flat in itertools.product(range(2), repeat=6):
        rows = [list(flat[:3]), list(flat[3:])]
        assert rank(MatrixGF.from_rows(2, rows)) == span_rank(rows, 2)
