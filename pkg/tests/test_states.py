"""Grid and sparse tripartite state containers."""

import numpy as np
import pytest

from gradkick import (DomainLabel, GridSizeError, GridState, SparseTerm,
                      SparseTripartiteState, check_grid_bits, grid_index_of,
                      grid_point_of)


def test_grid_index_row_major_first_axis_slowest():
    # (g1, g2) -> g1 * 2^n + g2 for p = 2.
    n = 3
    assert grid_index_of((0, 0), n, 2) == 0
    assert grid_index_of((0, 5), n, 2) == 5
    assert grid_index_of((1, 0), n, 2) == 8
    assert grid_index_of((7, 7), n, 2) == 63
    assert grid_index_of((2, 3), n, 2) == 19


def test_grid_index_round_trip_exhaustive():
    for n, p in ((1, 1), (2, 1), (2, 3), (3, 2)):
        for flat in range(1 << (n * p)):
            g = grid_point_of(flat, n, p)
            assert grid_index_of(g, n, p) == flat
        # Lexicographic order of tuples agrees with flat order.
        points = [grid_point_of(i, n, p) for i in range(1 << (n * p))]
        assert points == sorted(points)


def test_grid_index_validation():
    with pytest.raises(ValueError):
        grid_index_of((4,), 2, 1)
    with pytest.raises(ValueError):
        grid_index_of((0,), 2, 2)
    with pytest.raises(ValueError):
        grid_point_of(16, 2, 2)
    with pytest.raises(ValueError):
        grid_point_of(-1, 2, 2)


def test_grid_state_basis_one_hot():
    state = GridState.basis(2, 2, (1, 3))
    assert state.shape == (4, 4)
    assert state.size == 16
    idx = state.index_of((1, 3))
    assert idx == 7
    expected = np.zeros(16, dtype=complex)
    expected[7] = 1.0
    assert np.array_equal(state.amplitudes, expected)
    assert state.grid_of(7) == (1, 3)
    assert state.norm() == 1.0


def test_grid_state_rejects_unnormalized_unless_flagged():
    amps = np.ones(4, dtype=complex)
    with pytest.raises(ValueError, match="norm"):
        GridState(n=2, p=1, amplitudes=amps)
    partial = GridState(n=2, p=1, amplitudes=amps, normalized=False)
    assert partial.norm() == 2.0


def test_grid_state_shape_validation():
    with pytest.raises(ValueError):
        GridState(n=2, p=1, amplitudes=np.zeros(3, dtype=complex), normalized=False)
    with pytest.raises(ValueError):
        GridState(n=0, p=1, amplitudes=np.zeros(1, dtype=complex), normalized=False)


def test_check_grid_bits_guard():
    check_grid_bits(13, 2)  # 26 bits: exactly at the default guard
    with pytest.raises(GridSizeError, match="27"):
        check_grid_bits(27, 1)
    with pytest.raises(GridSizeError):
        check_grid_bits(14, 2)
    check_grid_bits(14, 2, max_grid_bits=28)  # explicit override
    with pytest.raises(GridSizeError):
        check_grid_bits(3, 1, max_grid_bits=2)
    with pytest.raises(ValueError):
        check_grid_bits(0, 1)


def test_grid_state_basis_respects_guard():
    with pytest.raises(GridSizeError):
        GridState.basis(27, 1, (0,))


def test_sparse_state_initial():
    label = DomainLabel.base((0.5, 0.5))
    state = SparseTripartiteState.initial(3, 2, label, word=0)
    assert len(state) == 1
    term = list(state)[0]
    assert term.label == label
    assert term.word == 0
    assert term.grid == (0, 0)
    assert term.amplitude == 1.0 + 0.0j
    assert state.norm() == 1.0


def test_sparse_state_rejects_duplicate_triples():
    label = DomainLabel.base((0.0,))
    terms = (
        SparseTerm(label, 0, (1,), 0.5 + 0j),
        SparseTerm(label, 0, (1,), 0.5 + 0j),
    )
    with pytest.raises(ValueError, match="duplicate"):
        SparseTripartiteState(n=2, p=1, terms=terms, normalized=False)


def test_sparse_state_rejects_bad_grid_and_norm():
    label = DomainLabel.base((0.0,))
    with pytest.raises(ValueError, match="out of range"):
        SparseTripartiteState(
            n=2, p=1, terms=(SparseTerm(label, 0, (4,), 1.0 + 0j),))
    with pytest.raises(ValueError, match="norm"):
        SparseTripartiteState(
            n=2, p=1, terms=(SparseTerm(label, 0, (0,), 0.5 + 0j),))
    # The same term is fine as a deliberately partial state.
    partial = SparseTripartiteState(
        n=2, p=1, terms=(SparseTerm(label, 0, (0,), 0.5 + 0j),),
        normalized=False)
    assert partial.norm() == 0.5
