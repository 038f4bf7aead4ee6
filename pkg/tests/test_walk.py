"""
Tests for walk matrices, their exact rank and the bridge to the spectrum.
"""

import pytest
from conftest import circulant

from circulant_canon.core import ConnectionSet, Digraph, cayley, iter_connection_sets
from circulant_canon.models.errors import InvalidInputError, NotInverseClosedError
from circulant_canon.sampling import draw_connection_set, make_rng
from circulant_canon.spectral import distinct_eigenvalue_count, has_saturated_spectrum, has_simple_spectrum
from circulant_canon.walk import (
    bareiss_rank,
    is_walk_discrete,
    is_walk_saturated,
    shifted_walk_matrix,
    walk_matrix,
    walk_rank,
)


def test_walk_matrix_of_directed_triangle(directed_triangle):
    w = walk_matrix(directed_triangle, [0])
    assert w.entries == ((1, 0, 0), (0, 0, 1), (0, 1, 0))
    assert w.column(2) == (0, 1, 0)
    assert w.row(1) == (0, 0, 1)


def test_walk_matrix_full_terminal_on_triangle():
    w = walk_matrix(Digraph.complete(3), [0, 1, 2])
    for k in range(3):
        assert w.column(k) == (2**k,) * 3


def test_walk_matrix_edgeless():
    w = walk_matrix(Digraph.empty(4), [0])
    assert w.column(0) == (1, 0, 0, 0)
    assert all(w.column(k) == (0, 0, 0, 0) for k in range(1, 4))
    assert walk_rank(w) == 1


def test_walk_matrix_rejects_terminal_out_of_range(directed_triangle):
    with pytest.raises(InvalidInputError, match="terminal"):
        walk_matrix(directed_triangle, [3])


def test_walk_entries_stay_exact_beyond_int64():
    x = Digraph.complete(40)
    w = walk_matrix(x, range(40))
    assert w.column(39) == (39**39,) * 40


@pytest.mark.parametrize(
    "x, t, expected",
    [
        (circulant(3, 1), 0, True),
        (circulant(5, 1, 4), 0, False),
        (circulant(3, 1, 2), 0, False),
        (circulant(5, 1, 2), 0, True),
    ],
)
def test_is_walk_discrete(x, t, expected):
    assert is_walk_discrete(x, t) is expected


@pytest.mark.parametrize(
    "n, elements, expected",
    [
        (4, (1, 3), True),
        (5, (1, 2, 3, 4), False),
        (5, (1, 4), True),
    ],
)
def test_is_walk_saturated(n, elements, expected):
    assert is_walk_saturated(ConnectionSet(n=n, elements=elements, undirected=True)) is expected


def test_walk_saturated_needs_inverse_closed():
    with pytest.raises(NotInverseClosedError):
        is_walk_saturated(ConnectionSet(n=4, elements=(1,)))


@pytest.mark.parametrize(
    "x, rank",
    [
        (circulant(3, 1), 3),
        (circulant(4, 1, 3), 3),
        (Digraph.empty(5), 1),
        (circulant(5, 1, 2, 3, 4), 2),
    ],
)
def test_walk_rank(x, rank):
    assert walk_rank(walk_matrix(x, [0])) == rank


@pytest.mark.parametrize(
    "rows, rank",
    [
        ([(1, 2), (2, 4)], 1),
        ([(2, 0, 1), (0, 3, 1), (2, 3, 2)], 2),
        ([(0, 0), (0, 5)], 1),
        ([], 0),
        ([(6, 10**30), (3, 1)], 2),
    ],
)
def test_bareiss_rank(rows, rank):
    assert bareiss_rank(rows) == rank


def test_shifted_walk_matrix_matches_direct_computation():
    x = circulant(7, 1, 3)
    w0 = walk_matrix(x, [0])
    for u in range(7):
        assert shifted_walk_matrix(w0, u) == walk_matrix(x, [u])


def test_shifted_walk_matrix_requires_terminal_zero():
    with pytest.raises(InvalidInputError):
        shifted_walk_matrix(walk_matrix(circulant(4, 1), [1]), 2)


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("undirected", [False, True])
def test_rank_equals_distinct_eigenvalues_exhaustively(n, undirected):
    for s in iter_connection_sets(n, undirected):
        w = walk_matrix(cayley(s), [0])
        assert walk_rank(w) == distinct_eigenvalue_count(s), s.format()
        if undirected and has_saturated_spectrum(s):
            assert is_walk_saturated(s), s.format()
        if not undirected and has_simple_spectrum(s):
            assert w.distinct_row_count() == n, s.format()


@pytest.mark.parametrize(
    "s",
    [
        ConnectionSet(n=6, elements=(1, 2)),
        ConnectionSet(n=6, elements=(4, 5)),
        ConnectionSet(n=6, elements=(1, 2, 3)),
    ],
)
def test_walk_discrete_without_simple_spectrum(s):
    assert is_walk_discrete(cayley(s), 0)
    assert not has_simple_spectrum(s)
    assert walk_rank(walk_matrix(cayley(s), [0])) == distinct_eigenvalue_count(s) < s.n


@pytest.mark.parametrize(
    "s",
    [
        ConnectionSet(n=4, elements=(2,), undirected=True),
        ConnectionSet(n=3, elements=(), undirected=True),
    ],
)
def test_walk_saturated_without_saturated_spectrum(s):
    assert is_walk_saturated(s)
    assert not has_saturated_spectrum(s)


@pytest.mark.parametrize("n", [9, 12, 16, 21, 27, 32, 40])
@pytest.mark.parametrize("directed", [True, False])
def test_rank_equals_distinct_eigenvalues_on_random_sets(n, directed):
    for draw in range(25):
        s = draw_connection_set(n, directed, make_rng(11, n, draw))
        w = walk_matrix(cayley(s), [0])
        assert walk_rank(w) == distinct_eigenvalue_count(s), s.format()
        assert w.distinct_row_count() >= walk_rank(w)
