"""
Tests for exact circulant spectra and the DFT cross-check.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circulant_canon.core import ConnectionSet, iter_connection_sets
from circulant_canon.cyclotomic import CycloInt, root_power_sum
from circulant_canon.models.errors import InvalidInputError, NotInverseClosedError
from circulant_canon.sampling import draw_connection_set, make_rng
from circulant_canon.spectral import (
    dft_cross_check,
    distinct_eigenvalue_count,
    has_saturated_spectrum,
    has_simple_spectrum,
    numeric_eigenvalues,
    saturation_bound,
    spectrum,
    spectrum_key,
)


def test_directed_four_cycle_spectrum():
    result = spectrum(ConnectionSet(n=4, elements=(1,)))
    assert result.distinct_count == 4
    assert result.eigenvalues == tuple(CycloInt.root(4, a) for a in range(4))
    assert np.allclose(result.numeric(), [1, -1j, -1, 1j])


def test_complete_digraph_spectrum():
    result = spectrum(ConnectionSet(n=3, elements=(1, 2)))
    assert result.eigenvalues == (CycloInt.integer(3, 2), CycloInt.integer(3, -1), CycloInt.integer(3, -1))
    assert result.distinct_count == 2


def test_five_cycle_spectrum_symmetry():
    values = spectrum(ConnectionSet(n=5, elements=(1, 4))).eigenvalues
    assert values[0] == CycloInt.integer(5, 2)
    assert values[1] == values[4]
    assert values[2] == values[3]
    assert values[1] != values[2]
    assert distinct_eigenvalue_count(ConnectionSet(n=5, elements=(1, 4))) == 3


@pytest.mark.parametrize("n", [6, 9, 10, 16])
def test_eigenvalues_match_root_power_sums(n):
    s = draw_connection_set(n, True, make_rng(3, n))
    values = spectrum(s).eigenvalues
    for a in range(n):
        assert values[a] == root_power_sum(n, [a * j for j in s.elements])


@pytest.mark.parametrize(
    "n, elements, expected",
    [
        (4, (1,), True),
        (3, (1, 2), False),
        (3, (), False),
        (1, (), True),
        (7, (1, 2, 4), False),
        (5, (1, 2), True),
    ],
)
def test_has_simple_spectrum(n, elements, expected):
    assert has_simple_spectrum(ConnectionSet(n=n, elements=elements)) is expected


@pytest.mark.parametrize(
    "n, elements, expected",
    [
        (4, (1, 3), True),
        (5, (1, 4), True),
        (5, (1, 2, 3, 4), False),
        (6, (), False),
        (6, (1, 5), True),
    ],
)
def test_has_saturated_spectrum(n, elements, expected):
    assert has_saturated_spectrum(ConnectionSet(n=n, elements=elements, undirected=True)) is expected


def test_saturated_needs_inverse_closed():
    with pytest.raises(NotInverseClosedError):
        has_saturated_spectrum(ConnectionSet(n=5, elements=(1,)))


@pytest.mark.parametrize("n, bound", [(1, 1), (4, 3), (5, 3), (10, 6), (11, 6)])
def test_saturation_bound(n, bound):
    assert saturation_bound(n) == bound


@pytest.mark.parametrize("n", range(2, 11))
def test_undirected_spectrum_never_exceeds_saturation(n):
    for s in iter_connection_sets(n, undirected=True):
        assert distinct_eigenvalue_count(s) <= saturation_bound(n)


def test_spectrum_key_is_multiplier_invariant():
    s = ConnectionSet(n=9, elements=(1, 2, 5))
    assert spectrum_key(s) == spectrum_key(s.scaled(2))
    assert spectrum_key(s) != spectrum_key(ConnectionSet(n=9, elements=(1, 2)))


@pytest.mark.parametrize(
    "n, elements, tolerance",
    [
        (4, (1,), 1e-9),
        (3, (1, 2), 1e-12),
        (9, (1, 2, 5), 1e-9),
        (1, (), 1e-9),
    ],
)
def test_dft_cross_check(n, elements, tolerance):
    assert dft_cross_check(ConnectionSet(n=n, elements=elements), tolerance)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_dft_cross_check_on_random_sets(seed):
    s = draw_connection_set(64, True, make_rng(seed, 64))
    assert dft_cross_check(s, 1e-7)


def test_numeric_eigenvalues_of_complete_graph():
    assert np.allclose(numeric_eigenvalues(ConnectionSet(n=5, elements=(1, 2, 3, 4))), [4, -1, -1, -1, -1])


def test_dft_cross_check_rejects_tolerance():
    with pytest.raises(InvalidInputError, match="tolerance"):
        dft_cross_check(ConnectionSet(n=4, elements=(1,)), 0)


def test_large_order_uses_exact_integers():
    s = draw_connection_set(210, True, make_rng(7, 210))
    matrix_count = distinct_eigenvalue_count(s)
    assert 1 <= matrix_count <= 210
    assert dft_cross_check(s, 1e-6)
