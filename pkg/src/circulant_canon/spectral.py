"""
Exact spectra of circulants.

The eigenvalues of cay(Z_n, S) are lambda_a = sum_{j in S} zeta_n^{a j}, a = 0..n-1.
Each one is computed as a CycloInt, so distinctness decisions are exact. The bulk path
stacks all n residues into an integer matrix (one row per eigenvalue) through the
reduction table of zeta^0..zeta^(n-1); the floating DFT is used only as a cross-check.
"""

from functools import lru_cache
from logging import getLogger

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from circulant_canon.core import ConnectionSet
from circulant_canon.cyclotomic import CycloInt, power_table
from circulant_canon.models.errors import InvalidInputError, NotInverseClosedError

logger = getLogger(__name__)

_INT64_SAFE = 2**62


class Spectrum(BaseModel):
    """The n exact eigenvalues of a circulant, indexed by a = 0..n-1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    eigenvalues: tuple[CycloInt, ...]
    distinct_count: int = Field(ge=0)

    def numeric(self) -> np.ndarray:
        return np.array([value.evaluate() for value in self.eigenvalues], dtype=complex)


@lru_cache(maxsize=256)
def _table(n: int) -> np.ndarray:
    table = np.array(power_table(n), dtype=object)
    if max((abs(c) for row in power_table(n) for c in row), default=0) * n < _INT64_SAFE:
        table = table.astype(np.int64)
    table.setflags(write=False)
    return table


def eigenvalue_matrix(s: ConnectionSet) -> np.ndarray:
    """Row a holds the residue coefficients of lambda_a (int64, or Python ints if needed)."""
    n = s.n
    table = _table(n)
    if not s.elements:
        return np.zeros((n, table.shape[1]), dtype=table.dtype)
    exponents = (np.arange(n)[:, None] * np.array(s.elements)[None, :]) % n
    if table.dtype == object:
        counts = np.zeros((n, n), dtype=object)
    else:
        counts = np.zeros((n, n), dtype=np.int64)
    flat = (np.arange(n)[:, None] * n + exponents).ravel()
    counts += np.bincount(flat, minlength=n * n).reshape(n, n)
    return counts @ table


def _distinct_rows(matrix: np.ndarray) -> int:
    if matrix.dtype == object:
        return len({tuple(row) for row in matrix.tolist()})
    return int(np.unique(matrix, axis=0).shape[0])


def distinct_eigenvalue_count(s: ConnectionSet) -> int:
    return _distinct_rows(eigenvalue_matrix(s))


def spectrum_key(s: ConnectionSet) -> tuple[tuple[int, ...], ...]:
    """The eigenvalue multiset as a sorted tuple of residues; an isomorphism invariant."""
    return tuple(sorted(tuple(int(c) for c in row) for row in eigenvalue_matrix(s).tolist()))


def spectrum(s: ConnectionSet) -> Spectrum:
    """All n exact eigenvalues with their number of distinct values."""
    matrix = eigenvalue_matrix(s)
    eigenvalues = tuple(CycloInt(s.n, tuple(int(c) for c in row)) for row in matrix.tolist())
    return Spectrum(n=s.n, eigenvalues=eigenvalues, distinct_count=_distinct_rows(matrix))


def has_simple_spectrum(s: ConnectionSet) -> bool:
    """All n eigenvalues pairwise distinct."""
    return distinct_eigenvalue_count(s) == s.n


def saturation_bound(n: int) -> int:
    """ceil((n+1)/2), the most distinct eigenvalues (or walk rows) an undirected circulant can have."""
    return (n + 2) // 2


def has_saturated_spectrum(s: ConnectionSet) -> bool:
    """Exactly ceil((n+1)/2) distinct eigenvalues; S must be inverse-closed."""
    if not s.is_inverse_closed:
        raise NotInverseClosedError(s.format())
    return distinct_eigenvalue_count(s) == saturation_bound(s.n)


def numeric_eigenvalues(s: ConnectionSet) -> np.ndarray:
    """The exact eigenvalues evaluated at zeta_n = exp(-2 pi i / n)."""
    matrix = eigenvalue_matrix(s).astype(float)
    zeta = np.exp(-2j * np.pi * np.arange(matrix.shape[1]) / s.n)
    return matrix @ zeta


def dft_cross_check(s: ConnectionSet, tolerance: float) -> bool:
    """
    The numeric DFT of chi_S, F(chi)(a) = sum_j zeta^{a j} chi(j), matches the exact
    spectrum entrywise within ``tolerance``.
    """
    if tolerance <= 0:
        raise InvalidInputError("tolerance must be positive", "dft_cross_check")
    transform = np.fft.fft(s.indicator().astype(float))
    error = float(np.max(np.abs(transform - numeric_eigenvalues(s)))) if s.n else 0.0
    logger.debug(f"DFT cross-check {s.format()}: max error {error:.3e}")
    return error <= tolerance
