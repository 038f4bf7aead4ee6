"""
Walk matrices and the walk-discrete / walk-saturated predicates.

W_T has one row per vertex x and one column per length k = 0..n-1; the entry w_{x,k}
counts the walks of length k from x into the terminal set T. Column k+1 is the
adjacency matrix applied to column k. Entries are exact integers: columns stay in int64
while the next product provably fits and switch to Python integers afterwards.
"""

from collections.abc import Iterable
from logging import getLogger

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from circulant_canon.core import ConnectionSet, Digraph, cayley
from circulant_canon.models.errors import InvalidInputError, NotInverseClosedError
from circulant_canon.spectral import saturation_bound

logger = getLogger(__name__)

_INT64_SAFE = 2**62
# 2^31 - 1; products of two residues fit in int64
_MODULUS = 2147483647


class WalkMatrix(BaseModel):
    """Exact walk counts to a terminal set, rows indexed by vertex, columns by length."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    terminal: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def row(self, x: int) -> tuple[int, ...]:
        return self.entries[x]

    def column(self, k: int) -> tuple[int, ...]:
        return tuple(row[k] for row in self.entries)

    def distinct_row_count(self) -> int:
        return len(set(self.entries))


def walk_matrix(g: Digraph, terminal: Iterable[int]) -> WalkMatrix:
    """W_T: columns chi_T, A chi_T, A^2 chi_T, ..., A^(n-1) chi_T."""
    n = g.n
    targets = tuple(sorted(set(int(t) for t in terminal)))
    for t in targets:
        if not 0 <= t < n:
            raise InvalidInputError(f"terminal vertex {t} is not in 0..{n - 1}", "walk_matrix")
    adjacency = g.adjacency.astype(np.int64)
    degree = int(adjacency.sum(axis=1).max(initial=0))
    column = np.zeros(n, dtype=np.int64)
    column[list(targets)] = 1
    columns = [column]
    for _ in range(1, n):
        if column.dtype != object and int(column.max(initial=0)) * max(degree, 1) >= _INT64_SAFE:
            adjacency = adjacency.astype(object)
            column = column.astype(object)
        column = adjacency.dot(column)
        columns.append(column)
    entries = tuple(tuple(int(columns[k][x]) for k in range(n)) for x in range(n))
    return WalkMatrix(n=n, terminal=targets, entries=entries)


def shifted_walk_matrix(w0: WalkMatrix, u: int) -> WalkMatrix:
    """W_u of a circulant from W_0, using W_u(x) = W_0(x - u)."""
    if w0.terminal != (0,):
        raise InvalidInputError("shifting needs the walk matrix to terminal {0}", "shifted_walk_matrix")
    n = w0.n
    entries = tuple(w0.entries[(x - u) % n] for x in range(n))
    return WalkMatrix(n=n, terminal=(u % n,), entries=entries)


def is_walk_discrete(g: Digraph, t: int) -> bool:
    """All rows of W_t pairwise distinct."""
    return walk_matrix(g, [t]).distinct_row_count() == g.n


def is_walk_saturated(s: ConnectionSet) -> bool:
    """W_0 of cay(S) has exactly ceil((n+1)/2) distinct rows; S must be inverse-closed."""
    if not s.is_inverse_closed:
        raise NotInverseClosedError(s.format())
    return walk_matrix(cayley(s), [0]).distinct_row_count() == saturation_bound(s.n)


def _modular_rank(rows: list[tuple[int, ...]]) -> int:
    if not rows or not rows[0]:
        return 0
    matrix = np.array([[c % _MODULUS for c in row] for row in rows], dtype=np.int64)
    rank = 0
    height, width = matrix.shape
    for col in range(width):
        pivots = np.flatnonzero(matrix[rank:, col]) + rank
        if pivots.size == 0:
            continue
        p = int(pivots[0])
        matrix[[rank, p]] = matrix[[p, rank]]
        inverse = pow(int(matrix[rank, col]), _MODULUS - 2, _MODULUS)
        matrix[rank] = (matrix[rank] * inverse) % _MODULUS
        below = matrix[rank + 1 :, col].copy()
        matrix[rank + 1 :] = (matrix[rank + 1 :] - np.outer(below, matrix[rank]) % _MODULUS) % _MODULUS
        rank += 1
        if rank == height:
            break
    return rank


def bareiss_rank(rows: list[tuple[int, ...]]) -> int:
    """Exact rank over Q by fraction-free elimination; every division is exact."""
    matrix = [list(row) for row in rows]
    height = len(matrix)
    width = len(matrix[0]) if matrix else 0
    rank = 0
    previous = 1
    for col in range(width):
        pivot = next((r for r in range(rank, height) if matrix[r][col] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        head = matrix[rank]
        a = head[col]
        for r in range(rank + 1, height):
            current = matrix[r]
            b = current[col]
            for c in range(col + 1, width):
                current[c] = (current[c] * a - b * head[c]) // previous
            current[col] = 0
        previous = a
        rank += 1
        if rank == height:
            break
    return rank


def walk_rank(w: WalkMatrix) -> int:
    """
    Exact rank of the walk matrix over the rationals.

    Repeated rows are dropped first. A rank modulo a prime is a lower bound for the
    rank over Q, so full rank modulo the prime settles the answer; otherwise the
    fraction-free elimination decides.
    """
    rows = sorted(set(w.entries))
    if _modular_rank(rows) == len(rows):
        return len(rows)
    logger.debug(f"modular rank inconclusive for n={w.n}; running fraction-free elimination")
    return bareiss_rank(rows)
