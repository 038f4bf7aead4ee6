"""
Exact arithmetic in the cyclotomic ring Z[zeta_n].

Elements are integer polynomials in zeta = zeta_n. A ``CycloPoly`` is any such
polynomial with exponents taken modulo n; ``reduce`` maps it to its residue modulo the
n-th cyclotomic polynomial Phi_n, the ``CycloInt``. Residues have exactly phi(n)
coefficients and two CycloInts are equal iff their coefficient tuples are equal, which
makes equality of sums of roots of unity a plain tuple comparison.

Coefficients are Python integers throughout.
"""

import cmath
from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from math import gcd

import numpy as np

from circulant_canon.models.errors import EnumerationBoundExceededError, InvalidInputError
from circulant_canon.models.settings import get_settings

logger = getLogger(__name__)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(n) if gcd(k, n) == 1) if n > 1 else 1


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _exact_division(numerator: list[int], monic: tuple[int, ...]) -> list[int]:
    """numerator / monic for integer polynomials (ascending coefficients); must divide."""
    remainder = list(numerator)
    degree = len(monic) - 1
    quotient = [0] * (len(remainder) - degree)
    for i in range(len(remainder) - 1, degree - 1, -1):
        c = remainder[i]
        if c:
            quotient[i - degree] = c
            for j, m in enumerate(monic):
                remainder[i - degree + j] -= c * m
    if any(remainder[:degree]):
        raise ArithmeticError("cyclotomic recursion left a remainder")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """
    Phi_n as ascending integer coefficients, by Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    """
    if n < 1:
        raise InvalidInputError(f"cyclotomic polynomial needs n >= 1, got {n}", "cyclotomic_polynomial")
    numerator = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        numerator = _exact_division(numerator, cyclotomic_polynomial(d))
    return tuple(numerator)


def _reduce_coefficients(n: int, coeffs) -> tuple[int, ...]:
    phi = cyclotomic_polynomial(n)
    degree = len(phi) - 1
    folded = [0] * max(n, degree)
    for k, c in enumerate(coeffs):
        folded[k % n] += int(c)
    for i in range(len(folded) - 1, degree - 1, -1):
        c = folded[i]
        if c:
            for j in range(degree):
                folded[i - degree + j] -= c * phi[j]
            folded[i] = 0
    return tuple(folded[:degree])


@lru_cache(maxsize=None)
def power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Residues of zeta^0, ..., zeta^(n-1) modulo Phi_n."""
    phi = cyclotomic_polynomial(n)
    degree = len(phi) - 1
    row = [1] + [0] * (degree - 1)
    table = []
    for _ in range(n):
        table.append(tuple(row))
        carry = row[-1]
        row = [0] + row[:-1]
        if carry:
            row = [r - carry * p for r, p in zip(row, phi[:degree])]
    return tuple(table)


@dataclass(frozen=True)
class CycloPoly:
    """An integer polynomial in zeta_n before reduction; exponents live modulo n."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) > self.n:
            raise InvalidInputError(f"{len(self.coeffs)} coefficients for modulus {self.n}", "CycloPoly")

    def evaluate(self) -> complex:
        zeta = cmath.exp(-2j * cmath.pi / self.n)
        return complex(sum(c * zeta**k for k, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class CycloInt:
    """An element of Z[zeta_n] in canonical form: the residue modulo Phi_n."""

    n: int
    coeffs: tuple[int, ...]

    @classmethod
    def zero(cls, n: int) -> "CycloInt":
        return cls(n, (0,) * euler_phi(n))

    @classmethod
    def integer(cls, n: int, value: int) -> "CycloInt":
        return reduce(CycloPoly(n, (value,)))

    @classmethod
    def root(cls, n: int, exponent: int) -> "CycloInt":
        return cls(n, power_table(n)[exponent % n])

    def _check(self, other: "CycloInt") -> None:
        if other.n != self.n:
            raise InvalidInputError(f"cannot combine Z[zeta_{self.n}] with Z[zeta_{other.n}]", "CycloInt")

    def __add__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        return CycloInt(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycloInt":
        return CycloInt(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycloInt") -> "CycloInt":
        return self + (-other)

    def __mul__(self, other: "CycloInt") -> "CycloInt":
        self._check(other)
        product = [0] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    product[i + j] += a * b
        return CycloInt(self.n, _reduce_coefficients(self.n, product))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self) -> complex:
        """Numeric value at zeta_n = exp(-2 pi i / n)."""
        zeta = cmath.exp(-2j * cmath.pi / self.n)
        return complex(sum(c * zeta**k for k, c in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CycloInt[{self.n}](" + (" + ".join(terms) or "0") + ")"


def reduce(p: CycloPoly) -> CycloInt:
    """The canonical residue of p modulo Phi_n."""
    return CycloInt(p.n, _reduce_coefficients(p.n, p.coeffs))


def root_power_sum(n: int, exponents) -> CycloInt:
    """sum_j zeta_n^{e_j} over a multiset of exponents."""
    table = power_table(n)
    total = [0] * euler_phi(n)
    for e in exponents:
        for k, c in enumerate(table[e % n]):
            total[k] += c
    return CycloInt(n, tuple(total))


def subset_sum_distinctness(n: int, bound: int, limit: int | None = None) -> bool:
    """
    True iff the 2^bound subset sums of {zeta_n^1, ..., zeta_n^bound} are pairwise distinct.
    """
    limit = get_settings().subset_sum_bound if limit is None else limit
    if bound > limit:
        raise EnumerationBoundExceededError("subset_sum_distinctness", bound, limit)
    table = np.array(power_table(n), dtype=np.int64)
    sums = np.zeros((1, table.shape[1]), dtype=np.int64)
    for j in range(1, bound + 1):
        sums = np.concatenate([sums, sums + table[j % n]])
    distinct = np.unique(sums, axis=0).shape[0]
    logger.debug(f"n={n} bound={bound}: {distinct} distinct of {sums.shape[0]} subset sums")
    return distinct == sums.shape[0]
