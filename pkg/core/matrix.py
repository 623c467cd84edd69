"""Square matrices of jet expressions and their determinants."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence, Tuple

from config.config_loader import get_cofactor_limit
from .polynomial import DiffPolynomial


def _exact_divide(a: Any, b: Any) -> Any:
    if isinstance(a, DiffPolynomial) and isinstance(b, DiffPolynomial):
        quotient = a.exquo(b)
        if quotient is None:
            raise ArithmeticError("inexact division in fraction-free elimination")
        return quotient
    return a / b


def _is_zero(entry: Any) -> bool:
    return entry == 0


def _cofactor_det(rows: List[List[Any]]) -> Any:
    size = len(rows)
    if size == 1:
        return rows[0][0]
    if size == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for col, entry in enumerate(rows[0]):
        if _is_zero(entry):
            continue
        minor = [row[:col] + row[col + 1:] for row in rows[1:]]
        term = entry * _cofactor_det(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    return 0 if total is None else total


def _bareiss_det(rows: List[List[Any]], divide: Callable[[Any, Any], Any]) -> Any:
    """Fraction-free elimination; every division is exact."""
    m = [list(row) for row in rows]
    size = len(m)
    sign = 1
    previous = None
    for k in range(size - 1):
        if _is_zero(m[k][k]):
            for i in range(k + 1, size):
                if not _is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                entry = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                if previous is not None:
                    entry = divide(entry, previous)
                m[i][j] = entry
        previous = m[k][k]
    det = m[size - 1][size - 1]
    return -det if sign < 0 else det


@dataclass(frozen=True)
class JetMatrix:
    """Square matrix over a commutative ring of jet expressions."""
    rows: Tuple[Tuple[Any, ...], ...]

    def __post_init__(self):
        size = len(self.rows)
        if size == 0:
            raise ValueError("empty matrix")
        for row in self.rows:
            if len(row) != size:
                raise ValueError("matrix is not square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "JetMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]]) -> "JetMatrix":
        return cls(tuple(zip(*columns)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def det(self, cofactor_limit: Optional[int] = None) -> Any:
        return det(self, cofactor_limit)


def det(matrix: JetMatrix, cofactor_limit: Optional[int] = None) -> Any:
    """Exact determinant.

    Cofactor expansion up to `cofactor_limit` rows (config default), then
    fraction-free Bareiss elimination with exact division.
    """
    if not isinstance(matrix, JetMatrix):
        matrix = JetMatrix.from_rows(matrix)
    limit = get_cofactor_limit() if cofactor_limit is None else cofactor_limit
    rows = [list(row) for row in matrix.rows]
    if matrix.size <= limit:
        return _cofactor_det(rows)
    return _bareiss_det(rows, _exact_divide)


def fraction_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of a constant matrix."""
    return Fraction(det(JetMatrix.from_rows([[Fraction(v) for v in row] for row in rows])))


def fraction_inverse(rows: Sequence[Sequence[Fraction]]) -> Tuple[Tuple[Fraction, ...], ...]:
    """Gauss-Jordan inverse of a constant invertible matrix."""
    size = len(rows)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(size)]
           for i, row in enumerate(rows)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)
