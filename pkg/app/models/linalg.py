"""Exact integer linear algebra over sympy's ``DomainMatrix``.

Matrices enter and leave as plain lists of rows of Python ints. Smith and
Hermite normal forms come from ``sympy.polys.matrices.normalforms``;
everything in the package that needs a quotient of finite abelian groups
goes through them.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form, smith_normal_decomp

logger = logging.getLogger(__name__)

Matrix = List[List[int]]
Vector = List[int]


def to_domain(matrix: Sequence[Sequence[int]], columns: Optional[int] = None) -> DomainMatrix:
    """``matrix`` as a dense DomainMatrix over ZZ; ``columns`` is needed when it has no rows."""
    n = columns if columns is not None else (len(matrix[0]) if matrix else 0)
    return DomainMatrix([[ZZ(int(x)) for x in row] for row in matrix], (len(matrix), n), ZZ)


def to_rows(matrix: DomainMatrix) -> Matrix:
    rows, columns = matrix.shape
    if rows == 0 or columns == 0:
        return [[] for _ in range(rows)]
    return [[int(x) for x in row] for row in matrix.to_list()]


def columns_of(matrix: DomainMatrix) -> Matrix:
    rows, columns = matrix.shape
    if rows == 0:
        return [[] for _ in range(columns)]
    return to_rows(matrix.transpose())


def column_hermite_form(vectors: Sequence[Sequence[int]], dimension: int) -> Matrix:
    """A basis of the lattice spanned by ``vectors`` in Z^dimension, one vector per entry.

    The basis is the column Hermite normal form of the spanning set: when the
    lattice has full rank, basis vector j has its last non-zero entry, which
    is positive, in coordinate j.
    """
    if not vectors or dimension == 0:
        return []
    spanning = to_domain(vectors, dimension).transpose()
    basis = columns_of(hermite_normal_form(spanning))
    logger.debug("HNF of %d vectors in Z^%d has rank %d", len(vectors), dimension, len(basis))
    return basis


@dataclass(frozen=True)
class SmithForm:
    """U·M·V = D with U, V unimodular and D diagonal, d1 | d2 | ..., all d >= 0.

    ``u_inv`` and ``v_inv`` are the exact inverses of U and V, computed on
    first use; they turn quotient coordinates back into vectors.
    """

    u: Matrix
    d: Matrix
    v: Matrix
    rows: int
    columns: int
    _u: DomainMatrix = field(repr=False, compare=False)
    _v: DomainMatrix = field(repr=False, compare=False)

    def __iter__(self) -> Iterator[Matrix]:
        return iter((self.u, self.d, self.v))

    @cached_property
    def u_inv(self) -> Matrix:
        return _inverse(self._u)

    @cached_property
    def v_inv(self) -> Matrix:
        return _inverse(self._v)

    @property
    def diagonal(self) -> List[int]:
        return [self.d[i][i] for i in range(min(self.rows, self.columns))]

    @property
    def rank(self) -> int:
        return sum(1 for entry in self.diagonal if entry)


def _inverse(unimodular: DomainMatrix) -> Matrix:
    if unimodular.shape[0] == 0:
        return []
    numerator, denominator = unimodular.inv_den()
    denominator = int(denominator)
    return [[int(x) // denominator for x in row] for row in numerator.to_list()]


def smith_normal_form(matrix: Sequence[Sequence[int]], columns: Optional[int] = None) -> SmithForm:
    """Smith normal form of an arbitrary rectangular integer matrix.

    ``columns`` is only needed when the matrix has no rows.
    """
    m = to_domain(matrix, columns)
    rows, n = m.shape
    if rows == 0 or n == 0:
        d, u, v = m, DomainMatrix.eye(rows, ZZ).to_dense(), DomainMatrix.eye(n, ZZ).to_dense()
    else:
        d, u, v = smith_normal_decomp(m)
    d_rows, u_rows = to_rows(d), to_rows(u)
    for i in range(min(rows, n)):
        if d_rows[i][i] < 0:
            d_rows[i][i] = -d_rows[i][i]
            u_rows[i] = [-x for x in u_rows[i]]
    form = SmithForm(u=u_rows, d=d_rows, v=to_rows(v), rows=rows, columns=n, _u=to_domain(u_rows, rows), _v=v)
    logger.debug("SNF of %dx%d matrix, rank %d", rows, n, form.rank)
    return form


def integer_solve(matrix: Sequence[Sequence[int]], b: Sequence[int], columns: Optional[int] = None) -> Optional[Vector]:
    """An integer x with A·x = b, or None when there is none."""
    form = smith_normal_form(matrix, columns)
    ub = [sum(c * value for c, value in zip(row, b)) for row in form.u]
    diagonal = form.diagonal
    y = [0] * form.columns
    for i, value in enumerate(ub):
        d = diagonal[i] if i < len(diagonal) else 0
        if d == 0:
            if value != 0:
                return None
        elif value % d:
            return None
        else:
            y[i] = value // d
    return [sum(c * value for c, value in zip(row, y)) for row in form.v]


def hermite_coordinates(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """Coordinates of ``vector`` in a full-rank basis from ``column_hermite_form``.

    None when the vector is not in the lattice. Basis vector j vanishes past
    coordinate j, so the coordinates are found from the last one down.
    """
    coordinates = [0] * len(basis)
    residual = list(vector)
    for j in reversed(range(len(basis))):
        pivot = basis[j][j]
        if residual[j] % pivot:
            return None
        q = residual[j] // pivot
        coordinates[j] = q
        if q:
            for i, x in enumerate(basis[j][:j + 1]):
                residual[i] -= q * x
    if any(residual):
        return None
    return tuple(coordinates)
