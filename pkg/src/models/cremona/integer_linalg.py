"""Exact integer matrix helpers shared by the lattice modules.

Matrices are tuples of row tuples so they hash, compare and sort. Products go
through numpy object arrays, which keeps every entry a Python integer.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from src.utils.exceptions import CapExceededError, LatticeError

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]
IntVector = Tuple[int, ...]


def as_int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    """Freeze a square integer matrix given row by row.

    Raises:
        LatticeError: If the rows are empty, ragged or not square.
    """
    matrix = tuple(tuple(int(v) for v in row) for row in rows)
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise LatticeError(f"Expected a non-empty square matrix, got {matrix}")
    return matrix


def identity_matrix(n: int) -> IntMatrix:
    """Return the n x n identity."""
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _to_array(matrix: Sequence[Sequence[int]]) -> np.ndarray:
    return np.array(matrix, dtype=object)


def _freeze(array: np.ndarray) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in array)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Exact product a*b."""
    return _freeze(_to_array(a) @ _to_array(b))


def mat_vec(a: IntMatrix, v: Sequence[int]) -> IntVector:
    """Exact product a*v for a column vector v."""
    return tuple(int(x) for x in _to_array(a) @ np.array(v, dtype=object))


def transpose(a: IntMatrix) -> IntMatrix:
    """Return the transpose."""
    return tuple(zip(*a))


def determinant(a: IntMatrix) -> int:
    """Exact determinant."""
    return int(sympy.Matrix(a).det())


def inverse(a: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix.

    Raises:
        LatticeError: If det(a) is not +1 or -1.
    """
    det = determinant(a)
    if det not in (1, -1):
        raise LatticeError(f"Matrix {a} has determinant {det}, not +-1")
    return as_int_matrix(sympy.Matrix(a).inv().tolist())


def inverse_transpose(a: IntMatrix) -> IntMatrix:
    """Contragredient action: the dual of a on the dual lattice."""
    return transpose(inverse(a))


def characteristic_polynomial(a: IntMatrix) -> Tuple[int, ...]:
    """Characteristic polynomial det(xI - a), coefficients lowest degree first."""
    x = sympy.Symbol("x")
    coeffs = sympy.Matrix(a).charpoly(x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def reduce_mod(a: IntMatrix, modulus: int) -> IntMatrix:
    """Entry-wise reduction into [0, modulus)."""
    return tuple(tuple(v % modulus for v in row) for row in a)


def is_identity(a: IntMatrix, modulus: Optional[int] = None) -> bool:
    """True if a is the identity (modulo `modulus` when given)."""
    target = identity_matrix(len(a))
    if modulus is None:
        return a == target
    return reduce_mod(a, modulus) == reduce_mod(target, modulus)


def matrix_order(a: IntMatrix, cap: int, modulus: Optional[int] = None) -> int:
    """Multiplicative order of a, over Z or modulo `modulus`.

    Raises:
        CapExceededError: If no power up to `cap` is the identity.
    """
    power = reduce_mod(a, modulus) if modulus else a
    for k in range(1, cap + 1):
        if is_identity(power, modulus):
            return k
        power = mat_mul(power, a)
        if modulus:
            power = reduce_mod(power, modulus)
    raise CapExceededError(
        f"Matrix {a} has no identity power up to {cap}"
        + (f" modulo {modulus}" if modulus else "")
    )


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[IntVector]:
    """Saturated basis of {v in Z^ncols : A v = 0}.

    Unimodular column operations bring A to column echelon form while the same
    operations are applied to an identity matrix U; the columns of U past the
    last pivot span the integer kernel and, being part of a unimodular basis,
    span it saturated.
    """
    work = [list(row) for row in rows]
    unimodular = [list(row) for row in identity_matrix(ncols)]

    def column_axpy(target: int, source: int, factor: int) -> None:
        for row in work:
            row[target] -= factor * row[source]
        for row in unimodular:
            row[target] -= factor * row[source]

    def column_swap(i: int, j: int) -> None:
        for row in work:
            row[i], row[j] = row[j], row[i]
        for row in unimodular:
            row[i], row[j] = row[j], row[i]

    pivot = 0
    for row in work:
        if pivot >= ncols:
            break
        while True:
            nonzero = [j for j in range(pivot, ncols) if row[j] != 0]
            if len(nonzero) <= 1:
                break
            smallest = min(nonzero, key=lambda j: abs(row[j]))
            for j in nonzero:
                if j != smallest:
                    column_axpy(j, smallest, row[j] // row[smallest])
        if nonzero:
            column_swap(nonzero[0], pivot)
            pivot += 1

    basis = [
        tuple(unimodular[i][j] for i in range(ncols)) for j in range(pivot, ncols)
    ]
    logger.debug(
        "Integer kernel of %d x %d system has rank %d", len(work), ncols, len(basis)
    )
    return basis


def fixed_sublattice(generators: Sequence[IntMatrix]) -> List[IntVector]:
    """Saturated basis of the vectors fixed by every generator."""
    if not generators:
        raise LatticeError("At least one generator is required")
    n = len(generators[0])
    stacked = [
        [g[i][j] - int(i == j) for j in range(n)] for g in generators for i in range(n)
    ]
    return integer_kernel(stacked, n)
