"""Picard lattices of Del Pezzo surfaces and their Weyl groups.

Classes are integer vectors (a; b1, ..., br) in the basis e0, e1, ..., er of
Z^{1,r}, with intersection form diag(1, -1, ..., -1) and canonical class
K = -3e0 + e1 + ... + er. The Weyl group W(E_r) is generated by the
reflections s(v) = v + (v.alpha) alpha in the simple roots e0 - e1 - e2 - e3
and e_i - e_{i+1}; every root has alpha.alpha = -2 and alpha.K = 0.

For degree 2 (r = 7) and degree 1 (r = 8) the module also computes the
order-7 invariants of K-perp under the 7-cycle on e1, ..., e7 and the
integral automorphs of the resulting binary forms.
"""

import itertools
import logging
import math
from collections import deque
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from src.utils.exceptions import (
    CapExceededError,
    InvalidParameterError,
    LatticeError,
    SelfCheckError,
)

from .data_models import (
    AutomorphGroup,
    BinaryFormGram,
    ExplicitRank2Basis,
    InvariantSublattice,
)
from .integer_linalg import (
    IntMatrix,
    IntVector,
    as_int_matrix,
    determinant,
    identity_matrix,
    integer_kernel,
    is_identity,
    mat_mul,
    mat_vec,
    matrix_order,
    transpose,
)
from .knowledge_base import Limits, default_limits

logger = logging.getLogger(__name__)

PicVector = IntVector

STATED_RANK2_GRAM = BinaryFormGram(matrix=((-4, 1), (1, -2)))


def _require_rank(r: int, allowed: Sequence[int]) -> None:
    if r not in allowed:
        raise InvalidParameterError(f"r must be one of {list(allowed)}, got {r}")


def _require_length(vector: Sequence[int], r: int) -> None:
    if len(vector) != r + 1:
        raise InvalidParameterError(
            f"class {tuple(vector)} has {len(vector)} coordinates, expected {r + 1}"
        )


def intersection(u: Sequence[int], v: Sequence[int]) -> int:
    """u.v for the form diag(1, -1, ..., -1)."""
    return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))


def intersection_matrix(r: int) -> IntMatrix:
    return tuple(
        tuple((1 if i == 0 else -1) if i == j else 0 for j in range(r + 1))
        for i in range(r + 1)
    )


def canonical_class(r: int) -> PicVector:
    """K = -3e0 + e1 + ... + er."""
    return (-3,) + (1,) * r


def basis_vector(r: int, i: int) -> PicVector:
    return tuple(int(j == i) for j in range(r + 1))


def _add(*terms: Tuple[int, Sequence[int]]) -> PicVector:
    """Integer linear combination sum of c * v."""
    length = len(terms[0][1])
    return tuple(sum(c * v[i] for c, v in terms) for i in range(length))


# -- (-1)-classes --


@lru_cache(maxsize=None)
def _b_vectors(
    length: int, total: int, squares: int, bound: int
) -> Tuple[Tuple[int, ...], ...]:
    """All integer vectors with the given sum and sum of squares."""
    if length == 0:
        return ((),) if total == 0 and squares == 0 else ()
    # Cauchy-Schwarz: total^2 <= length * squares.
    if total * total > length * squares:
        return ()
    found = []
    for b in range(-bound, bound + 1):
        if b * b > squares:
            continue
        for rest in _b_vectors(length - 1, total - b, squares - b * b, bound):
            found.append((b,) + rest)
    return tuple(found)


def _a_range(r: int) -> range:
    # (9 - r) a^2 - 6a + (1 - r) <= 0 from Cauchy-Schwarz on b.
    a_min = min(a for a in range(-10, 11) if (9 - r) * a * a - 6 * a + 1 - r <= 0)
    a_max = max(a for a in range(-10, 11) if (9 - r) * a * a - 6 * a + 1 - r <= 0)
    return range(a_min, a_max + 1)


def minus_one_classes(r: int) -> Tuple[PicVector, ...]:
    """All classes D with D.D = -1 and D.K = -1, sorted lexicographically.

    D = a e0 + sum b_i e_i must satisfy sum b_i = 1 - 3a and
    sum b_i^2 = a^2 + 1. Cauchy-Schwarz bounds a to the interval where
    (9 - r) a^2 - 6a + (1 - r) <= 0, which lies within [-1, 7] for r <= 8;
    the endpoints admit no integer b, so effectively a is in 0..6.

    Raises:
        InvalidParameterError: Unless 3 <= r <= 8.
    """
    _require_rank(r, range(3, 9))
    classes = []
    for a in _a_range(r):
        bound = math.isqrt(a * a + 1)
        for b in _b_vectors(r, 1 - 3 * a, a * a + 1, bound):
            classes.append((a,) + b)
    classes.sort()
    logger.debug("r=%d: %d (-1)-classes", r, len(classes))
    return tuple(classes)


# -- Reflections and orbits --


def simple_roots(r: int) -> Tuple[PicVector, ...]:
    """e0 - e1 - e2 - e3 followed by e_i - e_{i+1} for 1 <= i < r."""
    _require_rank(r, range(3, 9))
    roots = [(1, -1, -1, -1) + (0,) * (r - 3)]
    for i in range(1, r):
        roots.append(_add((1, basis_vector(r, i)), (-1, basis_vector(r, i + 1))))
    return tuple(roots)


def _reflection_matrix(alpha: PicVector, r: int) -> IntMatrix:
    # s = I + alpha (G alpha)^T, since alpha.alpha = -2.
    g_alpha = mat_vec(intersection_matrix(r), alpha)
    array = np.array(identity_matrix(r + 1), dtype=object) + np.outer(
        np.array(alpha, dtype=object), np.array(g_alpha, dtype=object)
    )
    return as_int_matrix(array.tolist())


def preserves_form(matrix: IntMatrix, r: int) -> bool:
    """M^T G M = G."""
    form = intersection_matrix(r)
    return mat_mul(mat_mul(transpose(matrix), form), matrix) == form


def simple_reflections(r: int) -> Tuple[IntMatrix, ...]:
    """Reflection matrices in the simple roots, one per root.

    Raises:
        SelfCheckError: If some reflection is not an involution, does not
            preserve the form, or moves K.
    """
    K = canonical_class(r)
    reflections = []
    for alpha in simple_roots(r):
        s = _reflection_matrix(alpha, r)
        if not is_identity(mat_mul(s, s)):
            raise SelfCheckError(f"reflection in {alpha} is not an involution")
        if not preserves_form(s, r):
            raise SelfCheckError(f"reflection in {alpha} does not preserve the form")
        if mat_vec(s, K) != K:
            raise SelfCheckError(f"reflection in {alpha} moves K")
        reflections.append(s)
    return tuple(reflections)


def weyl_orbit(
    start: Sequence[int], r: int, limits: Optional[Limits] = None
) -> Tuple[PicVector, ...]:
    """Orbit of a class under W(E_r), breadth-first, sorted.

    Raises:
        CapExceededError: If the orbit outgrows `orbit_cap`.
        SelfCheckError: If an orbit element changes D.D or D.K.
    """
    _require_length(start, r)
    cap = (limits or default_limits()).orbit_cap
    reflections = simple_reflections(r)
    K = canonical_class(r)
    origin = tuple(int(x) for x in start)
    square, degree = intersection(origin, origin), intersection(origin, K)

    seen = {origin}
    queue = deque([origin])
    while queue:
        current = queue.popleft()
        for s in reflections:
            image = mat_vec(s, current)
            if image in seen:
                continue
            if intersection(image, image) != square or intersection(image, K) != degree:
                raise SelfCheckError(
                    f"{image} breaks the intersection numbers of {origin}"
                )
            seen.add(image)
            queue.append(image)
            if len(seen) > cap:
                raise CapExceededError(f"W(E_{r}) orbit of {origin} exceeded {cap}")
    logger.debug("W(E_%d) orbit of %s has %d elements", r, origin, len(seen))
    return tuple(sorted(seen))


def weyl_group_order(r: int, limits: Optional[Limits] = None) -> int:
    """|W(E_r)| = |W(E_r) . e_r| * |W(E_{r-1})|, starting from |W(E_2)| = 2.

    The stabilizer of e_r is generated by the simple reflections orthogonal
    to it, which form the root system of the next smaller degree.
    """
    _require_rank(r, range(2, 9))
    order = 2
    for s in range(3, r + 1):
        order *= len(weyl_orbit(basis_vector(s, s), s, limits))
    return order


# -- Degree 2 and degree 1 involutions --


def geiser_image(D: Sequence[int]) -> PicVector:
    """-K - D on the degree-2 lattice (r = 7)."""
    _require_length(D, 7)
    return tuple(-k - d for k, d in zip(canonical_class(7), D))


def bertini_image(D: Sequence[int]) -> PicVector:
    """-2K - D on the degree-1 lattice (r = 8)."""
    _require_length(D, 8)
    return tuple(-2 * k - d for k, d in zip(canonical_class(8), D))


def sum_of_exceptional(r: int, count: int = 7) -> PicVector:
    """e = e1 + ... + e_count."""
    return (0,) + (1,) * count + (0,) * (r - count)


def _disjoint_tuples(
    classes: Sequence[PicVector], size: int
) -> List[Tuple[PicVector, ...]]:
    if size == 0:
        return [()]
    found = []
    for i, head in enumerate(classes):
        orthogonal = [c for c in classes[i + 1 :] if intersection(c, head) == 0]
        if len(orthogonal) < size - 1:
            continue
        for rest in _disjoint_tuples(orthogonal, size - 1):
            found.append((head,) + rest)
    return found


def disjoint_seven_tuples(limits: Optional[Limits] = None) -> int:
    """Number of 7-sets of pairwise disjoint (-1)-classes on degree 2.

    Raises:
        SelfCheckError: If the tuple sums are not exactly the W(E7)-orbit of e.
    """
    tuples = _disjoint_tuples(minus_one_classes(7), 7)
    sums = {_add(*((1, c) for c in t)) for t in tuples}
    orbit = set(weyl_orbit(sum_of_exceptional(7), 7, limits))
    if sums != orbit or len(sums) != len(tuples):
        raise SelfCheckError("disjoint 7-tuples do not match the orbit of e")
    return len(tuples)


def geiser_pairs(
    limits: Optional[Limits] = None,
) -> List[Tuple[PicVector, PicVector]]:
    """The orbit of e paired by e -> -7K - e, the sum-level Geiser involution.

    Raises:
        SelfCheckError: If the pairing has a fixed point or leaves the orbit.
    """
    orbit = weyl_orbit(sum_of_exceptional(7), 7, limits)
    members = set(orbit)
    K = canonical_class(7)
    pairs = set()
    for x in orbit:
        y = tuple(-7 * k - c for k, c in zip(K, x))
        if y == x or y not in members:
            raise SelfCheckError(f"Geiser pairing fails at {x}")
        pairs.add((min(x, y), max(x, y)))
    logger.debug("%d orbit elements form %d Geiser pairs", len(orbit), len(pairs))
    return sorted(pairs)


# -- The order-7 representative --


def sigma_matrix(r: int) -> IntMatrix:
    """The 7-cycle e1 -> e2 -> ... -> e7 -> e1, fixing e0 (and e8)."""
    _require_rank(r, (7, 8))
    rows = [list(row) for row in identity_matrix(r + 1)]
    for i in range(1, 8):
        rows[i][i] = 0
    for i in range(1, 8):
        rows[i % 7 + 1][i] = 1
    return as_int_matrix(rows)


def sigma_fixed_geiser_pairs(limits: Optional[Limits] = None) -> int:
    """Number of Geiser pairs mapped to themselves by the 7-cycle.

    Raises:
        SelfCheckError: If the count is not congruent to the pair count mod 7.
    """
    sigma = sigma_matrix(7)
    pairs = geiser_pairs(limits)
    fixed = sum(1 for x, y in pairs if mat_vec(sigma, x) in (x, y))
    if (fixed - len(pairs)) % 7:
        raise SelfCheckError(f"{fixed} fixed pairs, not {len(pairs)} mod 7")
    return fixed


def sigma_orbit_sizes_on_minus_one_classes() -> List[int]:
    """Sizes of the 7-cycle orbits on the 56 (-1)-classes of degree 2."""
    sigma = sigma_matrix(7)
    remaining = set(minus_one_classes(7))
    sizes = []
    while remaining:
        current = min(remaining)
        size = 0
        while current in remaining:
            remaining.remove(current)
            size += 1
            current = mat_vec(sigma, current)
        sizes.append(size)
    return sorted(sizes)


def _has_order_seven(matrix: IntMatrix) -> bool:
    try:
        return matrix_order(matrix, 7) == 7
    except CapExceededError:
        return False


def express_in_basis(
    vector: Sequence[int], basis: Sequence[Sequence[int]]
) -> Tuple[int, ...]:
    """Integer coordinates of `vector` in `basis`.

    Raises:
        LatticeError: If the vector is outside the rational span or its
            coordinates are not integral.
    """
    columns = sympy.Matrix(basis).T
    try:
        solution, params = columns.gauss_jordan_solve(sympy.Matrix(vector))
    except ValueError as e:
        raise LatticeError(f"{tuple(vector)} is not in the span of the basis") from e
    if params.shape[0]:
        raise LatticeError("basis vectors are linearly dependent")
    coords = [sympy.Rational(c) for c in solution]
    if any(c.q != 1 for c in coords):
        raise LatticeError(f"{tuple(vector)} has non-integral coordinates {coords}")
    return tuple(int(c) for c in coords)


def order7_invariants(
    r: int, sigma: Optional[IntMatrix] = None
) -> InvariantSublattice:
    """Fixed sublattice of K-perp under an order-7 element of W(E_r).

    Args:
        r: 7 or 8.
        sigma: The order-7 element; defaults to the 7-cycle on e1..e7. Any
            conjugate gives an isometric answer.

    Raises:
        LatticeError: If `sigma` is not an order-7 isometry fixing K.
    """
    _require_rank(r, (7, 8))
    sigma = as_int_matrix(sigma) if sigma is not None else sigma_matrix(r)
    K = canonical_class(r)
    if (
        len(sigma) != r + 1
        or not preserves_form(sigma, r)
        or mat_vec(sigma, K) != K
        or not _has_order_seven(sigma)
    ):
        raise LatticeError("sigma must be an order-7 isometry fixing K")

    k_row = list(mat_vec(intersection_matrix(r), K))
    rows = [k_row] + [
        [sigma[i][j] - int(i == j) for j in range(r + 1)] for i in range(r + 1)
    ]
    basis = integer_kernel(rows, r + 1)
    if len(basis) == 1 and next(x for x in basis[0] if x) < 0:
        basis = [tuple(-x for x in basis[0])]

    gram = tuple(tuple(intersection(u, v) for v in basis) for u in basis)
    gram_matrix = sympy.Matrix(gram)
    result = InvariantSublattice(
        r=r,
        rank=len(basis),
        basis=tuple(basis),
        gram=gram,
        gram_determinant=int(gram_matrix.det()),
        negative_definite=bool(gram_matrix.is_negative_definite),
    )
    logger.debug(
        "Order-7 invariants for r=%d: rank %d, Gram %s", r, result.rank, gram
    )
    return result


# -- Binary forms --


def _definite_sign(gram: IntMatrix) -> int:
    matrix = sympy.Matrix(gram)
    if matrix.is_positive_definite:
        return 1
    if matrix.is_negative_definite:
        return -1
    raise LatticeError(
        f"form {gram} is not definite; its automorphs may be infinite"
    )


def _bilinear(gram: IntMatrix, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


def _representations(gram: IntMatrix, value: int) -> List[IntVector]:
    """All integer x with x^T G x = value, G definite."""
    sign = _definite_sign(gram)
    if value * sign <= 0:
        return []
    inverse = sympy.Matrix(gram).inv()
    # x_i^2 <= (x^T G x) * (G^-1)_ii for a definite G.
    bounds = [
        math.isqrt(int(sympy.floor(value * inverse[i, i]))) for i in range(len(gram))
    ]
    return [
        tuple(x)
        for x in itertools.product(*(range(-b, b + 1) for b in bounds))
        if _bilinear(gram, x, x) == value
    ]


def isometries(
    source: BinaryFormGram, target: BinaryFormGram
) -> Tuple[IntMatrix, ...]:
    """All integer P with P^T * S * P = T for definite S and T, sorted.

    Columns of P are chosen one at a time among the representations of the
    diagonal entries of T, checking the off-diagonal products as they are
    added.

    Raises:
        LatticeError: If either form is indefinite.
    """
    S, T = source.matrix, target.matrix
    _definite_sign(T)
    n = len(T)
    candidates: Dict[int, List[IntVector]] = {
        value: _representations(S, value) for value in {T[i][i] for i in range(n)}
    }
    solutions = []

    def build_column(columns: List[IntVector]) -> None:
        k = len(columns)
        if k == n:
            P = transpose(tuple(columns))
            if determinant(P) in (1, -1):
                solutions.append(P)
            return
        for c in candidates[T[k][k]]:
            if all(_bilinear(S, c, columns[j]) == T[k][j] for j in range(k)):
                build_column(columns + [c])

    build_column([])
    return tuple(sorted(solutions))


def automorph_group(gram: BinaryFormGram) -> AutomorphGroup:
    """Integral automorphs of a definite binary form.

    Raises:
        LatticeError: If the form is indefinite.
        SelfCheckError: If the automorphs fail to form a group containing -I.
    """
    full = isometries(gram, gram)
    members = set(full)
    n = len(gram.matrix)
    minus_identity = tuple(tuple(-x for x in row) for row in identity_matrix(n))
    if identity_matrix(n) not in members or minus_identity not in members:
        raise SelfCheckError("automorph group must contain +-I")
    if any(mat_mul(a, b) not in members for a in full for b in full):
        raise SelfCheckError("automorphs are not closed under multiplication")

    proper = tuple(a for a in full if determinant(a) == 1)
    improper_involutions = tuple(
        a for a in full if determinant(a) == -1 and is_identity(mat_mul(a, a))
    )
    if improper_involutions:
        logger.info(
            "Form %s has %d improper involutions; only the proper automorphs are +-I",
            gram.matrix,
            len(improper_involutions),
        )
    return AutomorphGroup(
        gram=gram,
        full=full,
        proper=proper,
        improper_involutions=improper_involutions,
    )


def gram_equivalence(
    source: BinaryFormGram, target: BinaryFormGram
) -> Optional[IntMatrix]:
    """First P in GL2(Z) with P^T * S * P = T, or None."""
    found = isometries(source, target)
    return found[0] if found else None


def explicit_rank2_basis() -> ExplicitRank2Basis:
    """v = (e - 3C8 + 5K)/3 and w = C8 + K on the degree-1 lattice.

    Here e = e1 + ... + e8 includes C8 = e8. The computed (v, w) is -1; the
    stated form has +1, so the two Gram matrices differ by w -> -w. The
    discrepancy is reported, never silently corrected.

    Raises:
        SelfCheckError: If v is not integral or v, w are not sigma-fixed and
            orthogonal to K.
    """
    K = canonical_class(8)
    e = sum_of_exceptional(8, count=8)
    c8 = basis_vector(8, 8)
    numerator = _add((1, e), (-3, c8), (5, K))
    if any(x % 3 for x in numerator):
        raise SelfCheckError(f"(e - 3C8 + 5K) = {numerator} is not divisible by 3")
    v = tuple(x // 3 for x in numerator)
    w = _add((1, c8), (1, K))

    sigma = sigma_matrix(8)
    for vec in (v, w):
        if mat_vec(sigma, vec) != vec or intersection(vec, K) != 0:
            raise SelfCheckError(f"{vec} is not a sigma-fixed element of K-perp")

    gram = BinaryFormGram(
        matrix=(
            (intersection(v, v), intersection(v, w)),
            (intersection(w, v), intersection(w, w)),
        )
    )
    discrepancy = gram.matrix != STATED_RANK2_GRAM.matrix
    if discrepancy:
        logger.warning(
            "Computed Gram %s differs from the stated %s",
            gram.matrix,
            STATED_RANK2_GRAM.matrix,
        )
    fixed = order7_invariants(8)
    return ExplicitRank2Basis(
        v=v,
        w=w,
        gram=gram,
        stated_gram=STATED_RANK2_GRAM,
        sign_discrepancy=discrepancy,
        change_of_basis=gram_equivalence(gram, STATED_RANK2_GRAM),
        spans_fixed_sublattice=abs(gram.determinant) == abs(fixed.gram_determinant),
    )
