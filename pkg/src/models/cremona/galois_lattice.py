"""Lattices with finite group actions and the tori they define.

A k-torus is handled through its character lattice M with the action of a
finite Galois group Gamma, given by unimodular integer matrices. This module
builds the cyclotomic polynomials behind the norm-quotient torus, closes
generator sets into explicit finite groups, computes invariant sublattices,
and checks that reduction mod l is faithful on finite-order matrices.
"""

import logging
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from src.utils.exceptions import (
    CapExceededError,
    InvalidParameterError,
    LatticeError,
    SelfCheckError,
)

from .bounds import torus_bound
from .data_models import (
    FieldDescriptor,
    GaloisLattice,
    IntegerPolynomial,
    NormQuotientWitness,
    TorusDescription,
)
from .field_arith import (
    cyclotomic_character_generator,
    cyclotomic_invariants,
    euler_phi,
)
from .integer_linalg import (
    IntMatrix,
    IntVector,
    as_int_matrix,
    determinant,
    fixed_sublattice,
    identity_matrix,
    mat_mul,
    matrix_order,
    reduce_mod,
)
from .knowledge_base import Limits, default_limits
from .validators import ParameterValidator

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")

# One matrix per conjugacy class of finite-order elements of GL2(Z).
FINITE_ORDER_REPRESENTATIVES_2X2: Tuple[IntMatrix, ...] = (
    ((1, 0), (0, 1)),
    ((-1, 0), (0, -1)),
    ((1, 0), (0, -1)),
    ((0, 1), (1, 0)),
    ((0, -1), (1, -1)),
    ((0, -1), (1, 0)),
    ((1, -1), (1, 0)),
)


# -- Cyclotomic polynomials --


def _x_power_minus_one(t: int) -> sympy.Poly:
    return sympy.Poly(_X**t - 1, _X, domain="ZZ")


@lru_cache(maxsize=None)
def _cyclotomic_poly(t: int) -> sympy.Poly:
    product = sympy.Poly(1, _X, domain="ZZ")
    for d in sympy.divisors(t)[:-1]:
        product *= _cyclotomic_poly(d)
    quotient, remainder = sympy.div(_x_power_minus_one(t), product)
    if not remainder.is_zero:
        raise SelfCheckError(f"x^{t} - 1 is not divisible by its proper factors")
    return quotient


def cyclotomic_polynomial(t: int) -> IntegerPolynomial:
    """Phi_t by exact division of x^t - 1 by Phi_d over proper divisors d | t.

    Raises:
        InvalidParameterError: If t < 1.
        SelfCheckError: If the result disagrees with its degree phi(t).
    """
    ParameterValidator.require_positive(t, "t")
    phi = IntegerPolynomial.from_sympy(_cyclotomic_poly(t))
    if phi.degree != euler_phi(t) or phi.coefficients[-1] != 1:
        raise SelfCheckError(f"Phi_{t} = {phi} is not monic of degree phi({t})")
    return phi


def psi_cofactor(t: int) -> IntegerPolynomial:
    """Psi_t = (x^t - 1) / Phi_t, with Phi_t * Psi_t = x^t - 1 checked."""
    ParameterValidator.require_positive(t, "t")
    phi = _cyclotomic_poly(t)
    psi, remainder = sympy.div(_x_power_minus_one(t), phi)
    if not remainder.is_zero or phi * psi != _x_power_minus_one(t):
        raise SelfCheckError(f"Phi_{t} * Psi_{t} != x^{t} - 1")
    return IntegerPolynomial.from_sympy(psi)


def companion_matrix(poly: IntegerPolynomial) -> IntMatrix:
    """Companion matrix of a monic polynomial; its characteristic polynomial is `poly`.

    Raises:
        LatticeError: If `poly` is not monic of positive degree.
    """
    d = poly.degree
    if d < 1 or poly.coefficients[-1] != 1:
        raise LatticeError(f"{poly} is not monic of positive degree")
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        rows[i][d - 1] = -poly.coefficients[i]
        if i + 1 < d:
            rows[i + 1][i] = 1
    return as_int_matrix(rows)


def block_diagonal(blocks: Sequence[IntMatrix]) -> IntMatrix:
    """Direct sum of square integer matrices."""
    if not blocks:
        raise LatticeError("block_diagonal needs at least one block")
    return as_int_matrix(sympy.diag(*[sympy.Matrix(b) for b in blocks]).tolist())


# -- Finite groups and lattices --


def group_closure(
    generators: Iterable[IntMatrix], limits: Optional[Limits] = None
) -> Tuple[IntMatrix, ...]:
    """Multiplicative closure of unimodular generators, sorted.

    Args:
        generators: Square integer matrices of one size with determinant +-1.
        limits: Optional caps override; `group_closure_cap` bounds the size.

    Returns:
        All group elements in lexicographic order, identity included.

    Raises:
        LatticeError: On empty, mismatched or non-unimodular generators.
        CapExceededError: If the closure outgrows the cap (infinite or
            oversized group).
    """
    cap = (limits or default_limits()).group_closure_cap
    gens = [as_int_matrix(g) for g in generators]
    if not gens:
        raise LatticeError("group_closure needs at least one generator")
    n = len(gens[0])
    for g in gens:
        if len(g) != n:
            raise LatticeError(f"generator {g} is not {n}x{n}")
        if determinant(g) not in (1, -1):
            raise LatticeError(f"generator {g} is not invertible over Z")

    identity = identity_matrix(n)
    elements = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            for g in gens:
                product = mat_mul(element, g)
                if product in elements:
                    continue
                elements.add(product)
                next_frontier.append(product)
                if len(elements) > cap:
                    raise CapExceededError(
                        f"Group closure exceeded {cap} elements: infinite or "
                        "oversized group"
                    )
        frontier = next_frontier

    logger.debug(
        "Closed %d generators into a group of order %d", len(gens), len(elements)
    )
    return tuple(sorted(elements))


def make_galois_lattice(
    generators: Sequence[IntMatrix], limits: Optional[Limits] = None
) -> GaloisLattice:
    """Build a GaloisLattice from generators by computing their closure."""
    elements = group_closure(generators, limits)
    gens = tuple(as_int_matrix(g) for g in generators)
    return GaloisLattice(rank=len(gens[0]), generators=gens, elements=elements)


def fixed_sublattice_basis(lattice: GaloisLattice) -> List[IntVector]:
    """Saturated basis of M^Gamma."""
    return fixed_sublattice(lattice.generators)


def invariant_rank(lattice: GaloisLattice) -> int:
    """Rank of the sublattice fixed by every group element."""
    return len(fixed_sublattice_basis(lattice))


def is_anisotropic(torus: TorusDescription) -> bool:
    """True iff the character lattice has no nonzero invariant vector."""
    return invariant_rank(torus.character_lattice) == 0


# -- Tori --


def weil_restriction_module(
    t: int, limits: Optional[Limits] = None
) -> TorusDescription:
    """R_{E/k}(G_m) for a cyclic extension E/k of degree t.

    The character lattice is Z[Gamma], the generator acting by the cyclic
    shift (companion matrix of x^t - 1).
    """
    ParameterValidator.require_positive(t, "t")
    shift = companion_matrix(IntegerPolynomial.from_sympy(_x_power_minus_one(t)))
    return TorusDescription(
        character_lattice=make_galois_lattice([shift], limits),
        splitting_degree=t,
        label="R_{E/k}(G_m)",
    )


def norm_quotient_witness(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> NormQuotientWitness:
    """Check that Psi(c) is prime to l for the cyclotomic-character image c.

    Then Psi(gamma) acts on the l^m-torsion of E* by an automorphism, so the
    norm-quotient torus contains it.
    """
    invariants = cyclotomic_invariants(field, ell, limits)
    c = cyclotomic_character_generator(field, ell, limits)
    modulus = ell**invariants.m
    psi_value = psi_cofactor(invariants.t).evaluate(c)
    passed = psi_value % ell != 0
    if not passed:
        logger.warning(
            "Psi(%d) = %d is divisible by %d over %s", c, psi_value, ell, field.label()
        )
    return NormQuotientWitness(
        generator=c, modulus=modulus, psi_value=psi_value, passed=passed
    )


def norm_quotient_torus(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> TorusDescription:
    """The phi(t)-dimensional torus with character module Z[x]/Phi_t(x).

    The Gamma-generator acts by the companion matrix of Phi_t. When t = 1 this
    is the split line with trivial action. The exhibited l-power torsion is
    recorded only if the Psi witness passes.
    """
    invariants = cyclotomic_invariants(field, ell, limits)
    t = invariants.t
    generator = companion_matrix(cyclotomic_polynomial(t))
    witness = norm_quotient_witness(field, ell, limits)
    return TorusDescription(
        character_lattice=make_galois_lattice([generator], limits),
        splitting_degree=t,
        label=f"norm-quotient of dimension {euler_phi(t)}",
        order_point_exponent=invariants.m if witness.passed else None,
    )


def torsion_injectivity_check(
    ell: int, sample: Iterable[IntMatrix], limits: Optional[Limits] = None
) -> bool:
    """Is reduction mod l injective and order-preserving on `sample`?

    Raises:
        InvalidParameterError: If ell < 3 or not prime.
        CapExceededError: If a sample matrix has no finite order within the
            power-iteration cap.
    """
    ParameterValidator.require_prime(ell)
    if ell < 3:
        raise InvalidParameterError(f"l >= 3 required, got {ell}")
    cap = (limits or default_limits()).power_iteration_cap

    seen = {}
    for matrix in (as_int_matrix(m) for m in sample):
        integral_order = matrix_order(matrix, cap)
        reduced = reduce_mod(matrix, ell)
        if matrix_order(matrix, cap, modulus=ell) != integral_order:
            logger.info("Order of %s drops modulo %d", matrix, ell)
            return False
        if seen.setdefault(reduced, matrix) != matrix:
            logger.info("%s and %s agree modulo %d", seen[reduced], matrix, ell)
            return False
    return True


def torus_has_order_point(
    dim: int, field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> bool:
    """Does some dim-dimensional k-torus have a k-point of order l?

    True iff phi(t_l) <= dim, i.e. the torus bound is positive and the
    product construction attains it.
    """
    return torus_bound(dim, field, ell, limits).bound > 0


def two_dimensional_torus_witness(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> Optional[TorusDescription]:
    """An explicit 2-dimensional torus with a point of order l, if one exists.

    Split G_m^2 for t = 1, R_{k(zeta_l)/k}(G_m) for t = 2 and the
    norm-quotient torus for t in {3, 4, 6}. None otherwise.
    """
    invariants = cyclotomic_invariants(field, ell, limits)
    t, m = invariants.t, invariants.m
    if t == 1:
        return TorusDescription(
            character_lattice=make_galois_lattice([identity_matrix(2)], limits),
            splitting_degree=1,
            label="G_m^2",
            order_point_exponent=2 * m,
        )
    if t == 2:
        torus = weil_restriction_module(2, limits)
        return torus.model_copy(update={"order_point_exponent": m})
    if t in (3, 4, 6):
        return norm_quotient_torus(field, ell, limits)
    return None


def sharp_torus(
    dim: int, field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> TorusDescription:
    """T_1^s x G_m^(dim - s*phi(t)) with s = floor(dim / phi(t)).

    Its exhibited torsion exponent m*s is checked against the torus bound.

    Raises:
        SelfCheckError: If the construction does not attain the bound.
    """
    ParameterValidator.require_positive(dim, "dim")
    invariants = cyclotomic_invariants(field, ell, limits)
    t, m = invariants.t, invariants.m
    phi = euler_phi(t)
    s = dim // phi
    blocks = [companion_matrix(cyclotomic_polynomial(t))] * s
    if dim - s * phi:
        blocks.append(identity_matrix(dim - s * phi))

    exponent: Optional[int] = m * s
    if s and not norm_quotient_witness(field, ell, limits).passed:
        exponent = None
    bound = torus_bound(dim, field, ell, limits).bound
    if exponent != bound:
        raise SelfCheckError(
            f"Product torus exhibits nu_{ell} = {exponent}, bound is {bound}"
        )
    return TorusDescription(
        character_lattice=make_galois_lattice([block_diagonal(blocks)], limits),
        splitting_degree=t,
        label=f"T_1^{s} x G_m^{dim - s * phi}",
        order_point_exponent=exponent,
    )
