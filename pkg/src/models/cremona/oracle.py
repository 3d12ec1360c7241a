"""Decision procedure: does Cr2(k) contain an element of prime order l?

Orders 2 and 3 are answered by explicit projective matrices and order 5 by
the quadratic map of ``birmap``. For l >= 7 the answer is the torus
criterion t_l in {1, 2, 3, 4, 6}; the report names the minimal model that
realizes the element and embeds the supporting witnesses.
"""

import itertools
import logging
from typing import List, Optional, Sequence

import sympy

from src.utils.exceptions import (
    CapExceededError,
    InvalidParameterError,
    KnowledgeBaseError,
    LatticeError,
    SelfCheckError,
)

from .birmap import (
    ORDER5_FUNDAMENTAL_POINTS,
    order5_map,
    projective_order,
    verify_fundamental_points,
)
from .data_models import (
    ConjugacyCertificate,
    Cyclotomic,
    FieldDescriptor,
    FiniteField,
    IntegerPolynomial,
    LinearWitness,
    MapWitness,
    Mechanism,
    Rationals,
    RealizationReport,
)
from .field_arith import cyclotomic_character_generator, cyclotomic_invariants
from .galois_lattice import (
    block_diagonal,
    companion_matrix,
    norm_quotient_witness,
    torus_has_order_point,
    two_dimensional_torus_witness,
)
from .integer_linalg import (
    IntMatrix,
    as_int_matrix,
    determinant,
    identity_matrix,
    inverse,
    inverse_transpose,
    mat_mul,
    reduce_mod,
)
from .knowledge_base import (
    CremonaKnowledgeBase,
    Limits,
    default_knowledge_base,
    default_limits,
)
from .toric_descent import hexagon_fan, minimal_order_action, quadrangle_fan
from .validators import ParameterValidator

logger = logging.getLogger(__name__)

TORUS_ADMISSIBLE_T = (1, 2, 3, 4, 6)

INVOLUTION_3X3: IntMatrix = ((0, 1, 0), (1, 0, 0), (0, 0, 1))
THREE_CYCLE_3X3: IntMatrix = ((0, 0, 1), (1, 0, 0), (0, 1, 0))

_MECHANISM_BY_T = {
    1: Mechanism.TORUS_CONIC_BUNDLE,
    2: Mechanism.TORUS_CONIC_BUNDLE,
    3: Mechanism.DEL_PEZZO_9,
    4: Mechanism.DEL_PEZZO_8,
    6: Mechanism.DEL_PEZZO_6,
}
_CITATION_BY_MECHANISM = {
    Mechanism.DEL_PEZZO_9: "pgl3-realization",
    Mechanism.DEL_PEZZO_8: "dp8-quadrangle",
    Mechanism.DEL_PEZZO_6: "dp6-minimal-action",
}


# -- Projective linear witnesses --


def _is_scalar(matrix: IntMatrix, modulus: Optional[int]) -> bool:
    m = reduce_mod(matrix, modulus) if modulus else matrix
    n = len(m)
    diagonal = {m[i][i] for i in range(n)}
    off_diagonal = any(m[i][j] for i in range(n) for j in range(n) if i != j)
    return len(diagonal) == 1 and not off_diagonal and 0 not in diagonal


def projective_matrix_order(
    matrix: IntMatrix, characteristic: int = 0, limits: Optional[Limits] = None
) -> int:
    """Least k >= 1 with matrix^k scalar, over Q or over F_p.

    Raises:
        LatticeError: If the matrix is singular (modulo p).
        CapExceededError: If no power within the cap is scalar.
    """
    matrix = as_int_matrix(matrix)
    modulus = characteristic or None
    det = determinant(matrix)
    if det == 0 or (modulus and det % modulus == 0):
        raise LatticeError(f"{matrix} is singular over characteristic {characteristic}")
    cap = (limits or default_limits()).power_iteration_cap
    power = matrix
    for k in range(1, cap + 1):
        if _is_scalar(power, modulus):
            return k
        power = mat_mul(power, matrix)
        if modulus:
            power = reduce_mod(power, modulus)
    raise CapExceededError(f"No scalar power of {matrix} up to {cap}")


def _small_order_witness(
    field: FieldDescriptor, ell: int, limits: Optional[Limits]
) -> LinearWitness:
    matrix = INVOLUTION_3X3 if ell == 2 else THREE_CYCLE_3X3
    p = field.characteristic()
    order = projective_matrix_order(matrix, p, limits)
    if order != ell:
        raise SelfCheckError(f"Linear witness has projective order {order}, not {ell}")
    return LinearWitness(matrices=(matrix,), orders=(order,), characteristic=p)


def pgl3_witness(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> LinearWitness:
    """A 3x3 matrix over F_p of projective order l, for t_l <= 3.

    The matrix is the companion block of an irreducible factor of Phi_l mod p
    (of degree t_l) padded with an identity block.

    Raises:
        InvalidParameterError: If the field is not a prime field or t_l > 3.
        SelfCheckError: If the verified projective order is not l.
    """
    if not isinstance(field, FiniteField) or field.e != 1:
        raise InvalidParameterError(
            f"pgl3_witness needs a prime field F_p, got {field.label()}"
        )
    t = cyclotomic_invariants(field, ell, limits).t
    if t > 3:
        raise InvalidParameterError(f"t_{ell} = {t} > 3 over {field.label()}")

    p = field.p
    x = sympy.Symbol("x")
    _, factors = sympy.Poly(sympy.cyclotomic_poly(ell, x), x, modulus=p).factor_list()
    factor = next(f for f, _ in factors if f.degree() == t)
    coefficients = tuple(int(c) % p for c in reversed(factor.all_coeffs()))
    block = reduce_mod(
        companion_matrix(IntegerPolynomial(coefficients=coefficients)), p
    )
    matrix = block if t == 3 else block_diagonal([block, identity_matrix(3 - t)])

    order = projective_matrix_order(matrix, p, limits)
    if order != ell:
        raise SelfCheckError(f"PGL3 witness over F{p} has order {order}, not {ell}")
    logger.debug("PGL3(F%d) witness of order %d: %s", p, ell, matrix)
    return LinearWitness(matrices=(matrix,), orders=(order,), characteristic=p)


# -- Decision procedure --


def _order5_witness(
    field: FieldDescriptor, limits: Optional[Limits]
) -> MapWitness:
    modulus = field.characteristic() or None
    sigma = order5_map()
    order = projective_order(sigma, modulus=modulus, limits=limits)
    if order != 5:
        raise SelfCheckError(f"The order-5 map has computed order {order}")
    checks = verify_fundamental_points(sigma, ORDER5_FUNDAMENTAL_POINTS)
    return MapWitness(
        components=sigma.to_text(),
        order=order,
        modulus=modulus,
        fundamental_points={
            str(point): ok for point, ok in zip(ORDER5_FUNDAMENTAL_POINTS, checks)
        },
    )


def cremona_has_order(
    field: FieldDescriptor,
    ell: int,
    kb: Optional[CremonaKnowledgeBase] = None,
    limits: Optional[Limits] = None,
) -> RealizationReport:
    """Decide whether Cr2(k) has an element of prime order l.

    Args:
        field: Base field descriptor.
        ell: A prime different from the characteristic.
        kb: Knowledge base for descent cases; defaults to the bundled one.
        limits: Optional caps override.

    Returns:
        RealizationReport with the mechanism, witnesses and citation tags.

    Raises:
        InvalidParameterError: If ell is not prime.
        CharacteristicError: If ell equals the characteristic.
    """
    ParameterValidator.require_prime(ell)
    ParameterValidator.require_coprime_to_characteristic(field, ell)

    if ell in (2, 3):
        return RealizationReport(
            field=field,
            ell=ell,
            exists=True,
            mechanism=Mechanism.LINEAR_WITNESS,
            citations=["classical-small-orders", "linear-witness"],
            linear_witness=_small_order_witness(field, ell, limits),
        )

    invariants = cyclotomic_invariants(field, ell, limits)
    t = invariants.t

    if ell == 5:
        additional: List[Mechanism] = []
        citations = ["classical-small-orders", "dp5-quadratic-map"]
        if t == 4:
            additional.append(Mechanism.DEL_PEZZO_8)
            citations.append("dp8-quadrangle")
        return RealizationReport(
            field=field,
            ell=ell,
            exists=True,
            mechanism=Mechanism.DEL_PEZZO_5,
            additional_mechanisms=additional,
            invariants=invariants,
            citations=citations,
            map_witness=_order5_witness(field, limits),
            notes=["The minimal-model classification applies to l >= 7 only."],
        )

    exists = t in TORUS_ADMISSIBLE_T
    if exists != torus_has_order_point(2, field, ell, limits):
        raise SelfCheckError(
            f"Torus criterion and torus bound disagree for {field.label()}, {ell}"
        )
    citations = ["cremona-torus-equivalence", "torus-criterion"]
    if not exists:
        logger.info(
            "Cr2(%s) has no element of order %d (t = %d)", field.label(), ell, t
        )
        return RealizationReport(
            field=field,
            ell=ell,
            exists=False,
            mechanism=Mechanism.NONE,
            invariants=invariants,
            citations=citations + ["serre-torus-bound"],
            notes=[f"t_{ell} = {t} is not in {{1, 2, 3, 4, 6}}"],
        )

    mechanism = _MECHANISM_BY_T[t]
    citations.append("minimal-models")
    if mechanism in _CITATION_BY_MECHANISM:
        citations.append(_CITATION_BY_MECHANISM[mechanism])
    additional = [Mechanism.DEL_PEZZO_9] if t <= 2 else []

    verdict = None
    if t in (4, 6):
        fan = hexagon_fan() if t == 6 else quadrangle_fan()
        verdict = minimal_order_action(fan, field, ell, kb, limits)
        if not verdict.realizable:
            raise SelfCheckError(f"No minimal action found for t_{ell} = {t}")

    linear = None
    notes: List[str] = []
    if t == 3 and isinstance(field, FiniteField) and field.e == 1:
        linear = pgl3_witness(field, ell, limits)
    if isinstance(field, Cyclotomic):
        notes.append("Geometric realization over Q(zeta_n) is cited, not computed.")

    logger.info(
        "Cr2(%s) has an element of order %d via %s", field.label(), ell, mechanism.value
    )
    return RealizationReport(
        field=field,
        ell=ell,
        exists=True,
        mechanism=mechanism,
        additional_mechanisms=additional,
        invariants=invariants,
        citations=citations,
        linear_witness=linear,
        torus_witness=two_dimensional_torus_witness(field, ell, limits),
        norm_quotient_witness=(
            norm_quotient_witness(field, ell, limits) if t >= 3 else None
        ),
        verdict=verdict,
        notes=notes,
    )


# -- Conjugacy of elements of order 7 --


def _order7_hypotheses(field: FieldDescriptor) -> Optional[str]:
    """None when char k = 0 and k meets Q(zeta_7) only in Q, else the reason."""
    if isinstance(field, Rationals):
        return None
    if isinstance(field, Cyclotomic):
        if cyclotomic_invariants(field, 7).t == 6:
            return None
        return f"{field.label()} meets Q(zeta7) in a proper extension of Q"
    return f"{field.label()} has positive characteristic"


def _left_eigenvalue(
    row: Sequence[int], matrix: IntMatrix, modulus: int
) -> Optional[int]:
    image = [
        sum(row[i] * matrix[i][j] for i in range(len(row))) % modulus
        for j in range(len(matrix[0]))
    ]
    for scalar in range(1, modulus):
        if all((scalar * r - v) % modulus == 0 for r, v in zip(row, image)):
            return scalar
    return None


def order7_conjugacy_certificate(
    field: FieldDescriptor,
    kb: Optional[CremonaKnowledgeBase] = None,
    limits: Optional[Limits] = None,
) -> ConjugacyCertificate:
    """Transitivity of the order-6 fan symmetry on Galois-fixed 7-torsion.

    The 7-torsion of the degree-6 torus of case (vi) is modelled as row
    vectors f in (Z/7)^2, the homomorphisms M/7M -> Z/7. The Galois
    generator with cyclotomic image c fixes f iff f A = c f, where A is the
    action on M. The order-6 symmetry acts on that line by a scalar, the
    multiplier; it is transitive on the nonzero points iff the multiplier is
    a primitive root mod 7.

    Returns:
        A certificate; hypotheses_ok is False (with a logged warning) when k
        has positive characteristic or meets Q(zeta_7) beyond Q.
    """
    citations = ["order7-conjugacy", "descent-equivariance"]
    problem = _order7_hypotheses(field)
    if problem is not None:
        logger.warning("Order-7 conjugacy hypotheses fail: %s", problem)
        return ConjugacyCertificate(
            field=field, hypotheses_ok=False, citations=citations, reason=problem
        )

    kb = kb or default_knowledge_base()
    case = kb.get_case("hexagon", "(vi)")
    if case is None:
        raise KnowledgeBaseError("hexagon case (vi) is missing from the catalog")
    action = inverse_transpose(case.generators[0])
    c = cyclotomic_character_generator(field, 7, limits) % 7

    fixed = [
        row
        for row in itertools.product(range(7), repeat=2)
        if _left_eigenvalue(row, action, 7) == c or not any(row)
    ]
    if len(fixed) != 7:
        raise SelfCheckError(f"Galois-fixed 7-torsion has order {len(fixed)}, not 7")
    generator = next(row for row in fixed if any(row))
    multiplier = _left_eigenvalue(generator, inverse(action), 7)
    if multiplier is None:
        raise SelfCheckError("The order-6 symmetry does not preserve the fixed line")
    transitive = int(sympy.n_order(multiplier, 7)) == 6
    logger.info(
        "Order-7 certificate over %s: c = %d, multiplier = %d, transitive = %s",
        field.label(),
        c,
        multiplier,
        transitive,
    )
    return ConjugacyCertificate(
        field=field,
        hypotheses_ok=True,
        cyclotomic_character=c,
        fixed_torsion_order=len(fixed),
        multiplier=multiplier,
        transitive=transitive,
        assumptions=[kb.cite("descent-equivariance")],
        citations=citations,
        reason="the order-6 symmetry permutes the six nontrivial fixed points",
    )
