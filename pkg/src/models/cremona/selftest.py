"""Acceptance suite: exact recomputation of the reference tables.

Each check recomputes a published table or count from scratch and compares
it with the expected value. Checks run sequentially; a library error inside
a check marks that check as failed instead of aborting the run.
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

import sympy

from src.utils.exceptions import CremonaOracleError

from .birmap import (
    ORDER5_FUNDAMENTAL_POINTS,
    compose,
    identity_map,
    order5_map,
    projective_order,
    projectively_equal,
    verify_fundamental_points,
)
from .bounds import minkowski_bound, pgl_bound, torus_bound
from .data_models import (
    BinaryFormGram,
    FiniteField,
    Mechanism,
    Rationals,
    SelftestCheck,
    SelftestReport,
)
from .field_arith import cyclotomic_invariants
from .galois_lattice import (
    FINITE_ORDER_REPRESENTATIVES_2X2,
    norm_quotient_torus,
    norm_quotient_witness,
    torsion_injectivity_check,
)
from .integer_linalg import characteristic_polynomial
from .knowledge_base import CremonaKnowledgeBase, Limits
from .oracle import cremona_has_order, order7_conjugacy_certificate
from .toric_descent import enumerate_descent_cases, hexagon_fan
from .weyl_lattice import (
    STATED_RANK2_GRAM,
    automorph_group,
    canonical_class,
    disjoint_seven_tuples,
    express_in_basis,
    geiser_pairs,
    gram_equivalence,
    minus_one_classes,
    order7_invariants,
    sum_of_exceptional,
    weyl_group_order,
    weyl_orbit,
)

logger = logging.getLogger(__name__)

HEXAGON_RANKS = {
    "(i)": 3,
    "(ii)": 3,
    "(iii)": 2,
    "(iv)": 2,
    "(v)": 2,
    "(vi)": 1,
    "(vii)": 1,
}
MINUS_ONE_COUNTS = {3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
RATIONAL_PRIMES_WITH_ELEMENTS = [2, 3, 5, 7]

Outcome = Tuple[bool, str]
Context = Tuple[Optional[CremonaKnowledgeBase], Optional[Limits]]


def _check_hexagon_ranks(ctx: Context) -> Outcome:
    kb, limits = ctx
    cases = enumerate_descent_cases(hexagon_fan(), kb, limits)
    ranks = {c.label: c.picard_rank for c in cases if c.label in HEXAGON_RANKS}
    return ranks == HEXAGON_RANKS, f"ranks {ranks}"


def _check_weyl_counts(ctx: Context) -> Outcome:
    _, limits = ctx
    orbit = weyl_orbit(sum_of_exceptional(7), 7, limits)
    pairs = geiser_pairs(limits)
    tuples = disjoint_seven_tuples(limits)
    index = weyl_group_order(7, limits) // len(orbit)
    ok = (
        len(orbit) == 576
        and len(pairs) == 288
        and len(pairs) % 7 == 1
        and tuples == 576
        and index == 5040
    )
    detail = (
        f"orbit {len(orbit)}, pairs {len(pairs)}, 7-tuples {tuples}, "
        f"|W|/orbit {index}"
    )
    return ok, detail


def _check_minus_one_counts(ctx: Context) -> Outcome:
    counts = {r: len(minus_one_classes(r)) for r in MINUS_ONE_COUNTS}
    return counts == MINUS_ONE_COUNTS, f"counts {counts}"


def _check_order7_invariants(ctx: Context) -> Outcome:
    degree2 = order7_invariants(7)
    K = canonical_class(7)
    target = tuple(2 * e + 7 * k for e, k in zip(sum_of_exceptional(7), K))
    coordinates = express_in_basis(target, degree2.basis)

    degree1 = order7_invariants(8)
    gram = BinaryFormGram(matrix=degree1.gram)  # type: ignore[arg-type]
    equivalent = gram_equivalence(gram, STATED_RANK2_GRAM) is not None
    ok = (
        degree2.rank == 1
        and degree1.rank == 2
        and abs(degree1.gram_determinant) == 7
        and degree1.negative_definite
        and equivalent
    )
    return ok, f"2e+7K = {coordinates} * basis; degree-1 Gram {degree1.gram}"


def _check_automorphs(ctx: Context) -> Outcome:
    group = automorph_group(STATED_RANK2_GRAM)
    proper = set(group.proper)
    ok = (
        proper == {((1, 0), (0, 1)), ((-1, 0), (0, -1))}
        and len(group.full) == 4
        and bool(group.improper_involutions)
    )
    return ok, f"|full| = {len(group.full)}, |proper| = {len(group.proper)}"


def _check_cyclotomic_invariants(ctx: Context) -> Outcome:
    _, limits = ctx
    rational = [
        cyclotomic_invariants(Rationals(), ell, limits)
        for ell in sympy.primerange(3, 101)
    ]
    rational_ok = all(inv.t == inv.ell - 1 and inv.m == 1 for inv in rational)
    f2 = cyclotomic_invariants(FiniteField(p=2), 7, limits)
    f17 = cyclotomic_invariants(FiniteField(p=17), 13, limits)
    ok = rational_ok and f2.t == 3 and (f17.t, f17.m) == (6, 1)
    return ok, f"(F2,7) t={f2.t}; (F17,13) t={f17.t}, m={f17.m}"


def _check_bounds(ctx: Context) -> Outcome:
    _, limits = ctx
    minkowski = {
        args: minkowski_bound(*args) for args in ((1, 2), (6, 7), (2, 7))
    }
    pgl_q = pgl_bound(2, Rationals(), 7, limits)
    pgl_f2 = pgl_bound(2, FiniteField(p=2), 7, limits)
    torus_7 = torus_bound(2, Rationals(), 7, limits).bound
    torus_11 = torus_bound(2, Rationals(), 11, limits).bound
    ok = (
        minkowski == {(1, 2): 1, (6, 7): 1, (2, 7): 0}
        and pgl_q.bound == 0
        and (pgl_q.certificate or "").startswith("pgl-exclusion")
        and pgl_f2.bound == 1
        and (torus_7, torus_11) == (1, 0)
    )
    return ok, f"minkowski {minkowski}; PGL3 Q/F2 {pgl_q.bound}/{pgl_f2.bound}"


def _check_oracle(ctx: Context) -> Outcome:
    kb, limits = ctx
    rational = [
        ell
        for ell in sympy.primerange(2, 101)
        if cremona_has_order(Rationals(), ell, kb, limits).exists
    ]
    f17 = cremona_has_order(FiniteField(p=17), 13, kb, limits)
    f2 = cremona_has_order(FiniteField(p=2), 7, kb, limits)
    ok = (
        rational == RATIONAL_PRIMES_WITH_ELEMENTS
        and f17.exists
        and f17.mechanism is Mechanism.DEL_PEZZO_6
        and f2.exists
    )
    return ok, f"Q: {rational}; (F17,13) {f17.mechanism.value}"


def _check_order5_map(ctx: Context) -> Outcome:
    _, limits = ctx
    sigma = order5_map()
    identity = identity_map()
    power = sigma
    early = []
    for _ in range(4):
        early.append(projectively_equal(power, identity))
        power = compose(sigma, power, limits=limits)
    order = projective_order(sigma, limits=limits)
    points = verify_fundamental_points(sigma, ORDER5_FUNDAMENTAL_POINTS)
    (generic,) = verify_fundamental_points(sigma, [(1, 2, 3)])
    ok = order == 5 and not any(early) and all(points) and not generic
    return ok, f"order {order}; fundamental points {points}"


def _check_conjugacy(ctx: Context) -> Outcome:
    kb, limits = ctx
    certificate = order7_conjugacy_certificate(Rationals(), kb, limits)
    ok = (
        certificate.hypotheses_ok
        and certificate.fixed_torsion_order == 7
        and certificate.transitive
    )
    return ok, f"multiplier {certificate.multiplier}"


def _check_torsion_injectivity(ctx: Context) -> Outcome:
    _, limits = ctx
    results = {
        ell: torsion_injectivity_check(ell, FINITE_ORDER_REPRESENTATIVES_2X2, limits)
        for ell in (3, 5, 7, 11, 13)
    }
    return all(results.values()), f"{results}"


def _check_norm_quotient(ctx: Context) -> Outcome:
    _, limits = ctx
    torus = norm_quotient_torus(Rationals(), 7, limits)
    charpoly = characteristic_polynomial(torus.character_lattice.generators[0])
    witness = norm_quotient_witness(Rationals(), 7, limits)
    ok = charpoly == (1, -1, 1) and witness.passed
    return ok, f"charpoly {charpoly}; Psi({witness.generator}) = {witness.psi_value}"


CHECKS: List[Tuple[str, Callable[[Context], Outcome]]] = [
    ("hexagon Picard ranks", _check_hexagon_ranks),
    ("Weyl orbit counts", _check_weyl_counts),
    ("(-1)-class counts", _check_minus_one_counts),
    ("order-7 invariant sublattices", _check_order7_invariants),
    ("binary form automorphs", _check_automorphs),
    ("cyclotomic invariants", _check_cyclotomic_invariants),
    ("Minkowski and Serre bounds", _check_bounds),
    ("oracle decisions", _check_oracle),
    ("order-5 map", _check_order5_map),
    ("order-7 conjugacy", _check_conjugacy),
    ("reduction mod l", _check_torsion_injectivity),
    ("norm-quotient torus", _check_norm_quotient),
]


def run_selftest(
    kb: Optional[CremonaKnowledgeBase] = None, limits: Optional[Limits] = None
) -> SelftestReport:
    """Run every acceptance check in order and collect the outcomes."""
    results: List[SelftestCheck] = []
    for number, (name, check) in enumerate(CHECKS, start=1):
        try:
            passed, detail = check((kb, limits))
        except CremonaOracleError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        if passed:
            logger.debug("Check %d (%s) passed: %s", number, name, detail)
        else:
            logger.error("Check %d (%s) failed: %s", number, name, detail)
        results.append(
            SelftestCheck(number=number, name=name, passed=passed, detail=detail)
        )
    report = SelftestReport(checks=results)
    logger.info(
        "Selftest: %d of %d checks passed",
        len(results) - len(report.failures),
        len(results),
    )
    return report


def summary_rows(report: SelftestReport) -> List[Dict[str, str]]:
    """Table rows for plain-text rendering."""
    return [
        {
            "#": str(check.number),
            "check": check.name,
            "result": "PASS" if check.passed else "FAIL",
            "detail": check.detail,
        }
        for check in report.checks
    ]
