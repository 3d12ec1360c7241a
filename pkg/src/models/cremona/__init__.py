"""Prime orders of elements of the plane Cremona group Cr2(k).

Public API:
    decide() - One-call shortcut: field text and prime in, report out.
    create_knowledge_base() - Load the descent-case and citation catalog.
    cremona_has_order() - The decision procedure on a parsed field.
    order7_conjugacy_certificate() - Conjugacy of elements of order 7.
    run_selftest() - Recompute every reference table.
"""

from pathlib import Path
from typing import Optional

from .birmap import (
    PlaneRationalMap,
    compose,
    evaluate,
    identity_map,
    order5_map,
    parse_map,
    projective_order,
    projectively_equal,
    standard_involution,
    verify_fundamental_points,
)
from .bounds import (
    minkowski_bound,
    minkowski_report,
    pgl_bound,
    pgl_min_dimension,
    pgl_order_excluded,
    torus_bound,
)
from .data_models import (
    AutomorphGroup,
    BinaryFormGram,
    BoundReport,
    ConjugacyCertificate,
    Cyclotomic,
    CyclotomicInvariants,
    DescentCase,
    FieldDescriptor,
    FiniteField,
    Mechanism,
    Rationals,
    RealizationReport,
    RealizationVerdict,
    SelftestReport,
    TorusDescription,
)
from .field_arith import (
    cyclotomic_character_generator,
    cyclotomic_invariants,
    euler_phi,
    l_adic_valuation,
    multiplicative_order,
    parse_field,
)
from .galois_lattice import (
    cyclotomic_polynomial,
    group_closure,
    invariant_rank,
    is_anisotropic,
    norm_quotient_torus,
    sharp_torus,
    torsion_injectivity_check,
    torus_has_order_point,
    two_dimensional_torus_witness,
)
from .knowledge_base import (
    KB_DIR,
    CremonaKnowledgeBase,
    Limits,
    default_limits,
    load_limits,
)
from .oracle import (
    cremona_has_order,
    order7_conjugacy_certificate,
    pgl3_witness,
    projective_matrix_order,
)
from .selftest import run_selftest
from .toric_descent import (
    enumerate_descent_cases,
    hexagon_fan,
    minimal_order_action,
    picard_rank_of_descent,
    quadrangle_fan,
)
from .weyl_lattice import (
    automorph_group,
    explicit_rank2_basis,
    geiser_pairs,
    minus_one_classes,
    order7_invariants,
    weyl_group_order,
    weyl_orbit,
)


def create_knowledge_base(kb_dir: Optional[Path] = None) -> CremonaKnowledgeBase:
    """Load the catalog from `kb_dir`, defaulting to configs/cremona_kb/."""
    return CremonaKnowledgeBase(kb_dir or KB_DIR)


def decide(
    field_text: str,
    ell: int,
    kb_dir: Optional[Path] = None,
    limits_path: Optional[Path] = None,
) -> RealizationReport:
    """One-call shortcut: parse the field and run the decision procedure.

    Args:
        field_text: Field descriptor such as ``Q``, ``F17`` or ``Q(zeta5)``.
        ell: The prime.
        kb_dir: Optional override for the catalog directory.
        limits_path: Optional override for limits.yaml.

    Returns:
        RealizationReport for (k, l).
    """
    kb = create_knowledge_base(kb_dir)
    limits = load_limits(limits_path) if limits_path else None
    return cremona_has_order(parse_field(field_text), ell, kb, limits)


__all__ = [
    "create_knowledge_base",
    "decide",
    "AutomorphGroup",
    "BinaryFormGram",
    "BoundReport",
    "ConjugacyCertificate",
    "CremonaKnowledgeBase",
    "Cyclotomic",
    "CyclotomicInvariants",
    "DescentCase",
    "FieldDescriptor",
    "FiniteField",
    "Limits",
    "Mechanism",
    "PlaneRationalMap",
    "Rationals",
    "RealizationReport",
    "RealizationVerdict",
    "SelftestReport",
    "TorusDescription",
    "automorph_group",
    "compose",
    "cremona_has_order",
    "cyclotomic_character_generator",
    "cyclotomic_invariants",
    "cyclotomic_polynomial",
    "default_limits",
    "enumerate_descent_cases",
    "euler_phi",
    "evaluate",
    "explicit_rank2_basis",
    "geiser_pairs",
    "group_closure",
    "hexagon_fan",
    "identity_map",
    "invariant_rank",
    "is_anisotropic",
    "l_adic_valuation",
    "minimal_order_action",
    "minkowski_bound",
    "minkowski_report",
    "minus_one_classes",
    "multiplicative_order",
    "norm_quotient_torus",
    "order5_map",
    "order7_conjugacy_certificate",
    "order7_invariants",
    "parse_field",
    "parse_map",
    "pgl3_witness",
    "pgl_bound",
    "pgl_min_dimension",
    "pgl_order_excluded",
    "picard_rank_of_descent",
    "projective_matrix_order",
    "projective_order",
    "projectively_equal",
    "quadrangle_fan",
    "run_selftest",
    "sharp_torus",
    "standard_involution",
    "torsion_injectivity_check",
    "torus_bound",
    "torus_has_order_point",
    "two_dimensional_torus_witness",
    "verify_fundamental_points",
    "weyl_group_order",
    "weyl_orbit",
]
