"""Galois descent of the toric Del Pezzo surfaces of degree 6 and 8.

The hexagon fan (degree 6) and the quadrangle fan (degree 8, the quadric)
have finite groups of lattice automorphisms, D12 and D8. A Galois descent is
a subgroup of that group up to conjugacy. For each subgroup H the invariant
Picard rank is

    rank Pic(X)^H = #(ray orbits of H) - rank(M^H),

where M is the character lattice with the dual (inverse-transpose) action.
Rank 1 cases are the candidates for a minimal action of prime order.
"""

import logging
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from src.utils.exceptions import (
    ConfigValidationError,
    InvalidParameterError,
    LatticeError,
    SelfCheckError,
)

from .data_models import DescentCase, Fan2D, FieldDescriptor, RealizationVerdict
from .field_arith import cyclotomic_invariants
from .galois_lattice import cyclotomic_polynomial, group_closure
from .integer_linalg import (
    IntMatrix,
    as_int_matrix,
    characteristic_polynomial,
    determinant,
    fixed_sublattice,
    inverse,
    inverse_transpose,
    mat_mul,
    mat_vec,
    matrix_order,
)
from .knowledge_base import CremonaKnowledgeBase, Limits, default_knowledge_base
from .validators import ParameterValidator

logger = logging.getLogger(__name__)

HEXAGON_RAYS = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))
QUADRANGLE_RAYS = ((1, 0), (0, 1), (-1, 0), (0, -1))

_GROUP_NAMES = {4: "(Z/2)^2", 6: "S3", 8: "D8", 12: "D12"}


def hexagon_fan() -> Fan2D:
    """Fan of the degree-6 Del Pezzo surface: rays +-e1, +-e2, +-(e1+e2)."""
    return Fan2D(rays=HEXAGON_RAYS)


def quadrangle_fan() -> Fan2D:
    """Fan of P1 x P1: rays +-e1, +-e2."""
    return Fan2D(rays=QUADRANGLE_RAYS)


def fan_name(fan: Fan2D) -> Optional[str]:
    """Catalog name of a fan, or None for a fan without labelled cases."""
    return {HEXAGON_RAYS: "hexagon", QUADRANGLE_RAYS: "quadrangle"}.get(fan.rays)


def ray_permutation(fan: Fan2D, matrix: IntMatrix) -> Tuple[int, ...]:
    """Indices of the images of the rays under `matrix`.

    Raises:
        LatticeError: If some ray is not mapped to a ray.
    """
    index = {ray: i for i, ray in enumerate(fan.rays)}
    images = []
    for ray in fan.rays:
        image = mat_vec(matrix, ray)
        if image not in index:
            raise LatticeError(f"{matrix} sends ray {ray} to {image}, not a ray")
        images.append(index[image])
    return tuple(images)


def _preserves(fan: Fan2D, matrix: IntMatrix) -> bool:
    try:
        ray_permutation(fan, matrix)
    except LatticeError:
        return False
    return True


def fan_automorphisms(fan: Fan2D) -> Tuple[IntMatrix, ...]:
    """All of GL2(Z) permuting the rays, in sorted order.

    Every candidate sends e1 and e2 to rays, so its columns are taken from
    the ray vectors.
    """
    found = set()
    for u in fan.rays:
        for v in fan.rays:
            matrix = ((u[0], v[0]), (u[1], v[1]))
            if determinant(matrix) in (1, -1) and _preserves(fan, matrix):
                found.add(matrix)
    logger.debug("Fan with %d rays has %d automorphisms", fan.ray_count, len(found))
    return tuple(sorted(found))


def _ray_orbit_count(fan: Fan2D, subgroup: Sequence[IntMatrix]) -> int:
    parent = list(range(fan.ray_count))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in subgroup:
        for i, j in enumerate(ray_permutation(fan, g)):
            parent[find(i)] = find(j)
    return len({find(i) for i in range(fan.ray_count)})


def _dual_invariant_rank(subgroup: Sequence[IntMatrix]) -> int:
    return len(fixed_sublattice([inverse_transpose(g) for g in subgroup]))


def picard_rank_of_descent(fan: Fan2D, subgroup: Sequence[IntMatrix]) -> int:
    """Rank of the H-invariant Picard lattice of the toric surface.

    Args:
        fan: Complete smooth fan.
        subgroup: Elements (or generators) of H acting on N.

    Raises:
        LatticeError: If some element does not preserve the fan.
    """
    elements = [as_int_matrix(g) for g in subgroup]
    if not elements:
        raise LatticeError("subgroup must contain at least the identity")
    return _ray_orbit_count(fan, elements) - _dual_invariant_rank(elements)


# -- Subgroup enumeration --


def _conjugacy_key(
    subgroup: FrozenSet[IntMatrix], ambient: Sequence[Tuple[IntMatrix, IntMatrix]]
) -> Tuple[IntMatrix, ...]:
    return min(
        tuple(sorted(mat_mul(mat_mul(x, h), x_inv) for h in subgroup))
        for x, x_inv in ambient
    )


def _group_name(elements: Sequence[IntMatrix], cyclic: bool) -> str:
    order = len(elements)
    if order == 1:
        return "1"
    if cyclic:
        return f"Z/{order}"
    return _GROUP_NAMES.get(order, f"order-{order}")


def _generators_of(
    elements: Tuple[IntMatrix, ...], limits: Optional[Limits]
) -> Tuple[IntMatrix, ...]:
    target = set(elements)
    for a, b in combinations_with_replacement(elements, 2):
        gens = (a,) if a == b else (a, b)
        if set(group_closure(gens, limits)) == target:
            return gens
    raise SelfCheckError(
        f"No generating pair found for a group of order {len(elements)}"
    )


def _make_case(
    fan: Fan2D,
    label: str,
    group: Optional[str],
    generators: Tuple[IntMatrix, ...],
    elements: Tuple[IntMatrix, ...],
    limits: Optional[Limits],
) -> DescentCase:
    order = len(elements)
    cap = order + 1
    cyclic = any(matrix_order(g, cap) == order for g in elements)
    return DescentCase(
        label=label,
        group=group or _group_name(elements, cyclic),
        generators=generators,
        subgroup=elements,
        order=order,
        cyclic=cyclic,
        picard_rank=picard_rank_of_descent(fan, elements),
        anisotropic=_dual_invariant_rank(elements) == 0,
    )


def enumerate_descent_cases(
    fan: Fan2D,
    kb: Optional[CremonaKnowledgeBase] = None,
    limits: Optional[Limits] = None,
) -> List[DescentCase]:
    """All subgroups of the fan automorphism group up to conjugacy.

    Labelled catalog cases come first in catalog order; the remaining
    classes follow as "extra-1", "extra-2", ... sorted by order.

    Raises:
        ConfigValidationError: If a catalog case does not preserve the fan or
            two catalog cases are conjugate.
    """
    return list(_enumerate_cached(fan, kb or default_knowledge_base(), limits))


@lru_cache(maxsize=16)
def _enumerate_cached(
    fan: Fan2D, kb: CremonaKnowledgeBase, limits: Optional[Limits]
) -> Tuple[DescentCase, ...]:
    ambient = fan_automorphisms(fan)
    conjugators = [(x, inverse(x)) for x in ambient]

    subgroups = {
        frozenset(group_closure((a, b), limits))
        for a, b in combinations_with_replacement(ambient, 2)
    }
    classes: Dict[Tuple[IntMatrix, ...], FrozenSet[IntMatrix]] = {}
    for subgroup in subgroups:
        classes.setdefault(_conjugacy_key(subgroup, conjugators), subgroup)
    logger.debug("%d subgroups in %d conjugacy classes", len(subgroups), len(classes))

    cases: List[DescentCase] = []
    name = fan_name(fan)
    for entry in kb.get_cases(name) if name else []:
        elements = group_closure(entry.generators, limits)
        if not all(_preserves(fan, g) for g in elements):
            raise ConfigValidationError(
                f"Case {entry.label} does not preserve the fan"
            )
        key = _conjugacy_key(frozenset(elements), conjugators)
        if key not in classes:
            raise ConfigValidationError(
                f"Case {entry.label} is conjugate to an earlier case"
            )
        del classes[key]
        cases.append(
            _make_case(
                fan, entry.label, entry.group, entry.generators, elements, limits
            )
        )

    extras = sorted(classes.items(), key=lambda item: (len(item[1]), item[0]))
    for i, (_, subgroup) in enumerate(extras, start=1):
        elements = tuple(sorted(subgroup))
        cases.append(
            _make_case(
                fan,
                f"extra-{i}",
                None,
                _generators_of(elements, limits),
                elements,
                limits,
            )
        )
    logger.info(
        "Fan %s: %d descent cases (%d labelled)",
        name or "unnamed",
        len(cases),
        len(cases) - len(extras),
    )
    return tuple(cases)


# -- Minimal actions of prime order --


def minimal_order_action(
    fan: Fan2D,
    field: FieldDescriptor,
    ell: int,
    kb: Optional[CremonaKnowledgeBase] = None,
    limits: Optional[Limits] = None,
) -> RealizationVerdict:
    """Can an element of order l act minimally on this toric surface over k?

    A minimal action needs invariant Picard rank 1. The splitting field of
    the torus is then k(zeta_l), a cyclic extension of degree t_l, and the
    torus needs a point of order l, so a rank-1 case is rejected when it is
    non-cyclic, isotropic, or of order different from t_l.

    Raises:
        InvalidParameterError: If ell < 5 or the fan is neither the hexagon
            nor the quadrangle.
        CharacteristicError: If ell equals the characteristic.
    """
    name = fan_name(fan)
    if name is None:
        raise InvalidParameterError(
            "minimal_order_action needs the hexagon or quadrangle fan"
        )
    ParameterValidator.require_field_prime(field, ell, minimum=5)
    t = cyclotomic_invariants(field, ell, limits).t

    rejected: Dict[str, str] = {}
    accepted: Optional[DescentCase] = None
    for case in enumerate_descent_cases(fan, kb, limits):
        if case.picard_rank != 1:
            continue
        if not case.cyclic:
            rejected[case.label] = (
                f"non-cyclic group {case.group}, but k(zeta_{ell})/k is cyclic"
            )
        elif not case.anisotropic:
            rejected[case.label] = f"isotropic: T(k) = E* has no point of order {ell}"
        elif case.order != t:
            rejected[case.label] = f"order {case.order} != t_{ell} = {t}"
        else:
            accepted = case

    tag = "dp6-minimal-action" if name == "hexagon" else "dp8-quadrangle"
    if accepted is None:
        return RealizationVerdict(
            realizable=False,
            reason=f"{tag}: no cyclic anisotropic rank-1 case of order t_{ell} = {t}",
            rejected=rejected,
        )

    # The accepted generator must act on M like the companion of Phi_t.
    dual = inverse_transpose(accepted.generators[0])
    if characteristic_polynomial(dual) != cyclotomic_polynomial(t).coefficients:
        raise SelfCheckError(
            f"Case {accepted.label}: dual generator is not a Phi_{t} action"
        )
    logger.info(
        "Order %d acts minimally on the %s surface via case %s",
        ell,
        name,
        accepted.label,
    )
    return RealizationVerdict(
        realizable=True,
        required_case=accepted.label,
        splitting_field=f"k(zeta_{ell})",
        reason=f"{tag}: torus splits over k(zeta_{ell}) with cyclic group of order {t}",
        rejected=rejected,
    )
