"""Minkowski and Serre bounds on l-parts of finite groups.

All bounds are exponents nu_l, never group orders. A zero PGL bound is a
certificate that PGL_{n+1}(k) has no element of order l; a positive bound
certifies nothing, as the estimate only goes one way.
"""

import logging
from typing import Optional

from src.utils.exceptions import SelfCheckError

from .data_models import BoundContext, BoundReport, FieldDescriptor
from .field_arith import cyclotomic_invariants, euler_phi, l_adic_valuation
from .knowledge_base import Limits
from .validators import ParameterValidator

logger = logging.getLogger(__name__)


def minkowski_bound(n: int, ell: int) -> int:
    """M(n, l) = sum over k >= 0 of floor(n / (l^k (l - 1))).

    Raises:
        InvalidParameterError: If n < 1 or ell is not prime.
    """
    ParameterValidator.require_positive(n, "n")
    ParameterValidator.require_prime(ell)
    total = 0
    denominator = ell - 1
    while denominator <= n:
        total += n // denominator
        denominator *= ell
    return total


def minkowski_report(n: int, ell: int) -> BoundReport:
    """Minkowski's bound for finite subgroups of GL_n(Q) as a report."""
    return BoundReport(
        context=BoundContext.GL_Q,
        bound=minkowski_bound(n, ell),
        ell=ell,
        size=n,
        certificate="minkowski-bound",
    )


def pgl_bound(
    n: int, field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> BoundReport:
    """Serre's bound on nu_l of finite subgroups of PGL_{n+1}(k).

    Evaluates the sum of m_l + nu_l(s) over 2 <= s <= n+1 with t_l | s. When
    t_l >= n + 2 the sum is empty and the report carries the exclusion
    certificate.

    Args:
        n: Projective dimension, at least 1.
        field: Base field.
        ell: Odd prime different from the characteristic.
        limits: Optional caps override.

    Returns:
        BoundReport with context PGL.
    """
    ParameterValidator.require_positive(n, "n")
    invariants = cyclotomic_invariants(field, ell, limits)
    t, m = invariants.t, invariants.m
    bound = sum(
        m + l_adic_valuation(s, ell) for s in range(2, n + 2) if s % t == 0
    )
    certificate = None
    if t >= n + 2:
        certificate = f"pgl-exclusion: t_{ell} = {t} >= n + 2 = {n + 2}"
    logger.debug("PGL_%d bound over %s at %d: %d", n + 1, field.label(), ell, bound)
    return BoundReport(
        context=BoundContext.PGL,
        bound=bound,
        ell=ell,
        size=n,
        field=field,
        invariants=invariants,
        certificate=certificate,
    )


def torus_bound(
    dim: int, field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> BoundReport:
    """Serre's bound m_l * floor(dim / phi(t_l)) for finite subgroups of T(k)."""
    ParameterValidator.require_positive(dim, "dim")
    invariants = cyclotomic_invariants(field, ell, limits)
    capacity = dim // euler_phi(invariants.t)
    return BoundReport(
        context=BoundContext.TORUS,
        bound=invariants.m * capacity,
        ell=ell,
        size=dim,
        field=field,
        invariants=invariants,
        certificate="serre-torus-bound" if capacity else None,
    )


def pgl_order_excluded(
    n: int, field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> bool:
    """True when PGL_{n+1}(k) provably has no element of order l.

    False means no information, not existence.
    """
    return pgl_bound(n, field, ell, limits).bound == 0


def pgl_min_dimension(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> int:
    """Least n with a positive PGL_{n+1} bound: max(1, t_l - 1)."""
    invariants = cyclotomic_invariants(field, ell, limits)
    n = max(1, invariants.t - 1)
    if pgl_bound(n, field, ell, limits).bound == 0:
        raise SelfCheckError(f"PGL_{n + 1} bound vanished at its minimal dimension")
    return n
