"""Field descriptors and the cyclotomic invariants t_l and m_l.

Fields are handled symbolically: every quantity downstream depends on the
base field only through its characteristic and the pair (t_l, m_l), so no
arithmetic inside k is ever performed.

Descriptor grammar (case-sensitive, no whitespace)::

    Q            the rationals
    F<q>         the finite field with q elements, q a prime power (F49, not F6)
    Q(zeta<n>)   the cyclotomic field Q(zeta_n)
"""

import logging
import math
import re
from typing import Optional

import sympy

from src.utils.exceptions import (
    CapExceededError,
    FieldDescriptorError,
    InvalidParameterError,
    SelfCheckError,
)

from .data_models import (
    Cyclotomic,
    CyclotomicInvariants,
    FieldDescriptor,
    FiniteField,
    Rationals,
)
from .knowledge_base import Limits, default_limits
from .validators import ParameterValidator

logger = logging.getLogger(__name__)

_FINITE_RE = re.compile(r"F([1-9][0-9]*)")
_CYCLOTOMIC_RE = re.compile(r"Q\(zeta([1-9][0-9]*)\)")


def parse_field(text: str) -> FieldDescriptor:
    """Parse a field descriptor string.

    Args:
        text: One of ``Q``, ``F<q>`` or ``Q(zeta<n>)``.

    Returns:
        The matching descriptor.

    Raises:
        FieldDescriptorError: If the text does not follow the grammar or
            ``q`` is not a prime power.
    """
    if text == "Q":
        return Rationals()

    match = _FINITE_RE.fullmatch(text)
    if match:
        q = int(match.group(1))
        factors = sympy.factorint(q) if q > 1 else {}
        if len(factors) != 1:
            raise FieldDescriptorError(f"'{text}': {q} is not a prime power")
        ((p, e),) = factors.items()
        return FiniteField(p=int(p), e=int(e))

    match = _CYCLOTOMIC_RE.fullmatch(text)
    if match:
        return Cyclotomic(n=int(match.group(1)))

    raise FieldDescriptorError(
        f"Cannot parse field '{text}'; expected Q, F<q> or Q(zeta<n>)"
    )


def euler_phi(n: int) -> int:
    """Number of units modulo n.

    Raises:
        InvalidParameterError: If n < 1.
    """
    ParameterValidator.require_positive(n, "n")
    return int(sympy.totient(n))


def multiplicative_order(a: int, n: int) -> int:
    """Least k >= 1 with a^k = 1 (mod n).

    Raises:
        InvalidParameterError: If n < 2 or gcd(a, n) != 1.
    """
    if n < 2:
        raise InvalidParameterError(f"modulus must be >= 2, got {n}")
    if math.gcd(a, n) != 1:
        raise InvalidParameterError(f"{a} is not a unit modulo {n}")
    return int(sympy.n_order(a % n, n))


def l_adic_valuation(N: int, ell: int) -> int:
    """Largest v with ell^v dividing N.

    Raises:
        InvalidParameterError: If N = 0 or ell is not prime.
    """
    if N == 0:
        raise InvalidParameterError("valuation of 0 is undefined")
    ParameterValidator.require_prime(ell)
    return int(sympy.multiplicity(ell, abs(N)))


def _finite_field_invariants(
    field: FiniteField, ell: int, limits: Limits
) -> CyclotomicInvariants:
    q = field.q
    t = multiplicative_order(q, ell)
    if t * math.log10(q) >= limits.max_power_digits:
        raise CapExceededError(
            f"{q}^{t} exceeds 10^{limits.max_power_digits}; refusing exact valuation"
        )
    m = l_adic_valuation(q**t - 1, ell)

    # m is stated both as nu(q^t - 1) and as nu(q^(l-1) - 1); check they agree.
    if (ell - 1) * math.log10(q) < limits.max_power_digits:
        m_full = l_adic_valuation(q ** (ell - 1) - 1, ell)
        if m_full != m:
            raise SelfCheckError(
                f"nu_{ell}({q}^{t}-1) = {m} but nu_{ell}({q}^{ell - 1}-1) = {m_full}"
            )
    else:
        logger.debug(
            "Skipping nu_%d(%d^%d - 1) cross-check: above digit cap", ell, q, ell - 1
        )
    return CyclotomicInvariants(ell=ell, t=t, m=m, characteristic=field.p)


def cyclotomic_invariants(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> CyclotomicInvariants:
    """Compute (t_l, m_l) of `field` at the odd prime `ell`.

    Rationals give (l-1, 1). F_q gives t = order of q mod l and
    m = nu_l(q^t - 1). Q(zeta_n) gives t = phi(lcm(n, l)) / phi(n) and
    m = max(1, nu_l(n)), since zeta_{l^d} lies in Q(zeta_N) exactly when
    l^d divides N.

    Raises:
        InvalidParameterError: If ell is even or composite.
        CharacteristicError: If ell equals the characteristic.
        CapExceededError: If q^t exceeds the configured digit cap.
        SelfCheckError: If the two valuation formulas for F_q disagree.
    """
    limits = limits or default_limits()
    ParameterValidator.require_prime(ell)
    ParameterValidator.require_coprime_to_characteristic(field, ell)
    ParameterValidator.require_odd_prime(ell)

    if isinstance(field, Rationals):
        invariants = CyclotomicInvariants(ell=ell, t=ell - 1, m=1, characteristic=0)
    elif isinstance(field, FiniteField):
        invariants = _finite_field_invariants(field, ell, limits)
    elif isinstance(field, Cyclotomic):
        n = field.n
        t = euler_phi(sympy.ilcm(n, ell)) // euler_phi(n)
        m = max(1, int(sympy.multiplicity(ell, n)))
        invariants = CyclotomicInvariants(ell=ell, t=t, m=m, characteristic=0)
    else:
        raise FieldDescriptorError(f"Unsupported field descriptor {field!r}")

    logger.debug(
        "Invariants of %s at %d: t=%d m=%d",
        field.label(),
        ell,
        invariants.t,
        invariants.m,
    )
    return invariants


def cyclotomic_character_generator(
    field: FieldDescriptor, ell: int, limits: Optional[Limits] = None
) -> int:
    """An integer c generating the image of Gal(k(zeta_l)/k) in (Z/l^m)*.

    Q uses the smallest primitive root mod l^m, F_q uses the Frobenius q,
    and Q(zeta_n) uses the generator of the order-t subgroup of (Z/l)*
    obtained from the smallest primitive root (1 when t = 1).

    Returns:
        c reduced into [1, l^m).
    """
    invariants = cyclotomic_invariants(field, ell, limits)
    modulus = ell**invariants.m
    if isinstance(field, Rationals):
        c = int(sympy.primitive_root(modulus))
    elif isinstance(field, FiniteField):
        c = field.q % modulus
    elif invariants.t == 1:
        c = 1
    else:
        # t > 1 forces ell not dividing n, hence m = 1.
        g = int(sympy.primitive_root(ell))
        c = pow(g, (ell - 1) // invariants.t, ell)
    logger.debug("Cyclotomic character of %s at %d: c=%d", field.label(), ell, c)
    return c
