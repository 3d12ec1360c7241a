"""Precondition checks shared by the oracle modules.

Every public operation validates its numeric inputs through these helpers so
error types and messages stay uniform across modules.
"""

import logging

import sympy

from src.utils.exceptions import CharacteristicError, InvalidParameterError

from .data_models import FieldDescriptor

logger = logging.getLogger(__name__)


class ParameterValidator:
    """Validate primes, sizes and field/prime compatibility."""

    @staticmethod
    def require_positive(value: int, name: str) -> int:
        """Return value if it is an integer >= 1.

        Raises:
            InvalidParameterError: Otherwise.
        """
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise InvalidParameterError(
                f"{name} must be a positive integer, got {value!r}"
            )
        return value

    @staticmethod
    def require_prime(ell: int) -> int:
        """Return ell if it is prime.

        Raises:
            InvalidParameterError: If ell is not a prime number.
        """
        if isinstance(ell, bool) or not isinstance(ell, int) or not sympy.isprime(ell):
            raise InvalidParameterError(f"ell must be prime, got {ell!r}")
        return ell

    @staticmethod
    def require_odd_prime(ell: int) -> int:
        """Return ell if it is an odd prime.

        Raises:
            InvalidParameterError: If ell is even or composite.
        """
        ParameterValidator.require_prime(ell)
        if ell == 2:
            raise InvalidParameterError("ell must be an odd prime, got 2")
        return ell

    @staticmethod
    def require_coprime_to_characteristic(field: FieldDescriptor, ell: int) -> int:
        """Return ell if it differs from the characteristic of `field`.

        Raises:
            CharacteristicError: If ell equals the characteristic.
        """
        if ell == field.characteristic():
            raise CharacteristicError(
                f"ell equals the characteristic of {field.label()} "
                f"(ell = {ell}); this case is out of scope"
            )
        return ell

    @staticmethod
    def require_field_prime(field: FieldDescriptor, ell: int, minimum: int = 3) -> int:
        """Full check used by the field-dependent operations.

        Raises:
            InvalidParameterError: If ell is not a prime >= `minimum`.
            CharacteristicError: If ell equals the characteristic.
        """
        ParameterValidator.require_prime(ell)
        if ell < minimum:
            raise InvalidParameterError(f"ell >= {minimum} required, got {ell}")
        ParameterValidator.require_coprime_to_characteristic(field, ell)
        logger.debug("Validated ell=%d over %s", ell, field.label())
        return ell
