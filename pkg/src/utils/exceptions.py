"""Custom exceptions for the Cremona prime-order oracle."""


class CremonaOracleError(Exception):
    """Base exception for the Cremona prime-order oracle."""


class ConfigValidationError(CremonaOracleError):
    """Configuration file validation error."""


class KnowledgeBaseError(CremonaOracleError):
    """Case / citation catalog loading or validation error."""


class FieldDescriptorError(CremonaOracleError):
    """Unparsable or invalid base-field descriptor."""


class CharacteristicError(CremonaOracleError):
    """The prime ell equals the characteristic of the base field."""


class InvalidParameterError(CremonaOracleError):
    """A numeric argument violates an operation's precondition."""


class LatticeError(CremonaOracleError):
    """Invalid lattice data: non-invertible matrix, broken fan, bad form."""


class PolynomialError(CremonaOracleError):
    """Unparsable, non-homogeneous or degenerate polynomial map."""


class CapExceededError(CremonaOracleError):
    """A configured computational cap was exceeded."""


class SelfCheckError(CremonaOracleError):
    """An internal cross-check between two computations failed."""
