"""Pydantic data models for the Cremona prime-order oracle.

Covers base-field descriptors, cyclotomic invariants, bound reports, Galois
lattices and tori, toric fans and descent cases, quadratic-form results, and
the realization / conjugacy reports produced by the oracle.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .integer_linalg import (
    IntMatrix,
    IntVector,
    determinant,
    identity_matrix,
    inverse,
)

# -- Base fields --


class _FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True)


class Rationals(_FrozenModel):
    """The field of rational numbers."""

    kind: Literal["rationals"] = "rationals"

    def characteristic(self) -> int:
        return 0

    def label(self) -> str:
        return "Q"


class FiniteField(_FrozenModel):
    """The finite field with q = p^e elements."""

    kind: Literal["finite"] = "finite"
    p: int = Field(..., ge=2, description="Characteristic (prime)")
    e: int = Field(1, ge=1, description="Degree over the prime field")

    @field_validator("p")
    @classmethod
    def p_is_prime(cls, v: int) -> int:
        if not sympy.isprime(v):
            raise ValueError(f"characteristic {v} is not prime")
        return v

    @property
    def q(self) -> int:
        return self.p**self.e

    def characteristic(self) -> int:
        return self.p

    def label(self) -> str:
        return f"F{self.q}"


class Cyclotomic(_FrozenModel):
    """The cyclotomic field Q(zeta_n)."""

    kind: Literal["cyclotomic"] = "cyclotomic"
    n: int = Field(..., ge=1)

    def characteristic(self) -> int:
        return 0

    def label(self) -> str:
        return f"Q(zeta{self.n})"


FieldDescriptor = Annotated[
    Union[Rationals, FiniteField, Cyclotomic], Field(discriminator="kind")
]


class CyclotomicInvariants(_FrozenModel):
    """The pair (t_l, m_l) of a field at an odd prime l."""

    ell: int = Field(..., ge=3)
    t: int = Field(..., ge=1, description="[k(zeta_l):k]")
    m: int = Field(..., ge=1, description="sup{d : zeta_{l^d} in k(zeta_l)}")
    characteristic: int = Field(..., ge=0)

    @model_validator(mode="after")
    def check_divisibility(self) -> "CyclotomicInvariants":
        if not sympy.isprime(self.ell) or self.ell == self.characteristic:
            raise ValueError(
                f"ell={self.ell} must be an odd prime different from the "
                f"characteristic {self.characteristic}"
            )
        if self.characteristic == 0:
            if (self.ell - 1) % self.t:
                raise ValueError(f"t={self.t} does not divide ell-1={self.ell - 1}")
        else:
            order_of_p = int(sympy.n_order(self.characteristic, self.ell))
            if order_of_p % self.t:
                raise ValueError(
                    f"t={self.t} does not divide the order {order_of_p} of "
                    f"{self.characteristic} mod {self.ell}"
                )
        return self


# -- Bounds --


class BoundContext(str, Enum):
    """Which group the bound is about."""

    GL_Q = "GL_Q"
    PGL = "PGL"
    TORUS = "Torus"


class BoundReport(_FrozenModel):
    """An upper bound on nu_l of finite subgroups, with its parameters."""

    context: BoundContext
    bound: int = Field(..., ge=0, description="Bound on nu_l, never a group order")
    ell: int
    size: int = Field(..., ge=1, description="n for GL_n / PGL_{n+1}, dim for tori")
    field: Optional[FieldDescriptor] = None
    invariants: Optional[CyclotomicInvariants] = None
    certificate: Optional[str] = None

    @model_validator(mode="after")
    def pgl_exclusion_is_zero(self) -> "BoundReport":
        if (
            self.context is BoundContext.PGL
            and self.invariants is not None
            and self.invariants.t >= self.size + 2
            and self.bound != 0
        ):
            raise ValueError("t_l >= n+2 forces a zero PGL bound")
        return self


# -- Galois lattices and tori --

_X = sympy.Symbol("x")


class IntegerPolynomial(_FrozenModel):
    """Integer polynomial in x, coefficients lowest degree first."""

    coefficients: Tuple[int, ...] = ()

    @field_validator("coefficients")
    @classmethod
    def no_leading_zero(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if v and v[-1] == 0:
            raise ValueError(f"leading coefficient of {v} is zero")
        return v

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> "IntegerPolynomial":
        if poly.is_zero:
            return cls()
        return cls(coefficients=tuple(int(c) for c in reversed(poly.all_coeffs())))

    def to_sympy(self) -> sympy.Poly:
        return sympy.Poly(list(reversed(self.coefficients)) or [0], _X, domain="ZZ")

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def evaluate(self, x: int) -> int:
        value = 0
        for c in reversed(self.coefficients):
            value = value * x + c
        return value

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())


class GaloisLattice(_FrozenModel):
    """A free lattice with a finite group acting by unimodular matrices."""

    rank: int = Field(..., ge=1)
    generators: Tuple[IntMatrix, ...] = Field(..., min_length=1)
    elements: Tuple[IntMatrix, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_group(self) -> "GaloisLattice":
        for g in self.generators:
            if len(g) != self.rank or any(len(row) != self.rank for row in g):
                raise ValueError(f"generator {g} is not {self.rank}x{self.rank}")
            if determinant(g) not in (1, -1):
                raise ValueError(f"generator {g} is not invertible over Z")
        members = set(self.elements)
        if identity_matrix(self.rank) not in members:
            raise ValueError("group elements must contain the identity")
        if any(inverse(g) not in members for g in self.elements):
            raise ValueError("group elements must be closed under inversion")
        return self

    @property
    def order(self) -> int:
        return len(self.elements)


class TorusDescription(_FrozenModel):
    """A k-torus given by its character lattice M with Galois action."""

    character_lattice: GaloisLattice
    splitting_degree: int = Field(..., ge=1, description="Order of Gamma")
    label: str
    order_point_exponent: Optional[int] = Field(
        None, ge=0, description="nu_l of the torsion the construction exhibits"
    )

    @property
    def dimension(self) -> int:
        return self.character_lattice.rank


class NormQuotientWitness(_FrozenModel):
    """Evidence that Psi(gamma) acts invertibly on the l^m-torsion."""

    generator: int = Field(..., description="Cyclotomic-character image c")
    modulus: int = Field(..., description="l^m")
    psi_value: int = Field(..., description="Psi(c)")
    passed: bool


# -- Toric descent --


class Fan2D(_FrozenModel):
    """A complete smooth 2-dimensional fan given by its cyclically ordered rays."""

    rays: Tuple[Tuple[int, int], ...] = Field(..., min_length=3)

    @model_validator(mode="after")
    def check_fan(self) -> "Fan2D":
        n = len(self.rays)
        for ray in self.rays:
            if math.gcd(*ray) != 1:
                raise ValueError(f"ray {ray} is not primitive")
        turning = 0.0
        for i in range(n):
            (a, b), (c, d) = self.rays[i], self.rays[(i + 1) % n]
            if a * d - b * c != 1:
                raise ValueError(
                    f"rays {self.rays[i]}, {self.rays[(i + 1) % n]} do not span a "
                    "smooth counter-clockwise cone"
                )
            turning += math.atan2(a * d - b * c, a * c + b * d)
        if not math.isclose(turning, 2 * math.pi):
            raise ValueError("cones do not cover the plane exactly once")
        return self

    @property
    def ray_count(self) -> int:
        return len(self.rays)


class DescentCase(_FrozenModel):
    """A conjugacy class of fan-preserving subgroups with its descent data."""

    label: str
    group: str = Field(..., description="Abstract group name, e.g. 'Z/6'")
    generators: Tuple[IntMatrix, ...]
    subgroup: Tuple[IntMatrix, ...]
    order: int = Field(..., ge=1)
    cyclic: bool
    picard_rank: int = Field(..., ge=1, le=4)
    anisotropic: bool


class RealizationVerdict(_FrozenModel):
    """Whether an order-l element can act minimally on a toric Del Pezzo surface."""

    realizable: bool
    required_case: Optional[str] = None
    splitting_field: Optional[str] = None
    reason: str
    rejected: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def realizable_has_case(self) -> "RealizationVerdict":
        if self.realizable and (
            self.required_case is None or self.splitting_field is None
        ):
            raise ValueError("a realizable verdict names its case and splitting field")
        return self


# -- Picard lattice results --


class BinaryFormGram(_FrozenModel):
    """Gram matrix [[a, b], [b, c]] of a binary quadratic form."""

    matrix: Tuple[Tuple[int, int], Tuple[int, int]]

    @field_validator("matrix")
    @classmethod
    def symmetric(
        cls, v: Tuple[Tuple[int, int], Tuple[int, int]]
    ) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        if v[0][1] != v[1][0]:
            raise ValueError(f"Gram matrix {v} is not symmetric")
        return v

    @property
    def determinant(self) -> int:
        (a, b), (_, c) = self.matrix
        return a * c - b * b

    @property
    def definiteness(self) -> Literal["positive", "negative", "indefinite"]:
        a = self.matrix[0][0]
        if self.determinant <= 0:
            return "indefinite"
        return "positive" if a > 0 else "negative"


class InvariantSublattice(_FrozenModel):
    """Fixed sublattice of K-perp under the order-7 representative."""

    r: int
    rank: int
    basis: Tuple[IntVector, ...]
    gram: Tuple[Tuple[int, ...], ...]
    gram_determinant: int
    negative_definite: bool


class ExplicitRank2Basis(_FrozenModel):
    """The rank-2 invariant basis v = (e - 3C8 + 5K)/3, w = C8 + K in degree 1."""

    v: IntVector
    w: IntVector
    gram: BinaryFormGram
    stated_gram: BinaryFormGram
    sign_discrepancy: bool = Field(
        ..., description="Computed (v,w) has the opposite sign of the stated one"
    )
    change_of_basis: Optional[IntMatrix] = Field(
        None, description="P with P^T * gram * P = stated_gram"
    )
    spans_fixed_sublattice: bool


class AutomorphGroup(_FrozenModel):
    """Integral automorphs of a definite binary form."""

    gram: BinaryFormGram
    full: Tuple[IntMatrix, ...]
    proper: Tuple[IntMatrix, ...]
    improper_involutions: Tuple[IntMatrix, ...]

    @property
    def has_improper(self) -> bool:
        return len(self.full) > len(self.proper)


# -- Oracle reports --


class Mechanism(str, Enum):
    """How an element of order l is realized."""

    LINEAR_WITNESS = "LinearWitness"
    DEL_PEZZO_5 = "DelPezzo5Witness"
    TORUS_CONIC_BUNDLE = "Torus/ConicBundle"
    DEL_PEZZO_9 = "DelPezzo9"
    DEL_PEZZO_8 = "DelPezzo8"
    DEL_PEZZO_6 = "DelPezzo6"
    NONE = "None"


class LinearWitness(_FrozenModel):
    """3x3 matrices of verified projective order over the prime field."""

    matrices: Tuple[IntMatrix, ...]
    orders: Tuple[int, ...]
    characteristic: int


class MapWitness(_FrozenModel):
    """A Cremona map with its verified order."""

    components: Tuple[str, str, str]
    order: Optional[int]
    modulus: Optional[int] = None
    fundamental_points: Dict[str, bool] = Field(default_factory=dict)


class RealizationReport(_FrozenModel):
    """Decision for 'Cr2(k) has an element of order l' with its evidence."""

    field: FieldDescriptor
    ell: int
    exists: bool
    mechanism: Mechanism
    additional_mechanisms: List[Mechanism] = Field(default_factory=list)
    invariants: Optional[CyclotomicInvariants] = None
    citations: List[str] = Field(..., min_length=1)
    linear_witness: Optional[LinearWitness] = None
    map_witness: Optional[MapWitness] = None
    torus_witness: Optional[TorusDescription] = None
    norm_quotient_witness: Optional[NormQuotientWitness] = None
    verdict: Optional[RealizationVerdict] = None
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def exists_matches_mechanism(self) -> "RealizationReport":
        if self.exists == (self.mechanism is Mechanism.NONE):
            raise ValueError("exists must hold exactly when a mechanism is named")
        return self


class ConjugacyCertificate(_FrozenModel):
    """Transitivity of the order-6 fan symmetry on Galois-fixed 7-torsion."""

    field: FieldDescriptor
    hypotheses_ok: bool
    cyclotomic_character: Optional[int] = None
    fixed_torsion_order: Optional[int] = None
    multiplier: Optional[int] = Field(
        None, description="Unit mod 7 by which the order-6 symmetry acts"
    )
    transitive: bool = False
    assumptions: List[str] = Field(default_factory=list)
    citations: List[str] = Field(default_factory=list)
    reason: str = ""

    @model_validator(mode="after")
    def transitive_needs_primitive_multiplier(self) -> "ConjugacyCertificate":
        if self.transitive and (
            self.multiplier is None or sympy.n_order(self.multiplier, 7) != 6
        ):
            raise ValueError("transitivity requires a primitive-root multiplier")
        return self


# -- Self-test --


class SelftestCheck(_FrozenModel):
    """One acceptance check with its outcome."""

    number: int = Field(..., ge=1)
    name: str
    passed: bool
    detail: str = ""


class SelftestReport(_FrozenModel):
    """Outcome of the full acceptance suite."""

    checks: List[SelftestCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[SelftestCheck]:
        return [check for check in self.checks if not check.passed]
