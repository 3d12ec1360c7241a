"""Tests for Pydantic data models."""

import pytest
from pydantic import TypeAdapter, ValidationError

from src.models.cremona.data_models import (
    BinaryFormGram,
    BoundContext,
    BoundReport,
    ConjugacyCertificate,
    Cyclotomic,
    CyclotomicInvariants,
    Fan2D,
    FieldDescriptor,
    FiniteField,
    GaloisLattice,
    IntegerPolynomial,
    Mechanism,
    Rationals,
    RealizationReport,
    RealizationVerdict,
    SelftestCheck,
    SelftestReport,
)
from src.models.cremona.oracle import cremona_has_order

ROTATION_4 = ((0, -1), (1, 0))
IDENTITY_2 = ((1, 0), (0, 1))


class TestFieldDescriptors:
    """Tests for the base-field models."""

    def test_finite_field(self) -> None:
        field = FiniteField(p=3, e=2)
        assert field.q == 9
        assert field.label() == "F9"
        assert field.characteristic() == 3

    def test_non_prime_characteristic_rejected(self) -> None:
        with pytest.raises(ValidationError):
            FiniteField(p=4)

    def test_discriminated_union(self) -> None:
        adapter = TypeAdapter(FieldDescriptor)
        assert adapter.validate_python({"kind": "finite", "p": 5}) == FiniteField(p=5)
        assert adapter.validate_python({"kind": "rationals"}) == Rationals()
        assert adapter.validate_python({"kind": "cyclotomic", "n": 5}) == Cyclotomic(
            n=5
        )

    def test_descriptors_are_hashable(self) -> None:
        assert len({Rationals(), Rationals(), FiniteField(p=2)}) == 2


class TestCyclotomicInvariants:
    """Divisibility constraints on (t, m)."""

    def test_valid(self) -> None:
        invariants = CyclotomicInvariants(ell=7, t=3, m=1, characteristic=2)
        assert invariants.t == 3

    @pytest.mark.parametrize(
        "ell, t, characteristic",
        [(7, 4, 0), (7, 2, 2), (7, 1, 7), (9, 2, 0)],
    )
    def test_invalid(self, ell: int, t: int, characteristic: int) -> None:
        with pytest.raises(ValidationError):
            CyclotomicInvariants(ell=ell, t=t, m=1, characteristic=characteristic)


class TestBoundReport:
    """PGL exclusion must carry a zero bound."""

    def test_nonzero_exclusion_rejected(self) -> None:
        invariants = CyclotomicInvariants(ell=7, t=6, m=1, characteristic=0)
        with pytest.raises(ValidationError, match="zero PGL bound"):
            BoundReport(
                context=BoundContext.PGL,
                bound=1,
                ell=7,
                size=2,
                invariants=invariants,
            )

    def test_negative_bound_rejected(self) -> None:
        with pytest.raises(ValidationError):
            BoundReport(context=BoundContext.GL_Q, bound=-1, ell=3, size=2)


class TestGaloisLattice:
    """Group axioms on stored elements."""

    def test_valid(self) -> None:
        elements = (IDENTITY_2, ((-1, 0), (0, -1)))
        lattice = GaloisLattice(rank=2, generators=(elements[1],), elements=elements)
        assert lattice.order == 2

    def test_missing_inverse(self) -> None:
        with pytest.raises(ValidationError, match="inversion"):
            GaloisLattice(
                rank=2, generators=(ROTATION_4,), elements=(IDENTITY_2, ROTATION_4)
            )

    def test_missing_identity(self) -> None:
        with pytest.raises(ValidationError, match="identity"):
            GaloisLattice(rank=2, generators=(ROTATION_4,), elements=(ROTATION_4,))

    def test_singular_generator(self) -> None:
        with pytest.raises(ValidationError, match="not invertible"):
            GaloisLattice(
                rank=2, generators=(((2, 0), (0, 1)),), elements=(IDENTITY_2,)
            )


class TestFan2D:
    """Smooth complete fans."""

    def test_non_primitive_ray(self) -> None:
        with pytest.raises(ValidationError, match="primitive"):
            Fan2D(rays=((2, 0), (0, 1), (-1, -1)))

    def test_clockwise_order_rejected(self) -> None:
        with pytest.raises(ValidationError, match="counter-clockwise"):
            Fan2D(rays=((1, 0), (-1, -1), (0, 1)))

    def test_ray_count(self) -> None:
        assert Fan2D(rays=((1, 0), (0, 1), (-1, 0), (0, -1))).ray_count == 4


class TestIntegerPolynomial:
    """Coefficient tuples, lowest degree first."""

    def test_evaluate_and_degree(self) -> None:
        poly = IntegerPolynomial(coefficients=(1, -1, 1))
        assert poly.degree == 2
        assert poly.evaluate(3) == 7
        assert str(poly) == "x**2 - x + 1"

    def test_zero_polynomial(self) -> None:
        assert IntegerPolynomial().degree == -1

    def test_leading_zero_rejected(self) -> None:
        with pytest.raises(ValidationError, match="leading coefficient"):
            IntegerPolynomial(coefficients=(1, 0))


class TestBinaryFormGram:
    """Symmetric 2x2 Gram matrices."""

    def test_asymmetric_rejected(self) -> None:
        with pytest.raises(ValidationError, match="not symmetric"):
            BinaryFormGram(matrix=((1, 2), (0, 1)))

    @pytest.mark.parametrize(
        "matrix, kind",
        [
            (((-4, 1), (1, -2)), "negative"),
            (((1, 0), (0, 1)), "positive"),
            (((1, 0), (0, -1)), "indefinite"),
        ],
    )
    def test_definiteness(self, matrix: tuple, kind: str) -> None:
        assert BinaryFormGram(matrix=matrix).definiteness == kind


class TestReports:
    """Consistency rules on oracle outputs."""

    def test_verdict_names_its_case(self) -> None:
        with pytest.raises(ValidationError, match="names its case"):
            RealizationVerdict(realizable=True, reason="x")

    def test_exists_requires_mechanism(self) -> None:
        with pytest.raises(ValidationError, match="mechanism"):
            RealizationReport(
                field=Rationals(),
                ell=11,
                exists=True,
                mechanism=Mechanism.NONE,
                citations=["torus-criterion"],
            )

    def test_citations_required(self) -> None:
        with pytest.raises(ValidationError):
            RealizationReport(
                field=Rationals(),
                ell=11,
                exists=False,
                mechanism=Mechanism.NONE,
                citations=[],
            )

    def test_transitivity_needs_primitive_root(self) -> None:
        with pytest.raises(ValidationError, match="primitive-root"):
            ConjugacyCertificate(
                field=Rationals(), hypotheses_ok=True, multiplier=2, transitive=True
            )
        ok = ConjugacyCertificate(
            field=Rationals(), hypotheses_ok=True, multiplier=3, transitive=True
        )
        assert ok.transitive

    def test_report_survives_json(self) -> None:
        report = cremona_has_order(Rationals(), 7)
        assert RealizationReport.model_validate_json(report.model_dump_json()) == report


class TestSelftestReport:
    """Aggregated outcome."""

    def test_failures(self) -> None:
        report = SelftestReport(
            checks=[
                SelftestCheck(number=1, name="a", passed=True),
                SelftestCheck(number=2, name="b", passed=False, detail="off"),
            ]
        )
        assert not report.passed
        assert [check.name for check in report.failures] == ["b"]

    def test_number_positive(self) -> None:
        with pytest.raises(ValidationError):
            SelftestCheck(number=0, name="a", passed=True)
