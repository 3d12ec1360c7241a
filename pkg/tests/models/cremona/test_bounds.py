"""Tests for the Minkowski and Serre bounds."""

import pytest
import sympy

from src.models.cremona.bounds import (
    minkowski_bound,
    minkowski_report,
    pgl_bound,
    pgl_min_dimension,
    pgl_order_excluded,
    torus_bound,
)
from src.models.cremona.data_models import (
    BoundContext,
    Cyclotomic,
    FieldDescriptor,
    FiniteField,
    Rationals,
)
from src.models.cremona.field_arith import cyclotomic_invariants
from src.utils.exceptions import CharacteristicError, InvalidParameterError


class TestMinkowskiBound:
    """M(n, l) for finite subgroups of GL_n(Q)."""

    @pytest.mark.parametrize(
        "n, ell, expected",
        [(1, 2, 1), (2, 2, 3), (2, 3, 1), (2, 5, 0), (4, 5, 1), (8, 2, 15), (6, 7, 1)],
    )
    def test_values(self, n: int, ell: int, expected: int) -> None:
        assert minkowski_bound(n, ell) == expected

    def test_report(self) -> None:
        report = minkowski_report(2, 3)
        assert report.context is BoundContext.GL_Q
        assert report.bound == 1
        assert report.certificate == "minkowski-bound"

    def test_rejects_bad_parameters(self) -> None:
        with pytest.raises(InvalidParameterError, match="n must be"):
            minkowski_bound(0, 3)
        with pytest.raises(InvalidParameterError, match="prime"):
            minkowski_bound(3, 4)

    def test_nondecreasing_in_n(self) -> None:
        for ell in sympy.primerange(2, 30):
            values = [minkowski_bound(n, ell) for n in range(1, 41)]
            assert values == sorted(values)


class TestPglBound:
    """Serre's bound for PGL_{n+1}(k)."""

    def test_order_seven_excluded_over_q(self, rationals: Rationals) -> None:
        report = pgl_bound(2, rationals, 7)
        assert report.context is BoundContext.PGL
        assert report.bound == 0
        assert report.certificate is not None
        assert "t_7 = 6" in report.certificate

    @pytest.mark.parametrize(
        "q, ell, expected",
        [(2, 7, 1), (29, 7, 2), (13, 7, 1)],
    )
    def test_finite_fields(self, q: int, ell: int, expected: int) -> None:
        report = pgl_bound(2, FiniteField(p=q), ell)
        assert report.bound == expected
        assert report.certificate is None

    def test_order_three_over_q(self, rationals: Rationals) -> None:
        assert pgl_bound(2, rationals, 3).bound == 1

    @pytest.mark.parametrize(
        "field", [Rationals(), FiniteField(p=2), FiniteField(p=5), Cyclotomic(n=5)]
    )
    def test_exclusion_iff_large_t(self, field: FieldDescriptor) -> None:
        for ell in sympy.primerange(3, 60):
            if ell == field.characteristic():
                continue
            t = cyclotomic_invariants(field, ell).t
            for n in (1, 2, 3, 5):
                assert pgl_order_excluded(n, field, ell) == (t >= n + 2)

    def test_exclusion_monotone_in_n(self, rationals: Rationals) -> None:
        for ell in sympy.primerange(3, 40):
            excluded = [pgl_order_excluded(n, rationals, ell) for n in range(1, 12)]
            assert excluded == sorted(excluded, reverse=True)

    def test_characteristic_rejected(self, f2: FiniteField) -> None:
        with pytest.raises(CharacteristicError):
            pgl_bound(2, f2, 2)


class TestMinDimension:
    """Least projective dimension with a positive bound."""

    @pytest.mark.parametrize(
        "field, ell, expected",
        [(Rationals(), 7, 5), (FiniteField(p=29), 7, 1), (FiniteField(p=2), 7, 2)],
    )
    def test_values(self, field: FieldDescriptor, ell: int, expected: int) -> None:
        n = pgl_min_dimension(field, ell)
        assert n == expected
        assert pgl_bound(n, field, ell).bound > 0


class TestTorusBound:
    """Serre's bound m * floor(dim / phi(t)) for tori."""

    @pytest.mark.parametrize(
        "dim, field, ell, expected",
        [
            (2, Rationals(), 7, 1),
            (2, Rationals(), 11, 0),
            (4, Rationals(), 5, 2),
            (2, FiniteField(p=29), 7, 2),
        ],
    )
    def test_values(
        self, dim: int, field: FieldDescriptor, ell: int, expected: int
    ) -> None:
        report = torus_bound(dim, field, ell)
        assert report.context is BoundContext.TORUS
        assert report.bound == expected
        assert (report.certificate is not None) == (expected > 0)

    def test_below_minkowski_over_q(self, rationals: Rationals) -> None:
        for ell in sympy.primerange(3, 40):
            for dim in range(1, 9):
                assert torus_bound(dim, rationals, ell).bound <= minkowski_bound(
                    dim, ell
                )

    def test_dim_positive(self, rationals: Rationals) -> None:
        with pytest.raises(InvalidParameterError, match="dim"):
            torus_bound(0, rationals, 7)
