"""Tests for Del Pezzo Picard lattices, Weyl orbits and binary forms."""

import pytest

from src.models.cremona.data_models import BinaryFormGram
from src.models.cremona.integer_linalg import (
    identity_matrix,
    inverse,
    mat_mul,
    mat_vec,
    matrix_order,
    transpose,
)
from src.models.cremona.knowledge_base import Limits
from src.models.cremona.weyl_lattice import (
    STATED_RANK2_GRAM,
    automorph_group,
    basis_vector,
    bertini_image,
    canonical_class,
    disjoint_seven_tuples,
    explicit_rank2_basis,
    express_in_basis,
    geiser_image,
    geiser_pairs,
    gram_equivalence,
    intersection,
    minus_one_classes,
    order7_invariants,
    preserves_form,
    sigma_fixed_geiser_pairs,
    sigma_matrix,
    sigma_orbit_sizes_on_minus_one_classes,
    simple_reflections,
    sum_of_exceptional,
    weyl_group_order,
    weyl_orbit,
)
from src.utils.exceptions import (
    CapExceededError,
    InvalidParameterError,
    LatticeError,
)

SUM_OF_SQUARES = BinaryFormGram(matrix=((1, 0), (0, 1)))


class TestMinusOneClasses:
    """Exceptional classes by enumeration."""

    @pytest.mark.parametrize(
        "r, count", [(3, 6), (4, 10), (5, 16), (6, 27), (7, 56), (8, 240)]
    )
    def test_counts(self, r: int, count: int) -> None:
        assert len(minus_one_classes(r)) == count

    @pytest.mark.parametrize("r", [5, 7, 8])
    def test_intersection_numbers(self, r: int) -> None:
        K = canonical_class(r)
        for D in minus_one_classes(r):
            assert intersection(D, D) == -1
            assert intersection(D, K) == -1

    def test_canonical_square(self) -> None:
        for r in range(3, 9):
            K = canonical_class(r)
            assert intersection(K, K) == 9 - r

    @pytest.mark.parametrize("r", [2, 9])
    def test_rank_out_of_range(self, r: int) -> None:
        with pytest.raises(InvalidParameterError, match="r must be one of"):
            minus_one_classes(r)


class TestWeylGroup:
    """Reflections, orbits and group orders."""

    def test_simple_reflections_are_isometries(self) -> None:
        K = canonical_class(6)
        for s in simple_reflections(6):
            assert preserves_form(s, 6)
            assert mat_mul(s, s) == identity_matrix(7)
            assert mat_vec(s, K) == K

    @pytest.mark.parametrize(
        "r, order",
        [
            (2, 2),
            (3, 12),
            (4, 120),
            (5, 1920),
            (6, 51840),
            (7, 2903040),
            (8, 696729600),
        ],
    )
    def test_group_orders(self, r: int, order: int) -> None:
        assert weyl_group_order(r) == order

    @pytest.mark.parametrize("r", [6, 7])
    def test_exceptional_classes_form_one_orbit(self, r: int) -> None:
        assert weyl_orbit(basis_vector(r, r), r) == minus_one_classes(r)

    def test_orbit_of_exceptional_sum(self) -> None:
        orbit = weyl_orbit(sum_of_exceptional(7), 7)
        assert len(orbit) == 576
        assert weyl_group_order(7) // len(orbit) == 5040

    def test_wrong_length_rejected(self) -> None:
        with pytest.raises(InvalidParameterError, match="coordinates"):
            weyl_orbit((0, 1, 0), 7)

    def test_orbit_cap(self, limits: Limits) -> None:
        tight = limits.model_copy(update={"orbit_cap": 10})
        with pytest.raises(CapExceededError, match="exceeded 10"):
            weyl_orbit(basis_vector(7, 7), 7, tight)


class TestInvolutions:
    """Geiser and Bertini involutions and their pairings."""

    def test_geiser_image_of_e1(self) -> None:
        assert geiser_image(basis_vector(7, 1)) == (3, -2, -1, -1, -1, -1, -1, -1)

    def test_geiser_permutes_classes(self) -> None:
        classes = set(minus_one_classes(7))
        assert {geiser_image(D) for D in classes} == classes

    def test_bertini_permutes_classes(self) -> None:
        classes = set(minus_one_classes(8))
        assert {bertini_image(D) for D in classes} == classes

    def test_geiser_length_checked(self) -> None:
        with pytest.raises(InvalidParameterError):
            geiser_image(basis_vector(8, 1))

    def test_geiser_pairs(self) -> None:
        pairs = geiser_pairs()
        assert len(pairs) == 288
        assert all(x < y for x, y in pairs)

    def test_sigma_fixed_pairs_congruence(self) -> None:
        assert sigma_fixed_geiser_pairs() % 7 == 288 % 7

    def test_disjoint_seven_tuples(self) -> None:
        assert disjoint_seven_tuples() == 576

    def test_geiser_commutes_with_sigma(self) -> None:
        sigma = sigma_matrix(7)
        for D in minus_one_classes(7):
            assert geiser_image(mat_vec(sigma, D)) == mat_vec(sigma, geiser_image(D))

    def test_geiser_has_no_fixed_class(self) -> None:
        assert all(geiser_image(D) != D for D in minus_one_classes(7))


class TestOrderSevenInvariants:
    """The 7-cycle on e1, ..., e7 and its fixed sublattices."""

    @pytest.mark.parametrize("r", [7, 8])
    def test_sigma_has_order_seven(self, r: int) -> None:
        sigma = sigma_matrix(r)
        assert matrix_order(sigma, 10) == 7
        assert preserves_form(sigma, r)

    def test_orbits_on_minus_one_classes(self) -> None:
        assert sigma_orbit_sizes_on_minus_one_classes() == [7] * 8

    def test_degree_two(self) -> None:
        fixed = order7_invariants(7)
        assert fixed.rank == 1
        assert fixed.basis == ((7, -3, -3, -3, -3, -3, -3, -3),)
        assert fixed.gram == ((-14,),)
        target = tuple(
            2 * e + 7 * k for e, k in zip(sum_of_exceptional(7), canonical_class(7))
        )
        assert express_in_basis(target, fixed.basis) == (-3,)

    def test_degree_one(self) -> None:
        fixed = order7_invariants(8)
        assert fixed.rank == 2
        assert abs(fixed.gram_determinant) == 7
        assert fixed.negative_definite

    def test_non_order_seven_rejected(self) -> None:
        with pytest.raises(LatticeError, match="order-7 isometry"):
            order7_invariants(7, identity_matrix(8))

    @staticmethod
    def _conjugated_sigma(r: int) -> tuple:
        s = simple_reflections(r)
        w = mat_mul(mat_mul(s[0], s[3]), s[1])
        return w, mat_mul(mat_mul(w, sigma_matrix(r)), inverse(w))

    def test_conjugate_in_degree_two(self) -> None:
        w, conjugate = self._conjugated_sigma(7)
        assert conjugate != sigma_matrix(7)
        fixed = order7_invariants(7, conjugate)
        assert fixed.rank == 1
        assert fixed.gram == ((-14,),)
        image = mat_vec(w, order7_invariants(7).basis[0])
        assert fixed.basis[0] in (image, tuple(-x for x in image))

    def test_conjugate_in_degree_one(self) -> None:
        _, conjugate = self._conjugated_sigma(8)
        fixed = order7_invariants(8, conjugate)
        standard = order7_invariants(8)
        assert fixed.rank == 2
        assert fixed.gram_determinant == standard.gram_determinant
        assert fixed.negative_definite
        assert (
            gram_equivalence(
                BinaryFormGram(matrix=standard.gram), BinaryFormGram(matrix=fixed.gram)
            )
            is not None
        )


class TestExpressInBasis:
    """Integer coordinates."""

    def test_coordinates(self) -> None:
        assert express_in_basis((3, -2), [(1, 0), (1, 1)]) == (5, -2)

    def test_non_integral(self) -> None:
        with pytest.raises(LatticeError, match="non-integral"):
            express_in_basis((1, 0), [(2, 0), (0, 1)])

    def test_outside_span(self) -> None:
        with pytest.raises(LatticeError, match="span"):
            express_in_basis((0, 0, 1), [(1, 0, 0)])


class TestBinaryForms:
    """Automorphs and equivalences of definite forms."""

    def test_stated_form_automorphs(self) -> None:
        group = automorph_group(STATED_RANK2_GRAM)
        assert set(group.proper) == {((1, 0), (0, 1)), ((-1, 0), (0, -1))}
        assert len(group.full) == 4
        assert group.has_improper
        assert group.improper_involutions

    def test_sum_of_squares(self) -> None:
        group = automorph_group(SUM_OF_SQUARES)
        assert len(group.full) == 8
        assert len(group.proper) == 4
        assert len(group.improper_involutions) == 4

    def test_indefinite_rejected(self) -> None:
        with pytest.raises(LatticeError, match="not definite"):
            automorph_group(BinaryFormGram(matrix=((1, 0), (0, -1))))

    def test_inequivalent_forms(self) -> None:
        even = BinaryFormGram(matrix=((2, 1), (1, 2)))
        assert gram_equivalence(even, SUM_OF_SQUARES) is None


class TestExplicitRank2Basis:
    """The basis v, w of the degree-1 invariants."""

    def test_vectors_and_gram(self) -> None:
        basis = explicit_rank2_basis()
        assert basis.v == (-5, 2, 2, 2, 2, 2, 2, 2, 1)
        assert basis.w == (-3, 1, 1, 1, 1, 1, 1, 1, 2)
        assert basis.gram.matrix == ((-4, -1), (-1, -2))
        assert basis.sign_discrepancy
        assert basis.spans_fixed_sublattice

    def test_change_of_basis(self) -> None:
        basis = explicit_rank2_basis()
        P = basis.change_of_basis
        assert P is not None
        assert mat_mul(mat_mul(transpose(P), basis.gram.matrix), P) == (
            STATED_RANK2_GRAM.matrix
        )
