"""Plane rational maps given by homogeneous integer polynomial triples.

A map (f0 : f1 : f2) is stored as three sympy ``Poly`` objects over ZZ in
x, y, z. Maps are normalized by removing the integer content and any common
monomial factor; common polynomial factors are kept, so representatives may
be non-minimal. Projective equality is the vanishing of all 2x2 minors
f_i g_j - f_j g_i, which is insensitive to such factors.
"""

import logging
import math
import re
from functools import reduce
from tokenize import TokenError
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import BasePolynomialError

from src.utils.exceptions import CapExceededError, PolynomialError

from .knowledge_base import Limits, default_limits
from .validators import ParameterValidator

logger = logging.getLogger(__name__)

X, Y, Z = sympy.symbols("x y z")
GENS = (X, Y, Z)

Point = Tuple[int, int, int]

ORDER5_FUNDAMENTAL_POINTS: Tuple[Point, ...] = (
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 1),
)

_MAP_TEXT = re.compile(r"^[xyz0-9+\-*^() ,]+$")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_LOG10_2 = math.log10(2)


def _as_poly(component: object) -> Poly:
    try:
        return Poly(component, *GENS, domain="ZZ")
    except BasePolynomialError as e:
        raise PolynomialError(
            f"{component!r} is not an integer polynomial in x, y, z"
        ) from e


def _digits(value: int) -> int:
    return int(abs(value).bit_length() * _LOG10_2) + 1


def _clear(components: Sequence[Poly]) -> Tuple[Poly, Poly, Poly]:
    nonzero = [p for p in components if not p.is_zero]
    content = reduce(
        math.gcd, (abs(int(c)) for p in nonzero for c in p.coeffs()), 0
    )
    if content > 1:
        components = [p.exquo_ground(content) for p in components]
    shift = [
        min(monom[i] for p in nonzero for monom in p.monoms()) for i in range(3)
    ]
    if any(shift):
        monomial = Poly(X ** shift[0] * Y ** shift[1] * Z ** shift[2], *GENS)
        components = [p.exquo(monomial) for p in components]
    return components[0], components[1], components[2]


class PlaneRationalMap:
    """A rational self-map of P^2 with integer coefficients.

    Args:
        components: Three homogeneous polynomials (sympy expressions or
            ``Poly`` objects) of one common degree >= 1.
        normalize: Remove integer content and common monomial factors.

    Raises:
        PolynomialError: If the triple is zero, non-homogeneous, of unequal
            degrees or of degree 0.
    """

    __slots__ = ("_components",)

    def __init__(self, components: Sequence[object], normalize: bool = True):
        if len(components) != 3:
            raise PolynomialError(
                f"A plane map needs 3 components, got {len(components)}"
            )
        polys = [_as_poly(c) for c in components]
        nonzero = [p for p in polys if not p.is_zero]
        if not nonzero:
            raise PolynomialError("All three components are zero")
        for p in nonzero:
            if not p.is_homogeneous:
                raise PolynomialError(f"{p.as_expr()} is not homogeneous")
        degrees = {p.total_degree() for p in nonzero}
        if len(degrees) != 1:
            raise PolynomialError(f"Components have unequal degrees {sorted(degrees)}")
        if degrees == {0}:
            raise PolynomialError("Constant maps are not rational self-maps")
        self._components = _clear(polys) if normalize else tuple(polys)

    @property
    def components(self) -> Tuple[Poly, Poly, Poly]:
        return self._components  # type: ignore[return-value]

    @property
    def degree(self) -> int:
        return max(p.total_degree() for p in self._components if not p.is_zero)

    @property
    def max_coefficient_digits(self) -> int:
        return max(
            _digits(int(c)) for p in self._components for c in p.coeffs() or [0]
        )

    def to_text(self) -> Tuple[str, str, str]:
        texts = tuple(str(p.as_expr()) for p in self._components)
        return texts  # type: ignore[return-value]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneRationalMap):
            return NotImplemented
        return self._components == other._components

    def __hash__(self) -> int:
        return hash(self._components)

    def __repr__(self) -> str:
        return f"PlaneRationalMap({', '.join(self.to_text())})"


# -- Constructors --


def identity_map() -> PlaneRationalMap:
    return PlaneRationalMap((X, Y, Z))


def standard_involution() -> PlaneRationalMap:
    """The standard quadratic involution (yz : xz : xy)."""
    return PlaneRationalMap((Y * Z, X * Z, X * Y))


def order5_map() -> PlaneRationalMap:
    """(xz : x(z - y) : z(x - y)), a quadratic map of order 5."""
    return PlaneRationalMap((X * Z, X * (Z - Y), Z * (X - Y)))


def _size_bound(expr: sympy.Expr, limits: Limits) -> Tuple[int, float]:
    """Upper bounds (degree, log10 of the coefficient sum) of an unevaluated tree.

    The coefficient sum of absolute values is submultiplicative, so it bounds
    every coefficient of the expanded polynomial.
    """
    if expr.is_Symbol:
        return 1, 0.0
    if expr.is_Integer:
        value = abs(int(expr))
        return 0, math.log10(value) if value > 1 else 0.0
    if isinstance(expr, (sympy.Add, sympy.Mul)):
        parts = [_size_bound(arg, limits) for arg in expr.args]
        if isinstance(expr, sympy.Add):
            degree = max(d for d, _ in parts)
            return degree, max(n for _, n in parts) + math.log10(len(parts))
        return sum(d for d, _ in parts), sum(n for _, n in parts)
    if isinstance(expr, sympy.Pow):
        base, exponent = expr.args
        if not exponent.is_Integer or exponent < 0:
            raise PolynomialError(
                f"Exponent {exponent} is not a nonnegative integer literal"
            )
        degree, norm = _size_bound(base, limits)
        e = int(exponent)
        if degree and e > limits.max_map_degree:
            raise CapExceededError(
                f"Power {e} exceeds the degree cap {limits.max_map_degree}"
            )
        if norm and e > limits.coefficient_digit_cap / norm:
            raise CapExceededError(
                f"A power in the map text exceeds "
                f"{limits.coefficient_digit_cap} digits"
            )
        return degree * e, norm * e
    raise PolynomialError(f"Unsupported term {expr} in map text")


def parse_map(text: str, limits: Optional[Limits] = None) -> PlaneRationalMap:
    """Parse three comma-separated polynomials, e.g. "x*z, x*(z-y), z*(x-y)".

    Only x, y, z, digits, ``+ - * ^``, parentheses and spaces are accepted;
    ``^`` is exponentiation. The text is parsed unevaluated and its degree and
    coefficient size are bounded before anything is expanded.

    Raises:
        PolynomialError: If the text is not three homogeneous integer
            polynomials of equal degree.
        CapExceededError: If the degree or a coefficient would exceed the caps.
    """
    limits = limits or default_limits()
    if not _MAP_TEXT.match(text or ""):
        raise PolynomialError(f"Unsupported characters in map text {text!r}")
    try:
        parsed = parse_expr(
            text,
            local_dict={"x": X, "y": Y, "z": Z},
            transformations=_TRANSFORMATIONS,
            evaluate=False,
        )
    except (SyntaxError, TokenError, TypeError, sympy.SympifyError) as e:
        raise PolynomialError(f"Cannot parse map text {text!r}") from e
    if not isinstance(parsed, tuple) or len(parsed) != 3:
        raise PolynomialError(f"Expected three components in {text!r}")
    for component in parsed:
        degree, norm = _size_bound(sympy.sympify(component), limits)
        if degree > limits.max_map_degree:
            raise CapExceededError(
                f"Component of degree up to {degree}, cap is {limits.max_map_degree}"
            )
        if norm > limits.coefficient_digit_cap:
            raise CapExceededError(
                f"Coefficients may exceed {limits.coefficient_digit_cap} digits"
            )
    return PlaneRationalMap([sympy.sympify(c).doit() for c in parsed])


# -- Operations --


def _normalize_point(values: Iterable[int]) -> Point:
    values = list(values)
    g = reduce(math.gcd, (abs(v) for v in values), 0)
    values = [v // g for v in values]
    lead = next(v for v in values if v)
    if lead < 0:
        values = [-v for v in values]
    return values[0], values[1], values[2]


def evaluate(f: PlaneRationalMap, point: Sequence[int]) -> Optional[Point]:
    """Image of an integer point, or None where f is indeterminate.

    The image has content 1 and its first nonzero coordinate positive.

    Raises:
        PolynomialError: If the point is not a nonzero triple.
    """
    if len(point) != 3 or not any(point):
        raise PolynomialError(f"{tuple(point)} is not a point of P^2")
    values = [int(p(*point)) for p in f.components]
    if not any(values):
        return None
    return _normalize_point(values)


def compose(
    f: PlaneRationalMap,
    g: PlaneRationalMap,
    clear: bool = True,
    limits: Optional[Limits] = None,
) -> PlaneRationalMap:
    """The map f o g, that is f evaluated at the components of g.

    Raises:
        PolynomialError: If the composite is identically zero.
        CapExceededError: If deg f * deg g exceeds ``max_map_degree`` or a
            coefficient exceeds the configured digit cap.
    """
    limits = limits or default_limits()
    bound = f.degree * g.degree
    if bound > limits.max_map_degree:
        raise CapExceededError(
            f"Composite of degrees {f.degree} and {g.degree} may reach degree "
            f"{bound}, cap is {limits.max_map_degree}"
        )
    powers: Dict[Tuple[int, int], Poly] = {}

    def power(index: int, exponent: int) -> Poly:
        key = (index, exponent)
        if key not in powers:
            powers[key] = g.components[index] ** exponent
        return powers[key]

    composite = []
    for component in f.components:
        total = Poly(0, *GENS, domain="ZZ")
        for monom, coeff in component.terms():
            term = Poly(int(coeff), *GENS, domain="ZZ")
            for index, exponent in enumerate(monom):
                if exponent:
                    term = term * power(index, exponent)
            total = total + term
        composite.append(total)

    result = PlaneRationalMap(composite, normalize=clear)
    digits = result.max_coefficient_digits
    if digits > limits.coefficient_digit_cap:
        raise CapExceededError(
            f"Composite has a {digits}-digit coefficient, cap is "
            f"{limits.coefficient_digit_cap}"
        )
    logger.debug("Composed degrees %d and %d -> %d", f.degree, g.degree, result.degree)
    return result


def projectively_equal(
    f: PlaneRationalMap, g: PlaneRationalMap, modulus: Optional[int] = None
) -> bool:
    """True when every minor f_i g_j - f_j g_i vanishes.

    With ``modulus`` p the minors are tested over F_p.

    Raises:
        InvalidParameterError: If the modulus is not prime.
    """
    if modulus is not None:
        ParameterValidator.require_prime(modulus)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        minor = f.components[i] * g.components[j] - f.components[j] * g.components[i]
        if modulus is None:
            if not minor.is_zero:
                return False
        elif any(int(c) % modulus for c in minor.coeffs()):
            return False
    return True


def projective_order(
    f: PlaneRationalMap,
    max_k: Optional[int] = None,
    modulus: Optional[int] = None,
    limits: Optional[Limits] = None,
) -> Optional[int]:
    """Least k <= max_k with f^k projectively the identity, else None.

    Args:
        f: The map.
        max_k: Search bound; defaults to ``projective_order_max_k``.
        modulus: Optional prime for the test over F_p.
        limits: Optional caps override.
    """
    limits = limits or default_limits()
    max_k = limits.projective_order_max_k if max_k is None else max_k
    ParameterValidator.require_positive(max_k, "max_k")
    identity = identity_map()
    current = f
    for k in range(1, max_k + 1):
        if projectively_equal(current, identity, modulus):
            logger.info("Map of degree %d has order %d", f.degree, k)
            return k
        logger.debug("f^%d has degree %d", k, current.degree)
        if k < max_k:
            current = compose(f, current, limits=limits)
    logger.info("Map of degree %d: order exceeds %d", f.degree, max_k)
    return None


def verify_fundamental_points(
    f: PlaneRationalMap, candidates: Iterable[Sequence[int]]
) -> List[bool]:
    """For each candidate, whether all three components vanish there."""
    return [evaluate(f, point) is None for point in candidates]
