"""Sparse bivariate Puiseux polynomials and the operators acting on them."""

import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import sympy as sp

from horncalc.errors import InvalidInput, MalformedPayload
from horncalc.exact import format_rational, parse_rational

X, Y = sp.symbols("x y")


class ExponentPoint(NamedTuple):
    s: Fraction
    t: Fraction

    @classmethod
    def of(cls, s: object, t: object) -> "ExponentPoint":
        return cls(Fraction(s), Fraction(t))

    def __add__(self, other: "ExponentPoint") -> "ExponentPoint":
        return ExponentPoint(self.s + other.s, self.t + other.t)

    def __sub__(self, other: "ExponentPoint") -> "ExponentPoint":
        return ExponentPoint(self.s - other.s, self.t - other.t)

    def scaled(self, factor: Fraction | int) -> "ExponentPoint":
        return ExponentPoint(self.s * factor, self.t * factor)


Support = frozenset[ExponentPoint]

E1 = ExponentPoint.of(1, 0)
E2 = ExponentPoint.of(0, 1)
ORIGIN = ExponentPoint.of(0, 0)


@dataclass(frozen=True)
class AffineForm:
    """a*theta_x + b*theta_y + gamma, i.e. the polynomial a*s + b*t + gamma."""

    a: Fraction
    b: Fraction
    gamma: Fraction

    @classmethod
    def of(cls, a: object, b: object, gamma: object) -> "AffineForm":
        return cls(Fraction(a), Fraction(b), Fraction(gamma))

    def evaluate(self, point: ExponentPoint) -> Fraction:
        return self.a * point.s + self.b * point.t + self.gamma

    def to_dict(self) -> dict:
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "gamma": format_rational(self.gamma),
        }

    def __str__(self) -> str:
        s, t = sp.symbols("s t")
        return sp.sstr(_sym(self.a) * s + _sym(self.b) * t + _sym(self.gamma))


def _sym(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


@dataclass(frozen=True)
class PuiseuxPoly:
    """Finite map from exponent points to nonzero rational coefficients.

    Terms are kept in lexicographic (s, then t) order, which is the order
    used for iteration and serialization.
    """

    terms: Mapping[ExponentPoint, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for point, coeff in self.terms.items():
            coeff = Fraction(coeff)
            if coeff != 0:
                cleaned[ExponentPoint.of(*point)] = coeff
        object.__setattr__(self, "terms", dict(sorted(cleaned.items())))

    # --- constructors ---

    @classmethod
    def zero(cls) -> "PuiseuxPoly":
        return cls({})

    @classmethod
    def constant(cls, value: object) -> "PuiseuxPoly":
        return cls({ORIGIN: Fraction(value)})

    @classmethod
    def monomial(cls, s: object, t: object, coeff: object = 1) -> "PuiseuxPoly":
        return cls({ExponentPoint.of(s, t): Fraction(coeff)})

    @classmethod
    def parse(cls, text: str) -> "PuiseuxPoly":
        """Read a polynomial written in sympy syntax, e.g. ``x*y**4 - 2/13*x*y**5``."""
        try:
            expr = sp.expand(sp.sympify(text, locals={"x": X, "y": Y}))
        except (sp.SympifyError, SyntaxError, TypeError) as exc:
            raise MalformedPayload(f"Cannot parse polynomial '{text}'") from exc
        terms: dict[ExponentPoint, Fraction] = defaultdict(Fraction)
        for monomial, coeff in expr.as_coefficients_dict().items():
            if not coeff.is_Rational:
                raise MalformedPayload(f"Non-rational coefficient {coeff} in '{text}'")
            powers = monomial.as_powers_dict()
            stray = {base for base in powers if base not in (X, Y, sp.S.One)}
            if stray or not all(powers.get(v, sp.S.Zero).is_Rational for v in (X, Y)):
                raise MalformedPayload(f"Term '{monomial}' is not a Puiseux monomial")
            point = ExponentPoint(
                _fraction(powers.get(X, sp.S.Zero)), _fraction(powers.get(Y, sp.S.Zero))
            )
            terms[point] += _fraction(coeff)
        return cls(terms)

    @classmethod
    def from_dict(cls, data: dict) -> "PuiseuxPoly":
        if isinstance(data, str):
            return cls.parse(data)
        if "expression" in data:
            return cls.parse(data["expression"])
        if "terms" not in data:
            raise MalformedPayload("Polynomial payload needs 'terms' or 'expression'")
        terms: dict[ExponentPoint, Fraction] = defaultdict(Fraction)
        for entry in data["terms"]:
            if len(entry) != 3:
                raise MalformedPayload(f"Term entry must be [s, t, coeff]: {entry!r}")
            s, t, coeff = (parse_rational(v) for v in entry)
            terms[ExponentPoint(s, t)] += coeff
        return cls(terms)

    def to_dict(self) -> dict:
        return {
            "terms": [
                [format_rational(p.s), format_rational(p.t), format_rational(c)]
                for p, c in self.terms.items()
            ]
        }

    # --- inspection ---

    @property
    def support(self) -> Support:
        return frozenset(self.terms)

    def coefficient(self, point: ExponentPoint) -> Fraction:
        return self.terms.get(point, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[ExponentPoint, Fraction]]:
        return iter(self.terms.items())

    def to_expr(self) -> sp.Expr:
        return sp.Add(
            *(_sym(c) * X ** _sym(p.s) * Y ** _sym(p.t) for p, c in self.terms.items())
        )

    def __str__(self) -> str:
        return sp.sstr(self.to_expr())

    # --- ring operations ---

    def __add__(self, other: "PuiseuxPoly") -> "PuiseuxPoly":
        terms = dict(self.terms)
        for point, coeff in other.terms.items():
            terms[point] = terms.get(point, Fraction(0)) + coeff
        return PuiseuxPoly(terms)

    def __neg__(self) -> "PuiseuxPoly":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "PuiseuxPoly") -> "PuiseuxPoly":
        return self + (-other)

    def __mul__(self, other: "PuiseuxPoly") -> "PuiseuxPoly":
        terms: dict[ExponentPoint, Fraction] = defaultdict(Fraction)
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                terms[p + q] += a * b
        return PuiseuxPoly(terms)

    def __pow__(self, exponent: int) -> "PuiseuxPoly":
        result = PuiseuxPoly.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, factor: object) -> "PuiseuxPoly":
        factor = Fraction(factor)
        return PuiseuxPoly({p: c * factor for p, c in self.terms.items()})

    def shift(self, offset: ExponentPoint) -> "PuiseuxPoly":
        """Multiply by the monomial x^offset.s * y^offset.t."""
        return PuiseuxPoly({p + offset: c for p, c in self.terms.items()})


def _fraction(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def add(p: PuiseuxPoly, q: PuiseuxPoly) -> PuiseuxPoly:
    return p + q


def mul(p: PuiseuxPoly, q: PuiseuxPoly) -> PuiseuxPoly:
    return p * q


def scale(p: PuiseuxPoly, r: object) -> PuiseuxPoly:
    return p.scale(r)


def apply_affine_theta(form: AffineForm, p: PuiseuxPoly) -> PuiseuxPoly:
    """(a*theta_x + b*theta_y + gamma) p; monomials are eigenvectors."""
    return PuiseuxPoly({pt: form.evaluate(pt) * c for pt, c in p.terms.items()})


def apply_theta_product(forms: Iterable[AffineForm], p: PuiseuxPoly) -> PuiseuxPoly:
    for form in forms:
        p = apply_affine_theta(form, p)
    return p


def partial_derivative(p: PuiseuxPoly, variable: str) -> PuiseuxPoly:
    if variable == "x":
        return PuiseuxPoly({pt - E1: c * pt.s for pt, c in p.terms.items()})
    if variable == "y":
        return PuiseuxPoly({pt - E2: c * pt.t for pt, c in p.terms.items()})
    raise InvalidInput(f"Unknown variable '{variable}', expected 'x' or 'y'")


def binomial_power(
    u: ExponentPoint, n: int, shift: ExponentPoint = ORIGIN
) -> PuiseuxPoly:
    """Expand x^shift * (1 + x^u)^n."""
    if n < 0:
        raise InvalidInput(f"Binomial exponent must be non-negative, got {n}")
    terms: dict[ExponentPoint, Fraction] = defaultdict(Fraction)
    for j in range(n + 1):
        terms[shift + u.scaled(j)] += math.comb(n, j)
    return PuiseuxPoly(terms)


# ---------------------------------------------------------------------------
# Directions and collinear slices
# ---------------------------------------------------------------------------


def normalize_direction(direction: Iterable[int]) -> tuple[int, int]:
    """Primitive integer vector whose first nonzero component is positive."""
    a, b = (int(v) for v in direction)
    g = math.gcd(a, b)
    if g == 0:
        raise InvalidInput("Direction must be nonzero")
    a, b = a // g, b // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


def common_denominator(points: Iterable[ExponentPoint]) -> int:
    return math.lcm(1, *(v.denominator for p in points for v in p))


def line_offset(point: ExponentPoint, direction: tuple[int, int]) -> Fraction:
    """Coordinate of the line through ``point`` along ``direction``."""
    a, b = direction
    return b * point.s - a * point.t


def lines_partition(supp: Iterable[ExponentPoint], direction) -> list[Support]:
    """Split a support into maximal subsets lying on lines along ``direction``.

    Lines are returned in ascending order of ``line_offset``.
    """
    direction = normalize_direction(direction)
    lines: dict[Fraction, set[ExponentPoint]] = defaultdict(set)
    for point in supp:
        lines[line_offset(point, direction)].add(point)
    return [frozenset(lines[offset]) for offset in sorted(lines)]
