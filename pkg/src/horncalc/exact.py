"""Exact scalars, univariate polynomials and rational linear algebra.

Rationals are plain ``fractions.Fraction`` values. Polynomial gcd and
squarefree work is delegated to sympy's ``Poly`` over ``ZZ``/``QQ``; row
reduction goes through ``DomainMatrix`` in its sparse format, since the
recurrence systems built by the solver have at most two nonzeros per row.
"""

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

import sympy as sp
from sympy.polys.matrices import DomainMatrix

from horncalc.errors import MalformedPayload, SingularMatrix, ZeroPolynomial

W = sp.Symbol("w")


def parse_rational(value: object) -> Fraction:
    """Read a rational from its JSON form ("p/q", "p" or a bare integer)."""
    if isinstance(value, bool):
        raise MalformedPayload(f"Expected a rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedPayload(f"Invalid rational '{value}'") from exc
    raise MalformedPayload(f"Expected a rational string, got {value!r}")


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_positive_integer(value: Fraction) -> bool:
    return value.denominator == 1 and value > 0


def _to_qq(value: Fraction):
    return sp.QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _from_sympy(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, coefficients indexed by degree.

    Trailing zeros are stripped on construction, so the zero polynomial is
    the empty tuple and ``degree`` is always ``len(coeffs) - 1``.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def one(cls) -> "UniPoly":
        return cls((Fraction(1),))

    @classmethod
    def from_poly(cls, poly: sp.Poly) -> "UniPoly":
        high_first = [_from_sympy(c) for c in poly.all_coeffs()]
        return cls(tuple(reversed(high_first)))

    def to_poly(self, domain=sp.QQ) -> sp.Poly:
        if not self.coeffs:
            return sp.Poly(0, W, domain=domain)
        high_first = [sp.Rational(c.numerator, c.denominator) for c in self.coeffs]
        return sp.Poly(list(reversed(high_first)), W, domain=domain)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("The zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def scale(self, factor: Fraction) -> "UniPoly":
        return UniPoly(tuple(c * factor for c in self.coeffs))

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly.from_poly(self.to_poly() * other.to_poly())

    def __pow__(self, exponent: int) -> "UniPoly":
        return UniPoly.from_poly(self.to_poly() ** exponent)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        return str(self.to_poly().as_expr())


def _primitive_integer_part(u: UniPoly) -> tuple[Fraction, list[int]]:
    """Split u = content * prim with prim integral, primitive, lc > 0."""
    denominators = math.lcm(*(c.denominator for c in u.coeffs))
    scaled = [int(c * denominators) for c in u.coeffs]
    g = reduce(math.gcd, scaled)
    if scaled[-1] < 0:
        g = -g
    return Fraction(g, denominators), [c // g for c in scaled]


def _normalize_factor(poly: sp.Poly) -> tuple[int, UniPoly]:
    """Return (sign, factor) with the factor primitive and lc positive."""
    ints = [int(c) for c in reversed(poly.all_coeffs())]
    g = reduce(math.gcd, ints)
    sign = 1
    if ints[-1] < 0:
        g, sign = -g, -1
    return sign, UniPoly(tuple(Fraction(c // g) for c in ints))


def _squarefree(u: UniPoly) -> tuple[Fraction, list[tuple[UniPoly, int]]]:
    if u.is_zero():
        raise ZeroPolynomial("Squarefree decomposition of the zero polynomial")
    content, prim = _primitive_integer_part(u)
    poly = sp.Poly(list(reversed(prim)), W, domain=sp.ZZ)
    coeff, parts = poly.sqf_list()
    content *= _from_sympy(coeff)
    factors = []
    for part, multiplicity in parts:
        if part.degree() <= 0:
            content *= _from_sympy(part.LC()) ** multiplicity
            continue
        sign, factor = _normalize_factor(part)
        content *= Fraction(sign) ** multiplicity
        factors.append((factor, multiplicity))
    factors.sort(key=lambda item: (item[0].degree, item[0].coeffs))
    return content, factors


def squarefree_decomposition(u: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun-style decomposition u = content * prod(a_i ** m_i).

    Every a_i is squarefree, primitive with a positive leading coefficient,
    and the a_i are pairwise coprime. Constants decompose to the empty list.
    """
    return _squarefree(u)[1]


@lru_cache(maxsize=4096)
def power_base(u: UniPoly) -> tuple[UniPoly, int, Fraction]:
    """Write u = content * base**k with k as large as possible."""
    content, factors = _squarefree(u)
    if not factors:
        return UniPoly.one(), 1, content
    k = reduce(math.gcd, (m for _, m in factors))
    base = UniPoly.one()
    for factor, multiplicity in factors:
        base = base * factor ** (multiplicity // k)
    return base, k, content


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.rows)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise MalformedPayload("Matrix rows must all have the same length")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable[object]]) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        columns = list(zip(*other.rows))
        return RationalMatrix(
            tuple(tuple(_dot(row, col) for col in columns) for row in self.rows)
        )

    def apply(self, vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(_dot(row, vector) for row in self.rows)


SparseRows = Mapping[int, Mapping[int, Fraction]]


def _dot(row: Sequence[Fraction], other: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(row, other)), Fraction(0))


def _reduce(rows: SparseRows, nrows: int, ncols: int):
    entries = {}
    for i, row in rows.items():
        converted = {j: _to_qq(v) for j, v in row.items() if v != 0}
        if converted:
            entries[i] = converted
    matrix = DomainMatrix(entries, (nrows, ncols), sp.QQ)
    reduced, pivots = matrix.rref()
    return reduced.to_sparse().rep, tuple(pivots)


def rref_pivots(rows: SparseRows, nrows: int, ncols: int) -> tuple[int, ...]:
    if nrows == 0 or ncols == 0:
        return ()
    return _reduce(rows, nrows, ncols)[1]


def sparse_nullspace(
    rows: SparseRows, nrows: int, ncols: int
) -> list[dict[int, Fraction]]:
    """Right nullspace of a sparse rational matrix.

    One vector per free column, in ascending column order; the free column
    is set to 1 and pivot columns are read off the reduced echelon form.
    """
    if ncols == 0:
        return []
    if nrows == 0 or not any(v != 0 for row in rows.values() for v in row.values()):
        return [{j: Fraction(1)} for j in range(ncols)]
    reduced, pivots = _reduce(rows, nrows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = {free: Fraction(1)}
        for r, pivot in enumerate(pivots):
            value = reduced.get(r, {}).get(free)
            if value:
                vector[pivot] = -_from_qq(value)
        basis.append(vector)
    return basis


def nullspace(matrix: RationalMatrix) -> list[tuple[Fraction, ...]]:
    nrows, ncols = matrix.shape
    rows = {i: dict(enumerate(row)) for i, row in enumerate(matrix.rows)}
    return [
        tuple(vector.get(j, Fraction(0)) for j in range(ncols))
        for vector in sparse_nullspace(rows, nrows, ncols)
    ]


def inverse2x2(matrix: RationalMatrix) -> RationalMatrix:
    if matrix.shape != (2, 2):
        raise MalformedPayload(f"Expected a 2x2 matrix, got shape {matrix.shape}")
    (a, b), (c, d) = matrix.rows
    det = a * d - b * c
    if det == 0:
        raise SingularMatrix("Matrix has zero determinant")
    return RationalMatrix(((d / det, -b / det), (-c / det, a / det)))
