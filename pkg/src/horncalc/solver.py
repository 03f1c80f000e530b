"""Polynomial solutions of Horn systems.

Coefficients of a solution obey the two-term recurrences

    P_j(p - e_j) * c[p - e_j] = Q_j(p) * c[p]

so the solver only ever links points that differ by an integer step. Each
integer-shift class (coset) of a candidate support is therefore solved on its
own, with a sparse exact row reduction.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from horncalc.errors import (
    HorncalcError,
    NonPolynomialRegime,
    NotParallelogram,
    SingularMatrix,
    SingularPair,
)
from horncalc.exact import (
    RationalMatrix,
    format_rational,
    inverse2x2,
    is_positive_integer,
    rref_pivots,
    sparse_nullspace,
)
from horncalc.horn import (
    HornSystem,
    Row,
    ZonotopePairing,
    build_operator,
    holonomic_rank,
    is_polynomial_regime,
    zonotope_pairing,
)
from horncalc.puiseux import (
    E1,
    E2,
    ORIGIN,
    ExponentPoint,
    PuiseuxPoly,
    Support,
    apply_theta_product,
    binomial_power,
)

logger = logging.getLogger(__name__)

BOX_MARGIN = 1

Box = tuple[Fraction, Fraction, Fraction, Fraction]
PairStatus = Literal["admissible", "skipped_nonpolynomial", "skipped_singular"]


# ---------------------------------------------------------------------------
# Pair subsystems and supports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairSubsystem:
    pair: tuple[int, int]
    matrix: RationalMatrix
    alpha: tuple[Fraction, Fraction]
    beta: tuple[Fraction, Fraction]
    inverse: RationalMatrix

    @property
    def exponents(self) -> tuple[Fraction, Fraction]:
        return tuple(-a - b for a, b in zip(self.alpha, self.beta))

    def point(self, k1: int, k2: int) -> ExponentPoint:
        """-A^-1 (alpha + (k1, k2))."""
        s, t = self.inverse.apply((self.alpha[0] + k1, self.alpha[1] + k2))
        return ExponentPoint(-s, -t)

    def support(self) -> Support:
        n1, n2 = (int(n) for n in self.exponents)
        return frozenset(
            self.point(k1, k2) for k1 in range(n1 + 1) for k2 in range(n2 + 1)
        )


def pair_subsystem(pairing: ZonotopePairing, i: int, j: int) -> PairSubsystem:
    matrix = RationalMatrix.of([pairing.a_hat[i], pairing.a_hat[j]])
    try:
        inverse = inverse2x2(matrix)
    except SingularMatrix as exc:
        raise SingularPair(f"Paired rows {i} and {j} are dependent") from exc
    return PairSubsystem(
        pair=(i, j),
        matrix=matrix,
        alpha=(pairing.alpha[i], pairing.alpha[j]),
        beta=(pairing.beta[i], pairing.beta[j]),
        inverse=inverse,
    )


@dataclass(frozen=True)
class PairSupport:
    pair: tuple[int, int]
    status: PairStatus
    support: Support = frozenset()

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "status": self.status,
            "size": len(self.support),
            "support": support_to_list(self.support),
        }


@dataclass(frozen=True)
class SupportReport:
    entries: tuple[PairSupport, ...]

    @property
    def admissible(self) -> tuple[PairSupport, ...]:
        return tuple(e for e in self.entries if e.status == "admissible")

    @property
    def union(self) -> Support:
        return frozenset().union(*(e.support for e in self.admissible))

    def to_dict(self) -> dict:
        return {
            "pairs": [e.to_dict() for e in self.entries],
            "union_size": len(self.union),
            "union": support_to_list(self.union),
        }


def support_to_list(support: Iterable[ExponentPoint]) -> list[list[str]]:
    return [[format_rational(p.s), format_rational(p.t)] for p in sorted(support)]


def candidate_supports(system: HornSystem) -> SupportReport:
    """Support of the polynomial solution attached to every pair of paired rows."""
    pairing = zonotope_pairing(system)
    entries = []
    for i in range(pairing.k):
        for j in range(i + 1, pairing.k):
            try:
                sub = pair_subsystem(pairing, i, j)
            except SingularPair:
                logger.debug("Pair (%d, %d) skipped: singular", i, j)
                entries.append(PairSupport((i, j), "skipped_singular"))
                continue
            if not all(is_positive_integer(n) for n in sub.exponents):
                logger.debug("Pair (%d, %d) skipped: non-polynomial", i, j)
                entries.append(PairSupport((i, j), "skipped_nonpolynomial"))
                continue
            entries.append(PairSupport((i, j), "admissible", sub.support()))
    return SupportReport(tuple(entries))


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def verify_solution(
    system: HornSystem, f: PuiseuxPoly
) -> tuple[PuiseuxPoly, PuiseuxPoly]:
    """Residuals x_j P_j(theta) f - Q_j(theta) f for j = 1, 2."""
    residuals = []
    for j, step in ((1, E1), (2, E2)):
        op = build_operator(system, j)
        lhs = apply_theta_product(op.P, f).shift(step)
        residuals.append(lhs - apply_theta_product(op.Q, f))
    return residuals[0], residuals[1]


def is_solution(system: HornSystem, f: PuiseuxPoly) -> bool:
    return all(r.is_zero() for r in verify_solution(system, f))


@dataclass(frozen=True)
class SolutionBasis:
    elements: tuple[PuiseuxPoly, ...]
    certificates: tuple[tuple[PuiseuxPoly, PuiseuxPoly], ...]
    report: SupportReport | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def certified(self) -> bool:
        return all(r.is_zero() for pair in self.certificates for r in pair)

    def to_dict(self) -> dict:
        data: dict = {
            "dimension": len(self.elements),
            "elements": [
                {"expression": str(p), "size": len(p), **p.to_dict()}
                for p in self.elements
            ],
            "certified": self.certified,
        }
        if self.report is not None:
            data["skipped"] = [
                e.to_dict() for e in self.report.entries if e.status != "admissible"
            ]
        return data


def _certify(
    system: HornSystem, elements: Sequence[PuiseuxPoly]
) -> tuple[tuple[PuiseuxPoly, PuiseuxPoly], ...]:
    certificates = tuple(verify_solution(system, p) for p in elements)
    for p, residuals in zip(elements, certificates):
        if any(not r.is_zero() for r in residuals):
            raise HorncalcError(f"Computed basis element failed verification: {p}")
    return certificates


# ---------------------------------------------------------------------------
# Parallelogram closed form
# ---------------------------------------------------------------------------


def parallelogram_solution(system: HornSystem) -> PuiseuxPoly:
    """monomial * (1 + x^u1)^n1 * (1 + x^u2)^n2 for a two-pair system."""
    pairing = zonotope_pairing(system)
    if pairing.k != 2:
        raise NotParallelogram(f"Expected 2 divisor pairs, found {pairing.k}")
    if not is_polynomial_regime(pairing):
        raise NonPolynomialRegime(
            "c_hat must consist of positive integers, got "
            + ", ".join(format_rational(v) for v in pairing.c_hat)
        )
    sub = pair_subsystem(pairing, 0, 1)
    shift = sub.point(0, 0)
    (a, b), (c, d) = sub.inverse.rows
    u1 = ExponentPoint(-a, -c)
    u2 = ExponentPoint(-b, -d)
    n1, n2 = (int(n) for n in sub.exponents)
    result = binomial_power(u1, n1, shift) * binomial_power(u2, n2)
    _certify(system, [result])
    return result


# ---------------------------------------------------------------------------
# Recurrence solver
# ---------------------------------------------------------------------------


def _coset(point: ExponentPoint) -> ExponentPoint:
    return ExponentPoint(point.s - math.floor(point.s), point.t - math.floor(point.t))


def bounding_box(support: Iterable[ExponentPoint], margin: int = 0) -> Box:
    points = list(support)
    return (
        min(p.s for p in points) - margin,
        max(p.s for p in points) + margin,
        min(p.t for p in points) - margin,
        max(p.t for p in points) + margin,
    )


def box_points(box: Box, offsets: Iterable[ExponentPoint] = (ORIGIN,)) -> Support:
    """Lattice points offset + Z^2 lying in the closed box, for every offset."""
    smin, smax, tmin, tmax = (Fraction(v) for v in box)
    points = set()
    for offset in {_coset(o) for o in offsets}:
        s_lo = math.ceil(smin - offset.s)
        s_hi = math.floor(smax - offset.s)
        t_lo = math.ceil(tmin - offset.t)
        t_hi = math.floor(tmax - offset.t)
        points.update(
            ExponentPoint(offset.s + i, offset.t + j)
            for i in range(s_lo, s_hi + 1)
            for j in range(t_lo, t_hi + 1)
        )
    return frozenset(points)


def default_box(support: Support, margin: int = BOX_MARGIN) -> Support:
    """The support's bounding box, inflated by ``margin``, in the support's cosets."""
    if not support:
        return frozenset()
    return box_points(bounding_box(support, margin), support)


def _solve_coset(
    system: HornSystem, points: list[ExponentPoint]
) -> list[PuiseuxPoly]:
    index = {p: n for n, p in enumerate(points)}
    constraints: dict[tuple[int, ExponentPoint], dict[int, Fraction]] = {}
    for j, step in ((1, E1), (2, E2)):
        op = build_operator(system, j)
        for p in set(points) | {q + step for q in points}:
            row = {}
            prev = p - step
            if prev in index:
                value = op.p_value(prev)
                if value:
                    row[index[prev]] = value
            if p in index:
                value = op.q_value(p)
                if value:
                    row[index[p]] = -value
            if row:
                constraints[(j, p)] = row

    rows = {n: row for n, row in enumerate(constraints.values())}
    vectors = sparse_nullspace(rows, len(rows), len(points))
    logger.debug(
        "Coset solve: %d unknowns, %d constraints, %d solutions",
        len(points),
        len(rows),
        len(vectors),
    )
    return [
        _primitive(PuiseuxPoly({points[n]: v for n, v in vector.items()}))
        for vector in vectors
    ]


def _primitive(p: PuiseuxPoly) -> PuiseuxPoly:
    """Scale to coprime integer coefficients with a positive first term."""
    coeffs = [c for _, c in p]
    denominator = math.lcm(*(c.denominator for c in coeffs))
    numerator = math.gcd(*(int(c * denominator) for c in coeffs))
    factor = Fraction(denominator, numerator)
    if coeffs[0] < 0:
        factor = -factor
    return p.scale(factor)


def solve_on_support(
    system: HornSystem, support: Iterable[ExponentPoint]
) -> SolutionBasis:
    """All solutions whose support lies inside ``support``."""
    by_coset: dict[ExponentPoint, list[ExponentPoint]] = defaultdict(list)
    for point in sorted(support):
        by_coset[_coset(point)].append(point)
    elements: list[PuiseuxPoly] = []
    for coset in sorted(by_coset):
        elements.extend(_solve_coset(system, by_coset[coset]))
    return SolutionBasis(tuple(elements), _certify(system, elements))


# ---------------------------------------------------------------------------
# Linear dependence
# ---------------------------------------------------------------------------


def _rank_rows(polys: Sequence[PuiseuxPoly]) -> tuple[dict, int]:
    points = sorted(set().union(*(p.support for p in polys)))
    index = {p: n for n, p in enumerate(points)}
    rows: dict[int, dict[int, Fraction]] = defaultdict(dict)
    for column, p in enumerate(polys):
        for point, coeff in p:
            rows[index[point]][column] = coeff
    return rows, len(points)


def independent_subset(polys: Sequence[PuiseuxPoly]) -> list[PuiseuxPoly]:
    """The first maximal linearly independent subsequence."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    rows, nrows = _rank_rows(polys)
    return [polys[n] for n in rref_pivots(rows, nrows, len(polys))]


def rank(polys: Sequence[PuiseuxPoly]) -> int:
    return len(independent_subset(polys))


def spans(basis: Sequence[PuiseuxPoly], f: PuiseuxPoly) -> bool:
    """True when f is a rational linear combination of ``basis``."""
    return rank(list(basis) + [f]) == rank(basis)


# ---------------------------------------------------------------------------
# Full basis
# ---------------------------------------------------------------------------


def full_polynomial_basis(
    system: HornSystem, extend_to_rank: bool = True
) -> SolutionBasis:
    """Certified polynomial solutions gathered over every admissible pair.

    Each admissible pair is solved on its default box. When that yields fewer
    elements than the holonomic rank and ``extend_to_rank`` is set, one more
    solve runs on the box around the union of all admissible supports.
    """
    report = candidate_supports(system)
    found: list[PuiseuxPoly] = []
    for entry in report.admissible:
        found.extend(solve_on_support(system, default_box(entry.support)).elements)
    elements = independent_subset(found)

    expected = holonomic_rank(system).rank
    if extend_to_rank and len(elements) < expected and report.admissible:
        logger.debug(
            "Per-pair solves found %d of %d elements; solving on the union box",
            len(elements),
            expected,
        )
        union = solve_on_support(system, default_box(report.union))
        elements = independent_subset(elements + list(union.elements))

    return SolutionBasis(tuple(elements), _certify(system, elements), report)


# ---------------------------------------------------------------------------
# Appending a divisor pair
# ---------------------------------------------------------------------------


def lift_through_pair(
    p0: PuiseuxPoly, row: Row, gamma: object, delta: object
) -> PuiseuxPoly:
    """Carry a solution over to the system extended by the pair (row, -row).

    With u = <row, s>, the extra Gamma factors rescale coefficients by G(u),
    where G(u + 1) / G(u) = (u + gamma) / (delta - u - 1), normalized to 1 at
    the smallest u of each coset.
    """
    gamma, delta = Fraction(gamma), Fraction(delta)
    a, b = row
    u_of = {p: a * p.s + b * p.t for p, _ in p0}
    lowest: dict[Fraction, Fraction] = {}
    for u in u_of.values():
        key = u - math.floor(u)
        lowest[key] = min(u, lowest.get(key, u))

    terms = {}
    for point, coeff in p0:
        u = u_of[point]
        v = lowest[u - math.floor(u)]
        factor = Fraction(1)
        while v < u:
            numerator, denominator = v + gamma, delta - v - 1
            if numerator == 0 or denominator == 0:
                raise SingularPair(f"Appended pair vanishes at <row, s> = {v}")
            factor *= numerator / denominator
            v += 1
        terms[point] = coeff * factor
    return PuiseuxPoly(terms)
