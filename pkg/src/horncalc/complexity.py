"""Upper bounds on analytic complexity.

A bound N means "the function belongs to Cl_N". Every bound carries the rule
that produced it so reports can explain where a number came from.
"""

import heapq
import logging
import numbers
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, NamedTuple

from horncalc.errors import (
    EmptyInput,
    InvalidInput,
    KTooSmall,
    NonCollinear,
    NonPolynomialRegime,
    NonPositive,
    ZeroPolynomial,
)
from horncalc.exact import UniPoly, format_rational, power_base
from horncalc.horn import ZonotopePairing, is_polynomial_regime
from horncalc.puiseux import (
    ExponentPoint,
    PuiseuxPoly,
    common_denominator,
    line_offset,
    lines_partition,
    normalize_direction,
    partial_derivative,
)

logger = logging.getLogger(__name__)

DIRECTION_CAP = 20

Rule = Literal[
    "alg1",
    "alg3",
    "theorem_raw",
    "theorem_refined",
    "line_support",
    "theta",
    "theta_product",
    "delta1",
    "cl0",
    "manual",
]
Direction = tuple[int, int]


@dataclass(frozen=True)
class ComplexityBound:
    value: int
    rule: Rule
    direction: Direction | None = None

    def __post_init__(self):
        if self.value < 0:
            raise InvalidInput(f"Complexity bounds are non-negative, got {self.value}")

    def to_dict(self) -> dict:
        data: dict = {"value": self.value, "rule": self.rule}
        if self.direction is not None:
            data["direction"] = list(self.direction)
        return data


def ceil_log2(m: int) -> int:
    if m < 1:
        raise NonPositive(f"ceil_log2 needs a positive integer, got {m}")
    return (m - 1).bit_length()


# ---------------------------------------------------------------------------
# Estimate algebra
# ---------------------------------------------------------------------------


def sum_bound(bounds) -> ComplexityBound:
    """Bound for a sum of functions with the given bounds.

    Repeatedly merges the two smallest entries c_i, c_j into max(c_i, c_j) + 1.
    """
    heap = list(bounds)
    if not heap:
        raise EmptyInput("sum_bound needs at least one bound")
    if not all(isinstance(b, numbers.Integral) for b in heap):
        raise InvalidInput(f"Bounds must be integers, got {heap}")
    heap = [int(b) for b in heap]
    if any(b < 0 for b in heap):
        raise InvalidInput("Bounds must be non-negative")
    heapq.heapify(heap)
    while len(heap) > 1:
        first = heapq.heappop(heap)
        second = heapq.heappop(heap)
        heapq.heappush(heap, max(first, second) + 1)
    return ComplexityBound(heap[0], "alg1")


def theta_bound(n: int) -> ComplexityBound:
    """An affine theta-operator applied to a Cl_n function lands in Cl_{2n+1}."""
    if n < 0:
        raise InvalidInput(f"n must be non-negative, got {n}")
    return ComplexityBound(2 * n + 1, "theta")


def theta_product_bound(n: int, k: int) -> ComplexityBound:
    if n < 0 or k < 0:
        raise InvalidInput(f"n and k must be non-negative, got n={n}, k={k}")
    return ComplexityBound(2**k * (n + 1) - 1, "theta_product")


# ---------------------------------------------------------------------------
# Zonotope estimate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EstimateVectors:
    c_hat_sorted: tuple[Fraction, ...]
    v: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "c_hat_sorted": [format_rational(c) for c in self.c_hat_sorted],
            "v": list(self.v),
        }


@dataclass(frozen=True)
class ZonotopeEstimate:
    raw: ComplexityBound
    refined: ComplexityBound
    vectors: EstimateVectors

    def to_dict(self) -> dict:
        return {
            "raw": self.raw.to_dict(),
            "refined": self.refined.to_dict(),
            "vectors": self.vectors.to_dict(),
        }


def zonotope_bound(pairing: ZonotopePairing) -> ZonotopeEstimate:
    if not is_polynomial_regime(pairing):
        raise NonPolynomialRegime(
            "c_hat must consist of positive integers, got "
            + ", ".join(format_rational(c) for c in pairing.c_hat)
        )
    k = pairing.k
    if k < 2:
        raise KTooSmall(f"The estimate needs at least 2 divisor pairs, got {k}")

    c_hat = sorted(int(c) for c in pairing.c_hat)
    pairs_term = 3 * 2 ** (k - 2) - 1
    raw = min(
        pairs_term + ceil_log2(k * (k - 1) // 2),
        2 + ceil_log2(c_hat[-1] + 1) + ceil_log2(k - 1),
    )
    v = tuple(
        min(2 + ceil_log2(c_hat[i - 1] + 1), pairs_term + ceil_log2(k - i))
        for i in range(1, k)
    )
    return ZonotopeEstimate(
        raw=ComplexityBound(raw, "theorem_raw"),
        refined=ComplexityBound(sum_bound(v).value, "theorem_refined"),
        vectors=EstimateVectors(tuple(sorted(pairing.c_hat)), v),
    )


# ---------------------------------------------------------------------------
# Polynomial estimates
# ---------------------------------------------------------------------------


def is_cl0(f: PuiseuxPoly) -> bool:
    return len({p.s for p, _ in f}) <= 1 or len({p.t for p, _ in f}) <= 1


def delta1(f: PuiseuxPoly) -> PuiseuxPoly:
    """The differential polynomial that vanishes exactly on Cl_1."""
    fx = partial_derivative(f, "x")
    fy = partial_derivative(f, "y")
    fxx = partial_derivative(fx, "x")
    fxy = partial_derivative(fx, "y")
    fyy = partial_derivative(fy, "y")
    fxxy = partial_derivative(fxx, "y")
    fxyy = partial_derivative(fxy, "y")
    fx2 = fx * fx
    fy2 = fy * fy
    return fx * fy2 * fxxy - fx2 * fy * fxyy + fxy * fx2 * fyy - fxy * fy2 * fxx


def is_cl1(f: PuiseuxPoly) -> bool:
    return delta1(f).is_zero()


def _require_nonzero(p: PuiseuxPoly) -> None:
    if p.is_zero():
        raise ZeroPolynomial("Complexity of the zero polynomial is not defined")


def candidate_directions(p: PuiseuxPoly) -> list[Direction]:
    """Primitive differences of support points, plus both axes, sorted."""
    scale = common_denominator(p.support)
    points = sorted((int(q.s * scale), int(q.t * scale)) for q in p.support)
    directions = {(1, 0), (0, 1)}
    for n, (s1, t1) in enumerate(points):
        for s2, t2 in points[n + 1 :]:
            d = normalize_direction((s2 - s1, t2 - t1))
            if max(abs(d[0]), abs(d[1])) <= DIRECTION_CAP:
                directions.add(d)
    return sorted(directions)


def _is_axis(direction: Direction) -> bool:
    return 0 in direction


def line_support_bound(p: PuiseuxPoly) -> ComplexityBound:
    """1 + ceil(log2 L) for L axis-parallel lines, 2 + ceil(log2 L) otherwise."""
    _require_nonzero(p)
    if all(q.s == 0 for q in p.support) or all(q.t == 0 for q in p.support):
        return ComplexityBound(0, "cl0")
    best: ComplexityBound | None = None
    for direction in candidate_directions(p):
        lines = len(lines_partition(p.support, direction))
        value = (1 if _is_axis(direction) else 2) + ceil_log2(lines)
        if best is None or value < best.value:
            best = ComplexityBound(value, "line_support", direction)
    return best


@dataclass(frozen=True)
class ShortBase:
    direction: Direction
    base: UniPoly

    def __str__(self) -> str:
        return f"{list(self.direction)}: {self.base}"


def offset_denominator(points: Iterable[ExponentPoint]) -> int:
    """LCM of the denominators of all offsets from the smallest point."""
    points = list(points)
    anchor = min(points)
    return common_denominator(q - anchor for q in points)


def get_short(
    slice_: PuiseuxPoly, direction, scale: int | None = None
) -> frozenset[ShortBase]:
    """Perfect-power base of a slice written as monomial * u(w).

    Here w is the monomial of the primitive step along ``direction`` once
    offsets are multiplied by ``scale``. Without a scale the slice's own
    offsets decide it, so the base does not depend on where the slice sits.
    Callers comparing several slices of one polynomial pass a shared scale.
    """
    _require_nonzero(slice_)
    direction = normalize_direction(direction)
    if len({line_offset(q, direction) for q in slice_.support}) > 1:
        raise NonCollinear(f"Slice support is not on one line along {direction}")

    if scale is None:
        scale = offset_denominator(slice_.support)
    a, b = direction
    anchor = min(slice_.support)
    coeffs: dict[int, Fraction] = {}
    for q, c in slice_:
        ds, dt = (q.s - anchor.s) * scale, (q.t - anchor.t) * scale
        if ds.denominator != 1 or dt.denominator != 1:
            raise InvalidInput(f"Scale {scale} does not clear the offset of {q}")
        coeffs[int(ds) // a if a else int(dt) // b] = c
    u = UniPoly(tuple(coeffs.get(i, 0) for i in range(max(coeffs) + 1)))
    base, _, _ = power_base(u)
    return frozenset({ShortBase(direction, base)})


class ShortTrace(NamedTuple):
    direction: Direction
    result: int
    value: int


def short_bound(p: PuiseuxPoly, direction) -> ShortTrace:
    """Count slices whose bases are not yet covered, then N = 2 + ceil(log2)."""
    _require_nonzero(p)
    direction = normalize_direction(direction)
    scale = offset_denominator(p.support)
    seen: set[ShortBase] = set()
    result = 0
    for line in lines_partition(p.support, direction):
        slice_ = PuiseuxPoly({q: p.coefficient(q) for q in line})
        curr = get_short(slice_, direction, scale)
        if not curr <= seen:
            seen |= curr
            result += 1
    return ShortTrace(direction, result, 2 + ceil_log2(result))


def poly_bound(p: PuiseuxPoly) -> ComplexityBound:
    _require_nonzero(p)
    if is_cl0(p):
        return ComplexityBound(0, "cl0")
    best = line_support_bound(p)
    for direction in candidate_directions(p):
        if best.value <= 2:
            break
        trace = short_bound(p, direction)
        if trace.value < best.value:
            best = ComplexityBound(trace.value, "alg3", direction)
    logger.debug("Polynomial bound %d via %s %s", best.value, best.rule, best.direction)
    return best


def membership_bound(p: PuiseuxPoly) -> ComplexityBound:
    """poly_bound, lowered to 1 when the Cl_1 criterion holds."""
    _require_nonzero(p)
    if is_cl0(p):
        return ComplexityBound(0, "cl0")
    if is_cl1(p):
        return ComplexityBound(1, "delta1")
    return poly_bound(p)


def appended_pairs_bound(p0: PuiseuxPoly, k: int) -> ComplexityBound:
    """Bound for a solution with the support of ``p0`` after k more divisor pairs."""
    return theta_product_bound(membership_bound(p0).value, k)
