"""JSON-ready reports shared by the command line and the tool server."""

from collections.abc import Iterable

from horncalc.complexity import (
    delta1,
    is_cl0,
    line_support_bound,
    membership_bound,
    poly_bound,
    sum_bound,
    zonotope_bound,
)
from horncalc.errors import MalformedPayload, NonPolynomialRegime, NotZonotope
from horncalc.exact import format_rational, parse_rational
from horncalc.horn import (
    HornSystem,
    holonomic_rank,
    is_polynomial_regime,
    operators,
    polygon,
    zonotope_pairing,
)
from horncalc.puiseux import ORIGIN, ExponentPoint, PuiseuxPoly, Support
from horncalc.solver import (
    box_points,
    candidate_supports,
    full_polynomial_basis,
    solve_on_support,
    verify_solution,
)


def rank_report(system: HornSystem) -> dict:
    return holonomic_rank(system).to_dict()


def operators_report(system: HornSystem) -> dict:
    return {
        "operators": [op.to_dict() | {"display": str(op)} for op in operators(system)]
    }


def polygon_report(system: HornSystem) -> dict:
    return polygon(system).to_dict()


def pairing_report(system: HornSystem) -> dict:
    return zonotope_pairing(system).to_dict()


def supports_report(system: HornSystem) -> dict:
    return candidate_supports(system).to_dict()


def parse_box(values: Iterable[object]) -> tuple:
    box = tuple(parse_rational(v) for v in values)
    if len(box) != 4:
        raise MalformedPayload("A box is given as smin smax tmin tmax")
    return box


def solve_report(
    system: HornSystem, box: tuple | None = None, allow_partial: bool = False
) -> dict:
    """Certified basis on an explicit box, or the full basis over all pairs."""
    if box is not None:
        try:
            offsets = candidate_supports(system).union or {ORIGIN}
        except NotZonotope:
            offsets = {ORIGIN}
        basis = solve_on_support(system, box_points(box, offsets))
        return basis.to_dict() | {"box": [format_rational(v) for v in box]}

    pairing = zonotope_pairing(system)
    if not is_polynomial_regime(pairing) and not allow_partial:
        raise NonPolynomialRegime(
            "c_hat is not a vector of positive integers; "
            "pass allow_partial to solve the admissible pairs only"
        )
    basis = full_polynomial_basis(system)
    return basis.to_dict() | {"rank": holonomic_rank(system).rank}


def read_polynomials(data: object) -> list[PuiseuxPoly]:
    """A polynomial payload, a list of them, or a solve report."""
    if isinstance(data, dict) and "elements" in data:
        data = data["elements"]
    if isinstance(data, list):
        return [PuiseuxPoly.from_dict(item) for item in data]
    return [PuiseuxPoly.from_dict(data)]


def read_support(data: object) -> Support:
    """A list of [s, t] points, or a payload holding one under "support"."""
    if isinstance(data, dict) and "support" in data:
        data = data["support"]
    if not isinstance(data, list):
        raise MalformedPayload("A support is a list of [s, t] points")
    points = []
    for entry in data:
        if not isinstance(entry, list) or len(entry) != 2:
            raise MalformedPayload(f"Support point must be [s, t]: {entry!r}")
        s, t = (parse_rational(v) for v in entry)
        points.append(ExponentPoint(s, t))
    return frozenset(points)


def verify_report(system: HornSystem, polys: list[PuiseuxPoly]) -> dict:
    results = []
    for p in polys:
        residuals = verify_solution(system, p)
        results.append(
            {
                "expression": str(p),
                "residuals": [str(r) for r in residuals],
                "is_solution": all(r.is_zero() for r in residuals),
            }
        )
    return {
        "results": results,
        "all_solutions": all(r["is_solution"] for r in results),
    }


def estimate_report(system: HornSystem) -> dict:
    pairing = zonotope_pairing(system)
    return zonotope_bound(pairing).to_dict() | {
        "c_hat": [format_rational(c) for c in pairing.c_hat],
        "ambiguous": pairing.ambiguous,
    }


def poly_estimate_report(p: PuiseuxPoly) -> dict:
    return {
        "expression": str(p),
        "bound": poly_bound(p).to_dict(),
        "line_support": line_support_bound(p).to_dict(),
        "membership": membership_bound(p).to_dict(),
    }


def sum_estimate_report(bounds: Iterable[int]) -> dict:
    bounds = list(bounds)
    return sum_bound(bounds).to_dict() | {"inputs": bounds}


def delta1_report(p: PuiseuxPoly) -> dict:
    d = delta1(p)
    return {
        "delta1": str(d),
        **d.to_dict(),
        "is_cl0": is_cl0(p),
        "is_cl1": d.is_zero(),
    }


def to_text(report: object, indent: int = 0) -> str:
    """Plain `key: value` rendering of a report, nested by indentation."""
    pad = "  " * indent
    if isinstance(report, dict):
        lines = []
        for key, value in report.items():
            if isinstance(value, (dict, list)) and value and not _is_flat(value):
                lines.append(f"{pad}{key}:")
                lines.append(to_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_flat(value)}")
        return "\n".join(lines)
    if isinstance(report, list):
        return "\n".join(
            f"{pad}-\n{to_text(item, indent + 1)}"
            if isinstance(item, (dict, list)) and not _is_flat(item)
            else f"{pad}- {_flat(item)}"
            for item in report
        )
    return f"{pad}{_flat(report)}"


def _is_flat(value: object) -> bool:
    if isinstance(value, dict):
        return False
    if isinstance(value, list):
        return all(
            not isinstance(v, (dict, list)) or (isinstance(v, list) and _is_flat(v))
            for v in value
        )
    return True


def _flat(value: object) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_flat(v) for v in value) + "]"
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return "null"
    return str(value)
