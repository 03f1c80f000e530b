"""Deterministic SVG and ASCII pictures of exponent supports."""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from horncalc.horn import HornSystem
from horncalc.puiseux import AffineForm, ExponentPoint, Support
from horncalc.solver import candidate_supports

UNIT = 24
MARGIN = 1

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<svg width="%(width)d" height="%(height)d" viewBox="0 0 %(width)d %(height)d" \
version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="%(width)d" height="%(height)d" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"

Viewport = tuple[int, int, int, int]


@dataclass(frozen=True)
class PlotSpec:
    supports: tuple[Support, ...] = ()
    lines: tuple[AffineForm, ...] = ()
    viewport: Viewport | None = None
    unit: int = UNIT

    def points(self) -> list[tuple[ExponentPoint, int]]:
        """Every point once, tagged with the first support that holds it."""
        owner: dict[ExponentPoint, int] = {}
        for index, support in enumerate(self.supports):
            for point in support:
                owner.setdefault(point, index)
        return sorted(owner.items())

    def resolved_viewport(self) -> Viewport:
        if self.viewport is not None:
            return self.viewport
        points = [p for p, _ in self.points()]
        if not points:
            return 0, 0, 0, 0
        return (
            math.floor(min(p.s for p in points)),
            math.ceil(max(p.s for p in points)),
            math.floor(min(p.t for p in points)),
            math.ceil(max(p.t for p in points)),
        )


def divisor_lines(system: HornSystem) -> tuple[AffineForm, ...]:
    """Zero lines <A_i, s> + c_i = 0 of the Gamma arguments."""
    return tuple(
        AffineForm(Fraction(a), Fraction(b), c)
        for (a, b), c in zip(system.rows, system.c)
    )


class SVG:
    def __init__(self, viewport: Viewport, unit: int = UNIT):
        self.smin, self.smax, self.tmin, self.tmax = viewport
        self.unit = unit
        self.width = (self.smax - self.smin + 2 * MARGIN) * unit
        self.height = (self.tmax - self.tmin + 2 * MARGIN) * unit
        self.commands: list[str] = []

    def x(self, s) -> float:
        return float((s - self.smin + MARGIN) * self.unit)

    def y(self, t) -> float:
        return float((self.tmax - t + MARGIN) * self.unit)

    def line(self, start, end, color="#999999", width=1.0):
        (x1, y1), (x2, y2) = start, end
        self.commands.append(
            '<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" '
            'style="stroke:%s;stroke-width:%.2f"/>'
            % (self.x(x1), self.y(y1), self.x(x2), self.y(y2), color, width)
        )

    def circle(self, point: ExponentPoint, color: str):
        radius = self.unit * 0.2
        self.commands.append(
            '<circle cx="%.2f" cy="%.2f" r="%.2f" style="fill:%s"/>'
            % (self.x(point.s), self.y(point.t), radius, color)
        )

    def text(self, s, t, text: str, anchor="middle"):
        self.commands.append(
            '<text x="%.2f" y="%.2f" fill="#666666" font-size="%d" '
            'font-family="monospace" text-anchor="%s">%s</text>'
            % (self.x(s), self.y(t), self.unit // 2, anchor, text)
        )

    def render(self) -> str:
        body = "".join(item + "\n" for item in self.commands)
        header = PREAMBLE % {"width": self.width, "height": self.height}
        return header + body + POSTAMBLE


def _clip(form: AffineForm, viewport: Viewport) -> tuple | None:
    """Segment of a*s + b*t + gamma = 0 inside the viewport, or None."""
    smin, smax, tmin, tmax = (Fraction(v) for v in viewport)
    hits = set()
    if form.b != 0:
        for s in (smin, smax):
            t = -(form.a * s + form.gamma) / form.b
            if tmin <= t <= tmax:
                hits.add((s, t))
    if form.a != 0:
        for t in (tmin, tmax):
            s = -(form.b * t + form.gamma) / form.a
            if smin <= s <= smax:
                hits.add((s, t))
    if len(hits) < 2:
        return None
    ordered = sorted(hits)
    return ordered[0], ordered[-1]


def render_svg(spec: PlotSpec) -> str:
    viewport = spec.resolved_viewport()
    svg = SVG(viewport, spec.unit)
    smin, smax, tmin, tmax = viewport

    for s in range(smin, smax + 1):
        svg.text(s, tmin - Fraction(1, 2), str(s))
    for t in range(tmin, tmax + 1):
        svg.text(smin - Fraction(1, 2), t, str(t), anchor="end")
    if tmin <= 0 <= tmax:
        svg.line((smin, 0), (smax, 0), color="#000000")
    if smin <= 0 <= smax:
        svg.line((0, tmin), (0, tmax), color="#000000")

    for form in spec.lines:
        segment = _clip(form, viewport)
        if segment is not None:
            svg.line(*segment, color="#aaaaaa", width=0.5)

    for point, index in spec.points():
        svg.circle(point, COLORS[index % len(COLORS)])
    return svg.render()


def render_ascii(spec: PlotSpec) -> str:
    """One character per integer cell: '*' integral point, 'o' fractional."""
    smin, smax, tmin, tmax = spec.resolved_viewport()
    cells: dict[tuple[int, int], str] = {}
    for point, _ in spec.points():
        key = (math.floor(point.s), math.floor(point.t))
        integral = point.s.denominator == 1 and point.t.denominator == 1
        if cells.get(key) != "*":
            cells[key] = "*" if integral else "o"
    width = max(len(str(tmin)), len(str(tmax)))
    lines = []
    for t in range(tmax, tmin - 1, -1):
        row = "".join(cells.get((s, t), ".") for s in range(smin, smax + 1))
        lines.append(f"{t:>{width}} {row}")
    return "\n".join(lines) + "\n"


def plot_supports(
    supports: Sequence[Iterable[ExponentPoint]],
    lines: Iterable[AffineForm] = (),
    viewport: Viewport | None = None,
) -> PlotSpec:
    return PlotSpec(
        supports=tuple(frozenset(s) for s in supports),
        lines=tuple(lines),
        viewport=viewport,
    )


def plot_system(system: HornSystem, divisors: bool = False) -> PlotSpec:
    """Admissible candidate supports of a zonotope system, one color each."""
    admissible = candidate_supports(system).admissible
    return plot_supports(
        [e.support for e in admissible], divisor_lines(system) if divisors else ()
    )
