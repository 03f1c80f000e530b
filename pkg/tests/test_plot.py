from fractions import Fraction

from horncalc.plot import (
    PlotSpec,
    divisor_lines,
    plot_supports,
    plot_system,
    render_ascii,
    render_svg,
)
from horncalc.puiseux import ExponentPoint


def _pt(s, t) -> ExponentPoint:
    return ExponentPoint.of(s, t)


def _hexagon_spec(library, divisors: bool = False) -> PlotSpec:
    return plot_system(library.load("hexagon").system, divisors)


def test_hexagon_svg_draws_every_point(library):
    svg = render_svg(_hexagon_spec(library))
    assert svg.startswith("<?xml")
    assert svg.endswith("</svg>\n")
    assert svg.count("<circle") == 152


def test_svg_is_deterministic(library):
    assert render_svg(_hexagon_spec(library)) == render_svg(_hexagon_spec(library))


def test_svg_colors_each_support(library):
    svg = render_svg(_hexagon_spec(library))
    assert svg.count("fill:#1f77b4") == 22
    assert svg.count("fill:#d62728") == 20
    assert svg.count("fill:#2ca02c") == 110


def test_divisor_lines_are_drawn(library):
    plain = render_svg(_hexagon_spec(library))
    with_lines = render_svg(_hexagon_spec(library, divisors=True))
    assert with_lines.count("<line") > plain.count("<line")


def test_plot_system_collects_admissible_supports(library):
    system = library.load("hexagon").system
    spec = plot_system(system, divisors=True)
    assert [len(s) for s in spec.supports] == [22, 20, 110]
    assert spec.lines == divisor_lines(system)
    assert plot_system(system).lines == ()


def test_empty_plot_has_axes_only():
    svg = render_svg(PlotSpec())
    assert svg.count("<circle") == 0
    assert svg.count("<line") == 2


def test_viewport_covers_fractional_points():
    spec = plot_supports([[_pt(Fraction(-1, 3), 2), _pt(Fraction(5, 2), -1)]])
    assert spec.resolved_viewport() == (-1, 3, -1, 2)


def test_shared_points_take_first_color():
    spec = plot_supports([[_pt(0, 0), _pt(1, 0)], [_pt(1, 0), _pt(2, 0)]])
    assert spec.points() == [(_pt(0, 0), 0), (_pt(1, 0), 0), (_pt(2, 0), 1)]


def test_ascii_grid():
    spec = plot_supports([[_pt(0, 0), _pt(1, 1)], [_pt(Fraction(1, 2), 0)]])
    assert render_ascii(spec) == "1 .*\n0 *.\n"


def test_ascii_marks_fractional_points():
    spec = plot_supports([[_pt(Fraction(1, 2), 0)]])
    assert render_ascii(spec) == "0 o.\n"
