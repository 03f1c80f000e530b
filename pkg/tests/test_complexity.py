import random
from fractions import Fraction

import pytest

from horncalc.complexity import (
    ComplexityBound,
    ShortBase,
    appended_pairs_bound,
    ceil_log2,
    delta1,
    get_short,
    is_cl0,
    is_cl1,
    line_support_bound,
    membership_bound,
    poly_bound,
    short_bound,
    sum_bound,
    theta_bound,
    theta_product_bound,
    zonotope_bound,
)
from horncalc.errors import (
    EmptyInput,
    InvalidInput,
    KTooSmall,
    NonCollinear,
    NonPolynomialRegime,
    NonPositive,
    ZeroPolynomial,
)
from horncalc.exact import UniPoly
from horncalc.horn import HornSystem, zonotope_pairing
from horncalc.puiseux import ExponentPoint, PuiseuxPoly

PARALLELOGRAM_SOLUTION = PuiseuxPoly.parse("x*(x + 1)**9*y*(y + 1)**8")


def _u(*coeffs) -> UniPoly:
    return UniPoly(tuple(Fraction(c) for c in coeffs))


def _make_univariate(rng: random.Random, variable: str, degree: int) -> PuiseuxPoly:
    terms = {}
    for power in range(degree + 1):
        point = (power, 0) if variable == "x" else (0, power)
        terms[point] = rng.randint(-3, 3)
    return PuiseuxPoly(terms)


# ---------------------------------------------------------------------------
# Estimate algebra
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "bounds,expected",
    [
        ([3, 4, 4], 6),
        ([1, 1, 2, 2], 4),
        ([1] * 28 + [2] * 3, 7),
        ([1] * 14 + [2] * 20, 7),
        ([5], 5),
        ([0, 0], 1),
    ],
)
def test_sum_bound(bounds, expected):
    result = sum_bound(bounds)
    assert result == ComplexityBound(expected, "alg1")


def test_sum_bound_is_order_independent_and_bounded():
    rng = random.Random(3)
    for _ in range(1000):
        bounds = [rng.randint(0, 6) for _ in range(rng.randint(1, 12))]
        value = sum_bound(bounds).value
        shuffled = bounds[:]
        rng.shuffle(shuffled)
        assert sum_bound(shuffled).value == value
        assert max(bounds) <= value <= max(bounds) + ceil_log2(len(bounds))
        if len(bounds) > 1:
            assert value > max(bounds)


def test_sum_bound_rejects_empty_and_negative():
    with pytest.raises(EmptyInput):
        sum_bound([])
    with pytest.raises(InvalidInput):
        sum_bound([1, -1])
    with pytest.raises(InvalidInput):
        sum_bound([1, 2.5])
    with pytest.raises(InvalidInput):
        sum_bound([Fraction(3, 2)])


@pytest.mark.parametrize("m,expected", [(1, 0), (2, 1), (3, 2), (8, 3), (11, 4)])
def test_ceil_log2(m, expected):
    assert ceil_log2(m) == expected


def test_ceil_log2_rejects_zero():
    with pytest.raises(NonPositive):
        ceil_log2(0)


def test_theta_bounds():
    assert [theta_bound(n).value for n in (0, 1, 2)] == [1, 3, 5]
    assert theta_product_bound(4, 0).value == 4
    assert theta_product_bound(1, 1).value == 3
    assert theta_product_bound(2, 2).value == 11
    with pytest.raises(InvalidInput):
        theta_product_bound(-1, 2)


def test_complexity_bound_is_non_negative():
    with pytest.raises(InvalidInput):
        ComplexityBound(-1, "manual")


# ---------------------------------------------------------------------------
# Zonotope estimate
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["hexagon", "octagon", "decagon"])
def test_zonotope_bound(library, name):
    fixture = library.load(name)
    estimate = zonotope_bound(zonotope_pairing(fixture.system))
    assert estimate.raw.value == fixture.expect("raw")
    assert estimate.refined.value == fixture.expect("refined")
    assert estimate.refined.rule == "theorem_refined"
    if "v" in fixture.expected:
        assert list(estimate.vectors.v) == fixture.expect("v")


def test_zonotope_bound_for_two_pairs(library):
    estimate = zonotope_bound(zonotope_pairing(library.load("parallelogram").system))
    assert estimate.raw.value == 2
    assert estimate.refined.value == 2


def test_zonotope_bound_requires_polynomial_regime(library):
    pairing = zonotope_pairing(library.load("example2-continued").system)
    with pytest.raises(NonPolynomialRegime):
        zonotope_bound(pairing)


def test_zonotope_bound_requires_two_pairs():
    pairing = zonotope_pairing(HornSystem.of([(1, 0), (-1, 0)], [-1, 0]))
    with pytest.raises(KTooSmall):
        zonotope_bound(pairing)


# ---------------------------------------------------------------------------
# Cl_0 and Cl_1
# ---------------------------------------------------------------------------


def test_cl0_membership():
    assert is_cl0(PuiseuxPoly.parse("x**2"))
    assert is_cl0(PuiseuxPoly.parse("x**2*y**3"))
    assert not is_cl0(PuiseuxPoly.parse("x + y"))


@pytest.mark.parametrize("text", ["x + y", "x*y", "x*y**4 - 2/13*x*y**5"])
def test_delta1_vanishes_on_cl1(text):
    assert delta1(PuiseuxPoly.parse(text)).is_zero()
    assert is_cl1(PuiseuxPoly.parse(text))


def test_delta1_of_parallelogram_solution():
    assert is_cl1(PARALLELOGRAM_SOLUTION)


def test_delta1_detects_cl2():
    p = PuiseuxPoly.parse("6*x**2 - 4*x**3 + x**4 - 12*x**2*y + 4*x**3*y")
    assert not delta1(p).is_zero()


def test_delta1_vanishes_on_superpositions():
    rng = random.Random(11)
    for _ in range(200):
        degrees = [rng.randint(1, 4) for _ in range(2)]
        outer_degree = rng.randint(1, max(1, 6 // max(degrees)))
        inner = _make_univariate(rng, "x", degrees[0]) + _make_univariate(
            rng, "y", degrees[1]
        )
        f = PuiseuxPoly.zero()
        for power in range(outer_degree + 1):
            f = f + (inner**power).scale(rng.randint(-2, 2))
        assert delta1(f).is_zero()


@pytest.mark.parametrize("variable", ["x", "y"])
def test_delta1_vanishes_on_single_variable_support(variable):
    rng = random.Random(17)
    for _ in range(50):
        f = _make_univariate(rng, variable, rng.randint(0, 6))
        offset = Fraction(rng.randint(-6, 6), 3)
        shift = (
            ExponentPoint.of(offset, 0)
            if variable == "x"
            else ExponentPoint.of(0, offset)
        )
        assert delta1(f.shift(shift)).is_zero()


def test_decagon_basis_classification(library):
    fixture = library.load("decagon")
    flags = [is_cl1(entry.poly) for entry in fixture.basis]
    assert flags == [entry.cl1 for entry in fixture.basis]
    assert (flags.count(True), flags.count(False)) == (14, 20)
    bounds = [1 if flag else 2 for flag in flags]
    assert sum_bound(bounds).value == fixture.expect("basis_pairing")


def test_pentagon_basis_classification(library):
    fixture = library.load("pentagon")
    for entry in fixture.basis:
        assert is_cl1(entry.poly) is entry.cl1, entry.expression
    bounds = [membership_bound(entry.poly).value for entry in fixture.basis]
    assert sorted(bounds) == [0, 1, 2, 2]
    assert sum_bound(bounds).value == fixture.expect("general_bound")


# ---------------------------------------------------------------------------
# Polynomial estimates
# ---------------------------------------------------------------------------


def test_line_support_bound_of_parallelogram_solution(library):
    bound = line_support_bound(PARALLELOGRAM_SOLUTION)
    assert bound.value == library.load("parallelogram").expect("line_support")
    assert bound.rule == "line_support"


def test_line_support_prefers_axis_lines():
    bound = line_support_bound(PuiseuxPoly.parse("x*(1 + y)"))
    assert bound == ComplexityBound(1, "line_support", (0, 1))


def test_line_support_of_univariate_polynomial():
    assert line_support_bound(PuiseuxPoly.parse("1 + x**3")).rule == "cl0"


def test_get_short_examples():
    diagonal = (1, -1)
    binomial = PuiseuxPoly.parse("(x + y)**5")
    assert get_short(binomial, diagonal) == {ShortBase(diagonal, _u(1, 1))}
    cubes = PuiseuxPoly.parse("x**3 + y**3")
    assert get_short(cubes, diagonal) == {ShortBase(diagonal, _u(1, 0, 0, 1))}
    monomial = PuiseuxPoly.parse("7*x**2*y")
    assert get_short(monomial, (1, 0)) == {ShortBase((1, 0), UniPoly.one())}


def test_get_short_ignores_position_and_scale():
    near = get_short(PuiseuxPoly.parse("(1 + x)**2"), (1, 0))
    far = get_short(PuiseuxPoly.parse("3*x**4*y**2*(1 + x)**6"), (1, 0))
    assert near == far


def test_get_short_rejects_non_collinear_slice():
    with pytest.raises(NonCollinear):
        get_short(PuiseuxPoly.parse("1 + x + y"), (1, 0))


def test_get_short_ignores_fractional_position():
    integral = get_short(PuiseuxPoly.parse("1 + x"), (1, 0))
    assert get_short(PuiseuxPoly.parse("x**(1/2)*(1 + x)"), (1, 0)) == integral
    assert get_short(PuiseuxPoly.parse("y**(2/3)*(1 + x)"), (1, 0)) == integral
    assert integral == {ShortBase((1, 0), _u(1, 1))}


def test_get_short_with_shared_scale():
    assert get_short(PuiseuxPoly.parse("1 + x"), (1, 0), scale=2) == {
        ShortBase((1, 0), _u(1, 0, 1))
    }
    with pytest.raises(InvalidInput):
        get_short(PuiseuxPoly.parse("1 + x**(1/2)"), (1, 0), scale=1)


def _along(base: UniPoly, direction) -> PuiseuxPoly:
    a, b = direction
    return PuiseuxPoly({(i * a, i * b): c for i, c in enumerate(base.coeffs)})


def test_get_short_reconstructs_slice():
    rng = random.Random(23)
    for _ in range(60):
        direction = rng.choice([(1, 0), (0, 1), (1, -1), (1, 2), (2, -1)])
        length = rng.randint(2, 3)
        core = UniPoly(tuple(rng.randint(-3, 3) or 1 for _ in range(length)))
        k = rng.randint(1, 3)
        anchor = (rng.randint(-3, 3), rng.randint(-3, 3))
        slice_ = (_along(core, direction) ** k).shift(ExponentPoint.of(*anchor))
        slice_ = slice_.scale(Fraction(rng.randint(1, 5), rng.randint(1, 5)))

        (short,) = get_short(slice_, direction)
        offsets = [q - min(slice_.support) for q in slice_.support]
        span = max(o.s // direction[0] if direction[0] else o.t for o in offsets)
        power = int(span) // short.base.degree
        content = slice_.coefficient(max(slice_.support)) / short.base.leading**power
        rebuilt = (_along(short.base, direction) ** power).scale(content)
        assert rebuilt.shift(min(slice_.support)) == slice_


def test_short_bound_counts_distinct_bases():
    p = PuiseuxPoly.parse("(1 + x) + y*(1 + x**2) + y**2*(1 + 2*x) + y**3*(1 + x**3)")
    trace = short_bound(p, (1, 0))
    assert (trace.result, trace.value) == (4, 4)


def test_short_bound_merges_repeated_bases():
    p = PuiseuxPoly.parse("(1 + x) + y*(1 + x)**3 + 5*y**2*x**2*(1 + x)")
    assert short_bound(p, (1, 0)).result == 1


def test_short_bound_uses_one_scale_for_all_slices():
    p = PuiseuxPoly.parse("(1 + x) + y**(1/2)*(1 + x)")
    assert short_bound(p, (1, 0)) == ((1, 0), 1, 2)


def test_poly_bound_along_diagonal():
    bound = poly_bound(PuiseuxPoly.parse("(x + y)**2 + (x + y)**5"))
    assert bound == ComplexityBound(2, "alg3", (1, -1))


@pytest.mark.parametrize(
    "text,value", [("(1 + x)*(1 + y)", 2), ("x**2*y**3", 0), ("x + y", 2)]
)
def test_poly_bound(text, value):
    assert poly_bound(PuiseuxPoly.parse(text)).value == value


def test_poly_bound_of_parallelogram_solution(library):
    bound = poly_bound(PARALLELOGRAM_SOLUTION)
    assert bound.value == library.load("parallelogram").expect("poly_bound")


def test_polynomial_estimates_reject_zero():
    with pytest.raises(ZeroPolynomial):
        poly_bound(PuiseuxPoly.zero())
    with pytest.raises(ZeroPolynomial):
        line_support_bound(PuiseuxPoly.zero())


def test_membership_bound():
    assert membership_bound(PuiseuxPoly.parse("x**3")).rule == "cl0"
    assert membership_bound(PuiseuxPoly.parse("x + y")) == ComplexityBound(1, "delta1")


def test_appended_pairs_bound():
    assert appended_pairs_bound(PARALLELOGRAM_SOLUTION, 1).value == 3
    assert appended_pairs_bound(PARALLELOGRAM_SOLUTION, 0).value == 1
