import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from horncalc.errors import (
    InvalidSystem,
    MalformedPayload,
    NotNonconfluent,
    NotZonotope,
)
from horncalc.exact import format_rational, is_positive_integer, parse_rational
from horncalc.puiseux import AffineForm, ExponentPoint

Row = tuple[int, int]


def _int_entry(value: object) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidSystem(f"Matrix entries must be integers, got {value!r}")
    return value


@dataclass(frozen=True)
class HornSystem:
    """Integer rows A_i and rational parameters c_i of a bivariate Horn system."""

    rows: tuple[Row, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.rows:
            raise InvalidSystem("A Horn system needs at least one row")
        if len(self.rows) != len(self.c):
            raise InvalidSystem(
                f"Matrix has {len(self.rows)} rows but c has {len(self.c)} entries"
            )
        rows = []
        for row in self.rows:
            if len(row) != 2:
                raise InvalidSystem(f"Rows must be 2-vectors, got {list(row)}")
            a, b = (_int_entry(v) for v in row)
            if a == 0 and b == 0:
                raise InvalidSystem("Zero rows are not allowed")
            rows.append((a, b))
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "c", tuple(Fraction(v) for v in self.c))

    @classmethod
    def of(cls, rows, c) -> "HornSystem":
        return cls(tuple(tuple(row) for row in rows), tuple(Fraction(v) for v in c))

    @classmethod
    def from_dict(cls, data: dict) -> "HornSystem":
        try:
            matrix, params = data["matrix"], data["c"]
        except (KeyError, TypeError) as exc:
            raise MalformedPayload("System payload needs 'matrix' and 'c'") from exc
        if not isinstance(matrix, list) or not isinstance(params, list):
            raise MalformedPayload("'matrix' and 'c' must be lists")
        return cls(
            tuple(tuple(row) for row in matrix),
            tuple(parse_rational(v) for v in params),
        )

    def to_dict(self) -> dict:
        return {
            "matrix": [list(row) for row in self.rows],
            "c": [format_rational(v) for v in self.c],
        }

    @property
    def m(self) -> int:
        return len(self.rows)

    def append_pair(self, row: Row, gamma: object, delta: object) -> "HornSystem":
        """Add the divisor pair (row, -row) with parameters gamma and delta."""
        a, b = row
        return HornSystem(
            self.rows + ((a, b), (-a, -b)),
            self.c + (Fraction(gamma), Fraction(delta)),
        )


@dataclass(frozen=True)
class HornOperator:
    """x_j P_j(theta) - Q_j(theta), kept as lists of affine factors."""

    j: int
    P: tuple[AffineForm, ...]
    Q: tuple[AffineForm, ...]

    def p_value(self, point: ExponentPoint) -> Fraction:
        return _product(self.P, point)

    def q_value(self, point: ExponentPoint) -> Fraction:
        return _product(self.Q, point)

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "P": [str(f) for f in self.P],
            "Q": [str(f) for f in self.Q],
        }

    def __str__(self) -> str:
        var = "x" if self.j == 1 else "y"
        p = "".join(f"({f})" for f in self.P) or "1"
        q = "".join(f"({f})" for f in self.Q) or "1"
        return f"{var}*{p} - {q}"


def _product(forms: tuple[AffineForm, ...], point: ExponentPoint) -> Fraction:
    value = Fraction(1)
    for form in forms:
        value *= form.evaluate(point)
        if value == 0:
            break
    return value


def build_operator(system: HornSystem, j: int) -> HornOperator:
    if j not in (1, 2):
        raise InvalidSystem(f"Operator index must be 1 or 2, got {j}")
    p_factors: list[AffineForm] = []
    q_factors: list[AffineForm] = []
    for (a, b), c in zip(system.rows, system.c):
        entry = (a, b)[j - 1]
        target = p_factors if entry > 0 else q_factors
        for l in range(abs(entry)):
            target.append(AffineForm(Fraction(a), Fraction(b), c + l))
    return HornOperator(j, tuple(p_factors), tuple(q_factors))


def operators(system: HornSystem) -> tuple[HornOperator, HornOperator]:
    return build_operator(system, 1), build_operator(system, 2)


def is_nonconfluent(system: HornSystem) -> bool:
    return (
        sum(a for a, _ in system.rows) == 0 and sum(b for _, b in system.rows) == 0
    )


# ---------------------------------------------------------------------------
# Zonotope pairing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZonotopePairing:
    pairs: tuple[tuple[int, int], ...]
    a_hat: tuple[Row, ...]
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    c_hat: tuple[Fraction, ...]
    # other matchings of duplicate rows exist and may permute c_hat entries
    ambiguous: bool = False

    @property
    def k(self) -> int:
        return len(self.pairs)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pairs": [list(p) for p in self.pairs],
            "a_hat": [list(r) for r in self.a_hat],
            "alpha": [format_rational(v) for v in self.alpha],
            "beta": [format_rational(v) for v in self.beta],
            "c_hat": [format_rational(v) for v in self.c_hat],
            "c_hat_sorted": [format_rational(v) for v in sorted(self.c_hat)],
            "ambiguous": self.ambiguous,
        }


def zonotope_pairing(system: HornSystem) -> ZonotopePairing:
    """Match every row with a later negated row, in ascending index order."""
    matched: set[int] = set()
    pairs = []
    for i, (a, b) in enumerate(system.rows):
        if i in matched:
            continue
        partner = next(
            (
                j
                for j in range(i + 1, system.m)
                if j not in matched and system.rows[j] == (-a, -b)
            ),
            None,
        )
        if partner is None:
            raise NotZonotope(f"Row {i} {list(system.rows[i])} has no negated partner")
        matched.update((i, partner))
        pairs.append((i, partner))

    params: dict[Row, set[Fraction]] = defaultdict(set)
    for row, c in zip(system.rows, system.c):
        params[row].add(c)
    counts = Counter(system.rows)
    ambiguous = any(counts[row] > 1 and len(cs) > 1 for row, cs in params.items())

    alpha = tuple(system.c[i] for i, _ in pairs)
    beta = tuple(system.c[j] for _, j in pairs)
    return ZonotopePairing(
        pairs=tuple(pairs),
        a_hat=tuple(system.rows[i] for i, _ in pairs),
        alpha=alpha,
        beta=beta,
        c_hat=tuple(-a - b for a, b in zip(alpha, beta)),
        ambiguous=ambiguous,
    )


def is_polynomial_regime(pairing: ZonotopePairing) -> bool:
    return all(is_positive_integer(v) for v in pairing.c_hat)


# ---------------------------------------------------------------------------
# Ore-Sato polygon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolygonSide:
    normal: Row
    tangent: Row
    multiplicity: int

    @property
    def edge(self) -> Row:
        return self.tangent[0] * self.multiplicity, self.tangent[1] * self.multiplicity


@dataclass(frozen=True)
class LatticePolygon:
    sides: tuple[PolygonSide, ...]
    vertices: tuple[Row, ...]
    segments: tuple[Row, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "sides": [
                {
                    "normal": list(side.normal),
                    "tangent": list(side.tangent),
                    "multiplicity": side.multiplicity,
                }
                for side in self.sides
            ],
            "vertices": [list(v) for v in self.vertices],
            "segments": (
                None if self.segments is None else [list(s) for s in self.segments]
            ),
        }


def _rotate(row: Row) -> Row:
    a, b = row
    return -b, a


def _half(v: Row) -> int:
    x, y = v
    return 0 if y > 0 or (y == 0 and x > 0) else 1


def _by_angle(u: Row, v: Row) -> int:
    if _half(u) != _half(v):
        return _half(u) - _half(v)
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def polygon(system: HornSystem) -> LatticePolygon:
    """Ore-Sato polygon: one side per normal direction, edge = k_i * l_i.

    Vertices run counterclockwise from the lowest, then leftmost, vertex and
    are translated so the bounding box starts at the origin.
    """
    if not is_nonconfluent(system):
        raise NotNonconfluent("Rows do not sum to zero; the polygon does not close")

    multiplicity: dict[Row, int] = defaultdict(int)
    for a, b in system.rows:
        g = math.gcd(a, b)
        multiplicity[(a // g, b // g)] += g

    sides = [
        PolygonSide(normal=n, tangent=_rotate(n), multiplicity=k)
        for n, k in multiplicity.items()
    ]
    sides.sort(key=cmp_to_key(lambda p, q: _by_angle(p.tangent, q.tangent)))

    walk = [(0, 0)]
    for side in sides[:-1]:
        x, y = walk[-1]
        dx, dy = side.edge
        walk.append((x + dx, y + dy))
    min_x = min(x for x, _ in walk)
    min_y = min(y for _, y in walk)
    vertices = tuple((x - min_x, y - min_y) for x, y in walk)

    segments = None
    try:
        pairing = zonotope_pairing(system)
    except NotZonotope:
        pass
    else:
        segments = tuple(_rotate(row) for row in pairing.a_hat)
    return LatticePolygon(tuple(sides), vertices, segments)


# ---------------------------------------------------------------------------
# Holonomic rank
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankBreakdown:
    d1: int
    d2: int
    corrections: tuple[tuple[int, int, int], ...]
    rank: int

    def to_dict(self) -> dict:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "corrections": [
                {"i": i, "j": j, "nu": nu} for i, j, nu in self.corrections
            ],
            "rank": self.rank,
        }


def _opposite_open_quadrants(u: Row, v: Row) -> bool:
    if 0 in u or 0 in v:
        return False
    return u[0] * v[1] - u[1] * v[0] == 0 and u[0] * v[0] < 0 and u[1] * v[1] < 0


def holonomic_rank(system: HornSystem) -> RankBreakdown:
    d1 = sum(a for a, _ in system.rows if a > 0)
    d2 = sum(b for _, b in system.rows if b > 0)
    corrections = []
    for i in range(system.m):
        for j in range(i + 1, system.m):
            u, v = system.rows[i], system.rows[j]
            if _opposite_open_quadrants(u, v):
                nu = min(abs(u[0] * v[1]), abs(v[0] * u[1]))
                corrections.append((i, j, nu))
    rank = d1 * d2 - sum(nu for _, _, nu in corrections)
    return RankBreakdown(d1, d2, tuple(corrections), rank)


# ---------------------------------------------------------------------------
# Gamma products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaFactor:
    """Gamma(<vector, (s, t)> + constant) ** multiplicity."""

    vector: Row
    constant: Fraction
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise InvalidSystem(
                f"Gamma factor multiplicity must be >= 1, got {self.multiplicity}"
            )

    @classmethod
    def from_dict(cls, data: dict) -> "GammaFactor":
        try:
            vector = tuple(_int_entry(v) for v in data["vector"])
            multiplicity = _int_entry(data.get("multiplicity", 1))
        except (KeyError, TypeError) as exc:
            raise MalformedPayload(f"Invalid gamma factor {data!r}") from exc
        return cls(vector, parse_rational(data.get("constant", "0")), multiplicity)

    def to_dict(self) -> dict:
        return {
            "vector": list(self.vector),
            "constant": format_rational(self.constant),
            "multiplicity": self.multiplicity,
        }


def from_gamma_products(factors: list[GammaFactor]) -> HornSystem:
    rows: list[Row] = []
    params: list[Fraction] = []
    for factor in factors:
        rows.extend([factor.vector] * factor.multiplicity)
        params.extend([factor.constant] * factor.multiplicity)
    return HornSystem(tuple(rows), tuple(params))


def load_system(data: dict) -> HornSystem:
    """Accept a system payload, a Gamma-product payload or a fixture."""
    if not isinstance(data, dict):
        raise MalformedPayload("Expected a JSON object")
    if "system" in data:
        return load_system(data["system"])
    if "factors" in data:
        if not isinstance(data["factors"], list):
            raise MalformedPayload("'factors' must be a list")
        return from_gamma_products([GammaFactor.from_dict(f) for f in data["factors"]])
    return HornSystem.from_dict(data)
