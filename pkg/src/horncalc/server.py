import json
import logging
from collections.abc import Callable

from injector import Injector, Module, provider, singleton
from mcp.server.fastmcp import FastMCP

from horncalc import reports
from horncalc.errors import HorncalcError
from horncalc.fixtures import DirectoryFixtureStore, Fixture, FixtureStore
from horncalc.horn import HornSystem
from horncalc.plot import plot_system, render_ascii, render_svg
from horncalc.puiseux import PuiseuxPoly

logger = logging.getLogger(__name__)


class FixtureModule(Module):
    @singleton
    @provider
    def provide_fixture_store(self) -> FixtureStore:
        return DirectoryFixtureStore()


def create_server(injector: Injector | None = None) -> FastMCP:
    if injector is None:
        injector = Injector([FixtureModule])

    server = FastMCP("horncalc")

    def _store() -> FixtureStore:
        return injector.get(FixtureStore)

    def _system(
        fixture: str | None, matrix: list[list[int]] | None, c: list[str] | None
    ) -> HornSystem:
        if fixture is not None:
            return _store().load(fixture).system
        return HornSystem.from_dict({"matrix": matrix, "c": c})

    def _respond(build: Callable[[], object]) -> str:
        try:
            return json.dumps(build(), indent=2)
        except (HorncalcError, FileNotFoundError) as exc:
            logger.debug("Tool failed: %s", exc)
            return json.dumps({"error": str(exc)})

    # ------------------------------------------------------------------
    # Tool: rank
    # ------------------------------------------------------------------
    @server.tool()
    async def rank(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Holonomic rank of a Horn system.

        Args:
            fixture: Name of a stored example system (e.g. "hexagon").
            matrix: Integer rows A_i, used when no fixture is given.
            c: Rational parameters c_i as strings such as "-23" or "1/2".

        Returns JSON with d1, d2, the correction terms and the rank.
        """
        return _respond(lambda: reports.rank_report(_system(fixture, matrix, c)))

    # ------------------------------------------------------------------
    # Tool: operators
    # ------------------------------------------------------------------
    @server.tool()
    async def operators(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Factor lists P_j and Q_j of the two Horn operators."""
        return _respond(lambda: reports.operators_report(_system(fixture, matrix, c)))

    # ------------------------------------------------------------------
    # Tool: polygon
    # ------------------------------------------------------------------
    @server.tool()
    async def polygon(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Ore-Sato polygon: sides, vertices and, for zonotopes, Minkowski segments."""
        return _respond(lambda: reports.polygon_report(_system(fixture, matrix, c)))

    # ------------------------------------------------------------------
    # Tool: pairing
    # ------------------------------------------------------------------
    @server.tool()
    async def pairing(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Divisor pairs, alpha, beta and c_hat of a zonotope system."""
        return _respond(lambda: reports.pairing_report(_system(fixture, matrix, c)))

    # ------------------------------------------------------------------
    # Tool: supports
    # ------------------------------------------------------------------
    @server.tool()
    async def supports(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Candidate supports of polynomial solutions, one per pair of pairs.

        Pairs that are singular or outside the polynomial regime are listed
        with their status and an empty support.
        """
        return _respond(lambda: reports.supports_report(_system(fixture, matrix, c)))

    # ------------------------------------------------------------------
    # Tool: solve
    # ------------------------------------------------------------------
    @server.tool()
    async def solve(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
        box: list[str] | None = None,
        allow_partial: bool = False,
    ) -> str:
        """Certified basis of polynomial solutions.

        Args:
            fixture: Name of a stored example system.
            matrix: Integer rows A_i, used when no fixture is given.
            c: Rational parameters c_i.
            box: Optional [smin, smax, tmin, tmax]; solves on that exponent box.
            allow_partial: Solve admissible pairs even outside the polynomial
                regime.

        Every returned element has been checked against both operators.
        """

        def build() -> dict:
            parsed = reports.parse_box(box) if box is not None else None
            return reports.solve_report(
                _system(fixture, matrix, c), parsed, allow_partial
            )

        return _respond(build)

    # ------------------------------------------------------------------
    # Tool: verify
    # ------------------------------------------------------------------
    @server.tool()
    async def verify(
        polynomial: str,
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Apply both Horn operators to a polynomial and report the residuals.

        Args:
            polynomial: Expression such as "1 - 4*x - 4*y + 12*x*y"; rational
                exponents like "x**(1/3)" are allowed.
        """
        return _respond(
            lambda: reports.verify_report(
                _system(fixture, matrix, c), [PuiseuxPoly.parse(polynomial)]
            )
        )

    # ------------------------------------------------------------------
    # Tool: estimate
    # ------------------------------------------------------------------
    @server.tool()
    async def estimate(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
    ) -> str:
        """Raw and refined complexity bounds for the general solution."""
        return _respond(lambda: reports.estimate_report(_system(fixture, matrix, c)))

    # ------------------------------------------------------------------
    # Tool: poly_estimate
    # ------------------------------------------------------------------
    @server.tool()
    async def poly_estimate(polynomial: str) -> str:
        """Complexity bound for a single polynomial."""
        return _respond(
            lambda: reports.poly_estimate_report(PuiseuxPoly.parse(polynomial))
        )

    # ------------------------------------------------------------------
    # Tool: sum_estimate
    # ------------------------------------------------------------------
    @server.tool()
    async def sum_estimate(bounds: list[int]) -> str:
        """Complexity bound for a sum of functions with the given bounds."""
        return _respond(lambda: reports.sum_estimate_report(bounds))

    # ------------------------------------------------------------------
    # Tool: delta1
    # ------------------------------------------------------------------
    @server.tool()
    async def delta1(polynomial: str) -> str:
        """Evaluate the differential polynomial that vanishes exactly on Cl_1."""
        return _respond(lambda: reports.delta1_report(PuiseuxPoly.parse(polynomial)))

    # ------------------------------------------------------------------
    # Tool: plot_support
    # ------------------------------------------------------------------
    @server.tool()
    async def plot_support(
        fixture: str | None = None,
        matrix: list[list[int]] | None = None,
        c: list[str] | None = None,
        ascii: bool = False,
        divisors: bool = False,
    ) -> str:
        """Draw the candidate supports of a system.

        Returns JSON with an "svg" document, or an "ascii" grid when
        requested.
        """

        def build() -> dict:
            spec = plot_system(_system(fixture, matrix, c), divisors)
            if ascii:
                return {"ascii": render_ascii(spec)}
            return {"svg": render_svg(spec)}

        return _respond(build)

    # ------------------------------------------------------------------
    # Tool: list_fixtures
    # ------------------------------------------------------------------
    @server.tool()
    async def list_fixtures() -> str:
        """List all example systems.

        Returns JSON list of objects with name, description, and source
        (built-in or user).
        """
        store = _store()
        fixtures = []
        for name in store.names():
            fixture = store.load(name)
            fixtures.append(
                {
                    "name": fixture.name,
                    "description": fixture.description,
                    "source": "user" if store.is_user(name) else "built-in",
                }
            )
        return json.dumps(fixtures, indent=2)

    # ------------------------------------------------------------------
    # Tool: create_fixture
    # ------------------------------------------------------------------
    @server.tool()
    async def create_fixture(
        name: str,
        description: str,
        matrix: list[list[int]],
        c: list[str],
        notes: list[str] | None = None,
    ) -> str:
        """Store a user example system.

        Saves to ~/.horncalc/fixtures/{name}.json. Returns where it went.
        """

        def build() -> dict:
            fixture = Fixture(
                name=name,
                description=description,
                system=HornSystem.from_dict({"matrix": matrix, "c": c}),
                notes=list(notes or []),
            )
            path = _store().save(fixture)
            return {"status": "created", "path": path, "fixture": name}

        return _respond(build)

    # ------------------------------------------------------------------
    # Tool: delete_fixture
    # ------------------------------------------------------------------
    @server.tool()
    async def delete_fixture(name: str) -> str:
        """Delete a user example system. Built-in examples cannot be removed."""
        store = _store()
        if not store.is_user(name):
            return json.dumps(
                {"error": f"'{name}' is a built-in fixture and cannot be deleted"}
            )
        store.delete(name)
        return json.dumps({"status": "deleted", "fixture": name})

    return server


mcp = create_server()
