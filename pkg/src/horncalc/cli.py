"""Command-line front end.

Every command prints one report on stdout (JSON by default) and maps library
errors to exit codes: 0 success, 1 invalid input, 2 not applicable,
3 internal error. Diagnostics go to stderr only.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from horncalc import reports
from horncalc.errors import HorncalcError, MalformedPayload
from horncalc.fixtures import DirectoryFixtureStore, FixtureStore
from horncalc.horn import HornSystem, load_system
from horncalc.plot import PlotSpec, plot_supports, plot_system, render_ascii, render_svg
from horncalc.puiseux import PuiseuxPoly

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_APPLICABLE = 2
EXIT_INTERNAL = 3


def _read_json(path: Path) -> object:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise MalformedPayload(f"{path}: {exc}") from exc


def resolve_system(source: str, store: FixtureStore) -> HornSystem:
    """A system file, a fixture file, or the name of a stored fixture."""
    path = Path(source)
    if path.is_file():
        return load_system(_read_json(path))
    return store.load(source).system


def resolve_polynomials(source: str) -> list[PuiseuxPoly]:
    """A polynomial file (JSON or plain expression) or an inline expression."""
    path = Path(source)
    if not path.is_file():
        return [PuiseuxPoly.parse(source)]
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return [PuiseuxPoly.parse(text.strip())]
    return reports.read_polynomials(data)


def _single(polys: list[PuiseuxPoly]) -> PuiseuxPoly:
    if len(polys) != 1:
        raise MalformedPayload(f"Expected one polynomial, got {len(polys)}")
    return polys[0]


def _plot_spec(source: str, store: FixtureStore, divisors: bool) -> PlotSpec:
    path = Path(source)
    data = _read_json(path) if path.is_file() else None
    if isinstance(data, list) or (isinstance(data, dict) and "support" in data):
        return plot_supports([reports.read_support(data)])
    if isinstance(data, dict) and "elements" in data:
        polys = reports.read_polynomials(data)
        return plot_supports([p.support for p in polys])

    system = load_system(data) if data is not None else store.load(source).system
    return plot_system(system, divisors)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horncalc",
        description="Exact tools for bivariate Horn hypergeometric systems.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, summary: str, source: str | None = "system"):
        sub = commands.add_parser(name, help=summary)
        if source == "system":
            sub.add_argument("system", help="system JSON file or fixture name")
        elif source == "poly":
            sub.add_argument("poly", help="polynomial file or inline expression")
        sub.add_argument("--format", choices=("json", "text"), default="json")
        return sub

    command("rank", "holonomic rank with its correction terms")
    command("operators", "factor lists of the two Horn operators")
    command("polygon", "Ore-Sato polygon and Minkowski segments")
    command("pairing", "divisor pairs and the c_hat vector")
    command("supports", "candidate supports, one per pair of divisor pairs")

    solve = command("solve", "certified basis of polynomial solutions")
    solve.add_argument(
        "--box",
        nargs=4,
        metavar=("SMIN", "SMAX", "TMIN", "TMAX"),
        help="solve on this exponent box instead of the candidate supports",
    )
    solve.add_argument(
        "--allow-partial",
        action="store_true",
        help="solve the admissible pairs even when c_hat is not all positive",
    )

    verify = command("verify", "operator residuals of given polynomials")
    verify.add_argument("poly", help="polynomial file or inline expression")

    command("estimate", "complexity bound for the general solution")
    command("poly-estimate", "complexity bound for one polynomial", source="poly")
    sums = command("sum-estimate", "complexity bound for a sum", source=None)
    sums.add_argument("bounds", nargs="+", type=int)
    command("delta1", "the Cl_1 differential criterion", source="poly")

    plot = commands.add_parser("plot", help="draw supports as SVG or ASCII")
    plot.add_argument("source", help="system, support or solve-report file")
    output = plot.add_mutually_exclusive_group()
    output.add_argument("--svg", type=Path, help="write SVG to this path")
    output.add_argument("--ascii", action="store_true", help="print an ASCII grid")
    plot.add_argument("--divisors", action="store_true", help="draw divisor lines")

    command("fixtures", "list the example library", source=None)
    commands.add_parser("serve", help="run the MCP tool server on stdio")
    return parser


def _dispatch(args: argparse.Namespace, store: FixtureStore) -> dict | str | None:
    match args.command:
        case "rank":
            return reports.rank_report(resolve_system(args.system, store))
        case "operators":
            return reports.operators_report(resolve_system(args.system, store))
        case "polygon":
            return reports.polygon_report(resolve_system(args.system, store))
        case "pairing":
            return reports.pairing_report(resolve_system(args.system, store))
        case "supports":
            return reports.supports_report(resolve_system(args.system, store))
        case "solve":
            box = reports.parse_box(args.box) if args.box else None
            return reports.solve_report(
                resolve_system(args.system, store), box, args.allow_partial
            )
        case "verify":
            return reports.verify_report(
                resolve_system(args.system, store), resolve_polynomials(args.poly)
            )
        case "estimate":
            return reports.estimate_report(resolve_system(args.system, store))
        case "poly-estimate":
            return reports.poly_estimate_report(
                _single(resolve_polynomials(args.poly))
            )
        case "sum-estimate":
            return reports.sum_estimate_report(args.bounds)
        case "delta1":
            return reports.delta1_report(_single(resolve_polynomials(args.poly)))
        case "fixtures":
            return {
                "fixtures": [
                    {
                        "name": name,
                        "description": store.load(name).description,
                        "source": "user" if store.is_user(name) else "built-in",
                    }
                    for name in store.names()
                ]
            }
        case "plot":
            spec = _plot_spec(args.source, store, args.divisors)
            if args.ascii:
                return render_ascii(spec)
            svg = render_svg(spec)
            if args.svg is None:
                return svg
            args.svg.write_text(svg)
            logger.debug("Wrote %s", args.svg)
            return None
        case "serve":
            from horncalc.server import create_server

            create_server().run()
            return None
    raise MalformedPayload(f"Unknown command {args.command}")


def run(argv: list[str] | None = None, store: FixtureStore | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        result = _dispatch(args, store or DirectoryFixtureStore())
    except HorncalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        logger.exception("Internal error")
        return EXIT_INTERNAL

    if isinstance(result, str):
        sys.stdout.write(result)
    elif result is not None:
        if getattr(args, "format", "json") == "text":
            print(reports.to_text(result))
        else:
            print(json.dumps(result, indent=2))
    return EXIT_OK
