import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path

from horncalc.errors import MalformedPayload
from horncalc.horn import GammaFactor, HornSystem, from_gamma_products
from horncalc.puiseux import PuiseuxPoly

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent.parent.parent / "fixtures"
USER_FIXTURES_DIR = Path.home() / ".horncalc" / "fixtures"


@dataclass
class Expectation:
    value: object
    provenance: str


@dataclass
class BasisEntry:
    expression: str
    provenance: str
    cl1: bool | None = None  # whether the function is known to lie in Cl_1

    @property
    def poly(self) -> PuiseuxPoly:
        return PuiseuxPoly.parse(self.expression)

    def to_dict(self) -> dict:
        data: dict = {"expression": self.expression, "provenance": self.provenance}
        if self.cl1 is not None:
            data["cl1"] = self.cl1
        return data


@dataclass
class Fixture:
    name: str
    description: str
    system: HornSystem
    factors: list[GammaFactor] = field(default_factory=list)
    expected: dict[str, Expectation] = field(default_factory=dict)
    basis: list[BasisEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "Fixture":
        try:
            name, description = data["name"], data["description"]
            payload = data["system"]
        except KeyError as exc:
            raise MalformedPayload(f"Fixture is missing {exc.args[0]!r}") from exc

        factors = []
        if "factors" in payload:
            factors = [GammaFactor.from_dict(f) for f in payload["factors"]]
            system = from_gamma_products(factors)
        else:
            system = HornSystem.from_dict(payload)

        expected = {}
        for key, entry in data.get("expected", {}).items():
            if not isinstance(entry, dict) or "provenance" not in entry:
                raise MalformedPayload(
                    f"Expectation '{key}' of fixture '{name}' needs a provenance note"
                )
            expected[key] = Expectation(entry.get("value"), entry["provenance"])

        return cls(
            name=name,
            description=description,
            system=system,
            factors=factors,
            expected=expected,
            basis=[
                BasisEntry(b["expression"], b.get("provenance", ""), b.get("cl1"))
                for b in data.get("basis", [])
            ],
            notes=list(data.get("notes", [])),
        )

    def to_dict(self) -> dict:
        system = (
            {"factors": [f.to_dict() for f in self.factors]}
            if self.factors
            else self.system.to_dict()
        )
        data: dict = {
            "name": self.name,
            "description": self.description,
            "system": system,
        }
        if self.expected:
            data["expected"] = {
                key: {"value": e.value, "provenance": e.provenance}
                for key, e in self.expected.items()
            }
        if self.basis:
            data["basis"] = [b.to_dict() for b in self.basis]
        if self.notes:
            data["notes"] = self.notes
        return data

    def expect(self, key: str) -> object:
        return self.expected[key].value


class FixtureStore(ABC):
    """Named example systems, built in or user defined."""

    @abstractmethod
    def load(self, name: str) -> Fixture:
        """Raises FileNotFoundError for unknown names."""

    @abstractmethod
    def names(self) -> list[str]: ...

    @abstractmethod
    def is_user(self, name: str) -> bool: ...

    @abstractmethod
    def save(self, fixture: Fixture) -> str:
        """Store a user fixture and return where it went."""

    @abstractmethod
    def delete(self, name: str) -> None: ...


class DirectoryFixtureStore(FixtureStore):
    """JSON files in a built-in directory, overridden by a user directory."""

    def __init__(self, builtin_dir: Path | None = None, user_dir: Path | None = None):
        self._builtin_dir = builtin_dir or FIXTURES_DIR
        self._user_dir = user_dir or USER_FIXTURES_DIR

    def load(self, name: str) -> Fixture:
        # User fixtures take precedence over built-ins
        for directory in (self._user_dir, self._builtin_dir):
            path = directory / f"{name}.json"
            if path.exists():
                logger.debug("Loading fixture %s from %s", name, path)
                with open(path) as f:
                    return Fixture.from_dict(json.load(f))
        raise FileNotFoundError(f"Fixture not found: {name}")

    def names(self) -> list[str]:
        names: set[str] = set()
        for directory in (self._builtin_dir, self._user_dir):
            if directory.exists():
                names.update(p.stem for p in directory.glob("*.json"))
        return sorted(names)

    def is_user(self, name: str) -> bool:
        return (self._user_dir / f"{name}.json").exists()

    def save(self, fixture: Fixture) -> str:
        self._user_dir.mkdir(parents=True, exist_ok=True)
        path = self._user_dir / f"{fixture.name}.json"
        with open(path, "w") as f:
            json.dump(fixture.to_dict(), f, indent=2)
            f.write("\n")
        return str(path)

    def delete(self, name: str) -> None:
        path = self._user_dir / f"{name}.json"
        if not path.exists():
            raise FileNotFoundError(f"User fixture not found: {name}")
        path.unlink()
