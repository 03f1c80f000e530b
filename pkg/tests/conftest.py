import pytest
from injector import Injector, Module, provider, singleton

from horncalc.fixtures import FIXTURES_DIR, DirectoryFixtureStore, Fixture, FixtureStore
from horncalc.server import create_server


class InMemoryFixtureStore(FixtureStore):
    """In-memory fake: built-ins are seeded, user fixtures live in a dict."""

    def __init__(self, builtins: dict[str, Fixture] | None = None):
        self._builtins = dict(builtins or {})
        self._user: dict[str, Fixture] = {}
        self.saved: list[str] = []

    def load(self, name: str) -> Fixture:
        if name in self._user:
            return self._user[name]
        if name in self._builtins:
            return self._builtins[name]
        raise FileNotFoundError(f"Fixture not found: {name}")

    def names(self) -> list[str]:
        return sorted(set(self._builtins) | set(self._user))

    def is_user(self, name: str) -> bool:
        return name in self._user

    def save(self, fixture: Fixture) -> str:
        self._user[fixture.name] = fixture
        self.saved.append(fixture.name)
        return f"memory://{fixture.name}"

    def delete(self, name: str) -> None:
        if name not in self._user:
            raise FileNotFoundError(f"User fixture not found: {name}")
        del self._user[name]


class FakeFixtureModule(Module):
    def __init__(self, store: FixtureStore):
        self._store = store

    @singleton
    @provider
    def provide_fixture_store(self) -> FixtureStore:
        return self._store


@pytest.fixture(scope="session")
def library(tmp_path_factory):
    """The built-in examples, isolated from ~/.horncalc."""
    return DirectoryFixtureStore(FIXTURES_DIR, tmp_path_factory.mktemp("user"))


@pytest.fixture
def fixture_store(library):
    seeded = ("hexagon", "parallelogram", "pentagon", "example2-continued")
    return InMemoryFixtureStore({name: library.load(name) for name in seeded})


@pytest.fixture
def mcp_server(fixture_store):
    injector = Injector([FakeFixtureModule(fixture_store)])
    return create_server(injector)
