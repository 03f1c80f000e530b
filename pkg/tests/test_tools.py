import json

import pytest


async def _call(mcp_server, name: str, arguments: dict):
    content, _ = await mcp_server.call_tool(name, arguments)
    return json.loads(content[0].text)


@pytest.mark.anyio
async def test_list_fixtures(mcp_server):
    result = await _call(mcp_server, "list_fixtures", {})
    names = [f["name"] for f in result]
    assert names == ["example2-continued", "hexagon", "parallelogram", "pentagon"]
    entry = result[0]
    assert "description" in entry
    assert entry["source"] == "built-in"


@pytest.mark.anyio
async def test_rank_from_fixture(mcp_server):
    result = await _call(mcp_server, "rank", {"fixture": "hexagon"})
    assert result["rank"] == 3
    assert result["corrections"] == [{"i": 0, "j": 1, "nu": 1}]


@pytest.mark.anyio
async def test_rank_from_inline_system(mcp_server):
    result = await _call(
        mcp_server,
        "rank",
        {"matrix": [[1, 1], [1, 2], [-2, -3]], "c": ["-4", "-4", "4"]},
    )
    assert result["rank"] == 6


@pytest.mark.anyio
async def test_operators(mcp_server):
    result = await _call(mcp_server, "operators", {"fixture": "hexagon"})
    first = result["operators"][0]
    assert first["P"] == ["s + t - 23", "s - 10"]
    assert first["display"].startswith("x*")


@pytest.mark.anyio
async def test_polygon(mcp_server):
    result = await _call(mcp_server, "polygon", {"fixture": "hexagon"})
    assert result["vertices"] == [[1, 0], [2, 0], [2, 1], [1, 2], [0, 2], [0, 1]]
    assert len(result["segments"]) == 3


@pytest.mark.anyio
async def test_pairing_error_for_non_zonotope(mcp_server):
    result = await _call(mcp_server, "pairing", {"fixture": "pentagon"})
    assert "error" in result


@pytest.mark.anyio
async def test_supports(mcp_server):
    result = await _call(mcp_server, "supports", {"fixture": "hexagon"})
    assert [p["size"] for p in result["pairs"]] == [22, 20, 110]
    assert result["union_size"] == 152


@pytest.mark.anyio
async def test_solve(mcp_server):
    result = await _call(mcp_server, "solve", {"fixture": "parallelogram"})
    assert result["dimension"] == 1
    assert result["certified"] is True


@pytest.mark.anyio
async def test_solve_with_box(mcp_server):
    result = await _call(
        mcp_server, "solve", {"fixture": "pentagon", "box": ["0", "5", "0", "5"]}
    )
    assert result["dimension"] == 4


@pytest.mark.anyio
async def test_solve_resonant_needs_allow_partial(mcp_server):
    result = await _call(mcp_server, "solve", {"fixture": "example2-continued"})
    assert "error" in result
    result = await _call(
        mcp_server, "solve", {"fixture": "example2-continued", "allow_partial": True}
    )
    assert result["dimension"] == 0


@pytest.mark.anyio
async def test_verify(mcp_server):
    result = await _call(
        mcp_server,
        "verify",
        {"fixture": "pentagon", "polynomial": "1 - 4*x - 4*y + 12*x*y"},
    )
    assert result["all_solutions"] is True


@pytest.mark.anyio
async def test_verify_rejects_bad_polynomial(mcp_server):
    result = await _call(
        mcp_server, "verify", {"fixture": "pentagon", "polynomial": "x*z"}
    )
    assert "error" in result


@pytest.mark.anyio
async def test_estimate(mcp_server):
    result = await _call(mcp_server, "estimate", {"fixture": "hexagon"})
    assert result["raw"]["value"] == 7
    assert result["refined"]["value"] == 6
    assert result["vectors"]["v"] == [3, 5]


@pytest.mark.anyio
async def test_poly_estimate(mcp_server):
    result = await _call(
        mcp_server, "poly_estimate", {"polynomial": "x*(x + 1)**9*y*(y + 1)**8"}
    )
    assert result["line_support"]["value"] == 5
    assert result["bound"]["value"] == 2
    assert result["membership"] == {"value": 1, "rule": "delta1"}


@pytest.mark.anyio
async def test_sum_estimate(mcp_server):
    result = await _call(mcp_server, "sum_estimate", {"bounds": [1, 1, 2, 2]})
    assert result["value"] == 4


@pytest.mark.anyio
async def test_sum_estimate_empty(mcp_server):
    result = await _call(mcp_server, "sum_estimate", {"bounds": []})
    assert "error" in result


@pytest.mark.anyio
async def test_delta1(mcp_server):
    result = await _call(
        mcp_server,
        "delta1",
        {"polynomial": "6*x**2 - 4*x**3 + x**4 - 12*x**2*y + 4*x**3*y"},
    )
    assert result["is_cl1"] is False
    assert result["delta1"] != "0"


@pytest.mark.anyio
async def test_plot_support(mcp_server):
    result = await _call(mcp_server, "plot_support", {"fixture": "hexagon"})
    assert result["svg"].count("<circle") == 152
    result = await _call(
        mcp_server, "plot_support", {"fixture": "parallelogram", "ascii": True}
    )
    assert result["ascii"].splitlines()[0] == "9 " + "*" * 10


@pytest.mark.anyio
async def test_create_and_delete_fixture(fixture_store, mcp_server):
    result = await _call(
        mcp_server,
        "create_fixture",
        {
            "name": "square",
            "description": "Unit square",
            "matrix": [[1, 0], [0, 1], [-1, 0], [0, -1]],
            "c": ["-1", "-1", "0", "0"],
        },
    )
    assert result["status"] == "created"
    assert fixture_store.saved == ["square"]

    result = await _call(mcp_server, "rank", {"fixture": "square"})
    assert result["rank"] == 1

    listing = await _call(mcp_server, "list_fixtures", {})
    sources = {f["name"]: f["source"] for f in listing}
    assert sources["square"] == "user"

    result = await _call(mcp_server, "delete_fixture", {"name": "square"})
    assert result == {"status": "deleted", "fixture": "square"}
    assert not fixture_store.is_user("square")


@pytest.mark.anyio
async def test_create_fixture_rejects_invalid_system(fixture_store, mcp_server):
    result = await _call(
        mcp_server,
        "create_fixture",
        {"name": "bad", "description": "zero row", "matrix": [[0, 0]], "c": ["1"]},
    )
    assert "error" in result
    assert fixture_store.saved == []


@pytest.mark.anyio
async def test_cannot_delete_builtin(mcp_server):
    result = await _call(mcp_server, "delete_fixture", {"name": "hexagon"})
    assert "error" in result


@pytest.mark.anyio
async def test_unknown_fixture(mcp_server):
    result = await _call(mcp_server, "rank", {"fixture": "nope"})
    assert "error" in result
