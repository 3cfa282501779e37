from __future__ import annotations

import json

import pytest

from app.cli import main
from app.config import get_settings
from app.constants import EXIT_CAP, EXIT_OK, EXIT_PRECISION, EXIT_VALIDATION
from app.services.linalg import RMatrix
from app.services.witt import make_context
from app.utils.serializer import serialize_results
from tests.conftest import testdata_path


def _run_json(capsys, *argv: str) -> dict:
    code = main([*argv, "--json", "--no-timings"])
    assert code == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_group_endrank(capsys) -> None:
    report = _run_json(
        capsys, "group", "--group", "(1 2),(1 2 3)", "--subgroup", "(1 2)", "--p", "3", "--op", "endrank",
    )
    assert report["command"] == "group"
    assert report["results"]["end_rank"] == 2
    assert report["results"]["double_cosets"] == 2
    assert report["results"]["group_order"] == 6
    assert report["results"]["index"] == 3
    assert "timings" not in report


def test_group_double_cosets_by_catalog_name(capsys) -> None:
    report = _run_json(capsys, "group", "--group", "S3", "--subgroup", "(1 2)", "--p", "2", "--op", "double-cosets")
    assert report["results"]["sizes"] == [2, 4]
    assert ["()", "(1 2)"] in [sorted(c) for c in report["results"]["cosets"]]


def test_group_hh1_agrees_with_oracle(capsys) -> None:
    report = _run_json(capsys, "group", "--group", "C2", "--p", "2", "--op", "hh1", "--precision", "6")
    assert report["results"]["hh1_vanishes"] is True
    assert report["results"]["agree"] is True


def test_rigid_regular_lattice(capsys) -> None:
    report = _run_json(capsys, "rigid", str(testdata_path("lattices", "oc2_regular.json")))
    results = report["results"]
    assert results["rigid"] is True
    assert results["ext1"]["invariants"] == []
    assert results["ext1"]["policy"] == "group-order"
    assert report["context"]["N"] == 6
    assert set(report["inputs"]) == {"lattice", "order"}
    assert all(d.startswith("sha256:") for d in report["inputs"].values())


def test_rigid_diagonal_lattice(capsys) -> None:
    report = _run_json(capsys, "rigid", str(testdata_path("lattices", "oc2_diagonal.json")))
    assert report["results"]["rigid"] is False
    assert report["results"]["ext1"]["invariants"] == [1, 1]


def test_rigid_with_inline_order(capsys) -> None:
    report = _run_json(capsys, "rigid", str(testdata_path("lattices", "scalar_inline.json")))
    assert report["results"]["rigid"] is True
    assert set(report["inputs"]) == {"lattice"}


def test_census_of_regular_lattice(capsys) -> None:
    report = _run_json(
        capsys, "census", str(testdata_path("lattices", "oc2_regular.json")), "--max-colength", "2",
    )
    results = report["results"]
    assert results["level_counts"] == {"0": 1, "1": 1, "2": 3}
    assert results["class_count"] == 2
    assert results["rigid_class_count"] == 1


def test_genval_variable_at_origin(capsys) -> None:
    report = _run_json(capsys, "genval", str(testdata_path("polynomials", "x1.json")), "--point", "0", "--digits", "1")
    assert report["results"]["generic_valuation"] == 1
    assert report["results"]["naive_valuation"] == 0
    assert report["precision_retries"] == []


def test_genval_point_file_and_threshold(capsys) -> None:
    report = _run_json(
        capsys,
        "genval", str(testdata_path("polynomials", "x1_squared_plus_x2.json")),
        "--point-file", str(testdata_path("points", "plane_l1.json")),
        "--threshold", "1",
        "--witness",
    )
    results = report["results"]
    assert results["generic_valuation"] == 1
    assert results["member"] is True
    assert results["witness"]["valuation"] == 1


def test_genval_without_context_needs_prime(capsys) -> None:
    path = str(testdata_path("polynomials", "x1_no_context.json"))
    assert main(["genval", path, "--point", "0"]) == EXIT_VALIDATION
    report = _run_json(capsys, "genval", path, "--point", "0", "--p", "3", "--precision", "3")
    assert report["context"]["p"] == 3
    assert report["results"]["generic_valuation"] == 1


def test_genval_retries_at_doubled_precision(capsys) -> None:
    report = _run_json(capsys, "genval", str(testdata_path("polynomials", "p_times_x1.json")), "--point", "0")
    retries = report["precision_retries"]
    assert len(retries) == 1
    assert retries[0]["from_precision"] == 2
    assert retries[0]["to_precision"] == 4
    assert report["results"]["generic_valuation"] == 2
    assert report["context"]["N"] == 4


def test_witt_add(capsys) -> None:
    report = _run_json(capsys, "witt", "add", "--p", "2", "--precision", "2", "--x", "[1, 0]", "--y", "[1, 0]")
    assert report["results"]["digits"] == [[0], [1]]
    assert report["results"]["agree"] is True


def test_witt_ghost(capsys) -> None:
    report = _run_json(capsys, "witt", "ghost", "--p", "2", "--index", "1")
    assert report["results"]["index"] == 1
    assert "X1" in report["results"]["sum"]


def test_reports_are_reproducible(tmp_path, capsys) -> None:
    lattice = str(testdata_path("lattices", "oc2_regular.json"))
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["census", lattice, "--max-colength", "1", "--no-timings", "--out", str(first)]) == EXIT_OK
    assert main(["census", lattice, "--max-colength", "1", "--no-timings", "--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    # tables go to stdout when --json is not given
    assert "rigid" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv,code",
    [
        (["rigid", str(testdata_path("lattices", "oc2_not_multiplicative.json"))], EXIT_VALIDATION),
        (
            ["rigid", str(testdata_path("lattices", "scalar_inline.json")),
             "--order", str(testdata_path("orders", "non_associative.json"))],
            EXIT_VALIDATION,
        ),
        (["rigid", str(testdata_path("lattices", "missing.json"))], EXIT_VALIDATION),
        (["witt", "add", "--p", "4", "--x", "[1]", "--y", "[1]"], EXIT_VALIDATION),
        (["witt", "to-digits", "--p", "2", "--precision", "2", "--x", "3", "--l", "5"], EXIT_PRECISION),
        (["group", "--group", "(1 2 3 4 5),(1 2)", "--p", "2"], EXIT_CAP),
        (["group", "--group", "S3", "--subgroup", "(1 4)", "--p", "2"], EXIT_VALIDATION),
    ],
)
def test_exit_codes(argv: list, code: int) -> None:
    assert main(argv) == code


@pytest.fixture
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_group_cap_follows_environment(monkeypatch, fresh_settings, capsys) -> None:
    monkeypatch.setenv("LATTICE_GROUP_CAP", "120")
    report = _run_json(capsys, "group", "--group", "(1 2 3 4 5),(1 2)", "--p", "2", "--op", "double-cosets")
    assert report["results"]["group_order"] == 120
    assert report["results"]["double_cosets"] == 120


def test_debug_forces_debug_logging(monkeypatch, fresh_settings) -> None:
    monkeypatch.setenv("LATTICE_LOG_LEVEL", "error")
    assert get_settings().effective_log_level == "ERROR"
    get_settings.cache_clear()
    monkeypatch.setenv("DEBUG", "true")
    settings = get_settings()
    assert settings.debug
    assert settings.effective_log_level == "DEBUG"


def test_results_are_plain_json_values() -> None:
    ctx = make_context(2, 1, 3)
    results = serialize_results({
        "context": ctx,
        "element": ctx.element(5),
        "matrix": RMatrix.identity(ctx, 1),
        "pair": (1, 2),
        "orbit": {3, 1},
        "ratio": float("nan"),
    })
    assert results == {
        "context": {"p": 2, "m": 1, "N": 3, "modulus": list(ctx.modulus)},
        "element": [5],
        "matrix": {"rows": 1, "cols": 1, "entries": [[1]]},
        "pair": [1, 2],
        "orbit": [1, 3],
        "ratio": None,
    }
    json.dumps(results)
    with pytest.raises(ValueError):
        serialize_results([1, 2])
