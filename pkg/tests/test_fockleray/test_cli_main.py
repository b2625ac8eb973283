import io
import json
from pathlib import Path
from typing import List, Tuple

import pytest

from fockleray import verify
from fockleray.cli_main import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main


def run(*argv: str) -> Tuple[int, str]:
    stdout = io.StringIO()
    code = main(list(argv), stdout=stdout)
    return code, stdout.getvalue()


def terms(output: str) -> List[dict]:
    return json.loads(output)["terms"]


def test_dims_csv_matches_golden_file(fixtures_dir: Path):
    code, output = run("dims", "--n", "2", "--max-degree", "3", "--format", "csv")
    assert code == EXIT_OK
    assert output == (fixtures_dir / "dims_n2_max3.csv").read_text()


def test_dims_json():
    code, output = run("dims", "--n", "3", "--max-degree", "2")
    assert code == EXIT_OK
    rows = json.loads(output)
    assert [row["k"] for row in rows] == [0, 1, 2]
    assert rows[2]["necklaces"] == 11
    assert rows[2]["dim_divfree"] == 16


def test_output_is_deterministic(tmp_path: Path):
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    for path in (first, second):
        code, output = run(
            "basis",
            "--n",
            "2",
            "--degree",
            "2",
            "--kind",
            "divfree",
            "--out",
            str(path),
        )
        assert code == EXIT_OK
        assert output == ""
    assert first.read_bytes() == second.read_bytes()


def test_necklaces():
    code, output = run("necklaces", "--n", "2", "--degree", "4")
    assert code == EXIT_OK
    data = json.loads(output)
    assert data["count"] == 6
    assert data["orbits"][0] == {"word": [1, 1, 1, 1], "size": 1, "stabilizer_order": 4}
    assert [orbit["word"] for orbit in data["orbits"]][2] == [1, 1, 2, 2]

    code, output = run("necklaces", "--n", "2", "--degree", "2", "--format", "csv")
    assert output.splitlines() == [
        "representative,size,stabilizer_order",
        "1.1,1,2",
        "1.2,2,1",
        "2.2,1,2",
    ]


def test_basis_gradient():
    code, output = run("basis", "--n", "2", "--degree", "1", "--kind", "gradient")
    assert code == EXIT_OK
    data = json.loads(output)
    assert data["mode"] == "exact"
    assert [entry["squared_norm"] for entry in data["vectors"]] == [4, 2, 4]

    code, output = run(
        "basis",
        "--n",
        "2",
        "--degree",
        "1",
        "--kind",
        "gradient",
        "--normalize",
        "--format",
        "csv",
    )
    lines = output.splitlines()
    assert lines[0] == "index,normalized,word,dir,value"
    assert lines[1] == "0,False,1,1,2"


def test_basis_omega():
    code, output = run("basis", "--n", "2", "--degree", "2", "--kind", "omega")
    assert code == EXIT_OK
    assert json.loads(output)["words"] == [[1, 1, 2], [1, 2, 2], [2, 1, 2]]


def test_basis_zeta():
    code, output = run("basis", "--n", "2", "--degree", "2", "--kind", "zeta")
    assert code == EXIT_OK
    data = json.loads(output)
    assert data["mode"] == "float"
    assert data["count"] == 4

    code, _ = run(
        "basis", "--n", "2", "--degree", "2", "--kind", "zeta", "--mode", "exact"
    )
    assert code == EXIT_USAGE


def test_project_leray(fixtures_dir: Path):
    path = str(fixtures_dir / "field_e1_f2.json")
    code, output = run("project", "--n", "2", "--in", path, "--kind", "leray")
    assert code == EXIT_OK
    assert terms(output) == [
        {"word": [1], "dir": 2, "num": "1", "den": "2"},
        {"word": [2], "dir": 1, "num": "-1", "den": "2"},
    ]

    code, output = run("project", "--n", "2", "--in", path, "--kind", "cyclic")
    assert terms(output) == [
        {"word": [1], "dir": 2, "num": "1", "den": "2"},
        {"word": [2], "dir": 1, "num": "1", "den": "2"},
    ]


@pytest.mark.parametrize("kind", ["cyclic", "leray"])
def test_project_is_idempotent(tmp_path: Path, fixtures_dir: Path, kind: str):
    once = tmp_path / "once.json"
    code, _ = run(
        "project",
        "--n",
        "2",
        "--in",
        str(fixtures_dir / "field_e1_f2.json"),
        "--kind",
        kind,
        "--out",
        str(once),
    )
    assert code == EXIT_OK
    code, twice = run("project", "--n", "2", "--in", str(once), "--kind", kind)
    assert code == EXIT_OK
    assert twice == once.read_text()


def test_project_float_mode(fixtures_dir: Path):
    path = str(fixtures_dir / "field_e1_f2.json")
    code, output = run(
        "project", "--n", "2", "--in", path, "--kind", "leray", "--mode", "float"
    )
    assert code == EXIT_OK
    assert terms(output)[0] == {"word": [1], "dir": 2, "re": 0.5, "im": 0.0}


@pytest.mark.parametrize(
    "contents",
    [
        "not json",
        '{"n": 2, "terms": [{"word": [3], "dir": 1, "num": "1"}]}',
        '{"n": 3, "terms": []}',
        '{"n": 2, "terms": [{"word": [1], "dir": 2, "re": "nan", "im": 0}]}',
        '{"n": 2, "terms": [{"word": [1], "dir": 2, "re": 1, "im": Infinity}]}',
    ],
)
def test_project_rejects_bad_input(tmp_path: Path, capsys, contents: str):
    path = tmp_path / "field.json"
    path.write_text(contents)
    code, output = run("project", "--n", "2", "--in", str(path), "--kind", "leray")
    assert code == EXIT_USAGE
    assert output == ""
    assert "error" in capsys.readouterr().err


def test_bad_arguments():
    assert run("dims", "--n", "2")[0] == EXIT_USAGE
    assert run("dims", "--n", "0", "--max-degree", "2")[0] == EXIT_USAGE
    assert run("verify", "--n", "2", "--max-degree", "1")[0] == EXIT_USAGE
    assert run("verify", "--n", "2", "--max-degree", "1", "--check", "bogus")[0] == (
        EXIT_USAGE
    )
    assert (
        run("project", "--n", "2", "--in", "/does/not/exist.json", "--kind", "leray")[0]
        == EXIT_USAGE
    )


def test_verify_all():
    code, output = run(
        "verify",
        "--all",
        "--n",
        "2",
        "--max-degree",
        "2",
        "--trials",
        "10",
        "--workers",
        "1",
    )
    assert code == EXIT_OK
    data = json.loads(output)
    assert data["passed"]
    assert {report["name"] for report in data["reports"]} == {
        "burnside",
        "cyclic_invariance",
        "kernel_lemma",
        "range_equality",
        "orthonormal_basis",
        "dimension",
        "projection_formula",
        "direct_sum",
        "divfree_basis",
        "omega_deficiency",
        "zeta_basis",
        "radial",
        "stein",
        "chebyshev",
    }


def test_verify_selected_checks_csv():
    code, output = run(
        "verify",
        "--n",
        "3",
        "--max-degree",
        "2",
        "--check",
        "burnside",
        "--check",
        "direct_sum",
        "--workers",
        "1",
        "--format",
        "csv",
    )
    assert code == EXIT_OK
    lines = output.splitlines()
    assert lines[0] == "name,params,passed,mode"
    assert len(lines) == 1 + 3 + 3
    assert all(line.split(",")[-2:] == ["True", "exact"] for line in lines[1:])


def test_verify_reports_failures(monkeypatch):
    def failing_check(n: int, k: int) -> verify.CheckReport:
        return verify.CheckReport("burnside", {"n": n, "k": k}, False, {})

    monkeypatch.setitem(verify.CHECKS, "burnside", failing_check)
    code, output = run(
        "verify",
        "--n",
        "2",
        "--max-degree",
        "1",
        "--check",
        "burnside",
        "--workers",
        "1",
    )
    assert code == EXIT_CHECK_FAILED
    assert not json.loads(output)["passed"]


def test_project_exact_mode_rejects_float_input(tmp_path: Path, capsys):
    path = tmp_path / "field.json"
    path.write_text(
        '{"n": 2, "terms": [{"word": [1], "dir": 2, "re": 1.0, "im": 0.0}]}'
    )
    code, output = run(
        "project", "--n", "2", "--in", str(path), "--kind", "leray", "--mode", "exact"
    )
    assert code == EXIT_USAGE
    assert output == ""
    assert "error" in capsys.readouterr().err

    code, output = run("project", "--n", "2", "--in", str(path), "--kind", "leray")
    assert code == EXIT_OK
    assert "re" in terms(output)[0]


@pytest.mark.slow
def test_verify_all_to_degree_four():
    argv = ["verify", "--all", "--n", "2", "--max-degree", "4"]
    code, output = run(*argv)
    assert code == EXIT_OK
    assert json.loads(output)["passed"]

    code, inline_output = run(*argv, "--workers", "1")
    assert code == EXIT_OK
    assert inline_output == output
