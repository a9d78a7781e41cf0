import json

import pytest

from edgecount.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_estimate_prints_report_json(capsys):
    code, out, _ = run_cli(capsys, "estimate", "--graph", "gnm:400,1500", "--eps", "0.5")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 400
    assert payload["branch"] in {"collision", "non_collision"}
    assert payload["m_hat"] > 0
    assert set(payload["queries"]) == {"deg", "rand_edge", "nbr", "pair"}
    assert payload["params"]["epsilon"] == 0.5
    assert payload["params"]["degree_sample_size"] > 0


def test_estimate_stdout_is_deterministic(capsys):
    first = run_cli(capsys, "estimate", "--graph", "gnm:400,1500", "--eps", "0.5", "--seed", "3")
    second = run_cli(capsys, "estimate", "--graph", "gnm:400,1500", "--eps", "0.5", "--seed", "3")
    assert first == second


def test_estimate_from_file_matches_spec_source(capsys, tmp_path):
    path = tmp_path / "graph.txt"
    code, _, _ = run_cli(capsys, "gen", "--graph", "gnm:400,1500", "--seed", "3", "--out", str(path))
    assert code == 0
    from_spec = run_cli(capsys, "estimate", "--graph", "gnm:400,1500", "--eps", "0.5", "--seed", "3")
    from_file = run_cli(capsys, "estimate", "--file", str(path), "--eps", "0.5", "--seed", "3")
    assert from_file == from_spec


def test_estimate_empty_graph_exits_cleanly(capsys, tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("6\n")
    code, out, _ = run_cli(capsys, "estimate", "--file", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["branch"] == "zero_edges"
    assert payload["m_hat"] == 0.0


def test_estimate_failed_branch_exit_code(capsys):
    code, out, _ = run_cli(
        capsys, "estimate", "--graph", "clique_plus_isolated:100,99", "--c-s", "0.0001", "--seed", "0"
    )
    assert code == 2
    assert json.loads(out)["m_hat"] is None


def test_gen_writes_edge_list(capsys, tmp_path):
    path = tmp_path / "path5.txt"
    code, out, _ = run_cli(capsys, "gen", "--graph", "path:5", "--out", str(path))
    assert code == 0
    assert path.read_text() == "5\n0 1\n1 2\n2 3\n3 4\n"
    assert "n=5 m=4" in out


def test_bench_writes_named_files(capsys, tmp_path):
    out_dir = tmp_path / "results"
    code, out, err = run_cli(
        capsys,
        "bench", "--graph", "gnm:300,900", "--eps", "0.5", "--trials", "2",
        "--seed", "1", "--out", str(out_dir),
    )
    assert code == 0
    csv_path = out_dir / "bench-300-0.5-1.csv"
    json_path = out_dir / "bench-300-0.5-1.json"
    assert csv_path.exists() and json_path.exists()
    assert len(csv_path.read_text().splitlines()) == 3
    assert out == json_path.read_text()
    assert "wrote" in err
    summary = json.loads(json_path.read_text())
    assert summary["experiment"] == "bench"
    assert summary["trials"] == 2


def test_bench_outputs_are_byte_stable(capsys, tmp_path):
    args = ["bench", "--graph", "gnm:300,900", "--eps", "0.5", "--trials", "2", "--seed", "1"]
    run_cli(capsys, *args, "--out", str(tmp_path / "a"))
    run_cli(capsys, *args, "--out", str(tmp_path / "b"))
    for name in ("bench-300-0.5-1.csv", "bench-300-0.5-1.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_bench_csv_format_prints_rows(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys,
        "bench", "--graph", "gnm:300,900", "--eps", "0.5", "--trials", "2",
        "--seed", "1", "--out", str(tmp_path), "--format", "csv",
    )
    assert code == 0
    assert out == (tmp_path / "bench-300-0.5-1.csv").read_text()
    assert out.startswith("trial,")


def test_lowerbound_writes_named_files(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "lowerbound", "--n", "1000", "--q", "5", "--trials", "5",
        "--seed", "2", "--out", str(tmp_path),
    )
    assert code == 0
    csv_path = tmp_path / "lowerbound-1000-5-2.csv"
    assert csv_path.exists()
    assert len(csv_path.read_text().splitlines()) == 6
    summary = json.loads(out)
    assert summary["experiment"] == "lowerbound"
    assert summary["q"] == 5


def test_out_dir_env_var_is_honored(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("EDGECOUNT_OUT_DIR", str(tmp_path / "env"))
    code, _, _ = run_cli(
        capsys, "bench", "--graph", "gnm:300,900", "--eps", "0.5", "--trials", "1", "--seed", "1"
    )
    assert code == 0
    assert (tmp_path / "env" / "bench-300-0.5-1.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["estimate", "--graph", "bogus:5"],
        ["estimate"],
        ["estimate", "--graph", "path:100", "--eps", "1.5"],
        ["estimate", "--file", "/nonexistent/never.txt"],
        ["gen", "--graph", "gnm:10,999", "--seed", "0", "--out", "/dev/null"],
    ],
)
def test_bad_inputs_exit_one(capsys, argv):
    code, _, _ = run_cli(capsys, *argv)
    assert code == 1
