"""Command-line behaviour: output shapes, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from netcheck.cli import main

WEB = "fixtures/web.xml"
COLLAB = "fixtures/collab.xml"
KONIGSBERG = "fixtures/konigsberg.xml"
K3 = "fixtures/k3.xml"


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_proc(*argv):
    return subprocess.run(
        [sys.executable, "-m", "netcheck", *argv],
        capture_output=True,
        text=True,
    )


# -- check ---------------------------------------------------------------------


def test_check_lines(capsys):
    code, out, err = run_main(
        capsys, "check", "--network", WEB, "--formula", 'EX [title = "Google"]'
    )
    assert code == 0
    assert out == "w1\nw3\n"
    assert err == ""


def test_check_json_is_key_array(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", WEB, "--formula", 'EX [title = "Google"]',
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out) == ["w1", "w3"]


def test_check_empty_result_is_success(capsys):
    code, out, _ = run_main(
        capsys, "check", "--network", WEB, "--formula", 'EX [title = "Missing"]'
    )
    assert code == 0
    assert out == ""


def test_check_formula_file(capsys, tmp_path):
    p = tmp_path / "f.xpl"
    p.write_text('EX [title = "Google"]', encoding="utf-8")
    code, out, _ = run_main(
        capsys, "check", "--network", WEB, "--formula-file", str(p)
    )
    assert code == 0
    assert out == "w1\nw3\n"


def test_check_parallel_same_output(capsys):
    argv = ["check", "--network", COLLAB, "--formula", "EF [count(paper) > 100]"]
    base = run_main(capsys, *argv)
    para = run_main(capsys, *argv, "--parallel", "4")
    assert base == para


# -- witness ---------------------------------------------------------------------


def test_witness_path_line(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", COLLAB,
        "--formula", 'EU([count(paper) > 100], [(first = "Paul") and (last = "Erdos")])',
        "--witness-for", "e3",
    )
    assert code == 0
    assert out.endswith("witness e3: e3 -> e2 -> e1\n")


def test_witness_json(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", WEB, "--formula", 'EX [title = "Google"]',
        "--witness-for", "w3", "--format", "json",
    )
    assert code == 0
    data = json.loads(out)
    assert data["satisfying"] == ["w1", "w3"]
    assert data["witness"] == {
        "for": "w3",
        "status": "path",
        "path": ["w3", "w2"],
        "transpose": False,
    }


def test_witness_not_satisfied_is_reported(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", WEB, "--formula", 'EX [title = "Google"]',
        "--witness-for", "w2",
    )
    assert code == 0
    assert "witness w2: formula does not hold" in out


def test_witness_unknown_node(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", WEB, "--formula", "true", "--witness-for", "zz",
    )
    assert code == 0
    assert "unknown node" in out


def test_witness_unavailable_operator(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", WEB, "--formula", 'AG true', "--witness-for", "w1",
    )
    assert code == 0
    assert "none available" in out


def test_witness_transposed_flagged(capsys):
    code, out, _ = run_main(
        capsys,
        "check", "--network", "fixtures/scholars.xml",
        "--formula", 'IEF [(first = "Moshe") and (last = "Vardi")]',
        "--witness-for", "s3",
    )
    assert code == 0
    assert "(transposed edges)" in out


# -- query ----------------------------------------------------------------------


def test_query_lines(capsys):
    code, out, _ = run_main(
        capsys,
        "query", "--network", "fixtures/papers.xml",
        "--filter", 'contains(keywords, "network analysis")',
    )
    assert code == 0
    assert out == "p1\np2\np3\n"


def test_query_json(capsys):
    code, out, _ = run_main(
        capsys,
        "query", "--network", K3, "--filter", "true", "--format", "json",
    )
    # "true" is just a name test here: no <true> children anywhere
    assert code == 0
    assert json.loads(out) == []


# -- metrics --------------------------------------------------------------------


def test_metrics_k3(capsys):
    code, out, _ = run_main(capsys, "metrics", "--network", K3)
    assert code == 0
    assert "clustering_coefficient: 1.0" in out
    assert "diameter: 1" in out
    assert "eulerian_path: true" in out


def test_metrics_konigsberg_lines(capsys):
    code, out, _ = run_main(capsys, "metrics", "--network", KONIGSBERG)
    assert code == 0
    assert "degree_histogram: {3: 3, 5: 1}" in out
    assert "eulerian_path: false" in out
    assert "nodes: 4" in out
    assert "edges: 7" in out


def test_metrics_directed_json(capsys):
    code, out, _ = run_main(
        capsys, "metrics", "--network", WEB, "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["directed"] is True
    assert data["degree_histogram"] is None
    assert data["eulerian_path"] is None
    assert data["in_degree_histogram"] == {"0": 1, "1": 1, "2": 2}
    assert data["mean_geodesic"] == pytest.approx(7 / 6)


# -- exit codes -------------------------------------------------------------------


def test_formula_syntax_error_without_network_is_exit_1():
    proc = run_proc("check", "--formula", "EX [")
    assert proc.returncode == 1
    assert proc.stdout == ""
    assert "column" in proc.stderr


def test_filter_syntax_error_is_exit_1(capsys):
    code, out, err = run_main(
        capsys, "query", "--network", K3, "--filter", "a ="
    )
    assert code == 1
    assert out == ""
    assert "filter" in err


def test_missing_network_file_is_exit_2(capsys):
    code, out, err = run_main(
        capsys, "check", "--network", "no/such/file.xml", "--formula", "true"
    )
    assert code == 2
    assert out == ""
    assert "cannot read network" in err


def test_network_flag_required_when_formula_is_valid(capsys):
    code, out, err = run_main(capsys, "check", "--formula", "true")
    assert code == 2
    assert "--network is required" in err


def test_malformed_network_is_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.xml"
    bad.write_text("<graph/>", encoding="utf-8")
    code, out, err = run_main(
        capsys, "check", "--network", str(bad), "--formula", "true"
    )
    assert code == 2
    assert out == ""
    assert "network" in err


def test_type_error_is_exit_3(capsys, tmp_path):
    net = tmp_path / "t.xml"
    net.write_text(
        '<network><node key="a"><name>word</name></node></network>',
        encoding="utf-8",
    )
    code, out, err = run_main(
        capsys, "check", "--network", str(net), "--formula", "EF [name > 3]"
    )
    assert code == 3
    assert out == ""
    assert "number" in err


def test_query_type_error_is_exit_3(capsys, tmp_path):
    net = tmp_path / "t.xml"
    net.write_text(
        '<network><node key="a"><name>word</name></node></network>',
        encoding="utf-8",
    )
    code, out, err = run_main(
        capsys, "query", "--network", str(net), "--filter", "name > 3"
    )
    assert code == 3
    assert out == ""


def test_metrics_directed_eulerian_not_an_error(capsys):
    # directed networks simply omit the undirected-only figures
    code, out, _ = run_main(capsys, "metrics", "--network", WEB)
    assert code == 0
    assert "eulerian_path" not in out
    assert "in_degree_histogram" in out


# -- determinism -------------------------------------------------------------------


def test_repeated_runs_byte_identical():
    argv = ("check", "--network", COLLAB, "--formula", "EF [count(paper) > 100]")
    first = run_proc(*argv)
    second = run_proc(*argv)
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout


def test_installed_entry_point_matches_module(capsys):
    import shutil

    exe = shutil.which("netcheck")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run(
        [exe, "metrics", "--network", K3], capture_output=True, text=True
    )
    code, out, _ = run_main(capsys, "metrics", "--network", K3)
    assert proc.returncode == code == 0
    assert proc.stdout == out
