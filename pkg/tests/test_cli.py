import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from bandedge import CosineLattice, Lame
from bandedge.cli import build_parser, config_from_args, main, UsageError
from bandedge.quantization import MINUS, PLUS, residual
from bandedge.reference import exact_band_edges
from bandedge.report import from_json, parse_csv, to_csv, to_json

from conftest import TABLE1

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- golden files ------------------------------------------------------------

@pytest.mark.parametrize(
    "argv, name",
    [
        (["exact", "--lame", "2", "0.5", "--format", "csv"], "exact_lame_2_0.5.csv"),
        (["wkb", "--cosine", "5", "3.14159", "--n-max", "2", "--format", "csv"], "wkb_cosine_5_3.14159.csv"),
        (["wkb", "--lame", "2", "0.5", "--n-max", "0", "--format", "json"], "wkb_lame_2_0.5_n0.json"),
        (["compare", "--table1"], "compare_table1.txt"),
        (
            ["compare", "--lame", "2", "0.5", "--n-max", "2", "--extension", "--format", "csv"],
            "compare_extension_lame_2_0.5.csv",
        ),
    ],
)
def test_golden_output(capsys, argv, name):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text()


def test_cosine_golden_values_solve_the_condition():
    """The frozen cosine edges are roots to within their six-digit rounding."""
    spec = CosineLattice(5.0, 3.14159)
    _, records = parse_csv((GOLDEN / "wkb_cosine_5_3.14159.csv").read_text())
    for rec in records:
        e = rec["edge"]
        branch = PLUS if e.branch == "+" else MINUS
        r = residual(spec, e.n, branch, e.energy)
        # |dR/dE| is O(1), so a 5e-6 rounding moves the residual by about that much
        assert abs(r) < 1e-5


def test_cosine_golden_values_near_hill_oracle():
    spec = CosineLattice(5.0, 3.14159)
    _, records = parse_csv((GOLDEN / "wkb_cosine_5_3.14159.csv").read_text())
    exact = exact_band_edges(spec, len(records)).energies
    for rec, e_exact in zip(records, exact):
        assert rec["edge"].energy == pytest.approx(e_exact, abs=0.5)


# --- spot values -------------------------------------------------------------

def test_wkb_lame_three_rows(capsys):
    code, out, _ = run(capsys, "wkb", "--lame", "2", "0.5", "--n-max", "1", "--format", "csv")
    assert code == 0
    _, records = parse_csv(out)
    got = [r["edge"].energy for r in records]
    assert got == pytest.approx([w[3] for w in TABLE1[(2, 0.5)]["wkb"]], abs=0.02)


def test_exact_lame_values(capsys):
    code, out, _ = run(capsys, "exact", "--lame", "2", "0.5", "--format", "json")
    assert code == 0
    (report,) = from_json(out)
    assert [e.energy for e in report.edges] == pytest.approx(TABLE1[(2, 0.5)]["exact"], abs=0.01)


def test_exact_m1_substitutes(capsys):
    code, out, _ = run(capsys, "exact", "--lame", "3", "1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["metadata"] == {"m_substituted": True, "epsilon": 1e-6}
    energies = [e["energy"] for e in data["edges"]]
    assert energies == pytest.approx(TABLE1[(3, 1.0)]["exact"], abs=0.02)


def test_exact_epsilon_override(capsys):
    code, out, _ = run(capsys, "exact", "--lame", "3", "1", "--epsilon", "1e-4", "--format", "json")
    assert code == 0
    assert json.loads(out)["metadata"]["epsilon"] == 1e-4


def test_json_schema(capsys):
    code, out, _ = run(capsys, "wkb", "--lame", "2", "0.5", "--format", "json")
    data = json.loads(out)
    assert set(data) == {"potential", "mode", "metadata", "edges", "bands", "gaps"}
    for edge in data["edges"]:
        assert set(edge) == {"n", "branch", "symmetry", "period_multiple", "energy", "source"}
        assert edge["branch"] in ("+", "-")
        assert edge["symmetry"] in ("SS", "AS", "SA", "AA")
        assert edge["period_multiple"] in (1, 2)
    assert data["bands"] == [[1.34257, 1.95459]]
    assert data["gaps"] == [[1.95459, 2.80636]]


def test_exact_json_has_null_quantum_numbers(capsys):
    _, out, _ = run(capsys, "exact", "--cosine", "5", "3.14159", "--n-max", "1", "--format", "json")
    data = json.loads(out)
    assert all(e["n"] is None and e["branch"] is None for e in data["edges"])
    assert [e["period_multiple"] for e in data["edges"]] == [1, 2, 2]


def test_cosine_compare_has_no_dashes(capsys):
    code, out, _ = run(capsys, "compare", "--cosine", "5", "3.14159", "--format", "csv")
    assert code == 0
    _, records = parse_csv(out)
    rows = [r["row"] for r in records]
    below = [r for r in rows if r.energy_exact is not None and r.energy_exact < 5.0]
    assert below
    assert all(r.energy_wkb is not None and math.isfinite(r.abs_delta) for r in below)


def test_compare_table1_dash_and_footnote(capsys):
    _, out, _ = run(capsys, "compare", "--table1")
    blocks = out.strip().split("\n\n")
    assert len(blocks) == 4
    last = blocks[-1].splitlines()
    assert "m = 1 replaced by 1 - 1e-06" in last[1]
    assert last[-2].split()[:2] == ["12.00", "-"]
    assert "--extension" in last[-1]


def test_table1_json_is_array(capsys):
    _, out, _ = run(capsys, "wkb", "--table1", "--format", "json")
    data = json.loads(out)
    assert isinstance(data, list) and len(data) == 4


def test_table1_csv_has_potential_column(capsys):
    _, out, _ = run(capsys, "wkb", "--table1", "--format", "csv")
    mode, records = parse_csv(out)
    assert mode == "wkb"
    assert {r["potential"] for r in records} == {
        "3 sn^2(x,0.5)", "6 sn^2(x,0.5)", "9.6 sn^2(x,0.8)", "12 sn^2(x,1)",
    }


# --- round trips and determinism -------------------------------------------

@pytest.mark.parametrize("mode", ["wkb", "exact", "compare"])
def test_json_round_trip(capsys, mode):
    _, out, _ = run(capsys, mode, "--lame", "3", "0.8", "--format", "json")
    reports = from_json(out)
    assert to_json(reports) == out


@pytest.mark.parametrize("mode", ["wkb", "exact", "compare"])
def test_csv_round_trip(capsys, mode):
    _, out, _ = run(capsys, mode, "--lame", "3", "0.8", "--format", "csv")
    _, out_json, _ = run(capsys, mode, "--lame", "3", "0.8", "--format", "json")
    (report,) = from_json(out_json)
    assert to_csv([report]) == out
    parsed_mode, records = parse_csv(out)
    assert parsed_mode == mode
    if mode == "compare":
        assert [r["row"] for r in records] == report.rows
    else:
        got = [r["edge"] for r in records]
        assert [e.energy for e in got] == [e.energy for e in report.edges]
        assert [e.symmetry for e in got] == [e.symmetry for e in report.edges]


def test_csv_line_endings(capsys):
    _, out, _ = run(capsys, "exact", "--lame", "2", "0.5", "--format", "csv")
    assert "\r" not in out and out.endswith("\n")


def test_output_is_deterministic(capsys):
    argv = ["compare", "--lame", "3", "0.5", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert "timestamp" not in first


@pytest.mark.parametrize(
    "fmt, marker",
    [("json", '"timestamp"'), ("csv", "# generated "), ("table", "(20")],
)
def test_stamp(capsys, fmt, marker):
    _, out, _ = run(capsys, "wkb", "--lame", "2", "0.5", "--format", fmt, "--stamp")
    assert marker in out


def test_output_file(tmp_path, capsys):
    target = tmp_path / "edges.csv"
    code, out, _ = run(capsys, "exact", "--lame", "2", "0.5", "--format", "csv", "-o", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == (GOLDEN / "exact_lame_2_0.5.csv").read_text()


# --- inputs ------------------------------------------------------------------

def test_tabulated_matches_cosine(tmp_path, capsys):
    L, v0 = 3.0, 5.0
    x = np.linspace(0.0, L / 2, 2001)
    path = tmp_path / "cos.dat"
    body = "\n".join(f"{a:.17g}\t{b:.17g}" for a, b in zip(x, CosineLattice(v0, L).evaluate(x)))
    path.write_text("# cosine lattice\n# x\tV\n" + body + "\n")
    _, out_tab, _ = run(capsys, "wkb", "--tabulated", str(path), "--format", "json")
    _, out_cos, _ = run(capsys, "wkb", "--cosine", str(v0), str(L), "--format", "json")
    e_tab = [e["energy"] for e in json.loads(out_tab)["edges"]]
    e_cos = [e["energy"] for e in json.loads(out_cos)["edges"]]
    assert len(e_tab) == len(e_cos) > 0
    assert e_tab == pytest.approx(e_cos, abs=1e-4)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"potential": {"kind": "lame", "a": 2, "m": 0.5}, "n_max": 1, "format": "csv"}))
    code, out, _ = run(capsys, "exact", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[0] == "index,symmetry,kL,energy"
    assert len(out.splitlines()) == 1 + 3


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"potential": {"kind": "cosine", "v0": 5, "L": 3}, "n_max": 4}))
    args = build_parser().parse_args(["wkb", "--config", str(cfg), "--n-max", "1", "--lame", "2", "0.5"])
    rc = config_from_args(args)
    assert rc.n_max == 1
    assert rc.potentials == [Lame(2, 0.5)]


# --- errors and exit codes ---------------------------------------------------

@pytest.mark.parametrize(
    "argv",
    [
        ["wkb"],
        ["wkb", "--lame", "2", "0.5", "--cosine", "5", "3"],
        ["wkb", "--lame", "2", "1.5"],
        ["wkb", "--lame", "0.5", "0.5"],
        ["wkb", "--cosine", "5", "-1"],
        ["wkb", "--lame", "2", "0.5", "--n-max", "-1"],
        ["wkb", "--lame", "2", "0.5", "--tol", "0"],
        ["wkb", "--lame", "2", "0.5", "--extension"],
        ["wkb", "--table1", "--lame", "2", "0.5"],
        ["wkb", "--tabulated", "/nonexistent/file.dat"],
        ["wkb", "--config", "/nonexistent/run.json"],
        ["exact", "--lame", "2", "0.5", "--epsilon", "2"],
        ["wkb", "--lame", "3", "1", "--n-max", "2", "--extension"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "bandedge: error:" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["wkb", "--format", "xml", "--lame", "2", "0.5"])
    assert info.value.code == 2


def test_convergence_failure_exits_1(capsys, monkeypatch):
    import bandedge.reference as ref

    real = ref.bloch_eigenvalues
    monkeypatch.setattr(ref, "bloch_eigenvalues", lambda *a, **kw: real(*a, **dict(kw, tol=1e-300, max_N=64)))
    code, out, err = run(capsys, "exact", "--lame", "2", "0.5")
    assert code == 1
    assert "numerical failure" in err


def test_no_edges_warns(capsys):
    # a flat lattice has no classically allowed well to quantize
    code, out, err = run(capsys, "wkb", "--cosine", "0", "1")
    assert code == 0
    assert "warning: no band edges" in err
    lines = out.splitlines()
    assert lines[1].split() == ["n", "branch", "symmetry", "period", "E_WKB"]
    assert len(lines) == 3


def test_usage_error_is_not_a_domain_error():
    args = build_parser().parse_args(["wkb"])
    with pytest.raises(UsageError):
        config_from_args(args)


# --- plotting and entry points ----------------------------------------------

def test_plot_written(tmp_path, capsys):
    pytest.importorskip("matplotlib")
    png = tmp_path / "bands.png"
    code, _, _ = run(capsys, "compare", "--table1", "--plot", str(png))
    assert code == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bandedge", "wkb", "--lame", "2", "0.5", "--n-max", "0", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "wkb_lame_2_0.5_n0.json").read_text()


def test_cmd_functions():
    from bandedge.cli import RunConfig, cmd_compare, cmd_exact, cmd_wkb

    cfg = RunConfig(mode="wkb", potentials=[Lame(2, 0.5)])
    (wkb,) = cmd_wkb(cfg)
    (exact,) = cmd_exact(cfg)
    (cmp,) = cmd_compare(cfg)
    assert [e.energy for e in wkb.edges] == [1.34257, 1.95459, 2.80636]
    assert len(exact.edges) == 5 and exact.mode == "exact"
    assert [r.energy_wkb for r in cmp.rows] == [1.34257, 1.95459, 2.80636, None, None]
