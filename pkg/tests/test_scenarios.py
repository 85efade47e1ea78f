import json
import math
import time

import numpy as np
import pytest

from holonomy.cli import main
from holonomy.errors import ConfigError
from holonomy.scenarios import BUILTINS, emit, load_report, parse_config, run_scenario


def test_parse_precession_defaults():
    cfg = parse_config("kind=precession\ntheta=1.0472\n")
    assert cfg.theta == 1.0472
    assert (cfg.steps, cfg.tolerance, cfg.grid, cfg.seed) == (4096, 1e-6, (64, 64), 0)


def test_parse_gate_check():
    cfg = parse_config("# qutrit\nkind = gate-check\ngate = hadamard  # Fourier\ndim = 3\n")
    assert cfg.gate == "hadamard" and cfg.dim == 3


@pytest.mark.parametrize(
    "text, needle",
    [
        ("kind=precession\n", "'theta'"),
        ("kind=teleport\n", "unknown kind"),
        ("kind=precession\ntheta=1\ncolour=red\n", "line 3: unknown key 'colour'"),
        ("kind=precession\ntheta=abc\n", "line 2: theta"),
        ("kind=precession\ntheta=1\nsteps=0\n", "line 3"),
        ("kind=precession\ntheta=1\ntheta=2\n", "duplicate"),
        ("kind=spin-monopole\nspin=1/3\n", "spin"),
        ("kind=gate-check\ngate=hadamard\n", "'dim'"),
        ("kind=gate-check\ngate=phase\ngammas=0.1,0.2\ndim=3\n", "length"),
        ("theta=1\n", "'kind'"),
        ("kind=frame-family\ngrid=4by4\n", "grid"),
        ("just words\n", "key = value"),
    ],
)
def test_parse_errors(text, needle):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert needle in str(info.value)


def test_run_precession_pi_over_3():
    rep = run_scenario(parse_config(f"kind=precession\ntheta={math.pi / 3!r}\n"))
    g = [row["geometric"] for row in rep.phases]
    assert abs(g[0] + math.pi / 2) < 1e-6
    assert abs(g[1] - math.pi / 2) < 1e-6
    assert rep.residual_theorem2 < 1e-8
    assert rep.passed


def test_run_spin_monopole_half():
    rep = run_scenario(parse_config("kind=spin-monopole\nspin=1/2\ngrid=60x60\n"))
    assert rep.charges == [1, -1] and rep.passed


def test_run_gate_check_h2_fails():
    rep = run_scenario(parse_config("kind=gate-check\ngate=hadamard\ndim=2\n"))
    assert rep.verdict["geometric_feasible"] is False
    assert abs(rep.verdict["det"][0] + 1) < 1e-9
    assert not rep.passed


def test_run_phase_gate_check():
    rep = run_scenario(parse_config("kind=gate-check\ngate=phase\ngammas=0.5,-0.2,-0.3\n"))
    assert rep.passed


def test_run_measurement_loop_octant():
    rep = run_scenario(parse_config("kind=measurement-loop\n"))
    assert abs(rep.details["bargmann_phase"] + math.pi / 4) < 1e-12


def test_emit_csv_precession():
    rep = run_scenario(parse_config("kind=precession\ntheta=0.8\nsteps=512\n"))
    lines = emit(rep, "csv")["phases.csv"].splitlines()
    assert lines[0] == "j,alpha,dynamical,geometric"
    assert len(lines) == 3


@pytest.mark.parametrize("dim", [2, 3])
def test_emit_grid_tsv_file_count(dim):
    rep = run_scenario(parse_config(f"kind=frame-family\ndim={dim}\ngrid=6x5\n"))
    docs = emit(rep, "grid-tsv")
    assert len(docs) == dim + 1
    rows = [l for l in docs["residual.tsv"].splitlines() if not l.startswith("#")]
    assert len(rows) == 5 * 4 and len(rows[0].split("\t")) == 3


def test_emit_unsupported():
    rep = run_scenario(parse_config("kind=gate-check\ngate=identity\ndim=2\n"))
    with pytest.raises(ValueError):
        emit(rep, "xml")
    with pytest.raises(ValueError):
        emit(rep, "grid-tsv")


@pytest.mark.parametrize("name", ["precession", "spin-monopole", "rotating-field", "hadamard-3"])
def test_json_roundtrip_bit_exact(name):
    rep = run_scenario(parse_config(BUILTINS[name][1]))
    back = load_report(emit(rep, "json")["report.json"])
    for attr in ("phases", "residual_theorem1", "residual_theorem2", "charges", "verdict", "checks", "details", "scenario"):
        assert getattr(back, attr) == getattr(rep, attr)


def test_json_deterministic():
    text = "kind=random-hamiltonian\ndim=4\nseed=18446744073709551615\nsteps=256\n"
    a = emit(run_scenario(parse_config(text)), "json")["report.json"]
    b = emit(run_scenario(parse_config(text)), "json")["report.json"]
    assert a == b
    doc = json.loads(a)
    assert doc["generator"].startswith("numpy")
    assert set(doc) >= {"scenario", "phases", "residual_theorem1", "residual_theorem2", "charges", "verdict", "generator", "timing_ms"}


def test_report_phases_wrapped():
    rep = run_scenario(parse_config("kind=random-hamiltonian\ndim=6\nseed=3\nduration=9.0\nsteps=256\n"))
    for row in rep.phases:
        assert -math.pi < row["alpha"] <= math.pi
        assert -math.pi < row["geometric"] <= math.pi


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_runtime(name):
    start = time.perf_counter()
    run_scenario(parse_config(BUILTINS[name][1]))
    assert time.perf_counter() - start < 10


def test_default_grid_scenarios_runtime():
    for text in ("kind=spin-monopole\nspin=3/2\n", "kind=frame-family\ndim=8\n"):
        start = time.perf_counter()
        rep = run_scenario(parse_config(text))
        assert time.perf_counter() - start < 10
        assert rep.passed


# -- CLI ------------------------------------------------------------------


def test_cli_pass_writes_json(tmp_path, capsys):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("kind = precession\ntheta = 0.5\n")
    assert main(["run", str(cfg), "--out", str(tmp_path / "out"), "--steps", "1024"]) == 0
    doc = json.loads((tmp_path / "out" / "report.json").read_text())
    assert doc["scenario"]["steps"] == 1024 and doc["passed"]
    assert not list((tmp_path / "out").glob("*.tmp"))


def test_cli_verdict_fail_exit_1(capsys):
    assert main(["gate-check", "--gate", "hadamard", "--dim", "3"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"]["geometric_feasible"] is False


def test_cli_identity_gate_passes(capsys):
    assert main(["gate-check", "--gate", "identity", "--dim", "4"]) == 0


def test_cli_config_error_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kind = precession\n")
    assert main(["run", str(cfg)]) == 2
    assert "theta" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.cfg")]) == 2
    assert main(["run", "precession", "--grid", "3"]) == 2
    assert main(["bogus"]) == 2


def test_cli_numeric_failure_exit_3(tmp_path, capsys):
    cfg = tmp_path / "open.cfg"
    # half a period never closes the loop
    cfg.write_text(f"kind = precession\ntheta = 1.0\nduration = {math.pi}\n")
    assert main(["run", str(cfg)]) == 3
    assert "closure" in capsys.readouterr().err


def test_cli_tolerance_override_can_fail(tmp_path, capsys):
    assert main(["run", "frame-family", "--tolerance", "1e-9"]) == 1


def test_cli_grid_tsv_and_csv(tmp_path, capsys):
    out = tmp_path / "g"
    assert main(["run", "bloch-family", "--format", "grid-tsv", "--out", str(out), "--grid", "8x8"]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["flux_j0.tsv", "flux_j1.tsv", "residual.tsv"]
    assert main(["run", "precession", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("j,alpha,dynamical,geometric")


def test_cli_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in BUILTINS)


def test_cli_timing_flag(capsys):
    assert main(["run", "hadamard-3", "--timing"]) == 1
    assert json.loads(capsys.readouterr().out)["timing_ms"] > 0
