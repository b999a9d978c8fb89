"""Tests for the eigenring command line, run in-process."""
import json

import numpy as np
import pytest

from eigenring.cli import COMMAND_FACTORIES, build_parser, main
from eigenring.config import MapConfig, PolygonConfig, RingConfig
from eigenring.polygon_transform import random_polygon
from eigenring.utils import load_json, load_table


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


def test_polygon_decompose_random(tmp_path, capsys):
    code = run(tmp_path, "polygon", "--random", "6", "--seed", "7", "--theta", "1.2566",
               "--lambda", "0.5", "decompose")
    assert code == 0
    assert "reconstruction residual" in capsys.readouterr().out

    table = load_table(str(tmp_path / "decomposition.csv"))
    assert len(table) == 6
    coefficients = table["c_re"].to_numpy() + 1j * table["c_im"].to_numpy()
    polygon = random_polygon(6, 7)
    basis = np.exp(2j * np.pi * np.outer(np.arange(6), np.arange(6)) / 6) / np.sqrt(6)
    assert np.max(np.abs(basis @ coefficients - polygon.vertices)) < 1e-12

    eigenvalues = load_table(str(tmp_path / "eigenvalues.csv"))
    assert eigenvalues["dominant"].sum() == 1
    assert (tmp_path / "config.json").exists()


def test_polygon_output_is_deterministic(tmp_path):
    argv = ["polygon", "--random", "6", "--seed", "7", "--theta", "1.2566", "decompose"]
    assert run(tmp_path, *argv) == 0
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert run(tmp_path, *argv) == 0
    second = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    assert first == second


def test_artifacts_carry_metadata(tmp_path):
    assert run(tmp_path, "polygon", "--regular", "5", "eigenvalues") == 0
    header = [line for line in (tmp_path / "eigenvalues.csv").read_text().splitlines()
              if line.startswith("#")]
    keys = {line[2:].split(":", 1)[0] for line in header}
    assert {"tool", "command", "config", "tolerances"} <= keys


def test_polygon_regular_single_mode(tmp_path):
    assert run(tmp_path, "polygon", "--regular", "5", "decompose") == 0
    table = load_table(str(tmp_path / "decomposition.csv"))
    magnitude = table["c_abs"].to_numpy()
    np.testing.assert_allclose(magnitude, np.hypot(table["c_re"], table["c_im"]), atol=1e-15)
    assert magnitude[1] == pytest.approx(np.sqrt(5))
    assert np.max(np.delete(magnitude, 1)) < 1e-12


def test_polygon_iterate(tmp_path):
    code = run(tmp_path, "polygon", "--random", "6", "--seed", "7", "--theta", "1.2566",
               "iterate", "--tol", "1e-10", "--trace")
    assert code == 0
    report = load_json(str(tmp_path / "convergence.json"))["result"]
    assert report["converged"]
    assert report["dominant_mass"] >= 1 - 1e-8
    assert len(load_table(str(tmp_path / "trace.csv"))) == report["steps"]


def test_polygon_theta_frac(tmp_path):
    assert run(tmp_path, "polygon", "--regular", "5", "--theta-frac", "1", "5", "eigenvalues") == 0
    config = PolygonConfig.from_json((tmp_path / "config.json").read_text())
    assert config.theta == pytest.approx(np.pi / 5)


def test_polygon_file_parse_error(tmp_path, capsys):
    polygon_file = tmp_path / "bad.txt"
    polygon_file.write_text("0 0\n1 0\n1 x\n0 1\n")
    assert run(tmp_path, "polygon", "--file", str(polygon_file), "decompose") == 2
    assert "line 3" in capsys.readouterr().err


def test_polygon_file(tmp_path):
    polygon_file = tmp_path / "square.txt"
    polygon_file.write_text("# unit square\n0 0\n1,0\n\n1 1\n0 1\n")
    assert run(tmp_path, "polygon", "--file", str(polygon_file), "decompose") == 0
    assert len(load_table(str(tmp_path / "decomposition.csv"))) == 4


def test_polygon_inline_vertices_with_negative_coordinates(tmp_path):
    semicolons, spaces = tmp_path / "semicolons", tmp_path / "spaces"
    assert run(semicolons, "polygon", "--vertices=-1,0;1,0;0,1;-0.5,-0.5", "decompose") == 0
    assert run(spaces, "polygon", "--vertices", "-1,0 1,0 0,1 -0.5,-0.5", "decompose") == 0
    config = PolygonConfig.from_json((semicolons / "config.json").read_text())
    assert config.vertices[0] == (-1.0, 0.0)
    assert config.vertices[3] == (-0.5, -0.5)
    a = load_table(str(semicolons / "decomposition.csv"))
    b = load_table(str(spaces / "decomposition.csv"))
    assert len(a) == 4
    assert a.equals(b)


def test_polygon_malformed_vertex(tmp_path):
    assert run(tmp_path, "polygon", "--vertices=0,0;1;0,1", "decompose") == 2


def test_polygon_on_threshold_is_invalid(tmp_path):
    assert run(tmp_path, "polygon", "--regular", "5", "--theta-frac", "3", "10", "eigenvalues") == 2


def test_polygon_without_source_is_invalid(tmp_path):
    assert run(tmp_path, "polygon", "decompose") == 2


def test_config_file_round_trip(tmp_path):
    first = tmp_path / "first"
    assert run(first, "polygon", "--random", "5", "--seed", "3", "--theta", "0.9", "decompose") == 0
    second = tmp_path / "second"
    assert main(["polygon", "--config", str(first / "config.json"), "--out", str(second)]) == 0
    a = load_table(str(first / "decomposition.csv"))
    b = load_table(str(second / "decomposition.csv"))
    assert a.equals(b)


def test_run_configs_round_trip():
    configs = [
        PolygonConfig(random=6, seed=7, theta=1.2566),
        RingConfig(n=6, L=1.0, a=3.0, V0=800.0, truncate_nn=True),
        MapConfig(theta=1.2566, h11=-0.83662, h12=-0.47397, convention="exact"),
        MapConfig(theta=1.0, ring=RingConfig(n=3, L=1.0, a=3.0, V0=800.0)),
    ]
    for config in configs:
        assert type(config).from_json(config.to_json()) == config


def test_well_bound_states(tmp_path):
    assert run(tmp_path, "well", "--L", "1", "--V0", "800", "--l", "6", "--sample-points", "50") == 0
    states = load_table(str(tmp_path / "bound_states.csv"))
    assert len(states) >= 1
    assert states["parity"].iloc[0] == "symmetric"
    assert len(load_table(str(tmp_path / "wavefunction.csv"))) == 50


def test_well_shift_covariance(tmp_path):
    plain, shifted = tmp_path / "plain", tmp_path / "shifted"
    assert run(plain, "well", "--L", "1", "--V0", "800", "--l", "6") == 0
    assert run(shifted, "well", "--L", "1", "--V0", "800", "--l", "6", "--shift", "800") == 0
    a = load_table(str(plain / "bound_states.csv"))
    b = load_table(str(shifted / "bound_states.csv"))
    np.testing.assert_allclose(b["W"] - a["W"], 800.0, atol=1e-10)
    np.testing.assert_array_equal(a["k"], b["k"])
    np.testing.assert_array_equal(a["kappa"], b["kappa"])


def test_well_shallow(tmp_path):
    assert run(tmp_path, "well", "--L", "1", "--V0", "0.0001", "--l", "6") == 0
    result = load_json(str(tmp_path / "well.json"))["result"]
    assert result["count"] == 0 or all(-1e-4 < s["W"] < 0 for s in result["bound_states"])


def test_well_invalid_geometry(tmp_path):
    assert run(tmp_path, "well", "--L", "6", "--V0", "800", "--l", "6") == 2


def test_ring(tmp_path):
    assert run(tmp_path, "ring", "--n", "6", "--L", "1", "--V0", "800", "--a", "3") == 0
    result = load_json(str(tmp_path / "ring.json"))["result"]
    assert len(result["energies"]) == 6
    assert result["residual"] < 1e-8
    assert result["method"] == "circulant"
    assert len(load_table(str(tmp_path / "matrices.csv"))) == 36
    assert "truncation_error" not in load_table(str(tmp_path / "spectrum.csv")).columns

    coefficients = result["coefficients"]
    assert [entry["j"] for entry in coefficients] == list(range(6))
    assert sorted(entry["energy"] for entry in coefficients) == pytest.approx(result["energies"])
    uniform = [complex(v["re"], v["im"]) for v in coefficients[0]["vector"]]
    assert len(uniform) == 6
    np.testing.assert_allclose(uniform, uniform[0], atol=1e-12)


def test_ring_truncated(tmp_path):
    assert run(tmp_path, "ring", "--n", "6", "--L", "1", "--V0", "800", "--a", "3",
               "--truncate-nn", "--format", "csv") == 0
    assert "truncation_error" in load_table(str(tmp_path / "spectrum.csv")).columns
    assert not (tmp_path / "spectrum.json").exists()


def test_map_pair(tmp_path):
    assert run(tmp_path, "map", "--theta", "1.2566", "--lambda", "0.5",
               "--h11", "-0.83662", "--h12", "-0.47397") == 0
    result = load_json(str(tmp_path / "map.json"))["result"]
    assert result["alpha"] == pytest.approx(1.6013, abs=1e-3)
    assert result["beta"] == pytest.approx(-0.57434, abs=1e-3)
    assert result["T"] + result["H11"] == pytest.approx(result["W1"], abs=1e-12)


def test_map_w_only(tmp_path):
    assert run(tmp_path, "map", "--theta", "1.2566", "--lambda", "0.5", "--w-only") == 0
    result = load_json(str(tmp_path / "map.json"))["result"]
    # 1.2566 truncates 2 pi / 5, which moves W1 by about 1.2e-3
    assert result["W1"] == pytest.approx(5.23607, rel=1e-3)
    assert result["W2"]["re"] == pytest.approx(-2.11803, abs=1e-3)
    assert result["W2"]["im"] == pytest.approx(1.53884, abs=1e-3)


def test_map_ring(tmp_path):
    assert run(tmp_path, "map", "--theta-frac", "2", "5", "--convention", "exact",
               "--ring-n", "3", "--ring-L", "1", "--ring-a", "3", "--ring-V0", "800") == 0
    result = load_json(str(tmp_path / "map.json"))["result"]
    assert result["closure_residual"] < 1e-10


def test_map_invalid_theta(tmp_path):
    assert run(tmp_path, "map", "--theta", "0", "--w-only") == 2


def test_map_needs_entries(tmp_path):
    assert run(tmp_path, "map", "--theta", "1.0", "--h11", "-0.8") == 2


def test_map_zero_coupling(tmp_path, capsys):
    assert run(tmp_path, "map", "--theta", "1.2566", "--h11", "-0.83662", "--h12", "0") == 3
    assert "NoRealSolutionError" in capsys.readouterr().err


def test_sweep_dominance(tmp_path, monkeypatch):
    monkeypatch.setenv("EIGENRING_MAX_WORKERS", "1")
    assert run(tmp_path, "sweep", "dominance", "--n", "7", "--samples", "90", "--shards", "3") == 0
    summary = load_json(str(tmp_path / "sweep.json"))["result"]
    assert len(summary["shards"]) == 3
    rows = [load_table(path) for path in summary["shards"]]
    assert sum(len(frame) for frame in rows) == 90
    for frame in rows:
        assert frame.loc[~frame["ambiguous"], "agree"].all()


def test_sweep_well_in_worker_processes(tmp_path, monkeypatch):
    monkeypatch.setenv("EIGENRING_MAX_WORKERS", "2")
    assert run(tmp_path, "sweep", "well", "--samples", "4", "--shards", "2",
               "--l-min", "3", "--l-max", "12", "--grid-points", "500") == 0
    summary = load_json(str(tmp_path / "sweep.json"))["result"]
    assert summary["rows"] == 4
    frames = [load_table(path) for path in summary["shards"]]
    assert all((frame["count"] >= 1).all() for frame in frames)


def test_failure_data_is_json(tmp_path, capsys):
    assert run(tmp_path, "polygon", "--random", "6", "iterate", "--max-steps", "2") == 3
    err = capsys.readouterr().err
    payload = json.loads(err[err.index("{\n"):])
    assert payload["error"] == "IterationTimeout"
    assert payload["report"]["steps"] == 2


def test_subcommand_help_comes_from_commands():
    text = "".join(build_parser().format_help().split())
    for name, factory in COMMAND_FACTORIES.items():
        info = factory().get_info()
        assert info["name"] == name
        assert "".join(info["description"].split()) in text
