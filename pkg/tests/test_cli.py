import json
import subprocess
import sys

import pytest

from pce_sde.bench.cli import main
from pce_sde.bench.report import read_csv, strip_timing

TINY = """
name = "tiny"
kind = "comparison"
seed = 3

[model]
type = "vasicek"
alpha = 0.1
beta = 0.2
sigma = 0.15
r0 = 110.0
T = 1.0

[pce]
p_min = 0
p_max = 3

[mc]
log2_min = 5
log2_max = 6

[qmc]
log2_min = 5
log2_max = 6
"""


@pytest.fixture
def tiny(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY)
    return path


def test_list_experiments(capsys):
    assert main(["list-experiments"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert any(line.startswith("gbm_s15\tpce_convergence\t") for line in out)
    assert len(out) == 16


def test_run_writes_outputs_and_is_deterministic(tiny, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(tiny), "--out", str(a)]) == 0
    assert main(["run", str(tiny), "--out", str(b), "--parallel"]) == 0
    csv_a = a / "tiny.csv"
    assert capsys.readouterr().out.splitlines()[0] == str(csv_a)
    assert (a / "tiny.meta.json").exists() and (a / "tiny.timing.csv").exists()
    assert strip_timing(csv_a) == strip_timing(b / "tiny.csv")


def test_seed_and_nodes_overrides(tiny, tmp_path):
    assert main(["run", str(tiny), "--out", str(tmp_path), "--seed", "11", "--nodes", "8"]) == 0
    rows = read_csv(tmp_path / "tiny.csv")
    assert {r["seed"] for r in rows} == {11}
    meta = json.loads((tmp_path / "tiny.meta.json").read_text())
    assert meta["nodes_override"] == 8


@pytest.mark.parametrize("fmt", ["svg", "png"])
def test_plot(tiny, tmp_path, fmt):
    main(["run", str(tiny), "--out", str(tmp_path)])
    out = tmp_path / f"figure.{fmt}"
    assert main(["plot", str(tmp_path / "tiny.csv"), "--format", fmt, "--out", str(out)]) == 0
    assert out.stat().st_size > 1000
    if fmt == "svg":
        assert out.read_text().lstrip().startswith("<?xml")


def test_plot_default_location(tiny, tmp_path):
    main(["run", str(tiny), "--out", str(tmp_path)])
    assert main(["plot", str(tmp_path / "tiny.csv")]) == 0
    assert (tmp_path / "tiny.svg").exists()


def test_error_line_and_exit_code(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.toml")]) == 1
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "ConfigError" and err["command"] == "run"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "pce_sde", "run", "missing"], capture_output=True, text=True)
    assert proc.returncode != 0
    assert json.loads(proc.stderr.strip().splitlines()[-1])["command"] == "run"
