import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from latticeprop.cli import main
from latticeprop.config import validate_output

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"
CONFIGS = ROOT / "configs"

C8, S8 = math.cos(math.pi / 8), math.sin(math.pi / 8)
ROT_QUARTER_PI = [repr(C8), repr(-S8), repr(S8), repr(C8)]  # rotation(2 pi / 8)

# name -> argv; regenerate with `python3 tests/test_cli.py --regen`
GOLDEN_CASES = {
    "decompose.json": ["decompose", "0", "-1", "1", "0", "--format", "json"],
    "decompose.csv": ["decompose", "2", "1", "1", "1"],
    "power.json": ["power", *ROT_QUARTER_PI, "--N", "8", "--verify", "--format", "json"],
    "power.csv": ["power", "2", "1", "1", "1", "--N", "20"],
    "transmit.csv": ["transmit", "-i", str(CONFIGS / "quarter_wave.json")],
    "transmit.json": ["transmit", "-i", str(CONFIGS / "delta.json"), "--N", "3", "--format", "json"],
    "bands.json": ["bands", "-i", str(CONFIGS / "delta.json"), "--format", "json"],
    "bands.csv": ["bands", "-i", str(CONFIGS / "homogeneous.json")],
    "bench.json": ["bench", "--N", "1000,100000", "--seed", "7", "--no-timings", "--format", "json"],
    "bench.csv": ["bench", "--N", "10,1000", "--seed", "3", "--no-timings"],
}


def run(argv, tmp_path, name="out"):
    out = tmp_path / name
    code = main([*argv, "-o", str(out)])
    return code, out.read_bytes() if out.exists() else None


# ---------------------------------------------------------------- golden files


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_byte_stable(name, tmp_path):
    argv = GOLDEN_CASES[name]
    code1, first = run(argv, tmp_path, "a")
    code2, second = run(argv, tmp_path, "b")
    assert code1 == code2 == 0
    assert first == second
    assert first == (GOLDEN / name).read_bytes()


@pytest.mark.parametrize("name", sorted(n for n in GOLDEN_CASES if n.endswith(".json")))
def test_golden_json_matches_schema(name):
    validate_output(json.loads((GOLDEN / name).read_text()))


def test_all_subcommands_have_goldens():
    commands = {argv[0] for argv in GOLDEN_CASES.values()}
    assert commands == {"decompose", "power", "transmit", "bands", "bench"}


# ---------------------------------------------------------------- behaviour


def test_decompose_rotation(tmp_path):
    code, data = run(["decompose", "0", "-1", "1", "0", "--format", "json"], tmp_path)
    doc = json.loads(data)
    assert code == 0
    assert doc["wigner"]["class"] == "elliptic"
    assert doc["wigner"]["phi"] == pytest.approx(math.pi)


def test_power_minus_identity(tmp_path):
    code, data = run(["power", *ROT_QUARTER_PI, "--N", "8", "--format", "json"], tmp_path)
    res = json.loads(data)["result"]
    assert code == 0
    assert res == pytest.approx([-1.0, 0.0, 0.0, -1.0], abs=1e-14)


def test_power_verify_large_n(tmp_path):
    code, data = run(["power", "0.8", "0.5", "-0.3", "1.0625", "--N", "1000000", "--verify",
                      "--format", "json"], tmp_path)
    assert code == 0
    assert json.loads(data)["deviation"] <= 1e-8


def test_csv_headers(tmp_path):
    _, data = run(["transmit", "-i", str(CONFIGS / "homogeneous.json")], tmp_path)
    assert data.decode().splitlines()[0] == "x,half_trace,class,bloch_phase,T,R"
    _, data = run(["power", "1", "0", "0", "1", "--N", "3"], tmp_path)
    assert data.decode().splitlines()[0] == "a11,a12,a21,a22,deviation"


def test_transmit_n_override(tmp_path):
    _, data = run(["transmit", "-i", str(CONFIGS / "quarter_wave.json"), "--N", "0",
                   "--format", "json"], tmp_path)
    doc = json.loads(data)
    assert doc["periods"] == 0
    assert all(r["T"] == pytest.approx(1.0) for r in doc["rows"])


def test_bands_runs(tmp_path):
    _, data = run(["bands", "-i", str(CONFIGS / "delta.json"), "--format", "json"], tmp_path)
    runs = json.loads(data)["runs"]
    assert [r["class"] for r in runs][:2] == ["hyperbolic", "elliptic"]
    assert sum(r["class"] == "hyperbolic" for r in runs) == 4


def test_stdout_output(capsys):
    assert main(["power", "1", "0", "0", "1", "--N", "5"]) == 0
    assert capsys.readouterr().out.startswith("a11,")


# ---------------------------------------------------------------- exit codes


@pytest.mark.parametrize(
    "argv",
    [
        ["decompose", "1", "1", "1", "1"],
        ["decompose", "1", "2", "3"],
        ["decompose"],
        ["power", "1", "0", "0", "1"],
        ["power", "a", "0", "0", "1", "--N", "2"],
        ["transmit"],
        ["transmit", "-i", "/nonexistent/config.json"],
        ["bench", "--N", ""],
        ["bench"],
        ["bench", "--N", "10,x"],
        ["bench", "--N", "2000000000"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_bad_config_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"kind": "delta", "g": 1, "a": -1,
                               "k_scan": {"k_min": 1, "k_max": 2, "points": 3}}))
    assert main(["bands", "-i", str(cfg)]) == 2
    assert "a" in capsys.readouterr().err


def test_overflow_exit_3(capsys):
    assert main(["power", "2", "1", "1", "1", "--N", "1000"]) == 3
    assert "overflow" in capsys.readouterr().err


def test_verification_failure_exit_4(monkeypatch, tmp_path):
    import latticeprop.cli as cli

    monkeypatch.setattr(cli, "DEVIATION_BOUND", -1.0)
    code, data = run(["power", "2", "1", "1", "1", "--N", "4", "--verify"], tmp_path)
    assert code == 4
    assert data is not None  # the result is still written


def test_bench_deviation_failure_exit_4(monkeypatch):
    import latticeprop.bench as bench

    monkeypatch.setattr(bench, "DEVIATION_BOUND", 0.0)
    assert main(["bench", "--N", "1000", "--no-timings"]) == 4


def test_negative_n_rejected():
    with pytest.raises(SystemExit) as info:
        main(["power", "1", "0", "0", "1", "--N", "-1"])
    assert info.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "latticeprop.cli", "decompose", "1", "0", "0", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert ",identity," in proc.stdout


def _regenerate():
    GOLDEN.mkdir(exist_ok=True)
    for name, argv in GOLDEN_CASES.items():
        assert main([*argv, "-o", str(GOLDEN / name)]) == 0, name


if __name__ == "__main__" and "--regen" in sys.argv:
    _regenerate()
