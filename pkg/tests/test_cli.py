import subprocess
import sys

import numpy as np
import pytest

from ndlomb.cli import main
from ndlomb.errors import EXIT_CODES
from ndlomb.io import read_samples, read_spectrum


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def wave_csv(tmp_path, capsys):
    path = tmp_path / "wave.csv"
    assert run(capsys, "generate", "--preset", "simple-wave", "-o", str(path))[0] == 0
    return path


def test_generate_preset_is_reproducible(tmp_path, capsys, wave_csv):
    again = tmp_path / "again.csv"
    run(capsys, "generate", "--preset", "simple-wave", "-o", str(again))
    assert wave_csv.read_bytes() == again.read_bytes()
    assert (tmp_path / "wave.csv.cfg").read_text() == "preset = simple-wave\nseed = 1\n"
    assert read_samples(wave_csv).n == 2624


def test_generate_from_echoed_config(tmp_path, capsys):
    first = tmp_path / "a.csv"
    code, _, _ = run(capsys, "generate", "--components", "0.5:1/1.0/0.2;2:0/0.5/0",
                     "--ranges", "-1:1,0:2", "--steps", "0.1,0.2", "--sigma", "0.3",
                     "--missing-fraction", "0.2", "--seed", "8", "-o", str(first))
    assert code == 0
    second = tmp_path / "b.csv"
    run(capsys, "generate", "--config", str(first) + ".cfg", "-o", str(second))
    assert first.read_bytes() == second.read_bytes()


def test_generate_zero_components(tmp_path, capsys):
    path = tmp_path / "zero.csv"
    run(capsys, "generate", "--components", "", "--ranges", "0:1", "--steps", "0.25",
        "-o", str(path))
    assert np.all(read_samples(path).values == 0)


def test_seed_env_fallback(tmp_path, capsys, monkeypatch):
    args = ["generate", "--pattern", "uniform", "--n", "20", "--ranges", "0:1", "--sigma", "1"]
    monkeypatch.setenv("NDLOMB_SEED", "5")
    run(capsys, *args, "-o", str(tmp_path / "env.csv"))
    run(capsys, *args, "--seed", "5", "-o", str(tmp_path / "flag.csv"))
    run(capsys, *args, "--seed", "6", "-o", str(tmp_path / "other.csv"))
    assert (tmp_path / "env.csv").read_bytes() == (tmp_path / "flag.csv").read_bytes()
    assert (tmp_path / "env.csv").read_bytes() != (tmp_path / "other.csv").read_bytes()


def test_analyze_summary_and_threads(tmp_path, capsys, wave_csv):
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"spec{threads}.csv"
        code, stdout, _ = run(capsys, "analyze", "-i", str(wave_csv), "--grid",
                              "-10:0.1:10,-10:0.1:10", "--threads", threads, "-o", str(out))
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert stdout.startswith("peak f=(")
    assert "N=2624" in stdout and "M=" in stdout and "fap=" in stdout


def test_analyze_m_indep_one(tmp_path, capsys, wave_csv):
    out = tmp_path / "m1.csv"
    run(capsys, "analyze", "-i", str(wave_csv), "--grid", "0:0.5:5,0:0.5:5", "--m-indep", "1",
        "-o", str(out))
    spec = read_spectrum(out)
    assert np.array_equal(spec.fap, spec.prob)


def test_analyze_empty_input(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("t1,value\n0,nan\n1,nan\n")
    code, _, err = run(capsys, "analyze", "-i", str(path), "--grid", "0:0.1:1")
    assert code == EXIT_CODES["EmptyAfterFilter"]
    assert "EmptyAfterFilter" in err


def test_analyze_small_n_warns(tmp_path, capsys):
    path = tmp_path / "three.csv"
    path.write_text("t1,value\n0,1\n0.5,-1\n1.3,0.5\n")
    out = tmp_path / "spec.csv"
    code, stdout, err = run(capsys, "analyze", "-i", str(path), "--grid", "0.1:0.1:1",
                            "-o", str(out))
    assert code == 0
    assert "warning" in err and "fap=n/a" in stdout
    assert np.all(np.isnan(read_spectrum(out).fap))


def test_missing_file_and_bad_grid(capsys, tmp_path):
    assert run(capsys, "analyze", "-i", str(tmp_path / "nope.csv"), "--grid", "0:1:2")[0] == 20
    path = tmp_path / "x.csv"
    path.write_text("t1,value\n0,1\n1,2\n2,0\n3,1\n")
    assert run(capsys, "analyze", "-i", str(path), "--grid", "1:0.1:0")[0] == EXIT_CODES["BadRange"]


def test_exit_codes_distinct_and_documented(capsys):
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name, code in EXIT_CODES.items():
        assert f"{code:<3} {name}" in out


def test_baseline_dft_and_compare(tmp_path, capsys, wave_csv):
    out = tmp_path / "dft.csv"
    code, stdout, _ = run(capsys, "baseline", "--method", "dft", "--preset", "simple-wave",
                          "-o", str(out))
    assert code == 0 and read_spectrum(out).method == "dft"
    code, stdout, _ = run(capsys, "compare", "--preset", "simple-wave", "--grid",
                          "-10:0.1:10,-10:0.1:10")
    rows = dict(line.split(",", 1) for line in stdout.strip().splitlines()[1:])
    assert 0.3 <= float(rows["psd_ratio"]) <= 0.7


def test_baseline_dft_from_field_file(tmp_path, capsys, wave_csv):
    field = tmp_path / "field.csv"
    run(capsys, "baseline", "-i", str(wave_csv), "--lattice", "-1:0.025:1,-1:0.025:1",
        "--field-output", str(field), "-o", str(tmp_path / "a.csv"))
    run(capsys, "baseline", "-i", str(field), "-o", str(tmp_path / "b.csv"))
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_baseline_omd(capsys):
    code, stdout, _ = run(capsys, "baseline", "--method", "omd", "--n", "100")
    rows = dict(line.split(",") for line in stdout.strip().splitlines()[1:])
    est, bound = float(rows["eps_T_estimate"]), float(rows["eps_T_bound"])
    assert 0 < est <= bound <= 0.2


def _sweep_rows(stdout):
    lines = stdout.strip().splitlines()
    assert lines[0] == "N,method,replicate,error"
    return [line.split(",") for line in lines[1:]]


def test_sweep_noiseless(capsys):
    code, stdout, err = run(capsys, "sweep", "--replicates", "2")
    rows = _sweep_rows(stdout)
    lsm = [abs(float(r[3])) for r in rows if r[1] == "lsm"]
    omd = [float(r[3]) for r in rows if r[1] == "omd"]
    assert max(lsm) < 1e-9
    assert (max(omd) - min(omd)) < 0.1 * abs(omd[0])
    assert "slope" in err


def test_sweep_single_n(capsys):
    rows = _sweep_rows(run(capsys, "sweep", "--ns", "64", "--replicates", "3", "--sigma", "1")[1])
    assert len(rows) == 6
    assert sorted((r[1], r[2]) for r in rows) == [(m, str(i)) for m in ("lsm", "omd")
                                                  for i in range(3)]


def test_sweep_slope(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, stdout, _ = run(capsys, "sweep", "--sigma", "1", "--replicates", "500", "-o", str(out))
    slope = float(stdout.splitlines()[0].rsplit("slope=", 1)[1])
    assert abs(slope + 0.5) <= 0.05


def test_emax(capsys):
    code, stdout, _ = run(capsys, "emax", "--resolution", "10000")
    assert code == 0 and "e_max=1.2732395447" in stdout


def test_report_from_spectrum_file(tmp_path, capsys, wave_csv):
    spec = tmp_path / "spec.csv"
    run(capsys, "analyze", "-i", str(wave_csv), "--grid", "-5:0.25:5,-8:0.25:8", "--sigma",
        "0.1", "-o", str(spec))
    cols = tmp_path / "cols.dat"
    code, stdout, _ = run(capsys, "report", "-i", str(spec), "--columns", str(cols))
    assert code == 0
    assert "## Peaks" in stdout and "## Confidence intervals" in stdout
    blocks = cols.read_text().strip().split("\n\n")
    assert len(blocks) == 41


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "ndlomb", "emax", "--resolution", "2000"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "beta_star=" in res.stdout
