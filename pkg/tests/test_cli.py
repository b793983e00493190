import subprocess
import sys

import pytest

from fuzzgrid import DataSpec, load_model, make_plane_dataset, read_dataset
from fuzzgrid.cli import SUMMARY_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def gen(capsys, tmp_path, name, *extra):
    path = tmp_path / name
    code, _, err = run(capsys, "gen", "--out", str(path), *extra)
    assert code == 0, err
    return path


def train(capsys, tmp_path, dataset, name, algo, *extra):
    path = tmp_path / name
    code, _, err = run(
        capsys, "train", str(dataset), str(path), "--algo", algo, *extra
    )
    assert code == 0, err
    return path


# ---------------------------------------------------------------------------
# gen

def test_gen_writes_deterministic_csv(capsys, tmp_path):
    a = gen(capsys, tmp_path, "a.csv", "--n", "30", "--noise", "0.1", "--seed", "4")
    b = gen(capsys, tmp_path, "b.csv", "--n", "30", "--noise", "0.1", "--seed", "4")
    assert a.read_bytes() == b.read_bytes()
    expected = make_plane_dataset(DataSpec(n=30, noise_level=0.1, seed=4))
    assert read_dataset(a) == expected


def test_gen_rejects_negative_noise(capsys, tmp_path):
    code, _, err = run(
        capsys, "gen", "--out", str(tmp_path / "x.csv"), "--noise", "-0.1"
    )
    assert code == 1
    assert "noise level must be non-negative" in err
    assert not (tmp_path / "x.csv").exists()


def test_gen_reports_to_stderr_only(capsys, tmp_path):
    path = tmp_path / "d.csv"
    code, out, err = run(capsys, "gen", "--out", str(path), "--n", "5")
    assert code == 0
    assert out == ""
    assert "wrote 5 examples" in err


# ---------------------------------------------------------------------------
# train

def test_train_writes_loadable_model(capsys, tmp_path):
    data = gen(capsys, tmp_path, "d.csv", "--n", "100")
    model_path = train(capsys, tmp_path, data, "m.txt", "simplified", "--sets", "5")
    model = load_model(model_path)
    assert model.shape == (5, 5)
    assert model.input_partitions[0].kind == "triangular"
    assert model.output_partition.n == 13


def test_train_neurofuzzy_uses_gaussian(capsys, tmp_path):
    data = gen(capsys, tmp_path, "d.csv", "--n", "60")
    model_path = train(
        capsys, tmp_path, data, "nf.txt", "neurofuzzy", "--epochs", "3"
    )
    model = load_model(model_path)
    assert model.input_partitions[0].kind == "gaussian"


def test_train_rejects_wrong_membership_kind(capsys, tmp_path):
    data = gen(capsys, tmp_path, "d.csv", "--n", "20")
    out_path = tmp_path / "m.txt"
    code, _, err = run(
        capsys, "train", str(data), str(out_path), "--algo", "simplified",
        "--mf", "gaussian",
    )
    assert code == 1
    assert "simplified requires triangular membership functions" in err
    code, _, err = run(
        capsys, "train", str(data), str(out_path), "--algo", "neurofuzzy",
        "--mf", "triangular",
    )
    assert code == 1
    assert "neurofuzzy requires gaussian membership functions" in err


def test_train_missing_dataset(capsys, tmp_path):
    code, _, err = run(
        capsys, "train", str(tmp_path / "nope.csv"), str(tmp_path / "m.txt"),
        "--algo", "simplified",
    )
    assert code == 1
    assert "cannot read dataset" in err


# ---------------------------------------------------------------------------
# diff / eval

def make_pair(capsys, tmp_path, algo="cluster-tri"):
    clean_csv = gen(capsys, tmp_path, "clean.csv", "--n", "100", "--seed", "1")
    noisy_csv = gen(
        capsys, tmp_path, "noisy.csv", "--n", "100", "--seed", "1",
        "--noise", "0.1",
    )
    clean = train(capsys, tmp_path, clean_csv, "clean.model", algo)
    noisy = train(capsys, tmp_path, noisy_csv, "noisy.model", algo)
    return clean, noisy


def parse_metric(out, name):
    for line in out.splitlines():
        if line.startswith(f"{name}="):
            return float(line.split("=", 1)[1])
    raise AssertionError(f"{name} not in output:\n{out}")


def test_diff_self_is_blank(capsys, tmp_path):
    # gaussian membership covers the whole grid, so no '?' gap marks
    clean, _ = make_pair(capsys, tmp_path, algo="cluster-gauss")
    code, out, _ = run(capsys, "diff", str(clean), str(clean), "--resolution", "10")
    assert code == 0
    lines = out.splitlines()
    heat = lines[:10]
    assert all(line == " " * 10 for line in heat)
    assert parse_metric(out, "rmse") == 0.0
    assert parse_metric(out, "gap_fraction") == 0.0
    assert "changed=0" in out


def test_diff_pair_reports_structure(capsys, tmp_path):
    clean, noisy = make_pair(capsys, tmp_path)
    code, out, _ = run(capsys, "diff", str(clean), str(noisy), "--resolution", "12")
    assert code == 0
    heat = out.splitlines()[:12]
    assert all(len(line) == 12 for line in heat)
    assert any(c != " " for line in heat for c in line)
    assert parse_metric(out, "rmse") > 0.0
    assert "rules: unchanged=" in out


def test_diff_writes_report_csv(capsys, tmp_path):
    clean, noisy = make_pair(capsys, tmp_path)
    report = tmp_path / "report.csv"
    code, _, err = run(
        capsys, "diff", str(clean), str(noisy), "--resolution", "8",
        "--out", str(report),
    )
    assert code == 0
    lines = report.read_text().splitlines()
    meta = [line for line in lines if line.startswith("# ")]
    keys = {line[2:].split("=", 1)[0] for line in meta}
    assert {"clean_model", "noisy_model", "inputs", "output", "resolution"} <= keys
    assert "x,y,diff" in lines
    assert len([line for line in lines if not line.startswith("#")]) == 1 + 64


def test_diff_rejects_mismatched_domains(capsys, tmp_path):
    data_a = gen(capsys, tmp_path, "a.csv", "--n", "50")
    data_b = gen(capsys, tmp_path, "b.csv", "--n", "50", "--lo", "0", "--hi", "10")
    model_a = train(capsys, tmp_path, data_a, "a.model", "cluster-tri")
    model_b = train(
        capsys, tmp_path, data_b, "b.model", "cluster-tri",
        "--lo", "0", "--hi", "10",
    )
    code, _, err = run(capsys, "diff", str(model_a), str(model_b))
    assert code == 1
    assert "input domains differ" in err


def test_diff_missing_model(capsys, tmp_path):
    code, _, err = run(capsys, "diff", str(tmp_path / "no.model"), str(tmp_path / "no.model"))
    assert code == 1
    assert "cannot load model" in err


def test_eval_scores_against_plane(capsys, tmp_path):
    data = gen(capsys, tmp_path, "d.csv", "--n", "400")
    model = train(capsys, tmp_path, data, "m.model", "cluster-gauss")
    code, out, _ = run(capsys, "eval", str(model))
    assert code == 0
    assert parse_metric(out, "rmse") < 0.5
    assert parse_metric(out, "gap_fraction") == 0.0


# ---------------------------------------------------------------------------
# sweep

def test_sweep_rejects_unknown_preset(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "bogus"])
    assert exc.value.code == 2
    err = capsys.readouterr().err
    assert "invalid choice" in err
    assert "algorithm-ladder" in err


def test_sweep_alpha_rows(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, _, err = run(
        capsys, "sweep", "alpha-sweep", "--trials", "2", "--n", "60",
        "--out", str(out_csv),
    )
    assert code == 0, err
    lines = out_csv.read_text().splitlines()
    assert lines[0] == SUMMARY_COLUMNS
    assert len(lines) == 4
    alphas = []
    for line in lines[1:]:
        cols = line.split(",")
        assert cols[0] == "alpha-sweep"
        assert cols[1] == "neurofuzzy"
        assert cols[2] == "9"
        alphas.append(float(cols[6]))
        assert cols[7] == "50"
        assert cols[8] == "cluster"
        assert cols[10] == "2"
        assert float(cols[11]) > 0.0
    assert alphas == [0.1, 0.8, 0.95]


def test_sweep_partition_rows_blank_tuning_fields(capsys, tmp_path):
    out_csv = tmp_path / "sweep.csv"
    code, _, err = run(
        capsys, "sweep", "partition-sweep", "--algo", "simplified",
        "--trials", "1", "--out", str(out_csv),
    )
    assert code == 0, err
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 5
    sets = []
    for line in lines[1:]:
        cols = line.split(",")
        assert cols[1] == "simplified"
        sets.append(int(cols[2]))
        assert cols[6] == "" and cols[7] == "" and cols[8] == ""
    assert sets == [3, 5, 7, 9]


def test_sweep_stdout_and_determinism(capsys, tmp_path):
    args = ("sweep", "datasize", "--trials", "1")
    code, out_a, _ = run(capsys, *args)
    assert code == 0
    code, out_b, _ = run(capsys, *args)
    assert code == 0
    assert out_a == out_b
    lines = out_a.splitlines()
    assert lines[0] == SUMMARY_COLUMNS
    assert [line.split(",")[5] for line in lines[1:]] == ["100", "400"]


# ---------------------------------------------------------------------------
# config file resolution

def test_config_supplies_defaults_and_flags_win(capsys, tmp_path):
    config = tmp_path / "bench.conf"
    config.write_text("# benchmark defaults\nn=7\nnoise=0.2\nseed=5\n")
    path = gen(capsys, tmp_path, "c.csv", "--config", str(config))
    expected = make_plane_dataset(DataSpec(n=7, noise_level=0.2, seed=5))
    assert read_dataset(path) == expected

    path = gen(capsys, tmp_path, "c2.csv", "--config", str(config), "--n", "3")
    assert len(read_dataset(path)) == 3


def test_config_rejects_malformed_lines(capsys, tmp_path):
    config = tmp_path / "bad.conf"
    config.write_text("just some words\n")
    code, _, err = run(
        capsys, "gen", "--out", str(tmp_path / "x.csv"), "--config", str(config)
    )
    assert code == 1
    assert "expected key=value" in err


# ---------------------------------------------------------------------------
# module entry point

def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "fuzzgrid.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "sweep" in proc.stdout
