import argparse
import csv
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pairdecay.cli import (EXIT_IO, EXIT_NUMERIC, EXIT_PARSE, ParseError, build_parser,
                           load_spec_file, main, parse_spec, spec_from_mapping, spec_to_argv)
from pairdecay.experiments import ExperimentSpec
from pairdecay.floquet import PRESETS

FIG2 = ["--config", "a", "--regime", "chaotic", "--qubits", "15", "--coupling", "0.03",
        "--steps", "100", "--ensemble", "60", "--seed", "7"]


def parse_run(argv):
    return parse_spec(build_parser().parse_args(["run"] + argv))


def test_fig2_flags():
    spec = parse_run(FIG2)
    assert spec == ExperimentSpec("a", "chaotic", 15, 0.03, 100, ensemble_size=60, seed=7)
    assert (spec.b_perp, spec.b_par) == (1.4, 1.4)
    assert spec.env_bond == 1.0 and spec.record_stride == 1


def test_intermediate_preset():
    spec = parse_run(["--config", "a", "--regime", "intermediate", "--qubits", "14",
                      "--coupling", "0.01", "--steps", "10"])
    assert (spec.b_perp, spec.b_par) == (1.89, 0.59)


def test_missing_flag_is_named():
    with pytest.raises(ParseError, match="--coupling"):
        parse_run(["--config", "a", "--regime", "chaotic", "--qubits", "15", "--steps", "1"])


def test_bad_regime_and_geometry(capsys):
    with pytest.raises(ParseError, match="regime"):
        parse_run(FIG2[:2] + ["--regime", "tepid"] + FIG2[4:])
    assert main(["run", "--config", "c", "--regime", "chaotic", "--qubits", "15",
                 "--coupling", "0.01", "--steps", "1"]) == EXIT_PARSE
    assert "num_qubits" in capsys.readouterr().err


def test_malformed_spec_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError, match="malformed"):
        load_spec_file(bad)
    bad.write_text(json.dumps({"configuration": "a", "qubitz": 3}))
    with pytest.raises(ParseError, match="qubitz"):
        load_spec_file(bad)


@settings(max_examples=40)
@given(st.sampled_from("ab"), st.sampled_from(sorted(PRESETS) + ["custom"]),
       st.integers(3, 20), st.floats(0, 0.05), st.integers(0, 10**4), st.integers(1, 100),
       st.integers(0, 2**40), st.floats(0.1, 3), st.integers(1, 50),
       st.floats(-3, 3), st.floats(-3, 3))
def test_round_trip(config, regime, L, coupling, steps, ens, seed, env_bond, stride, bp, bz):
    spec = ExperimentSpec(config, regime, L, coupling, steps, ens, seed, env_bond, stride,
                          bp if regime == "custom" else None, bz if regime == "custom" else None)
    assert parse_run(spec_to_argv(spec)) == spec
    assert spec_from_mapping(json.loads(json.dumps(spec.to_dict()))) == spec


def test_run_writes_contracted_files(tmp_path):
    out = tmp_path / "r"
    assert main(["run", "--config", "a", "--regime", "chaotic", "--qubits", "6",
                 "--coupling", "0.05", "--steps", "2", "--out", str(out)]) == 0
    rows = list(csv.reader(open(out / "trajectories.csv")))
    assert rows[0] == ["t", "concurrence", "purity", "seed"]
    assert len(rows) == 4
    assert open(out / "summary.csv").readline().strip() == "t,c_mean,c_var,p_mean,p_var"
    ref = list(csv.reader(open(out / "werner_reference.csv")))
    assert ref[0] == ["purity", "concurrence"]
    assert ref[-1] == ["1", "1"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["spec"]["num_qubits"] == 6
    assert {"version", "duration_s", "outputs"} <= set(manifest)
    # 17 significant digits
    value = rows[2][1]
    assert float(value) == float(f"{float(value):.17g}")


def test_rerun_from_manifest_is_bytewise_identical(tmp_path):
    assert main(["run"] + FIG2[:5] + ["9", "--coupling", "0.04", "--steps", "30",
                                      "--ensemble", "2", "--out", str(tmp_path / "a")]) == 0
    assert main(["run", "--spec", str(tmp_path / "a" / "manifest.json"),
                 "--out", str(tmp_path / "b")]) == 0
    for name in ("trajectories.csv", "summary.csv", "werner_reference.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_fit_on_synthetic_quadratic(tmp_path, capsys):
    path = tmp_path / "q.csv"
    with open(path, "w") as fh:
        fh.write("t,concurrence,purity,seed\n")
        for t in range(0, 41):
            fh.write(f"{t},{1 - 1e-4 * t * t:.17g},{1 - 1e-3 * t:.17g},0\n")
    assert main(["fit", str(path)]) == 0
    assert "gamma=2.000" in capsys.readouterr().out
    assert main(["fit", str(path), "--quantity", "purity"]) == 0
    assert "gamma=1.000" in capsys.readouterr().out


def test_fit_missing_column(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,concurrence\n1,0.5\n")
    assert main(["fit", str(path)]) == EXIT_PARSE


def test_fit_missing_file(tmp_path):
    assert main(["fit", str(tmp_path / "nope.csv")]) == EXIT_IO


def test_wernercheck(capsys):
    assert main(["wernercheck"]) == 0
    out = capsys.readouterr().out
    worst = max(float(line.split(":")[1]) for line in out.splitlines() if "max" in line)
    assert worst < 1e-12


def test_oracle_subcommand(capsys):
    assert main(["oracle", "--qubits", "4", "--trials", "50"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as exc:
        main(["teleport"])
    assert exc.value.code != 0


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code = main(["run", "--config", "a", "--regime", "chaotic", "--qubits", "5",
                 "--coupling", "0.05", "--steps", "1", "--out", str(blocker / "sub")])
    assert code == EXIT_IO


def test_sizescan_subcommand(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    assert main(["sizescan", "--coupling", "0.2", "--steps", "250", "--sizes", "3,4",
                 "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "env_qubits,deviation"
    assert "env=4" in capsys.readouterr().out
