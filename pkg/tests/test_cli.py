"""End-to-end tests for the ``scsynth`` command line."""

from pathlib import Path

import pytest

from scsynth.commands.specfile import parse_spec
from scsynth.main import main

from tests.conftest import SCALE_HALF_NET, SUBTRACTOR_NET

SPECS_DIR = Path(__file__).resolve().parent.parent / "specs"

SMALL_SUBTRACTOR = """\
target = subtractor
n_inputs = 2
sn_length = 64
grid = 8
length = 1
budget = 3000
"""


def _write(tmp_path: Path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

class TestSimulate:
    def test_explicit_bits(self, tmp_path, capsys):
        net = _write(tmp_path, "and.net", "inputs 2\nAND r0 r1 -> r2\noutput r2\n")
        assert main(["simulate", net, "--bits", "11101110", "01110010", "--dump"]) == 0
        assert capsys.readouterr().out.splitlines() == ["0.375", "01100010"]

    def test_subtractor_on_equal_values(self, tmp_path, capsys):
        net = _write(tmp_path, "sub.net", SUBTRACTOR_NET)
        assert main(["simulate", net, "0.4", "0.4", "--n", "64"]) == 0
        assert capsys.readouterr().out.splitlines() == ["0.0"]

    def test_bipolar(self, tmp_path, capsys):
        net = _write(tmp_path, "half.net", SCALE_HALF_NET)
        assert main(["simulate", net, "0.5", "--n", "64", "--bipolar"]) == 0
        assert capsys.readouterr().out.splitlines() == ["0.25", "-0.5"]

    def test_live_loop_is_reported(self, tmp_path, capsys):
        net = _write(tmp_path, "loop.net", "inputs 1\nAND r0 r2 -> r1\nOR r1 r0 -> r2\noutput r2\n")
        assert main(["simulate", net, "--bits", "0101"]) == 2
        assert "combinational loop" in capsys.readouterr().err

    def test_wrong_value_count(self, tmp_path, capsys):
        net = _write(tmp_path, "sub.net", SUBTRACTOR_NET)
        assert main(["simulate", net, "0.5"]) == 2
        assert "2 inputs" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

class TestBench:
    def test_unknown_only(self, capsys):
        assert main(["bench", "nosuch"]) == 1
        assert capsys.readouterr().out.splitlines() == ["name,I,budget,best_cost,reference_error,pass"]

    def test_two_benchmarks(self, tmp_path):
        out = tmp_path / "bench.csv"
        code = main(
            ["bench", "subtractor", "scale_half", "--budget", "50000", "--grid", "8", "--n", "64", "--out", str(out)]
        )
        assert code == 0
        rows = out.read_text(encoding="utf-8").splitlines()
        assert len(rows) == 3
        assert all(row.endswith(",True") for row in rows[1:])


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

class TestSynth:
    def test_writes_artifacts(self, tmp_path, capsys):
        spec = _write(tmp_path, "sub.spec", SMALL_SUBTRACTOR)
        out = tmp_path / "run"
        assert main(["synth", spec, "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "XOR" in printed
        assert printed.rstrip().endswith("best_cost 0.000000")
        for name in ("best.net", "best.live.net", "trajectory.csv", "run.csv"):
            assert (out / name).exists()
        assert (out / "trajectory.csv").read_text(encoding="utf-8").startswith("proposal,best_cost\n")
        assert "terminated_by,exact_solution" in (out / "run.csv").read_text(encoding="utf-8")

    def test_deterministic(self, tmp_path, capsys):
        spec = _write(tmp_path, "sqrt.spec", "target = sqrt\nn_inputs = 1\nsn_length = 32\ngrid = 8\nlength = 3\n")
        outputs = []
        for run in ("a", "b"):
            assert main(["synth", spec, "--budget", "500", "--seed", "4", "--out", str(tmp_path / run)]) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]
        assert (tmp_path / "a" / "best.net").read_text() == (tmp_path / "b" / "best.net").read_text()

    def test_bad_spec_names_field(self, tmp_path, capsys):
        spec = _write(tmp_path, "bad.spec", "target = subtractor\nn_inputs = 2\n")
        assert main(["synth", spec, "--out", str(tmp_path / "out")]) == 2
        assert "sn_length" in capsys.readouterr().err
        assert not (tmp_path / "out").exists()

    def test_dump_config_applies_overrides(self, tmp_path, capsys):
        spec = _write(tmp_path, "sub.spec", SMALL_SUBTRACTOR)
        assert main(["synth", spec, "--dump-config", "--budget", "77", "--seed", "9"]) == 0
        dumped = parse_spec(capsys.readouterr().out)
        assert (dumped.budget, dumped.seed) == (77, 9)
        assert dumped.model_copy(update={"budget": 3000, "seed": 0}) == parse_spec(SMALL_SUBTRACTOR)

    def test_invalid_override(self, tmp_path, capsys):
        spec = _write(tmp_path, "sub.spec", SMALL_SUBTRACTOR)
        assert main(["synth", spec, "--dump-config", "--budget", "0"]) == 2
        assert "budget" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# enum and sweep
# ---------------------------------------------------------------------------

class TestEnum:
    def test_subtractor(self, tmp_path, capsys):
        spec = _write(tmp_path, "sub.spec", SMALL_SUBTRACTOR)
        assert main(["enum", spec]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "candidates 66"
        assert "XOR r0 r1 -> r2" in lines
        assert "cost 0.000000" in lines

    def test_too_large(self, tmp_path, capsys):
        spec = _write(tmp_path, "sub.spec", SMALL_SUBTRACTOR)
        assert main(["enum", spec, "--length", "5"]) == 2
        assert "37294844329568" in capsys.readouterr().err


class TestSweep:
    def test_subtractor_rows(self, tmp_path, capsys):
        net = _write(tmp_path, "sub.net", SUBTRACTOR_NET)
        assert main(["sweep", net, str(SPECS_DIR / "subtractor.spec")]) == 0
        assert capsys.readouterr().out.splitlines() == [
            "N,error",
            "64,0.000000",
            "256,0.000000",
            "1024,0.000000",
        ]

    def test_custom_lengths_and_kind(self, tmp_path, capsys):
        net = _write(tmp_path, "half.net", SCALE_HALF_NET)
        code = main(["sweep", net, str(SPECS_DIR / "scale_half.spec"), "--lengths", "32,128", "--kind", "lfsr"])
        assert code == 0
        assert capsys.readouterr().out.splitlines() == ["N,error", "32,0.000000", "128,0.000000"]


def test_no_command(capsys):
    with pytest.raises(SystemExit):
        main([])
