import json
import os

import pytest

from mathieu_resurgence.cli import (
    EXIT_CONVERGENCE,
    EXIT_DOMAIN,
    EXIT_OK,
    EXIT_USAGE,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestSubcommands:
    def test_pert_matches_printed_table(self, capsys):
        code, out = run(capsys, "pert", "--order", "5", "--poly")
        assert code == EXIT_OK
        payload = json.loads(out)
        rows = {r["power"]: r["coefficients_in_B"] for r in payload["rows"]}
        assert rows[2] == ["-1/64", "0", "-1/16"]
        assert rows[5] == ["0", "-405/4194304", "0", "-205/524288", "0", "-33/262144"]

    def test_pinst_ground_band(self, capsys):
        code, out = run(capsys, "pinst", "--order", "2", "--N", "0")
        payload = json.loads(out)
        assert payload["at_N_in_hbar_over_8"] == ["1", "-7/8", "-59/128"]

    def test_strong(self, capsys):
        code, out = run(capsys, "strong", "--N", "1", "--order", "6", "--hbar", "6.0")
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["at_hbar"]["upper_u"] == pytest.approx(4.9929586, abs=1e-4)

    def test_zjj(self, capsys):
        code, out = run(capsys, "zjj", "--order", "3")
        payload = json.loads(out)
        assert payload["A_pole"] == "16/hbar"
        assert payload["A_of_B"][1]["coefficients_in_B"] == ["3/64", "0", "3/16"]

    def test_actions_well(self, capsys):
        code, out = run(capsys, "actions", "--region", "well", "--n", "1", "--order", "3")
        payload = json.loads(out)
        assert payload["rows"][0]["coefficient"] == "1/128"

    def test_spectrum_and_widths(self, capsys):
        code, out = run(capsys, "spectrum", "--hbar", "0.8", "--bands", "2")
        assert code == EXIT_OK
        assert len(json.loads(out)["rows"]) == 6
        code, out = run(capsys, "widths", "--kind", "band", "--N", "0", "--hbar", "0.5")
        payload = json.loads(out)
        assert payload["rows"][0]["ratio"] == pytest.approx(1.0, abs=0.05)

    def test_zerodim_rows(self, capsys):
        code, out = run(capsys, "zerodim", "--m", "1/4", "--order", "4", "--check", "rows")
        payload = json.loads(out)
        got = [r["coefficient_at_m"] for r in payload["rows"]]
        assert got == ["1", "1/8", "9/64", "105/512", "1995/4096"]

    def test_benderwu_lame(self, capsys):
        code, out = run(
            capsys, "benderwu", "--potential", "lame", "--m", "1/2", "--order", "4"
        )
        payload = json.loads(out)
        vals = [r["coefficient"] for r in payload["rows"]]
        assert vals == ["0", "1/2", "0", "-3/64", "0"]


class TestExitCodes:
    def test_usage(self, capsys):
        assert main(["definitely-not-a-command"]) == EXIT_USAGE

    def test_domain(self, capsys):
        assert main(["widths", "--kind", "gap", "--N", "0", "--hbar", "6.0"]) == EXIT_DOMAIN

    def test_convergence(self, capsys):
        # a gap far below double-precision resolution cannot be resolved
        assert main(["widths", "--kind", "gap", "--N", "14", "--hbar", "0.7"]) == EXIT_CONVERGENCE


class TestOutputPlumbing:
    def test_determinism(self, capsys):
        _, a = run(capsys, "pert", "--order", "4", "--poly")
        _, b = run(capsys, "pert", "--order", "4", "--poly")
        assert a == b

    def test_csv_format(self, capsys):
        code, out = run(capsys, "spectrum", "--hbar", "1.0", "--bands", "1", "--format", "csv")
        lines = out.strip().split("\n")
        assert lines[0].startswith("#")
        assert any(line.startswith("hbar,") for line in lines)

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "out.json"
        code, _ = run(capsys, "pert", "--order", "2", "--output", str(target))
        assert code == EXIT_OK
        assert json.loads(target.read_text())["metadata"]["command"] == "pert"

    def test_metadata_carries_config(self, capsys):
        _, out = run(capsys, "pert", "--order", "2")
        meta = json.loads(out)["metadata"]
        assert meta["config"]["order"] == "2"
        assert "version" in meta

    def test_cache_round_trip(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("MATHIEU_RESURGENCE_CACHE", str(tmp_path))
        _, a = run(capsys, "pert", "--order", "3", "--poly")
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        _, b = run(capsys, "pert", "--order", "3", "--poly")
        assert a == b


def test_pretty_output(capsys):
    code, out = run(capsys, "pert", "--order", "2", "--pretty")
    assert code == EXIT_OK
    assert "coefficients_in_B" in out and "pert" in out
