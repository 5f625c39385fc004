"""Tests for the nlos-link command line."""
import json
import math

import pytest

from nlos_link import __version__
from nlos_link.cli import NLOSLinkCLI
from nlos_link.cli.commands import simulate as simulate_command
from nlos_link.cli.ui import report_error, status_mark
from nlos_link.core.key_agreement import PublicParams, key_fingerprint
from nlos_link.simulator import load_config, run


def cli(*argv):
    return NLOSLinkCLI().run([str(a) for a in argv])


class TestApp:

    def test_version(self, capsys):
        assert cli("--version") == 0
        assert __version__ in capsys.readouterr().out

    def test_missing_command(self, capsys):
        assert cli() == 1
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self):
        assert cli("coverage", "--power", "--ir", 1, "--bogus") == 1


class TestCoverageCommand:

    def test_power(self, capsys):
        assert cli("coverage", "--power", "--ir", 1, "--beam-radius", 1, "--cell-radius", 1) == 0
        assert capsys.readouterr().out.strip() == "11.60843918"

    def test_power_at_axis(self, capsys):
        assert cli("coverage", "--power", "--ir", 1, "--beam-radius", 1, "--cell-radius", 0) == 0
        assert capsys.readouterr().out.strip() == "1.570796327"

    def test_radius(self, capsys):
        assert cli("coverage", "--radius", "--launch-power", "8.539734223", "--ir", 1) == 0
        assert capsys.readouterr().out.strip() == "1.000000000"

    @pytest.mark.parametrize("argv", [
        ["--power", "--ir", "0", "--beam-radius", "1", "--cell-radius", "1"],
        ["--power", "--ir", "1", "--beam-radius", "0", "--cell-radius", "1"],
        ["--radius", "--ir", "1", "--launch-power", "0"],
        ["--radius", "--ir", "1"],
        ["--power", "--ir", "1", "--beam-radius", "1"],
    ])
    def test_invalid_input(self, argv, capsys):
        assert cli("coverage", *argv) == 1
        assert capsys.readouterr().out == ""

    def test_modes_exclusive(self):
        assert cli("coverage", "--power", "--radius", "--ir", 1) == 1


class TestTrilaterateCommand:

    def test_worked_example(self, capsys):
        code = cli("trilaterate", "--anchor", "0,0", "--anchor", "4,0", "--anchor", "0,3",
                   "--distances", math.sqrt(2), math.sqrt(10), math.sqrt(5))
        assert code == 0
        assert capsys.readouterr().out.strip() == "(1.000000, 1.000000)"

    def test_unit_anchors(self, capsys):
        code = cli("trilaterate", "--anchor", "0,0", "--anchor", "1,0", "--anchor", "0,1",
                   "--distances", 0, 1, 1)
        assert code == 0
        assert capsys.readouterr().out.strip() == "(0.000000, 0.000000)"

    def test_negative_anchor_with_equals(self, capsys):
        code = cli("trilaterate", "--anchor=-1,0", "--anchor", "1,0", "--anchor", "0,1",
                   "--distances", 1, 1, 1)
        assert code == 0
        assert capsys.readouterr().out.strip() == "(0.000000, 0.000000)"

    def test_negative_anchor_needs_equals(self):
        assert cli("trilaterate", "--anchor", "-1,0", "--anchor", "1,0", "--anchor", "0,1",
                   "--distances", 1, 1, 1) == 1

    def test_help_shows_negative_form(self, capsys):
        assert cli("trilaterate", "--help") == 0
        assert "anchor=-1,0" in capsys.readouterr().out

    def test_collinear(self, capsys):
        code = cli("trilaterate", "--anchor", "0,0", "--anchor", "1,0", "--anchor", "2,0",
                   "--distances", 1, 1, 1)
        assert code == 1
        assert "collinear" in capsys.readouterr().err

    def test_wrong_anchor_count(self):
        assert cli("trilaterate", "--anchor", "0,0", "--anchor", "1,0", "--distances", 1, 1, 1) == 1

    def test_malformed_anchor(self):
        assert cli("trilaterate", "--anchor", "0;0", "--anchor", "1,0", "--anchor", "0,1",
                   "--distances", 1, 1, 1) == 1


class TestKeyAgreeCommand:

    def test_worked_example(self, capsys):
        code = cli("keyagree", "--n", 23, "--g", 5, "--password-a", "pw", "--password-b", "pw",
                   "--a", 6, "--b", 7, "--digest-m", 3)
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[:4] == ["K1 = 6", "K2 = 14", "key_initiator = 12", "key_responder = 12"]
        assert f"fingerprint_initiator = {key_fingerprint(12)}" in lines

    def test_unit_digest_is_plain_exchange(self, capsys):
        code = cli("keyagree", "--n", 23, "--g", 5, "--password-a", "x", "--password-b", "y",
                   "--a", 6, "--b", 7, "--unit-digest")
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[:3] == [f"K1 = {pow(5, 6, 23)}", f"K2 = {pow(5, 7, 23)}", f"key_initiator = {pow(5, 42, 23)}"]

    def test_unequal_passwords(self, capsys):
        params = PublicParams.modp_2048()
        code = cli("keyagree", "--n", params.n, "--g", params.g, "--password-a", "correct horse",
                   "--password-b", "battery staple", "--a", 2 ** 200 + 7, "--b", 2 ** 190 + 3)
        assert code == 3
        captured = capsys.readouterr()
        assert "K1 fingerprint = " in captured.out
        assert "key_initiator" not in captured.out
        assert "keys differ" in captured.err

    def test_equal_passwords_full_size(self):
        params = PublicParams.modp_2048()
        code = cli("keyagree", "--n", params.n, "--g", params.g, "--password-a", "same",
                   "--password-b", "same", "--a", 2 ** 200 + 7, "--b", 2 ** 190 + 3)
        assert code == 0

    def test_invalid_group(self, capsys):
        code = cli("keyagree", "--n", 21, "--g", 2, "--password-a", "pw", "--password-b", "pw",
                   "--a", 3, "--b", 4)
        assert code == 1
        assert capsys.readouterr().err != ""


class TestSimulateCommand:

    def test_writes_trace(self, demo_config_path, tmp_path):
        out = tmp_path / "trace.jsonl"
        assert cli("simulate", demo_config_path, "--ticks", 100, "--out", out) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert json.loads(lines[0])["kind"] == "Header"
        assert len(lines) > 1

    def test_out_file_is_canonical_trace(self, demo_config_path, tmp_path):
        out = tmp_path / "trace.jsonl"
        assert cli("simulate", demo_config_path, "--ticks", 3, "--out", out) == 0
        expected = run(load_config(str(demo_config_path)), 3).to_jsonl()
        assert out.read_bytes() == expected.encode("utf-8")

    def test_reproducible(self, demo_config_path, demo_script_path, tmp_path):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (first, second):
            assert cli("simulate", demo_config_path, "--ticks", 6, "--script", demo_script_path,
                       "--out", out) == 0
        assert first.read_bytes() == second.read_bytes()
        assert b"MessageDelivered" in first.read_bytes()

    def test_stdout(self, demo_config_path, capsys):
        assert cli("simulate", demo_config_path, "--ticks", 2, "--seed", 3) == 0
        header = json.loads(capsys.readouterr().out.splitlines()[0])
        assert header["payload"]["seed"] == 3

    def test_two_receivers(self, demo_data, write_json, tmp_path, capsys):
        demo_data["ultrasonic"]["receivers"].pop()
        out = tmp_path / "trace.jsonl"
        assert cli("simulate", write_json("two.json", demo_data), "--out", out) == 1
        assert "at least 3 non-collinear" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_config(self, tmp_path, capsys):
        assert cli("simulate", tmp_path / "absent.json") == 1
        assert "not found" in capsys.readouterr().err

    def test_protocol_violation_exit(self, demo_config_path, monkeypatch, tmp_path):
        real_run = simulate_command.run

        def corrupted_run(config, ticks, requests=()):
            trace = real_run(config, ticks, requests)
            trace.protocol_violations = 1
            return trace

        monkeypatch.setattr(simulate_command, "run", corrupted_run)
        assert cli("simulate", demo_config_path, "--ticks", 1, "--out", tmp_path / "t.jsonl") == 2


class TestStatusMarks:

    def test_unicode_marks(self):
        assert status_mark(True, "utf-8") == "✓"
        assert status_mark(False, "utf-8") == "✗"

    @pytest.mark.parametrize("encoding", ["ascii", "cp437", "no-such-codec"])
    def test_ascii_fallback(self, encoding):
        assert (status_mark(True, encoding), status_mark(False, encoding)) == ("+", "x")

    def test_error_line_on_stderr(self, capsys):
        report_error("bad [input]")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "bad [input]" in captured.err
