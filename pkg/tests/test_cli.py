"""Command-line interface: verbs, exit codes, seed handling."""

import json
import socket

import numpy as np
import pytest
from click.testing import CliRunner

from tractforge import cli
from tractforge.audio_io import read_wav, write_wav
from tractforge.kinematics import calibrate as calibrate_frames
from tractforge.kinematics import read_gesture_file

from conftest import gesture_csv, neutral_channels


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def gesture_file(tmp_path):
    text = gesture_csv([
        (0.0, neutral_channels()),
        (500.0, neutral_channels({15: 0.8})),
        (1000.0, neutral_channels({15: 0.8, 16: 0.3})),
    ])
    p = tmp_path / "gesture.csv"
    p.write_text(text)
    return p


@pytest.fixture
def sweep_file(tmp_path):
    rows = [(float(t * 10), neutral_channels({i: (t % 11) / 10 for i in range(18)}))
            for t in range(22)]
    p = tmp_path / "sweep.csv"
    p.write_text(gesture_csv(rows))
    return p


class TestRender:
    def test_one_second_gesture_gives_one_second_wav(self, runner, gesture_file, tmp_path):
        out = tmp_path / "out.wav"
        res = runner.invoke(cli.main, ["render", str(gesture_file),
                                       "--out", str(out)])
        assert res.exit_code == 0, res.output
        samples, sr = read_wav(out)
        assert sr == 48000
        assert len(samples) / sr == pytest.approx(1.0, abs=0.02)
        assert "1.0" in res.output and "peak" in res.output

    def test_default_output_name(self, runner, gesture_file):
        res = runner.invoke(cli.main, ["render", str(gesture_file)])
        assert res.exit_code == 0
        assert gesture_file.with_suffix(".wav").exists()

    def test_missing_gesture_is_usage_error(self, runner):
        res = runner.invoke(cli.main, ["render", "/no/such/file.csv"])
        assert res.exit_code == 2
        assert "file.csv" in res.output

    def test_same_seed_is_byte_identical(self, runner, gesture_file, tmp_path):
        outs = []
        for name in ("a.wav", "b.wav"):
            p = tmp_path / name
            res = runner.invoke(cli.main, ["render", str(gesture_file),
                                           "--out", str(p), "--seed", "9"])
            assert res.exit_code == 0
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]

    def test_seeds_change_audio(self, runner, gesture_file, tmp_path):
        outs = []
        for seed in ("0", "1"):
            p = tmp_path / f"s{seed}.wav"
            res = runner.invoke(cli.main, ["render", str(gesture_file),
                                           "--out", str(p), "--seed", seed])
            assert res.exit_code == 0
            outs.append(p.read_bytes())
        assert outs[0] != outs[1]

    def test_env_seed_overrides_flag(self, runner, gesture_file, tmp_path):
        a = tmp_path / "env.wav"
        b = tmp_path / "flag.wav"
        res = runner.invoke(cli.main, ["render", str(gesture_file),
                                       "--out", str(a), "--seed", "3"],
                            env={"TRACT_FORGE_SEED": "11"})
        assert res.exit_code == 0
        res = runner.invoke(cli.main, ["render", str(gesture_file),
                                       "--out", str(b), "--seed", "11"])
        assert res.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_env_seed_is_usage_error(self, runner, gesture_file):
        res = runner.invoke(cli.main, ["render", str(gesture_file)],
                            env={"TRACT_FORGE_SEED": "eleven"})
        assert res.exit_code == 2

    def test_malformed_csv_names_line(self, runner, tmp_path):
        p = tmp_path / "bad.csv"
        good = gesture_csv([(0.0, neutral_channels())])
        p.write_text(good + "50,only,three,columns\n")
        res = runner.invoke(cli.main, ["render", str(p)])
        assert res.exit_code == 2
        assert "line 3" in res.output

    def test_area_trace_rows_match_blocks(self, runner, gesture_file, tmp_path):
        out = tmp_path / "o.wav"
        trace = tmp_path / "trace.csv"
        res = runner.invoke(cli.main, ["render", str(gesture_file),
                                       "--out", str(out),
                                       "--area-trace", str(trace)])
        assert res.exit_code == 0
        lines = trace.read_text().strip().split("\n")
        assert lines[0].startswith("t_ms,a_0,")
        samples, sr = read_wav(out)
        assert len(lines) - 1 == len(samples) // 512

    def test_calibration_rescales_input(self, runner, tmp_path):
        # identical audio from raw [0,1] values and from raw sensor units
        # once the matching calibration is applied
        raw = gesture_csv([(0.0, neutral_channels({15: 1.0})),
                           (200.0, neutral_channels())])
        volts = gesture_csv([(0.0, 200 + 400 * neutral_channels({15: 1.0})),
                             (200.0, 200 + 400 * neutral_channels())])
        (tmp_path / "raw.csv").write_text(raw)
        (tmp_path / "volts.csv").write_text(volts)
        cal = {"channels": [[200.0, 600.0]] * 18}
        (tmp_path / "cal.json").write_text(json.dumps(cal))

        res = runner.invoke(cli.main, ["render", str(tmp_path / "raw.csv")])
        assert res.exit_code == 0
        res = runner.invoke(cli.main, ["render", str(tmp_path / "volts.csv"),
                                       "--calib", str(tmp_path / "cal.json")])
        assert res.exit_code == 0
        assert ((tmp_path / "raw.wav").read_bytes()
                == (tmp_path / "volts.wav").read_bytes())


class TestAnalyze:
    def test_reports_ordered_formants(self, runner, gesture_file, tmp_path):
        wav = tmp_path / "v.wav"
        res = runner.invoke(cli.main, ["render", str(gesture_file),
                                       "--out", str(wav)])
        assert res.exit_code == 0
        res = runner.invoke(cli.main, ["analyze", str(wav)])
        assert res.exit_code == 0, res.output
        d = json.loads(res.output)
        assert 0 < d["f1_hz"] < d["f2_hz"]

    def test_formant_count_respected(self, runner, gesture_file, tmp_path):
        wav = tmp_path / "v.wav"
        runner.invoke(cli.main, ["render", str(gesture_file), "--out", str(wav)])
        res = runner.invoke(cli.main, ["analyze", str(wav), "--formants", "3"])
        d = json.loads(res.output)
        assert len(d["formants"]) <= 3

    def test_corrupt_wav_is_usage_error(self, runner, tmp_path):
        p = tmp_path / "junk.wav"
        p.write_bytes(b"RIFFgarbage")
        res = runner.invoke(cli.main, ["analyze", str(p)])
        assert res.exit_code == 2

    def test_silence_is_usage_error(self, runner, tmp_path):
        p = tmp_path / "quiet.wav"
        write_wav(p, np.zeros(48000), 48000)
        res = runner.invoke(cli.main, ["analyze", str(p)])
        assert res.exit_code == 2
        assert "resonance" in res.output


class TestCalibrate:
    def test_matches_library_result(self, runner, sweep_file, tmp_path):
        out = tmp_path / "cal.json"
        res = runner.invoke(cli.main, ["calibrate", str(sweep_file),
                                       "--out", str(out)])
        assert res.exit_code == 0
        want = calibrate_frames(read_gesture_file(sweep_file)).to_dict()
        assert json.loads(out.read_text()) == want

    def test_degenerate_channel_is_usage_error(self, runner, tmp_path):
        rows = [(0.0, neutral_channels()), (10.0, neutral_channels())]
        p = tmp_path / "flat.csv"
        p.write_text(gesture_csv(rows))
        res = runner.invoke(cli.main, ["calibrate", str(p),
                                       "--out", str(tmp_path / "c.json")])
        assert res.exit_code == 2
        assert "channel 0" in res.output


class TestServe:
    def test_busy_port_is_usage_error(self, runner):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        blocker.listen(1)
        try:
            res = runner.invoke(cli.main, ["serve", "--port", str(port)])
        finally:
            blocker.close()
        assert res.exit_code == 2
        assert "cannot bind" in res.output


class TestErrorMapping:
    def test_unexpected_exception_is_internal_error(self, runner, gesture_file,
                                                    monkeypatch):
        def boom(*a, **k):
            raise RuntimeError("wires crossed")

        monkeypatch.setattr(cli, "VoiceEngine", boom)
        res = runner.invoke(cli.main, ["render", str(gesture_file)])
        assert res.exit_code == 3
        assert "internal error" in res.output

    def test_help_succeeds(self, runner):
        res = runner.invoke(cli.main, ["--help"])
        assert res.exit_code == 0
        for verb in ("render", "analyze", "calibrate", "serve", "bench"):
            assert verb in res.output

    def test_version_succeeds(self, runner):
        res = runner.invoke(cli.main, ["--version"])
        assert res.exit_code == 0


class TestBench:
    def test_prints_json_with_budget_fields(self, runner):
        res = runner.invoke(cli.main, ["bench", "--seconds", "0.05"])
        assert res.exit_code == 0, res.output
        d = json.loads(res.output)
        assert d["rendered_s"] == pytest.approx(0.05, abs=0.011)
        assert d["realtime_factor"] > 0
