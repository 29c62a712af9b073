"""Command-line front end.

Offline work (render, analyze, calibrate, bench) runs in-process against
the engine. `serve` hosts the websocket protocol plus the browser UI, and
render/analyze accept --server to go through a running service instead of
importing the heavy numeric path locally.

Exit codes: 0 success, 2 anything wrong with the inputs (bad flags,
missing or malformed files, busy port), 3 unexpected internal failure.
"""

import base64
import functools
import json
import os
import socket
import sys
import traceback
import urllib.error
import urllib.request
from pathlib import Path

import click
import numpy as np

from . import analysis, area, audio_io
from . import bench as bench_mod
from . import kinematics
from .config import EngineConfig
from .engine import VoiceEngine, concat_blocks
from .errors import TractForgeError

EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _fail(code: int, message) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def guarded(fn):
    """Map domain and IO errors to exit 2, anything unexpected to exit 3."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (TractForgeError, OSError, urllib.error.URLError) as e:
            _fail(EXIT_USAGE, e)
        except click.ClickException:
            raise
        except Exception:
            traceback.print_exc()
            _fail(EXIT_INTERNAL, "internal error (traceback above)")

    return wrapper


def _resolve_seed(seed: int) -> int:
    env = os.environ.get("TRACT_FORGE_SEED")
    if env is None or env == "":
        return seed
    try:
        return int(env)
    except ValueError:
        raise click.BadParameter(f"TRACT_FORGE_SEED must be an integer, got {env!r}")


def _post_json(server: str, endpoint: str, payload: dict) -> dict:
    req = urllib.request.Request(
        server.rstrip("/") + endpoint,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return json.load(resp)
    except urllib.error.HTTPError as e:
        body = e.read().decode(errors="replace")
        try:
            detail = json.loads(body).get("detail", body)
        except json.JSONDecodeError:
            detail = body
        raise TractForgeError(f"server rejected the request: {detail}") from e


@click.group()
@click.version_option(package_name="tractforge")
def main():
    """Articulatory speech synthesis from glove gesture data."""


@main.command()
@click.argument("gesture", type=click.Path(exists=True, dir_okay=False))
@click.option("--calib", type=click.Path(exists=True, dir_okay=False),
              help="calibration JSON; without it raw values are taken as already in [0,1]")
@click.option("--layout", type=click.Path(exists=True, dir_okay=False),
              help="channel layout JSON overriding the default wiring")
@click.option("--out", type=click.Path(dir_okay=False),
              help="output WAV path [default: gesture name with .wav]")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--sr", type=int, default=48000, show_default=True)
@click.option("--area-trace", type=click.Path(dir_okay=False),
              help="also write a per-block CSV of the tract area function")
@click.option("--server", metavar="URL",
              help="render on a running service instead of in-process")
@guarded
def render(gesture, calib, layout, out, seed, sr, area_trace, server):
    """Render a recorded gesture CSV to a WAV file."""
    seed = _resolve_seed(seed)
    out = Path(out) if out else Path(gesture).with_suffix(".wav")

    if server:
        payload = {"gesture_csv": Path(gesture).read_text(), "seed": seed, "sr": sr}
        if calib:
            payload["calib"] = json.loads(Path(calib).read_text())
        if layout:
            payload["layout"] = json.loads(Path(layout).read_text())
        resp = _post_json(server, "/api/render", payload)
        out.write_bytes(base64.b64decode(resp["wav_base64"]))
        click.echo(f"{out}: {resp['duration_s']:.3f} s, peak {resp['peak']:.3f}")
        return

    frames = kinematics.read_gesture_file(gesture)
    cal = (kinematics.load_calibration(calib) if calib
           else kinematics.Calibration.identity())
    lay = kinematics.load_layout(layout) if layout else None
    engine = VoiceEngine(EngineConfig(sr=sr), seed=seed)
    infos = []
    blocks = engine.replay(frames, calib=cal, layout=lay, on_block=infos.append)
    samples = concat_blocks(blocks)
    audio_io.write_wav(out, samples, sr)
    if area_trace:
        with open(area_trace, "w", encoding="utf-8") as fh:
            area.write_area_trace(fh, [i.t_ms for i in infos],
                                  [i.areas for i in infos])
    peak = float(np.max(np.abs(samples))) if len(samples) else 0.0
    click.echo(f"{out}: {len(samples) / sr:.3f} s, peak {peak:.3f}")


@main.command()
@click.argument("wav", type=click.Path(exists=True, dir_okay=False))
@click.option("--formants", "count", type=click.IntRange(1, 5), default=2,
              show_default=True, help="how many formants to report")
@click.option("--server", metavar="URL",
              help="analyze on a running service instead of in-process")
@guarded
def analyze(wav, count, server):
    """Estimate formants of a WAV file; prints JSON."""
    if server:
        payload = {"wav_base64": base64.b64encode(Path(wav).read_bytes()).decode(),
                   "count": count}
        click.echo(json.dumps(_post_json(server, "/api/analyze", payload)))
        return
    samples, sr = audio_io.read_wav(wav)
    samples, sr = analysis.to_analysis_rate(samples, sr)
    est = analysis.estimate_formants(samples, sr, count=count)
    click.echo(json.dumps(est.to_dict()))


@main.command()
@click.argument("sweep", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default="calib.json",
              show_default=True)
@guarded
def calibrate(sweep, out):
    """Derive per-channel sensor ranges from a recorded sweep CSV."""
    frames = kinematics.read_gesture_file(sweep)
    cal = kinematics.calibrate(frames)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(cal.to_dict(), fh, indent=2)
        fh.write("\n")
    click.echo(f"{out}: {kinematics.N_CHANNELS} channels")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--sr", type=int, default=48000, show_default=True)
@guarded
def serve(port, host, sr):
    """Serve the live control/audio protocol and the browser UI."""
    import uvicorn

    from .service import create_app

    # bind before uvicorn starts so a busy port is a plain usage error
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as e:
        sock.close()
        _fail(EXIT_USAGE, f"cannot bind {host}:{port}: {e}")
    app = create_app(sr=sr, base_seed=_resolve_seed(0))
    click.echo(f"listening on http://{host}:{port}")
    uvicorn.Server(uvicorn.Config(app, log_level="warning")).run(sockets=[sock])


@main.command()
@click.option("--seconds", type=float, default=1.0, show_default=True)
@click.option("--sr", type=int, default=48000, show_default=True)
@guarded
def bench(seconds, sr):
    """Measure single-core render speed; prints JSON."""
    res = bench_mod.render_benchmark(seconds, EngineConfig(sr=sr),
                                     seed=_resolve_seed(0))
    click.echo(json.dumps(res.to_dict()))


if __name__ == "__main__":
    main()
