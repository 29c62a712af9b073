"""HTTP/websocket service around the voice engine.

One engine per websocket session, created with a fresh seed, so two
browsers never share glottal noise state. The socket carries two kinds of
frames: newline-terminated JSON text (control in, state/error out) and
binary little-endian int16 audio, one frame per rendered block.

The REST side exposes the offline paths (render a gesture file, analyze a
WAV, build a calibration) for thin clients that do not want to import the
package.
"""

import asyncio
import base64
import binascii
import io
import itertools
import json
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import ValidationError

from .. import analysis, audio_io
from ..config import EngineConfig
from ..engine import ControlSnapshot, VoiceEngine, concat_blocks
from ..errors import TractForgeError
from ..glottis import GlottalControls
from ..kinematics import (
    ArticulatoryState,
    Calibration,
    calibrate,
    parse_gesture_csv,
    validate_layout,
)
from .models import (
    AnalyzeRequest,
    AnalyzeResponse,
    CalibrateRequest,
    CalibrateResponse,
    ConstrictionInfo,
    ControlMessage,
    ErrorMessage,
    RenderRequest,
    RenderResponse,
    StateMessage,
)

_FALLBACK_PAGE = """<!doctype html>
<meta charset="utf-8">
<title>tractforge</title>
<style>body{font-family:system-ui;margin:4em auto;max-width:40em;color:#333}</style>
<h1>tractforge</h1>
<p>The service is running. The browser UI has not been built; run
<code>npm install &amp;&amp; npm run build</code> in <code>frontend/</code>
and restart, or talk to the websocket at <code>/ws</code> directly.</p>
"""


def _find_ui_dist() -> Path | None:
    root = Path(__file__).resolve().parents[3]
    dist = root / "frontend" / "dist"
    if (dist / "index.html").is_file():
        return dist
    return None


def _snapshot_from(msg: ControlMessage) -> ControlSnapshot:
    return ControlSnapshot(
        articulation=ArticulatoryState(
            r=msg.r, theta=msg.theta,
            fingers=np.array(msg.fingers, dtype=float)),
        glottal=GlottalControls(f0=msg.f0, tenseness=msg.tenseness,
                                voiced=msg.voiced),
    )


def _decode_wav_b64(data: str):
    try:
        raw = base64.b64decode(data, validate=True)
    except (binascii.Error, ValueError) as e:
        raise TractForgeError(f"bad base64 audio: {e}") from e
    return audio_io.read_wav(io.BytesIO(raw))


def _encode_wav_b64(samples, sr: int) -> str:
    buf = io.BytesIO()
    audio_io.write_wav(buf, samples, sr)
    return base64.b64encode(buf.getvalue()).decode("ascii")


class _Session:
    """State pump for one websocket client.

    A single coroutine owns the socket: it renders and sends one block,
    then drains whatever control messages arrived while the stream is
    paced out. Keeping it single-task means a disconnect or cancellation
    unwinds in one step with nothing left awaiting the socket.
    """

    def __init__(self, ws: WebSocket, engine: VoiceEngine):
        self.ws = ws
        self.engine = engine

    async def _handle_text(self, text: str) -> None:
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                msg = ControlMessage.model_validate_json(line)
            except ValidationError as e:
                err = ErrorMessage(
                    message=f"bad control message: {e.errors()[0]['msg']}")
                await self._send_json(err)
                continue
            self.engine.push_control(_snapshot_from(msg))

    async def _send_block(self) -> None:
        audio, info = self.engine.render_block()
        state = StateMessage(
            areas=[round(float(a), 4) for a in info.areas],
            constriction=ConstrictionInfo(
                index=info.constriction.index,
                area=round(info.constriction.area, 4),
                classification=info.constriction.classification),
            rms=round(info.rms, 5),
        )
        await self._send_json(state)
        pcm = np.round(np.clip(audio.samples, -1, 1) * 32767).astype("<i2")
        await self.ws.send_bytes(pcm.tobytes())

    async def _send_json(self, model) -> None:
        await self.ws.send_text(model.model_dump_json(by_alias=True) + "\n")

    async def run(self) -> None:
        block_s = self.engine.block / self.engine.sr
        loop = asyncio.get_running_loop()
        recv = asyncio.ensure_future(self.ws.receive())
        deadline = loop.time()
        try:
            while True:
                await self._send_block()
                # pace to real time; bound the debt if rendering fell behind
                deadline = max(deadline + block_s, loop.time() - 4 * block_s)
                while True:
                    wait_s = deadline - loop.time()
                    done, _ = await asyncio.wait({recv}, timeout=max(0.0, wait_s))
                    if not done:
                        break
                    msg = recv.result()
                    if msg["type"] == "websocket.disconnect":
                        return
                    if msg.get("text") is not None:
                        await self._handle_text(msg["text"])
                    recv = asyncio.ensure_future(self.ws.receive())
                    if wait_s <= 0:
                        break
        finally:
            recv.cancel()


def create_app(sr: int = 48000, base_seed: int = 0) -> FastAPI:
    app = FastAPI(title="tractforge")
    session_seeds = itertools.count(base_seed)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        cfg = EngineConfig(sr=sr)
        engine = VoiceEngine(cfg, seed=next(session_seeds))
        try:
            await _Session(ws, engine).run()
        except (WebSocketDisconnect, RuntimeError):
            # a disconnect mid-send surfaces as RuntimeError from the ASGI layer
            pass

    @app.post("/api/render", response_model=RenderResponse)
    async def api_render(req: RenderRequest) -> RenderResponse:
        try:
            frames = parse_gesture_csv(req.gesture_csv)
            calib = (Calibration.from_dict(req.calib)
                     if req.calib is not None else Calibration.identity())
            layout = (validate_layout(req.layout)
                      if req.layout is not None else None)
            engine = VoiceEngine(EngineConfig(sr=req.sr), seed=req.seed)
            samples = concat_blocks(engine.replay(frames, calib=calib, layout=layout))
        except TractForgeError as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        return RenderResponse(
            wav_base64=_encode_wav_b64(samples, req.sr),
            duration_s=len(samples) / req.sr,
            peak=float(np.max(np.abs(samples))) if len(samples) else 0.0,
            sr=req.sr,
        )

    @app.post("/api/analyze", response_model=AnalyzeResponse)
    async def api_analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        try:
            samples, wav_sr = _decode_wav_b64(req.wav_base64)
            samples, wav_sr = analysis.to_analysis_rate(samples, wav_sr)
            est = analysis.estimate_formants(samples, wav_sr, count=req.count)
        except TractForgeError as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        return AnalyzeResponse(**est.to_dict())

    @app.post("/api/calibrate", response_model=CalibrateResponse)
    async def api_calibrate(req: CalibrateRequest) -> CalibrateResponse:
        try:
            frames = parse_gesture_csv(req.sweep_csv)
            calib = calibrate(frames)
        except TractForgeError as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        return CalibrateResponse(**calib.to_dict())

    dist = _find_ui_dist()
    if dist is not None:
        app.mount("/", StaticFiles(directory=dist, html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        async def index() -> str:
            return _FALLBACK_PAGE

    return app
