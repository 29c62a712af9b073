"""Wire types for the control/audio protocol and the REST endpoints.

The websocket speaks newline-delimited JSON text frames plus binary audio
frames; these models define the JSON side exactly once so the server and
any test client agree on field names and ranges.
"""

from pydantic import BaseModel, Field


class ControlMessage(BaseModel):
    type: str = "control"
    r: float = Field(0.5, ge=0.0, le=1.0)
    theta: float = Field(0.0, ge=-1.0, le=1.0)
    fingers: list[float] = Field(default_factory=lambda: [0.0] * 5,
                                 min_length=5, max_length=5)
    f0: float = Field(140.0, gt=0.0, le=1000.0)
    tenseness: float = Field(0.6, ge=0.0, le=1.0)
    voiced: bool = True


class ConstrictionInfo(BaseModel):
    index: int
    area: float
    # "class" is reserved in Python; serialize under the wire name
    classification: str = Field(alias="class")

    model_config = {"populate_by_name": True}


class StateMessage(BaseModel):
    type: str = "state"
    areas: list[float]
    constriction: ConstrictionInfo
    rms: float


class ErrorMessage(BaseModel):
    type: str = "error"
    message: str


class RenderRequest(BaseModel):
    gesture_csv: str
    calib: dict | None = None
    layout: dict | None = None
    seed: int = 0
    sr: int = Field(48000, ge=8000, le=96000)


class RenderResponse(BaseModel):
    wav_base64: str
    duration_s: float
    peak: float
    sr: int


class AnalyzeRequest(BaseModel):
    wav_base64: str
    count: int = Field(2, ge=1, le=5)


class AnalyzeResponse(BaseModel):
    f1_hz: float | None
    f2_hz: float | None
    frames: int
    formants: list[dict]


class CalibrateRequest(BaseModel):
    sweep_csv: str


class CalibrateResponse(BaseModel):
    channels: list[list[float]]
