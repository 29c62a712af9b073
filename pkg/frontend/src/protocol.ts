// Wire types for the voice service. Text frames are newline-terminated
// JSON (control in, state/error out); audio arrives as binary frames of
// little-endian int16, one frame per rendered block.

export interface UiControlState {
  r: number;
  theta: number;
  fingers: number[];
  f0: number;
  tenseness: number;
  voiced: boolean;
}

export interface ControlMessage extends UiControlState {
  type: "control";
}

export type ConstrictionClass = "open" | "fricative" | "occluded";

export interface ConstrictionInfo {
  index: number;
  area: number;
  class: ConstrictionClass;
}

export interface StateMessage {
  type: "state";
  areas: number[];
  constriction: ConstrictionInfo;
  rms: number;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage = StateMessage | ErrorMessage;

export const DEFAULT_CONTROLS: UiControlState = {
  r: 0.5,
  theta: 0,
  fingers: [0, 0, 0, 0, 0],
  f0: 140,
  tenseness: 0.6,
  voiced: true,
};

const clamp = (v: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, v));

// The server rejects out-of-range fields outright rather than clamping,
// so the client clamps before anything goes on the wire.
export function clampControls(s: UiControlState): UiControlState {
  return {
    r: clamp(s.r, 0, 1),
    theta: clamp(s.theta, -1, 1),
    fingers: s.fingers.slice(0, 5).map((f) => clamp(f, 0, 1)),
    f0: clamp(s.f0, 20, 1000),
    tenseness: clamp(s.tenseness, 0, 1),
    voiced: s.voiced,
  };
}

export function encodeControl(s: UiControlState): string {
  const msg: ControlMessage = {
    type: "control",
    r: s.r,
    theta: s.theta,
    fingers: s.fingers.slice(0, 5),
    f0: s.f0,
    tenseness: s.tenseness,
    voiced: s.voiced,
  };
  return JSON.stringify(msg) + "\n";
}

export function decodeControl(text: string): UiControlState {
  const d = JSON.parse(text);
  if (d.type !== "control") {
    throw new Error(`expected a control message, got ${String(d.type)}`);
  }
  const { r, theta, fingers, f0, tenseness, voiced } = d;
  return { r, theta, fingers, f0, tenseness, voiced };
}

export function decodeServerMessage(text: string): ServerMessage {
  const d = JSON.parse(text);
  if (d.type === "state" || d.type === "error") {
    return d as ServerMessage;
  }
  throw new Error(`unknown message type ${String(d.type)}`);
}

export const PCM_SCALE = 32767;

export function decodeAudioBlock(buf: ArrayBuffer): Float32Array {
  const view = new DataView(buf);
  const n = buf.byteLength >> 1;
  const out = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    out[i] = view.getInt16(2 * i, true) / PCM_SCALE;
  }
  return out;
}
