import {
  DEFAULT_CONTROLS,
  StateMessage,
  UiControlState,
  clampControls,
} from "./protocol.js";
import { controlToPad, padToControl } from "./pad.js";
import { ControlSender } from "./send-loop.js";
import { AudioPlayer } from "./audio-player.js";
import { VoiceClient } from "./ws-client.js";
import { DB_CEIL, DB_FLOOR, Spectrogram, columnsPerWindow } from "./spectrogram.js";
import { drawTract } from "./tract-view.js";

// Matches the sample rate `tractforge serve` runs the session engine at.
const SERVER_SR = 48000;
const FINGER_NAMES = ["thumb", "index", "middle", "ring", "pinky"];
const VOWEL_MARKS: Array<[string, number, number]> = [
  ["i", 0.05, 0.7],
  ["a", 0.95, -0.25],
  ["u", 0.12, -0.64],
];

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

function ctx2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const c = canvas.getContext("2d");
  if (c === null) {
    throw new Error("canvas 2d context unavailable");
  }
  return c;
}

const controls: UiControlState = {
  ...DEFAULT_CONTROLS,
  fingers: DEFAULT_CONTROLS.fingers.slice(),
};
let latestState: StateMessage | null = null;

const banner = el<HTMLDivElement>("banner");
const status = el<HTMLDivElement>("status");
const padCanvas = el<HTMLCanvasElement>("pad");
const tractCanvas = el<HTMLCanvasElement>("tract");
const specCanvas = el<HTMLCanvasElement>("spec");
const padCtx = ctx2d(padCanvas);
const tractCtx = ctx2d(tractCanvas);
const specCtx = ctx2d(specCanvas);

const player = new AudioPlayer(SERVER_SR);
const spectrogram = new Spectrogram();
specCanvas.width = columnsPerWindow(SERVER_SR);

const client = new VoiceClient(`ws://${location.host}/ws`, {
  onState(s) {
    latestState = s;
  },
  onAudio(samples) {
    player.push(samples);
    for (const col of spectrogram.push(samples)) {
      paintColumn(col);
    }
  },
  onServerError(message) {
    status.textContent = `server: ${message}`;
  },
  onStatus(connected) {
    banner.classList.toggle("hidden", connected);
    if (connected) {
      pushControls(); // a fresh session starts neutral; restore the UI state
    }
  },
});
const sender = new ControlSender((s) => {
  client.send(s);
});

function pushControls(): void {
  sender.update(clampControls({ ...controls, fingers: controls.fingers.slice() }));
}

// ---- pad ----------------------------------------------------------------

let padDown = false;

function padEvent(ev: PointerEvent): void {
  const rect = padCanvas.getBoundingClientRect();
  const x = Math.min(Math.max((ev.clientX - rect.left) / rect.width, 0), 1);
  const y = Math.min(Math.max((ev.clientY - rect.top) / rect.height, 0), 1);
  const { r, theta } = padToControl(x, y);
  controls.r = r;
  controls.theta = theta;
  pushControls();
}

padCanvas.addEventListener("pointerdown", (ev) => {
  padDown = true;
  padCanvas.setPointerCapture(ev.pointerId);
  padEvent(ev);
});
padCanvas.addEventListener("pointermove", (ev) => {
  if (padDown) {
    padEvent(ev);
  }
});
padCanvas.addEventListener("pointerup", () => {
  padDown = false;
});

function drawPad(): void {
  const w = padCanvas.width;
  const h = padCanvas.height;
  padCtx.fillStyle = "#10151c";
  padCtx.fillRect(0, 0, w, h);
  padCtx.strokeStyle = "#222b36";
  padCtx.beginPath();
  padCtx.moveTo(w / 2, 0);
  padCtx.lineTo(w / 2, h);
  padCtx.moveTo(0, h / 2);
  padCtx.lineTo(w, h / 2);
  padCtx.stroke();
  padCtx.fillStyle = "#51637a";
  padCtx.font = "13px system-ui";
  for (const [name, r, theta] of VOWEL_MARKS) {
    const p = controlToPad(r, theta);
    padCtx.fillText(name, p.x * w - 4, p.y * h + 4);
  }
  const dot = controlToPad(controls.r, controls.theta);
  padCtx.beginPath();
  padCtx.arc(dot.x * w, dot.y * h, 7, 0, 2 * Math.PI);
  padCtx.fillStyle = "#e4b84c";
  padCtx.fill();
}

// ---- fingers ------------------------------------------------------------

const fingerBox = el<HTMLDivElement>("fingers");
const fingerSliders: HTMLInputElement[] = [];
const fingerOutputs: HTMLOutputElement[] = [];
FINGER_NAMES.forEach((name, i) => {
  const label = document.createElement("label");
  label.textContent = `${i + 1} ${name}`;
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = "0";
  slider.max = "1";
  slider.step = "0.01";
  slider.value = "0";
  const out = document.createElement("output");
  out.textContent = "0.00";
  slider.addEventListener("input", () => {
    controls.fingers[i] = parseFloat(slider.value);
    out.textContent = controls.fingers[i].toFixed(2);
    pushControls();
  });
  fingerBox.append(label, slider, out);
  fingerSliders.push(slider);
  fingerOutputs.push(out);
});

// Keys 1-5 press a finger all the way while held, then fall back to the
// slider's setting. Repeat events would re-save the overridden value.
const heldValue: Array<number | null> = [null, null, null, null, null];

window.addEventListener("keydown", (ev) => {
  const i = "12345".indexOf(ev.key);
  if (i < 0 || ev.repeat) {
    return;
  }
  heldValue[i] = controls.fingers[i];
  controls.fingers[i] = 1;
  fingerOutputs[i].textContent = "1.00";
  pushControls();
});
window.addEventListener("keyup", (ev) => {
  const i = "12345".indexOf(ev.key);
  if (i < 0 || heldValue[i] === null) {
    return;
  }
  controls.fingers[i] = heldValue[i] as number;
  heldValue[i] = null;
  fingerOutputs[i].textContent = controls.fingers[i].toFixed(2);
  pushControls();
});

// ---- voice sliders ------------------------------------------------------

const f0 = el<HTMLInputElement>("f0");
const f0Out = el<HTMLOutputElement>("f0-out");
f0.addEventListener("input", () => {
  controls.f0 = parseFloat(f0.value);
  f0Out.textContent = f0.value;
  pushControls();
});

const tenseness = el<HTMLInputElement>("tenseness");
const tensenessOut = el<HTMLOutputElement>("tenseness-out");
tenseness.addEventListener("input", () => {
  controls.tenseness = parseFloat(tenseness.value);
  tensenessOut.textContent = controls.tenseness.toFixed(2);
  pushControls();
});

const voiced = el<HTMLInputElement>("voiced");
voiced.addEventListener("change", () => {
  controls.voiced = voiced.checked;
  pushControls();
});

const audioBtn = el<HTMLButtonElement>("audio-btn");
audioBtn.addEventListener("click", () => {
  void player.resume().then(() => {
    audioBtn.textContent = "audio on";
    audioBtn.disabled = true;
  });
});

// ---- spectrogram painting -----------------------------------------------

function paintColumn(col: Float32Array): void {
  const w = specCanvas.width;
  const h = specCanvas.height;
  const moved = specCtx.getImageData(1, 0, w - 1, h);
  specCtx.putImageData(moved, 0, 0);
  const binsShown = h; // one pixel per bin from the bottom up
  for (let b = 0; b < binsShown && b < col.length; b++) {
    const t = Math.min(Math.max((col[b] - DB_FLOOR) / (DB_CEIL - DB_FLOOR), 0), 1);
    specCtx.fillStyle = `hsl(${250 - 210 * t}, 75%, ${6 + 58 * t}%)`;
    specCtx.fillRect(w - 1, h - 1 - b, 1, 1);
  }
}

// ---- render loop --------------------------------------------------------

function frame(): void {
  drawPad();
  if (latestState !== null) {
    drawTract(
      tractCtx,
      latestState.areas,
      latestState.constriction,
      tractCanvas.width,
      tractCanvas.height,
    );
    const c = latestState.constriction;
    status.textContent =
      `rms ${latestState.rms.toFixed(4)}  constriction ${c.class}` +
      ` @ ${c.index} (${c.area.toFixed(2)} cm²)`;
  }
  requestAnimationFrame(frame);
}

client.connect();
requestAnimationFrame(frame);
