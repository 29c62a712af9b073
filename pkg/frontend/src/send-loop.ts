import { UiControlState } from "./protocol.js";

// Pointer and slider events fire far faster than the wire wants. Cap
// outgoing control messages at maxPerSecond, always delivering the most
// recent value: the first change in a quiet period goes out immediately,
// later ones coalesce into one trailing send.
export class ControlSender {
  readonly minIntervalMs: number;
  private lastSent = -Infinity;
  private pending: UiControlState | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private send: (s: UiControlState) => void,
    maxPerSecond = 100,
    private now: () => number = Date.now,
  ) {
    this.minIntervalMs = 1000 / maxPerSecond;
  }

  update(s: UiControlState): void {
    const wait = this.lastSent + this.minIntervalMs - this.now();
    if (wait <= 0) {
      this.fire(s);
      return;
    }
    this.pending = s;
    if (this.timer === null) {
      this.timer = setTimeout(() => {
        this.timer = null;
        if (this.pending !== null) {
          const next = this.pending;
          this.fire(next);
        }
      }, wait);
    }
  }

  private fire(s: UiControlState): void {
    this.pending = null;
    this.lastSent = this.now();
    this.send(s);
  }

  dispose(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.pending = null;
  }
}
