// Plays received blocks gap-free by scheduling each one at a running
// play head. Browsers refuse to start audio outside a user gesture, so
// the context is created lazily from resume().
export class AudioPlayer {
  private ctx: AudioContext | null = null;
  private playhead = 0;

  constructor(private sr: number) {}

  get running(): boolean {
    return this.ctx !== null && this.ctx.state === "running";
  }

  async resume(): Promise<void> {
    if (this.ctx === null) {
      this.ctx = new AudioContext({ sampleRate: this.sr });
    }
    await this.ctx.resume();
  }

  push(samples: Float32Array): void {
    if (this.ctx === null || this.ctx.state !== "running") {
      return;
    }
    const buf = this.ctx.createBuffer(1, samples.length, this.sr);
    buf.getChannelData(0).set(samples);
    const src = this.ctx.createBufferSource();
    src.buffer = buf;
    src.connect(this.ctx.destination);
    const now = this.ctx.currentTime;
    if (this.playhead < now + 0.02) {
      // queue drained (startup or a network stall): restart slightly ahead
      this.playhead = now + 0.06;
    }
    src.start(this.playhead);
    this.playhead += samples.length / this.sr;
  }
}
