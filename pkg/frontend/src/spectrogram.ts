import { fftInPlace } from "./fft.js";

export const FFT_SIZE = 1024;
export const HOP = FFT_SIZE / 2; // 50% overlap
export const WINDOW_SECONDS = 5;
export const DB_FLOOR = -90;
export const DB_CEIL = -10;

export function columnsPerWindow(sr: number): number {
  return Math.ceil((WINDOW_SECONDS * sr) / HOP);
}

function hann(n: number): Float32Array {
  const w = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    w[i] = 0.5 * (1 - Math.cos((2 * Math.PI * i) / n));
  }
  return w;
}

// Turns the incoming sample stream into log-magnitude spectrum columns,
// one per hop. Carries a window's worth of history so block boundaries
// in the stream do not affect the analysis.
export class Spectrogram {
  readonly bins = FFT_SIZE / 2;
  private window = hann(FFT_SIZE);
  private buf = new Float32Array(FFT_SIZE);
  private filled = 0;
  private re = new Float32Array(FFT_SIZE);
  private im = new Float32Array(FFT_SIZE);

  // Returns the columns completed by this chunk, oldest first. Each is
  // bins long, in dB (20 log10 |X|).
  push(samples: Float32Array): Float32Array[] {
    const cols: Float32Array[] = [];
    let offset = 0;
    while (offset < samples.length) {
      const take = Math.min(FFT_SIZE - this.filled, samples.length - offset);
      this.buf.set(samples.subarray(offset, offset + take), this.filled);
      this.filled += take;
      offset += take;
      if (this.filled === FFT_SIZE) {
        cols.push(this.transform());
        this.buf.copyWithin(0, HOP); // keep the newest half for the overlap
        this.filled = FFT_SIZE - HOP;
      }
    }
    return cols;
  }

  private transform(): Float32Array {
    for (let i = 0; i < FFT_SIZE; i++) {
      this.re[i] = this.buf[i] * this.window[i];
      this.im[i] = 0;
    }
    fftInPlace(this.re, this.im);
    const col = new Float32Array(this.bins);
    for (let i = 0; i < this.bins; i++) {
      const mag = Math.hypot(this.re[i], this.im[i]);
      col[i] = 20 * Math.log10(mag + 1e-12);
    }
    return col;
  }
}
