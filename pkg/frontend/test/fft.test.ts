import { describe, expect, it } from "vitest";
import { fftInPlace } from "../src/fft.js";

function naiveDft(x: Float32Array): { re: Float64Array; im: Float64Array } {
  const n = x.length;
  const re = new Float64Array(n);
  const im = new Float64Array(n);
  for (let k = 0; k < n; k++) {
    for (let t = 0; t < n; t++) {
      const ang = (-2 * Math.PI * k * t) / n;
      re[k] += x[t] * Math.cos(ang);
      im[k] += x[t] * Math.sin(ang);
    }
  }
  return { re, im };
}

describe("fft", () => {
  it("transforms an impulse to a flat spectrum", () => {
    const re = new Float32Array(64);
    const im = new Float32Array(64);
    re[0] = 1;
    fftInPlace(re, im);
    for (let k = 0; k < 64; k++) {
      expect(re[k]).toBeCloseTo(1, 6);
      expect(im[k]).toBeCloseTo(0, 6);
    }
  });

  it("puts a real sine's energy in bins k and n-k", () => {
    const n = 256;
    const k = 19;
    const re = new Float32Array(n);
    const im = new Float32Array(n);
    for (let t = 0; t < n; t++) {
      re[t] = Math.sin((2 * Math.PI * k * t) / n);
    }
    fftInPlace(re, im);
    const mag = Array.from({ length: n }, (_, i) => Math.hypot(re[i], im[i]));
    expect(mag[k]).toBeCloseTo(n / 2, 3);
    expect(mag[n - k]).toBeCloseTo(n / 2, 3);
    for (let i = 0; i < n; i++) {
      if (i !== k && i !== n - k) {
        expect(mag[i]).toBeLessThan(1e-3);
      }
    }
  });

  it("matches a direct DFT on random input", () => {
    let seed = 42;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) & 0x7fffffff;
      return seed / 0x7fffffff - 0.5;
    };
    const n = 128;
    const x = new Float32Array(n);
    for (let t = 0; t < n; t++) {
      x[t] = rand();
    }
    const re = Float32Array.from(x);
    const im = new Float32Array(n);
    fftInPlace(re, im);
    const ref = naiveDft(x);
    for (let kk = 0; kk < n; kk++) {
      expect(Math.abs(re[kk] - ref.re[kk])).toBeLessThan(1e-3);
      expect(Math.abs(im[kk] - ref.im[kk])).toBeLessThan(1e-3);
    }
  });

  it("rejects lengths that are not a power of two", () => {
    expect(() => fftInPlace(new Float32Array(100), new Float32Array(100))).toThrow(/power of two/);
    expect(() => fftInPlace(new Float32Array(64), new Float32Array(32))).toThrow();
  });
});
