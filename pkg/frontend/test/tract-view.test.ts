import { describe, expect, it } from "vitest";
import { FULL_AREA, barGeometry, highlightIndex } from "../src/tract-view.js";
import { ConstrictionInfo } from "../src/protocol.js";

describe("bar geometry", () => {
  const areas = Array.from({ length: 44 }, (_, i) => (i % 7) + 0.5);

  it("lays out one bar per section across the full width", () => {
    const bars = barGeometry(areas, 440, 150);
    expect(bars).toHaveLength(44);
    expect(bars[0].x).toBe(0);
    expect(bars[43].x + bars[43].w).toBeCloseTo(440, 9);
    for (let i = 1; i < bars.length; i++) {
      expect(bars[i].x).toBeGreaterThan(bars[i - 1].x);
    }
  });

  it("scales bar height by area and stays inside the canvas", () => {
    const bars = barGeometry([0, FULL_AREA / 2, FULL_AREA, 2 * FULL_AREA], 100, 80);
    expect(bars[0].h).toBe(0);
    expect(bars[1].h).toBeCloseTo(40, 9);
    expect(bars[2].h).toBe(80);
    expect(bars[3].h).toBe(80); // clamped, never taller than the canvas
    for (const b of bars) {
      expect(b.y).toBeGreaterThanOrEqual(0);
      expect(b.y + b.h).toBeLessThanOrEqual(80 + 1e-9);
    }
  });
});

describe("closure highlight", () => {
  const at = (cls: ConstrictionInfo["class"]): ConstrictionInfo => ({
    index: 21,
    area: cls === "occluded" ? 0 : 0.2,
    class: cls,
  });

  it("marks the closure station when the tract is sealed", () => {
    expect(highlightIndex(at("occluded"))).toBe(21);
  });

  it("marks nothing for an open or fricative tract", () => {
    expect(highlightIndex(at("open"))).toBeNull();
    expect(highlightIndex(at("fricative"))).toBeNull();
  });
});
