import { ConstrictionInfo } from "./protocol.js";

export interface Bar {
  x: number;
  y: number;
  w: number;
  h: number;
}

// Widest opening the geometry can produce is the squared palate dome,
// a touch over 6 cm^2; a fixed scale keeps closures visually absolute.
export const FULL_AREA = 7;

// One bar per tube section, glottis on the left, lips on the right,
// tall bars for open sections.
export function barGeometry(areas: number[], width: number, height: number): Bar[] {
  const n = areas.length;
  const w = width / n;
  return areas.map((a, i) => {
    const frac = Math.min(Math.max(a, 0), FULL_AREA) / FULL_AREA;
    const h = frac * height;
    return { x: i * w, y: height - h, w, h };
  });
}

// The station to call out in the display: only a true closure gets the
// highlight, a fricative-grade narrowing is shown by its bar alone.
export function highlightIndex(c: ConstrictionInfo): number | null {
  return c.class === "occluded" ? c.index : null;
}

const BAR_COLOR = "#4a7fb5";
const FRICATIVE_COLOR = "#c78a3b";
const OCCLUDED_COLOR = "#c0392b";
const BACKGROUND = "#10151c";

export function drawTract(
  ctx: CanvasRenderingContext2D,
  areas: number[],
  constriction: ConstrictionInfo,
  width: number,
  height: number,
): void {
  ctx.fillStyle = BACKGROUND;
  ctx.fillRect(0, 0, width, height);
  const bars = barGeometry(areas, width, height);
  const marked = highlightIndex(constriction);
  for (let i = 0; i < bars.length; i++) {
    const b = bars[i];
    if (i === marked) {
      ctx.fillStyle = OCCLUDED_COLOR;
      // a sealed section has no height; flag the full column instead
      ctx.fillRect(b.x, 0, b.w, height);
    } else if (constriction.class === "fricative" && i === constriction.index) {
      ctx.fillStyle = FRICATIVE_COLOR;
      ctx.fillRect(b.x + 1, b.y, Math.max(b.w - 2, 1), b.h);
    } else {
      ctx.fillStyle = BAR_COLOR;
      ctx.fillRect(b.x + 1, b.y, Math.max(b.w - 2, 1), b.h);
    }
  }
}
