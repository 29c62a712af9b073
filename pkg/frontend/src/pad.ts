// The XY pad stands in for the wrist: vertical position is flexion (r,
// jaw opening), horizontal is deviation (theta, tongue front/back).
// Both directions of the mapping live here so the dot drawn for a
// control state lands back under the pointer that produced it.

export interface PadPoint {
  x: number;
  y: number;
}

// Pad coordinates are normalized to [0,1] x [0,1]; center maps to
// (r=0.5, theta=0).
export function padToControl(x: number, y: number): { r: number; theta: number } {
  return { r: y, theta: 2 * x - 1 };
}

export function controlToPad(r: number, theta: number): PadPoint {
  return { x: (theta + 1) / 2, y: r };
}
