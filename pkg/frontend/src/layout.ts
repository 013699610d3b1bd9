/**
 * Zone geometry, mirrored from the engine so client-side hit areas and
 * engine-side zone attribution agree exactly after normalization.
 *
 * The screen is a 3x3 grid of equal cells in normalized [0,1]^2
 * coordinates; the center cell stays empty and the 8 surrounding cells,
 * shrunk by a 5% gap margin per side, are the zones (row-major order,
 * skipping the center).
 */

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export const ZONE_COUNT = 8;
export const DEFAULT_GAP_FRACTION = 0.05;

const THIRD = 1 / 3;

export function zoneRects(gapFraction: number = DEFAULT_GAP_FRACTION): Rect[] {
  const margin = gapFraction * THIRD;
  const rects: Rect[] = [];
  for (let row = 0; row < 3; row++) {
    for (let col = 0; col < 3; col++) {
      if (row === 1 && col === 1) continue;
      rects.push({
        x0: col * THIRD + margin,
        y0: row * THIRD + margin,
        x1: (col + 1) * THIRD - margin,
        y1: (row + 1) * THIRD - margin,
      });
    }
  }
  return rects;
}

export function centerRect(): Rect {
  return { x0: THIRD, y0: THIRD, x1: 2 * THIRD, y1: 2 * THIRD };
}

export function contains(rect: Rect, x: number, y: number): boolean {
  return rect.x0 <= x && x <= rect.x1 && rect.y0 <= y && y <= rect.y1;
}

/** Zone id 1..8 containing the point, or null for the center and gaps. */
export function zoneAt(x: number, y: number, gapFraction?: number): number | null {
  if (x < 0 || x > 1 || y < 0 || y > 1) {
    throw new RangeError(`point (${x}, ${y}) outside [0,1]^2`);
  }
  const rects = zoneRects(gapFraction);
  for (let i = 0; i < rects.length; i++) {
    if (contains(rects[i]!, x, y)) return i + 1;
  }
  return null;
}
