/** Geometry for the 2D satisfactory-arc view.
 *
 * The server reports satisfactory angle ranges as alternating
 * [theta, "start"|"end"] boundaries over the first quadrant. This module
 * turns them into SVG path data and places the query ray. Pure display
 * math; no fairness decisions are made here.
 */

export interface Arc {
  startAngle: number;
  endAngle: number;
}

export function arcsFromBoundaries(
  boundaries: [number, "start" | "end"][],
): Arc[] {
  const arcs: Arc[] = [];
  for (let i = 0; i + 1 < boundaries.length; i += 2) {
    const [start, startKind] = boundaries[i];
    const [end, endKind] = boundaries[i + 1];
    if (startKind !== "start" || endKind !== "end" || end < start) {
      throw new Error("malformed boundary list");
    }
    arcs.push({ startAngle: start, endAngle: end });
  }
  return arcs;
}

/** SVG coordinates grow downward, so angle t maps to (cos t, -sin t). */
export function rayPoint(
  angle: number,
  radius: number,
  cx: number,
  cy: number,
): { x: number; y: number } {
  return { x: cx + radius * Math.cos(angle), y: cy - radius * Math.sin(angle) };
}

export function arcPath(
  arc: Arc,
  radius: number,
  cx: number,
  cy: number,
): string {
  const a = rayPoint(arc.startAngle, radius, cx, cy);
  const b = rayPoint(arc.endAngle, radius, cx, cy);
  const largeArc = arc.endAngle - arc.startAngle > Math.PI ? 1 : 0;
  // sweep flag 0: counter-clockwise in SVG's y-down frame
  return (
    `M ${cx} ${cy} L ${a.x.toFixed(3)} ${a.y.toFixed(3)} ` +
    `A ${radius} ${radius} 0 ${largeArc} 0 ${b.x.toFixed(3)} ${b.y.toFixed(3)} Z`
  );
}

export function weightsToAngle(weights: number[]): number {
  if (weights.length !== 2) throw new Error("angle view needs 2 weights");
  return Math.atan2(weights[1], weights[0]);
}
