import { describe, expect, it } from "vitest";

import { arcPath, arcsFromBoundaries, rayPoint, weightsToAngle } from "../src/arcs.js";

describe("arcsFromBoundaries", () => {
  it("pairs alternating boundaries into arcs", () => {
    const arcs = arcsFromBoundaries([
      [0.1, "start"],
      [0.4, "end"],
      [0.9, "start"],
      [1.2, "end"],
    ]);
    expect(arcs).toEqual([
      { startAngle: 0.1, endAngle: 0.4 },
      { startAngle: 0.9, endAngle: 1.2 },
    ]);
  });

  it("handles the everything-satisfactory case", () => {
    const arcs = arcsFromBoundaries([
      [0, "start"],
      [Math.PI / 2, "end"],
    ]);
    expect(arcs).toEqual([{ startAngle: 0, endAngle: Math.PI / 2 }]);
  });

  it("returns no arcs for an empty boundary list", () => {
    expect(arcsFromBoundaries([])).toEqual([]);
  });

  it("rejects malformed boundary lists", () => {
    expect(() =>
      arcsFromBoundaries([
        [0.4, "end"],
        [0.1, "start"],
      ]),
    ).toThrow();
    expect(() =>
      arcsFromBoundaries([
        [0.4, "start"],
        [0.1, "end"],
      ]),
    ).toThrow();
  });
});

describe("ray geometry", () => {
  it("maps angle 0 to the x axis and pi/2 straight up", () => {
    expect(rayPoint(0, 10, 0, 100)).toEqual({ x: 10, y: 100 });
    const up = rayPoint(Math.PI / 2, 10, 0, 100);
    expect(up.x).toBeCloseTo(0, 12);
    expect(up.y).toBeCloseTo(90, 12);
  });

  it("computes the query angle from two weights", () => {
    expect(weightsToAngle([1, 1])).toBeCloseTo(Math.PI / 4, 12);
    expect(weightsToAngle([1, 0])).toBe(0);
    expect(() => weightsToAngle([1, 1, 1])).toThrow();
  });

  it("emits a closed wedge path from the origin", () => {
    const d = arcPath({ startAngle: 0, endAngle: Math.PI / 2 }, 100, 0, 200);
    expect(d.startsWith("M 0 200 L 100.000 200.000 A 100 100 0 0 0")).toBe(
      true,
    );
    expect(d.endsWith("Z")).toBe(true);
  });
});
