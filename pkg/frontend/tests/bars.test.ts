import { describe, expect, it } from "vitest";

import { Meta, RankResponse } from "../src/api.js";
import {
  barSatisfied,
  constraintTopK,
  defaultTableK,
  groupBars,
  resolveFraction,
} from "../src/bars.js";

const META: Meta = {
  status: "ready",
  progress: {},
  d: 2,
  n: 40,
  mode: "2d",
  fingerprint: "fp",
  attr_names: ["score", "cost"],
  codebooks: { g: { orange: 0, blue: 1 } },
  oracle: {
    mode: "FM1",
    constraints: [{ attr: "g", group: 1, k: 8, min: 2, max: null }],
  },
};

const RANK: RankResponse = {
  k: 8,
  items: [],
  group_counts: { g: { "0": 5, "1": 3 } },
  codebooks: { g: { orange: 0, blue: 1 } },
  fingerprint: "fp",
};

describe("resolveFraction", () => {
  it("treats integers as absolute counts", () => {
    expect(resolveFraction(3, 10, true)).toBe(3);
  });

  it("treats floats in (0,1) as fractions with directed rounding", () => {
    expect(resolveFraction(0.25, 10, true)).toBe(3);
    expect(resolveFraction(0.25, 10, false)).toBe(2);
  });

  it("parses percentage strings", () => {
    expect(resolveFraction("30%", 7000, false)).toBe(2100);
    expect(resolveFraction("60%", 2100, false)).toBe(1260);
    expect(() => resolveFraction("abc", 10, false)).toThrow();
  });
});

describe("constraint resolution", () => {
  it("resolves a constraint's top-k against the dataset size", () => {
    expect(constraintTopK({ attr: "g", group: 1, k: "30%", min: null, max: "60%" }, 40)).toBe(12);
    expect(constraintTopK({ attr: "g", group: 1, k: 8, min: 2, max: null }, 40)).toBe(8);
  });

  it("sizes the table from the first constraint", () => {
    expect(defaultTableK(META)).toBe(8);
    expect(defaultTableK({ status: "ready", progress: {}, n: 5 })).toBe(5);
  });
});

describe("groupBars", () => {
  it("builds one labeled bar per constraint with resolved bounds", () => {
    const bars = groupBars(META, RANK);
    expect(bars).toEqual([
      {
        attr: "g",
        group: 1,
        label: "blue",
        count: 3,
        k: 8,
        min: 2,
        max: null,
      },
    ]);
    expect(barSatisfied(bars[0])).toBe(true);
  });

  it("flags out-of-bounds counts", () => {
    const rank: RankResponse = { ...RANK, group_counts: { g: { "1": 1 } } };
    const [bar] = groupBars(META, rank);
    expect(bar.count).toBe(1);
    expect(barSatisfied(bar)).toBe(false);
  });

  it("counts a missing group as zero", () => {
    const rank: RankResponse = { ...RANK, group_counts: { g: {} } };
    const [bar] = groupBars(META, rank);
    expect(bar.count).toBe(0);
    expect(barSatisfied(bar)).toBe(false);
  });
});
