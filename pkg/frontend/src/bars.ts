/** Top-k group-count bars against the configured oracle bounds.
 *
 * Bound resolution mirrors how the service documents its config: a
 * constraint's k resolves against the dataset size (numbers in (0, 1) and
 * "30%" strings are fractions, k rounds down), then min rounds up and max
 * rounds down against that k. Resolution here is display-only; verdicts
 * still come exclusively from the service.
 */

import { Meta, OracleConstraint, RankResponse } from "./api.js";

export interface GroupBar {
  attr: string;
  group: number;
  label: string;
  count: number;
  k: number;
  min: number | null;
  max: number | null;
}

export function resolveFraction(
  value: number | string,
  total: number,
  roundUp: boolean,
): number {
  let frac: number | null = null;
  if (typeof value === "string") {
    const m = value.trim().match(/^([0-9.]+)\s*%$/);
    if (!m) throw new Error(`bad bound: ${value}`);
    frac = parseFloat(m[1]) / 100;
  } else if (value > 0 && value < 1) {
    frac = value;
  } else {
    return Math.trunc(value);
  }
  const raw = frac * total;
  return roundUp ? Math.ceil(raw) : Math.floor(raw);
}

/** The top-k prefix length a constraint is evaluated on. */
export function constraintTopK(c: OracleConstraint, n: number): number {
  return resolveFraction(c.k, n, false);
}

/** The table length that matches the oracle: the first constraint's k. */
export function defaultTableK(meta: Meta): number {
  const constraints = meta.oracle?.constraints ?? [];
  if (constraints.length > 0 && meta.n !== undefined) {
    return Math.max(1, constraintTopK(constraints[0], meta.n));
  }
  return Math.min(10, meta.n ?? 10);
}

function labelFor(meta: Meta, attr: string, group: number): string {
  const book = meta.codebooks?.[attr];
  if (book) {
    for (const [name, code] of Object.entries(book)) {
      if (code === group) return name;
    }
  }
  return String(group);
}

export function groupBars(meta: Meta, rank: RankResponse): GroupBar[] {
  const constraints: OracleConstraint[] = meta.oracle?.constraints ?? [];
  const n = meta.n ?? rank.k;
  const bars: GroupBar[] = [];
  for (const c of constraints) {
    const k = constraintTopK(c, n);
    const count = rank.group_counts[c.attr]?.[String(c.group)] ?? 0;
    bars.push({
      attr: c.attr,
      group: c.group,
      label: labelFor(meta, c.attr, c.group),
      count,
      k,
      min: c.min === null || c.min === undefined
        ? null
        : resolveFraction(c.min, k, true),
      max: c.max === null || c.max === undefined
        ? null
        : resolveFraction(c.max, k, false),
    });
  }
  return bars;
}

export function barSatisfied(bar: GroupBar): boolean {
  if (bar.min !== null && bar.count < bar.min) return false;
  if (bar.max !== null && bar.count > bar.max) return false;
  return true;
}
