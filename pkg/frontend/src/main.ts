/** DOM wiring for the design dashboard. All state transitions live in
 * DesignSession; this file only renders and forwards input events. */

import { Client, Meta, QueryResponse } from "./api.js";
import { arcPath, arcsFromBoundaries, rayPoint, weightsToAngle } from "./arcs.js";
import { barSatisfied, defaultTableK, groupBars } from "./bars.js";
import { DesignSession, SessionView } from "./session.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const ARC_SIZE = 320;
const ARC_RADIUS = 300;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function banner(kind: string, text: string): HTMLElement {
  const div = el("div", `banner banner-${kind}`, text);
  return div;
}

class Dashboard {
  private session!: DesignSession;
  private meta!: Meta;
  private root: HTMLElement;
  private sliders: HTMLInputElement[] = [];
  private readouts: HTMLElement[] = [];

  constructor(private client: Client, rootId: string) {
    this.root = document.getElementById(rootId)!;
  }

  async start(): Promise<void> {
    this.meta = await this.client.meta();
    if (this.meta.status === "building") {
      this.root.replaceChildren(
        banner("building", "Index is building, retrying shortly"),
      );
      setTimeout(() => void this.start(), 1000);
      return;
    }
    if (this.meta.status === "idle" || this.meta.d === undefined) {
      this.root.replaceChildren(banner("error", "No index loaded"));
      return;
    }
    const d = this.meta.d;
    const weights = new Array(d).fill(1);
    this.session = new DesignSession(
      this.client,
      weights,
      this.meta.fingerprint ?? "",
      defaultTableK(this.meta),
    );
    this.buildLayout();
    this.session.subscribe((view) => this.render(view));
    this.session.release(weights);
  }

  private buildLayout(): void {
    this.root.replaceChildren();
    const names = this.meta.attr_names ?? [];
    const panel = el("div", "sliders");
    this.sliders = [];
    this.readouts = [];
    for (let i = 0; i < (this.meta.d ?? 0); i++) {
      const row = el("div", "slider-row");
      row.appendChild(el("label", "slider-label", names[i] ?? `w${i}`));
      const input = el("input") as HTMLInputElement;
      input.type = "range";
      input.min = "0";
      input.max = "2";
      input.step = "0.01";
      input.value = "1";
      input.addEventListener("input", () => this.session.drag(this.read()));
      input.addEventListener("change", () => this.session.release(this.read()));
      this.sliders.push(input);
      row.appendChild(input);
      const out = el("span", "slider-value", "1.00");
      this.readouts.push(out);
      row.appendChild(out);
      panel.appendChild(row);
    }
    this.root.appendChild(panel);
    this.root.appendChild(el("div", "verdict"));
    this.root.appendChild(el("div", "bars"));
    this.root.appendChild(el("div", "arcview"));
    this.root.appendChild(el("div", "topk"));
  }

  private read(): number[] {
    return this.sliders.map((s) => parseFloat(s.value));
  }

  private snap(weights: number[]): void {
    const scale = Math.max(...weights, 1e-9);
    weights.forEach((w, i) => {
      // keep slider positions within range while preserving the direction
      this.sliders[i].value = (scale > 2 ? (2 * w) / scale : w).toFixed(4);
    });
  }

  private render(view: SessionView): void {
    const norm = this.session.normalizedWeights();
    view.weights.forEach((w, i) => {
      this.readouts[i].textContent = `${w.toFixed(2)} (${norm[i].toFixed(2)})`;
    });
    this.renderVerdict(view);
    this.renderBars(view);
    this.renderTopK(view);
    if (this.meta.mode === "2d") void this.renderArcs(view);
  }

  private renderVerdict(view: SessionView): void {
    const box = this.root.querySelector(".verdict")!;
    box.replaceChildren();
    if (view.error) {
      box.appendChild(banner("error", view.error));
      return;
    }
    const v: QueryResponse | null = view.verdict;
    if (!v) return;
    if (v.unsatisfiable) {
      box.appendChild(
        banner("unsat", "No satisfactory function exists for this oracle"),
      );
      return;
    }
    const badge = el(
      "div",
      v.satisfactory_as_is ? "badge badge-ok" : "badge badge-bad",
      v.satisfactory_as_is ? "satisfactory" : "unsatisfactory",
    );
    box.appendChild(badge);
    if (!v.satisfactory_as_is && v.suggestion) {
      const dist = v.distance === null ? "" : ` (${v.distance.toFixed(4)} rad)`;
      box.appendChild(
        el(
          "div",
          "suggestion",
          `nearest satisfactory: [${v.suggestion
            .map((x) => x.toFixed(3))
            .join(", ")}]${dist}`,
        ),
      );
      const apply = el("button", "apply", "apply");
      apply.addEventListener("click", () => {
        if (v.suggestion) this.snap([...v.suggestion]);
        this.session.applySuggestion();
      });
      box.appendChild(apply);
    }
  }

  private renderBars(view: SessionView): void {
    const box = this.root.querySelector(".bars")!;
    box.replaceChildren();
    if (!view.rank) return;
    for (const bar of groupBars(this.meta, view.rank)) {
      const row = el("div", "bar-row");
      row.appendChild(
        el("span", "bar-label", `${bar.attr}=${bar.label} in top ${bar.k}`),
      );
      const track = el("div", "bar-track");
      const fill = el(
        "div",
        barSatisfied(bar) ? "bar-fill ok" : "bar-fill bad",
      );
      fill.style.width = `${(100 * bar.count) / bar.k}%`;
      track.appendChild(fill);
      for (const [bound, cls] of [
        [bar.min, "bar-min"],
        [bar.max, "bar-max"],
      ] as const) {
        if (bound !== null) {
          const mark = el("div", `bar-bound ${cls}`);
          mark.style.left = `${(100 * bound) / bar.k}%`;
          track.appendChild(mark);
        }
      }
      row.appendChild(track);
      row.appendChild(el("span", "bar-count", `${bar.count}`));
      box.appendChild(row);
    }
  }

  private renderTopK(view: SessionView): void {
    const box = this.root.querySelector(".topk")!;
    box.replaceChildren();
    if (!view.rank) return;
    const table = el("table");
    const head = el("tr");
    for (const h of ["#", "id", "score", "groups"]) {
      head.appendChild(el("th", undefined, h));
    }
    table.appendChild(head);
    view.rank.items.forEach((item, i) => {
      const tr = el("tr");
      tr.appendChild(el("td", undefined, String(i + 1)));
      tr.appendChild(el("td", undefined, String(item.id)));
      tr.appendChild(el("td", undefined, item.score.toFixed(4)));
      tr.appendChild(
        el(
          "td",
          undefined,
          Object.entries(item.groups)
            .map(([a, g]) => `${a}=${g}`)
            .join(", "),
        ),
      );
      table.appendChild(tr);
    });
    box.appendChild(table);
  }

  private async renderArcs(view: SessionView): Promise<void> {
    const box = this.root.querySelector(".arcview")!;
    let svg = box.querySelector("svg");
    if (!svg) {
      svg = document.createElementNS(SVG_NS, "svg");
      svg.setAttribute("width", String(ARC_SIZE));
      svg.setAttribute("height", String(ARC_SIZE));
      box.appendChild(svg);
      try {
        const doc = await this.client.ranges2d();
        for (const arc of arcsFromBoundaries(doc.boundaries)) {
          const path = document.createElementNS(SVG_NS, "path");
          path.setAttribute("d", arcPath(arc, ARC_RADIUS, 0, ARC_SIZE));
          path.setAttribute("class", "arc-sat");
          svg.appendChild(path);
        }
      } catch {
        /* md mode or transient error: no arcs to draw */
      }
      const ray = document.createElementNS(SVG_NS, "line");
      ray.setAttribute("class", "query-ray");
      svg.appendChild(ray);
    }
    const ray = svg.querySelector(".query-ray")!;
    const angle = weightsToAngle(view.weights.slice(0, 2));
    const tip = rayPoint(angle, ARC_RADIUS, 0, ARC_SIZE);
    ray.setAttribute("x1", "0");
    ray.setAttribute("y1", String(ARC_SIZE));
    ray.setAttribute("x2", tip.x.toFixed(2));
    ray.setAttribute("y2", tip.y.toFixed(2));
  }
}

export function boot(base = ""): void {
  const dash = new Dashboard(new Client(base), "app");
  void dash.start();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
