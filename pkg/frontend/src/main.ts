/** Plain-DOM wiring of the steering views against a running service.
 *
 * Layout: weight sliders per group (with link checkboxes), the core
 * scatterplot with box selection into A/B, component bar charts,
 * band-filtered projection heatmaps, and the selection-difference table.
 */

import { ApiClient, ApiError } from "./api.js";
import { debounce } from "./debounce.js";
import { divergentColor, filterRows } from "./heatmap.js";
import { RevisionGate, applyDrag, clamp01 } from "./state.js";
import type { SummaryPayload, WeightKind } from "./types.js";
import { toMatrix } from "./types.js";
import {
  barPanels,
  differenceCells,
  isAllZero,
  pointsInBox,
  scatterPoints,
} from "./views.js";

const KINDS: { kind: WeightKind; label: string }[] = [
  { kind: "w_tg", label: "Target" },
  { kind: "w_bg", label: "Background" },
  { kind: "w_bw", label: "Between-class" },
];

const SVG = "http://www.w3.org/2000/svg";

class App {
  private readonly gate = new RevisionGate();
  private readonly client: ApiClient;
  private sessionId = "";
  private selecting: "A" | "B" = "A";
  private band: [number, number] = [-0.05, 0.05];
  private readonly pushWeights = debounce(
    (w: Record<WeightKind, number[]>) => void this.sendWeights(w),
  );

  constructor(private readonly root: HTMLElement, baseUrl: string) {
    this.client = new ApiClient(baseUrl);
  }

  async start(): Promise<void> {
    const resp = await fetch("./demo-session.json");
    const req = await resp.json();
    const summary = await this.client.createSession(req);
    this.sessionId = summary.session_id;
    this.gate.accept(summary);
    this.render();
  }

  private async sendWeights(w: Record<WeightKind, number[]>): Promise<void> {
    try {
      const summary = await this.client.setWeights(this.sessionId, w);
      if (this.gate.accept(summary)) this.render();
    } catch (err) {
      this.showError(err);
      this.render(); // sliders revert to last acknowledged state
    }
  }

  private showError(err: unknown): void {
    const box = this.root.querySelector(".error") as HTMLElement | null;
    if (!box) return;
    box.textContent =
      err instanceof ApiError ? err.message : String(err ?? "request failed");
  }

  private render(): void {
    const summary = this.gate.summary;
    if (!summary) return;
    this.root.replaceChildren(
      this.renderControls(summary),
      this.renderScatter(summary),
      this.renderBars(summary),
      this.renderHeatmaps(summary),
      this.renderDifferencePanel(),
      el("div", "error"),
    );
  }

  private renderControls(summary: SummaryPayload): HTMLElement {
    const panel = el("div", "controls");
    const linked = new Set<number>();
    summary.group_names.forEach((name, g) => {
      const row = el("div", "group-row");
      const check = document.createElement("input");
      check.type = "checkbox";
      check.title = "move this group's sliders together with the dragged one";
      check.addEventListener("change", () =>
        check.checked ? linked.add(g) : linked.delete(g),
      );
      row.append(check, el("span", "group-name", name));
      for (const { kind, label } of KINDS) {
        const slider = document.createElement("input");
        slider.type = "range";
        slider.min = "0";
        slider.max = "1";
        slider.step = "0.01";
        slider.value = String(clamp01(summary.weights[kind][g]));
        slider.title = `${label} weight, ${name}`;
        slider.addEventListener("input", () => {
          const others = [...linked].filter((x) => x !== g);
          const next = applyDrag(
            summary.weights,
            kind,
            g,
            Number(slider.value),
            linked.has(g) ? others : [],
          );
          this.pushWeights(next);
        });
        slider.addEventListener("change", () => this.pushWeights.flush());
        row.append(el("span", "kind-label", label), slider);
      }
      panel.append(row);
    });
    return panel;
  }

  private renderScatter(summary: SummaryPayload): HTMLElement {
    const panel = el("div", "scatter");
    const points = scatterPoints(summary);
    const xs = points.map((p) => p.x);
    const ys = points.map((p) => p.y);
    const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
    const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
    const size = 360;
    const sx = (x: number) => ((x - x0) / (x1 - x0 || 1)) * (size - 20) + 10;
    const sy = (y: number) =>
      size - (((y - y0) / (y1 - y0 || 1)) * (size - 20) + 10);

    const svg = document.createElementNS(SVG, "svg");
    svg.setAttribute("width", String(size));
    svg.setAttribute("height", String(size));
    for (const p of points) {
      const dot = document.createElementNS(SVG, "circle");
      dot.setAttribute("cx", String(sx(p.x)));
      dot.setAttribute("cy", String(sy(p.y)));
      dot.setAttribute("r", "2.5");
      dot.setAttribute("class", `group-${p.group}`);
      svg.append(dot);
    }

    let drag: [number, number] | null = null;
    svg.addEventListener("mousedown", (e) => {
      drag = [e.offsetX, e.offsetY];
    });
    svg.addEventListener("mouseup", (e) => {
      if (!drag) return;
      const inv = (px: number) => ((px - 10) / (size - 20)) * (x1 - x0) + x0;
      const invY = (py: number) =>
        ((size - py - 10) / (size - 20)) * (y1 - y0) + y0;
      const indices = pointsInBox(
        points,
        inv(drag[0]),
        invY(drag[1]),
        inv(e.offsetX),
        invY(e.offsetY),
      );
      drag = null;
      void this.client
        .setSelection(this.sessionId, this.selecting, indices)
        .then(() => this.renderDifference());
    });

    const toggle = el("div", "selection-toggle");
    for (const which of ["A", "B"] as const) {
      const btn = document.createElement("button");
      btn.textContent = `select ${which}`;
      btn.addEventListener("click", () => {
        this.selecting = which;
      });
      toggle.append(btn);
    }
    panel.append(svg, toggle, el("div", "revision", `rev ${summary.revision}`));
    return panel;
  }

  private renderBars(summary: SummaryPayload): HTMLElement {
    const panel = el("div", "bars");
    for (const bar of barPanels(summary)) {
      const chart = el(
        "div",
        "bar-panel",
        `${bar.modeName} / component ${bar.component}`,
      );
      const maxAbs = Math.max(...bar.values.map(Math.abs), 1e-12);
      for (const v of bar.values) {
        const b = el("div", "bar");
        b.style.height = `${(Math.abs(v) / maxAbs) * 60}px`;
        b.classList.add(v >= 0 ? "pos" : "neg");
        chart.append(b);
      }
      panel.append(chart);
    }
    return panel;
  }

  private renderHeatmaps(summary: SummaryPayload): HTMLElement {
    const panel = el("div", "heatmaps");
    summary.projections.forEach((proj, k) => {
      const matrix = toMatrix(proj);
      const { visible, label } = filterRows(matrix, this.band[0], this.band[1]);
      const box = el(
        "div",
        "heatmap",
        `${summary.mode_names[k + 1] ?? `mode ${k + 2}`}: ${label}`,
      );
      const maxAbs = Math.max(...matrix.flat().map(Math.abs), 1e-12);
      for (const i of visible) {
        const rowEl = el("div", "heat-row");
        for (const v of matrix[i]) {
          const cell = el("span", "heat-cell");
          cell.style.background = divergentColor(v, maxAbs);
          rowEl.append(cell);
        }
        box.append(rowEl);
      }
      panel.append(box);
    });

    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.01";
    slider.value = String(this.band[1]);
    slider.title = "hide rows whose loadings all fall inside [-x, x]";
    slider.addEventListener("change", () => {
      const eps = Number(slider.value);
      this.band = [-eps, eps];
      this.render();
    });
    panel.append(slider);
    return panel;
  }

  private renderDifferencePanel(): HTMLElement {
    const panel = el("div", "difference");
    panel.append(el("div", "difference-body", "select points as A and B"));
    return panel;
  }

  private async renderDifference(): Promise<void> {
    const body = this.root.querySelector(
      ".difference-body",
    ) as HTMLElement | null;
    if (!body) return;
    try {
      const diff = await this.client.getDifference(this.sessionId);
      if (isAllZero(diff)) {
        body.textContent = "selections are identical (all-zero difference)";
        return;
      }
      body.replaceChildren();
      const maxAbs = Math.max(...diff.values.map(Math.abs), 1e-12);
      let lastRow = -1;
      let rowEl: HTMLElement | null = null;
      for (const cell of differenceCells(diff)) {
        if (cell.row !== lastRow) {
          rowEl = el("div", "heat-row");
          body.append(rowEl);
          lastRow = cell.row;
        }
        const c = el("span", "heat-cell");
        c.style.background = divergentColor(cell.value, maxAbs);
        rowEl!.append(c);
      }
    } catch (err) {
      if (err instanceof ApiError && err.isInvalidInput) {
        body.textContent = "select points as A and B";
      } else {
        this.showError(err);
      }
    }
  }
}

function el(tag: string, cls: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

const root = document.getElementById("app");
if (root) {
  void new App(root, "").start();
}
