/** Models overview: per-model metric lines with distinct symbols, ribbon
 * deltas of the confusion changes between neighboring models, tree and rule
 * count bars, and the activation toggles.
 *
 * Models arrive worst to best from the server and are drawn left to right
 * in exactly that order.
 */

import { clear, el, num, svg, svgNum } from "../dom.js";
import { classColor } from "../palette.js";
import { linear } from "../scales.js";
import type { Store } from "../store.js";
import type { ModelRow, ModelsPayload } from "../types.js";

const CHART_HEIGHT = 200;
const COLUMN_WIDTH = 72;
const MARGIN = { top: 16, right: 24, bottom: 40, left: 44 };

const METRIC_SERIES = [
  { key: "accuracy_pct", label: "accuracy", color: "#0072b2", symbol: "circle" },
  { key: "precision_pct", label: "precision", color: "#009e73", symbol: "square" },
  { key: "recall_pct", label: "recall", color: "#d55e00", symbol: "triangle" },
] as const;

export class ModelsPanel {
  readonly root: HTMLElement;

  constructor(private readonly store: Store) {
    this.root = el("section", { class: "panel", id: "panel-models" });
    store.subscribe("models", () => this.render());
    this.render();
  }

  render(): void {
    clear(this.root);
    this.root.append(el("h2", {}, "Models overview"));
    const payload = this.store.models;
    if (!payload) {
      this.root.append(el("p", { class: "placeholder" }, "loading models"));
      return;
    }
    this.root.append(this.chart(payload), this.table(payload));
  }

  private chart(payload: ModelsPayload): SVGSVGElement {
    const models = payload.models;
    const width = MARGIN.left + models.length * COLUMN_WIDTH + MARGIN.right;
    const node = svg("svg", {
      class: "models-chart",
      width,
      height: CHART_HEIGHT,
      viewBox: `0 0 ${width} ${CHART_HEIGHT}`,
    });
    const y = linear([0, 100], [CHART_HEIGHT - MARGIN.bottom, MARGIN.top]);
    const columnX = (i: number) => MARGIN.left + (i + 0.5) * COLUMN_WIDTH;

    node.append(
      svg("line", {
        x1: MARGIN.left,
        y1: y(0),
        x2: width - MARGIN.right,
        y2: y(0),
        class: "axis-line",
      }),
    );

    this.appendRibbons(node, payload, columnX, y(0));

    for (const series of METRIC_SERIES) {
      const path = models
        .map((m, i) => `${i === 0 ? "M" : "L"}${columnX(i)},${y(m.metrics[series.key])}`)
        .join("");
      node.append(svg("path", { d: path, class: "metric-line", stroke: series.color }));
      models.forEach((m, i) => {
        node.append(
          this.symbol(series.symbol, columnX(i), y(m.metrics[series.key]), series.color),
        );
      });
    }

    models.forEach((m, i) => {
      const label = svg("text", {
        x: columnX(i),
        y: CHART_HEIGHT - MARGIN.bottom + 16,
        class: m.active ? "column-label" : "column-label inactive",
        "text-anchor": "middle",
      });
      label.textContent = m.id;
      node.append(label);
    });

    let legendX = MARGIN.left;
    for (const series of METRIC_SERIES) {
      node.append(this.symbol(series.symbol, legendX, 8, series.color));
      const label = svg("text", { x: legendX + 8, y: 12, class: "legend-label" });
      label.textContent = series.label;
      node.append(label);
      legendX += 80;
    }
    return node;
  }

  /** Confusion ribbons between neighboring columns: one stacked band per
   * class for false positives (up) and false negatives (down), thickness
   * proportional to the change; lightened when the count went down. */
  private appendRibbons(
    node: SVGSVGElement,
    payload: ModelsPayload,
    columnX: (i: number) => number,
    baseline: number,
  ): void {
    let largest = 1;
    for (const t of payload.transitions) {
      for (const d of [...t.delta_fp, ...t.delta_fn]) {
        largest = Math.max(largest, Math.abs(d));
      }
    }
    const unit = Math.min(6, 40 / largest);
    payload.transitions.forEach((t, i) => {
      const x = (columnX(i) + columnX(i + 1)) / 2 - 8;
      let up = baseline - 2;
      t.delta_fp.forEach((delta, c) => {
        const h = Math.abs(delta) * unit;
        if (h === 0) return;
        up -= h;
        node.append(
          svg("rect", {
            x,
            y: up,
            width: 16,
            height: h,
            fill: classColor(c),
            class: delta > 0 ? "ribbon" : "ribbon improved",
          }),
        );
      });
      let down = baseline + 2;
      t.delta_fn.forEach((delta, c) => {
        const h = Math.abs(delta) * unit;
        if (h === 0) return;
        node.append(
          svg("rect", {
            x,
            y: down,
            width: 16,
            height: h,
            fill: classColor(c),
            class: delta > 0 ? "ribbon fn" : "ribbon fn improved",
          }),
        );
        down += h;
      });
    });
  }

  private symbol(kind: string, x: number, y: number, color: string): SVGElement {
    if (kind === "square") {
      return svg("rect", { x: x - 3, y: y - 3, width: 6, height: 6, fill: color });
    }
    if (kind === "triangle") {
      return svg("path", {
        d: `M${x},${y - 4}L${x + 4},${y + 3}L${x - 4},${y + 3}Z`,
        fill: color,
      });
    }
    return svg("circle", { cx: x, cy: y, r: 3.2, fill: color });
  }

  private table(payload: ModelsPayload): HTMLTableElement {
    const models = payload.models;
    const maxTrees = Math.max(...models.map((m) => m.n_trees), 1);
    const maxRules = Math.max(...models.map((m) => m.n_rules), 1);

    const head = el(
      "tr",
      {},
      el("th", {}, "model"),
      ...models.map((m) => el("th", { class: "model-id" }, m.id)),
    );
    const active = el(
      "tr",
      {},
      el("td", {}, "active"),
      ...models.map((m) => el("td", {}, this.toggle(m))),
    );
    const metricRow = (label: string, key: (typeof METRIC_SERIES)[number]["key"] | "overall_pct") =>
      el(
        "tr",
        {},
        el("td", {}, label),
        ...models.map((m) => el("td", { class: "metric-cell" }, num(m.metrics[key]))),
      );
    const barRow = (label: string, value: (m: ModelRow) => number, max: number) =>
      el(
        "tr",
        {},
        el("td", {}, label),
        ...models.map((m) =>
          el(
            "td",
            {},
            el("div", {
              class: "count-bar",
              style: `width:${(value(m) / max) * 56}px`,
            }),
            num(value(m)),
          ),
        ),
      );

    return el(
      "table",
      { class: "models-table" },
      head,
      active,
      metricRow("accuracy %", "accuracy_pct"),
      metricRow("precision %", "precision_pct"),
      metricRow("recall %", "recall_pct"),
      metricRow("overall %", "overall_pct"),
      barRow("trees", (m) => m.n_trees, maxTrees),
      barRow("decisions", (m) => m.n_rules, maxRules),
    );
  }

  private toggle(model: ModelRow): HTMLInputElement {
    const input = el("input", {
      type: "checkbox",
      class: "activation-toggle",
      "data-model": model.id,
    });
    input.checked = model.active;
    input.addEventListener("change", () => {
      const ids = this.store.models.models
        .filter((m) => (m.id === model.id ? input.checked : m.active))
        .map((m) => m.id);
      this.store.setActive(ids).catch(() => this.render());
    });
    return input;
  }
}
