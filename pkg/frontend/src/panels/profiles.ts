/** Decision profiles: vertical per-feature axes in contrast-ranking order,
 * with the selected (and anchored) groups' interval bands, the comparison
 * bands in comparison mode, training instances as class-colored polylines
 * over normalized [0, 1] values, and the current test instance as a thick
 * black polyline. Everything drawn here is a server value; the panel only
 * maps them to pixels.
 */

import { clear, el, num, svg } from "../dom.js";
import { ANCHOR_COLOR, classColor, SELECTION_COLOR } from "../palette.js";
import { linear } from "../scales.js";
import type { Store } from "../store.js";
import type { ContrastPayload, Interval } from "../types.js";

const AXIS_GAP = 104;
const HEIGHT = 320;
const TOP = 40;
const BOTTOM = 24;

export class ProfilesPanel {
  readonly root: HTMLElement;
  private filterInstances = false;

  constructor(private readonly store: Store) {
    this.root = el("section", { class: "panel", id: "panel-profiles" });
    store.subscribe("contrast", () => this.render());
    store.subscribe("agreement", () => this.render());
    store.subscribe("meta", () => this.render());
    this.render();
  }

  render(): void {
    clear(this.root);
    this.root.append(el("h2", {}, "Decision profiles"));
    const contrast = this.store.contrast;
    if (!contrast) {
      this.root.append(
        el("p", { class: "placeholder" }, "lasso a group in the decisions space to compare"),
      );
      return;
    }
    this.root.append(this.controls(contrast), this.chart(contrast));
  }

  private controls(contrast: ContrastPayload): HTMLElement {
    const bins = el("input", {
      type: "number",
      min: 2,
      max: 50,
      class: "bins-input",
    }) as HTMLInputElement;
    bins.value = String(contrast.bins);
    bins.addEventListener("change", () => {
      this.store.setBins(Number(bins.value)).catch(() => this.render());
    });

    const mode = el("select", { class: "mode-select" }) as HTMLSelectElement;
    for (const value of ["overlap", "difference"]) {
      mode.append(el("option", { value }, value));
    }
    mode.value = contrast.mode;
    mode.addEventListener("change", () => {
      this.store
        .setMode(mode.value as "overlap" | "difference")
        .catch(() => this.render());
    });

    const filter = el("input", { type: "checkbox", class: "instance-filter" });
    filter.checked = this.filterInstances;
    filter.addEventListener("change", () => {
      this.filterInstances = filter.checked;
      this.render();
    });

    return el(
      "div",
      { class: "controls" },
      el("label", {}, "bins ", bins, " ", num(contrast.bins)),
      el("label", {}, "mode ", mode),
      el("label", {}, filter, " only instances inside the selection"),
    );
  }

  private chart(contrast: ContrastPayload): SVGSVGElement {
    const order = contrast.ranked_features;
    const width = order.length * AXIS_GAP + 24;
    const node = svg("svg", {
      class: "profiles-chart",
      width,
      height: HEIGHT,
      viewBox: `0 0 ${width} ${HEIGHT}`,
    });
    const y = linear([0, 1], [HEIGHT - BOTTOM, TOP]);
    const axisX = (i: number) => 52 + i * AXIS_GAP;

    order.forEach((ranked, i) => {
      const x = axisX(i);
      node.append(
        svg("line", { x1: x, y1: y(0), x2: x, y2: y(1), class: "axis-line" }),
      );
      const name = svg("text", {
        x,
        y: TOP - 24,
        class: "axis-name",
        "text-anchor": "middle",
      });
      name.textContent = ranked.name;
      node.append(name);
      const score = svg("text", {
        x,
        y: TOP - 10,
        class: "axis-score",
        "text-anchor": "middle",
        "data-num": "",
      });
      score.textContent = String(ranked.score);
      node.append(score);

      this.band(node, contrast.group_intervals.selected?.[ranked.feature], x, y, SELECTION_COLOR);
      this.band(node, contrast.group_intervals.anchored?.[ranked.feature], x, y, ANCHOR_COLOR);
      for (const piece of contrast.comparison?.[ranked.feature] ?? []) {
        node.append(
          svg("rect", {
            class: "comparison-band",
            x: x - 14,
            y: y(piece[1]),
            width: 28,
            height: Math.max(y(piece[0]) - y(piece[1]), 1.5),
          }),
        );
      }
    });

    this.polylines(node, contrast, axisX, y);
    return node;
  }

  private band(
    node: SVGSVGElement,
    interval: Interval | null | undefined,
    x: number,
    y: (v: number) => number,
    color: string,
  ): void {
    if (!interval) return;
    node.append(
      svg("rect", {
        class: "group-band",
        x: x - 10,
        y: y(interval[1]),
        width: 20,
        height: Math.max(y(interval[0]) - y(interval[1]), 1.5),
        fill: color,
      }),
    );
  }

  private polylines(
    node: SVGSVGElement,
    contrast: ContrastPayload,
    axisX: (i: number) => number,
    y: (v: number) => number,
  ): void {
    const meta = this.store.meta;
    if (!meta) return;
    const order = contrast.ranked_features;
    const toPath = (row: number[]) =>
      order
        .map((ranked, i) => `${i === 0 ? "M" : "L"}${axisX(i)},${y(row[ranked.feature])}`)
        .join("");
    const bands = contrast.group_intervals.selected ?? [];
    const insideSelection = (row: number[]) =>
      bands.every((band, f) => !band || (row[f] >= band[0] && row[f] <= band[1]));

    meta.train_normalized.forEach((row, i) => {
      if (this.filterInstances && !insideSelection(row)) return;
      node.append(
        svg("path", {
          class: "train-line",
          d: toPath(row),
          stroke: classColor(meta.train_labels[i]),
        }),
      );
    });

    const testIndex = this.store.agreement?.test_index ?? 0;
    const testRow = meta.test_normalized[testIndex];
    if (testRow) {
      node.append(svg("path", { class: "test-line", d: toPath(testRow) }));
    }
  }
}
