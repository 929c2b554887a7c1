/** Global feature ranking: per-feature importance over the active models,
 * the whole pool, per-algorithm means, and the activation delta. Rows
 * follow the server's display order.
 */

import { clear, el, num } from "../dom.js";
import { algorithmColor } from "../palette.js";
import type { Store } from "../store.js";

const BAR_WIDTH = 110;

export class ImportancePanel {
  readonly root: HTMLElement;

  constructor(private readonly store: Store) {
    this.root = el("section", { class: "panel", id: "panel-importance" });
    store.subscribe("importance", () => this.render());
    this.render();
  }

  render(): void {
    clear(this.root);
    this.root.append(el("h2", {}, "Feature ranking"));
    const payload = this.store.importance;
    if (!payload) {
      this.root.append(el("p", { class: "placeholder" }, "loading importance"));
      return;
    }
    const algorithms = Object.keys(payload.per_algorithm).sort();
    const head = el(
      "tr",
      {},
      el("th", {}, "feature"),
      el("th", {}, "active"),
      el("th", {}, "pool"),
      el("th", {}, "delta"),
      ...algorithms.map((a) => el("th", {}, a)),
    );
    const rows = payload.display_order.map((f) => {
      const deltaClass =
        payload.delta[f] > 0 ? "delta up" : payload.delta[f] < 0 ? "delta down" : "delta";
      return el(
        "tr",
        {},
        el("td", { class: "feature-name" }, payload.feature_names[f]),
        el("td", {}, this.bar(payload.active_mean[f], "#0072b2"), num(payload.active_mean[f])),
        el("td", {}, this.bar(payload.all_mean[f], "#999999"), num(payload.all_mean[f])),
        el("td", { class: deltaClass }, num(payload.delta[f])),
        ...algorithms.map((a) => {
          const stats = payload.per_algorithm[a];
          return el(
            "td",
            {},
            this.bar(stats.mean[f], algorithmColor(a)),
            num(stats.mean[f]),
            el(
              "span",
              { class: "quartile-range" },
              " (",
              num(stats.q1[f]),
              "–",
              num(stats.q3[f]),
              ")",
            ),
          );
        }),
      );
    });
    this.root.append(el("table", { class: "importance-table" }, head, ...rows));
  }

  private bar(value: number, color: string): HTMLElement {
    return el("div", {
      class: "importance-bar",
      style: `width:${Math.max(value, 0) * BAR_WIDTH}px;background:${color}`,
    });
  }
}
