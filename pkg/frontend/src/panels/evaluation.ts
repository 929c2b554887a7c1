/** Evaluation and agreement: stacked vote bars (manual decisions, RF, AB)
 * plus the ground truth for the current test instance, navigation including
 * jump-to-conflict, export of the selected rules as a manual-decision
 * document, and per-algorithm hyperparameter profiles whose axis brushes
 * become constraints for a follow-up random search.
 */

import { clear, el, num, svg } from "../dom.js";
import { triggerDownload } from "../download.js";
import { algorithmColor, classColor, INACTIVE_COLOR } from "../palette.js";
import { extent, linear } from "../scales.js";
import type { Store } from "../store.js";
import type { AgreementPayload, ModelRow, SearchJob } from "../types.js";

const BAR_WIDTH = 260;
const BAR_HEIGHT = 22;
const PCP_HEIGHT = 150;
const PCP_AXIS_GAP = 92;

export class EvaluationPanel {
  readonly root: HTMLElement;
  private searchAlgorithm: "RF" | "AB" = "RF";
  private searchIterations = 5;
  private constraints: Record<string, Record<string, [number, number]>> = { RF: {}, AB: {} };
  private job: SearchJob | null = null;
  private searching = false;

  constructor(private readonly store: Store) {
    this.root = el("section", { class: "panel", id: "panel-evaluation" });
    store.subscribe("agreement", () => this.render());
    store.subscribe("conflicts", () => this.render());
    store.subscribe("models", () => this.render());
    store.subscribe("selection", () => this.render());
    this.render();
  }

  render(): void {
    clear(this.root);
    this.root.append(el("h2", {}, "Evaluation and agreement"));
    const agreement = this.store.agreement;
    const conflicts = this.store.conflicts;
    if (!agreement || !conflicts) {
      this.root.append(el("p", { class: "placeholder" }, "loading agreement"));
      return;
    }
    this.root.append(
      this.header(agreement),
      this.voteBars(agreement),
      this.exportControls(),
      this.searchControls(),
    );
  }

  private header(agreement: AgreementPayload): HTMLElement {
    const conflicts = this.store.conflicts;
    const prev = el("button", { class: "nav-prev" }, "prev");
    (prev as HTMLButtonElement).disabled = agreement.test_index === 0;
    prev.addEventListener("click", () => {
      this.store.gotoInstance(agreement.test_index - 1).catch(() => this.render());
    });
    const next = el("button", { class: "nav-next" }, "next");
    (next as HTMLButtonElement).disabled = agreement.test_index >= conflicts.n_test - 1;
    next.addEventListener("click", () => {
      this.store.gotoInstance(agreement.test_index + 1).catch(() => this.render());
    });
    const jump = el("button", { class: "nav-conflict" }, "next conflict");
    (jump as HTMLButtonElement).disabled = conflicts.conflicts.length === 0;
    jump.addEventListener("click", () => {
      const after = conflicts.conflicts.find((i) => i > agreement.test_index);
      const target = after ?? conflicts.conflicts[0];
      this.store.gotoInstance(target).catch(() => this.render());
    });

    return el(
      "div",
      { class: "agreement-header" },
      el(
        "span",
        {},
        "test instance ",
        num(agreement.test_index),
        " of ",
        num(this.store.conflicts.n_test),
      ),
      el("span", {}, " truth: ", el("strong", {}, agreement.ground_truth_name)),
      el("span", {}, " majority: ", el("strong", {}, agreement.majority_name)),
      el(
        "span",
        { class: agreement.conflict ? "badge conflict" : "badge" },
        agreement.conflict ? "conflict" : agreement.unanimous ? "unanimous" : "agreed",
      ),
      prev,
      next,
      jump,
    );
  }

  private voteBars(agreement: AgreementPayload): SVGSVGElement {
    const classNames = this.store.models?.class_names ?? [];
    const rows = [
      { label: "MD", votes: agreement.md_votes },
      { label: "RF", votes: agreement.rf_votes },
      { label: "AB", votes: agreement.ab_votes },
    ];
    const mostVotes = Math.max(
      1,
      ...rows.map((r) => r.votes.reduce((a, b) => a + b, 0)),
    );
    const height = (rows.length + 1) * (BAR_HEIGHT + 8) + 8;
    const node = svg("svg", {
      class: "vote-bars",
      width: BAR_WIDTH + 120,
      height,
      viewBox: `0 0 ${BAR_WIDTH + 120} ${height}`,
    });
    rows.forEach((row, r) => {
      const yTop = 6 + r * (BAR_HEIGHT + 8);
      const label = svg("text", { x: 4, y: yTop + 15, class: "bar-label" });
      label.textContent = row.label;
      node.append(label);
      let xCursor = 40;
      row.votes.forEach((count, c) => {
        if (count === 0) return;
        const width = (count / mostVotes) * BAR_WIDTH;
        node.append(
          svg("rect", {
            class: "vote-segment",
            "data-row": row.label,
            "data-class": classNames[c] ?? String(c),
            x: xCursor,
            y: yTop,
            width,
            height: BAR_HEIGHT,
            fill: classColor(c),
          }),
        );
        const value = svg("text", {
          x: xCursor + width / 2,
          y: yTop + 15,
          class: "vote-count",
          "text-anchor": "middle",
          "data-num": "",
        });
        value.textContent = String(count);
        node.append(value);
        xCursor += width;
      });
    });
    const yTop = 6 + rows.length * (BAR_HEIGHT + 8);
    const gtLabel = svg("text", { x: 4, y: yTop + 15, class: "bar-label" });
    gtLabel.textContent = "GT";
    node.append(gtLabel);
    node.append(
      svg("rect", {
        class: "vote-segment ground-truth",
        x: 40,
        y: yTop,
        width: BAR_WIDTH / 3,
        height: BAR_HEIGHT,
        fill: classColor(agreement.ground_truth),
      }),
    );
    const gtName = svg("text", {
      x: 44 + BAR_WIDTH / 3,
      y: yTop + 15,
      class: "bar-label",
    });
    gtName.textContent = agreement.ground_truth_name;
    node.append(gtName);
    return node;
  }

  private exportControls(): HTMLElement {
    const button = el("button", { class: "export-button" }, "export selected decisions");
    (button as HTMLButtonElement).disabled = this.store.selection.length === 0;
    button.addEventListener("click", () => {
      this.store
        .exportSelection()
        .then(({ text }) => triggerDownload("manual-decisions.json", text))
        .catch(() => this.render());
    });
    return el("div", { class: "export-controls" }, button);
  }

  private searchControls(): HTMLElement {
    const algorithm = el("select", { class: "search-algorithm" }) as HTMLSelectElement;
    for (const value of ["RF", "AB"]) algorithm.append(el("option", { value }, value));
    algorithm.value = this.searchAlgorithm;
    algorithm.addEventListener("change", () => {
      this.searchAlgorithm = algorithm.value as "RF" | "AB";
      this.render();
    });

    const iterations = el("input", {
      type: "number",
      min: 1,
      max: 50,
      class: "search-iterations",
    }) as HTMLInputElement;
    iterations.value = String(this.searchIterations);
    iterations.addEventListener("change", () => {
      this.searchIterations = Number(iterations.value);
    });

    const run = el("button", { class: "search-button" }, "search more models");
    (run as HTMLButtonElement).disabled = this.searching;
    run.addEventListener("click", () => this.runSearch());

    const status = el("div", { class: "search-status" });
    if (this.job) {
      status.append(
        `${this.job.status}: `,
        num(this.job.progress.done),
        " / ",
        num(this.job.progress.total),
      );
      if (this.job.status === "done" && this.job.model_ids.length > 0) {
        status.append(" added " + this.job.model_ids.join(", "));
      }
      if (this.job.error) status.append(" " + this.job.error);
    }

    return el(
      "div",
      { class: "search-controls" },
      el("h3", {}, "Constrained search"),
      el("label", {}, "algorithm ", algorithm),
      el("label", {}, "iterations ", iterations),
      run,
      status,
      this.hyperparameterProfile(this.searchAlgorithm),
    );
  }

  /** Parallel-axis view of the pool's hyperparameters for one algorithm;
   * dragging along an axis brushes a [lo, hi] constraint for the next
   * search, clicking the axis clears it. */
  private hyperparameterProfile(algorithm: "RF" | "AB"): SVGSVGElement {
    const models = (this.store.models?.models ?? []).filter(
      (m) => m.algorithm === algorithm,
    );
    const axes = this.axisNames(models);
    const width = axes.length * PCP_AXIS_GAP + 40;
    const node = svg("svg", {
      class: "hyper-pcp",
      "data-algorithm": algorithm,
      width,
      height: PCP_HEIGHT,
      viewBox: `0 0 ${width} ${PCP_HEIGHT}`,
    });
    if (models.length === 0 || axes.length === 0) return node;

    const axisX = (i: number) => 40 + i * PCP_AXIS_GAP;
    const scales = axes.map((name) =>
      linear(extent(models.map((m) => m.params[name])), [PCP_HEIGHT - 28, 18]),
    );

    for (const model of models) {
      const d = axes
        .map((name, i) => `${i === 0 ? "M" : "L"}${axisX(i)},${scales[i](model.params[name])}`)
        .join("");
      node.append(
        svg("path", {
          class: model.active ? "hyper-line" : "hyper-line inactive",
          "data-model": model.id,
          d,
          stroke: model.active ? algorithmColor(algorithm) : INACTIVE_COLOR,
        }),
      );
    }

    axes.forEach((name, i) => {
      const x = axisX(i);
      node.append(
        svg("line", {
          class: "axis-line hyper-axis",
          "data-param": name,
          x1: x,
          y1: 18,
          x2: x,
          y2: PCP_HEIGHT - 28,
        }),
      );
      const label = svg("text", {
        x,
        y: PCP_HEIGHT - 12,
        class: "axis-name",
        "text-anchor": "middle",
      });
      label.textContent = name;
      node.append(label);

      const constraint = this.constraints[algorithm][name];
      if (constraint) {
        const scale = scales[i];
        node.append(
          svg("rect", {
            class: "constraint-band",
            x: x - 7,
            y: Math.min(scale(constraint[0]), scale(constraint[1])),
            width: 14,
            height: Math.abs(scale(constraint[0]) - scale(constraint[1])) || 2,
          }),
        );
      }
      this.wireAxisBrush(node, name, x, scales[i], algorithm);
    });
    return node;
  }

  private axisNames(models: ModelRow[]): string[] {
    const names = new Set<string>();
    for (const model of models) {
      for (const key of Object.keys(model.params)) {
        if (key !== "seed") names.add(key);
      }
    }
    const preferred = ["n_estimators", "max_depth", "min_samples_leaf", "max_features", "learning_rate"];
    return [...names].sort((a, b) => preferred.indexOf(a) - preferred.indexOf(b));
  }

  private wireAxisBrush(
    node: SVGSVGElement,
    param: string,
    x: number,
    scale: { invert(pixel: number): number },
    algorithm: "RF" | "AB",
  ): void {
    const zone = svg("rect", {
      class: "brush-zone",
      "data-param": param,
      x: x - 9,
      y: 18,
      width: 18,
      height: PCP_HEIGHT - 46,
      fill: "transparent",
    });
    let startY: number | null = null;
    const localY = (event: MouseEvent) =>
      event.clientY - node.getBoundingClientRect().top;
    const onUp = (event: MouseEvent) => {
      document.removeEventListener("mouseup", onUp);
      if (startY === null) return;
      const endY = localY(event);
      const begin = startY;
      startY = null;
      if (Math.abs(endY - begin) < 3) {
        delete this.constraints[algorithm][param];
      } else {
        const a = scale.invert(begin);
        const b = scale.invert(endY);
        const lo = Math.min(a, b);
        const hi = Math.max(a, b);
        this.constraints[algorithm][param] =
          param === "learning_rate"
            ? [Math.round(lo * 1000) / 1000, Math.round(hi * 1000) / 1000]
            : [Math.round(lo), Math.round(hi)];
      }
      this.render();
    };
    zone.addEventListener("mousedown", (event) => {
      if (event.button !== 0) return;
      startY = localY(event);
      document.addEventListener("mouseup", onUp);
    });
    node.append(zone);
  }

  private runSearch(): void {
    const constraints = this.constraints[this.searchAlgorithm];
    this.searching = true;
    this.job = null;
    this.render();
    this.store
      .runSearch(
        {
          algorithm: this.searchAlgorithm,
          iterations: this.searchIterations,
          ...(Object.keys(constraints).length > 0 ? { constraints } : {}),
        },
        (job) => {
          this.job = job;
          this.render();
        },
      )
      .then((job) => {
        this.job = job;
      })
      .catch(() => {
        this.job = null;
      })
      .finally(() => {
        this.searching = false;
        this.render();
      });
  }
}
