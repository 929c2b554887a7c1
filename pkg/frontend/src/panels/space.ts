/** Decisions space: the 2-D rule embedding as a zoomable scatter.
 *
 * Size encodes support, fill the algorithm, outline the predicted class,
 * and opacity the purity; rules dimmed by the impurity filter go nearly
 * transparent, hidden rules are not plotted at all. Left-drag lassos a
 * group (one contrast request per completed lasso), middle-drag pans, the
 * wheel zooms. The support histogram doubles as a brush for the min/max
 * support filter, and the impurity slider and test-instance toggle drive
 * the corresponding server-side filters.
 */

import { clear, el, num, svg, svgNum } from "../dom.js";
import { pointInPolygon, polygonPath, type Point } from "../lasso.js";
import { algorithmColor, ANCHOR_COLOR, classColor, SELECTION_COLOR } from "../palette.js";
import { extent, linear, sqrtRadius, type LinearScale } from "../scales.js";
import type { Store } from "../store.js";
import type { EmbeddingPoint } from "../types.js";

const WIDTH = 640;
const HEIGHT = 440;
const PAD = 28;
const HIST_WIDTH = 300;
const HIST_HEIGHT = 90;

interface Transform {
  k: number;
  tx: number;
  ty: number;
}

export class SpacePanel {
  readonly root: HTMLElement;
  private transform: Transform = { k: 1, tx: 0, ty: 0 };
  private scaleX: LinearScale = linear([0, 1], [PAD, WIDTH - PAD]);
  private scaleY: LinearScale = linear([0, 1], [HEIGHT - PAD, PAD]);

  constructor(private readonly store: Store) {
    this.root = el("section", { class: "panel", id: "panel-space" });
    store.subscribe("embedding", () => this.render());
    store.subscribe("rules", () => this.render());
    store.subscribe("selection", () => this.render());
    this.render();
  }

  render(): void {
    clear(this.root);
    this.root.append(el("h2", {}, "Decisions space"));
    const embedding = this.store.embedding;
    const rules = this.store.rules;
    if (!embedding || !rules) {
      this.root.append(el("p", { class: "placeholder" }, "loading embedding"));
      return;
    }
    const plotted = embedding.points.filter((p) => p.status !== "hidden");
    this.scaleX = linear(extent(plotted.map((p) => p.x)), [PAD, WIDTH - PAD]);
    this.scaleY = linear(extent(plotted.map((p) => p.y)), [HEIGHT - PAD, PAD]);

    this.root.append(
      this.controls(),
      this.countsLine(),
      this.scatter(plotted),
      this.histogram(),
    );
  }

  private screen(p: EmbeddingPoint): Point {
    const { k, tx, ty } = this.transform;
    return { x: this.scaleX(p.x) * k + tx, y: this.scaleY(p.y) * k + ty };
  }

  private controls(): HTMLElement {
    const filter = this.store.rules.filter;
    const resolved = this.store.embedding.resolved;

    const slider = el("input", {
      type: "range",
      min: 0,
      max: 1,
      step: 0.05,
      class: "impurity-slider",
    });
    slider.value = String(filter.max_impurity ?? 1);
    slider.addEventListener("change", () => {
      const value = Number(slider.value);
      this.store
        .updateFilters({ max_impurity: value >= 1 ? null : value })
        .catch(() => this.render());
    });

    const limit = el("input", { type: "checkbox", class: "limit-toggle" });
    limit.checked = filter.test_instance !== null;
    limit.addEventListener("change", () => {
      const index = limit.checked ? this.store.agreement.test_index : null;
      this.store.updateFilters({ test_instance: index }).catch(() => this.render());
    });

    const anchor = el("button", { class: "anchor-button" }, "anchor selection");
    (anchor as HTMLButtonElement).disabled = this.store.selection.length === 0;
    anchor.addEventListener("click", () => this.store.anchorSelection());
    const detach = el("button", { class: "detach-button" }, "detach");
    (detach as HTMLButtonElement).disabled = this.store.anchored.length === 0;
    detach.addEventListener("click", () => this.store.detachAnchor());

    const zoom = (factor: number) =>
      this.zoomAt({ x: WIDTH / 2, y: HEIGHT / 2 }, factor);
    const zoomIn = el("button", { class: "zoom-in" }, "+");
    zoomIn.addEventListener("click", () => zoom(1.3));
    const zoomOut = el("button", { class: "zoom-out" }, "−");
    zoomOut.addEventListener("click", () => zoom(1 / 1.3));
    const reset = el("button", { class: "zoom-reset" }, "reset view");
    reset.addEventListener("click", () => {
      this.transform = { k: 1, tx: 0, ty: 0 };
      this.render();
    });

    return el(
      "div",
      { class: "controls" },
      el(
        "label",
        {},
        "max impurity ",
        slider,
        " ",
        filter.max_impurity === null ? el("span", {}, "off") : num(filter.max_impurity),
      ),
      el("label", {}, limit, " limit to test instance"),
      anchor,
      detach,
      zoomIn,
      zoomOut,
      reset,
      el(
        "span",
        { class: "embed-stats" },
        "clusters ",
        num(resolved.n_clusters),
        " eps ",
        num(resolved.eps),
        " neighbors ",
        num(resolved.n_neighbors),
      ),
    );
  }

  private countsLine(): HTMLElement {
    const counts = this.store.rules.counts;
    return el(
      "p",
      { class: "rule-counts" },
      "decisions: ",
      num(counts.visible),
      " visible, ",
      num(counts.dimmed),
      " dimmed, ",
      num(counts.hidden),
      " hidden of ",
      num(counts.total),
    );
  }

  private scatter(plotted: EmbeddingPoint[]): SVGSVGElement {
    const node = svg("svg", {
      class: "space-scatter",
      width: WIDTH,
      height: HEIGHT,
      viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    });
    const maxSupport = Math.max(...plotted.map((p) => p.support), 1);
    const selected = new Set(this.store.selection);
    const anchored = new Set(this.store.anchored);

    for (const point of plotted) {
      const pos = this.screen(point);
      const ringed = selected.has(point.rule_id) || anchored.has(point.rule_id);
      const circle = svg("circle", {
        class: "rule-point",
        "data-rule": point.rule_id,
        cx: pos.x,
        cy: pos.y,
        r: sqrtRadius(point.support, maxSupport, 2.5, 11) * Math.sqrt(this.transform.k),
        fill: algorithmColor(point.algorithm),
        stroke: anchored.has(point.rule_id)
          ? ANCHOR_COLOR
          : selected.has(point.rule_id)
            ? SELECTION_COLOR
            : classColor(point.predicted_class),
        "stroke-width": ringed ? 3 : 1.4,
        "fill-opacity":
          point.status === "dimmed" ? 0.06 : Math.max(0.25, 1 - point.impurity),
      });
      const title = svg("title");
      title.textContent = `${point.rule_id} (${point.predicted_class_name})`;
      circle.append(title);
      node.append(circle);
    }

    this.wireLasso(node, plotted);
    node.addEventListener("wheel", (event) => {
      event.preventDefault();
      const rect = node.getBoundingClientRect();
      const local = { x: event.clientX - rect.left, y: event.clientY - rect.top };
      this.zoomAt(local, event.deltaY < 0 ? 1.25 : 0.8);
    });
    return node;
  }

  private wireLasso(node: SVGSVGElement, plotted: EmbeddingPoint[]): void {
    let polygon: Point[] | null = null;
    let panStart: { x: number; y: number; tx: number; ty: number } | null = null;
    let path: SVGPathElement | null = null;

    const local = (event: MouseEvent): Point => {
      const rect = node.getBoundingClientRect();
      return { x: event.clientX - rect.left, y: event.clientY - rect.top };
    };

    const onMove = (event: MouseEvent) => {
      if (panStart) {
        this.transform.tx = panStart.tx + (event.clientX - panStart.x);
        this.transform.ty = panStart.ty + (event.clientY - panStart.y);
        this.render();
        return;
      }
      if (!polygon || !path) return;
      polygon.push(local(event));
      path.setAttribute("d", polygonPath(polygon));
    };

    const onUp = () => {
      document.removeEventListener("mousemove", onMove);
      document.removeEventListener("mouseup", onUp);
      if (panStart) {
        panStart = null;
        return;
      }
      if (!polygon) return;
      const captured = polygon;
      polygon = null;
      path?.remove();
      path = null;
      if (captured.length < 3) return;
      const ids = plotted
        .filter((p) => pointInPolygon(this.screen(p), captured))
        .map((p) => p.rule_id);
      this.store.lasso(ids).catch(() => this.render());
    };

    node.addEventListener("mousedown", (event) => {
      if (event.button === 1) {
        event.preventDefault();
        panStart = {
          x: event.clientX,
          y: event.clientY,
          tx: this.transform.tx,
          ty: this.transform.ty,
        };
      } else if (event.button === 0) {
        polygon = [local(event)];
        path = svg("path", { class: "lasso-path", d: polygonPath(polygon) });
        node.append(path);
      } else {
        return;
      }
      document.addEventListener("mousemove", onMove);
      document.addEventListener("mouseup", onUp);
    });
  }

  private zoomAt(center: Point, factor: number): void {
    const k = Math.min(20, Math.max(0.4, this.transform.k * factor));
    const applied = k / this.transform.k;
    this.transform = {
      k,
      tx: center.x - (center.x - this.transform.tx) * applied,
      ty: center.y - (center.y - this.transform.ty) * applied,
    };
    this.render();
  }

  /** Support histogram doubling as the min/max-support brush; a plain click
   * clears the brush. */
  private histogram(): SVGSVGElement {
    const hist = this.store.rules.support_histogram;
    const filter = this.store.rules.filter;
    const node = svg("svg", {
      class: "support-histogram",
      width: HIST_WIDTH,
      height: HIST_HEIGHT,
      viewBox: `0 0 ${HIST_WIDTH} ${HIST_HEIGHT}`,
    });
    const edges = hist.edges;
    const counts = hist.counts;
    if (edges.length < 2) return node;

    const x = linear([edges[0], edges[edges.length - 1]], [4, HIST_WIDTH - 4]);
    const maxCount = Math.max(...counts, 1);
    const y = linear([0, maxCount], [HIST_HEIGHT - 16, 4]);
    counts.forEach((count, i) => {
      const inRange =
        (filter.min_support === null || edges[i + 1] >= filter.min_support) &&
        (filter.max_support === null || edges[i] <= filter.max_support);
      node.append(
        svg("rect", {
          class: inRange ? "hist-bar" : "hist-bar excluded",
          x: x(edges[i]) + 0.5,
          y: y(count),
          width: Math.max(x(edges[i + 1]) - x(edges[i]) - 1, 1),
          height: HIST_HEIGHT - 16 - y(count),
        }),
      );
    });
    node.append(svgNum(edges[0], { x: 4, y: HIST_HEIGHT - 4, class: "hist-label" }));
    node.append(
      svgNum(edges[edges.length - 1], {
        x: HIST_WIDTH - 4,
        y: HIST_HEIGHT - 4,
        class: "hist-label",
        "text-anchor": "end",
      }),
    );

    let start: number | null = null;
    let band: SVGRectElement | null = null;
    const localX = (event: MouseEvent) =>
      event.clientX - node.getBoundingClientRect().left;

    const onMove = (event: MouseEvent) => {
      if (start === null || !band) return;
      const current = localX(event);
      band.setAttribute("x", String(Math.min(start, current)));
      band.setAttribute("width", String(Math.abs(current - start)));
    };
    const onUp = (event: MouseEvent) => {
      document.removeEventListener("mousemove", onMove);
      document.removeEventListener("mouseup", onUp);
      if (start === null) return;
      const end = localX(event);
      const begin = start;
      start = null;
      band?.remove();
      band = null;
      const patch =
        Math.abs(end - begin) < 3
          ? { min_support: null, max_support: null }
          : {
              min_support: Math.round(x.invert(Math.min(begin, end))),
              max_support: Math.round(x.invert(Math.max(begin, end))),
            };
      this.store.updateFilters(patch).catch(() => this.render());
    };
    node.addEventListener("mousedown", (event) => {
      if (event.button !== 0) return;
      start = localX(event);
      band = svg("rect", {
        class: "brush-band",
        x: start,
        y: 0,
        width: 0,
        height: HIST_HEIGHT - 16,
      });
      node.append(band);
      document.addEventListener("mousemove", onMove);
      document.addEventListener("mouseup", onUp);
    });
    return node;
  }
}
