/** Small DOM construction helpers.
 *
 * Numbers rendered as text must come straight from an API payload, so the
 * one sanctioned way to put a numeric into the page is num()/svgNum(), which
 * stringify the payload value verbatim and tag the node with data-num. The
 * contract tests sweep all [data-num] nodes and check each against the
 * payload universe; a client-computed figure would not survive that sweep.
 */

const SVG_NS = "http://www.w3.org/2000/svg";

type Child = Node | string | null | undefined;

function applyAttrs(node: Element, attrs: Record<string, unknown>): void {
  for (const [key, value] of Object.entries(attrs)) {
    if (value === null || value === undefined) continue;
    if (key === "class") node.setAttribute("class", String(value));
    else if (key.startsWith("on") && typeof value === "function") {
      node.addEventListener(key.slice(2), value as EventListener);
    } else node.setAttribute(key, String(value));
  }
}

function appendChildren(node: Element, children: Child[]): void {
  for (const child of children) {
    if (child === null || child === undefined) continue;
    node.append(child);
  }
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, unknown> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  applyAttrs(node, attrs);
  appendChildren(node, children);
  return node;
}

export function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, unknown> = {},
  ...children: Child[]
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  applyAttrs(node, attrs);
  appendChildren(node, children);
  return node;
}

/** A payload number rendered exactly as the server sent it. */
export function num(value: number): HTMLSpanElement {
  return el("span", { "data-num": "" }, String(value));
}

/** Same contract as num() for SVG text content. */
export function svgNum(value: number, attrs: Record<string, unknown> = {}): SVGTextElement {
  const node = svg("text", { ...attrs, "data-num": "" });
  node.textContent = String(value);
  return node;
}

export function clear(node: Element): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}
