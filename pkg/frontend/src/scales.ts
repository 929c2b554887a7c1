/** Pixel mapping helpers. These position marks; they never produce numbers
 * that end up as page text.
 */

export interface LinearScale {
  (value: number): number;
  invert(pixel: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linear(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const scale = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  scale.invert = (pixel: number) =>
    r1 === r0 ? d0 : d0 + ((pixel - r0) / (r1 - r0)) * span;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) return [0, 1];
  return [lo, hi];
}

/** Square-root radius scale, the usual choice for area-true point sizes. */
export function sqrtRadius(
  value: number,
  max: number,
  minRadius: number,
  maxRadius: number,
): number {
  if (max <= 0) return minRadius;
  const t = Math.sqrt(Math.max(value, 0) / max);
  return minRadius + t * (maxRadius - minRadius);
}
