/** Freehand lasso geometry: a polygon in screen coordinates plus the
 * even-odd ray-casting test used to decide which points it captured.
 */

export interface Point {
  x: number;
  y: number;
}

export function pointInPolygon(point: Point, polygon: Point[]): boolean {
  if (polygon.length < 3) return false;
  let inside = false;
  for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i++) {
    const a = polygon[i];
    const b = polygon[j];
    const crosses =
      a.y > point.y !== b.y > point.y &&
      point.x < ((b.x - a.x) * (point.y - a.y)) / (b.y - a.y) + a.x;
    if (crosses) inside = !inside;
  }
  return inside;
}

export function polygonPath(polygon: Point[]): string {
  if (polygon.length === 0) return "";
  const [head, ...rest] = polygon;
  const segments = rest.map((p) => `L${p.x},${p.y}`).join("");
  return `M${head.x},${head.y}${segments}Z`;
}
