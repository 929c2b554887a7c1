/** Colorblind-safe categorical palette (Okabe-Ito plus two fillers), capped
 * at ten classes. Algorithms get fixed hues so RF/AB are readable at a
 * glance across panels.
 */

export const CLASS_PALETTE = [
  "#0072b2",
  "#e69f00",
  "#009e73",
  "#cc79a7",
  "#d55e00",
  "#56b4e9",
  "#f0e442",
  "#000000",
  "#999999",
  "#882255",
];

export function classColor(index: number): string {
  return CLASS_PALETTE[index % CLASS_PALETTE.length];
}

export const ALGORITHM_COLORS: Record<string, string> = {
  RF: "#1b9e77",
  AB: "#d95f02",
};

export function algorithmColor(algorithm: string): string {
  return ALGORITHM_COLORS[algorithm] ?? "#666666";
}

export const INACTIVE_COLOR = "#8c6d31";
export const SELECTION_COLOR = "#c51b8a";
export const ANCHOR_COLOR = "#54278f";
