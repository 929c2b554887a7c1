"""Regenerate data/happiness.csv, the bundled country wellbeing example.

The Score column holds the published 2019 country wellbeing index values
(156 countries, descending). The six driver columns are synthesized from a
fixed seed: each is a noisy monotone transform of the score scaled to the
value ranges seen in the published driver tables, which keeps the learning
problem realistic without shipping third-party data.

Run from the repository root:

    python scripts/make_example_data.py
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

SEED = 20190320

# 2019 index values, rank order. min 2.853, max 7.769.
SCORES = [
    7.769, 7.600, 7.554, 7.494, 7.488, 7.480, 7.343, 7.307, 7.278, 7.246,
    7.228, 7.167, 7.139, 7.090, 7.054, 7.021, 6.985, 6.923, 6.892, 6.852,
    6.825, 6.726, 6.595, 6.592, 6.446, 6.444, 6.436, 6.375, 6.374, 6.354,
    6.321, 6.300, 6.293, 6.262, 6.253, 6.223, 6.199, 6.198, 6.192, 6.182,
    6.174, 6.149, 6.125, 6.118, 6.105, 6.100, 6.086, 6.070, 6.046, 6.028,
    6.021, 6.008, 5.940, 5.895, 5.893, 5.890, 5.888, 5.886, 5.860, 5.809,
    5.779, 5.758, 5.743, 5.718, 5.697, 5.693, 5.653, 5.648, 5.631, 5.603,
    5.529, 5.525, 5.523, 5.467, 5.432, 5.430, 5.425, 5.386, 5.373, 5.339,
    5.323, 5.287, 5.285, 5.274, 5.265, 5.261, 5.247, 5.211, 5.208, 5.208,
    5.197, 5.192, 5.191, 5.175, 5.082, 5.044, 5.011, 4.996, 4.944, 4.913,
    4.906, 4.883, 4.812, 4.799, 4.796, 4.722, 4.719, 4.707, 4.700, 4.696,
    4.681, 4.668, 4.639, 4.628, 4.587, 4.559, 4.548, 4.534, 4.519, 4.516,
    4.509, 4.490, 4.466, 4.461, 4.456, 4.437, 4.418, 4.390, 4.374, 4.366,
    4.360, 4.350, 4.332, 4.286, 4.212, 4.189, 4.166, 4.107, 4.085, 4.015,
    3.975, 3.973, 3.933, 3.802, 3.775, 3.663, 3.597, 3.488, 3.462, 3.410,
    3.380, 3.334, 3.231, 3.203, 3.083, 2.853,
]

# (column name, scale, base offset, score coefficient, noise sd)
FEATURES = [
    ("GDP per capita", 1.684, 0.15, 0.85, 0.12),
    ("Social support", 1.624, 0.20, 0.80, 0.10),
    ("Healthy life expectancy", 1.141, 0.10, 0.90, 0.08),
    ("Freedom to make life choices", 0.631, 0.30, 0.70, 0.09),
    ("Generosity", 0.566, 0.25, 0.10, 0.10),
    ("Perceptions of corruption", 0.453, 0.05, 0.60, 0.06),
]


def build_rows() -> list[list[float]]:
    scores = np.asarray(SCORES)
    u = (scores - scores.min()) / (scores.max() - scores.min())
    rng = np.random.default_rng(SEED)
    cols = []
    for _, scale, base, coef, sd in FEATURES:
        shape = u * u if coef > 0.5 and base < 0.1 else u
        raw = scale * (base + coef * shape) + rng.normal(0.0, sd, size=len(scores))
        cols.append(np.round(np.clip(raw, 0.0, scale), 3))
    rows = []
    for i in range(len(scores)):
        rows.append([float(c[i]) for c in cols] + [float(scores[i])])
    return rows


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "data" / "happiness.csv"
    out.parent.mkdir(exist_ok=True)
    rows = build_rows()
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([name for name, *_ in FEATURES] + ["Score"])
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
