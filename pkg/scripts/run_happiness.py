"""End-to-end analysis of the bundled country wellbeing data.

Trains the initial model pool, then walks the whole pipeline: extracted
rules, feature importance, the 2-D rule embedding, contrastive ranking for
the densest cluster, and the per-instance agreement view. Prints a compact
report and optionally saves the session for the CLI or the HTTP service.

Run from the repository root:

    python scripts/run_happiness.py [--iterations 10] [--out session.json]
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from pathlib import Path

from rulescope.contrast import ContrastRequest
from rulescope.session import build_session

DATA = Path(__file__).resolve().parent.parent / "data" / "happiness.csv"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--iterations", type=int, default=10,
                        help="search candidates per algorithm")
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", help="save the session file here")
    args = parser.parse_args()

    t0 = time.perf_counter()
    session = build_session(
        str(DATA), "Score", bins=3, seed=args.seed, iterations=args.iterations,
    )
    print(f"trained {len(session.models)} models in {time.perf_counter() - t0:.1f}s "
          f"({session.train.n_instances} train / {session.test.n_instances} test rows)")

    models = session.models_payload()["models"]
    best = models[-1]
    print(f"best model: {best['id']} overall {best['metrics']['overall_pct']:.1f}% "
          f"({best['n_trees']} trees, {best['n_rules']} rules)")

    imp = session.importance_payload()
    order = imp["display_order"]
    names = imp["feature_names"]
    print("feature importance (active models):")
    for f in order:
        print(f"  {names[f]:<32} {imp['active_mean'][f]:.3f}  "
              f"delta {imp['delta'][f]:+.3f}")

    t0 = time.perf_counter()
    embedding = session.embedding_payload()
    resolved = embedding["resolved"]
    print(f"embedded {len(embedding['points'])} rules in "
          f"{time.perf_counter() - t0:.1f}s: {resolved['n_clusters']} clusters, "
          f"n_neighbors={resolved['n_neighbors']}")

    by_cluster = Counter(
        p["cluster_label"] for p in embedding["points"] if p["cluster_label"] >= 0
    )
    if by_cluster:
        densest, size = by_cluster.most_common(1)[0]
        selected = [p["rule_id"] for p in embedding["points"]
                    if p["cluster_label"] == densest]
        universe = [p["rule_id"] for p in embedding["points"]]
        contrast = session.contrast_payload(ContrastRequest(
            selected=tuple(selected), universe=tuple(universe),
        ))
        top = contrast["ranked_features"][0]
        print(f"densest cluster ({size} rules) differs most on "
              f"{top['name']} (score {top['score']:.3f})")

    conflicts = session.conflicts_payload()["conflicts"]
    print(f"conflicted test instances: {len(conflicts)} of "
          f"{session.test.n_instances} -> {conflicts}")
    for i in conflicts[:3]:
        view = session.agreement(i)
        print(f"  instance {i}: truth {view['ground_truth_name']}, "
              f"majority {view['majority_name']}, rf {view['rf_votes']}, "
              f"ab {view['ab_votes']}")

    if args.out:
        session.save(args.out)
        print(f"session written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
