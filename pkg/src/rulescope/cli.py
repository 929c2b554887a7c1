"""Command-line interface.

Subcommands mirror the HTTP endpoints and write the same canonical JSON
payloads, either to --out or to stdout. Exit codes: 0 on success, 1 on
domain errors (bad data, unknown ids), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .contrast import ContrastRequest
from .search import SearchRequest, constrain_space, default_space
from .service import serve
from .session import Session, build_session, to_canonical_json

DOMAIN_ERRORS = (ValueError, KeyError, IndexError, FileNotFoundError, OSError)


def _parse_ids(raw: str) -> list[str]:
    """Comma list, or @path to a file with one id per line."""
    if raw.startswith("@"):
        lines = Path(raw[1:]).read_text().splitlines()
        return [ln.strip() for ln in lines if ln.strip()]
    return [tok.strip() for tok in raw.split(",") if tok.strip()]


def _parse_constraint(raw: str) -> tuple[str, tuple[float, float]]:
    """name=lo:hi"""
    if "=" not in raw or ":" not in raw.split("=", 1)[1]:
        raise ValueError(f"constraint must look like name=lo:hi, got {raw!r}")
    name, rng = raw.split("=", 1)
    lo, hi = rng.split(":", 1)
    return name.strip(), (float(lo), float(hi))


def _emit(payload: dict, out: str | None) -> None:
    text = to_canonical_json(payload)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _models_table(payload: dict) -> str:
    rows = [
        (
            "id", "algo", "trees", "rules", "acc%", "prec%", "rec%", "overall%", "active",
        )
    ]
    for m in payload["models"]:
        met = m["metrics"]
        rows.append((
            m["id"], m["algorithm"], str(m["n_trees"]), str(m["n_rules"]),
            f"{met['accuracy_pct']:.1f}", f"{met['precision_pct']:.1f}",
            f"{met['recall_pct']:.1f}", f"{met['overall_pct']:.1f}",
            "*" if m["active"] else "",
        ))
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines)


def cmd_train(args) -> int:
    session = build_session(
        args.data, args.target,
        bins=args.bins, seed=args.seed,
        train_fraction=args.train_fraction,
        n_folds=args.folds, iterations=args.iterations,
    )
    session.save(args.out)
    payload = session.models_payload()
    print(f"trained {len(payload['models'])} models "
          f"({session.train.n_instances} train / {session.test.n_instances} test rows)")
    print(_models_table(payload))
    print(f"session written to {args.out}")
    return 0


def cmd_rules(args) -> int:
    session = Session.load(args.session)
    if args.models:
        session.set_active(_parse_ids(args.models))
    session.set_filters(
        min_support=args.min_support if args.min_support is not None else "keep",
        max_support=args.max_support if args.max_support is not None else "keep",
        max_impurity=args.max_impurity if args.max_impurity is not None else "keep",
        test_instance=args.test_instance if args.test_instance is not None else "keep",
        decimals=args.decimals,
    )
    payload = session.rules_payload()
    session.save(args.session)
    _emit(payload, args.out)
    if args.out:
        c = payload["counts"]
        print(f"{c['total']} rules: {c['visible']} visible, "
              f"{c['dimmed']} dimmed, {c['hidden']} hidden -> {args.out}")
    return 0


def cmd_embed(args) -> int:
    session = Session.load(args.session)
    overrides = {}
    if args.n_neighbors is not None:
        overrides["n_neighbors"] = args.n_neighbors
    if args.min_dist is not None:
        overrides["min_dist"] = args.min_dist
    if args.embed_seed is not None:
        overrides["seed"] = args.embed_seed
    if args.eps is not None:
        overrides["dbscan_eps"] = args.eps
    if args.min_pts is not None:
        overrides["dbscan_min_pts"] = args.min_pts
    if overrides:
        session.set_embedding_config(**overrides)
        session.save(args.session)
    payload = session.embedding_payload()
    _emit(payload, args.out)
    if args.out:
        r = payload["resolved"]
        print(f"{len(payload['points'])} points, {r['n_clusters']} clusters, "
              f"n_neighbors={r['n_neighbors']} -> {args.out}")
    return 0


def cmd_contrast(args) -> int:
    session = Session.load(args.session)
    selected = _parse_ids(args.selected)
    anchored = _parse_ids(args.anchored) if args.anchored else []
    if args.universe:
        universe = _parse_ids(args.universe)
    else:
        statuses = session.rule_statuses()
        universe = [rid for rid, st in statuses.items() if st != "hidden"]
    req = ContrastRequest(
        selected=tuple(selected),
        universe=tuple(universe),
        bins=args.bins,
        mode=args.mode,
        anchored=tuple(anchored),
    )
    payload = session.contrast_payload(req)
    session.save(args.session)
    _emit(payload, args.out)
    if args.out:
        top = payload["ranked_features"][0]
        print(f"top feature: {top['name']} (score {top['score']:.4f}) -> {args.out}")
    return 0


def cmd_agreement(args) -> int:
    session = Session.load(args.session)
    if args.conflicts:
        payload = session.conflicts_payload()
    else:
        if args.index is None:
            raise ValueError("pass --index <i> or --conflicts")
        payload = session.agreement(args.index)
        payload["fingerprint"] = session.fingerprint()
    _emit(payload, args.out)
    return 0


def cmd_export(args) -> int:
    session = Session.load(args.session)
    doc = session.export_manual_decisions(_parse_ids(args.rules))
    _emit(doc, args.out)
    session.save(args.session)
    if args.out:
        print(f"{len(doc['decisions'])} decisions -> {args.out}")
    return 0


def cmd_search(args) -> int:
    session = Session.load(args.session)
    space = default_space(session.train.n_features)
    if args.constrain:
        limits = dict(_parse_constraint(c) for c in args.constrain)
        space = constrain_space(space, limits)
    req = SearchRequest(
        algorithm=args.algorithm,
        iterations=args.iterations,
        space=space,
        seed=args.seed if args.seed is not None else session.seed + len(session.models),
    )
    ids, failures = session.run_search_sync(req)
    session.save(args.session)
    print(f"added {len(ids)} models: {', '.join(ids)}")
    for f in failures:
        print(f"candidate {f['candidate']} failed: {f['error']}", file=sys.stderr)
    print(_models_table(session.models_payload()))
    return 0


def cmd_serve(args) -> int:
    if args.session:
        session = Session.load(args.session)
    else:
        if not args.data or not args.target:
            raise ValueError("pass --session, or --data and --target")
        session = build_session(
            args.data, args.target,
            bins=args.bins, seed=args.seed,
            train_fraction=args.train_fraction,
            n_folds=args.folds, iterations=args.iterations,
        )
    serve(session, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rulescope",
        description="Train tree ensembles, extract interval rules, analyze the rule space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_args(p):
        p.add_argument("--data", required=True, help="CSV file with a header row")
        p.add_argument("--target", required=True, help="target column name")
        p.add_argument("--bins", type=int, default=None,
                       help="equal-width bins for a numeric target")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--train-fraction", type=float, default=0.9)
        p.add_argument("--folds", type=int, default=3)
        p.add_argument("--iterations", type=int, default=10,
                       help="search candidates per algorithm")

    p = sub.add_parser("train", help="train the initial model pool and save a session")
    add_data_args(p)
    p.add_argument("--out", required=True, help="session file to write")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("rules", help="extract and filter the active models' rules")
    p.add_argument("--session", required=True)
    p.add_argument("--models", help="comma list or @file of model ids to activate first")
    p.add_argument("--min-support", type=int, default=None)
    p.add_argument("--max-support", type=int, default=None)
    p.add_argument("--max-impurity", type=float, default=None)
    p.add_argument("--test-instance", type=int, default=None,
                   help="keep only rules matching this test row")
    p.add_argument("--decimals", type=int, default=None,
                   help="display rounding for interval bounds (0-15)")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_rules)

    p = sub.add_parser("embed", help="2-D layout of the current rule set")
    p.add_argument("--session", required=True)
    p.add_argument("--n-neighbors", type=int, default=None)
    p.add_argument("--min-dist", type=float, default=None)
    p.add_argument("--embed-seed", type=int, default=None)
    p.add_argument("--eps", type=float, default=None, help="density clustering radius")
    p.add_argument("--min-pts", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("contrast", help="rank features separating a rule group from the rest")
    p.add_argument("--session", required=True)
    p.add_argument("--selected", required=True, help="comma list or @file of rule ids")
    p.add_argument("--anchored", help="comma list or @file of rule ids to compare against")
    p.add_argument("--universe", help="comma list or @file; defaults to all non-hidden rules")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--mode", choices=["overlap", "difference"], default="overlap")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_contrast)

    p = sub.add_parser("agreement", help="vote breakdown for a test instance")
    p.add_argument("--session", required=True)
    p.add_argument("--index", type=int, default=None, help="test instance index")
    p.add_argument("--conflicts", action="store_true", help="list conflicted instances instead")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_agreement)

    p = sub.add_parser("export", help="export rules as a manual-decision document")
    p.add_argument("--session", required=True)
    p.add_argument("--rules", required=True, help="comma list or @file of rule ids")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("search", help="random hyperparameter search; adds models to the pool")
    p.add_argument("--session", required=True)
    p.add_argument("--algorithm", choices=["RF", "AB"], required=True)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--constrain", action="append", default=[],
                   help="narrow a range, e.g. --constrain max_depth=10:15")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("serve", help="start the JSON HTTP service")
    p.add_argument("--session", help="existing session file")
    p.add_argument("--data", help="CSV to train on if no session is given")
    p.add_argument("--target")
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-fraction", type=float, default=0.9)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--port", type=int, default=None,
                   help="defaults to $RULESCOPE_PORT or 8000")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DOMAIN_ERRORS as exc:
        msg = str(exc).strip("'\"")
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
