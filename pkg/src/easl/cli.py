"""Operator entry point: run simulations, serve campaigns, score logs,
export reports.

Config precedence is flags > config file > preset > defaults, and the
effective configuration is echoed into every report. Output defaults to
$EASL_DATA_DIR (or ./easl-data).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .metrics import bin_histogram, pearson, spearman
from .models import Method, ModelConfig, ModelState
from .persistence import (
    PersistenceError,
    apply_record_to_model,
    default_data_dir,
    export_scores,
    load_items,
    read_log,
    replay,
    write_report,
)
from .simulator import (
    AnnotatorModel,
    ExperimentReport,
    make_oracle,
    make_system_latents,
    run_campaign,
    run_system_ranking,
)

# The three experiment shapes: two 150-item annotation campaigns (10
# iterations of 20 five-item HITs against differently shaped oracles) and a
# 10-system ranking comparison at matched budgets.
PRESETS: dict[str, dict] = {
    "lexical-150": {
        "mode": "campaign",
        "oracle": "log_frequency_like",
        "n_items": 150,
        "n": 5,
        "iterations": 10,
        "hits_per_iter": 20,
        "noise": 0.15,
        "methods": ["da", "ra-gaussian", "ra-beta", "easl"],
    },
    "political-150": {
        "mode": "campaign",
        "oracle": "bimodal",
        "n_items": 150,
        "n": 5,
        "iterations": 10,
        "hits_per_iter": 20,
        "noise": 0.15,
        "methods": ["da", "ra-gaussian", "ra-beta", "easl"],
    },
    "mt-10-systems": {
        "mode": "system-ranking",
        "systems": 10,
        "segments": 300,
        "n": 5,
        "noise": 0.2,
        "budget": 3000,
        "methods": ["da", "easl"],
    },
}

CAMPAIGN_DEFAULTS = {
    "mode": "campaign",
    "oracle": "uniform",
    "n_items": 50,
    "method": None,  # None = all methods in the preset/default list
    "methods": ["da", "ra-gaussian", "ra-beta", "easl"],
    "gamma": 0.1,
    "epsilon": 0.1,
    "n": 5,
    "iterations": 10,
    "hits_per_iter": None,
    "noise": 0.15,
    "tie_threshold": 0.1,  # matches the annotator model's default window
    "seed": 0,
    "systems": 10,
    "segments": 300,
    "budget": 3000,
}


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _effective_config(args: argparse.Namespace) -> dict:
    cfg = dict(CAMPAIGN_DEFAULTS)
    if args.preset:
        if args.preset not in PRESETS:
            raise ValueError(f"unknown preset {args.preset!r}")
        cfg.update(PRESETS[args.preset])
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        if not isinstance(file_cfg, dict):
            raise ValueError("config file must hold a JSON object")
        cfg.update(file_cfg)
    for key in (
        "oracle",
        "n_items",
        "method",
        "gamma",
        "epsilon",
        "n",
        "iterations",
        "hits_per_iter",
        "noise",
        "seed",
        "budget",
    ):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg.get("method"):
        cfg["methods"] = [cfg["method"]]
    return cfg


def _write_curves_csv(reports: list[ExperimentReport], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "method",
                "iteration",
                "judgments",
                "spearman",
                "spearman_lo",
                "spearman_hi",
                "pearson",
                "pearson_lo",
                "pearson_hi",
            ]
        )
        for report in reports:
            for stats in report.iterations:
                sp, pe = stats.spearman, stats.pearson
                writer.writerow(
                    [
                        report.method,
                        stats.iteration,
                        stats.judgments_total,
                        "" if sp is None else repr(sp.point),
                        "" if sp is None else repr(sp.ci_low),
                        "" if sp is None else repr(sp.ci_high),
                        "" if pe is None else repr(pe.point),
                        "" if pe is None else repr(pe.ci_low),
                        "" if pe is None else repr(pe.ci_high),
                    ]
                )


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        cfg = _effective_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    out_dir = Path(args.out) if args.out else default_data_dir() / "simulate"
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = int(cfg["seed"])
    reports: list[ExperimentReport] = []

    if cfg["mode"] == "system-ranking":
        system_ids, segment_ids, latents = make_system_latents(
            int(cfg["systems"]), int(cfg["segments"]), rng_seed=seed
        )
        for method in cfg["methods"]:
            annot = AnnotatorModel(noise_scale=float(cfg["noise"]), rng_seed=seed + 1)
            model_cfg = ModelConfig(
                method=Method(method),
                gamma=float(cfg["gamma"]),
                epsilon=float(cfg["epsilon"]),
                n=int(cfg["n"]),
            )
            report = run_system_ranking(
                system_ids,
                segment_ids,
                latents,
                annot,
                model_cfg,
                budget=int(cfg["budget"]),
                rng_seed=seed,
                bootstrap_resamples=100,
            )
            reports.append(report)
    else:
        oracle = make_oracle(
            str(cfg["oracle"]),
            int(cfg["n_items"]),
            rng_seed=seed,
            path=cfg.get("oracle_path"),
        )
        for method in cfg["methods"]:
            annot = AnnotatorModel(
                noise_scale=float(cfg["noise"]),
                tie_threshold=float(cfg.get("tie_threshold", 0.1)),
                rng_seed=seed + 1,
            )
            model_cfg = ModelConfig(
                method=Method(method),
                gamma=float(cfg["gamma"]),
                epsilon=float(cfg["epsilon"]),
                n=int(cfg["n"]),
            )
            report = run_campaign(
                oracle,
                annot,
                model_cfg,
                iterations=int(cfg["iterations"]),
                hits_per_iteration=cfg["hits_per_iter"],
                rng_seed=seed,
            )
            reports.append(report)

    for report in reports:
        write_report(report.to_dict(), out_dir / f"report-{report.method}.jsonl")
        with open(out_dir / f"scores-{report.method}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["item_id", "score", "variance", "count"])
            for row in report.final_scores:
                writer.writerow(
                    [row["item_id"], repr(row["score"]), repr(row["variance"]), row["count"]]
                )
    _write_curves_csv(reports, out_dir / "curves.csv")
    for report in reports:
        rho = report.final_spearman()
        summary = "degenerate" if report.degenerate else (
            "spearman=n/a" if rho is None else f"spearman={rho:.4f}"
        )
        print(
            f"{report.method}: {report.judgment_count} judgments, {summary}"
        )
    print(f"wrote {out_dir}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import SessionSettings, create_app, register_session

    try:
        items = load_items(args.items)
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
        model_cfg = ModelConfig.from_dict(raw.get("config", raw))
        settings = SessionSettings(
            iterations=int(raw.get("iterations", 10)),
            hits_per_iteration=raw.get("hits_per_iteration"),
            seed=int(raw.get("seed", 0)),
            lease_timeout=float(raw.get("lease_timeout", 600.0)),
            annotator_hit_cap=raw.get("annotator_hit_cap"),
            allow_anchor_comparators=bool(raw.get("allow_anchor_comparators", False)),
        )
    except (OSError, ValueError, KeyError, PersistenceError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    app = create_app(data_dir=args.data_dir)
    session = register_session(app, items, model_cfg, settings)
    print(f"session {session.session_id} ({model_cfg.method.value}) on port {args.port}")
    print(f"observation log: {session.log.path}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    try:
        expected = None
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
            expected = ModelConfig.from_dict(raw.get("config", raw))
        model = replay(args.log, expected)
    except (OSError, ValueError, PersistenceError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    print(f"{'item_id':<24} {'score':>10} {'variance':>12} {'count':>6}")
    for row in model.scores_table():
        print(f"{row.item_id:<24} {row.score:>10.6f} {row.variance:>12.6g} {row.count:>6}")
    return 0


def _export_correlations(model_cfg, items, records, meta, out_path: Path) -> bool:
    oracle = {i.item_id: i.oracle_value for i in items if i.oracle_value is not None}
    if len(oracle) != len(items) or len(items) < 2:
        return False
    n = model_cfg.n if model_cfg.method != Method.DA else 1
    hits_per_iter = meta.get("hits_per_iteration") or (
        len(items) if model_cfg.method == Method.DA else max(len(items) // n, 1)
    )
    model = ModelState(model_cfg, [i.item_id for i in items])
    item_ids = [i.item_id for i in items]
    oracle_values = [oracle[i] for i in item_ids]
    rows: list[list] = []

    def correlation_row(judgments: int) -> list:
        scores = [model.score(i) for i in item_ids]
        try:
            sp = spearman(oracle_values, scores)
            pe = pearson(oracle_values, scores)
        except ValueError:
            return [judgments, "", ""]
        return [judgments, repr(sp), repr(pe)]

    # A correlation point lands at every iteration boundary: after each run
    # of hits_per_iter distinct hit ids (records of one hit are contiguous).
    completed_hits = 0
    current_hit: str | None = None
    applied = 0
    for record in records:
        if current_hit is not None and record.hit_id != current_hit:
            completed_hits += 1
            if completed_hits % hits_per_iter == 0:
                rows.append(correlation_row(applied))
        current_hit = record.hit_id
        apply_record_to_model(model, record)
        applied += 1
    if not rows or rows[-1][0] != applied:
        rows.append(correlation_row(applied))
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["observations", "spearman", "pearson"])
        writer.writerows(rows)
    return True


def cmd_export(args: argparse.Namespace) -> int:
    out_dir = Path(args.out) if args.out else default_data_dir() / "export"
    try:
        data = read_log(args.log)
        model = replay(args.log)
    except (OSError, PersistenceError, ValueError) as exc:
        return _fail(str(exc))
    out_dir.mkdir(parents=True, exist_ok=True)
    export_scores(model, out_dir / "scores.csv")

    scores = [min(max(model.score(i.item_id), 0.0), 1.0) for i in data.items]
    bins = bin_histogram(scores, bins=5)
    with open(out_dir / "histogram.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_low", "bin_high", "count"])
        for b, count in enumerate(bins):
            writer.writerow([b / len(bins), (b + 1) / len(bins), count])

    wrote_corr = _export_correlations(
        data.cfg, data.items, data.records, data.meta, out_dir / "correlations.csv"
    )
    print(f"wrote {out_dir} (correlations: {'yes' if wrote_corr else 'no oracle values'})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="easl",
        description="Adaptive scalar annotation: simulate campaigns, serve live ones, score logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run simulated campaigns, write reports and curves")
    sim.add_argument("--preset", choices=sorted(PRESETS), help="experiment preset")
    sim.add_argument("--config", help="JSON config file (overrides preset)")
    sim.add_argument("--method", choices=[m.value for m in Method], help="run a single method")
    sim.add_argument("--oracle", help="oracle kind for campaign mode")
    sim.add_argument("--n-items", dest="n_items", type=int)
    sim.add_argument("--gamma", type=float)
    sim.add_argument("--epsilon", type=float)
    sim.add_argument("--n", type=int, help="HIT size")
    sim.add_argument("--iterations", type=int)
    sim.add_argument("--hits-per-iter", dest="hits_per_iter", type=int)
    sim.add_argument("--noise", type=float, help="annotator noise scale")
    sim.add_argument("--budget", type=int, help="system-ranking budget")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="output directory")
    sim.set_defaults(func=cmd_simulate)

    srv = sub.add_parser("serve", help="start the live annotation service")
    srv.add_argument("--items", required=True, help="items file")
    srv.add_argument("--config", required=True, help="session config JSON")
    srv.add_argument("--port", type=int, default=8765)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--data-dir", dest="data_dir", help="where observation logs land")
    srv.set_defaults(func=cmd_serve)

    sco = sub.add_parser("score", help="replay a log and print the ranked table")
    sco.add_argument("--log", required=True)
    sco.add_argument("--config", help="refuse unless the log was written under this config")
    sco.set_defaults(func=cmd_score)

    exp = sub.add_parser("export", help="emit score table, histogram and correlation curves")
    exp.add_argument("--log", required=True)
    exp.add_argument("--out", help="output directory")
    exp.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
