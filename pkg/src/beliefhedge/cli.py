"""Command-line entry point tying the toolkit together.

Subcommands: simulate, elicit-serve, estimate, analyze, tables, attenuation.
Options come from a single declarative JSON config file; flags override the
matching config keys.  Every run writes a manifest (inputs, seeds, version)
next to its outputs for reproducibility.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import pandas as pd

from . import __version__
from .econ import AttenuationConfig, attenuation_monte_carlo
from .elicitation import read_intervals
from .estimate import EstimationConfig, recover_population, results_to_frame
from .pipeline import build_analysis_table, emit_tables, occupation_probit, sample_filters
from .simulate import PopulationSpec, TruncatedNormal, sample_population, simulate_panel
from .tables import ame_column, emit_regression_table


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fp:
        return json.load(fp)


def _write_manifest(out: Path, command: str, settings: dict) -> None:
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "settings": settings,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _population_spec(section: dict, seed: int) -> PopulationSpec:
    kwargs = dict(section)
    for key in ("aversion", "sensitivity", "error_sd"):
        if key in kwargs:
            kwargs[key] = TruncatedNormal(**kwargs[key])
    kwargs.setdefault("count", 100)
    kwargs["seed"] = seed
    return PopulationSpec(**kwargs)


def cmd_simulate(args) -> int:
    config = _load_config(args.config).get("simulate", {})
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    depth = config.get("depth", 5)
    spec = _population_spec(config.get("population", {}), seed)
    agents = sample_population(spec)
    panel = simulate_panel(agents, waves=spec.waves, depth=depth, seed=seed)
    out = _out_dir(args)
    (out / "transcripts.jsonl").write_text(panel.to_jsonl())
    truths = pd.DataFrame(
        [
            {
                "respondent": rid,
                "aversion": prof.aversion,
                "sensitivity": prof.sensitivity,
                "error_sd": prof.error_sd,
            }
            for rid, prof in panel.truths.items()
        ]
    )
    truths.to_csv(out / "truths.csv", index=False)
    _write_manifest(out, "simulate", {"seed": seed, "depth": depth, "spec": dataclasses.asdict(spec)})
    print(f"wrote {len(agents)} respondents x {spec.waves} wave(s) to {out}")
    return 0


def cmd_estimate(args) -> int:
    config = _load_config(args.config).get("estimate", {})
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    est_config = EstimationConfig(**{**config.get("config", {}), "seed": seed})
    with open(args.transcripts) as fp:
        dataset = read_intervals(fp)
    results, frame = recover_population(dataset, est_config)
    out = _out_dir(args)
    results_to_frame(results).to_csv(out / "estimates.csv", index=False)
    frame.to_csv(out / "estimation_report.csv", index=False)
    _write_manifest(
        out,
        "estimate",
        {"seed": seed, "transcripts": args.transcripts, "config": dataclasses.asdict(est_config)},
    )
    print(f"estimated {len(results)} respondents -> {out / 'estimates.csv'}")
    return 0


def cmd_analyze(args) -> int:
    config = _load_config(args.config).get("analyze", {})
    history = pd.read_csv(args.history)
    attitudes = pd.read_csv(args.attitudes)
    covariates = pd.read_csv(args.covariates) if args.covariates else None
    table = build_analysis_table(history, attitudes, covariates, mode=args.mode)
    filters = [f for f in (args.filters.split(",") if args.filters else []) if f]
    out = _out_dir(args)
    columns = []
    for outcome in ("self_employed", "incorporated"):
        filtered = sample_filters(table, filters, outcome=outcome)
        controls = [c for c in config.get("controls", []) if c in filtered.columns]
        fit, ame = occupation_probit(filtered, outcome, controls=controls)
        columns.append(ame_column(outcome, fit, ame))
    table.to_csv(out / "analysis_rows.csv", index=False)
    terms = sorted({t for c in columns for t in c["rows"]})
    (out / "regressions.tsv").write_text(emit_regression_table(columns, terms))
    _write_manifest(
        out,
        "analyze",
        {"mode": args.mode, "filters": filters, "history": args.history, "attitudes": args.attitudes},
    )
    print(f"analysis table ({len(table)} rows) and regressions -> {out}")
    return 0


def cmd_tables(args) -> int:
    table = pd.read_csv(args.rows)
    out = _out_dir(args)
    rendered = emit_tables(table)
    for kind, text in rendered.items():
        (out / f"{kind}.tsv").write_text(text)
    _write_manifest(out, "tables", {"rows": args.rows})
    print(f"{', '.join(rendered)} -> {out}")
    return 0


def cmd_attenuation(args) -> int:
    config = _load_config(args.config).get("attenuation", {})
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    att_config = AttenuationConfig(**{**config, "seed": seed})
    curve = attenuation_monte_carlo(att_config)
    out = _out_dir(args)
    curve.table().to_csv(out / "attenuation_curve.csv", index=False)
    _write_manifest(out, "attenuation", {"seed": seed, "config": dataclasses.asdict(att_config)})
    print(curve.table().to_string(index=False))
    return 0


def cmd_elicit_serve(args) -> int:
    import uvicorn

    from .service import SessionStore, create_app

    app = create_app(SessionStore(args.log))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beliefhedge", description=__doc__)
    parser.add_argument("--config", default=None, help="declarative JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic elicitation panel")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="out/simulate")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="interval-censored MLE per respondent")
    p.add_argument("transcripts", help="line-delimited transcript file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="out/estimate")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("analyze", help="classification, covariates, probits")
    p.add_argument("--history", required=True, help="employment-history CSV")
    p.add_argument("--attitudes", required=True, help="estimates CSV (respondent, aversion, sensitivity)")
    p.add_argument("--covariates", default=None, help="covariates CSV")
    p.add_argument("--mode", choices=["working-age", "extended"], default="working-age")
    p.add_argument("--filters", default="", help="comma-separated filter names")
    p.add_argument("--out", default="out/analyze")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("tables", help="emit descriptive and correlation tables")
    p.add_argument("rows", help="analysis_rows.csv from analyze")
    p.add_argument("--out", default="out/tables")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("attenuation", help="measurement-error Monte Carlo")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="out/attenuation")
    p.set_defaults(func=cmd_attenuation)

    p = sub.add_parser("elicit-serve", help="run the HTTP elicitation service")
    p.add_argument("--log", default="sessions.jsonl")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_elicit_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
