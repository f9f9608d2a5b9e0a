"""Command-line surface tying the pipeline together.

Subcommands mirror the workflow: simulate (`ode`, `abm`), sweep a design
into a dataset (`sweep`), preprocess it (`prep`), benchmark regressors
(`bench`), and render tables/charts (`report`). Every stage validates its
inputs before doing any work, writes its documented artifact, and exits 0
on success; failures print one machine-parseable line to stderr
(`error: <Kind>: <detail>`) and exit nonzero. All randomness flows from
explicit seeds; no stage reads ambient entropy, so reruns with identical
inputs rewrite identical artifacts (training wall times excepted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace

from . import __version__
from .abm import rate_config_from_dict, run, widget_config_from_dict
from .core import CompartmentState, params_from_dict
from .dataprep import (
    clean,
    merge_and_rename,
    profile,
    split_and_weight,
    standard_scale,
    transform_from_dict,
    yeo_johnson,
    zscore_filter,
)
from .dataset import Dataset, load_dataset
from .errors import ConfigInvalid, WsnEpiError
from .ode import DEFAULT_DT, OdeRun, integrate_rk4
from .regression import RegressorSpec, benchmark, grid_search
from .report import render_report, reports_from_json, reports_to_json
from .sweep import ExperimentDesign, run_sweep, write_manifest

__all__ = ["main", "DEFAULT_ROSTER", "PipelineConfig"]

_CLEAN_OPS = {"drop_columns", "drop_all_zero_rows", "round", "drop_rows_where"}

#: The benchmark roster used when --models is not given: the studied
#: algorithm family minus the two excluded kinds, one boosted entry.
DEFAULT_ROSTER = (
    RegressorSpec("ols", label="LiR"),
    RegressorSpec("lasso", alpha=1.0, label="LaR"),
    RegressorSpec("ridge", alpha=1.0, label="RiR"),
    RegressorSpec("elastic_net", alpha=1.0, l1_ratio=0.5, label="ENR"),
    RegressorSpec("knn", k=5, label="KNN"),
    RegressorSpec("tree", label="DT"),
    RegressorSpec("forest", n_trees=100, label="RF"),
    RegressorSpec("gbt", n_rounds=100, label="GBT"),
)


@dataclass(frozen=True)
class PipelineConfig:
    """One validated stage invocation: inputs must exist and the output
    location must be writable before any computation starts."""

    stage: str
    inputs: tuple[str, ...]
    output: str | None = None

    def check(self) -> None:
        for path in self.inputs:
            if not os.path.exists(path):
                raise FileNotFoundError(2, "no such file", path)
        if self.output:
            parent = os.path.dirname(os.path.abspath(self.output))
            if not os.path.isdir(parent):
                raise FileNotFoundError(2, "output directory does not exist", parent)


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


# --- subcommand handlers -------------------------------------------------

def cmd_ode(args) -> int:
    PipelineConfig("ode", (args.config,), args.out).check()
    doc = _load_json(args.config)
    if "params" not in doc or "init" not in doc:
        raise ConfigInvalid("config", "ode config needs 'params' and 'init' objects")
    init_doc = doc["init"]
    bad = set(init_doc) - {"s", "e", "i", "r", "v", "t"}
    if bad:
        raise ConfigInvalid("init", f"unknown init key(s): {sorted(bad)}")
    ode_run = OdeRun(
        params=params_from_dict(doc["params"]),
        init=CompartmentState(
            s=float(init_doc.get("s", 0.0)), e=float(init_doc.get("e", 0.0)),
            i=float(init_doc.get("i", 0.0)), r=float(init_doc.get("r", 0.0)),
            v=float(init_doc.get("v", 0.0)), t=float(init_doc.get("t", 0.0)),
        ),
        dt=float(doc.get("dt", DEFAULT_DT)),
        steps=int(doc.get("steps", 100)),
    )
    integrate_rk4(ode_run).to_csv(args.out)
    _say(args, f"wrote {args.out}")
    return 0


def cmd_abm(args) -> int:
    PipelineConfig("abm", (args.config,), args.out).check()
    doc = _load_json(args.config)
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.mode == "widget":
        config = widget_config_from_dict(doc)
    else:
        config = rate_config_from_dict(doc)
    run(config, args.ticks).to_csv(args.out)
    _say(args, f"wrote {args.out}")
    return 0


def _design_from_doc(doc: dict, seed_override: int | None) -> ExperimentDesign:
    mode = doc.get("mode")
    if mode not in ("widget", "rate"):
        raise ConfigInvalid("mode", "design needs mode 'widget' or 'rate'")
    base_doc = doc.get("base_config")
    if not isinstance(base_doc, dict):
        raise ConfigInvalid("base_config", "design needs a base_config object")
    base = widget_config_from_dict(base_doc) if mode == "widget" else rate_config_from_dict(base_doc)
    factors = tuple((name, tuple(levels)) for name, levels in doc.get("factors", []))
    master_seed = doc.get("master_seed", 0) if seed_override is None else seed_override
    return ExperimentDesign(
        mode=mode,
        base_config=base,
        factors=factors,
        design_kind=doc.get("design_kind", "aligned"),
        ticks=int(doc.get("ticks", 100)),
        replicates=int(doc.get("replicates", 1)),
        master_seed=int(master_seed),
    )


def cmd_sweep(args) -> int:
    PipelineConfig("sweep", (args.design,), args.out).check()
    design = _design_from_doc(_load_json(args.design), args.seed)
    data = run_sweep(design, parallelism=args.parallel)
    data.to_csv(args.out)
    manifest = args.out + ".manifest.json"
    write_manifest(design, manifest)
    _say(args, f"wrote {args.out} ({data.n_rows} rows) and {manifest}")
    return 0


def _apply_prep_step(data: Dataset, step: dict, fitted: list) -> Dataset:
    op = step.get("op")
    if op in _CLEAN_OPS:
        return clean(data, [step])
    if op == "standard_scale":
        scaler = standard_scale(data, step.get("columns"))
        fitted.append(scaler)
        return scaler.apply(data)
    if op == "yeo_johnson":
        transform = yeo_johnson(data, step.get("columns"))
        fitted.append(transform)
        return transform.apply(data)
    if op == "zscore_filter":
        return zscore_filter(data, step.get("columns"), float(step.get("threshold", 3.0)))
    if op == "apply_transforms":
        for doc in _load_json(step["path"]):
            data = transform_from_dict(doc).apply(data)
        return data
    raise ConfigInvalid("op", f"unknown prep step {op!r}")


def cmd_prep(args) -> int:
    paths = tuple(p for p in args.infile.split(",") if p)
    config_inputs = (args.config,) if args.config else ()
    PipelineConfig("prep", paths + config_inputs, args.out).check()
    doc = _load_json(args.config) if args.config else {}
    data = merge_and_rename([load_dataset(p) for p in paths], doc.get("renames", {}))
    fitted: list = []
    for step in doc.get("steps", []):
        data = _apply_prep_step(data, step, fitted)
    data.to_csv(args.out)
    _say(args, f"wrote {args.out} ({data.n_rows} rows, {data.n_cols} columns)")
    if args.profile:
        opts = doc.get("profile", {})
        report = profile(
            data,
            corr_threshold=float(opts.get("corr_threshold", 0.9)),
            skew_threshold=float(opts.get("skew_threshold", 2.0)),
        )
        with open(args.profile, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        _say(args, f"wrote {args.profile}")
    if args.transforms:
        with open(args.transforms, "w", encoding="utf-8") as fh:
            json.dump([t.to_dict() for t in fitted], fh, indent=2, sort_keys=True)
            fh.write("\n")
        _say(args, f"wrote {args.transforms}")
    return 0


def _roster_from_args(args) -> list[RegressorSpec]:
    if not args.models:
        return list(DEFAULT_ROSTER)
    entries = _load_json(args.models)
    if not isinstance(entries, list) or not entries:
        raise ConfigInvalid("models", "roster must be a non-empty JSON array")
    roster = []
    for entry in entries:
        try:
            spec = RegressorSpec(**entry)
        except TypeError as e:
            raise ConfigInvalid("models", str(e)) from None
        spec.check()
        roster.append(spec)
    return roster


def cmd_bench(args) -> int:
    inputs = (args.infile,) + ((args.models,) if args.models else ())
    inputs += (args.grid,) if args.grid else ()
    PipelineConfig("bench", inputs, args.out).check()
    data = load_dataset(args.infile)
    roster = _roster_from_args(args)
    identifiers = tuple(c for c in args.identifiers.split(",") if c)
    features = [c for c in args.features.split(",") if c] if args.features else None

    if args.grid:
        grid_doc = _load_json(args.grid)
        if not isinstance(grid_doc, dict):
            raise ConfigInvalid("grid", "grid must map regressor kinds to parameter lists")
        train, _ = split_and_weight(data, args.split, args.seed)
        if features is None:
            skip = set(identifiers) | {args.target}
            feature_columns = [c for c in train.columns if c not in skip]
        else:
            feature_columns = features
        X_train = train.take_columns(feature_columns).values
        y_train = train.col(args.target)
        for k, spec in enumerate(roster):
            if spec.kind not in grid_doc:
                continue
            candidates = [replace(spec, **params) for params in grid_doc[spec.kind]]
            result = grid_search(candidates, X_train, y_train, folds=args.folds, seed=args.seed)
            roster[k] = result.best_spec
            _say(args, f"grid search {spec.display_name}: chose {result.best_spec}")

    reports = benchmark(
        data,
        args.target,
        roster,
        val_fraction=args.split,
        seed=args.seed,
        weighting=args.weighting,
        identifiers=identifiers,
        feature_columns=features,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(reports_to_json(reports))
    _say(args, f"wrote {args.out} ({len(reports)} models)")
    return 0


def cmd_report(args) -> int:
    PipelineConfig("report", (args.infile,)).check()
    with open(args.infile, encoding="utf-8") as fh:
        reports = reports_from_json(fh.read())
    for path in render_report(reports, args.format, args.out):
        _say(args, f"wrote {path}")
    return 0


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsnepi",
        description="Simulate SEIRV worm epidemics in sensor networks, sweep "
        "configurations into datasets, and benchmark regressors on them.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ode", help="integrate the rate equations to a trace CSV")
    p.add_argument("--config", required=True, help="JSON with params, init, dt, steps")
    p.add_argument("--out", required=True, help="output trace CSV")
    p.set_defaults(func=cmd_ode)

    p = sub.add_parser("abm", help="run one agent simulation to a trace CSV")
    p.add_argument("--config", required=True, help="JSON agent config (keys match config fields)")
    p.add_argument("--mode", required=True, choices=("widget", "rate"))
    p.add_argument("--ticks", type=int, default=100, help="ticks to simulate (default 100)")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", required=True, help="output trace CSV")
    p.set_defaults(func=cmd_abm)

    p = sub.add_parser("sweep", help="run an experiment design into a dataset CSV")
    p.add_argument("--design", required=True, help="JSON experiment design")
    p.add_argument("--out", required=True, help="output dataset CSV (manifest written alongside)")
    p.add_argument("--seed", type=int, default=None, help="override the design master_seed")
    p.add_argument("--parallel", type=int, default=1, help="worker processes (default 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("prep", help="merge, clean, and transform dataset CSVs")
    p.add_argument("--in", dest="infile", required=True,
                   help="input CSV, or several comma-separated CSVs to merge")
    p.add_argument("--config", default=None, help="JSON prep config with renames and steps")
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--profile", default=None, help="also write a profile report JSON here")
    p.add_argument("--transforms", default=None, help="also write fitted transforms JSON here")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("bench", help="benchmark regressors on a dataset")
    p.add_argument("--in", dest="infile", required=True, help="input dataset CSV")
    p.add_argument("--target", required=True, help="target column (e.g. infected or recovered)")
    p.add_argument("--models", default=None, help="JSON roster of regressor specs")
    p.add_argument("--grid", default=None, help="JSON map of kind -> hyperparameter grids")
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds (default 5)")
    p.add_argument("--split", type=float, default=0.2, help="validation fraction (default 0.2)")
    p.add_argument("--seed", type=int, default=0, help="split/search seed (default 0)")
    p.add_argument("--weighting", choices=("none", "inverse_frequency_deciles"), default="none")
    p.add_argument("--identifiers", default="run_id",
                   help="comma-separated identifier columns excluded from features")
    p.add_argument("--features", default=None,
                   help="comma-separated feature columns (default: all but target/identifiers)")
    p.add_argument("--out", default="report.json", help="output report JSON (default report.json)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="render a report JSON as md, csv, or svg charts")
    p.add_argument("--in", dest="infile", required=True, help="report JSON from bench")
    p.add_argument("--format", required=True, choices=("md", "csv", "svg"))
    p.add_argument("--out", required=True,
                   help="output file (md, csv) or directory (svg)")
    p.set_defaults(func=cmd_report)

    for sp in sub.choices.values():
        sp.add_argument("--quiet", action="store_true", help="suppress progress lines")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WsnEpiError as e:
        message = str(e).replace("\n", " ")
        print(f"error: {type(e).__name__}: {message}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: MissingFile: {e.filename}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as e:
        print(f"error: BadJson: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
