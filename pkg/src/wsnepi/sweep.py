"""Factor-grid experiment designs executed into epidemic datasets.

A design names config fields and the levels to try. Factorial designs take
the full Cartesian product of levels; aligned designs pair the i-th level
of every factor. Every run gets its own seed derived from
(master_seed, run_id), so output never depends on worker count or order.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from itertools import product

import numpy as np

from . import __version__
from ._rng import derive_seed
from .abm import RateConfig, WidgetConfig, run
from .core import PARAM_FIELDS
from .dataset import Dataset
from .errors import AlignmentMismatch, ConfigInvalid, RunFailed

__all__ = ["ExperimentDesign", "RunSpec", "enumerate_runs", "run_sweep", "write_manifest"]

COMPARTMENT_COLUMNS = ("susceptible", "exposed", "infected", "recovered", "vaccinated", "dead")

_INT_FIELDS = {
    "worm_duration_ticks", "exposure_duration_ticks", "n_nodes",
    "initial_infected", "immunity_duration_ticks", "seed",
}


@dataclass(frozen=True, kw_only=True)
class ExperimentDesign:
    mode: str
    base_config: WidgetConfig | RateConfig
    factors: tuple[tuple[str, tuple], ...] = ()
    design_kind: str = "aligned"
    ticks: int = 100
    replicates: int = 1
    master_seed: int = 0

    def check(self) -> None:
        if self.mode not in ("widget", "rate"):
            raise ConfigInvalid("mode", "must be 'widget' or 'rate'")
        expected = WidgetConfig if self.mode == "widget" else RateConfig
        if not isinstance(self.base_config, expected):
            raise ConfigInvalid("base_config", f"mode {self.mode} needs a {expected.__name__}")
        if self.design_kind not in ("factorial", "aligned"):
            raise ConfigInvalid("design_kind", "must be 'factorial' or 'aligned'")
        if self.ticks < 1:
            raise ConfigInvalid("ticks", "must be >= 1")
        if self.replicates < 1:
            raise ConfigInvalid("replicates", "must be >= 1")
        valid = {f.name for f in fields(type(self.base_config))} - {"bounds", "params", "seed"}
        if self.mode == "rate":
            valid |= set(PARAM_FIELDS)
        for name, levels in self.factors:
            if name not in valid:
                raise ConfigInvalid(name, "not a sweepable config field")
            if len(levels) == 0:
                raise ConfigInvalid(name, "factor has no levels")
        if self.design_kind == "aligned" and self.factors:
            lengths = {len(levels) for _, levels in self.factors}
            if len(lengths) > 1:
                raise AlignmentMismatch(
                    f"aligned factors must share one level count, got {sorted(lengths)}"
                )


@dataclass(frozen=True)
class RunSpec:
    run_id: int
    factor_values: tuple
    config: WidgetConfig | RateConfig


def _apply_factor(config, name: str, value):
    if name in _INT_FIELDS:
        value = int(value)
    elif name == "mobility":
        value = bool(value)
    else:
        value = float(value)
    if name in PARAM_FIELDS and isinstance(config, RateConfig):
        return replace(config, params=replace(config.params, **{name: value}))
    return replace(config, **{name: value})


def enumerate_runs(design: ExperimentDesign) -> list[RunSpec]:
    """Expand the design into an ordered run list, one entry per
    config x replicate, each tagged with its position as run_id."""
    design.check()
    names = [name for name, _ in design.factors]
    if not design.factors:
        combos = [()]
    elif design.design_kind == "factorial":
        combos = list(product(*(levels for _, levels in design.factors)))
    else:
        combos = list(zip(*(levels for _, levels in design.factors)))

    runs = []
    run_id = 0
    for combo in combos:
        for _ in range(design.replicates):
            config = design.base_config
            for name, value in zip(names, combo):
                config = _apply_factor(config, name, value)
            config = replace(config, seed=derive_seed(design.master_seed, run_id))
            config.check()
            runs.append(RunSpec(run_id=run_id, factor_values=tuple(combo), config=config))
            run_id += 1
    return runs


def _execute(args):
    spec, ticks = args
    trace = run(spec.config, ticks)
    block = np.empty((len(trace), 2 + len(spec.factor_values) + 6))
    block[:, 0] = spec.run_id
    block[:, 1] = trace.t
    for j, value in enumerate(spec.factor_values):
        block[:, 2 + j] = float(value)
    block[:, -6] = trace.s
    block[:, -5] = trace.e
    block[:, -4] = trace.i
    block[:, -3] = trace.r
    block[:, -2] = trace.v
    block[:, -1] = trace.dead
    return block


def run_sweep(design: ExperimentDesign, parallelism: int = 1) -> Dataset:
    """Execute every run and concatenate the records ordered by
    (run_id, tick). Output is identical for any parallelism level; a failed
    run aborts the sweep with its run_id attached."""
    if parallelism < 1:
        raise ConfigInvalid("parallelism", "must be >= 1")
    runs = enumerate_runs(design)
    jobs = [(spec, design.ticks) for spec in runs]
    blocks: list[np.ndarray | None] = [None] * len(runs)
    if parallelism == 1:
        for k, job in enumerate(jobs):
            try:
                blocks[k] = _execute(job)
            except Exception as e:
                raise RunFailed(runs[k].run_id, e) from e
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = [pool.submit(_execute, job) for job in jobs]
            for k, fut in enumerate(futures):
                try:
                    blocks[k] = fut.result()
                except Exception as e:
                    raise RunFailed(runs[k].run_id, e) from e
    columns = ["run_id", "tick", *(name for name, _ in design.factors), *COMPARTMENT_COLUMNS]
    values = np.vstack(blocks) if blocks else np.empty((0, len(columns)))
    return Dataset(columns=columns, values=values)


def write_manifest(design: ExperimentDesign, path: str) -> None:
    """Record the design, derived per-run seeds, and software version next
    to the dataset so a sweep can be reproduced exactly."""
    runs = enumerate_runs(design)
    doc = {
        "version": __version__,
        "mode": design.mode,
        "design_kind": design.design_kind,
        "ticks": design.ticks,
        "replicates": design.replicates,
        "master_seed": design.master_seed,
        "factors": [[name, list(levels)] for name, levels in design.factors],
        "base_config": dataclasses.asdict(design.base_config),
        "runs": [
            {
                "run_id": spec.run_id,
                "seed": spec.config.seed,
                "factors": {name: value for (name, _), value in zip(design.factors, spec.factor_values)},
            }
            for spec in runs
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
