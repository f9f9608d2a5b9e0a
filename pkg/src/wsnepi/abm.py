"""Stochastic SEIRV agents on a bounded 2-D grid.

Two stepping modes share the same world structure:

- widget mode: percentage/duration controls (infectiousness, worm duration,
  exposure duration, recovery and vaccination chances); infection spreads by
  radius contact between infected and susceptible agents.
- rate mode: the eleven explicit model rates; every transition is a
  mean-field hazard computed from global compartment counts, and new
  susceptible agents arrive as a Poisson stream.

Within a tick, phases run in fixed order: movement, infection, progression,
resolution, waning. An agent that changes compartment during a tick is not
processed again by a later phase of the same tick, so a duration of d means
d full ticks spent in the compartment. Dead agents stay in the arrays but
take no actions; Dead is absorbing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from enum import IntEnum

import numpy as np

from ._rng import rng_for
from .core import EpidemicParams, effective_contact_rate, params_from_dict, validate
from .errors import ConfigInvalid
from .ode import Trace
from .spatial import SpatialHash

__all__ = [
    "Compartment",
    "GridBounds",
    "WidgetConfig",
    "RateConfig",
    "NodeAgent",
    "World",
    "DEFAULT_BOUNDS",
    "setup",
    "step",
    "step_rate",
    "run",
    "widget_config_from_dict",
    "rate_config_from_dict",
]


class Compartment(IntEnum):
    S = 0
    E = 1
    I = 2
    R = 3
    V = 4
    DEAD = 5


@dataclass(frozen=True)
class GridBounds:
    """Rectangular patch extent agents live in."""

    x_min: int
    x_max: int
    y_min: int
    y_max: int

    def check(self) -> None:
        if not self.x_min < self.x_max:
            raise ConfigInvalid("bounds", "x_min must be < x_max")
        if not self.y_min < self.y_max:
            raise ConfigInvalid("bounds", "y_min must be < y_max")


DEFAULT_BOUNDS = GridBounds(-13, 13, -12, 12)


@dataclass(frozen=True)
class WidgetConfig:
    """Run configuration for widget mode."""

    infectiousness_pct: float
    worm_duration_ticks: int
    exposure_duration_ticks: int
    n_nodes: int
    chance_recover_pct: float
    chance_vaccinate_pct: float
    bounds: GridBounds = DEFAULT_BOUNDS
    transmission_radius: float = 3.0
    initial_infected: int = 10
    mobility: bool = False
    immunity_duration_ticks: int | None = None
    seed: int = 0

    def check(self) -> None:
        self.bounds.check()
        for name in ("infectiousness_pct", "chance_recover_pct", "chance_vaccinate_pct"):
            value = getattr(self, name)
            if not 0 <= value <= 100:
                raise ConfigInvalid(name, "must be in [0, 100]")
        for name in ("worm_duration_ticks", "exposure_duration_ticks"):
            if getattr(self, name) < 1:
                raise ConfigInvalid(name, "must be >= 1")
        if self.n_nodes < 1:
            raise ConfigInvalid("n_nodes", "must be >= 1")
        if not self.transmission_radius > 0:
            raise ConfigInvalid("transmission_radius", "must be > 0")
        if self.initial_infected < 1:
            raise ConfigInvalid("initial_infected", "must be >= 1")
        if self.initial_infected > self.n_nodes:
            raise ConfigInvalid("initial_infected", "exceeds n_nodes")
        if self.immunity_duration_ticks is not None and self.immunity_duration_ticks < 1:
            raise ConfigInvalid("immunity_duration_ticks", "must be >= 1 or disabled")


@dataclass(frozen=True)
class RateConfig:
    """Run configuration for rate mode."""

    params: EpidemicParams
    n_nodes: int
    initial_infected: int = 10
    bounds: GridBounds = DEFAULT_BOUNDS
    seed: int = 0

    def check(self) -> None:
        self.bounds.check()
        violations = validate(self.params)
        if violations:
            raise ConfigInvalid("params", "; ".join(violations))
        if self.n_nodes < 1:
            raise ConfigInvalid("n_nodes", "must be >= 1")
        if self.initial_infected < 1:
            raise ConfigInvalid("initial_infected", "must be >= 1")
        if self.initial_infected > self.n_nodes:
            raise ConfigInvalid("initial_infected", "exceeds n_nodes")


@dataclass(frozen=True)
class NodeAgent:
    """Read-only view of one agent; the world stores agents column-wise."""

    id: int
    position: tuple[float, float]
    compartment: Compartment
    timer: int


@dataclass
class World:
    """Mutable simulation state; exactly one worker may step a world."""

    config: WidgetConfig | RateConfig
    rng: np.random.Generator
    x: np.ndarray
    y: np.ndarray
    compartment: np.ndarray
    timer: np.ndarray
    tick: int = 0
    cumulative_dead: int = 0
    cumulative_recruits: int = 0
    n0: int = 0

    @property
    def n_agents(self) -> int:
        return len(self.compartment)

    def counts(self) -> tuple[int, int, int, int, int]:
        c = np.bincount(self.compartment, minlength=6)
        return int(c[0]), int(c[1]), int(c[2]), int(c[3]), int(c[4])

    def agent(self, i: int) -> NodeAgent:
        return NodeAgent(
            id=i,
            position=(float(self.x[i]), float(self.y[i])),
            compartment=Compartment(int(self.compartment[i])),
            timer=int(self.timer[i]),
        )


def setup(config: WidgetConfig | RateConfig) -> World:
    """Place agents uniformly at random and seed the initial infection.

    Widget mode additionally vaccinates each remaining agent with probability
    chance_vaccinate_pct/100; rate mode leaves them susceptible (vaccination
    flows through the rho hazard during ticks).
    """
    config.check()
    rng = rng_for(config.seed)
    n = config.n_nodes
    b = config.bounds
    pos = rng.uniform((b.x_min, b.y_min), (b.x_max, b.y_max), size=(n, 2))
    compartment = np.full(n, Compartment.S, dtype=np.int8)
    timer = np.zeros(n, dtype=np.int64)

    infected = rng.choice(n, size=config.initial_infected, replace=False)
    compartment[infected] = Compartment.I
    if isinstance(config, WidgetConfig):
        timer[infected] = config.worm_duration_ticks
        rest = compartment == Compartment.S
        u = rng.random(n)
        vaccinated = rest & (u < config.chance_vaccinate_pct / 100.0)
        compartment[vaccinated] = Compartment.V

    return World(
        config=config,
        rng=rng,
        x=pos[:, 0].copy(),
        y=pos[:, 1].copy(),
        compartment=compartment,
        timer=timer,
        n0=n,
    )


def _reflect(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    below = values < lo
    values[below] = 2 * lo - values[below]
    above = values > hi
    values[above] = 2 * hi - values[above]
    return values


def step(world: World) -> World:
    """Advance a widget-mode world one tick and return it."""
    cfg = world.config
    if not isinstance(cfg, WidgetConfig):
        raise ConfigInvalid("config", "step() requires a widget-mode world")
    rng = world.rng
    comp = world.compartment
    timer = world.timer
    n = world.n_agents
    entered = np.zeros(n, dtype=bool)

    # 1. movement
    if cfg.mobility:
        live = np.flatnonzero(comp != Compartment.DEAD)
        angles = rng.random(live.size) * (2.0 * math.pi)
        world.x[live] = _reflect(world.x[live] + np.cos(angles), cfg.bounds.x_min, cfg.bounds.x_max)
        world.y[live] = _reflect(world.y[live] + np.sin(angles), cfg.bounds.y_min, cfg.bounds.y_max)

    # 2. infection: one trial per (susceptible, infected neighbor) pair
    sus = np.flatnonzero(comp == Compartment.S)
    inf = np.flatnonzero(comp == Compartment.I)
    if sus.size and inf.size:
        grid = SpatialHash(
            np.column_stack((world.x[inf], world.y[inf])), cell_size=cfg.transmission_radius
        )
        owners, _ = grid.pairs_within(
            np.column_stack((world.x[sus], world.y[sus])), cfg.transmission_radius
        )
        trials = rng.random(owners.size)
        hit = np.zeros(sus.size, dtype=bool)
        hit[owners[trials < cfg.infectiousness_pct / 100.0]] = True
        exposed = sus[hit]
        comp[exposed] = Compartment.E
        timer[exposed] = cfg.exposure_duration_ticks
        entered[exposed] = True

    # 3. progression
    progressing = np.flatnonzero((comp == Compartment.E) & ~entered)
    timer[progressing] -= 1
    became_infected = progressing[timer[progressing] <= 0]
    comp[became_infected] = Compartment.I
    timer[became_infected] = cfg.worm_duration_ticks
    entered[became_infected] = True

    # 4. resolution
    resolving = np.flatnonzero((comp == Compartment.I) & ~entered)
    timer[resolving] -= 1
    expiring = resolving[timer[resolving] <= 0]
    if expiring.size:
        u = rng.random(expiring.size)
        recovered = expiring[u < cfg.chance_recover_pct / 100.0]
        died = expiring[u >= cfg.chance_recover_pct / 100.0]
        comp[recovered] = Compartment.R
        if cfg.immunity_duration_ticks is not None:
            timer[recovered] = cfg.immunity_duration_ticks
        comp[died] = Compartment.DEAD
        world.cumulative_dead += died.size
        entered[recovered] = True

    # 5. waning
    if cfg.immunity_duration_ticks is not None:
        waning = np.flatnonzero((comp == Compartment.R) & ~entered)
        timer[waning] -= 1
        back = waning[timer[waning] <= 0]
        comp[back] = Compartment.S

    world.tick += 1
    return world


# Per-compartment outflow rates and destinations for rate mode.
def _hazard_table(p: EpidemicParams, infected_count: int):
    contact = effective_contact_rate(p)
    return {
        Compartment.S: (
            (contact * infected_count, Compartment.E),
            (p.tau_fail, Compartment.DEAD),
            (p.rho_vaccinate, Compartment.V),
        ),
        Compartment.E: ((p.tau_fail, Compartment.DEAD), (p.theta_incubate, Compartment.I)),
        Compartment.I: (
            (p.tau_fail, Compartment.DEAD),
            (p.omega_kill, Compartment.DEAD),
            (p.nu_recover, Compartment.R),
        ),
        Compartment.R: ((p.tau_fail, Compartment.DEAD), (p.phi_wane, Compartment.S)),
        Compartment.V: ((p.tau_fail, Compartment.DEAD), (p.xi_vax_wane, Compartment.S)),
    }


def step_rate(world: World) -> World:
    """Advance a rate-mode world one tick and return it.

    Each agent exits its compartment with probability 1 - exp(-h), where h
    sums the compartment's outflow rates at the start of the tick; the
    destination is chosen proportionally to the component rates. Recruits
    arrive afterwards as Poisson(lambda) new susceptible agents.
    """
    cfg = world.config
    if not isinstance(cfg, RateConfig):
        raise ConfigInvalid("config", "step_rate() requires a rate-mode world")
    p = cfg.params
    rng = world.rng
    comp = world.compartment
    table = _hazard_table(p, world.counts()[2])

    new_comp = comp.copy()
    deaths = 0
    for code in (Compartment.S, Compartment.E, Compartment.I, Compartment.R, Compartment.V):
        rates = np.array([r for r, _ in table[code]])
        hazard = float(rates.sum())
        if hazard == 0.0:
            continue
        members = np.flatnonzero(comp == code)
        if members.size == 0:
            continue
        exit_p = -math.expm1(-hazard)
        exiting = members[rng.random(members.size) < exit_p]
        if exiting.size == 0:
            continue
        cum = np.cumsum(rates) / hazard
        cum[-1] = 1.0
        dest_idx = np.searchsorted(cum, rng.random(exiting.size), side="right")
        for k, (_, dest) in enumerate(table[code]):
            chosen = exiting[dest_idx == k]
            new_comp[chosen] = dest
            if dest == Compartment.DEAD:
                deaths += chosen.size

    comp[:] = new_comp
    world.cumulative_dead += deaths

    if p.lambda_recruit > 0:
        arrivals = int(rng.poisson(p.lambda_recruit))
        if arrivals:
            b = cfg.bounds
            pos = rng.uniform((b.x_min, b.y_min), (b.x_max, b.y_max), size=(arrivals, 2))
            world.x = np.concatenate([world.x, pos[:, 0]])
            world.y = np.concatenate([world.y, pos[:, 1]])
            world.compartment = np.concatenate(
                [world.compartment, np.full(arrivals, Compartment.S, dtype=np.int8)]
            )
            world.timer = np.concatenate([world.timer, np.zeros(arrivals, dtype=np.int64)])
            world.cumulative_recruits += arrivals

    world.tick += 1
    return world


def run(config: WidgetConfig | RateConfig, ticks: int) -> Trace:
    """Set up and advance `ticks` steps; one trace row per tick.

    Deterministic: the same (config, seed) pair always yields the same trace.
    """
    if ticks < 1:
        raise ConfigInvalid("ticks", "must be >= 1")
    world = setup(config)
    advance = step if isinstance(config, WidgetConfig) else step_rate
    rows = np.empty((ticks, 7))
    for k in range(ticks):
        advance(world)
        rows[k] = (world.tick, *world.counts(), world.cumulative_dead)
    return Trace(
        t=rows[:, 0], s=rows[:, 1], e=rows[:, 2], i=rows[:, 3],
        r=rows[:, 4], v=rows[:, 5], dead=rows[:, 6],
    )


_WIDGET_FIELDS = {f.name for f in fields(WidgetConfig)}
_RATE_FIELDS = {f.name for f in fields(RateConfig)}


def _bounds_from(doc) -> GridBounds:
    if not isinstance(doc, dict) or set(doc) != {"x_min", "x_max", "y_min", "y_max"}:
        raise ConfigInvalid("bounds", "expected keys x_min, x_max, y_min, y_max")
    return GridBounds(**{k: int(v) for k, v in doc.items()})


def widget_config_from_dict(doc: dict) -> WidgetConfig:
    unknown = sorted(set(doc) - _WIDGET_FIELDS)
    if unknown:
        raise ConfigInvalid(unknown[0], "unknown widget config key")
    kwargs = dict(doc)
    if "bounds" in kwargs:
        kwargs["bounds"] = _bounds_from(kwargs["bounds"])
    cfg = WidgetConfig(**kwargs)
    cfg.check()
    return cfg


def rate_config_from_dict(doc: dict) -> RateConfig:
    unknown = sorted(set(doc) - _RATE_FIELDS)
    if unknown:
        raise ConfigInvalid(unknown[0], "unknown rate config key")
    kwargs = dict(doc)
    if "params" not in kwargs:
        raise ConfigInvalid("params", "rate config requires a params object")
    kwargs["params"] = params_from_dict(kwargs["params"])
    if "bounds" in kwargs:
        kwargs["bounds"] = _bounds_from(kwargs["bounds"])
    cfg = RateConfig(**kwargs)
    cfg.check()
    return cfg
