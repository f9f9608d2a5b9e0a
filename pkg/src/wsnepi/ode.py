"""Deterministic integration of the SEIRV rate equations.

The right-hand sides, with c = beta*sigma*pi*r0^2:

    dS/dt = lambda - c*S*I - tau*S - rho*S + phi*R + xi*V
    dE/dt = c*S*I - (tau + theta)*E
    dI/dt = theta*E - (tau + omega + nu)*I
    dR/dt = nu*I - (tau + phi)*R
    dV/dt = rho*S - (tau + xi)*V

Integration is classic fixed-step fourth-order Runge-Kutta: short runs,
and bit-reproducibility matters more than step economy.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ._text import format_cell
from .core import CompartmentState, EpidemicParams, effective_contact_rate, validate
from .errors import ConfigInvalid, StepTooLarge

__all__ = ["OdeRun", "Trace", "derivatives", "integrate_rk4", "DEFAULT_DT", "UNDERSHOOT_TOL"]

#: Default step: at least 100x smaller than the fastest plausible rate scale.
DEFAULT_DT = 0.01

#: Negative values above this magnitude signal instability, below it roundoff.
UNDERSHOOT_TOL = 1e-9

_COMPARTMENT_NAMES = ("susceptible", "exposed", "infected", "recovered", "vaccinated")


@dataclass
class Trace:
    """Time-ordered compartment counts from one simulation run.

    ``dead`` is populated by the agent engine (cumulative count); the ODE
    engine leaves it None and serializes a derived total column instead.
    """

    t: np.ndarray
    s: np.ndarray
    e: np.ndarray
    i: np.ndarray
    r: np.ndarray
    v: np.ndarray
    dead: np.ndarray | None = None

    def total(self) -> np.ndarray:
        return self.s + self.e + self.i + self.r + self.v

    def __len__(self) -> int:
        return len(self.t)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            if self.dead is None:
                writer.writerow(["t", *_COMPARTMENT_NAMES, "total"])
                extra = self.total()
            else:
                writer.writerow(["tick", *_COMPARTMENT_NAMES, "dead"])
                extra = self.dead
            for k in range(len(self.t)):
                row = [self.t[k], self.s[k], self.e[k], self.i[k], self.r[k], self.v[k], extra[k]]
                writer.writerow([format_cell(x) for x in row])


@dataclass(frozen=True)
class OdeRun:
    """One integration job: parameters, initial state, step size, step count."""

    params: EpidemicParams
    init: CompartmentState
    dt: float = DEFAULT_DT
    steps: int = 1

    def check(self) -> None:
        violations = validate(self.params)
        if violations:
            raise ConfigInvalid("params", "; ".join(violations))
        bad_init = self.init.violations()
        if bad_init:
            raise ConfigInvalid("init", "; ".join(bad_init))
        if not self.dt > 0:
            raise ConfigInvalid("dt", "must be > 0")
        if self.steps < 1:
            raise ConfigInvalid("steps", "must be >= 1")
        if not np.isfinite(self.dt * self.steps):
            raise ConfigInvalid("dt", "dt*steps overflows")


def derivatives(state: CompartmentState, p: EpidemicParams) -> tuple[float, float, float, float, float]:
    """Rates of change (ds, de, di, dr, dv) at the given state."""
    return _rhs(state.s, state.e, state.i, state.r, state.v, p, effective_contact_rate(p))


def _rhs(s, e, i, r, v, p: EpidemicParams, contact: float):
    infection = contact * s * i
    ds = p.lambda_recruit - infection - p.tau_fail * s - p.rho_vaccinate * s + p.phi_wane * r + p.xi_vax_wane * v
    de = infection - (p.tau_fail + p.theta_incubate) * e
    di = p.theta_incubate * e - (p.tau_fail + p.omega_kill + p.nu_recover) * i
    dr = p.nu_recover * i - (p.tau_fail + p.phi_wane) * r
    dv = p.rho_vaccinate * s - (p.tau_fail + p.xi_vax_wane) * v
    return ds, de, di, dr, dv


def _settle(value: float, t: float, name: str) -> float:
    # Roundoff-scale undershoot clamps to exactly 0; anything worse means
    # the step is too coarse for the given rates.
    if value >= 0.0:
        return value
    if value >= -UNDERSHOOT_TOL:
        return 0.0
    raise StepTooLarge(f"{name} = {value} at t = {t}; reduce dt")


def integrate_rk4(run: OdeRun) -> Trace:
    """Integrate with classic RK4; the trace holds the initial state plus
    one row per step. Identical runs produce bit-identical traces."""
    run.check()
    p = run.params
    contact = effective_contact_rate(p)
    dt = run.dt

    state = (float(run.init.s), float(run.init.e), float(run.init.i), float(run.init.r), float(run.init.v))
    t0 = float(run.init.t)
    out = np.empty((run.steps + 1, 6))
    out[0] = (t0, *state)

    for k in range(1, run.steps + 1):
        k1 = _rhs(*state, p, contact)
        mid1 = tuple(x + 0.5 * dt * d for x, d in zip(state, k1))
        k2 = _rhs(*mid1, p, contact)
        mid2 = tuple(x + 0.5 * dt * d for x, d in zip(state, k2))
        k3 = _rhs(*mid2, p, contact)
        end = tuple(x + dt * d for x, d in zip(state, k3))
        k4 = _rhs(*end, p, contact)
        t = t0 + k * dt
        state = tuple(
            _settle(x + (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d), t, name)
            for x, a, b, c, d, name in zip(state, k1, k2, k3, k4, _COMPARTMENT_NAMES)
        )
        out[k] = (t, *state)

    return Trace(t=out[:, 0], s=out[:, 1], e=out[:, 2], i=out[:, 3], r=out[:, 4], v=out[:, 5])
