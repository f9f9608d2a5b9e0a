"""SEIRV model parameters, compartment state, and shared validation.

Both simulation engines (deterministic ODE and agent-based) consume the
same eleven-rate parameterization. Transitions between compartments:

    S -> E   contact with an infected node (rate beta * sigma * pi * r0^2 * I)
    E -> I   incubation (theta)
    I -> R   recovery (nu)
    R -> S   waning immunity (phi)
    S -> V   vaccination (rho)
    V -> S   waning vaccine protection (xi)
    * -> dead   hardware/software failure (tau) and worm-induced crash (omega,
                infected only); lambda recruits new susceptible nodes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

from .errors import ConfigInvalid

__all__ = [
    "EpidemicParams",
    "CompartmentState",
    "PARAM_FIELDS",
    "validate",
    "effective_contact_rate",
    "params_from_dict",
    "load_params",
]


@dataclass(frozen=True)
class EpidemicParams:
    """The eleven model rates.

    Units: lambda_recruit in nodes/tick; beta_contact in 1/(node*tick);
    tau_fail, omega_kill, theta_incubate, nu_recover, phi_wane,
    rho_vaccinate, xi_vax_wane in 1/tick; sigma_density in nodes/area;
    r0_range in patch-lengths.
    """

    lambda_recruit: float
    beta_contact: float
    tau_fail: float
    omega_kill: float
    theta_incubate: float
    nu_recover: float
    phi_wane: float
    rho_vaccinate: float
    xi_vax_wane: float
    sigma_density: float
    r0_range: float


PARAM_FIELDS: tuple[str, ...] = tuple(f.name for f in fields(EpidemicParams))


def validate(p: EpidemicParams) -> list[str]:
    """Return the list of invariant violations; an empty list means valid.

    Every field must be a finite, non-negative number, and the effective
    contact coefficient beta*sigma*pi*r0^2 must itself be finite.
    """
    violations = []
    for name in PARAM_FIELDS:
        value = getattr(p, name)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            violations.append(f"{name}: not a number")
        elif math.isnan(value) or math.isinf(value):
            violations.append(f"{name}: not finite")
        elif value < 0:
            violations.append(f"{name}: negative")
    if not violations:
        contact = effective_contact_rate(p)
        if math.isnan(contact) or math.isinf(contact):
            violations.append("effective contact coefficient: not finite")
    return violations


def effective_contact_rate(p: EpidemicParams) -> float:
    """Per-infected-node contact coefficient: beta * sigma * pi * r0^2."""
    return p.beta_contact * p.sigma_density * math.pi * p.r0_range**2


def params_from_dict(doc: dict) -> EpidemicParams:
    """Build parameters from a mapping with exactly the eleven field names.

    Unknown keys are an error: silently ignoring them would let a typo in a
    sweep config sweep nothing.
    """
    unknown = sorted(set(doc) - set(PARAM_FIELDS))
    if unknown:
        raise ConfigInvalid(unknown[0], f"unknown parameter key(s): {', '.join(unknown)}")
    missing = [name for name in PARAM_FIELDS if name not in doc]
    if missing:
        raise ConfigInvalid(missing[0], f"missing parameter key(s): {', '.join(missing)}")
    p = EpidemicParams(**{name: float(doc[name]) for name in PARAM_FIELDS})
    violations = validate(p)
    if violations:
        raise ConfigInvalid(violations[0].split(":")[0], "; ".join(violations))
    return p


def load_params(path: str) -> EpidemicParams:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ConfigInvalid("document", "parameter file must hold a JSON object")
    return params_from_dict(doc)


@dataclass
class CompartmentState:
    """Node counts per compartment at time t.

    Real-valued for the ODE engine; the agent engine keeps integer counts.
    """

    s: float
    e: float
    i: float
    r: float
    v: float
    t: float = 0.0

    def total(self) -> float:
        return self.s + self.e + self.i + self.r + self.v

    def violations(self) -> list[str]:
        out = []
        for name in ("s", "e", "i", "r", "v"):
            value = getattr(self, name)
            if math.isnan(value) or math.isinf(value):
                out.append(f"{name}: not finite")
            elif value < 0:
                out.append(f"{name}: negative")
        return out
