import numpy as np
import pytest

from wsnepi.core import EpidemicParams

ZERO_PARAMS = {name: 0.0 for name in (
    "lambda_recruit", "beta_contact", "tau_fail", "omega_kill", "theta_incubate",
    "nu_recover", "phi_wane", "rho_vaccinate", "xi_vax_wane", "sigma_density", "r0_range",
)}


def make_params(**overrides) -> EpidemicParams:
    doc = dict(ZERO_PARAMS)
    doc.update(overrides)
    return EpidemicParams(**doc)


@pytest.fixture
def generic_params() -> EpidemicParams:
    """A fully positive parameter set with active dynamics."""
    return make_params(
        lambda_recruit=0.5,
        beta_contact=0.0004,
        tau_fail=0.01,
        omega_kill=0.05,
        theta_incubate=0.25,
        nu_recover=0.12,
        phi_wane=0.02,
        rho_vaccinate=0.03,
        xi_vax_wane=0.015,
        sigma_density=0.4,
        r0_range=2.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
