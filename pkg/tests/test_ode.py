import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wsnepi.core import CompartmentState, effective_contact_rate
from wsnepi.errors import ConfigInvalid, StepTooLarge
from wsnepi.ode import OdeRun, derivatives, integrate_rk4, _settle

from conftest import make_params


def rhs_oracle(state, p):
    """Independently coded right-hand sides: named flows, assembled per
    compartment, rather than one expression per line."""
    flows = {
        "recruit": p.lambda_recruit,
        "infect": p.beta_contact * p.sigma_density * math.pi * p.r0_range**2 * state.s * state.i,
        "fail_s": p.tau_fail * state.s,
        "fail_e": p.tau_fail * state.e,
        "fail_i": p.tau_fail * state.i,
        "fail_r": p.tau_fail * state.r,
        "fail_v": p.tau_fail * state.v,
        "crash": p.omega_kill * state.i,
        "incubate": p.theta_incubate * state.e,
        "recover": p.nu_recover * state.i,
        "wane_r": p.phi_wane * state.r,
        "vaccinate": p.rho_vaccinate * state.s,
        "wane_v": p.xi_vax_wane * state.v,
    }
    ds = flows["recruit"] - flows["infect"] - flows["fail_s"] - flows["vaccinate"] + flows["wane_r"] + flows["wane_v"]
    de = flows["infect"] - flows["fail_e"] - flows["incubate"]
    di = flows["incubate"] - flows["fail_i"] - flows["crash"] - flows["recover"]
    dr = flows["recover"] - flows["fail_r"] - flows["wane_r"]
    dv = flows["vaccinate"] - flows["fail_v"] - flows["wane_v"]
    return ds, de, di, dr, dv


class TestDerivatives:
    def test_zero_state_zero_recruitment_is_a_fixed_point(self, generic_params):
        p = make_params(**{**generic_params.__dict__, "lambda_recruit": 0.0})
        d = derivatives(CompartmentState(0, 0, 0, 0, 0), p)
        assert d == (0.0, 0.0, 0.0, 0.0, 0.0)

    def test_direct_substitution(self):
        # S=100, others 0, lambda=0, tau=0.01, rho=0.02, rest 0:
        # ds = -(0.01+0.02)*100 = -3, dv = 0.02*100 = +2.
        p = make_params(tau_fail=0.01, rho_vaccinate=0.02)
        ds, de, di, dr, dv = derivatives(CompartmentState(100, 0, 0, 0, 0), p)
        assert ds == pytest.approx(-3.0, abs=1e-12)
        assert dv == pytest.approx(2.0, abs=1e-12)
        assert (de, di, dr) == (0.0, 0.0, 0.0)

    def test_generic_state_matches_duplicate_formula_oracle(self, generic_params, rng):
        for _ in range(25):
            state = CompartmentState(*rng.uniform(0, 500, size=5))
            got = derivatives(state, generic_params)
            want = rhs_oracle(state, generic_params)
            for g, w in zip(got, want):
                assert g == pytest.approx(w, rel=1e-12)

    @given(
        counts=st.lists(st.floats(0, 1e6), min_size=5, max_size=5),
        rates=st.lists(st.floats(0, 10), min_size=11, max_size=11),
    )
    def test_derivative_sum_identity(self, counts, rates):
        # Algebraic identity: the five right-hand sides sum to
        # lambda - tau*N - omega*I.
        names = (
            "lambda_recruit", "beta_contact", "tau_fail", "omega_kill", "theta_incubate",
            "nu_recover", "phi_wane", "rho_vaccinate", "xi_vax_wane", "sigma_density", "r0_range",
        )
        p = make_params(**dict(zip(names, rates)))
        state = CompartmentState(*counts)
        total = sum(derivatives(state, p))
        expected = p.lambda_recruit - p.tau_fail * state.total() - p.omega_kill * state.i
        # Relative to the largest flow: smaller terms cancel at roundoff scale.
        contact = p.beta_contact * p.sigma_density * math.pi * p.r0_range**2
        flows = (
            p.lambda_recruit, contact * state.s * state.i, p.tau_fail * state.total(),
            p.omega_kill * state.i, p.theta_incubate * state.e, p.nu_recover * state.i,
            p.phi_wane * state.r, p.rho_vaccinate * state.s, p.xi_vax_wane * state.v,
        )
        scale = max(1.0, *flows)
        assert abs(total - expected) <= 1e-12 * scale


class TestIntegrateRk4:
    def test_zero_vector_field_gives_constant_trace(self):
        run = OdeRun(make_params(), CompartmentState(50, 4, 3, 2, 1), dt=0.1, steps=200)
        trace = integrate_rk4(run)
        assert len(trace) == 201
        for arr, value in zip((trace.s, trace.e, trace.i, trace.r, trace.v), (50, 4, 3, 2, 1)):
            assert np.all(arr == value)

    def test_conservation_without_recruitment_or_death(self, generic_params):
        p = make_params(**{**generic_params.__dict__, "lambda_recruit": 0.0,
                           "tau_fail": 0.0, "omega_kill": 0.0})
        init = CompartmentState(400, 30, 20, 10, 40)
        trace = integrate_rk4(OdeRun(p, init, dt=0.01, steps=10_000))
        n0 = init.total()
        assert np.max(np.abs(trace.total() - n0)) <= 1e-8 * n0

    def test_halving_dt_shrinks_error_sixteenfold(self, generic_params):
        init = CompartmentState(400, 30, 20, 10, 40)
        horizon = 4.0

        def max_error(dt):
            coarse = integrate_rk4(OdeRun(generic_params, init, dt=dt, steps=round(horizon / dt)))
            fine = integrate_rk4(OdeRun(generic_params, init, dt=dt / 100, steps=round(horizon / dt * 100)))
            ref = np.stack([fine.s, fine.e, fine.i, fine.r, fine.v], axis=1)[::100]
            got = np.stack([coarse.s, coarse.e, coarse.i, coarse.r, coarse.v], axis=1)
            return np.max(np.abs(got - ref))

        ratio = max_error(0.25) / max_error(0.125)
        assert 12.0 <= ratio <= 20.0

    def test_determinism_bit_identical(self, generic_params):
        init = CompartmentState(100, 5, 5, 0, 0)
        a = integrate_rk4(OdeRun(generic_params, init, dt=0.02, steps=500))
        b = integrate_rk4(OdeRun(generic_params, init, dt=0.02, steps=500))
        for x, y in zip((a.s, a.e, a.i, a.r, a.v), (b.s, b.e, b.i, b.r, b.v)):
            assert np.array_equal(x, y)

    def test_nonnegativity_at_valid_dt(self, generic_params):
        trace = integrate_rk4(OdeRun(generic_params, CompartmentState(500, 0, 10, 0, 0), dt=0.01, steps=2000))
        for arr in (trace.s, trace.e, trace.i, trace.r, trace.v):
            assert np.all(arr >= 0)

    def test_step_too_large_raises(self):
        # Fast incubation into a fast-recovering I compartment overshoots
        # badly at dt=1.
        p = make_params(theta_incubate=5.0, nu_recover=5.0)
        with pytest.raises(StepTooLarge):
            integrate_rk4(OdeRun(p, CompartmentState(0, 100, 0, 0, 0), dt=1.0, steps=10))

    def test_undershoot_clamp_boundary(self):
        assert _settle(-5e-10, 0.0, "susceptible") == 0.0
        assert _settle(0.0, 0.0, "susceptible") == 0.0
        assert _settle(3.5, 0.0, "susceptible") == 3.5
        with pytest.raises(StepTooLarge):
            _settle(-2e-9, 0.0, "susceptible")

    def test_invalid_run_rejected(self, generic_params):
        with pytest.raises(ConfigInvalid):
            integrate_rk4(OdeRun(generic_params, CompartmentState(1, 0, 0, 0, 0), dt=0.0, steps=5))
        with pytest.raises(ConfigInvalid):
            integrate_rk4(OdeRun(generic_params, CompartmentState(1, 0, 0, 0, 0), dt=0.1, steps=0))
        with pytest.raises(ConfigInvalid):
            integrate_rk4(OdeRun(generic_params, CompartmentState(-1, 0, 0, 0, 0), dt=0.1, steps=5))


class TestTraceCsv:
    def test_ode_header_and_total_column(self, tmp_path, generic_params):
        trace = integrate_rk4(OdeRun(generic_params, CompartmentState(100, 0, 10, 0, 0), dt=0.5, steps=4))
        out = tmp_path / "trace.csv"
        trace.to_csv(str(out))
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "susceptible", "exposed", "infected", "recovered", "vaccinated", "total"]
        assert len(rows) == 1 + 5
        first = [float(x) for x in rows[1]]
        assert first[1:6] == [100.0, 0.0, 10.0, 0.0, 0.0]
        assert first[6] == pytest.approx(110.0)
