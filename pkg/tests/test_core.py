import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsnepi.core import (
    PARAM_FIELDS,
    CompartmentState,
    effective_contact_rate,
    params_from_dict,
    validate,
)
from wsnepi.errors import ConfigInvalid

from conftest import ZERO_PARAMS, make_params


class TestEffectiveContactRate:
    def test_zero_beta_kills_the_product(self):
        p = make_params(beta_contact=0.0, sigma_density=3.0, r0_range=7.0)
        assert effective_contact_rate(p) == 0.0

    def test_unit_case_is_pi(self):
        p = make_params(beta_contact=1.0, sigma_density=1.0, r0_range=1.0)
        assert effective_contact_rate(p) == pytest.approx(math.pi, rel=1e-12)

    def test_generic_case_matches_hand_arithmetic(self):
        # Independent oracle: 0.0003 * 0.5 * pi * 2^2, factor by factor.
        p = make_params(beta_contact=0.0003, sigma_density=0.5, r0_range=2.0)
        expected = 0.0003
        expected *= 0.5
        expected *= math.pi
        expected *= 4.0
        assert effective_contact_rate(p) == pytest.approx(expected, rel=1e-14)

    @given(
        beta=st.floats(0, 10),
        sigma=st.floats(0, 10),
        r0=st.floats(0, 10),
        bump=st.floats(0, 5),
    )
    def test_monotone_in_each_factor(self, beta, sigma, r0, bump):
        base = effective_contact_rate(make_params(beta_contact=beta, sigma_density=sigma, r0_range=r0))
        assert effective_contact_rate(make_params(beta_contact=beta + bump, sigma_density=sigma, r0_range=r0)) >= base
        assert effective_contact_rate(make_params(beta_contact=beta, sigma_density=sigma + bump, r0_range=r0)) >= base
        assert effective_contact_rate(make_params(beta_contact=beta, sigma_density=sigma, r0_range=r0 + bump)) >= base


class TestValidate:
    def test_all_zero_is_legal(self):
        assert validate(make_params()) == []

    def test_negative_rate_named(self):
        violations = validate(make_params(tau_fail=-0.1))
        assert len(violations) == 1
        assert violations[0].startswith("tau_fail")

    def test_infinite_range_named(self):
        violations = validate(make_params(r0_range=math.inf))
        assert any(v.startswith("r0_range") for v in violations)

    def test_nan_named(self):
        violations = validate(make_params(sigma_density=math.nan))
        assert any(v.startswith("sigma_density") for v in violations)

    def test_every_bad_field_listed(self):
        violations = validate(make_params(tau_fail=-1.0, nu_recover=math.inf))
        assert len(violations) == 2


class TestParamsJson:
    def test_round_trip(self):
        doc = dict(ZERO_PARAMS, beta_contact=0.25)
        p = params_from_dict(doc)
        assert p.beta_contact == 0.25

    def test_unknown_key_rejected(self):
        doc = dict(ZERO_PARAMS, beta_contct=0.25)  # deliberate typo
        with pytest.raises(ConfigInvalid, match="beta_contct"):
            params_from_dict(doc)

    def test_missing_key_rejected(self):
        doc = dict(ZERO_PARAMS)
        del doc["xi_vax_wane"]
        with pytest.raises(ConfigInvalid, match="xi_vax_wane"):
            params_from_dict(doc)

    def test_invalid_value_rejected(self):
        doc = dict(ZERO_PARAMS, tau_fail=-2.0)
        with pytest.raises(ConfigInvalid):
            params_from_dict(doc)

    def test_field_roster_is_the_eleven_rates(self):
        assert len(PARAM_FIELDS) == 11


class TestCompartmentState:
    def test_total_sums_exactly_in_integer_mode(self):
        st_ = CompartmentState(s=190, e=3, i=5, r=1, v=1)
        assert st_.total() == 200

    @given(st.lists(st.floats(0, 1e12), min_size=5, max_size=5))
    def test_total_is_the_plain_sum(self, counts):
        state = CompartmentState(*counts)
        assert state.total() == counts[0] + counts[1] + counts[2] + counts[3] + counts[4]

    def test_violations_flag_negative_and_nonfinite(self):
        state = CompartmentState(s=-1.0, e=0.0, i=math.nan, r=0.0, v=0.0)
        flagged = state.violations()
        assert any(v.startswith("s") for v in flagged)
        assert any(v.startswith("i") for v in flagged)
