"""Exact scalar calculus: frozen fixtures, case branches, and identities.

Every expected value below was computed by hand from the defining
formulas before being frozen here; the randomized suites in
test_verification.py cross-check the same identities at scale.
"""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fhlab.errors import DomainError, HypothesisError, PositivityViolation
from fhlab.exponents import (
    ProblemParams,
    derive,
    inv_r_interval,
    inv_r_interval_direct,
    lwp_alpha_cap,
    p_m_threshold,
    p_max_threshold,
    step_exponents,
    step_plan,
    theta_max,
)
from fhlab.regions import LebesguePair


class TestProblemParams:
    def test_domain_checks(self):
        with pytest.raises(DomainError):
            ProblemParams(d=1, m=2, gamma=F(3, 2), beta=F(2))  # gamma >= d
        with pytest.raises(DomainError):
            ProblemParams(d=1, m=F(3, 2), gamma=F(1, 2), beta=F(2))  # m < 2
        with pytest.raises(DomainError):
            ProblemParams(d=0, m=2, gamma=F(1, 2), beta=F(2))
        with pytest.raises(DomainError):
            ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(2), sign="bogus")

    def test_subcritical_window(self, params):
        assert params.subcritical_window() == (1, 5)
        assert params.is_subcritical()
        params.assert_subcritical()
        sup = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(6))
        assert not sup.is_subcritical()
        with pytest.raises(DomainError):
            sup.assert_subcritical()


class TestDerive:
    def test_fixture_values(self, params):
        der = derive(params)
        assert der.sigma == F(1, 2)
        assert der.eta == F(1, 2)
        assert der.s_c == F(-3, 4)
        assert der.beta_tilde == 1
        assert der.A == F(3, 4)
        assert der.beta0 is None
        assert der.alpha_tilde_sup == F(5, 16)

    def test_sigma_one_boundary(self):
        # sigma == 1 must not consult the sigma > 1 branch fields
        der = derive(ProblemParams(d=2, m=2, gamma=F(1), beta=F(2)))
        assert der.sigma == 1
        assert der.eta == F(1, 2)
        assert der.beta0 is None

    def test_s_c_sign_matches_window(self):
        # s_c < 0 exactly when beta is below the upper window edge
        for beta in (F(3, 2), F(3), F(9, 2), F(6)):
            p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=beta)
            der = derive(p)
            assert (der.s_c < 0) == (beta < p.subcritical_window()[1])


class TestInterval:
    def test_fixture_branch_three(self, params):
        iv = inv_r_interval(params)
        assert (iv.lo, iv.hi) == (F(1, 3), F(1, 2))
        assert iv.branch == "3"
        assert not iv.is_empty

    def test_direct_matches_table(self, params):
        assert inv_r_interval_direct(params) == (F(1, 3), F(1, 2))

    def test_branch_four_upper_is_x3(self):
        # sigma < 1 with beta_tilde > 1: the x3 cap binds
        p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(3))
        iv = inv_r_interval(p)
        assert iv.branch == "4"
        assert iv.hi == derive(p).x3 == F(3, 8)
        assert inv_r_interval_direct(p) == (iv.lo, iv.hi)

    def test_sigma_ge_one_branches(self):
        p1 = ProblemParams(d=3, m=2, gamma=F(3, 2), beta=F(3, 2))  # beta_tilde=1/2 <= 1/sigma
        assert inv_r_interval(p1).branch == "1"
        p2 = ProblemParams(d=3, m=2, gamma=F(3, 2), beta=F(9, 5))  # 2/3 < beta_tilde <= 4/3
        assert inv_r_interval(p2).branch == "2"
        for p in (p1, p2):
            iv = inv_r_interval(p)
            assert (iv.lo, iv.hi) == inv_r_interval_direct(p)

    def test_steep_branches(self):
        # (2 eta - 1) sigma > 2 requires sigma > 2 and a steep kernel
        base = dict(d=5, m=2)
        p5 = ProblemParams(**base, gamma=F(19, 4), beta=F(7, 20))
        der = derive(p5)
        assert (2 * der.eta - 1) * der.sigma > 2
        assert inv_r_interval(p5).branch == "5"
        p7 = ProblemParams(**base, gamma=F(19, 4), beta=F(43, 50))
        der7 = derive(p7)
        assert der7.beta0 < der7.beta_tilde < 2 / der7.sigma
        iv7 = inv_r_interval(p7)
        assert iv7.branch == "7"
        assert iv7.lo == (der7.sigma - 1) / (2 * der7.sigma)
        for p in (p5, p7):
            iv = inv_r_interval(p)
            assert (iv.lo, iv.hi) == inv_r_interval_direct(p)

    def test_empty_interval_is_a_value(self):
        # Far supercritical: lo exceeds hi; empty is a value, not an error
        p = ProblemParams(d=5, m=2, gamma=F(19, 4), beta=F(40))
        iv = inv_r_interval(p)
        assert iv.is_empty
        assert iv.lo > iv.hi
        assert not iv.contains(iv.lo)


class TestStepExponents:
    def test_fixture(self, params, point):
        se = step_exponents(point, params)
        assert se.alpha_tilde == F(1, 4)
        assert se.inv_gamma_m == F(1, 20)
        assert se.D == se.E == se.F == F(3, 4)

    def test_identity_d(self, params, point):
        se = step_exponents(point, params)
        assert se.D == 1 - params.beta * se.alpha_tilde + F(1, 2) / 2

    def test_positivity_violation_beyond_cap(self):
        # Inside the region but above the alpha_tilde cap, F goes negative.
        p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(9, 2))
        pt = LebesguePair(F(3, 13), F(1, 4))
        from fhlab.regions import in_omega_gamma_sigma

        assert in_omega_gamma_sigma(pt, p)
        se = step_exponents(pt, p, check=False)
        assert se.alpha_tilde >= lwp_alpha_cap(p)
        assert min(se.D, se.E, se.F) < 0
        with pytest.raises(PositivityViolation):
            step_exponents(pt, p)

    def test_f_equals_cap_gap(self, params, point):
        se = step_exponents(point, params)
        cap = lwp_alpha_cap(params)
        assert se.F == (params.beta + 1) * (cap - se.alpha_tilde)


class TestThetaMax:
    def test_fixture(self, params, point):
        tm = theta_max(point, params)
        assert tm.theta_max == F(3, 8)
        assert tm.alpha_max == F(3, 5)
        assert tm.theta_max == tm.alpha_max / (1 + tm.alpha_max)

    def test_unconstrained_branch(self):
        # Small beta below 1: the gap is nonpositive, theta_max = 1.
        p = ProblemParams(d=1, m=2, gamma=F(3, 4), beta=F(3, 4))
        pt = LebesguePair(F(12, 25), F(1, 100))
        from fhlab.regions import in_omega_gamma_sigma

        assert in_omega_gamma_sigma(pt, p)
        tm = theta_max(pt, p)
        assert tm.theta_max == 1
        assert tm.alpha_max == math.inf

    def test_monotone_nonincreasing_in_alpha_tilde(self, params):
        # Sweep along a ray of increasing alpha_tilde with fixed params.
        values = []
        for k in range(10):
            pt = LebesguePair(F(2, 5), F(1, 20) + F(k, 400))
            values.append(theta_max(pt, params).theta_max)
        assert all(a >= b for a, b in zip(values, values[1:]))


class TestStepPlan:
    def test_fixture(self, params, point):
        plan = step_plan(params, point, F(1, 2), F(-1, 10), F(4), F(1, 4))
        assert plan.lam == F(49, 33)
        assert plan.alpha_beta_over_a == F(44, 33)
        assert plan.diverges
        assert plan.k_n == 8

    def test_budget_identity(self, params, point):
        se = step_exponents(point, params)
        der = derive(params)
        alpha = F(1, 2)
        lhs = alpha * se.D / der.A
        assert lhs == alpha + alpha * params.beta * se.E / der.A - alpha * params.beta
        assert lhs == alpha / (params.beta + 1) + alpha * params.beta * se.F / (
            der.A * (params.beta + 1)
        )
        assert lhs == F(1, 2)

    def test_alpha_cap_domain_error(self, params, point):
        with pytest.raises(DomainError):
            step_plan(params, point, F(3, 5), F(0), F(4), F(1, 4))  # alpha == alpha_max
        with pytest.raises(DomainError):
            step_plan(params, point, F(1, 2), F(1, 10), F(4), F(1, 4))  # s > 0

    def test_divergence_flips_at_alpha_max(self, params, point):
        # Approaching alpha_max from below stays divergent; at the cap the
        # relaxed plan reports exactly the flat flip point.
        below = step_plan(params, point, F(3, 5) - F(1, 1000), F(0), F(4), F(1, 4))
        assert below.diverges
        at = step_plan(params, point, F(3, 5), F(0), F(4), F(1, 4), enforce_alpha_cap=False)
        assert not at.diverges
        assert at.lam == at.alpha_beta_over_a

    def test_t_step_exact_when_rational(self, params, point):
        # alpha*beta/A = 4/3 and N = 8 gives an exact rational power.
        plan = step_plan(params, point, F(1, 2), F(-1, 10), F(8), F(1))
        assert plan.t_step == F(1, 16)


class TestThresholds:
    def test_p_m_second_branch(self, params):
        assert p_m_threshold(params) == F(7, 16)
        assert derive(params).x0 == F(1, 3) <= F(7, 16)

    def test_p_m_first_branch_equals_x0(self):
        p = ProblemParams(d=1, m=2, gamma=F(3, 4), beta=F(3, 4))
        assert p_m_threshold(p) == derive(p).x0 == F(3, 7)

    def test_p_m_requires_sigma_le_one(self):
        with pytest.raises(HypothesisError):
            p_m_threshold(ProblemParams(d=3, m=2, gamma=F(3, 2), beta=F(3, 2)))

    def test_p_max_third_branch(self):
        p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(9, 2))
        val = p_max_threshold(p)
        assert val == F(31, 63)
        assert val < F(1, 2)

    def test_p_max_hypothesis_boundary(self):
        # beta_tilde == (2 - eta)/sigma exactly is excluded
        p = ProblemParams(d=1, m=2, gamma=F(1, 2), beta=F(4))
        assert derive(p).beta_tilde == 3 == (2 - F(1, 2)) / F(1, 2)
        with pytest.raises(HypothesisError):
            p_max_threshold(p)
        with pytest.raises(HypothesisError):
            p_max_threshold(ProblemParams(d=1, m=3, gamma=F(1, 2), beta=F(9, 2)))  # m != 2


@settings(max_examples=200, deadline=None)
@given(
    num=st.integers(1, 23),
    den=st.integers(2, 24),
    beta_num=st.integers(1, 40),
)
def test_interval_table_matches_direct_everywhere(num, den, beta_num):
    """Property: the seven-case table always equals the max/min endpoints."""
    gamma = F(min(num, den - 1), den)
    for d, m in [(1, 2), (2, 2), (3, 2), (5, 2)]:
        if gamma >= d:
            continue
        p0 = ProblemParams(d=d, m=m, gamma=gamma, beta=F(1))
        lo, hi = p0.subcritical_window()
        beta = lo + (hi - lo) * F(beta_num, 41)
        p = ProblemParams(d=d, m=m, gamma=gamma, beta=beta)
        iv = inv_r_interval(p)
        assert (iv.lo, iv.hi) == inv_r_interval_direct(p)
