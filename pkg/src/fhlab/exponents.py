"""Exact-rational calculus for the dispersion/nonlinearity exponent system.

Every scalar here is a `fractions.Fraction` and every comparison is exact.
The only floating point that leaves this module is the power evaluation
inside `step_plan` (N**lambda for irrational exponents), which is
documented on the result type.

Conventions, fixed repo-wide:

d      space dimension (positive integer)
m      dispersion order, rational >= 2
gamma  Riesz-kernel exponent, rational in (0, d)
beta   nonlinearity power, rational > 0
sigma  = d/m,  eta = gamma/d

A region point is the inverse-exponent pair (x, y) = (1/r, 1/q) with
x in [0, 1/2] and y in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, HypothesisError, PositivityViolation
from .rationals import RatOrInf, ceil_power, rational_power

FOCUSING = "focusing"
DEFOCUSING = "defocusing"

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ProblemParams:
    """The equation quadruple (d, m, gamma, beta) plus the coupling sign."""

    d: int
    m: Fraction
    gamma: Fraction
    beta: Fraction
    sign: str = DEFOCUSING

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if self.m < 2:
            raise DomainError(f"dispersion order m must be >= 2, got {self.m}")
        if not (0 < self.gamma < self.d):
            raise DomainError(
                f"kernel exponent gamma must lie in (0, d)=(0, {self.d}), got {self.gamma}"
            )
        if self.beta <= 0:
            raise DomainError(f"nonlinearity power beta must be > 0, got {self.beta}")
        if self.sign not in (FOCUSING, DEFOCUSING):
            raise DomainError(f"sign must be 'focusing' or 'defocusing', got {self.sign!r}")

    @property
    def sign_value(self) -> int:
        """+1 for defocusing (repulsive), -1 for focusing coupling."""
        return 1 if self.sign == DEFOCUSING else -1

    def subcritical_window(self) -> tuple[Fraction, Fraction]:
        """Open beta-interval on which the mass-subcritical theory applies."""
        eta = self.gamma / self.d
        lo = 2 * (1 - eta)
        return lo, lo + 2 * self.m / self.d

    def is_subcritical(self) -> bool:
        lo, hi = self.subcritical_window()
        return lo < self.beta < hi

    def assert_subcritical(self) -> None:
        lo, hi = self.subcritical_window()
        if not lo < self.beta < hi:
            raise DomainError(
                f"beta={self.beta} outside the mass-subcritical window ({lo}, {hi})"
            )


@dataclass(frozen=True)
class DerivedExponents:
    """Scalar zoo derived from the problem parameters, all exact.

    ``A`` is the time power attached to the L^2-part interaction in the
    nonlinear window estimates; ``alpha_tilde_sup`` is the closed-form
    supremum of alpha_tilde = 1/q + sigma/r over the admissible region.
    ``beta0`` is only meaningful for sigma > 1 and is None otherwise.
    """

    sigma: Fraction
    eta: Fraction
    s_c: Fraction
    beta_tilde: Fraction
    beta0: Optional[Fraction]
    a_endpoint: Fraction
    b_endpoint: Fraction
    x0: Fraction
    x1: Fraction
    x2: Fraction
    x3: Fraction
    x4: Optional[Fraction]
    x5: Optional[Fraction]
    y0: Fraction
    y1: Fraction
    A: Fraction
    alpha_tilde_sup: Fraction


def derive(params: ProblemParams) -> DerivedExponents:
    """Evaluate every derived scalar exactly."""
    d, m, gamma, beta = Fraction(params.d), params.m, params.gamma, params.beta
    sigma = d / m
    eta = gamma / d
    s_c = d / 2 - (m + d - gamma) / beta
    beta_tilde = beta - 2 * (1 - eta)
    beta0 = (3 - 2 * eta) / (sigma - 1) if sigma > 1 else None

    x0 = (Fraction(3, 2) - eta) / (beta + 1)
    x1 = (2 - eta) / (beta + 2)
    x2 = (1 - eta) / beta
    x3 = (2 - eta) / (beta + 1)
    # The x-caps x4, x5 only enter for sigma > 1, where their denominators
    # are positive; for sigma <= 1 they can even degenerate to 1/0.
    if sigma > 1:
        x4 = (sigma - 1) * (2 - eta) / ((beta + 2) * (sigma - 1) + 1)
        x5 = sigma * (2 - eta) / ((beta + 2) * sigma - 1)
    else:
        x4 = None
        x5 = None
    y0 = (beta * d - 2 * (d - gamma)) / (2 * m * (beta + 1))
    y1 = (d * (beta - 2) + 2 * gamma) / (m * (beta + 2))

    a_endpoint = max((sigma - 1) / (2 * sigma), x0)
    # The upper endpoint carries three caps: the diagonal L^2 cap 1/2, the
    # time-dual cap, and the space-dual cap x3.  The third one binds exactly
    # when sigma < 1 and beta_tilde > 1.
    b_endpoint = min(HALF, (1 / (2 * sigma) + Fraction(3, 2) - eta) / (beta + 1), x3)

    big_a = 1 - beta * sigma / 2 + (d - gamma) / m
    alpha_tilde_sup = (d * beta + gamma) / (m * (beta + 2))

    return DerivedExponents(
        sigma=sigma,
        eta=eta,
        s_c=s_c,
        beta_tilde=beta_tilde,
        beta0=beta0,
        a_endpoint=a_endpoint,
        b_endpoint=b_endpoint,
        x0=x0,
        x1=x1,
        x2=x2,
        x3=x3,
        x4=x4,
        x5=x5,
        y0=y0,
        y1=y1,
        A=big_a,
        alpha_tilde_sup=alpha_tilde_sup,
    )


@dataclass(frozen=True)
class IntervalResult:
    """Closed rational interval [lo, hi]; empty when lo > hi."""

    lo: Fraction
    hi: Fraction
    branch: str
    boundary_note: Optional[str] = None

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    def contains(self, value: Fraction) -> bool:
        return (not self.is_empty) and self.lo <= value <= self.hi


def inv_r_interval_direct(params: ProblemParams) -> tuple[Fraction, Fraction]:
    """The admissible 1/r interval straight from its max/min definition."""
    der = derive(params)
    return der.a_endpoint, der.b_endpoint


def inv_r_interval(params: ProblemParams) -> IntervalResult:
    """Case-table evaluation of the admissible 1/r interval.

    Returns the matching branch of the seven-case table.  Parameter
    combinations not covered by any branch (beta_tilde outside (0, 2/sigma])
    fall back to the direct max/min endpoints with branch 'outside-table'.
    The case beta_tilde == beta0 sits on the boundary between the last two
    branches, whose values coincide there; it is returned with a note.
    """
    der = derive(params)
    sigma, eta, bt = der.sigma, der.eta, der.beta_tilde
    beta = params.beta
    x0 = der.x0
    upper_dual = (1 / (2 * sigma) + Fraction(3, 2) - eta) / (beta + 1)

    steep = (2 * eta - 1) * sigma > 2
    note = None
    if not steep and sigma >= 1:
        if bt <= 1 / sigma:
            branch, lo, hi = "1", x0, HALF
        elif bt < 2 / sigma:
            branch, lo, hi = "2", x0, upper_dual
        else:
            branch, lo, hi = "outside-table", der.a_endpoint, der.b_endpoint
    elif sigma < 1:
        if bt <= 1:
            branch, lo, hi = "3", x0, HALF
        elif bt <= 2 / sigma:
            branch, lo, hi = "4", x0, der.x3
        else:
            branch, lo, hi = "outside-table", der.a_endpoint, der.b_endpoint
    else:  # steep regime, sigma > 2 necessarily
        beta0 = der.beta0
        if bt <= 1 / sigma:
            branch, lo, hi = "5", x0, HALF
        elif bt < beta0:
            branch, lo, hi = "6", x0, upper_dual
        elif bt == beta0:
            # Branches 6 and 7 agree here because x0 == (sigma-1)/(2 sigma)
            # exactly at beta_tilde == beta0.
            branch, lo, hi = "6/7-boundary", x0, upper_dual
            note = "beta_tilde == beta0: shared endpoint of branches 6 and 7"
        elif bt < 2 / sigma:
            branch, lo, hi = "7", (sigma - 1) / (2 * sigma), upper_dual
        else:
            branch, lo, hi = "outside-table", der.a_endpoint, der.b_endpoint
    return IntervalResult(lo=lo, hi=hi, branch=branch, boundary_note=note)


@dataclass(frozen=True)
class StepExponents:
    """Point-dependent exponents of the two nonlinear window estimates."""

    alpha_tilde: Fraction
    inv_gamma_m: Fraction
    D: Fraction
    E: Fraction
    F: Fraction


def alpha_tilde_of(point, params: ProblemParams) -> Fraction:
    sigma = Fraction(params.d) / params.m
    return point.inv_q + sigma * point.inv_r


def lwp_alpha_cap(params: ProblemParams) -> Fraction:
    """Strict upper bound on alpha_tilde required by the window estimates.

    Equals sigma/2 + A/(beta+1); the third step exponent F is positive
    exactly when alpha_tilde stays below this cap.
    """
    der = derive(params)
    return (1 + der.sigma * (Fraction(3, 2) - der.eta)) / (params.beta + 1)


def step_exponents(point, params: ProblemParams, check: bool = True) -> StepExponents:
    """Evaluate alpha_tilde, 1/gamma_m(r) and the time powers D, E, F.

    With check=True a nonpositive D/E/F raises PositivityViolation whenever
    alpha_tilde < lwp_alpha_cap (where positivity is guaranteed and a
    failure would signal a region-implementation bug); points beyond the
    cap report the violation with the cap context instead.
    """
    der = derive(params)
    beta, sigma = params.beta, der.sigma
    at = point.inv_q + sigma * point.inv_r
    inv_gamma_m = sigma * (HALF - point.inv_r)
    big_a = der.A
    big_d = big_a + beta * sigma / 2 - beta * at
    big_e = big_a + sigma / 2 - at
    big_f = big_a + (beta + 1) * sigma / 2 - (beta + 1) * at

    # Exact algebraic identity; failure means a coding bug.
    assert big_d == 1 - beta * at + (Fraction(params.d) - params.gamma) / params.m

    if check and min(big_d, big_e, big_f) <= 0:
        cap = lwp_alpha_cap(params)
        detail = (
            "guaranteed region"
            if at < cap
            else f"point has alpha_tilde={at} >= cap={cap}, outside the guarantee"
        )
        raise PositivityViolation(
            f"nonpositive step exponent at (x={point.inv_r}, y={point.inv_q}): "
            f"D={big_d}, E={big_e}, F={big_f} ({detail})"
        )
    return StepExponents(alpha_tilde=at, inv_gamma_m=inv_gamma_m, D=big_d, E=big_e, F=big_f)


@dataclass(frozen=True)
class ThetaMax:
    """Interpolation-parameter threshold with its companion alpha_max."""

    theta_max: Fraction
    alpha_max: RatOrInf  # math.inf on the unconstrained branch


def theta_max(point, params: ProblemParams) -> ThetaMax:
    """Largest admissible interpolation parameter for the given point."""
    der = derive(params)
    beta, sigma = params.beta, der.sigma
    at = alpha_tilde_of(point, params)
    gap = beta * (at + 1) - 1 - (Fraction(params.d) - params.gamma) / params.m
    if gap <= 0:
        result = ThetaMax(theta_max=Fraction(1), alpha_max=math.inf)
    else:
        theta = der.A / (beta * (at + 1 - sigma / 2))
        alpha_max = der.A / gap
        # theta == alpha_max/(1 + alpha_max) is an exact identity.
        assert theta == alpha_max / (1 + alpha_max)
        result = ThetaMax(theta_max=theta, alpha_max=alpha_max)
    return result


@dataclass(frozen=True)
class StepPlan:
    """Iteration budget for one scale parameter N.

    ``t_step`` is exact when N**(-alpha*beta/A) is rational and a float
    otherwise; ``k_n`` is ceil(N**lam) with the same caveat.
    """

    lam: Fraction
    t_step: RatOrInf
    k_n: int
    diverges: bool
    alpha_beta_over_a: Fraction


def step_plan(
    params: ProblemParams,
    point,
    alpha: Fraction,
    s: Fraction,
    big_n: Fraction,
    c0: Fraction,
    enforce_alpha_cap: bool = True,
) -> StepPlan:
    """Step length, step count and divergence verdict for scale N.

    With enforce_alpha_cap=True (the contract of the global iteration),
    alpha >= alpha_max is a domain error; the relaxed form exists so that
    non-divergent contrast configurations can still be planned.
    """
    alpha, s, big_n, c0 = Fraction(alpha), Fraction(s), Fraction(big_n), Fraction(c0)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if s > 0:
        raise DomainError(f"regularity weight s must be <= 0, got {s}")
    if big_n <= 1:
        raise DomainError(f"scale N must exceed 1, got {big_n}")
    tm = theta_max(point, params)
    if enforce_alpha_cap and alpha >= tm.alpha_max:
        raise DomainError(f"alpha={alpha} >= alpha_max={tm.alpha_max}")

    der = derive(params)
    se = step_exponents(point, params, check=False)
    lam = (alpha * se.D / der.A - alpha * params.beta * s / der.A + 1) / (1 - s)
    ab_over_a = alpha * params.beta / der.A
    t_step_pow = rational_power(big_n, -ab_over_a)
    t_step = c0 * t_step_pow if isinstance(t_step_pow, Fraction) else float(c0) * t_step_pow
    k_n = ceil_power(big_n, lam)
    diverges = lam > ab_over_a
    # The divergence condition is exactly alpha*(beta - D) < A.
    assert diverges == (alpha * (params.beta - se.D) < der.A)
    return StepPlan(
        lam=lam, t_step=t_step, k_n=k_n, diverges=diverges, alpha_beta_over_a=ab_over_a
    )


def p_m_threshold(params: ProblemParams) -> Fraction:
    """1/p_m: modulation-pair global well-posedness threshold (sigma <= 1)."""
    der = derive(params)
    if der.sigma > 1:
        raise HypothesisError(f"p_m threshold requires sigma = d/m <= 1, got {der.sigma}")
    d, m, gamma, beta = Fraction(params.d), params.m, params.gamma, params.beta
    if 1 + (d - gamma) / m >= beta * (1 + der.sigma / 2):
        inv_pm = der.x0
    else:
        num = beta**2 * d * (d + 2 * m) + 4 * (d - gamma) * (m - d * beta) + 4 * (d - gamma) ** 2
        inv_pm = num / (4 * m * d * beta * (beta + 1))
    if not der.x0 <= inv_pm:
        raise PositivityViolation(
            f"threshold left its guaranteed range: 1/p_m={inv_pm} < x0={der.x0}"
        )
    return inv_pm


def p_max_threshold(params: ProblemParams) -> Fraction:
    """1/p_max: second-order (m=2) threshold from the local-smoothing route."""
    if params.m != 2:
        raise HypothesisError(f"p_max threshold is stated for m = 2 only, got m={params.m}")
    der = derive(params)
    d, gamma, beta = Fraction(params.d), params.gamma, params.beta
    sigma, eta, bt = der.sigma, der.eta, der.beta_tilde
    if bt <= (2 - eta) / sigma:
        raise HypothesisError(
            f"requires beta_tilde > (2 - gamma/d)/sigma: {bt} <= {(2 - eta) / sigma}"
        )
    steep_kernel = gamma > d / 2
    if steep_kernel and bt > (3 - 2 * eta) / sigma:
        if beta <= (2 + d - gamma) / (sigma + 2):
            inv_pmax = sigma / (2 * (1 + sigma))
        else:
            inv_pmax = (4 * (beta - 1) + 3 * beta * d - 2 * (d - gamma)) / (4 * beta * (2 + d))
    else:
        num = 6 * beta * (d - gamma) + (2 * (d - gamma) - d * beta + 2) * (
            d * gamma - 2 * (beta - 1)
        )
        den = beta * (2 * (2 + d) * (d - gamma) + (4 - d) * (d * beta - 2))
        inv_pmax = num / den
    return inv_pmax
