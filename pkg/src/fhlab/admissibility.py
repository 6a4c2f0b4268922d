"""Admissible exponent pairs and the inhomogeneous-estimate conditions.

All predicates are written against inverse exponents (q = infinity is
inv_q = 0), so the extended range [1, infinity] needs no special cases.
`verify_region_equivalence` is the falsification harness: it checks, by
random exact-rational sampling, that region membership implies the
inhomogeneous conditions through the canonical dual pair, and that
points clearly outside the closure fail them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import EquivalenceFailure, InfeasibleChain
from .exponents import (
    HALF,
    ProblemParams,
    derive,
    lwp_alpha_cap,
    step_exponents,
)
from .regions import LebesguePair, in_omega_gamma_sigma, margin_outside
from .rationals import random_fraction

NONSHARP = "nonsharp"
SHARP = "sharp"

#: Points must violate some constraint by at least this normalized margin
#: before the converse direction is asserted; the regions are open and the
#: conditions carry non-strict variants, so the boundary itself is ambiguous.
CONVERSE_MARGIN = Fraction(1, 1000)


def _inv(exponent) -> Fraction:
    """Inverse of an extended exponent in [1, infinity]."""
    if exponent == math.inf:
        return Fraction(0)
    exponent = Fraction(exponent)
    if exponent < 1:
        raise ValueError(f"Lebesgue exponent must be >= 1, got {exponent}")
    return 1 / exponent


def _acceptable_inv(x: Fraction, y: Fraction, sigma: Fraction) -> bool:
    """Membership of (x, y) = (1/r, 1/q) in the acceptable set.

    The set is {0 <= x <= 1/2, 0 < y <= 1, y < 2 sigma (1/2 - x)} together
    with the isolated point (1/2, 0).
    """
    if (x, y) == (HALF, Fraction(0)):
        return True
    return 0 <= x <= HALF and 0 < y <= 1 and y < 2 * sigma * (HALF - x)


def is_sigma_pair(q, r, sigma) -> bool:
    """Sharp-admissible pair test: 1/q = sigma*(1/2 - 1/r) on the closed range."""
    sigma = Fraction(sigma)
    try:
        y, x = _inv(q), _inv(r)
    except ValueError:
        return False
    if y != sigma * (HALF - x):
        return False
    if not (0 < y <= HALF and 0 < x <= HALF):
        return False
    if (y, x, sigma) == (HALF, Fraction(0), Fraction(1)):  # (q, r) = (2, inf) at sigma 1
        return False
    return True


def is_sigma_acceptable(q, r, sigma) -> bool:
    """Relaxed admissibility used by the inhomogeneous estimate."""
    try:
        y, x = _inv(q), _inv(r)
    except ValueError:
        return False
    return _acceptable_inv(x, y, Fraction(sigma))


def inhomogeneous_ok_inv(
    inv_q: Fraction,
    inv_r: Fraction,
    inv_mu: Fraction,
    inv_p: Fraction,
    sigma: Fraction,
) -> Optional[str]:
    """Inverse-exponent form of `inhomogeneous_ok`; None means not certified."""
    sigma = Fraction(sigma)
    for val in (inv_q, inv_r, inv_mu, inv_p):
        if not 0 <= val <= 1:
            return None
    inv_mu_dual = 1 - inv_mu
    inv_p_dual = 1 - inv_p
    if not _acceptable_inv(inv_r, inv_q, sigma):
        return None
    if not _acceptable_inv(inv_p_dual, inv_mu_dual, sigma):
        return None
    if inv_q + sigma * inv_r + 1 != inv_mu + sigma * inv_p:
        return None

    if sigma < 1:
        return NONSHARP
    if sigma == 1:
        # Additionally r, p' < infinity.
        return NONSHARP if (inv_r > 0 and inv_p_dual > 0) else None
    # sigma > 1: non-sharp and sharp condition systems, as displayed (the
    # non-sharp cross conditions are non-strict).
    if (
        inv_q + inv_mu_dual < 1
        and (sigma - 1) * inv_r <= sigma * inv_p_dual
        and (sigma - 1) * inv_p_dual <= sigma * inv_r
    ):
        return NONSHARP
    if (
        inv_q + inv_mu_dual == 1
        and (sigma - 1) * inv_r < sigma * inv_p_dual
        and (sigma - 1) * inv_p_dual < sigma * inv_r
        and inv_r <= inv_q
        and inv_p_dual <= inv_mu_dual
    ):
        return SHARP
    return None


def inhomogeneous_ok(q, r, mu, p, sigma) -> Optional[str]:
    """Which admissibility branch certifies the pair of pairs, if any.

    Returns 'nonsharp', 'sharp', or None (reported falsy) when neither
    condition system holds.
    """
    try:
        return inhomogeneous_ok_inv(_inv(q), _inv(r), _inv(mu), _inv(p), Fraction(sigma))
    except ValueError:
        return None


@dataclass(frozen=True)
class DualPair:
    """Inverse exponents (1/mu, 1/p) of the inhomogeneous norm."""

    inv_p: Fraction
    inv_mu: Fraction


def dual_pair(point: LebesguePair, params: ProblemParams) -> DualPair:
    """The two linear formulas tying the dual norm to the region point."""
    der = derive(params)
    beta, eta, sigma = params.beta, der.eta, der.sigma
    inv_p = (beta + 1) * point.inv_r + eta - 1
    inv_mu = 1 + point.inv_q + sigma * (1 - eta - beta * point.inv_r)
    return DualPair(inv_p=inv_p, inv_mu=inv_mu)


@dataclass(frozen=True)
class HolderChain:
    """Intermediate exponents of the Holder/HLS factorization."""

    inv_p1: Fraction
    inv_p2: Fraction
    inv_mu1: Fraction
    inv_mu2: Fraction
    eps: Fraction


def holder_chain(point: LebesguePair, params: ProblemParams) -> HolderChain:
    """Solve the factorization chain exactly and check its margins.

    inv_mu1/inv_mu2 split the dual time exponent against gamma_m(r) and q
    respectively; eps is the contraction margin of the workspace estimate,
    computed from the sharp-pair dual of the chain.  Raises InfeasibleChain
    when any intermediate inverse exponent leaves [0, 1] or eps <= 0.
    """
    der = derive(params)
    beta, eta, sigma = params.beta, der.eta, der.sigma
    dp = dual_pair(point, params)
    inv_gamma_m = sigma * (HALF - point.inv_r)

    inv_p1 = dp.inv_p - point.inv_r
    inv_p2 = inv_p1 + 1 - eta
    inv_mu1 = dp.inv_mu - inv_gamma_m
    inv_mu2 = dp.inv_mu - point.inv_q

    se = step_exponents(point, params, check=False)
    # Exact identities of the chain; a failure is a coding bug.
    assert inv_mu1 == der.A + (beta - 1) * inv_gamma_m + point.inv_q
    assert inv_mu2 == se.D + beta * point.inv_q == der.A + beta * inv_gamma_m
    assert inv_p2 == beta * point.inv_r  # 1/(beta*p2) == 1/r

    # Contraction margin from the sharp-pair dual: 1/mu_pair is a function
    # of r alone, and the workspace exponent is max(1/q, 1/gamma_m(r)).
    inv_mu_pair = 1 - sigma * (dp.inv_p - HALF)
    inv_work = max(point.inv_q, inv_gamma_m)
    inv_mu1_work = inv_mu_pair - inv_work
    eps = inv_mu1_work / beta - inv_work

    expected_eps = ((beta + 1) / beta) * (lwp_alpha_cap(params) - sigma * point.inv_r - inv_work)
    if eps != expected_eps:
        raise AssertionError(
            f"chain margin mismatch: eps={eps}, linear relation gives {expected_eps}"
        )

    if eps <= 0:
        raise InfeasibleChain(
            f"margin eps={eps} <= 0 at (x={point.inv_r}, y={point.inv_q}); "
            f"alpha_tilde cap is {lwp_alpha_cap(params)}"
        )
    checks = [
        ("1/p", dp.inv_p, HALF, Fraction(1)),
        ("1/mu (pair dual)", inv_mu_pair, HALF, Fraction(1)),
        ("1/p1", inv_p1, Fraction(0), Fraction(1)),
        ("1/mu1", inv_mu1, Fraction(0), Fraction(1)),
        ("1/mu2", inv_mu2, Fraction(0), Fraction(1)),
        ("1/(beta*p2)", inv_p2 / beta, Fraction(0), Fraction(1)),
        ("1/gamma_m(r)", inv_gamma_m, Fraction(0), HALF),
    ]
    for name, val, lo, hi in checks:
        if not lo <= val <= hi:
            raise InfeasibleChain(f"exponent {name}={val} outside [{lo}, {hi}]")
    return HolderChain(inv_p1=inv_p1, inv_p2=inv_p2, inv_mu1=inv_mu1, inv_mu2=inv_mu2, eps=eps)


@dataclass(frozen=True)
class Counterexample:
    x: Fraction
    y: Fraction
    reason: str

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "reason": self.reason}


@dataclass
class RegionReport:
    """Outcome of one region-equivalence verification run."""

    params: ProblemParams
    samples: int
    inside: int = 0
    outside_probed: int = 0
    skipped_boundary: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self, include_elapsed: bool = True) -> dict:
        doc = {
            "params": {
                "d": self.params.d,
                "m": str(self.params.m),
                "gamma": str(self.params.gamma),
                "beta": str(self.params.beta),
            },
            "samples": self.samples,
            "inside": self.inside,
            "outside_probed": self.outside_probed,
            "skipped_boundary": self.skipped_boundary,
            "counterexamples": [c.to_json() for c in self.counterexamples],
        }
        if include_elapsed:
            doc["elapsed"] = self.elapsed
        return doc


def _check_inside(point: LebesguePair, params: ProblemParams, sigma: Fraction, report):
    dp = dual_pair(point, params)
    verdict = inhomogeneous_ok_inv(point.inv_q, point.inv_r, dp.inv_mu, dp.inv_p, sigma)
    if verdict is None:
        report.counterexamples.append(
            Counterexample(point.x, point.y, "membership holds but conditions fail")
        )
    elif verdict == SHARP and sigma > 1:
        # Inside the region the sharp branch is impossible: it would force
        # 1/r = (m + d - gamma)/(d beta) > 1/2.
        report.counterexamples.append(
            Counterexample(point.x, point.y, "sharp branch certified inside the region")
        )
    report.inside += 1


def _check_outside(point: LebesguePair, params: ProblemParams, sigma: Fraction, report):
    dp = dual_pair(point, params)
    verdict = inhomogeneous_ok_inv(point.inv_q, point.inv_r, dp.inv_mu, dp.inv_p, sigma)
    if verdict is not None:
        report.counterexamples.append(
            Counterexample(
                point.x, point.y, f"conditions certified ({verdict}) well outside the region"
            )
        )
    report.outside_probed += 1


def verify_region_equivalence(
    params: ProblemParams,
    samples: int,
    seed: int,
    rng=None,
    targeted_inside: int = 32,
) -> RegionReport:
    """Probe both directions of the region/conditions equivalence.

    Random rational points are drawn from (0, 1/2) x (0, 1).  Members must
    satisfy the inhomogeneous conditions through the canonical dual pair;
    points outside the closure by a normalized margin of at least 1/1000
    must fail them.  A handful of targeted interior points guarantees the
    forward direction is exercised even for thin regions.  Raises
    EquivalenceFailure carrying the first counterexample.
    """
    import random

    from .regions import interior_points, region_is_empty

    if rng is None:
        rng = random.Random(seed)
    sigma = derive(params).sigma
    report = RegionReport(params=params, samples=samples)
    start = time.perf_counter()

    if targeted_inside and not region_is_empty(params):
        for point in interior_points(params, targeted_inside, rng):
            _check_inside(point, params, sigma, report)

    for _ in range(samples):
        x = random_fraction(rng, Fraction(0), HALF, max_den=64)
        y = random_fraction(rng, Fraction(0), Fraction(1), max_den=64)
        point = LebesguePair(x, y)
        if in_omega_gamma_sigma(point, params):
            _check_inside(point, params, sigma, report)
        elif margin_outside(point, params) >= CONVERSE_MARGIN:
            _check_outside(point, params, sigma, report)
        else:
            report.skipped_boundary += 1

    report.elapsed = time.perf_counter() - start
    if report.counterexamples:
        first = report.counterexamples[0]
        raise EquivalenceFailure(
            f"region/conditions equivalence failed at (x={first.x}, y={first.y}): "
            f"{first.reason}",
            counterexample=first,
        )
    return report
