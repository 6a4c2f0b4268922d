"""Randomized exact-arithmetic verification suites.

Each suite draws small-denominator rational parameters inside the
mass-subcritical window (the standing hypothesis of the whole exponent
calculus), evaluates both sides of a claimed identity or equivalence
exactly, and reports every failure verbatim.  A clean run is a zero-
counterexample report, never a tolerance pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .admissibility import RegionReport, verify_region_equivalence
from .errors import EmptyRegion, EquivalenceFailure
from .exponents import (
    ProblemParams,
    derive,
    inv_r_interval,
    inv_r_interval_direct,
    lwp_alpha_cap,
    step_exponents,
    step_plan,
    theta_max,
)
from .regions import alpha_tilde_sup, interior_points, region_is_empty
from .rationals import random_fraction

#: sigma-class presets: (d, m) pairs giving sigma < 1, = 1, > 1, and > 2.
SIGMA_CLASSES = {
    "sub": [(1, 2), (1, 3), (2, 3), (1, Fraction(5, 2)), (2, Fraction(5, 2))],
    "unit": [(2, 2), (3, 3)],
    "super": [(3, 2), (4, 2), (4, 3), (5, 2)],
    "steep": [(5, 2), (6, 2)],
}


def draw_params(rng: random.Random, sigma_class: Optional[str] = None) -> ProblemParams:
    """Random subcritical parameters with denominators <= 24.

    sigma_class picks the (d, m) preset family; 'steep' additionally
    forces (2*eta - 1)*sigma > 2 so the rarest case branches get traffic.
    """
    if sigma_class is None:
        sigma_class = rng.choice(["sub", "sub", "unit", "super", "steep"])
    d, m = rng.choice(SIGMA_CLASSES[sigma_class])
    d = int(d)
    m = Fraction(m)
    if sigma_class == "steep":
        # Need eta > 1/2 + m/(2d) for the steep kernel regime.
        eta_floor = Fraction(1, 2) + m / (2 * d)
        gamma = random_fraction(rng, eta_floor * d, Fraction(d), max_den=24)
    else:
        gamma = random_fraction(rng, Fraction(0), Fraction(d), max_den=24)
    params = ProblemParams(d=d, m=m, gamma=gamma, beta=Fraction(1))
    lo, hi = params.subcritical_window()
    beta = random_fraction(rng, lo, hi, max_den=24)
    return ProblemParams(d=d, m=m, gamma=gamma, beta=beta)


@dataclass
class SuiteReport:
    """Counts plus verbatim failures for one exact suite."""

    name: str
    draws: int = 0
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "draws": self.draws,
            "checked": self.checked,
            "failures": self.failures,
            "notes": self.notes[:20],
        }


def run_identity_suite(draws: int, seed: int, points_per_params: int = 40) -> SuiteReport:
    """Exact identity suite over random region points.

    Per point: the D identity, theta_max = alpha_max/(1+alpha_max), the
    three-way lambda budget identity, the divergence equivalences, the
    alpha_tilde supremum bound, and positivity of D/E/F on the guaranteed
    subset (alpha_tilde below the cap, equivalently F > 0 exactly).
    """
    rng = random.Random(seed)
    report = SuiteReport(name="identity-suite")
    while report.checked < draws:
        params = draw_params(rng)
        if region_is_empty(params):
            continue
        report.draws += 1
        der = derive(params)
        cap = lwp_alpha_cap(params)
        for point in interior_points(params, points_per_params, rng):
            se = step_exponents(point, params, check=False)
            tm = theta_max(point, params)
            fails = []

            if se.D != 1 - params.beta * se.alpha_tilde + (Fraction(params.d) - params.gamma) / params.m:
                fails.append("D identity")
            if tm.alpha_max != float("inf") and tm.theta_max != tm.alpha_max / (1 + tm.alpha_max):
                fails.append("theta_max identity")
            if tm.alpha_max == float("inf") and tm.theta_max != 1:
                fails.append("theta_max infinite branch")
            if not se.alpha_tilde < der.alpha_tilde_sup:
                fails.append("alpha_tilde supremum bound")
            # F = (beta+1) * (cap - alpha_tilde) exactly, so positivity on
            # the guaranteed subset reduces to the cap.
            if se.F != (params.beta + 1) * (cap - se.alpha_tilde):
                fails.append("F/cap identity")
            if se.alpha_tilde < cap and min(se.D, se.E, se.F) <= 0:
                fails.append("positivity on guaranteed subset")

            if tm.alpha_max == float("inf"):
                alpha = Fraction(1, 2)
            else:
                # Bounded draw keeps ceil(N**lambda) representable.
                alpha = min(tm.alpha_max * Fraction(rng.randint(1, 7), 8), Fraction(8))
                if alpha == tm.alpha_max:
                    alpha = tm.alpha_max / 2
            lhs = alpha * se.D / der.A
            if lhs != alpha + alpha * params.beta * se.E / der.A - alpha * params.beta:
                fails.append("lambda budget identity (E form)")
            if lhs != alpha / (params.beta + 1) + alpha * params.beta * se.F / (
                der.A * (params.beta + 1)
            ):
                fails.append("lambda budget identity (F form)")

            s = -Fraction(rng.randint(0, 8), 8)
            plan = step_plan(params, point, alpha, s, Fraction(2), Fraction(1))
            if plan.diverges != (alpha * (params.beta - se.D) < der.A):
                fails.append("divergence <-> alpha*(beta-D) < A")
            if plan.diverges != (plan.lam > plan.alpha_beta_over_a):
                fails.append("divergence <-> lambda > alpha*beta/A")

            report.checked += 1
            for f in fails:
                report.failures.append(
                    f"{f} at params={params} point=({point.inv_r},{point.inv_q})"
                )
            if report.checked >= draws:
                break
    return report


def run_interval_suite(draws: int, seed: int) -> SuiteReport:
    """Case table vs direct max/min endpoints, exact equality."""
    rng = random.Random(seed)
    report = SuiteReport(name="interval-table")
    for _ in range(draws):
        params = draw_params(rng)
        report.draws += 1
        table = inv_r_interval(params)
        lo, hi = inv_r_interval_direct(params)
        report.checked += 1
        if (table.lo, table.hi) != (lo, hi):
            report.failures.append(
                f"table branch {table.branch} gives [{table.lo}, {table.hi}], "
                f"direct gives [{lo}, {hi}] at params={params}"
            )
        if table.boundary_note:
            report.notes.append(f"{table.boundary_note} at params={params}")
    return report


def run_lp_suite(draws: int, seed: int) -> SuiteReport:
    """Vertex-enumeration supremum of alpha_tilde vs the closed form."""
    rng = random.Random(seed)
    report = SuiteReport(name="lp-bound")
    nonempty = 0
    while nonempty < draws:
        params = draw_params(rng)
        report.draws += 1
        try:
            sup = alpha_tilde_sup(params)
        except EmptyRegion:
            continue
        except AssertionError as exc:
            report.failures.append(str(exc))
            nonempty += 1
            continue
        nonempty += 1
        report.checked += 1
        der = derive(params)
        if sup != der.alpha_tilde_sup:
            report.failures.append(f"sup mismatch at params={params}")
    return report


def run_region_suite(
    samples: int, seed: int, param_sets: int = 24
) -> tuple[SuiteReport, list[RegionReport]]:
    """Region/conditions equivalence across all sigma classes."""
    rng = random.Random(seed)
    report = SuiteReport(name="region-equivalence")
    region_reports: list[RegionReport] = []
    classes = ["sub", "unit", "super", "steep"]
    per_set = max(1, samples // param_sets)
    for i in range(param_sets):
        params = draw_params(rng, sigma_class=classes[i % len(classes)])
        report.draws += 1
        try:
            rr = verify_region_equivalence(
                params, per_set, seed=seed + i, rng=rng, targeted_inside=16
            )
            region_reports.append(rr)
            report.checked += rr.inside + rr.outside_probed
        except EquivalenceFailure as exc:
            report.failures.append(str(exc))
    return report, region_reports


@dataclass
class VerifyReport:
    """Combined result of every exact oracle, as driven by the CLI."""

    suites: list[SuiteReport]
    region_reports: list[RegionReport]
    seed: int
    samples: int

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def to_json(self, include_elapsed: bool = False) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "ok": self.ok,
            "suites": [s.to_json() for s in self.suites],
            "region_runs": [r.to_json(include_elapsed=include_elapsed) for r in self.region_reports],
        }


def run_all(samples: int, seed: int) -> VerifyReport:
    """Identity, interval, LP and region suites with deterministic sub-seeds."""
    identity = run_identity_suite(max(200, samples // 10), seed)
    interval = run_interval_suite(max(200, samples // 10), seed + 1)
    lp = run_lp_suite(100, seed + 2)
    region, region_reports = run_region_suite(samples, seed + 3)
    return VerifyReport(
        suites=[identity, interval, lp, region],
        region_reports=region_reports,
        seed=seed,
        samples=samples,
    )
