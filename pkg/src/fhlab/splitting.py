"""Iterated rough/smooth splitting of the Hartree flow.

The data is split into a band-limited part v (evolved by the full
equation) and a high-frequency remainder w (evolved by the difference
equation with source G(v, w)).  At each step boundary the parts are
re-split so that w stays a pure linear flow of w0:

    v_{k+1} = v^{(k)}(T_k) + (w^{(k)}(T_k) - S(T_k) w_k)
    w_{k+1} = S(T_k) w_k

Each campaign cross-checks v_k + w_k against a direct solve from u0 on
identical grid, step and dealiasing, so the reported deviation isolates
the scheme error from discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, DomainError, NoContraction
from .exponents import ProblemParams, StepPlan, derive, step_exponents, step_plan
from .grids import Field, Grid
from .norms import mixed_norm, window_norm
from .rationals import rational_power
from .regions import LebesguePair
from .spectral import SolverConfig, hartree_potential, propagate_linear, solve

#: Explicit instantiation of the "small enough" step conditions.
STEP_BUDGET = 0.125


@dataclass(frozen=True)
class SplitConfig:
    solver: SolverConfig
    point: LebesguePair
    N: Fraction
    alpha: Fraction
    s: Fraction
    rho: Fraction = Fraction(1)
    c0: Fraction = Fraction(1, 4)
    picard_tol: float = 1e-10
    picard_max_iter: int = 50
    step_cap: int = 64
    enforce_divergence: bool = True
    min_window_nodes: int = 8

    def __post_init__(self):
        object.__setattr__(self, "N", Fraction(self.N))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "rho", Fraction(self.rho))
        object.__setattr__(self, "c0", Fraction(self.c0))
        if self.picard_tol <= 0:
            raise DomainError("picard_tol must be positive")

    @property
    def params(self) -> ProblemParams:
        return self.solver.params

    def plan(self, big_n: Fraction | None = None) -> StepPlan:
        return step_plan(
            self.params,
            self.point,
            self.alpha,
            self.s,
            self.N if big_n is None else Fraction(big_n),
            self.c0,
            enforce_alpha_cap=self.enforce_divergence,
        )

    def exponents(self):
        """(r, q, gamma_m(r)) as floats for the discrete mixed norms."""
        x, y = self.point.inv_r, self.point.inv_q
        r = math.inf if x == 0 else 1.0 / float(x)
        q = math.inf if y == 0 else 1.0 / float(y)
        se = step_exponents(self.point, self.params, check=False)
        gamma_m = math.inf if se.inv_gamma_m == 0 else 1.0 / float(se.inv_gamma_m)
        return r, q, gamma_m

    def budget_cap(self, big_n: Fraction | None = None) -> float:
        """2 N^alpha, the running L^2 budget for the v-part."""
        n_val = self.N if big_n is None else Fraction(big_n)
        return 2.0 * float(rational_power(n_val, self.alpha))


def decompose(u0: Field, config: SplitConfig, big_n: Fraction | None = None) -> tuple[Field, Field]:
    """Sharp spectral split at radius N^rho: v = low modes, w = remainder.

    The two spectra use complementary masks of the same coefficient
    array, so v0 + w0 reproduces u0 bitwise in spectral space.
    """
    n_val = config.N if big_n is None else Fraction(big_n)
    radius = float(rational_power(n_val, config.rho))
    mask = u0.grid.xi_mag <= radius
    spectrum = u0.spectrum
    v0 = Field.from_spectrum(u0.grid, np.where(mask, spectrum, 0.0))
    w0 = Field.from_spectrum(u0.grid, np.where(mask, 0.0, spectrum))
    return v0, w0


def _window_solver_config(config: SplitConfig, t_final: float) -> SolverConfig:
    nodes = max(config.min_window_nodes, math.ceil(t_final / config.solver.dt - 1e-12))
    return SolverConfig(
        params=config.params,
        grid=config.solver.grid,
        dt=t_final / nodes,
        t_final=t_final,
        dealias=config.solver.dealias,
        zero_mode_kernel=config.solver.zero_mode_kernel,
        snapshot_stride=1,
    )


@dataclass
class VWindow:
    traj: object
    sup_l2: float
    strichartz_norm: float

    @property
    def final(self) -> Field:
        return self.traj.final


def solve_v(v0: Field, t_final: float, config: SplitConfig) -> VWindow:
    """Full-equation window solve for the band-limited part.

    Precondition (explicit instantiation of the smallness requirement):
    T^A ||v0||_2^beta <= 1/8.
    """
    big_a = float(derive(config.params).A)
    load = t_final**big_a * v0.l2() ** float(config.params.beta)
    if load > STEP_BUDGET:
        raise BudgetExceeded(
            f"window budget T^A ||v0||^beta = {load:.3e} exceeds {STEP_BUDGET}"
        )
    traj = solve(v0, _window_solver_config(config, t_final))
    r, _, gamma_m = config.exponents()
    strich = mixed_norm(traj.snapshot_times, traj.snapshots, traj.grid, gamma_m, r)
    return VWindow(traj=traj, sup_l2=float(np.max(traj.l2)), strichartz_norm=strich)


def _g_source(v: np.ndarray, w: np.ndarray, config: SplitConfig) -> np.ndarray:
    """G(v, w) = (K*|v+w|^beta)(v+w) - (K*|v|^beta) v."""
    solver = config.solver
    total = v + w
    return hartree_potential(total, solver) * total - hartree_potential(v, solver) * v


@dataclass
class WWindow:
    times: np.ndarray
    values: list  # arrays per node
    free_values: list  # S(t) w0 per node
    contraction_ratios: list
    iterations: int
    mixed_norm: float
    free_unit_window_norm: float

    def field(self, grid: Grid, index: int = -1) -> Field:
        return Field(grid, self.values[index])

    def free_field(self, grid: Grid, index: int = -1) -> Field:
        return Field(grid, self.free_values[index])


def solve_w(w0: Field, v_traj, t_final: float, config: SplitConfig) -> WWindow:
    """Picard iteration on the Duhamel form of the difference equation.

    The v trajectory must cover [0, t_final] on the window's node grid.
    The time integral uses the trapezoid rule, evaluated spectrally so
    the inner propagators are exact phases.
    """
    grid = config.solver.grid
    times = np.asarray(v_traj.snapshot_times, dtype=float)
    if abs(times[-1] - t_final) > 1e-9 * max(1.0, t_final):
        raise DomainError("v trajectory does not cover the window")
    h = times[1] - times[0]
    n_nodes = len(times)
    m = float(config.params.m)
    sign = config.params.sign_value

    r, q, gamma_m = config.exponents()
    free_unit = window_norm(w0, config.params, 0.0, q, r)
    v_strichartz = mixed_norm(times, v_traj.snapshots, grid, gamma_m, r)
    se = step_exponents(config.point, config.params, check=False)
    big_a = float(derive(config.params).A)
    beta = float(config.params.beta)
    load = t_final**big_a * v_strichartz**beta + t_final ** float(se.D) * free_unit**beta
    if load > STEP_BUDGET:
        raise BudgetExceeded(
            f"window budget T^A||v||^beta + T^D||S(t)w0||^beta = {load:.3e} "
            f"exceeds {STEP_BUDGET}"
        )

    phase_neg = [np.exp(-1j * t * grid.xi_mag**m) for t in times]
    free = [np.fft.ifftn(np.conj(ph) * w0.spectrum) for ph in phase_neg]
    v_nodes = v_traj.snapshots

    current = [f.copy() for f in free]
    ratios: list[float] = []
    prev_dist = None
    iterations = 0
    for iterations in range(1, config.picard_max_iter + 1):
        g_hat = [
            ph * np.fft.fftn(_g_source(v_nodes[j], current[j], config))
            for j, ph in enumerate(phase_neg)
        ]
        duhamel = []
        running = np.zeros(grid.shape, dtype=np.complex128)
        for j in range(n_nodes):
            if j > 0:
                running = running + (h / 2.0) * (g_hat[j - 1] + g_hat[j])
            duhamel.append(np.fft.ifftn(np.conj(phase_neg[j]) * running))
        new = [free[j] - 1j * sign * duhamel[j] for j in range(n_nodes)]
        dist = max(
            float(np.linalg.norm(new[j] - current[j]))
            * math.sqrt(grid.cell_volume)
            for j in range(n_nodes)
        )
        current = new
        if prev_dist is not None and prev_dist > 0:
            ratios.append(dist / prev_dist)
        prev_dist = dist
        if dist < config.picard_tol:
            break
    else:
        raise NoContraction(
            f"Picard did not reach tol={config.picard_tol} in "
            f"{config.picard_max_iter} iterations (ratios {ratios[-3:]})"
        )
    if ratios and min(ratios) >= 1.0:
        raise NoContraction(f"Picard ratios never dropped below 1: {ratios[:5]}")

    w_mixed = mixed_norm(times, current, grid, q, r)
    return WWindow(
        times=times,
        values=current,
        free_values=free,
        contraction_ratios=ratios,
        iterations=iterations,
        mixed_norm=w_mixed,
        free_unit_window_norm=free_unit,
    )


@dataclass
class SplitState:
    """Running decomposition with its norm ledgers."""

    v: Field
    w: Field
    k: int
    t_step: float
    v_norm_series: list = dc_field(default_factory=list)
    w_lin_norm_series: list = dc_field(default_factory=list)

    @property
    def elapsed(self) -> float:
        return self.k * self.t_step


def initial_state(u0: Field, config: SplitConfig, big_n: Fraction | None = None) -> SplitState:
    plan = config.plan(big_n)
    v0, w0 = decompose(u0, config, big_n)
    r, q, _ = config.exponents()
    state = SplitState(v=v0, w=w0, k=0, t_step=float(plan.t_step))
    state.v_norm_series.append(v0.l2())
    state.w_lin_norm_series.append(window_norm(w0, config.params, 0.0, q, r))
    return state


def advance(state: SplitState, config: SplitConfig, big_n: Fraction | None = None) -> SplitState:
    """One step of the iterated decomposition."""
    t_k = state.t_step
    vw = solve_v(state.v, t_k, config)
    ww = solve_w(state.w, vw.traj, t_k, config)

    grid = config.solver.grid
    free_end = ww.free_field(grid)
    v_next = vw.final + (ww.field(grid) - free_end)
    w_next = free_end

    cap = config.budget_cap(big_n)
    if v_next.l2() > cap:
        raise BudgetExceeded(
            f"||v_{state.k + 1}||_2 = {v_next.l2():.6g} exceeds budget 2 N^alpha = {cap:.6g}",
            step=state.k + 1,
        )
    r, q, _ = config.exponents()
    return SplitState(
        v=v_next,
        w=w_next,
        k=state.k + 1,
        t_step=state.t_step,
        v_norm_series=state.v_norm_series + [v_next.l2()],
        w_lin_norm_series=state.w_lin_norm_series
        + [window_norm(w_next, config.params, 0.0, q, r)],
    )


@dataclass
class StepRecord:
    k: int
    t_k: float
    v_norm: float
    w_lin_norm: float
    deviation: float

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "T_k": self.t_k,
            "v_norm": self.v_norm,
            "w_lin_norm": self.w_lin_norm,
            "deviation": self.deviation,
        }


@dataclass
class CampaignReport:
    big_n: Fraction
    plan: StepPlan
    steps: list[StepRecord]
    executed: int
    elapsed: float
    scheduled_elapsed: float
    max_deviation: float
    w_norm_drift: float
    budget_cap: float
    truncated_by_cap: bool
    final_v: Field | None = None
    final_w: Field | None = None

    def to_json(self) -> dict:
        return {
            "N": str(self.big_n),
            "lambda": str(self.plan.lam),
            "T_step": float(self.plan.t_step),
            "K_N": self.plan.k_n,
            "diverges": self.plan.diverges,
            "executed": self.executed,
            "elapsed": self.elapsed,
            "scheduled_elapsed": self.scheduled_elapsed,
            "max_deviation": self.max_deviation,
            "w_norm_drift": self.w_norm_drift,
            "budget_cap": self.budget_cap,
            "truncated_by_cap": self.truncated_by_cap,
            "steps": [s.to_json() for s in self.steps],
        }


def run_campaign(u0: Field, config: SplitConfig, big_n: Fraction | None = None) -> CampaignReport:
    """Execute min(K_N, step_cap) steps and cross-check against a direct solve.

    The direct solution advances window by window with the same node
    spacing as the split scheme, so the reported deviation is pure scheme
    error.
    """
    n_val = config.N if big_n is None else Fraction(big_n)
    plan = config.plan(n_val)
    steps_to_run = min(plan.k_n, config.step_cap)
    state = initial_state(u0, config, n_val)
    w0_l2 = state.w.l2()

    direct = u0.copy()
    records: list[StepRecord] = []
    max_dev = 0.0
    w_drift = 0.0
    for _ in range(steps_to_run):
        state = advance(state, config, n_val)
        window_cfg = _window_solver_config(config, state.t_step)
        direct = solve(direct, window_cfg).final
        combined = state.v + state.w
        dev = float(
            np.linalg.norm(combined.values - direct.values)
            / max(np.linalg.norm(direct.values), 1e-300)
        )
        max_dev = max(max_dev, dev)
        if w0_l2 > 0:
            w_drift = max(w_drift, abs(state.w.l2() - w0_l2) / w0_l2)
        records.append(
            StepRecord(
                k=state.k,
                t_k=state.t_step,
                v_norm=state.v_norm_series[-1],
                w_lin_norm=state.w_lin_norm_series[-1],
                deviation=dev,
            )
        )
    return CampaignReport(
        big_n=n_val,
        plan=plan,
        steps=records,
        executed=steps_to_run,
        elapsed=steps_to_run * state.t_step,
        scheduled_elapsed=plan.k_n * float(plan.t_step),
        max_deviation=max_dev,
        w_norm_drift=w_drift,
        budget_cap=config.budget_cap(n_val),
        truncated_by_cap=plan.k_n > config.step_cap,
        final_v=state.v,
        final_w=state.w,
    )


@dataclass
class SweepReport:
    campaigns: dict
    elapsed_by_n: dict
    strictly_increasing: bool
    all_diverge: bool

    def to_json(self) -> dict:
        return {
            "elapsed_by_N": {str(k): v for k, v in self.elapsed_by_n.items()},
            "strictly_increasing": self.strictly_increasing,
            "all_diverge": self.all_diverge,
            "campaigns": {str(k): c.to_json() for k, c in self.campaigns.items()},
        }


def run_n_sweep(u0: Field, config: SplitConfig, n_values) -> SweepReport:
    """Campaigns across a scale sweep; checks elapsed(N) is increasing."""
    campaigns = {}
    elapsed = {}
    for n_val in n_values:
        n_val = Fraction(n_val)
        campaigns[n_val] = run_campaign(u0, config, n_val)
        elapsed[n_val] = campaigns[n_val].elapsed
    ordered = [elapsed[Fraction(n)] for n in n_values]
    increasing = all(b > a for a, b in zip(ordered, ordered[1:]))
    return SweepReport(
        campaigns=campaigns,
        elapsed_by_n=elapsed,
        strictly_increasing=increasing,
        all_diverge=all(c.plan.diverges for c in campaigns.values()),
    )
