"""Discrete mixed space-time norms, windowed semigroup norms, and
unit-cube modulation norms.

Space norms are Riemann sums with the grid cell volume, time norms use
the trapezoid rule, and infinite exponents take maxima.  The windowed
supremum norm truncates its sup over shifts T > 0 to a finite log grid,
so the computed value is a lower bound of the untruncated norm and is
monotone under grid enlargement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError
from .exponents import ProblemParams
from .grids import Field, Grid
from .spectral import propagate_linear


def space_norm(values: np.ndarray, r, cell_volume: float) -> float:
    """L^r norm over the box (max norm for r = inf)."""
    mags = np.abs(values)
    if r == math.inf:
        return float(np.max(mags))
    r = float(r)
    if r < 1:
        raise DomainError(f"space exponent must be >= 1, got {r}")
    return float((np.sum(mags**r) * cell_volume) ** (1.0 / r))


def mixed_norm(times, snapshots, grid: Grid, q, r) -> float:
    """L^q in time of the L^r space norms of an equispaced trajectory."""
    times = np.asarray(times, dtype=float)
    if len(times) != len(snapshots) or len(times) < 2:
        raise DomainError("trajectory must supply >= 2 equispaced snapshots")
    gaps = np.diff(times)
    if not np.allclose(gaps, gaps[0], rtol=1e-9, atol=1e-12):
        raise DomainError("snapshots are not equispaced in time")
    norms = np.array([space_norm(snap, r, grid.cell_volume) for snap in snapshots])
    if q == math.inf:
        return float(np.max(norms))
    q = float(q)
    if q < 1:
        raise DomainError(f"time exponent must be >= 1, got {q}")
    return float(np.trapz(norms**q, times) ** (1.0 / q))


def mixed_norm_of_trajectory(traj, q, r) -> float:
    return mixed_norm(traj.snapshot_times, traj.snapshots, traj.grid, q, r)


def window_norm(u0: Field, params: ProblemParams, shift: float, q, r, nodes: int = 17) -> float:
    """Mixed (q, r) norm of the free evolution over the window [shift, shift+1].

    Each node is reached by one exact spectral propagation from u0, so no
    time-stepping error accumulates.
    """
    times = shift + np.linspace(0.0, 1.0, nodes)
    snapshots = [propagate_linear(u0, float(t), params.m).values for t in times]
    return mixed_norm(times, snapshots, u0.grid, q, r)


def default_shift_grid(t_max: float = 1e3, count: int = 13) -> np.ndarray:
    """{0} followed by count log-spaced shifts up to t_max."""
    return np.concatenate([[0.0], np.logspace(-1, math.log10(t_max), count)])


@dataclass
class WindowTable:
    """Per-shift window norms with their weights; rows back the CSV output."""

    shifts: np.ndarray
    window_norms: np.ndarray
    weighted: np.ndarray

    @property
    def value(self) -> float:
        return float(np.max(self.weighted))

    def rows(self):
        for t, w, wt in zip(self.shifts, self.window_norms, self.weighted):
            yield float(t), float(w), float(wt)


def x_norm_table(
    u0: Field, params: ProblemParams, q, r, s: float, shifts=None, nodes: int = 17
) -> WindowTable:
    """Weighted window norms <T>^s * ||window(T)|| over the truncated grid."""
    if shifts is None:
        shifts = default_shift_grid()
    shifts = np.asarray(shifts, dtype=float)
    norms = np.array([window_norm(u0, params, float(t), q, r, nodes) for t in shifts])
    weights = (1.0 + shifts**2) ** (float(s) / 2.0)
    return WindowTable(shifts=shifts, window_norms=norms, weighted=weights * norms)


def x_norm(u0: Field, params: ProblemParams, q, r, s: float, shifts=None, nodes: int = 17) -> float:
    """Truncated windowed supremum norm (a lower bound of the full sup)."""
    return x_norm_table(u0, params, q, r, s, shifts, nodes).value


@dataclass
class SemigroupProbe:
    t0: float
    lhs: float
    rhs: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


def semigroup_growth_probe(
    u0: Field,
    params: ProblemParams,
    q,
    r,
    s: float,
    t0_values,
    shifts=None,
    nodes: int = 17,
    slack: float = 0.05,
) -> list[SemigroupProbe]:
    """Check ||S(t0) u0||_X <= <t0>^{|s|} ||u0||_X up to the given slack.

    Violations are returned as findings (ok=False), never raised: the
    truncated shift grid can undersample the supremum.
    """
    base = x_norm(u0, params, q, r, s, shifts, nodes)
    probes = []
    for t0 in t0_values:
        shifted = propagate_linear(u0, float(t0), params.m)
        lhs = x_norm(shifted, params, q, r, s, shifts, nodes)
        rhs = (1.0 + float(t0) ** 2) ** (abs(float(s)) / 2.0) * base * (1.0 + slack)
        probes.append(SemigroupProbe(t0=float(t0), lhs=lhs, rhs=rhs))
    return probes


def _cube_membership(grid: Grid):
    """Assign each frequency bin to the unit cube of the nearest lattice point."""
    axis = grid.xi_axis
    idx = np.floor(axis + 0.5).astype(np.int64)
    if grid.dim == 1:
        return idx.reshape(1, -1)
    kx, ky = np.meshgrid(idx, idx, indexing="ij")
    return np.stack([kx, ky])


def modulation_norm(u0: Field, p, q, s: float) -> float:
    """Discrete modulation norm via the sharp unit-cube decomposition.

    Frequencies are partitioned into unit cubes centered at integer
    lattice points; each piece is inverted, measured in L^p, weighted by
    <k>^s, and the cube values are combined in little-l^q.
    """
    grid = u0.grid
    if grid.length < 2 * math.pi:
        raise ResolutionError("box too small: need L >= 2*pi for unit frequency cubes")
    cubes = _cube_membership(grid)
    flat = cubes.reshape(grid.dim, -1)
    labels = np.unique(flat.T, axis=0)
    if len(labels) < 3:
        raise ResolutionError(f"only {len(labels)} frequency cubes resolved, need >= 3")

    spectrum = u0.spectrum
    values = []
    for label in labels:
        mask = np.all(cubes == label.reshape(grid.dim, *([1] * grid.dim)), axis=0)
        piece = np.fft.ifftn(np.where(mask, spectrum, 0.0))
        norm_p = space_norm(piece, p, grid.cell_volume)
        weight = (1.0 + float(np.dot(label, label))) ** (float(s) / 2.0)
        values.append(weight * norm_p)
    values = np.asarray(values)
    if q == math.inf:
        return float(np.max(values))
    q = float(q)
    return float(np.sum(values**q) ** (1.0 / q))


@dataclass
class GrowthFit:
    exponent_estimate: float
    residual: float
    shifts: np.ndarray
    window_norms: np.ndarray


def growth_fit(u0: Field, params: ProblemParams, q, r, shifts=None, nodes: int = 17) -> GrowthFit:
    """Least-squares slope of log window norm against log <T>.

    Confirms (one-sidedly) the predicted polynomial growth rate of the
    free evolution's windowed norms; the probe grid must span at least
    two decades for the fit to mean anything.
    """
    if shifts is None:
        shifts = np.logspace(0, 2.5, 12)
    shifts = np.asarray(shifts, dtype=float)
    positive = shifts[shifts > 0]
    if positive.max() / positive.min() < 100.0:
        raise DomainError("shift grid must span at least two decades")
    norms = np.array([window_norm(u0, params, float(t), q, r, nodes) for t in positive])
    logs = np.log((1.0 + positive**2) ** 0.5)
    coeffs, residuals, *_ = np.polyfit(logs, np.log(norms), 1, full=True)
    residual = float(residuals[0]) if len(residuals) else 0.0
    return GrowthFit(
        exponent_estimate=float(coeffs[0]),
        residual=residual,
        shifts=positive,
        window_norms=norms,
    )
