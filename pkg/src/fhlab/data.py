"""Initial data builders shared by the CLI and the test suite."""

from __future__ import annotations

import numpy as np

from .grids import Field, Grid


def gaussian(grid: Grid, amplitude: float = 0.5, width: float = 2.0) -> Field:
    """amplitude * exp(-|x|^2 / (2 width^2)), centered in the box."""
    if grid.dim == 1:
        profile = np.exp(-grid.x**2 / (2.0 * width**2))
    else:
        xx, yy = grid.mesh
        profile = np.exp(-(xx**2 + yy**2) / (2.0 * width**2))
    return Field(grid, amplitude * profile.astype(np.complex128))


def gaussian_packet(
    grid: Grid,
    amplitude: float = 0.3,
    width: float = 2.0,
    ripple_amplitude: float = 0.05,
    ripple_freq: float = 6.0,
    ripple_width: float = 1.5,
) -> Field:
    """Smooth bump plus a modulated bump carrying high-frequency content."""
    base = gaussian(grid, amplitude, width).values
    if grid.dim == 1:
        x = grid.x
        envelope = np.exp(-(x**2) / (2.0 * ripple_width**2))
        ripple = ripple_amplitude * np.cos(ripple_freq * x) * envelope
    else:
        xx, yy = grid.mesh
        envelope = np.exp(-(xx**2 + yy**2) / (2.0 * ripple_width**2))
        ripple = ripple_amplitude * np.cos(ripple_freq * xx) * envelope
    return Field(grid, base + ripple.astype(np.complex128))


def random_phase(grid: Grid, rng, freq_cap: float = 8.0, amplitude: float = 1.0) -> Field:
    """Unit-magnitude spectral coefficients with i.i.d. phases below freq_cap.

    The classic rough-but-bounded modulation-type data: every retained
    mode has modulus one, so no Sobolev smoothness beyond L^2 scaling.
    Normalized to the requested L^2 size.
    """
    phases = rng.uniform(0.0, 2.0 * np.pi, size=grid.shape)
    spectrum = np.where(grid.xi_mag <= freq_cap, np.exp(1j * phases), 0.0)
    field = Field.from_spectrum(grid, spectrum)
    scale = amplitude / max(field.l2(), 1e-300)
    return Field(grid, field.values * scale)
