"""Periodic grids and complex fields for the pseudospectral solver.

The torus [-L/2, L/2)^dim stands in for free space; L is chosen by the
caller so the data's mass outside |x| < L/4 is negligible.  Fields are
treated as immutable: every operation returns a fresh Field, and the
spectral representation is cached lazily on first use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, NonFinite


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with n points per dimension on box length L."""

    dim: int
    n: int
    length: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError(f"grid dim must be 1 or 2, got {self.dim}")
        if self.n < 16 or self.n & (self.n - 1):
            raise DomainError(f"n must be a power of two >= 16, got {self.n}")
        if not self.length > 0:
            raise DomainError(f"box length must be positive, got {self.length}")

    @cached_property
    def dx(self) -> float:
        return self.length / self.n

    @cached_property
    def cell_volume(self) -> float:
        return self.dx**self.dim

    @cached_property
    def x(self) -> np.ndarray:
        """Physical coordinates along one axis, centered at zero."""
        return (np.arange(self.n) / self.n - 0.5) * self.length

    @cached_property
    def mesh(self) -> tuple[np.ndarray, ...]:
        if self.dim == 1:
            return (self.x,)
        return tuple(np.meshgrid(self.x, self.x, indexing="ij"))

    @cached_property
    def xi_axis(self) -> np.ndarray:
        """Angular frequencies 2*pi*k/L along one axis, FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    @cached_property
    def xi_mag(self) -> np.ndarray:
        if self.dim == 1:
            return np.abs(self.xi_axis)
        kx, ky = np.meshgrid(self.xi_axis, self.xi_axis, indexing="ij")
        return np.sqrt(kx**2 + ky**2)

    @cached_property
    def mode_index_mag(self) -> np.ndarray:
        """Per-axis maximum |k| index, used by the dealias mask."""
        k = np.abs(np.fft.fftfreq(self.n) * self.n)
        if self.dim == 1:
            return k
        kx, ky = np.meshgrid(k, k, indexing="ij")
        return np.maximum(kx, ky)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Two-thirds rule: keep per-axis indices |k| <= n/3."""
        return self.mode_index_mag <= self.n / 3

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim


class Field:
    """Complex-valued field on a Grid, physical-space layout."""

    __slots__ = ("grid", "values", "_spectrum")

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != grid.shape:
            raise DomainError(f"field shape {values.shape} != grid shape {grid.shape}")
        self.grid = grid
        self.values = values
        self._spectrum = None

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: np.ndarray) -> "Field":
        field = cls(grid, np.fft.ifftn(spectrum))
        field._spectrum = np.asarray(spectrum, dtype=np.complex128)
        return field

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128))

    @property
    def spectrum(self) -> np.ndarray:
        """DFT coefficients (numpy forward convention), cached."""
        if self._spectrum is None:
            self._spectrum = np.fft.fftn(self.values)
        return self._spectrum

    def mass(self) -> float:
        """Discrete L^2 mass: sum |u|^2 * dx^dim."""
        return float(np.sum(np.abs(self.values) ** 2)) * self.grid.cell_volume

    def l2(self) -> float:
        return float(np.sqrt(self.mass()))

    def linf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def require_finite(self, step=None) -> "Field":
        if not self.is_finite():
            raise NonFinite("field contains non-finite values", step=step)
        return self

    def __add__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "Field":
        return Field(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())
