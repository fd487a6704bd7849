# solver/grid.py
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy import fft as sfft

from errors import ArgumentError, ValidationError

_AXES = (-3, -2, -1)


def _broadcast(k: np.ndarray):
    return (k[:, None, None], k[None, :, None], k[None, None, :])


@dataclass(frozen=True)
class GridDescriptor:
    """Periodic cube [-L/2, L/2)^3 with n points per axis, carrying N components"""
    n: int
    box_length: float
    n_components: int
    workers: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise ValidationError(f"grid n must be a power of two >= 8, got {self.n}", pointer="/grid/n")
        if not self.box_length > 0:
            raise ValidationError(f"box length must be positive, got {self.box_length}", pointer="/grid/L")
        if self.n_components < 1:
            raise ValidationError(f"n_components must be positive, got {self.n_components}")

    @property
    def dx(self) -> float:
        return self.box_length / self.n

    @property
    def cell_volume(self) -> float:
        return self.dx ** 3

    @property
    def shape(self) -> Tuple[int, int, int, int]:
        return (self.n_components, self.n, self.n, self.n)

    @cached_property
    def axis(self) -> np.ndarray:
        return -0.5 * self.box_length + self.dx * np.arange(self.n)

    @cached_property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.axis, self.axis, self.axis, indexing="ij"))

    @cached_property
    def wavenumber_axis(self) -> np.ndarray:
        return 2.0 * np.pi * sfft.fftfreq(self.n, d=self.dx)

    @cached_property
    def derivative_axis(self) -> np.ndarray:
        """Wavenumbers for odd derivatives; the unpaired Nyquist mode is zeroed"""
        k = self.wavenumber_axis.copy()
        k[self.n // 2] = 0.0
        return k

    @cached_property
    def wavenumbers(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Broadcastable first-derivative wavenumbers (Nyquist zeroed)"""
        return _broadcast(self.derivative_axis)

    @cached_property
    def shift_wavenumbers(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _broadcast(self.wavenumber_axis)

    @cached_property
    def k_squared(self) -> np.ndarray:
        kx, ky, kz = self.shift_wavenumbers
        return kx ** 2 + ky ** 2 + kz ** 2

    def radius_from(self, center=(0.0, 0.0, 0.0)) -> np.ndarray:
        """Minimum-image distance from a point of the torus"""
        r2 = np.zeros((self.n, self.n, self.n))
        for x, c in zip(self.coordinates, center):
            d = np.mod(x - c + 0.5 * self.box_length, self.box_length) - 0.5 * self.box_length
            r2 = r2 + d ** 2
        return np.sqrt(r2)

    def with_components(self, n_components: int) -> "GridDescriptor":
        return replace(self, n_components=n_components)

    # spectral transforms over the three spatial axes

    def fft(self, data: np.ndarray) -> np.ndarray:
        return sfft.fftn(data, axes=_AXES, workers=self.workers)

    def ifft(self, data: np.ndarray) -> np.ndarray:
        return sfft.ifftn(data, axes=_AXES, workers=self.workers)

    def gradient(self, data: np.ndarray) -> np.ndarray:
        """Spectral gradient; returns shape (3,) + data.shape"""
        spectrum = self.fft(data)
        return np.stack([self.ifft(1j * k * spectrum) for k in self.wavenumbers])

    def integrate(self, density: np.ndarray) -> float:
        """Grid Riemann sum over the box (all leading axes summed)"""
        return float(np.sum(density) * self.cell_volume)


@dataclass
class FieldState:
    """N complex fields on the periodic grid at time t"""
    grid: GridDescriptor
    data: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.shape != self.grid.shape:
            raise ArgumentError(f"field shape {self.data.shape} does not match grid {self.grid.shape}")

    @classmethod
    def zeros(cls, grid: GridDescriptor, t: float = 0.0) -> "FieldState":
        return cls(grid, np.zeros(grid.shape, dtype=complex), t)

    @property
    def n_components(self) -> int:
        return self.grid.n_components

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.data)))

    def density(self) -> np.ndarray:
        """sum_j |u_j|^2 at every node"""
        return np.sum(np.abs(self.data) ** 2, axis=0)

    def spectrum(self) -> np.ndarray:
        return self.grid.fft(self.data)

    def gradient(self) -> np.ndarray:
        """Spectral gradient, shape (3, N, n, n, n)"""
        return self.grid.gradient(self.data)

    def gradient_norm(self) -> float:
        """||grad u|| in (L^2)^N"""
        spectrum = self.spectrum()
        weight = self.grid.cell_volume / self.grid.n ** 3
        return float(np.sqrt(np.sum(self.grid.k_squared * np.abs(spectrum) ** 2) * weight))

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.integrate(self.density())))

    def with_data(self, data: np.ndarray, t: Optional[float] = None) -> "FieldState":
        return FieldState(self.grid, data, self.t if t is None else t)

    def scaled(self, factor: complex) -> "FieldState":
        return self.with_data(factor * self.data)

    def copy(self) -> "FieldState":
        return FieldState(self.grid, self.data.copy(), self.t)

    def translated(self, shift) -> "FieldState":
        """u(x - shift) by a spectral phase; exact for band-limited fields"""
        spectrum = self.spectrum()
        phase = np.ones(self.grid.k_squared.shape, dtype=complex)
        for k, a in zip(self.grid.shift_wavenumbers, shift):
            phase = phase * np.exp(-1j * k * a)
        return self.with_data(self.grid.ifft(spectrum * phase))
