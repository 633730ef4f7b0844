"""
Steering vectors for a crossed-dipole linear array.

Each element carries an x-oriented and a y-oriented dipole. Element positions
are measured along the array axis in wavelengths, so the spatial phase of
element n toward (theta, phi) is ``2*pi*d_n*sin(theta)*sin(phi)``.

All angles enter and leave this module in degrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Element displacements from element 0, in wavelengths."""

    positions: tuple[float, ...]

    def __post_init__(self):
        pos = tuple(float(p) for p in self.positions)
        if len(pos) < 1:
            raise ValueError("array needs at least one element")
        if pos[0] != 0.0:
            raise ValueError(f"positions[0] must be 0, got {pos[0]}")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must be strictly increasing")
        if not all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def uniform(cls, num_elements: int, spacing: float = 0.5) -> "ArrayGeometry":
        if num_elements < 1:
            raise ValueError("num_elements must be >= 1")
        if spacing <= 0:
            raise ValueError("spacing must be positive")
        return cls(tuple(spacing * n for n in range(num_elements)))

    @classmethod
    def from_aperture(cls, aperture: float, spacing: float = 0.5) -> "ArrayGeometry":
        """ULA spanning ``aperture`` wavelengths, e.g. 9 at 0.5 gives 19 elements."""
        ratio = aperture / spacing
        n = int(round(ratio))
        if abs(ratio - n) > 1e-9:
            raise ValueError(
                f"aperture {aperture} is not a multiple of spacing {spacing}")
        return cls.uniform(n + 1, spacing)

    @property
    def num_elements(self) -> int:
        return len(self.positions)

    @property
    def as_array(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=float)


@dataclass(frozen=True)
class Direction:
    """Elevation ``theta`` in [0, 180] and azimuth ``phi`` folded into [0, 360)."""

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        if not 0.0 <= theta <= 180.0:
            raise ValueError(f"theta must lie in [0, 180], got {theta}")
        phi = float(self.phi) % 360.0
        # -1e-15 % 360 rounds to 360.0
        if phi >= 360.0:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class PolarizationState:
    """Auxiliary polarisation angle ``gamma`` and phase difference ``eta``, degrees."""

    gamma: float
    eta: float

    def __post_init__(self):
        gamma, eta = float(self.gamma), float(self.eta)
        if not 0.0 <= gamma <= 90.0:
            raise ValueError(f"gamma must lie in [0, 90], got {gamma}")
        if not -180.0 <= eta < 180.0:
            raise ValueError(f"eta must lie in [-180, 180), got {eta}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "eta", eta)


HORIZONTAL = PolarizationState(0.0, 0.0)
VERTICAL = PolarizationState(90.0, 0.0)


def spatial_steering(geometry: ArrayGeometry, direction: Direction) -> np.ndarray:
    """Length-N unit-modulus spatial steering vector."""
    theta = np.deg2rad(direction.theta)
    phi = np.deg2rad(direction.phi)
    u = np.sin(theta) * np.sin(phi)
    return np.exp(-2j * np.pi * geometry.as_array * u)


def polarisation_vector(direction: Direction, pol: PolarizationState) -> tuple[complex, complex]:
    """
    Spatial-polarisation coherent pair ``(s_px, s_py)``.

    ``s_px = -sin(phi)cos(gamma) + cos(phi)cos(theta)sin(gamma)e^{j eta}``
    ``s_py =  cos(phi)cos(gamma) + sin(phi)cos(theta)sin(gamma)e^{j eta}``
    """
    theta, phi = np.deg2rad(direction.theta), np.deg2rad(direction.phi)
    gamma, eta = np.deg2rad(pol.gamma), np.deg2rad(pol.eta)
    tail = np.cos(theta) * np.sin(gamma) * np.exp(1j * eta)
    spx = -np.sin(phi) * np.cos(gamma) + np.cos(phi) * tail
    spy = np.cos(phi) * np.cos(gamma) + np.sin(phi) * tail
    return complex(spx), complex(spy)


def full_steering(geometry: ArrayGeometry, direction: Direction,
                  pol: PolarizationState) -> np.ndarray:
    """Length-2N steering vector, x-dipole block followed by y-dipole block."""
    spatial = spatial_steering(geometry, direction)
    spx, spy = polarisation_vector(direction, pol)
    return np.concatenate([spx * spatial, spy * spatial])


def steering_matrix(geometry: ArrayGeometry, directions: Sequence[Direction],
                    pol: PolarizationState) -> np.ndarray:
    """Stack ``full_steering`` over ``directions`` as the columns of a 2N x K matrix."""
    n2 = 2 * geometry.num_elements
    if len(directions) == 0:
        return np.zeros((n2, 0), dtype=complex)
    return np.column_stack([full_steering(geometry, d, pol) for d in directions])
