"""Design parameters shared by target construction and weight synthesis."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .steering import HORIZONTAL, VERTICAL, ArrayGeometry, Direction, PolarizationState

# Fixed seed for the built-in example; golden files depend on it.
DEMO_SEED = 20171113


def _direction_key(d: Direction) -> tuple[float, float]:
    return (round(d.theta, 9), round(d.phi, 9) % 360.0)


@dataclass(frozen=True)
class DesignSpec:
    """
    Everything needed to synthesize a weight bank.

    Attributes
    ----------
    geometry : ArrayGeometry
    pol1, pol2 : PolarizationState
        Polarisation states of the first and second signal.
    mainlobe_dirs, sidelobe_dirs : tuple of Direction
        Protected directions (r of them) and scrambled directions (R - r).
    constellation_magnitude, sidelobe_magnitude : float
        Desired response magnitude at the mainlobe and over the sidelobes.
    modulation_order : int
        Symbols per signal, M. The bank holds M**2 composite symbols.
    seed : int
        Seed of the sidelobe phase stream.
    diagonal_loading : float
        Added to the diagonal of the sidelobe Gram matrix.
    """

    geometry: ArrayGeometry
    pol1: PolarizationState
    pol2: PolarizationState
    mainlobe_dirs: tuple[Direction, ...]
    sidelobe_dirs: tuple[Direction, ...]
    constellation_magnitude: float = 1.0
    sidelobe_magnitude: float = 0.1
    modulation_order: int = 4
    seed: int = DEMO_SEED
    diagonal_loading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mainlobe_dirs", tuple(self.mainlobe_dirs))
        object.__setattr__(self, "sidelobe_dirs", tuple(self.sidelobe_dirs))
        if not self.mainlobe_dirs:
            raise ValueError("mainlobe grid is empty")
        if 2 * len(self.mainlobe_dirs) > 2 * self.geometry.num_elements:
            raise ValueError(
                f"{len(self.mainlobe_dirs)} mainlobe directions exceed the "
                f"{self.geometry.num_elements} available elements")
        overlap = ({_direction_key(d) for d in self.mainlobe_dirs}
                   & {_direction_key(d) for d in self.sidelobe_dirs})
        if overlap:
            theta, phi = sorted(overlap)[0]
            raise ValueError(
                f"mainlobe and sidelobe grids overlap at theta={theta}, phi={phi}")
        if not self.constellation_magnitude > 0:
            raise ValueError("constellation_magnitude must be positive")
        if not self.sidelobe_magnitude >= 0:
            raise ValueError("sidelobe_magnitude must be nonnegative")
        if int(self.modulation_order) != self.modulation_order or self.modulation_order < 2:
            raise ValueError("modulation_order must be an integer >= 2")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        if not self.diagonal_loading >= 0:
            raise ValueError("diagonal_loading must be nonnegative")

    @property
    def num_elements(self) -> int:
        return self.geometry.num_elements

    @property
    def num_symbols(self) -> int:
        return self.modulation_order ** 2

    @property
    def sample_count(self) -> int:
        """Total sampled directions, mainlobe plus sidelobe."""
        return len(self.mainlobe_dirs) + len(self.sidelobe_dirs)

    def with_seed(self, seed: int) -> "DesignSpec":
        return replace(self, seed=seed)

    def with_loading(self, loading: float) -> "DesignSpec":
        return replace(self, diagonal_loading=loading)

    def to_dict(self) -> dict:
        return {
            "positions": list(self.geometry.positions),
            "pol1": {"gamma_deg": self.pol1.gamma, "eta_deg": self.pol1.eta},
            "pol2": {"gamma_deg": self.pol2.gamma, "eta_deg": self.pol2.eta},
            "mainlobe": [[d.theta, d.phi] for d in self.mainlobe_dirs],
            "sidelobe": [[d.theta, d.phi] for d in self.sidelobe_dirs],
            "constellation_magnitude": self.constellation_magnitude,
            "sidelobe_magnitude": self.sidelobe_magnitude,
            "modulation_order": self.modulation_order,
            "seed": self.seed,
            "diagonal_loading": self.diagonal_loading,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DesignSpec":
        return cls(
            geometry=ArrayGeometry(tuple(doc["positions"])),
            pol1=PolarizationState(doc["pol1"]["gamma_deg"], doc["pol1"]["eta_deg"]),
            pol2=PolarizationState(doc["pol2"]["gamma_deg"], doc["pol2"]["eta_deg"]),
            mainlobe_dirs=tuple(Direction(t, p) for t, p in doc["mainlobe"]),
            sidelobe_dirs=tuple(Direction(t, p) for t, p in doc["sidelobe"]),
            constellation_magnitude=doc["constellation_magnitude"],
            sidelobe_magnitude=doc["sidelobe_magnitude"],
            modulation_order=doc["modulation_order"],
            seed=doc["seed"],
            diagonal_loading=doc["diagonal_loading"],
        )


def angle_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start+step, ..., stop`` free of accumulated drift."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        return np.zeros(0)
    return start + step * np.arange(count)


def cut_directions(thetas: Sequence[float], phis: Sequence[float]) -> tuple[Direction, ...]:
    """All ``(theta, phi)`` pairs, phi-major."""
    return tuple(Direction(float(t), float(p)) for p in phis for t in thetas)


def example_design(seed: int = DEMO_SEED) -> DesignSpec:
    """
    The 19-element example: 9 wavelength aperture at half-wavelength spacing,
    horizontal/vertical polarisation pair, QPSK, mainlobe at broadside on the
    phi=90 cut and sidelobes theta in [5, 90] every degree on phi = +/-90.
    """
    return DesignSpec(
        geometry=ArrayGeometry.from_aperture(9.0, 0.5),
        pol1=HORIZONTAL,
        pol2=VERTICAL,
        mainlobe_dirs=(Direction(0.0, 90.0),),
        sidelobe_dirs=cut_directions(angle_grid(5.0, 90.0, 1.0), (90.0, -90.0)),
        constellation_magnitude=1.0,
        sidelobe_magnitude=0.1,
        modulation_order=4,
        seed=seed,
        diagonal_loading=0.0,
    )
