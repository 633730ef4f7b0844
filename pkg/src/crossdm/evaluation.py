"""Beam and phase patterns, constellations and scrambling statistics of a weight bank."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .design import DesignSpec, angle_grid
from .modulation import SymbolIndex
from .steering import ArrayGeometry, Direction, PolarizationState, full_steering
from .synthesis import WeightSet

CSV_HEADER = ("plot_angle_deg", "symbol", "channel", "mag_db", "phase_deg", "composite_db")


def response(w: np.ndarray, geometry: ArrayGeometry, direction: Direction,
             pol: PolarizationState) -> complex:
    """Beam response ``w^H s(theta, phi, gamma, eta)``."""
    w = np.asarray(w)
    n2 = 2 * geometry.num_elements
    if w.shape != (n2,):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({n2},)")
    return complex(np.vdot(w, full_steering(geometry, direction, pol)))


def wrap_phase(deg):
    """Map degrees onto [-180, 180)."""
    return np.mod(np.asarray(deg, dtype=float) + 180.0, 360.0) - 180.0


def to_db(magnitude):
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(magnitude)


def plot_direction(angle: float) -> Direction:
    """Signed plot axis: negative angles lie on the phi=270 cut, the rest on phi=90."""
    if angle < 0:
        return Direction(-angle, 270.0)
    return Direction(angle, 90.0)


@dataclass(frozen=True)
class PatternSample:
    plot_angle: float
    responses: tuple[complex, complex]

    @property
    def magnitudes_db(self) -> tuple[float, float]:
        return tuple(float(to_db(abs(p))) for p in self.responses)

    @property
    def phases_deg(self) -> tuple[float, float]:
        return tuple(float(wrap_phase(np.degrees(np.angle(p)))) for p in self.responses)

    @property
    def composite_db(self) -> float:
        p1, p2 = self.responses
        return float(to_db(np.hypot(abs(p1), abs(p2))))


def sweep_angles(step: float) -> np.ndarray:
    if not step > 0:
        raise ValueError("step must be positive")
    return angle_grid(-90.0, 90.0, step)


def pattern_sweep(w: np.ndarray, spec: DesignSpec, step: float = 1.0) -> list[PatternSample]:
    out = []
    for angle in sweep_angles(step):
        d = plot_direction(float(angle))
        pair = (response(w, spec.geometry, d, spec.pol1),
                response(w, spec.geometry, d, spec.pol2))
        out.append(PatternSample(float(angle), pair))
    return out


def constellation_at(bank: WeightSet, spec: DesignSpec, direction: Direction) -> np.ndarray:
    """Responses of every symbol toward ``direction``, shape ``(M**2, 2)``."""
    s1 = full_steering(spec.geometry, direction, spec.pol1)
    s2 = full_steering(spec.geometry, direction, spec.pol2)
    wh = np.asarray(bank.weights).conj()
    return np.column_stack([wh @ s1, wh @ s2])


def circular_std(phases_rad: np.ndarray, floor: float = 1e-12) -> tuple[float, float]:
    """
    Mean resultant length and circular standard deviation ``sqrt(-2 ln R)``.

    Resultant lengths below ``floor`` are treated as exactly zero, giving an
    infinite deviation; the balanced QPSK grid lands there.
    """
    r = float(np.abs(np.mean(np.exp(1j * np.asarray(phases_rad)))))
    if r < floor:
        return 0.0, float("inf")
    return r, float(np.sqrt(-2.0 * np.log(min(r, 1.0))))


@dataclass(frozen=True)
class DirectionStats:
    region: str                      # "mainlobe" or "sidelobe"
    direction: Direction
    resultant_length: tuple[float, float]
    circular_std: tuple[float, float]
    max_magnitude: tuple[float, float]
    phases_deg: np.ndarray           # (M**2, 2)


def scrambling_report(bank: WeightSet, spec: DesignSpec) -> list[DirectionStats]:
    """Phase dispersion across all symbols, mainlobe directions first then sidelobes."""
    rows = []
    for region, dirs in (("mainlobe", spec.mainlobe_dirs), ("sidelobe", spec.sidelobe_dirs)):
        for d in dirs:
            pts = constellation_at(bank, spec, d)
            stats = [circular_std(np.angle(pts[:, c])) for c in range(2)]
            rows.append(DirectionStats(
                region=region,
                direction=d,
                resultant_length=(stats[0][0], stats[1][0]),
                circular_std=(stats[0][1], stats[1][1]),
                max_magnitude=tuple(float(v) for v in np.max(np.abs(pts), axis=0)),
                phases_deg=wrap_phase(np.degrees(np.angle(pts))),
            ))
    return rows


def pattern_rows(bank: WeightSet, spec: DesignSpec, step: float,
                 symbols: Iterable[int] | None = None) -> list[tuple]:
    """CSV rows sorted by angle, then symbol, then channel."""
    if symbols is None:
        symbols = range(len(bank))
    symbols = sorted(set(int(m) for m in symbols))
    for m in symbols:
        if not 0 <= m < len(bank):
            raise ValueError(f"symbol {m} not in bank of {len(bank)}")
    angles = sweep_angles(step)
    g = spec.geometry
    rows = []
    for angle in angles:
        d = plot_direction(float(angle))
        s1 = full_steering(g, d, spec.pol1)
        s2 = full_steering(g, d, spec.pol2)
        for m in symbols:
            wh = bank.weights[m].conj()
            sample = PatternSample(float(angle), (complex(wh @ s1), complex(wh @ s2)))
            comp = sample.composite_db
            for ch in range(2):
                rows.append((float(angle), m, ch + 1, sample.magnitudes_db[ch],
                             sample.phases_deg[ch], comp))
    return rows


def _fixed(x: float) -> str:
    text = f"{x:.6f}"
    return "0.000000" if text == "-0.000000" else text


def write_pattern_csv(stream: TextIO, rows: Sequence[tuple]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for angle, m, ch, mag, phase, comp in rows:
        writer.writerow([_fixed(angle), m, ch, _fixed(mag), _fixed(phase), _fixed(comp)])


def pattern_csv(bank: WeightSet, spec: DesignSpec, step: float,
                symbols: Iterable[int] | None = None) -> str:
    buf = io.StringIO()
    write_pattern_csv(buf, pattern_rows(bank, spec, step, symbols))
    return buf.getvalue()


def read_pattern_csv(stream: TextIO) -> list[dict]:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for row in reader:
        out.append({
            "plot_angle_deg": float(row["plot_angle_deg"]),
            "symbol": int(row["symbol"]),
            "channel": int(row["channel"]),
            "mag_db": float(row["mag_db"]),
            "phase_deg": float(row["phase_deg"]),
            "composite_db": float(row["composite_db"]),
        })
    return out


def symbol_indices(labels: Iterable[str], order: int) -> list[int]:
    return [SymbolIndex.parse(text, order).m for text in labels]
