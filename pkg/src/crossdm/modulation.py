"""
Composite symbols and desired responses.

Two signals each carry one of M symbols, so the pair forms one of M**2
composite symbols ``m = m1*M + m2``. For each composite symbol the desired
response is fixed at the mainlobe (the constellation point of each signal)
and random-phased over the sidelobes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .design import DesignSpec

# Gray-coded QPSK, in symbol-index order.
QPSK_LABELS = ("00", "01", "11", "10")
QPSK_PHASES = {"00": 45.0, "01": 135.0, "11": -45.0, "10": -135.0}


def qpsk_phase(bits: str) -> float:
    """Phase in degrees of a two-bit QPSK label."""
    try:
        return QPSK_PHASES[bits]
    except (KeyError, TypeError):
        raise ValueError(f"not a QPSK label: {bits!r}") from None


def constellation_phases(order: int) -> np.ndarray:
    """
    Phase in degrees of each of the ``order`` symbols of one signal.

    QPSK follows the Gray-coded lookup; other orders use the evenly rotated
    PSK grid ``360*k/M + 180/M``.
    """
    if order < 2:
        raise ValueError("modulation order must be >= 2")
    if order == 4:
        return np.array([QPSK_PHASES[b] for b in QPSK_LABELS])
    k = np.arange(order)
    return 360.0 * k / order + 180.0 / order


def symbol_label(k: int, order: int) -> str:
    if order == 4:
        return QPSK_LABELS[k]
    bits = int(np.log2(order))
    if 2 ** bits == order:
        return format(k, f"0{bits}b")
    return str(k)


@dataclass(frozen=True)
class SymbolIndex:
    m: int
    order: int

    def __post_init__(self):
        if not 0 <= self.m < self.order ** 2:
            raise ValueError(f"symbol {self.m} outside [0, {self.order ** 2 - 1}]")

    @property
    def m1(self) -> int:
        return self.m // self.order

    @property
    def m2(self) -> int:
        return self.m % self.order

    @property
    def label(self) -> str:
        """Comma-joined constituent labels, e.g. ``"00,11"``."""
        return f"{symbol_label(self.m1, self.order)},{symbol_label(self.m2, self.order)}"

    @classmethod
    def from_pair(cls, m1: int, m2: int, order: int) -> "SymbolIndex":
        if not (0 <= m1 < order and 0 <= m2 < order):
            raise ValueError(f"constituent symbols ({m1}, {m2}) outside [0, {order - 1}]")
        return cls(m1 * order + m2, order)

    @classmethod
    def parse(cls, text: str, order: int) -> "SymbolIndex":
        """Accept either a composite index (``"6"``) or a label pair (``"00,11"``)."""
        text = text.strip()
        if "," in text:
            left, right = (part.strip() for part in text.split(","))
            labels = [symbol_label(k, order) for k in range(order)]
            try:
                return cls.from_pair(labels.index(left), labels.index(right), order)
            except ValueError:
                raise ValueError(f"unknown symbol label {text!r}") from None
        try:
            return cls(int(text), order)
        except ValueError as exc:
            raise ValueError(f"bad symbol {text!r}: {exc}") from None


def enumerate_symbols(order: int) -> list[SymbolIndex]:
    """All ``order**2`` composite symbols, row-major in ``(m1, m2)``."""
    if int(order) != order or order < 2:
        raise ValueError("modulation order must be an integer >= 2")
    return [SymbolIndex(m, order) for m in range(order * order)]


@dataclass(frozen=True)
class TargetSet:
    """
    Desired responses for one composite symbol.

    Both vectors hold the first signal's directions followed by the second
    signal's, matching the column order of the steering matrices.
    """

    symbol: SymbolIndex
    mainlobe_targets: np.ndarray
    sidelobe_targets: np.ndarray
    seed: int


def sidelobe_phases(seed: int, m: int, num_dirs: int) -> np.ndarray:
    """
    Uniform phases in radians on [0, 2*pi), shape ``(2, num_dirs)``.

    Every entry is hashed from ``(seed, m, polarisation, direction)`` so the
    value does not depend on which other entries are generated or in what
    order.
    """
    out = np.empty((2, num_dirs))
    for pol in range(2):
        for d in range(num_dirs):
            ss = np.random.SeedSequence(seed, spawn_key=(m, pol, d))
            word = int(ss.generate_state(1, np.uint64)[0])
            out[pol, d] = (word >> 11) * 2.0 ** -53
    return 2.0 * np.pi * out


def build_targets(symbol: SymbolIndex, spec: DesignSpec, seed: int | None = None) -> TargetSet:
    if seed is None:
        seed = spec.seed
    if symbol.order != spec.modulation_order:
        raise ValueError("symbol order does not match the design's modulation order")
    r = len(spec.mainlobe_dirs)
    if r == 0:
        raise ValueError("mainlobe grid is empty")
    phases = np.deg2rad(constellation_phases(spec.modulation_order))
    ml = np.concatenate([
        np.full(r, spec.constellation_magnitude * np.exp(1j * phases[symbol.m1])),
        np.full(r, spec.constellation_magnitude * np.exp(1j * phases[symbol.m2])),
    ])
    psi = sidelobe_phases(seed, symbol.m, len(spec.sidelobe_dirs))
    sl = spec.sidelobe_magnitude * np.exp(1j * psi.reshape(-1))
    return TargetSet(symbol, ml, sl, seed)
