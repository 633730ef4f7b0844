"""Directional-modulation weight synthesis for crossed-dipole linear arrays."""

from .design import DEMO_SEED, DesignSpec, example_design
from .evaluation import constellation_at, pattern_sweep, response, scrambling_report
from .modulation import SymbolIndex, build_targets, enumerate_symbols, qpsk_phase
from .steering import (
    ArrayGeometry,
    Direction,
    PolarizationState,
    full_steering,
    polarisation_vector,
    spatial_steering,
)
from .synthesis import (
    DegenerateConstraintError,
    SingularGramError,
    SynthesisError,
    WeightSet,
    assemble_matrices,
    gram,
    solve_weights,
    synthesize_bank,
)

__version__ = "0.1.0"
