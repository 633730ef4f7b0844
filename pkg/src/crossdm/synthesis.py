"""
Per-symbol weight synthesis.

For composite symbol m the weights solve

    minimize    || p_SL - w^H S_SL ||_2
    subject to  w^H S_ML = p_ML

whose Lagrange solution is

    w = G^{-1} (S_SL p_SL^H - S_ML lam)
    lam = (S_ML^H G^{-1} S_ML)^{-1} (S_ML^H G^{-1} S_SL p_SL^H - p_ML^H)

with G = S_SL S_SL^H (+ loading * I). Both inverses are applied through
Cholesky factors; G is factored once and shared by every symbol.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sl

from .design import DesignSpec
from .modulation import TargetSet, build_targets, enumerate_symbols
from .steering import steering_matrix

log = logging.getLogger(__name__)


class SynthesisError(RuntimeError):
    """Base class for solver failures."""

    symbol: int | None = None


class SingularGramError(SynthesisError):
    """The (loaded) sidelobe Gram matrix is not positive definite."""


class DegenerateConstraintError(SynthesisError):
    """The mainlobe steering columns are linearly dependent."""


@dataclass(frozen=True)
class SteeringMatrices:
    """``S_ML`` (2N x 2r) and ``S_SL`` (2N x 2(R-r)), first-signal columns first."""

    mainlobe: np.ndarray
    sidelobe: np.ndarray


@dataclass
class WeightSet:
    """One weight vector of length 2N per composite symbol (x block, then y block)."""

    spec: DesignSpec
    weights: np.ndarray          # (M**2, 2N) complex
    objective_values: np.ndarray  # (M**2,) sidelobe residual norms
    constraint_residuals: np.ndarray  # (M**2,) max |w^H S_ML - p_ML|

    def __len__(self):
        return self.weights.shape[0]

    @property
    def seed(self) -> int:
        return self.spec.seed

    @property
    def max_constraint_residual(self) -> float:
        return float(np.max(self.constraint_residuals))


def assemble_matrices(spec: DesignSpec) -> SteeringMatrices:
    if not spec.mainlobe_dirs:
        raise ValueError("mainlobe grid is empty")
    g = spec.geometry
    ml = np.hstack([steering_matrix(g, spec.mainlobe_dirs, spec.pol1),
                    steering_matrix(g, spec.mainlobe_dirs, spec.pol2)])
    sl_ = np.hstack([steering_matrix(g, spec.sidelobe_dirs, spec.pol1),
                     steering_matrix(g, spec.sidelobe_dirs, spec.pol2)])
    return SteeringMatrices(ml, sl_)


def gram(sidelobe: np.ndarray, diagonal_loading: float = 0.0) -> np.ndarray:
    """``S_SL S_SL^H + loading * I``, Hermitian by construction."""
    g = sidelobe @ sidelobe.conj().T
    g = 0.5 * (g + g.conj().T)
    if diagonal_loading:
        g = g + diagonal_loading * np.eye(g.shape[0])
    return g


def recommended_loading(g: np.ndarray) -> float:
    """Fallback loading ``1e-10 * trace(G) / 2N`` for a rank-deficient G."""
    return 1e-10 * float(np.real(np.trace(g))) / g.shape[0]


class ConstrainedSolver:
    """
    Factors that depend only on the steering matrices, reused across symbols.

    Parameters
    ----------
    matrices : SteeringMatrices
    diagonal_loading : float
        Added to the Gram diagonal before factoring.
    """

    def __init__(self, matrices: SteeringMatrices, diagonal_loading: float = 0.0):
        self.matrices = matrices
        self.diagonal_loading = diagonal_loading
        s_ml = matrices.mainlobe
        self.gram = gram(matrices.sidelobe, diagonal_loading)
        try:
            self._g_factor = sl.cho_factor(self.gram, lower=True, check_finite=True)
        except (np.linalg.LinAlgError, sl.LinAlgError) as exc:
            raise SingularGramError(
                "Cholesky factorization of the sidelobe Gram matrix failed "
                f"(loading={diagonal_loading}): {exc}; try diagonal_loading="
                f"{recommended_loading(self.gram) if self.gram.size else 1e-10:.3g}"
            ) from exc
        # G^{-1} S_ML and the Schur complement S_ML^H G^{-1} S_ML
        self._ginv_ml = sl.cho_solve(self._g_factor, s_ml)
        schur = s_ml.conj().T @ self._ginv_ml
        schur = 0.5 * (schur + schur.conj().T)
        try:
            self._schur_factor = sl.cho_factor(schur, lower=True)
        except (np.linalg.LinAlgError, sl.LinAlgError) as exc:
            raise DegenerateConstraintError(
                "Cholesky factorization of S_ML^H G^-1 S_ML failed; mainlobe "
                f"steering columns are dependent: {exc}") from exc
        # cho_factor only detects exact breakdown; the factor diagonal holds
        # square roots of the pivots, so 1e-6 here means cond ~ 1e12
        diag = np.abs(np.diag(self._schur_factor[0]))
        if diag.size and diag.min() <= 1e-6 * diag.max():
            raise DegenerateConstraintError(
                "mainlobe steering columns are numerically dependent")

    def _apply(self, rhs, p_ml_h):
        ginv_rhs = sl.cho_solve(self._g_factor, rhs)
        lam = sl.cho_solve(self._schur_factor,
                           self.matrices.mainlobe.conj().T @ ginv_rhs - p_ml_h)
        return ginv_rhs - self._ginv_ml @ lam, lam

    def solve(self, mainlobe_targets: np.ndarray, sidelobe_targets: np.ndarray,
              refine: int = 2) -> np.ndarray:
        """
        Weights for one symbol.

        ``refine`` rounds of iterative refinement recompute the KKT residual
        from S_SL itself rather than from G, recovering the accuracy lost by
        squaring the condition number when G is formed.
        """
        s_ml, s_sl = self.matrices.mainlobe, self.matrices.sidelobe
        p_ml_h = np.conj(mainlobe_targets)
        p_sl_h = np.conj(sidelobe_targets)
        w, lam = self._apply(s_sl @ p_sl_h, p_ml_h)
        for _ in range(refine):
            # KKT: G w + S_ML lam = S_SL p_SL^H,  S_ML^H w = p_ML^H
            r1 = s_sl @ (p_sl_h - s_sl.conj().T @ w) - s_ml @ lam
            if self.diagonal_loading:
                r1 = r1 - self.diagonal_loading * w
            r2 = p_ml_h - s_ml.conj().T @ w
            dw, dlam = self._apply(r1, r2)
            w, lam = w + dw, lam + dlam
        return w


def objective(w: np.ndarray, matrices: SteeringMatrices, sidelobe_targets: np.ndarray) -> float:
    """Sidelobe residual ``||p_SL - w^H S_SL||_2``."""
    return float(np.linalg.norm(sidelobe_targets - w.conj() @ matrices.sidelobe))


def constraint_residual(w: np.ndarray, matrices: SteeringMatrices,
                        mainlobe_targets: np.ndarray) -> float:
    """Largest entry of ``|w^H S_ML - p_ML|``."""
    return float(np.max(np.abs(w.conj() @ matrices.mainlobe - mainlobe_targets)))


def solve_weights(matrices: SteeringMatrices, targets: TargetSet,
                  diagonal_loading: float = 0.0) -> np.ndarray:
    """Weights for a single symbol. Use :class:`ConstrainedSolver` for many."""
    solver = ConstrainedSolver(matrices, diagonal_loading)
    return solver.solve(targets.mainlobe_targets, targets.sidelobe_targets)


def synthesize_bank(spec: DesignSpec) -> WeightSet:
    matrices = assemble_matrices(spec)
    try:
        solver = ConstrainedSolver(matrices, spec.diagonal_loading)
    except SynthesisError as exc:
        # the factorization is shared, so it fails at the first symbol
        err = type(exc)(f"symbol 0: {exc}")
        err.symbol = 0
        raise err from exc

    symbols = enumerate_symbols(spec.modulation_order)
    n2 = 2 * spec.num_elements
    weights = np.empty((len(symbols), n2), dtype=complex)
    objectives = np.empty(len(symbols))
    residuals = np.empty(len(symbols))
    for sym in symbols:
        t = build_targets(sym, spec)
        w = solver.solve(t.mainlobe_targets, t.sidelobe_targets)
        if not np.all(np.isfinite(w)):
            err = SynthesisError(f"symbol {sym.m} ({sym.label}): non-finite weights")
            err.symbol = sym.m
            raise err
        weights[sym.m] = w
        objectives[sym.m] = objective(w, matrices, t.sidelobe_targets)
        residuals[sym.m] = constraint_residual(w, matrices, t.mainlobe_targets)
        log.debug("symbol %s objective %.6g residual %.3g",
                  sym.label, objectives[sym.m], residuals[sym.m])
    return WeightSet(spec, weights, objectives, residuals)
