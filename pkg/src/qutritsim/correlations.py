"""Pairwise correlation measures for two-qutrit states.

Negativity comes from the partial transpose.  The geometric-discord side
works in the Gell-Mann expansion

    rho = (1/9) [ I x I + sum_i x_i g_i x I + sum_j y_j I x g_j
                  + sum_ij T_ij g_i x g_j ]

with x_i = (3/2) tr(rho_A g_i), y_j = (3/2) tr(rho_B g_j) and
T_ij = (9/4) tr(rho g_i x g_j).  These feed a 9x9 correlation matrix C whose
squared singular values bound the Hilbert-Schmidt discord from below: the
bound keeps the six smallest eigenvalues of C C^t (a complete projective
measurement on one qutrit can retain at most three).  The oracle minimizes
the actual measurement residual over parametrized measurement bases and so
upper-bounds the true discord from above.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .linalg import (
    DensityMatrix,
    gell_mann,
    hermitian_eigenvalues,
    kron,
    partial_transpose,
    trace_norm,
)

NEGATIVITY_CLAMP = 1e-12
IMAG_TOL = 1e-10

_GM = np.stack([gell_mann(i) for i in range(1, 9)])
_GM_LEFT = np.stack([kron(g, np.eye(3)) for g in _GM])
_GM_RIGHT = np.stack([kron(np.eye(3), g) for g in _GM])
_GM_BOTH = np.stack([np.stack([kron(gi, gj) for gj in _GM]) for gi in _GM])


def negativity(rho: DensityMatrix, subsystem: int = 0) -> float:
    """(||rho^T_s||_1 - 1) / 2 for a bipartite state.

    Roundoff can leave the value a hair below zero; results in
    [-1e-12, 0) are clamped to exactly 0.
    """
    if len(rho.dims) != 2:
        raise ValueError("negativity is defined for bipartite states")
    value = 0.5 * (trace_norm(partial_transpose(rho, subsystem)) - 1.0)
    if -NEGATIVITY_CLAMP <= value < 0.0:
        value = 0.0
    return float(value)


class GellMannDecomposition:
    """Local vectors x, y (length 8) and correlation block T (8x8)."""

    def __init__(self, x: np.ndarray, y: np.ndarray, t: np.ndarray):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = np.asarray(t, dtype=float)
        if x.shape != (8,) or y.shape != (8,) or t.shape != (8, 8):
            raise ValueError("decomposition needs x, y of length 8 and T of shape 8x8")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))
                and np.all(np.isfinite(t))):
            raise ValueError("decomposition entries must be finite")
        self.x = x
        self.y = y
        self.t = t


def gm_decompose(rho: DensityMatrix) -> GellMannDecomposition:
    """Expansion coefficients of a two-qutrit state; imaginary parts of the
    defining traces must vanish within 1e-10 and are then discarded."""
    if rho.dims != (3, 3):
        raise ValueError("gm_decompose expects a two-qutrit state")
    m = rho.matrix
    x = 1.5 * np.einsum('ab,iba->i', m, _GM_LEFT)
    y = 1.5 * np.einsum('ab,iba->i', m, _GM_RIGHT)
    t = 2.25 * np.einsum('ab,ijba->ij', m, _GM_BOTH)
    worst = max(float(np.abs(x.imag).max()), float(np.abs(y.imag).max()),
                float(np.abs(t.imag).max()))
    if worst > IMAG_TOL:
        raise ValueError(
            f"imaginary part {worst:.3e} of a decomposition trace exceeds {IMAG_TOL:.1e}")
    return GellMannDecomposition(x.real, y.real, t.real)


def gm_reconstruct(decomp: GellMannDecomposition) -> np.ndarray:
    """Reassemble the 9x9 matrix from its decomposition."""
    rho = np.eye(9, dtype=complex)
    rho += np.einsum('i,iab->ab', decomp.x, _GM_LEFT)
    rho += np.einsum('j,jab->ab', decomp.y, _GM_RIGHT)
    rho += np.einsum('ij,ijab->ab', decomp.t, _GM_BOTH)
    return rho / 9.0


def c_matrix(decomp: GellMannDecomposition) -> np.ndarray:
    """9x9 correlation matrix: corner 1/3, first row/column carry y and x
    scaled by 2/(3 sqrt(3)), lower-right block (2/9) T."""
    c = np.zeros((9, 9))
    c[0, 0] = 1.0 / 3.0
    scale = 2.0 / (3.0 * np.sqrt(3.0))
    c[0, 1:] = scale * decomp.y
    c[1:, 0] = scale * decomp.x
    c[1:, 1:] = (2.0 / 9.0) * decomp.t
    return c


def discord_lower_bound(rho: DensityMatrix) -> float:
    """Sum of the six smallest eigenvalues of C C^t (nonnegative)."""
    c = c_matrix(gm_decompose(rho))
    eigs = hermitian_eigenvalues(c @ c.T)
    value = float(eigs[:6].sum())
    if -NEGATIVITY_CLAMP <= value < 0.0:
        value = 0.0
    return value


def _measurement_residual(rho4: np.ndarray, total_sq: float,
                          theta: np.ndarray) -> float:
    """||rho - Pi(rho)||^2 for the projective measurement on factor 0 whose
    basis is exp(i sum theta_a g_a) applied to the computational basis."""
    h = np.einsum('i,iab->ab', theta, _GM)
    u = expm(1j * h)
    rotated = np.einsum('ea,ebgd,gc->abcd', u.conj(), rho4, u)
    kept = 0.0
    for i in range(3):
        block = rotated[i, :, i, :]
        kept += float((block.real ** 2 + block.imag ** 2).sum())
    return max(total_sq - kept, 0.0)


def discord_hs_oracle(rho: DensityMatrix, restarts: int = 20, seed: int = 0,
                      max_iterations: int = 500, tol: float = 1e-10,
                      full_output: bool = False):
    """Best Hilbert-Schmidt measurement residual found by Nelder-Mead.

    Runs `restarts` local searches from seeded random starting angles and
    returns the smallest residual (an upper bound on the true geometric
    discord).  Deterministic for a fixed seed: all starting points are drawn
    up front, so the result does not depend on evaluation order.  With
    full_output=True also returns whether every restart reported convergence.
    """
    if rho.dims != (3, 3):
        raise ValueError("discord oracle expects a two-qutrit state")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    rho4 = rho.matrix.reshape(3, 3, 3, 3)
    total_sq = float((rho.matrix.real ** 2 + rho.matrix.imag ** 2).sum())
    rng = np.random.default_rng(seed)
    starts = rng.uniform(-np.pi, np.pi, size=(restarts, 8))
    best = np.inf
    converged = True
    for theta0 in starts:
        result = minimize(
            lambda th: _measurement_residual(rho4, total_sq, th),
            theta0,
            method="Nelder-Mead",
            options={"maxiter": max_iterations, "xatol": tol, "fatol": tol},
        )
        converged = converged and bool(result.success)
        best = min(best, float(result.fun))
    best = max(best, 0.0)
    if full_output:
        return best, converged
    return best
