"""Dense complex linear algebra for small multi-qutrit systems.

All operators are plain numpy complex arrays in row-major layout.  For a
composite system with factor dimensions ``(dA, dB)`` the basis index of
``|i_a i_b>`` is ``i_a * dB + i_b``, which is exactly the ordering produced
by ``numpy.kron``; the same convention extends recursively to more factors.
``DensityMatrix`` pairs a matrix with its tuple of factor dimensions so that
partial traces and partial transposes can address individual factors.
"""

from __future__ import annotations

import math

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-9
JACOBI_OFFDIAG_TOL = 1e-12


class InvariantViolation(ValueError):
    """A numerical invariant (hermiticity, trace, positivity) failed."""


class JacobiConvergenceError(RuntimeError):
    """The cyclic Jacobi sweep limit was exhausted before convergence."""


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def basis_state(index: int, dim: int) -> np.ndarray:
    """Computational basis column vector |index> of the given dimension."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} outside [0, {dim})")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def outer(u: np.ndarray, v: np.ndarray | None = None) -> np.ndarray:
    """|u><v| (|u><u| when v is omitted)."""
    if v is None:
        v = u
    return np.outer(u, v.conj())


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with composite index (i_a, i_b) -> i_a*dim_b + i_b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for m in (a, b):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("kron expects square matrices")
    return np.kron(a, b)


def kron_all(factors) -> np.ndarray:
    """Left-to-right tensor product of a sequence of square matrices."""
    factors = list(factors)
    if not factors:
        raise ValueError("kron_all needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = kron(out, f)
    return out


# The eight standard 3x3 Gell-Mann matrices, normalized so that
# tr(g_i g_j) = 2 delta_ij.  Indexed 1..8.
def _build_gell_mann() -> tuple[np.ndarray, ...]:
    g = np.zeros((9, 3, 3), dtype=complex)
    g[1, 0, 1] = g[1, 1, 0] = 1.0
    g[2, 0, 1] = -1.0j
    g[2, 1, 0] = 1.0j
    g[3, 0, 0] = 1.0
    g[3, 1, 1] = -1.0
    g[4, 0, 2] = g[4, 2, 0] = 1.0
    g[5, 0, 2] = -1.0j
    g[5, 2, 0] = 1.0j
    g[6, 1, 2] = g[6, 2, 1] = 1.0
    g[7, 1, 2] = -1.0j
    g[7, 2, 1] = 1.0j
    s = 1.0 / math.sqrt(3.0)
    g[8, 0, 0] = g[8, 1, 1] = s
    g[8, 2, 2] = -2.0 * s
    g.setflags(write=False)
    return tuple(g[i] for i in range(9))


_GELL_MANN = _build_gell_mann()


def gell_mann(i: int) -> np.ndarray:
    """The i-th Gell-Mann matrix, i in 1..8 (read-only view)."""
    if not 1 <= i <= 8:
        raise ValueError(f"Gell-Mann index {i} outside 1..8")
    return _GELL_MANN[i]


def hermitian_eigenvalues(m: np.ndarray, tol: float = JACOBI_OFFDIAG_TOL,
                          max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.

    Sweeps unitary two-index rotations over every off-diagonal position until
    the off-diagonal Frobenius norm drops below ``tol``.  Input must be
    Hermitian within 1e-10; raises InvariantViolation otherwise and
    JacobiConvergenceError if the sweep limit is exhausted.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigensolver expects a square matrix")
    if not np.all(np.isfinite(a)):
        raise InvariantViolation("matrix has non-finite entries")
    herm_dev = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
    if herm_dev > HERMITICITY_TOL:
        raise InvariantViolation(
            f"hermiticity deviation {herm_dev:.3e} exceeds {HERMITICITY_TOL:.1e}")
    n = a.shape[0]
    if n == 1:
        return a.real.reshape(1).copy()
    a = 0.5 * (a + a.conj().T)
    # Rotating every |a_pq| above tol/(2n) bounds the final off-diagonal norm
    # by tol/2, so the sweep loop can terminate.
    skip = tol / (2.0 * n)
    for _ in range(max_sweeps):
        # sum the off-diagonal squares directly: subtracting the diagonal
        # from the full Frobenius norm cancels catastrophically near
        # convergence and never reaches tol^2
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        off_sq = float((off.real ** 2 + off.imag ** 2).sum())
        if off_sq <= tol * tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * phase.conjugate() * col_q
                a[:, q] = s * phase * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * phase * row_q
                a[q, :] = s * phase.conjugate() * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    else:
        raise JacobiConvergenceError(
            f"off-diagonal norm {math.sqrt(off_sq):.3e} above {tol:.1e} "
            f"after {max_sweeps} sweeps")
    w = np.sort(np.diag(a).real)
    return w


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.abs(hermitian_eigenvalues(m)).sum())


def trace_distance(a, b) -> float:
    """(1/2) * trace norm of the difference of two states or matrices."""
    am = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a)
    bm = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b)
    return 0.5 * trace_norm(am - bm)


def _check_factors(dims: tuple[int, ...], indices, what: str) -> list[int]:
    idx = sorted(set(int(i) for i in indices))
    if not idx:
        raise ValueError(f"{what}: no factor indices given")
    for i in idx:
        if not 0 <= i < len(dims):
            raise ValueError(f"{what}: factor index {i} outside 0..{len(dims) - 1}")
    return idx


def partial_trace_matrix(mat: np.ndarray, dims, keep) -> np.ndarray:
    """Partial trace of a raw matrix over all factors not listed in keep."""
    dims = tuple(int(d) for d in dims)
    mat = np.asarray(mat, dtype=complex)
    total = math.prod(dims)
    if mat.shape != (total, total):
        raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
    kept = _check_factors(dims, keep, "partial_trace")
    removed = [i for i in range(len(dims)) if i not in kept]
    tensor = mat.reshape(dims + dims)
    count = len(dims)
    for i in sorted(removed, reverse=True):
        tensor = np.trace(tensor, axis1=i, axis2=count + i)
        count -= 1
    kept_dim = math.prod(dims[i] for i in kept)
    return tensor.reshape(kept_dim, kept_dim)


def partial_transpose_matrix(mat: np.ndarray, dims, subsystem: int) -> np.ndarray:
    """Transpose one tensor factor of a raw matrix."""
    dims = tuple(int(d) for d in dims)
    mat = np.asarray(mat, dtype=complex)
    total = math.prod(dims)
    if mat.shape != (total, total):
        raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
    (s,) = _check_factors(dims, [subsystem], "partial_transpose")
    n = len(dims)
    tensor = mat.reshape(dims + dims)
    tensor = np.swapaxes(tensor, s, n + s)
    return tensor.reshape(total, total).copy()


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix with factor dims.

    Construction validates the three defining invariants (hermiticity within
    1e-10, |trace - 1| within 1e-9, minimum eigenvalue >= -1e-9) and raises
    InvariantViolation naming the first one that fails.
    """

    def __init__(self, matrix, dims):
        matrix = np.array(matrix, dtype=complex)
        dims = tuple(int(d) for d in dims)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("density matrix must be square")
        if any(d < 1 for d in dims) or math.prod(dims) != matrix.shape[0]:
            raise ValueError(
                f"factor dims {dims} do not multiply to dimension {matrix.shape[0]}")
        if not np.all(np.isfinite(matrix)):
            raise InvariantViolation("density matrix has non-finite entries")
        herm_dev = float(np.abs(matrix - matrix.conj().T).max())
        if herm_dev > HERMITICITY_TOL:
            raise InvariantViolation(
                f"hermiticity deviation {herm_dev:.3e} exceeds {HERMITICITY_TOL:.1e}")
        tr_dev = abs(matrix.trace() - 1.0)
        if tr_dev > TRACE_TOL:
            raise InvariantViolation(
                f"trace deviation {tr_dev:.3e} exceeds {TRACE_TOL:.1e}")
        low = hermitian_eigenvalues(matrix)[0]
        if low < -POSITIVITY_TOL:
            raise InvariantViolation(
                f"negative eigenvalue {low:.3e} below -{POSITIVITY_TOL:.1e}")
        self.matrix = matrix
        self.dims = dims

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, vector, dims) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        v = v / norm
        return cls(outer(v), dims)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, dims={self.dims})"


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state over the kept factors, in their original order."""
    kept = _check_factors(rho.dims, keep, "partial_trace")
    reduced = partial_trace_matrix(rho.matrix, rho.dims, kept)
    return DensityMatrix(reduced, tuple(rho.dims[i] for i in kept))


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    """Partial transpose of one factor.  Returns a raw matrix: the result is
    Hermitian but in general not positive."""
    return partial_transpose_matrix(rho.matrix, rho.dims, subsystem)
