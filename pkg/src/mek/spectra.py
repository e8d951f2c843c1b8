"""Partial traces, Jacobi diagonalization, and entanglement-spectrum extraction.

The eigensolver is a dependency-free cyclic Jacobi iteration on the real
symmetric embedding of the Hermitian input, which is plenty for the matrix
sizes produced by the truncated-basis states (a few hundred rows at most).
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError, DimensionError, NumericalError
from .fockspace import ComplexAmplitudeTensor

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
NEGATIVE_CLAMP = -1e-10
DEFAULT_RANK_TOL = 1e-10
_MAX_SWEEPS = 60


@dataclass
class ReducedDensityMatrix:
    """Hermitian reduced density operator of one tensor factor."""

    entries: np.ndarray
    subsystem_dim: int


@dataclass
class EntanglementSpectrum:
    """Descending eigenvalues of a reduced density operator.

    ``rank_tolerance`` is the threshold below which entries are deemed zero;
    it controls the Schmidt rank and which entries enter entropy sums.
    """

    probabilities: np.ndarray
    rank_tolerance: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        self.probabilities = np.asarray(self.probabilities, dtype=float)


def partial_trace(state: ComplexAmplitudeTensor, keep_factor: int) -> ReducedDensityMatrix:
    """Trace out every tensor factor except ``keep_factor``.

    Returns rho with entries sum_j psi(kept=i, j) psi^*(kept=i', j), where j
    runs over the joint index of all traced factors.
    """
    n_factors = len(state.mode_dims)
    if not 0 <= keep_factor < n_factors:
        raise DimensionError(
            f"keep_factor {keep_factor} out of range for {n_factors} tensor factors"
        )
    kept_dim = state.mode_dims[keep_factor]
    unfolded = np.moveaxis(state.amplitudes, keep_factor, 0).reshape(kept_dim, -1)
    unfolded = np.ascontiguousarray(unfolded)
    rho = unfolded @ unfolded.conj().T

    herm_defect = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_defect >= HERMITICITY_TOL:
        raise ContractError(f"reduced matrix is not Hermitian: defect {herm_defect:.3e}")
    trace_defect = abs(1.0 - float(np.trace(rho).real))
    if trace_defect >= TRACE_TOL:
        raise ContractError(
            f"reduced matrix trace deviates from 1 by {trace_defect:.3e}; "
            "was the input state normalized?"
        )
    return ReducedDensityMatrix(rho, kept_dim)


def _real_symmetric_embedding(hermitian: np.ndarray) -> np.ndarray:
    """Map H = A + iB to the real symmetric [[A, -B], [B, A]] (eigenvalues doubled)."""
    a = hermitian.real
    b = hermitian.imag
    return np.block([[a, -b], [b, a]])


def _off_diagonal_norm(matrix: np.ndarray) -> float:
    off = matrix - np.diag(np.diag(matrix))
    return float(np.linalg.norm(off))


def _jacobi_diagonal(matrix: np.ndarray, threshold: float) -> np.ndarray:
    """Cyclic Jacobi sweeps on a real symmetric matrix until off-norm < threshold."""
    m = matrix
    n = m.shape[0]
    skip = threshold / (2.0 * n)
    off = _off_diagonal_norm(m)
    for _ in range(_MAX_SWEEPS):
        if off < threshold:
            return np.diag(m).copy()
        for p in range(n - 1):
            row = m[p, p + 1 :]
            for q_off in np.nonzero(np.abs(row) > skip)[0]:
                q = p + 1 + q_off
                apq = m[p, q]
                # earlier rotations in this row may have zeroed the pivot
                if abs(apq) <= skip:
                    continue
                tau = (m[q, q] - m[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = m[:, p].copy()
                col_q = m[:, q].copy()
                m[:, p] = c * col_p - s * col_q
                m[:, q] = s * col_p + c * col_q
                row_p = m[p, :].copy()
                row_q = m[q, :].copy()
                m[p, :] = c * row_p - s * row_q
                m[q, :] = s * row_p + c * row_q
                m[p, q] = 0.0
                m[q, p] = 0.0
        off = _off_diagonal_norm(m)
    raise NumericalError(
        f"Jacobi sweeps did not converge: off-diagonal norm {off:.3e} vs threshold {threshold:.3e}",
        residual=off,
    )


def hermitian_eigenvalues(
    rho: ReducedDensityMatrix,
    rank_tolerance: float = DEFAULT_RANK_TOL,
) -> EntanglementSpectrum:
    """Full eigenvalue set of a Hermitian reduced matrix, sorted descending.

    The Hermitian matrix is embedded as a real symmetric matrix of twice the
    size (complex entries become 2x2 real blocks), diagonalized by cyclic
    Jacobi rotations, and the exactly duplicated eigenvalues of the embedding
    are removed by taking every other entry of the sorted list. Negative
    round-off above -1e-10 is clamped to zero; anything below is an error.
    """
    entries = np.asarray(rho.entries, dtype=complex)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionError(f"density matrix must be square, got {entries.shape}")
    herm_defect = float(np.max(np.abs(entries - entries.conj().T)))
    if herm_defect >= HERMITICITY_TOL:
        raise ContractError(f"matrix is not Hermitian: defect {herm_defect:.3e}")

    embedded = _real_symmetric_embedding(entries)
    threshold = 1e-14 * max(abs(float(np.trace(embedded))), np.finfo(float).tiny)
    doubled = _jacobi_diagonal(embedded, threshold)
    ordered = np.sort(doubled, kind="stable")[::-1]
    eigenvalues = ordered[::2].copy()

    worst = float(eigenvalues.min(initial=0.0))
    if worst < NEGATIVE_CLAMP:
        raise ContractError(
            f"eigenvalue {worst:.3e} below the round-off clamp window {NEGATIVE_CLAMP:.1e}"
        )
    np.clip(eigenvalues, 0.0, None, out=eigenvalues)
    return EntanglementSpectrum(eigenvalues, rank_tolerance=rank_tolerance)


def schmidt_rank(spectrum: EntanglementSpectrum) -> int:
    """Number of spectrum entries above the rank tolerance (1 iff separable)."""
    return int(np.count_nonzero(spectrum.probabilities > spectrum.rank_tolerance))


def schmidt_coefficients(state: ComplexAmplitudeTensor, keep_factor: int = 0) -> np.ndarray:
    """Descending singular values of the (kept factor | rest) unfolding.

    Uses one-sided Jacobi orthogonalization, which resolves tiny coefficients
    far below what squaring through the density matrix would allow, so rank-1
    checks can be asserted at the 1e-10 level.
    """
    n_factors = len(state.mode_dims)
    if not 0 <= keep_factor < n_factors:
        raise DimensionError(
            f"keep_factor {keep_factor} out of range for {n_factors} tensor factors"
        )
    kept_dim = state.mode_dims[keep_factor]
    mat = np.moveaxis(state.amplitudes, keep_factor, 0).reshape(kept_dim, -1)
    if mat.shape[0] < mat.shape[1]:
        mat = mat.T
    # the unfolding can be a view of the caller's amplitudes; rotations below
    # are in place, so always copy
    work = np.array(mat, dtype=complex)
    n_cols = work.shape[1]
    # columns below machine noise relative to the dominant one are already
    # numerically zero; rotating them against each other never converges, and
    # the pairwise threshold must sit above the dot-product rounding noise
    scale = float(np.max(np.sum(np.abs(work) ** 2, axis=0)))
    floor = (1e-14) ** 2 * scale

    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n_cols - 1):
            for q in range(p + 1, n_cols):
                col_p = work[:, p]
                col_q = work[:, q]
                gpp = float(np.vdot(col_p, col_p).real)
                gqq = float(np.vdot(col_q, col_q).real)
                gpq = complex(np.vdot(col_p, col_q))
                if min(gpp, gqq) <= floor:
                    continue
                if abs(gpq) <= 1e-13 * math.sqrt(gpp * gqq) or abs(gpq) == 0.0:
                    continue
                rotated = True
                # absorb the cross-term phase into column q, then rotate real
                conj_phase = np.conj(gpq) / abs(gpq)
                tau = (gqq - gpp) / (2.0 * abs(gpq))
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                new_p = c * col_p - s * conj_phase * col_q
                new_q = s * col_p + c * conj_phase * col_q
                work[:, p] = new_p
                work[:, q] = new_q
        if not rotated:
            break
    else:
        raise NumericalError("one-sided Jacobi did not orthogonalize the unfolding")

    values = np.linalg.norm(work, axis=0)
    return np.sort(values, kind="stable")[::-1]
