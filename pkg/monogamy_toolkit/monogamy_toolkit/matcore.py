"""
Dense complex linear-algebra kernel used by every measure.

Two-qubit operators use the basis order |00>, |01>, |10>, |11> (index 2a + b).
"""
from __future__ import annotations

import numpy as np
import numpy.typing as npt
import scipy.linalg

ComplexMatrix = npt.NDArray[np.complex128]

HERMITIAN_TOL = 1e-9
PSD_CLIP_TOL = 1e-9
EIGEN_CUTOFF = 1e-13

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


class NotHermitian(ValueError):
    """
    Matrix deviates from its conjugate transpose by more than the tolerance.
    """
    pass


class NotPSD(ValueError):
    """
    Matrix has an eigenvalue below the negative clipping window.
    """
    pass


class ConvergenceFailure(ValueError):
    """
    The Hermitian eigensolver did not converge.
    """
    pass


def as_matrix(data) -> ComplexMatrix:
    """
    Convert array-like data into a finite two-dimensional complex matrix.
    :param data: Nested sequence or array.
    :return: Complex matrix.
    """
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"Expected a non-empty two-dimensional matrix, got shape "
                         f"{m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("Matrix entries must be finite (no NaN/Inf)")
    return m


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    """
    Conjugate transpose.
    """
    return np.conj(m).T


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """
    Kronecker product, a-index major and b-index minor.
    """
    return np.kron(a, b)


def hermitian_deviation(m: ComplexMatrix) -> float:
    """
    Largest entry-wise deviation of the matrix from its conjugate transpose.
    :param m: Square matrix.
    :return: max |m - m^dagger|.
    """
    return float(np.max(np.abs(m - dagger(m))))


def _check_hermitian(m: ComplexMatrix, tol: float) -> ComplexMatrix:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"Matrix of shape {m.shape} is not square")
    deviation = hermitian_deviation(m)
    if deviation > tol:
        raise NotHermitian(f"Matrix deviates from its conjugate transpose by "
                           f"{deviation:.3e} > {tol:.1e}")
    return (m + dagger(m)) / 2


def hermitian_eigh(m: ComplexMatrix, tol: float = HERMITIAN_TOL
                   ) -> tuple[np.ndarray, ComplexMatrix]:
    """
    Eigendecomposition of the symmetrized matrix, eigenvalues in non-increasing
    order (ties keep the solver's original index order).
    :param m: Square matrix Hermitian within tol.
    :param tol: Allowed max-entry deviation from Hermiticity.
    :return: Eigenvalues and the matching eigenvectors as columns.
    """
    sym = _check_hermitian(m, tol)
    try:
        values, vectors = scipy.linalg.eigh(sym)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as err:
        raise ConvergenceFailure(f"Hermitian eigensolver failed: {err}") from err
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def hermitian_eigvals(m: ComplexMatrix, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """
    Real eigenvalues of a Hermitian matrix in non-increasing order.
    :param m: Square matrix Hermitian within tol.
    :param tol: Allowed max-entry deviation from Hermiticity.
    :return: Sorted eigenvalues.
    """
    values, _ = hermitian_eigh(m, tol)
    return values


def psd_factor(m: ComplexMatrix, tol: float = PSD_CLIP_TOL,
               cutoff: float = EIGEN_CUTOFF) -> ComplexMatrix:
    """
    Square-root factor W with m = W W^dagger, keeping only eigenvectors whose
    eigenvalue exceeds the cutoff.
    :param m: Hermitian PSD matrix.
    :param tol: Negative eigenvalues in [-tol, 0] are clipped to zero.
    :param cutoff: Eigenvalues at or below this are exact zeros.
    :return: Matrix of shape (dim, rank); rank may be zero.
    """
    values, vectors = hermitian_eigh(m, tol)
    if values[-1] < -tol:
        raise NotPSD(f"Matrix has eigenvalue {values[-1]:.3e} below -{tol:.1e}")
    keep = values > cutoff
    return vectors[:, keep] * np.sqrt(values[keep])


def psd_sqrt(m: ComplexMatrix, tol: float = PSD_CLIP_TOL) -> ComplexMatrix:
    """
    Hermitian PSD square root r with r r = m.
    :param m: Hermitian PSD matrix.
    :param tol: Negative eigenvalues in [-tol, 0] are clipped to zero.
    :return: Square root matrix.
    """
    values, vectors = hermitian_eigh(m, tol)
    if values[-1] < -tol:
        raise NotPSD(f"Matrix has eigenvalue {values[-1]:.3e} below -{tol:.1e}")
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ dagger(vectors)


def trace_norm_hermitian(m: ComplexMatrix, tol: float = HERMITIAN_TOL) -> float:
    """
    Trace norm of a Hermitian matrix, the sum of its absolute eigenvalues.
    """
    return float(np.sum(np.abs(hermitian_eigvals(m, tol))))


def partial_transpose_A(rho: ComplexMatrix) -> ComplexMatrix:
    """
    Partial transpose over the first qubit of a 4x4 operator:
    entry((a', b), (a, b')) = rho((a, b), (a', b')).
    :param rho: Two-qubit operator or TwoQubitDensity.
    :return: Partially transposed operator.
    """
    return _operator(rho).reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)


SIGMA_YY = kron(SIGMA_Y, SIGMA_Y)


def _operator(rho) -> ComplexMatrix:
    # accepts a bare matrix or anything exposing .matrix (TwoQubitDensity)
    return np.asarray(getattr(rho, "matrix", rho), dtype=np.complex128)


def spin_flip(rho: ComplexMatrix) -> ComplexMatrix:
    """
    (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
    """
    return SIGMA_YY @ np.conj(_operator(rho)) @ SIGMA_YY


def rank_with_tol(m: ComplexMatrix, tol: float) -> int:
    """
    Number of singular values above tol.
    :param m: Any matrix.
    :param tol: Singular value threshold.
    :return: Numerical rank.
    """
    try:
        singular = scipy.linalg.svdvals(m)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as err:
        raise ConvergenceFailure(f"SVD failed: {err}") from err
    return int(np.count_nonzero(singular > tol))
