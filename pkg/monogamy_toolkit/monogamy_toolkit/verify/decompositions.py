from __future__ import annotations

from typing import Optional

import numpy as np

from ..families import haar_isometry
from ..matcore import EIGEN_CUTOFF, as_matrix, dagger, hermitian_eigh
from ..measures import Decomposition
from ..two_qubit_density import TwoQubitDensity
from .kraus import Seed

ISOMETRY_TOL = 1e-10
MEMBER_CUTOFF = 1e-14


class LengthTooSmall(ValueError):
    """
    Requested decomposition is shorter than the rank of the density.
    """
    pass


def eigen_ensemble(rho: TwoQubitDensity) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues q_j > EIGEN_CUTOFF of rho and their eigenvectors e_j as rows.
    """
    values, vectors = hermitian_eigh(rho.matrix)
    keep = values > EIGEN_CUTOFF
    return values[keep], vectors[:, keep].T


def ghjw_decomposition_sample(rho: TwoQubitDensity, length: int, seed: Seed,
                              isometry: Optional[np.ndarray] = None) -> Decomposition:
    """
    Mixes the eigen-ensemble {sqrt(q_j)|e_j>} with an isometry U of shape
    (length, rank): |phi_i> is proportional to sum_j U_ij sqrt(q_j)|e_j>, and p_i is
    its squared norm. Members with p_i below 1e-14 are dropped.
    :param rho: Two-qubit density.
    :param length: Number of ensemble members, at least rank(rho).
    :param seed: Seed of the generator drawing a Haar-random U.
    :param isometry: Explicit U used instead of a random one.
    :return: Decomposition reconstructing rho.
    """
    q, e = eigen_ensemble(rho)
    rank = q.size
    if length < rank:
        raise LengthTooSmall(f"length {length} is below rank(rho) = {rank}")
    if isometry is None:
        u = haar_isometry(length, rank, np.random.default_rng(seed))
    else:
        u = as_matrix(isometry)
        if u.shape != (length, rank):
            raise ValueError(f"isometry must have shape {(length, rank)}, got {u.shape}")
        deviation = float(np.max(np.abs(dagger(u) @ u - np.eye(rank))))
        if deviation > ISOMETRY_TOL:
            raise ValueError(f"isometry deviates from U^dagger U = I by {deviation:.3e}")
    unnormalized = u @ (np.sqrt(q)[:, None] * e)
    weights = np.real(np.einsum("ij,ij->i", unnormalized, np.conj(unnormalized)))
    keep = weights > MEMBER_CUTOFF
    members = unnormalized[keep] / np.sqrt(weights[keep])[:, None]
    return Decomposition.build(weights[keep], members, target=rho)
