"""Generators for the (2 x 2 x n) state families: GHZ and W standard forms, the
high-local-rank standard states, separable products and Haar-random states."""
from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .amplitudes import DimensionMismatch, unit_vector
from .params import GHZParams, LocalUnitaryTriple, WParams
from .state import TripartitePureState, make_state


def _basis_index(a: int, b: int, c: int, n: int) -> int:
    return a * 2 * n + b * n + c


def ghz_state(p: GHZParams) -> TripartitePureState:
    """Make lambda0|000> + lambda1 e^{i theta}|111> with n = 2."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[_basis_index(0, 0, 0, 2)] = p.lambda0
    amps[_basis_index(1, 1, 1, 2)] = p.lambda1 * np.exp(1j * p.theta)
    return make_state(2, amps)


def w_state(p: WParams) -> TripartitePureState:
    """Make lt0|001> + lt1|010> + lt2|100> + lt3|000> with n = 2."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[_basis_index(0, 0, 1, 2)] = p.lt0
    amps[_basis_index(0, 1, 0, 2)] = p.lt1
    amps[_basis_index(1, 0, 0, 2)] = p.lt2
    amps[_basis_index(0, 0, 0, 2)] = p.lt3
    return make_state(2, amps)


class StandardState(str, Enum):
    S223 = "S223"
    S223prime = "S223prime"
    S224 = "S224"


# (a, b, c, coefficient) before normalization
_STANDARD_TERMS = {
    StandardState.S223: (3, [(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 1, 2, 1.0)]),
    StandardState.S223prime: (3, [(0, 0, 0, 1.0), (0, 1, 1, 1 / math.sqrt(2)),
                                  (1, 0, 1, 1 / math.sqrt(2)),
                                  (1, 1, 2, 1 / math.sqrt(2))]),
    StandardState.S224: (4, [(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 2, 1.0),
                             (1, 1, 3, 1.0)]),
}


def standard_state(which: StandardState | str) -> TripartitePureState:
    """
    Make the standard state of a high-local-rank class. The normalization constant is
    computed numerically.
    """
    n, terms = _STANDARD_TERMS[StandardState(which)]
    amps = np.zeros(4 * n, dtype=np.complex128)
    for a, b, c, coefficient in terms:
        amps[_basis_index(a, b, c, n)] = coefficient
    return make_state(n, amps)


def product_AB_C(psiAB, phiC) -> TripartitePureState:
    """Make |psi>_AB (x) |phi>_C from normalized factors."""
    phi = np.asarray(phiC)
    n = int(phi.size)
    psi = unit_vector(psiAB, 4, "AB vector")
    phi = unit_vector(phiC, n, "C vector")
    return make_state(n, np.kron(psi, phi))


def product_A_BC(phiA, psiBC) -> TripartitePureState:
    """Make |phi>_A (x) |psi>_BC from normalized factors; psiBC has length 2n."""
    phi = unit_vector(phiA, 2, "A vector")
    size = int(np.asarray(psiBC).size)
    if size < 2 or size % 2:
        raise DimensionMismatch(f"BC vector length must be 2n, got {size}")
    psi = unit_vector(psiBC, size, "BC vector")
    return make_state(size // 2, np.kron(phi, psi))


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random unit vector: independent standard complex Gaussians, normalized.
    """
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def random_haar_pure(n: int, seed: int) -> TripartitePureState:
    """
    Haar-random (2 x 2 x n) pure state, deterministic for a fixed seed.
    :param n: Dimension of subsystem C.
    :param seed: Seed of the generator.
    :return: TripartitePureState instance.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return make_state(n, random_unit_vector(4 * n, rng))


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random isometry of shape (rows, cols), rows >= cols, from the QR
    decomposition of a complex Ginibre matrix with the phases of R absorbed.
    """
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return haar_isometry(dim, dim, rng)


def random_local_unitaries(n: int, rng: np.random.Generator) -> LocalUnitaryTriple:
    """
    Haar-random local unitary triple for a (2 x 2 x n) system.
    """
    return LocalUnitaryTriple.build(uA=haar_unitary(2, rng), uB=haar_unitary(2, rng),
                                    uC=haar_unitary(n, rng))
