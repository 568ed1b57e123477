from __future__ import annotations

import numpy as np

from .field import Field

NORM_TOL = 1e-10


class ZeroVector(ValueError):
    """
    Amplitude vector has zero norm and cannot be normalized.
    """
    pass


class DimensionMismatch(ValueError):
    """
    Vector or operator dimensions do not fit the (2, 2, n) layout.
    """
    pass


class NotNormalized(ValueError):
    """
    Vector that must already be normalized is not.
    """
    pass


def finite_vector(values, name: str = "vector") -> np.ndarray:
    """
    Convert a sequence into a one-dimensional finite complex vector.
    :param values: Sequence of complex numbers.
    :param name: Name used in error messages.
    :return: Complex vector.
    """
    vec = np.array(values, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"All entries of the {name} must be finite (no NaN/Inf)")
    return vec


def unit_vector(values, dim: int, name: str = "vector") -> np.ndarray:
    """
    Check that a vector has the expected dimension and unit norm.
    :param values: Sequence of complex numbers.
    :param dim: Expected length.
    :param name: Name used in error messages.
    :return: Complex vector.
    """
    vec = finite_vector(values, name)
    if vec.size != dim:
        raise DimensionMismatch(f"The {name} must have length {dim}, got {vec.size}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"The {name} must be normalized within {NORM_TOL:.0e}, "
                            f"its norm is {norm:.12f}")
    return vec


class Amplitudes(Field):
    """
    This class is a derived class from Field and stores the normalized amplitudes of a
    (2 x 2 x n) pure state. Index of |a b c> is a*2n + b*n + c.
    """

    def __init__(self, n: int, amplitudes):
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise DimensionMismatch(f"Dimension n of subsystem C must be a positive "
                                    f"integer, got {n!r}")
        self.n = int(n)
        super().__init__(value=amplitudes)

    def validate(self, amplitudes) -> np.ndarray:
        """
        Check the length and finiteness of the amplitudes and normalize them.
        :param amplitudes: Raw amplitudes.
        :return: Normalized read-only vector.
        """
        vec = finite_vector(amplitudes, "amplitudes")
        if vec.size != 4 * self.n:
            raise DimensionMismatch(f"amplitudes length {vec.size} != 4n = "
                                    f"{4 * self.n}")
        scale = float(np.max(np.abs(vec)))
        if scale == 0.0:
            raise ZeroVector("Amplitude vector has zero norm")
        # rescale first so the norm neither underflows nor overflows
        vec = vec / scale
        vec = vec / np.linalg.norm(vec)
        vec.setflags(write=False)
        return vec
