from __future__ import annotations

import numpy as np

from .field import Field
from .matcore import (HERMITIAN_TOL, PSD_CLIP_TOL, ComplexMatrix, NotHermitian,
                      as_matrix, dagger, hermitian_deviation, hermitian_eigvals)

TRACE_TOL = 1e-10


class InvalidDensity(ValueError):
    """
    Matrix is not a valid two-qubit density (Hermitian, PSD, unit trace).
    """
    pass


class TwoQubitDensity(Field):
    """
    This class is a derived class from Field and stores a 4x4 Hermitian PSD unit-trace
    matrix, the reduced density of qubits A and B.
    """

    def __init__(self, matrix):
        super().__init__(value=matrix)

    @property
    def matrix(self) -> ComplexMatrix:
        """
        Getter for the stored matrix.
        :return: 4x4 read-only complex matrix.
        """
        return self.value

    def validate(self, matrix) -> ComplexMatrix:
        """
        Check the density invariants and store the symmetrized matrix.
        :param matrix: Raw 4x4 matrix.
        :return: Read-only symmetrized matrix.
        """
        m = as_matrix(matrix)
        if m.shape != (4, 4):
            raise InvalidDensity(f"Two-qubit density must be 4x4, got {m.shape}")
        if hermitian_deviation(m) > HERMITIAN_TOL:
            raise InvalidDensity(f"Density is not Hermitian within {HERMITIAN_TOL:.0e}")
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidDensity(f"Density trace is {trace.real:.12f}, expected 1")
        m = (m + dagger(m)) / 2
        try:
            smallest = hermitian_eigvals(m)[-1]
        except NotHermitian as err:
            raise InvalidDensity(str(err)) from err
        if smallest < -PSD_CLIP_TOL:
            raise InvalidDensity(f"Density has eigenvalue {smallest:.3e} below "
                                 f"-{PSD_CLIP_TOL:.0e}")
        m.setflags(write=False)
        return m

    @classmethod
    def from_pure(cls, phi) -> TwoQubitDensity:
        """
        Build |phi><phi| from a normalized two-qubit vector.
        :param phi: Four complex amplitudes.
        :return: TwoQubitDensity instance.
        """
        vec = np.asarray(phi, dtype=np.complex128).reshape(4)
        return cls(np.outer(vec, np.conj(vec)))

    def __repr__(self) -> str:
        return f"TwoQubitDensity({np.array2string(self.matrix, precision=6)})"
