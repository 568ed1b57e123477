"""
Concurrence, negativity and concurrence of assistance of a two-qubit density, and
the monogamy residuals tau, chi, varpi, eta of a (2 x 2 x n) pure state.
"""
from __future__ import annotations

import math
from typing import List, Optional, Union

import numpy as np
import scipy.linalg
from pydantic import (BaseModel, ConfigDict, ValidationError, field_validator,
                      model_validator)

from .amplitudes import NORM_TOL
from .local_ops import reduced_AB
from .matcore import (SIGMA_YY, partial_transpose_A, psd_factor, psd_sqrt,
                      spin_flip, trace_norm_hermitian)
from .state import TripartitePureState
from .two_qubit_density import TwoQubitDensity

RADICAND_BAND = 1e-12
ETA_CLIP = 1e-9
REPORT_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-9

StateOrDensity = Union[TripartitePureState, TwoQubitDensity]


class InternalConsistencyError(ValueError):
    """
    A quantity that is non-negative analytically came out clearly negative.
    """
    pass


class InconsistentDecomposition(ValueError):
    """
    Weights or members do not form a decomposition of the stated density.
    """
    pass


def _density(s_or_rho: StateOrDensity) -> TwoQubitDensity:
    if isinstance(s_or_rho, TripartitePureState):
        return reduced_AB(s_or_rho)
    if isinstance(s_or_rho, TwoQubitDensity):
        return s_or_rho
    raise TypeError(f"Expected TripartitePureState or TwoQubitDensity, got "
                    f"{type(s_or_rho).__name__}")


def lambdas(rho: TwoQubitDensity) -> np.ndarray:
    """
    Square roots of the eigenvalues of sqrt(rho) rho~ sqrt(rho), in decreasing order.
    With rho = W W^dagger the form equals V S^dagger S V^dagger for S = W^T (sy x sy) W,
    so the values are the singular values of S.
    :param rho: Two-qubit density.
    :return: Four non-negative reals.
    """
    w = psd_factor(rho.matrix)
    values = np.zeros(4)
    if w.shape[1]:
        singular = scipy.linalg.svdvals(w.T @ SIGMA_YY @ w)
        values[:singular.size] = singular
    return np.sort(values)[::-1]


def _unit_interval(value: float, name: str) -> float:
    if value < -REPORT_TOL or value > 1.0 + REPORT_TOL:
        raise InternalConsistencyError(f"{name} = {value!r} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def concurrence(rho: TwoQubitDensity) -> float:
    """
    C = max{0, l1 - l2 - l3 - l4}.
    """
    lam = lambdas(rho)
    return _unit_interval(max(0.0, float(lam[0] - lam[1:].sum())), "concurrence")


def coa(rho: TwoQubitDensity) -> float:
    """
    Concurrence of assistance, C_a = l1 + l2 + l3 + l4.
    """
    return _unit_interval(float(lambdas(rho).sum()), "coa")


def coa_trace_form(rho: TwoQubitDensity) -> float:
    """
    C_a evaluated literally as tr sqrt(sqrt(rho) rho~ sqrt(rho)).
    """
    root = psd_sqrt(rho.matrix)
    inner = root @ spin_flip(rho) @ root
    return float(np.real(np.trace(psd_sqrt(inner))))


def negativity(rho: TwoQubitDensity) -> float:
    """
    N = ||rho^{T_A}||_1 - 1.
    """
    value = trace_norm_hermitian(partial_transpose_A(rho)) - 1.0
    return _unit_interval(max(0.0, value), "negativity")


def _residual(radicand: float, name: str) -> float:
    if radicand < -RADICAND_BAND:
        raise InternalConsistencyError(f"{name} radicand {radicand!r} is negative")
    if radicand <= RADICAND_BAND:
        return 0.0
    return math.sqrt(radicand)


def _difference(value: float, clip: float, name: str) -> float:
    if value < -clip:
        raise InternalConsistencyError(f"{name} = {value!r} is negative")
    return max(value, 0.0)


def tau(s: TripartitePureState) -> float:
    """
    tau = sqrt(C_a^2 - C^2) of rho_AB.
    """
    rho = reduced_AB(s)
    return _residual(coa(rho) ** 2 - concurrence(rho) ** 2, "tau")


def chi(s: TripartitePureState) -> float:
    """
    chi = sqrt(C_a^2 - N^2) of rho_AB.
    """
    rho = reduced_AB(s)
    return _residual(coa(rho) ** 2 - negativity(rho) ** 2, "chi")


def varpi(s_or_rho: StateOrDensity) -> float:
    """
    varpi = C^2 - N^2 of rho_AB; accepts the pure state or rho_AB itself.
    """
    rho = _density(s_or_rho)
    return _difference(concurrence(rho) ** 2 - negativity(rho) ** 2, RADICAND_BAND,
                       "varpi")


def eta(s_or_rho: StateOrDensity) -> float:
    """
    eta = C - N of rho_AB; accepts the pure state or rho_AB itself.
    """
    rho = _density(s_or_rho)
    return _difference(concurrence(rho) - negativity(rho), ETA_CLIP, "eta")


class MeasureReport(BaseModel):
    """
    The seven scalars of one state.
    Attributes:
        concurrence, negativity, coa (float): Two-qubit measures of rho_AB.
        tau, chi (float): Monogamy residuals.
        varpi, eta (float): C^2 - N^2 and C - N.
    """

    model_config = ConfigDict(frozen=True)

    concurrence: float
    negativity: float
    coa: float
    tau: float
    chi: float
    varpi: float
    eta: float

    @field_validator("*")
    @classmethod
    def _in_unit_interval(cls, value: float) -> float:
        if not math.isfinite(value) or not -REPORT_TOL <= value <= 1.0 + REPORT_TOL:
            raise ValueError(f"value {value!r} outside [0, 1]")
        return min(max(value, 0.0), 1.0)

    def violated_invariants(self, tol: float = REPORT_TOL) -> List[str]:
        """
        Method lists which report invariants fail at the given tolerance.
        :param tol: Absolute tolerance.
        :return: Names of the violated invariants, empty when consistent.
        """
        checks = {
            "coa >= concurrence": self.coa >= self.concurrence - tol,
            "concurrence >= negativity": self.concurrence >= self.negativity - tol,
            "tau^2 + C^2 = C_a^2":
                abs(self.tau ** 2 + self.concurrence ** 2 - self.coa ** 2) <= tol,
            "chi^2 + N^2 = C_a^2":
                abs(self.chi ** 2 + self.negativity ** 2 - self.coa ** 2) <= tol,
            "varpi = C^2 - N^2":
                abs(self.varpi - (self.concurrence ** 2 - self.negativity ** 2)) <= tol,
            "eta = C - N": abs(self.eta - (self.concurrence - self.negativity)) <= tol,
            "chi >= tau": self.chi >= self.tau - tol,
            "chi^2 - tau^2 = varpi":
                abs(self.chi ** 2 - self.tau ** 2 - self.varpi) <= tol,
        }
        return [name for name, ok in checks.items() if not ok]

    def as_row(self) -> List[float]:
        return [getattr(self, name) for name in REPORT_FIELDS]


REPORT_FIELDS = list(MeasureReport.model_fields)


def report_from_density(rho: TwoQubitDensity) -> MeasureReport:
    """
    All seven scalars from one reduced density.
    :param rho: Reduced density rho_AB of the pure state.
    :return: MeasureReport instance.
    """
    lam = lambdas(rho)
    c = _unit_interval(max(0.0, float(lam[0] - lam[1:].sum())), "concurrence")
    ca = _unit_interval(float(lam.sum()), "coa")
    n = negativity(rho)
    report = MeasureReport(
        concurrence=c,
        negativity=n,
        coa=ca,
        tau=_residual(ca ** 2 - c ** 2, "tau"),
        chi=_residual(ca ** 2 - n ** 2, "chi"),
        varpi=_difference(c ** 2 - n ** 2, RADICAND_BAND, "varpi"),
        eta=_difference(c - n, ETA_CLIP, "eta"),
    )
    broken = report.violated_invariants()
    if broken:
        raise InternalConsistencyError(f"Report invariants violated: {broken}")
    return report


def full_report(s: TripartitePureState) -> MeasureReport:
    """
    All seven scalars of a pure state from a single reduction.
    """
    return report_from_density(reduced_AB(s))


def pure_concurrence(phi) -> float:
    """
    |<phi| sy x sy |phi*>| of a normalized two-qubit vector.
    """
    vec = np.asarray(phi, dtype=np.complex128).reshape(4)
    return float(abs(np.conj(vec) @ SIGMA_YY @ np.conj(vec)))


class Decomposition(BaseModel):
    """
    Ensemble {p_i, |phi_i>} of a two-qubit density.
    Attributes:
        weights (np.ndarray): Non-negative weights summing to 1.
        members (np.ndarray): Normalized vectors, one per row, shape (len, 4).
        target (Optional[np.ndarray]): Density the ensemble must reconstruct.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    weights: np.ndarray
    members: np.ndarray
    target: Optional[np.ndarray] = None

    @model_validator(mode="after")
    def _consistent(self) -> Decomposition:
        if self.weights.ndim != 1 or self.members.shape != (self.weights.size, 4):
            raise ValueError(f"{self.weights.size} weights do not match members of "
                             f"shape {self.members.shape}")
        if np.any(self.weights < 0):
            raise ValueError("weights must be non-negative")
        if abs(self.weights.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"weights sum to {self.weights.sum()!r}, expected 1")
        norms = np.linalg.norm(self.members, axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValueError("every member must be normalized")
        if self.target is not None:
            error = float(np.max(np.abs(self.density() - self.target)))
            if error > RECONSTRUCTION_TOL:
                raise ValueError(f"ensemble misses the target density by {error:.3e}")
        return self

    @classmethod
    def build(cls, weights, members, target=None) -> Decomposition:
        """
        Builds a decomposition, reporting failed checks as InconsistentDecomposition.
        :param weights: Sequence of p_i.
        :param members: Sequence of two-qubit vectors.
        :param target: Optional density (matrix or TwoQubitDensity) to reconstruct.
        :return: Decomposition instance.
        """
        if isinstance(target, TwoQubitDensity):
            target = target.matrix
        try:
            return cls(weights=np.asarray(weights, dtype=float),
                       members=np.asarray(members, dtype=np.complex128),
                       target=None if target is None else np.asarray(target,
                                                                     np.complex128))
        except ValidationError as err:
            raise InconsistentDecomposition(str(err)) from err

    def density(self) -> np.ndarray:
        """
        Sum of p_i |phi_i><phi_i|.
        """
        return np.einsum("i,ij,ik->jk", self.weights, self.members,
                         np.conj(self.members))


def average_concurrence(d: Decomposition) -> float:
    """
    Sum of p_i C(|phi_i>) over the ensemble.
    :param d: Decomposition; its target, when present, is re-checked.
    :return: Average pure-state concurrence.
    """
    if d.target is not None:
        error = float(np.max(np.abs(d.density() - d.target)))
        if error > RECONSTRUCTION_TOL:
            raise InconsistentDecomposition(f"ensemble misses the target density by "
                                            f"{error:.3e}")
    return float(sum(p * pure_concurrence(phi) for p, phi in zip(d.weights, d.members)))
