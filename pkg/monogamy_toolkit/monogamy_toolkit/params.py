from __future__ import annotations

import math
from typing import Any, Callable, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .matcore import dagger

PARAM_NORM_TOL = 1e-12
UNITARY_TOL = 1e-10

ModelT = TypeVar("ModelT", bound=BaseModel)


class InvalidParams(ValueError):
    """
    Family parameters violate their constraints.
    """
    pass


class NotUnitary(ValueError):
    """
    Local factor fails dagger(u) u = I.
    """
    pass


def build_params(model: Callable[..., ModelT], **kwargs: Any) -> ModelT:
    """
    Builds a parameter model, reporting pydantic validation errors as InvalidParams.
    :param model: Parameter model class.
    :param kwargs: Field values.
    :return: Validated model instance.
    """
    try:
        return model(**kwargs)
    except ValidationError as err:
        problems = "; ".join(f"{'.'.join(str(p) for p in e['loc']) or 'params'}: "
                             f"{e['msg']}" for e in err.errors())
        raise InvalidParams(problems) from err


class GHZParams(BaseModel):
    """
    Parameters of lambda0|000> + lambda1 e^{i theta}|111>.
    Attributes:
        lambda0 (float): Amplitude of |000>, in (0, 1).
        lambda1 (float): Amplitude of |111>, in (0, 1).
        theta (float): Relative phase in [0, pi].
    """

    model_config = ConfigDict(frozen=True)

    lambda0: float = Field(gt=0.0, lt=1.0)
    lambda1: float = Field(gt=0.0, lt=1.0)
    theta: float = Field(default=0.0, ge=0.0, le=math.pi)

    @model_validator(mode="after")
    def _normalized(self) -> GHZParams:
        total = self.lambda0 ** 2 + self.lambda1 ** 2
        if abs(total - 1.0) > PARAM_NORM_TOL:
            raise ValueError(f"lambda0^2 + lambda1^2 = {total!r}, expected 1")
        return self

    @classmethod
    def from_lambda0(cls, lambda0: float, theta: float = 0.0) -> GHZParams:
        """
        Solves lambda1 from the normalization constraint.
        :param lambda0: Amplitude of |000>.
        :param theta: Relative phase.
        :return: GHZParams instance.
        """
        remainder = 1.0 - lambda0 ** 2
        if remainder < 0:
            raise InvalidParams(f"lambda0 = {lambda0} leaves a negative remainder "
                                f"{remainder!r}")
        return build_params(cls, lambda0=lambda0, lambda1=math.sqrt(remainder),
                            theta=theta)


class WParams(BaseModel):
    """
    Parameters of lt0|001> + lt1|010> + lt2|100> + lt3|000>.
    Attributes:
        lt0, lt1, lt2 (float): Positive amplitudes.
        lt3 (float): Non-negative amplitude fixed by normalization; may vanish.
    """

    model_config = ConfigDict(frozen=True)

    lt0: float = Field(gt=0.0, le=1.0)
    lt1: float = Field(gt=0.0, le=1.0)
    lt2: float = Field(gt=0.0, le=1.0)
    lt3: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _normalized(self) -> WParams:
        total = self.lt0 ** 2 + self.lt1 ** 2 + self.lt2 ** 2 + self.lt3 ** 2
        if abs(total - 1.0) > PARAM_NORM_TOL:
            raise ValueError(f"lt0^2 + lt1^2 + lt2^2 + lt3^2 = {total!r}, expected 1")
        return self

    @classmethod
    def from_leading(cls, lt0: float, lt1: float, lt2: float) -> WParams:
        """
        Solves lt3 = sqrt(1 - lt0^2 - lt1^2 - lt2^2); a remainder within PARAM_NORM_TOL
        of zero gives lt3 = 0.
        :return: WParams instance.
        """
        remainder = 1.0 - lt0 ** 2 - lt1 ** 2 - lt2 ** 2
        if remainder < -PARAM_NORM_TOL:
            raise InvalidParams(f"lt0, lt1, lt2 = {lt0}, {lt1}, {lt2} leave a negative "
                                f"remainder {remainder!r}")
        lt3 = math.sqrt(remainder) if remainder > PARAM_NORM_TOL else 0.0
        return build_params(cls, lt0=lt0, lt1=lt1, lt2=lt2, lt3=lt3)


def check_unitary(u: np.ndarray, dim: int, name: str) -> np.ndarray:
    """
    Validates a square unitary matrix of the given dimension.
    :param u: Candidate matrix.
    :param dim: Expected dimension.
    :param name: Factor name used in messages.
    :return: Complex matrix.
    """
    m = np.array(u, dtype=np.complex128)
    if m.shape != (dim, dim):
        raise NotUnitary(f"{name} must be {dim}x{dim}, got {m.shape}")
    deviation = float(np.max(np.abs(dagger(m) @ m - np.eye(dim))))
    if deviation > UNITARY_TOL:
        raise NotUnitary(f"{name} deviates from unitarity by {deviation:.3e}")
    return m


class LocalUnitaryTriple(BaseModel):
    """
    Local unitaries uA (2x2), uB (2x2) and uC (n x n).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    uA: np.ndarray
    uB: np.ndarray
    uC: np.ndarray

    @model_validator(mode="after")
    def _unitary(self) -> LocalUnitaryTriple:
        check_unitary(self.uA, 2, "uA")
        check_unitary(self.uB, 2, "uB")
        check_unitary(self.uC, len(self.uC), "uC")
        return self

    @property
    def n(self) -> int:
        return int(self.uC.shape[0])

    @classmethod
    def build(cls, uA, uB, uC) -> LocalUnitaryTriple:
        """
        Validates the factors, raising NotUnitary, and builds the triple.
        :return: LocalUnitaryTriple instance.
        """
        uC = np.array(uC, dtype=np.complex128)
        if uC.ndim != 2:
            raise NotUnitary(f"uC must be a square matrix, got shape {uC.shape}")
        return cls(uA=check_unitary(uA, 2, "uA"), uB=check_unitary(uB, 2, "uB"),
                   uC=check_unitary(uC, uC.shape[0], "uC"))

    @classmethod
    def identity(cls, n: int) -> LocalUnitaryTriple:
        eye2 = np.eye(2, dtype=np.complex128)
        return cls.build(uA=eye2, uB=eye2, uC=np.eye(n, dtype=np.complex128))
