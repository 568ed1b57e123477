"""
Parameter sweeps over the GHZ and W families. Every grid point becomes one row of
family parameters followed by the seven measures.
"""
from __future__ import annotations

import itertools
import logging
import math
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
from pydantic import (BaseModel, ConfigDict, Field, PositiveInt, ValidationError,
                      model_validator)

from .families import ghz_state, w_state
from .measures import REPORT_FIELDS, full_report
from .params import GHZParams, InvalidParams, WParams

logger = logging.getLogger(__name__)


class SweepError(ValueError):
    """
    Sweep specification is malformed or reaches an infeasible grid point.
    """
    pass


class Family(str, Enum):
    GHZ = "ghz"
    W = "w"


# free parameters in column order; the dependent amplitude is solved from the rest
FREE_PARAMETERS = {Family.GHZ: ("lambda0", "theta"), Family.W: ("lt0", "lt1", "lt2")}
DEFAULT_VALUES = {Family.GHZ: {"theta": 0.0}, Family.W: {}}
PARAMETER_COLUMNS = {Family.GHZ: ["lambda0", "lambda1", "theta"],
                     Family.W: ["lt0", "lt1", "lt2", "lt3"]}


class GridAxis(BaseModel):
    """
    Evenly spaced values from start to stop, both included; steps counts the points.
    """

    model_config = ConfigDict(frozen=True)

    start: float = Field(allow_inf_nan=False)
    stop: float = Field(allow_inf_nan=False)
    steps: PositiveInt

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


class SweepSpec(BaseModel):
    """
    Attributes:
        family (Family): ghz or w.
        grid (Dict[str, GridAxis]): Swept parameters.
        fixed (Dict[str, float]): Values of the remaining free parameters.
    """

    model_config = ConfigDict(frozen=True)

    family: Family
    grid: Dict[str, GridAxis]
    fixed: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _parameters(self) -> SweepSpec:
        allowed = set(FREE_PARAMETERS[self.family])
        unknown = sorted((set(self.grid) | set(self.fixed)) - allowed)
        if unknown:
            raise ValueError(f"{self.family.value} has no parameter(s) {unknown}; "
                             f"expected {sorted(allowed)}")
        both = sorted(set(self.grid) & set(self.fixed))
        if both:
            raise ValueError(f"parameter(s) {both} are both swept and fixed")
        if not self.grid:
            raise ValueError("at least one parameter must be swept")
        missing = sorted(allowed - set(self.grid) - set(self.fixed)
                         - set(DEFAULT_VALUES[self.family]))
        if missing:
            raise ValueError(f"parameter(s) {missing} need a grid or a fixed value")
        if any(not math.isfinite(v) for v in self.fixed.values()):
            raise ValueError("fixed values must be finite")
        return self

    @classmethod
    def build(cls, family: Union[Family, str], grid: Dict[str, GridAxis],
              fixed: Optional[Dict[str, float]] = None) -> SweepSpec:
        """
        Builds a spec, reporting failed checks as SweepError.
        """
        try:
            return cls(family=Family(family), grid=grid, fixed=fixed or {})
        except (ValidationError, ValueError) as err:
            raise SweepError(str(err)) from err

    def header(self) -> List[str]:
        return PARAMETER_COLUMNS[self.family] + REPORT_FIELDS

    def points(self) -> Iterator[Dict[str, float]]:
        """
        Cartesian product of the axes, the first free parameter varying slowest.
        """
        swept = [name for name in FREE_PARAMETERS[self.family] if name in self.grid]
        base = {**DEFAULT_VALUES[self.family], **self.fixed}
        for values in itertools.product(*(self.grid[name].values() for name in swept)):
            yield {**base, **{name: float(v) for name, v in zip(swept, values)}}


def parse_axis(text: str) -> Tuple[str, GridAxis]:
    """
    Parses NAME=START:STOP:STEPS.
    :param text: Axis description.
    :return: Parameter name and its axis.
    """
    name, sep, rest = text.partition("=")
    parts = rest.split(":")
    if not sep or not name.strip() or len(parts) != 3:
        raise SweepError(f"Expected NAME=START:STOP:STEPS, got '{text}'")
    try:
        return name.strip(), GridAxis(start=float(parts[0]), stop=float(parts[1]),
                                      steps=int(parts[2]))
    except (ValidationError, ValueError) as err:
        raise SweepError(f"Bad axis '{text}': {err}") from err


def parse_fixed(text: str) -> Tuple[str, float]:
    """
    Parses NAME=VALUE.
    """
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise SweepError(f"Expected NAME=VALUE, got '{text}'")
    try:
        return name.strip(), float(value)
    except ValueError as err:
        raise SweepError(f"Bad value in '{text}': {err}") from err


def point_params(family: Family, point: Dict[str, float]) -> Union[GHZParams, WParams]:
    """
    Solves the dependent amplitude of one grid point.
    :param family: Family of the sweep.
    :param point: Values of the free parameters.
    :return: Validated family parameters.
    """
    try:
        if family is Family.GHZ:
            return GHZParams.from_lambda0(point["lambda0"], point["theta"])
        return WParams.from_leading(point["lt0"], point["lt1"], point["lt2"])
    except InvalidParams as err:
        raise SweepError(f"Infeasible grid point {point}: {err}") from err


def _parameter_row(params: Union[GHZParams, WParams]) -> List[float]:
    if isinstance(params, GHZParams):
        return [params.lambda0, params.lambda1, params.theta]
    return [params.lt0, params.lt1, params.lt2, params.lt3]


def sweep_rows(spec: SweepSpec) -> List[List[float]]:
    """
    Evaluates the seven measures at every grid point. The whole grid is checked for
    feasibility before any row is produced.
    :param spec: SweepSpec instance.
    :return: Rows matching spec.header().
    """
    params = [point_params(spec.family, point) for point in spec.points()]
    make = ghz_state if spec.family is Family.GHZ else w_state
    rows = [_parameter_row(p) + full_report(make(p)).as_row() for p in params]
    logger.info("%s sweep: %d grid points", spec.family.value, len(rows))
    return rows
