"""
Run configuration and per-property outcome records of the verification suites.
"""
from __future__ import annotations

import json
from typing import Any, Callable, Dict, Optional, Tuple

from pydantic import (BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt,
                      field_validator, model_validator)


class TrialConfig(BaseModel):
    """
    Attributes:
        seed (int): Non-negative base seed; trial i uses seed + i.
        trials (int): Number of trials per property.
        n_values (Tuple[int, ...]): Dimensions of C, cycled over the trials.
        tol (float): Allowed violation margin.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = Field(default=42, ge=0)
    trials: PositiveInt = 1000
    n_values: Tuple[int, ...] = (2, 3)
    tol: PositiveFloat = 1e-8

    @field_validator("n_values")
    @classmethod
    def _dimensions(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value or any(n < 1 for n in value):
            raise ValueError(f"n_values must be a non-empty set of n >= 1, got {value}")
        return tuple(sorted(set(value)))

    def trial_seed(self, i: int) -> int:
        return self.seed + i

    def trial_n(self, i: int) -> int:
        return self.n_values[i % len(self.n_values)]


class PropertyResult(BaseModel):
    """
    Outcome of one property check.
    Attributes:
        name (str): Property name.
        trials_run (int): Number of recorded checks.
        violations (int): Checks whose margin fell below the allowance.
        worst_margin (float): Smallest margin seen; negative values measure a violation.
        witness (Optional[dict]): Serialized input of the worst violation.
        asserted (bool): False for exploratory checks that never fail a run.
        details (dict): Extra reported numbers, never asserted.
    """

    name: str
    trials_run: int = 0
    violations: int = 0
    worst_margin: float = 0.0
    witness: Optional[Dict[str, Any]] = None
    asserted: bool = True
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _witness_for_violations(self) -> PropertyResult:
        if self.violations > 0 and self.witness is None:
            raise ValueError(f"{self.name}: {self.violations} violations without a "
                             f"witness")
        return self

    @property
    def passed(self) -> bool:
        return not self.asserted or self.violations == 0

    def to_json_line(self) -> str:
        return json.dumps(self.model_dump())


class MarginTracker:
    """
    Collects margins of one property. A check is a violation when its margin is
    below -allowance; the witness of the most negative violation is kept.
    """

    def __init__(self, name: str):
        self.name = name
        self.trials_run = 0
        self.violations = 0
        self.worst_margin: Optional[float] = None
        self.worst_violation: Optional[float] = None
        self.witness: Optional[Dict[str, Any]] = None

    def record(self, margin: float, allowance: float,
               witness: Callable[[], Dict[str, Any]]) -> bool:
        """
        Records one check.
        :param margin: Slack of the checked inequality.
        :param allowance: Non-negative tolerance.
        :param witness: Builds the serialized input, called only for a new worst
        violation.
        :return: True when the check passed.
        """
        self.trials_run += 1
        if self.worst_margin is None or margin < self.worst_margin:
            self.worst_margin = margin
        if margin >= -allowance:
            return True
        self.violations += 1
        if self.worst_violation is None or margin < self.worst_violation:
            self.worst_violation = margin
            self.witness = witness()
        return False

    def result(self, asserted: bool = True, **details: Any) -> PropertyResult:
        return PropertyResult(
            name=self.name,
            trials_run=self.trials_run,
            violations=self.violations,
            worst_margin=0.0 if self.worst_margin is None else float(self.worst_margin),
            witness=self.witness,
            asserted=asserted,
            details=details,
        )
