"""
Kraus channels acting on subsystem C (or on one qubit for exploration) and their
branch decomposition of a pure state.
"""
from __future__ import annotations

import math
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from ..families import haar_isometry
from ..local_ops import apply_local_operator
from ..matcore import as_matrix, dagger, hermitian_eigvals
from ..state import TripartitePureState

COMPLETENESS_TOL = 1e-9

Seed = Union[int, Sequence[int]]


class InvalidChannel(ValueError):
    """
    Operators have mismatched shapes or break the completeness relation.
    """
    pass


class Completeness(str, Enum):
    COMPLETE = "Complete"
    SUBNORMALIZED = "SubNormalized"


class KrausChannel(BaseModel):
    """
    Kraus operators M_k, each n' x n, with their completeness kind.
    Attributes:
        operators (List[np.ndarray]): Operators sharing the input dimension n.
        completeness (Completeness): Complete when sum M_k^dagger M_k = I,
        SubNormalized when it is only bounded by I.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    operators: List[np.ndarray]
    completeness: Completeness = Completeness.COMPLETE

    @model_validator(mode="after")
    def _completeness_relation(self) -> KrausChannel:
        if not self.operators:
            raise ValueError("a channel needs at least one operator")
        cols = {op.shape[1] for op in self.operators}
        if len(cols) != 1:
            raise ValueError(f"operators disagree on the input dimension: {sorted(cols)}")
        gap = np.eye(self.n) - self.gram()
        if self.completeness is Completeness.COMPLETE:
            deviation = float(np.max(np.abs(gap)))
            if deviation > COMPLETENESS_TOL:
                raise ValueError(f"sum of M_k^dagger M_k deviates from I by "
                                 f"{deviation:.3e}")
        else:
            smallest = float(hermitian_eigvals(gap)[-1])
            if smallest < -COMPLETENESS_TOL:
                raise ValueError(f"I - sum of M_k^dagger M_k has eigenvalue "
                                 f"{smallest:.3e}")
        return self

    @classmethod
    def build(cls, operators, completeness: Completeness | str = Completeness.COMPLETE
              ) -> KrausChannel:
        """
        Builds a channel, reporting failed checks as InvalidChannel.
        :param operators: Sequence of matrices with equal column counts.
        :param completeness: "Complete" or "SubNormalized".
        :return: KrausChannel instance.
        """
        try:
            ops = [as_matrix(op) for op in operators]
            return cls(operators=ops, completeness=Completeness(completeness))
        except (ValidationError, ValueError) as err:
            raise InvalidChannel(str(err)) from err

    @property
    def n(self) -> int:
        return int(self.operators[0].shape[1])

    def gram(self) -> np.ndarray:
        return sum(dagger(op) @ op for op in self.operators)

    def scaled(self, s: float) -> KrausChannel:
        """
        Multiplies every operator by sqrt(s), 0 < s <= 1.
        :return: SubNormalized channel with sum M_k^dagger M_k = s I for a complete
        input.
        """
        if not 0.0 < s <= 1.0:
            raise InvalidChannel(f"scale factor must lie in (0, 1], got {s}")
        factor = math.sqrt(s)
        return KrausChannel.build([factor * op for op in self.operators],
                                  Completeness.SUBNORMALIZED)

    def to_json(self) -> list:
        """
        Operators as nested [re, im] pairs, row by row.
        """
        return [[[[float(x.real), float(x.imag)] for x in row] for row in op]
                for op in self.operators]


def sample_kraus_channel(n: int, k: int, seed: Seed) -> KrausChannel:
    """
    Samples a complete channel by slicing a Haar-random isometry C^n -> C^{k n} into
    k blocks of n x n.
    :param n: Input and output dimension.
    :param k: Number of Kraus operators.
    :param seed: Seed of the generator.
    :return: Complete KrausChannel.
    """
    if n < 1 or k < 1:
        raise InvalidChannel(f"need n >= 1 and k >= 1, got n = {n}, k = {k}")
    v = haar_isometry(k * n, n, np.random.default_rng(seed))
    return KrausChannel.build([v[i * n:(i + 1) * n, :] for i in range(k)])


def identity_channel(n: int) -> KrausChannel:
    return KrausChannel.build([np.eye(n, dtype=np.complex128)])


def projective_channel(n: int) -> KrausChannel:
    """
    Computational-basis measurement {|c><c|}.
    """
    ops = []
    for c in range(n):
        op = np.zeros((n, n), dtype=np.complex128)
        op[c, c] = 1.0
        ops.append(op)
    return KrausChannel.build(ops)


def channel_branches(s: TripartitePureState, channel: KrausChannel, party: str = "C"
                     ) -> List[Tuple[float, Optional[TripartitePureState]]]:
    """
    Applies every operator of the channel to one party.
    :param s: Tripartite pure state.
    :param channel: Channel whose input dimension matches the party.
    :param party: "A", "B" or "C".
    :return: (p_k, branch_k) pairs in operator order; vanishing branches are None.
    """
    return [apply_local_operator(s, op, party) for op in channel.operators]
