from __future__ import annotations

import json
from typing import Any

import numpy as np

from .amplitudes import Amplitudes, DimensionMismatch


class StateFormatError(ValueError):
    """
    State JSON document does not follow {"n": int, "amplitudes": [[re, im], ...]}.
    """
    pass


class TripartitePureState:
    """
    This class describes a normalized (2 x 2 x n) pure state |Psi>_ABC. The amplitude
    of |a b c> sits at index a*2n + b*n + c. Instances are immutable.
    """

    def __init__(self, n: int, amplitudes):
        self.amplitudes = Amplitudes(n=n, amplitudes=amplitudes)

    @property
    def n(self) -> int:
        return self.amplitudes.n

    @property
    def vector(self) -> np.ndarray:
        """
        Getter for the normalized amplitude vector of length 4n.
        :return: Read-only complex vector.
        """
        return self.amplitudes.value

    @property
    def tensor(self) -> np.ndarray:
        """
        Amplitudes reshaped to (2, 2, n) with axes (a, b, c).
        """
        return self.vector.reshape(2, 2, self.n)

    def __str__(self) -> str:
        terms = []
        for idx in np.flatnonzero(np.abs(self.vector) > 1e-12):
            a, rest = divmod(int(idx), 2 * self.n)
            b, c = divmod(rest, self.n)
            amp = self.vector[idx]
            terms.append(f"({amp.real:.6g}{amp.imag:+.6g}j)|{a}{b}{c}>")
        return f"n={self.n}: " + " + ".join(terms)

    def to_dict(self) -> dict:
        """
        Method converts the state into the state JSON structure.
        :return: {"n": int, "amplitudes": [[re, im], ...]}.
        """
        return {
            "n": self.n,
            "amplitudes": [[float(amp.real), float(amp.imag)] for amp in self.vector],
        }

    def __repr__(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Any) -> TripartitePureState:
        """
        Method builds a state from the state JSON structure, rejecting wrong lengths and
        non-finite numbers.
        :param data: Parsed JSON object.
        :return: TripartitePureState instance.
        """
        if not isinstance(data, dict) or "n" not in data or "amplitudes" not in data:
            raise StateFormatError("State JSON must be an object with fields 'n' and "
                                   "'amplitudes'")
        n = data["n"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise StateFormatError(f"Field 'n' must be a positive integer, got {n!r}")
        raw = data["amplitudes"]
        if not isinstance(raw, list):
            raise StateFormatError("Field 'amplitudes' must be an array of [re, im] "
                                   "pairs")
        if len(raw) != 4 * n:
            raise DimensionMismatch(f"amplitudes length {len(raw)} != 4n = {4 * n}")
        values = []
        for idx, pair in enumerate(raw):
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                               for x in pair)):
                raise StateFormatError(f"Amplitude {idx} must be a [re, im] pair of "
                                       f"numbers, got {pair!r}")
            try:
                values.append(complex(pair[0], pair[1]))
            except OverflowError as err:
                raise StateFormatError(f"Amplitude {idx} does not fit a float: "
                                       f"{err}") from err
        return cls(n=n, amplitudes=values)


def make_state(n: int, amplitudes) -> TripartitePureState:
    """
    Normalizes raw amplitudes into a state.
    :param n: Dimension of subsystem C.
    :param amplitudes: 4n complex numbers.
    :return: TripartitePureState instance.
    """
    return TripartitePureState(n=n, amplitudes=amplitudes)
