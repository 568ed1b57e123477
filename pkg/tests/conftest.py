import json
import math

import numpy as np
import pytest

from monogamy_toolkit.monogamy_toolkit.families import ghz_state, w_state
from monogamy_toolkit.monogamy_toolkit.params import GHZParams, WParams

THIRD = 1 / math.sqrt(3)
BELL = np.array([1, 0, 0, 1]) / math.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def symmetric_w():
    return w_state(WParams.from_leading(THIRD, THIRD, THIRD))


@pytest.fixture
def balanced_ghz():
    return ghz_state(GHZParams.from_lambda0(1 / math.sqrt(2)))


@pytest.fixture
def write_state(tmp_path):
    """
    Writes a state JSON document and returns its path as a string.
    """

    def _write(data, name="state.json"):
        path = tmp_path / name
        text = data if isinstance(data, str) else json.dumps(data)
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
