import math

import numpy as np
import pytest

from monogamy_toolkit.monogamy_toolkit.measures import REPORT_FIELDS
from monogamy_toolkit.monogamy_toolkit.sweep import (Family, GridAxis, SweepError,
                                                     SweepSpec, parse_axis,
                                                     parse_fixed, point_params,
                                                     sweep_rows)


def column(spec, rows, name):
    return np.array([row[spec.header().index(name)] for row in rows])


def test_parse_axis():
    name, axis = parse_axis("lambda0=0.05:0.95:19")
    assert name == "lambda0"
    values = axis.values()
    assert len(values) == 19
    assert values[0] == 0.05 and values[-1] == 0.95


@pytest.mark.parametrize("text", ["lambda0=0.1:0.2", "=0:1:3", "lambda0", "x=a:1:3",
                                  "x=0:1:0", "x=0:1:2.5", "x=nan:1:3"])
def test_bad_axes(text):
    with pytest.raises(SweepError):
        parse_axis(text)


def test_parse_fixed():
    assert parse_fixed("theta=0.5") == ("theta", 0.5)
    with pytest.raises(SweepError):
        parse_fixed("theta")
    with pytest.raises(SweepError):
        parse_fixed("theta=abc")


def test_ghz_sweep_follows_closed_form():
    spec = SweepSpec.build("ghz", {"lambda0": GridAxis(start=0.05, stop=0.95, steps=19)})
    assert spec.header() == ["lambda0", "lambda1", "theta"] + REPORT_FIELDS
    rows = sweep_rows(spec)
    assert len(rows) == 19
    lambda0 = column(spec, rows, "lambda0")
    expected = 2 * lambda0 * np.sqrt(1 - lambda0 ** 2)
    assert np.max(np.abs(column(spec, rows, "chi") - expected)) <= 1e-9
    assert np.all(column(spec, rows, "theta") == 0.0)


def test_ghz_report_is_constant_in_theta():
    spec = SweepSpec.build("ghz", {"theta": GridAxis(start=0, stop=math.pi, steps=7)},
                           fixed={"lambda0": 0.6})
    rows = np.array(sweep_rows(spec))
    measures = rows[:, 3:]
    assert np.max(np.abs(measures - measures[0])) <= 1e-12


def test_w_sweep_with_fixed_pair_keeps_concurrence():
    spec = SweepSpec.build(Family.W, {"lt0": GridAxis(start=0.1, stop=0.6, steps=6)},
                           fixed={"lt1": 0.5, "lt2": 0.5})
    assert spec.header()[:4] == ["lt0", "lt1", "lt2", "lt3"]
    rows = sweep_rows(spec)
    assert np.allclose(column(spec, rows, "concurrence"), 0.5, atol=1e-9)
    lt = np.array([row[:4] for row in rows])
    assert np.allclose(np.sum(lt ** 2, axis=1), 1.0, atol=1e-12)


def test_grid_is_cartesian_product():
    spec = SweepSpec.build("w", {"lt0": GridAxis(start=0.2, stop=0.3, steps=2),
                                 "lt1": GridAxis(start=0.2, stop=0.4, steps=3)},
                           fixed={"lt2": 0.3})
    points = list(spec.points())
    assert len(points) == 6
    assert [p["lt0"] for p in points[:3]] == [0.2] * 3
    assert [p["lt1"] for p in points[:3]] == pytest.approx([0.2, 0.3, 0.4])


def test_single_point_sweep():
    spec = SweepSpec.build("ghz", {"lambda0": GridAxis(start=0.6, stop=0.9, steps=1)})
    rows = sweep_rows(spec)
    assert len(rows) == 1
    assert rows[0][0] == 0.6


def test_infeasible_grid_is_rejected():
    spec = SweepSpec.build("w", {"lt0": GridAxis(start=0.1, stop=0.9, steps=5)},
                           fixed={"lt1": 0.6, "lt2": 0.6})
    with pytest.raises(SweepError, match="Infeasible"):
        sweep_rows(spec)
    with pytest.raises(SweepError):
        point_params(Family.GHZ, {"lambda0": 1.0, "theta": 0.0})


@pytest.mark.parametrize("family, grid, fixed", [
    ("ghz", {"lt0": GridAxis(start=0.1, stop=0.2, steps=2)}, {}),
    ("ghz", {"lambda0": GridAxis(start=0.1, stop=0.2, steps=2)}, {"lambda0": 0.3}),
    ("w", {"lt0": GridAxis(start=0.1, stop=0.2, steps=2)}, {"lt1": 0.3}),
    ("ghz", {}, {"lambda0": 0.3}),
    ("bogus", {"lambda0": GridAxis(start=0.1, stop=0.2, steps=2)}, {}),
])
def test_malformed_specs(family, grid, fixed):
    with pytest.raises(SweepError):
        SweepSpec.build(family, grid, fixed)
