import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from monogamy_toolkit.monogamy_toolkit.classify import NONZERO_THRESHOLD
from monogamy_toolkit.monogamy_toolkit.families import random_haar_pure, w_state
from monogamy_toolkit.monogamy_toolkit.local_ops import reduced_AB
from monogamy_toolkit.monogamy_toolkit.measures import (average_concurrence, chi,
                                                        coa, varpi)
from monogamy_toolkit.monogamy_toolkit.params import WParams
from monogamy_toolkit.monogamy_toolkit.two_qubit_density import TwoQubitDensity
from monogamy_toolkit.monogamy_toolkit.verify.decompositions import (
    LengthTooSmall, eigen_ensemble, ghjw_decomposition_sample)
from monogamy_toolkit.monogamy_toolkit.verify.kraus import (Completeness,
                                                            InvalidChannel,
                                                            KrausChannel,
                                                            channel_branches,
                                                            identity_channel,
                                                            projective_channel,
                                                            sample_kraus_channel)
from monogamy_toolkit.monogamy_toolkit.verify.results import (MarginTracker,
                                                              PropertyResult,
                                                              TrialConfig)
from monogamy_toolkit.monogamy_toolkit.verify.suites import (
    CLASS_SIGNATURE_SAMPLES, SUITES, W_FLOOR, UnknownSuite, all_passed,
    check_branch_averages, check_chi_monotonicity, check_class_signatures, check_coa_bound,
    check_lu_invariance, check_ordering, check_subnormalized_monotonicity,
    decomposition_lengths, explore_ab_monotonicity, run_suite, sample_w_params)

HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def small_cfg(**kwargs):
    return TrialConfig(**{"seed": 11, "trials": 40, "n_values": (2, 3), "tol": 1e-8,
                          **kwargs})


@pytest.mark.parametrize("n, k", [(1, 1), (2, 1), (2, 3), (4, 2)])
def test_sampled_channels_are_complete(n, k):
    channel = sample_kraus_channel(n, k, seed=3)
    assert len(channel.operators) == k
    assert channel.completeness is Completeness.COMPLETE
    assert_allclose(channel.gram(), np.eye(n), atol=1e-10)


def test_single_operator_channel_is_unitary():
    (u,) = sample_kraus_channel(3, 1, seed=8).operators
    assert_allclose(u @ u.conj().T, np.eye(3), atol=1e-10)


def test_channel_sampling_is_deterministic():
    a = sample_kraus_channel(2, 2, seed=[5, 1])
    b = sample_kraus_channel(2, 2, seed=[5, 1])
    for x, y in zip(a.operators, b.operators):
        assert_allclose(x, y, rtol=0, atol=0)


def test_branch_probabilities_sum_to_one():
    s = random_haar_pure(2, 4)
    branches = channel_branches(s, sample_kraus_channel(2, 2, seed=9))
    assert sum(p for p, _ in branches) == pytest.approx(1.0, abs=1e-10)


def test_invalid_channels():
    with pytest.raises(InvalidChannel):
        KrausChannel.build([np.eye(2), np.eye(2)])
    with pytest.raises(InvalidChannel):
        KrausChannel.build([np.eye(2), np.eye(3)], "SubNormalized")
    with pytest.raises(InvalidChannel):
        KrausChannel.build([])
    with pytest.raises(InvalidChannel):
        sample_kraus_channel(2, 0, seed=1)


def test_scaled_channel_is_subnormalized():
    channel = sample_kraus_channel(3, 2, seed=2).scaled(0.25)
    assert channel.completeness is Completeness.SUBNORMALIZED
    assert_allclose(channel.gram(), 0.25 * np.eye(3), atol=1e-10)
    s = random_haar_pure(3, 6)
    assert sum(p for p, _ in channel_branches(s, channel)) == pytest.approx(0.25)
    with pytest.raises(InvalidChannel):
        channel.scaled(1.5)
    KrausChannel.build([0.5 * np.eye(2)], "SubNormalized")


def test_projective_measurement_of_ghz_destroys_chi(balanced_ghz):
    branches = channel_branches(balanced_ghz, projective_channel(2))
    assert [p for p, _ in branches] == pytest.approx([0.5, 0.5])
    assert sum(p * chi(b) for p, b in branches) == pytest.approx(0.0, abs=1e-12)
    assert chi(balanced_ghz) == pytest.approx(1.0, abs=1e-12)


def test_identity_channel_gives_zero_margin():
    result = check_chi_monotonicity(small_cfg(trials=20), channel=identity_channel(2))
    assert result.violations == 0
    assert abs(result.worst_margin) <= 1e-12


def test_chi_monotonicity_small_run():
    result = check_chi_monotonicity(small_cfg(trials=60))
    assert result.name == "chi_monotonicity"
    assert result.trials_run == 60
    assert result.violations == 0 and result.witness is None
    assert result.worst_margin >= -1e-8


def test_subnormalized_monotonicity_small_run():
    result = check_subnormalized_monotonicity(small_cfg())
    assert result.violations == 0
    assert result.worst_margin > -1e-8


def test_ordering_small_run():
    result = check_ordering(small_cfg(n_values=(2, 3, 4), trials=100))
    assert result.violations == 0
    assert result.worst_margin >= -1e-8


def test_lu_invariance_small_run():
    result = check_lu_invariance(small_cfg(trials=30))
    assert result.violations == 0
    assert result.worst_margin >= -1e-8


def test_class_signatures_small_run():
    result = check_class_signatures(seed=5, samples=20)
    assert result.violations == 0, result.witness
    assert result.details["w_floor"] == W_FLOOR
    assert result.details["states"] == 4 * 20 + 7


def test_w_sampler_respects_floor(rng):
    for _ in range(50):
        p = sample_w_params(rng)
        assert min(p.lt0, p.lt1, p.lt2) >= W_FLOOR
        assert p.lt3 >= 0


def test_w_floor_corner_is_clearly_w_type():
    corner = w_state(WParams.from_leading(W_FLOOR, W_FLOOR, W_FLOOR))
    assert varpi(corner) > NONZERO_THRESHOLD


@pytest.mark.parametrize("seed", [3, 35, 37, 55])
def test_class_signatures_hold_for_other_seeds(seed):
    result = check_class_signatures(seed=seed, samples=CLASS_SIGNATURE_SAMPLES)
    assert result.violations == 0, result.witness


@pytest.mark.slow
def test_class_signatures_hold_over_a_seed_range():
    for seed in range(60):
        result = check_class_signatures(seed=seed, samples=CLASS_SIGNATURE_SAMPLES)
        assert result.violations == 0, (seed, result.witness)


def test_ghjw_sample_reconstructs_density():
    rho = reduced_AB(random_haar_pure(3, 12))
    for length in (3, 4, 6):
        d = ghjw_decomposition_sample(rho, length, seed=length)
        assert_allclose(d.density(), rho.matrix, atol=1e-9)
        assert average_concurrence(d) <= coa(rho) + 1e-8


def test_ghjw_length_below_rank():
    rho = reduced_AB(random_haar_pure(3, 12))
    with pytest.raises(LengthTooSmall):
        ghjw_decomposition_sample(rho, 2, seed=0)


def test_identity_isometry_gives_eigendecomposition():
    rho = reduced_AB(random_haar_pure(2, 1))
    q, e = eigen_ensemble(rho)
    d = ghjw_decomposition_sample(rho, 2, seed=0, isometry=np.eye(2))
    assert_allclose(d.weights, q, atol=1e-12)
    assert_allclose(np.abs(d.members @ e.conj().T), np.eye(2), atol=1e-10)


def test_hadamard_mixing_of_bell_diagonal_reaches_coa():
    rho = TwoQubitDensity(np.diag([0.5, 0, 0, 0.5]))
    d = ghjw_decomposition_sample(rho, 2, seed=0, isometry=HADAMARD)
    assert average_concurrence(d) == pytest.approx(1.0, abs=1e-9)
    assert average_concurrence(d) / coa(rho) == pytest.approx(1.0, abs=1e-9)


def test_bad_isometry_is_rejected():
    rho = TwoQubitDensity(np.diag([0.5, 0, 0, 0.5]))
    with pytest.raises(ValueError):
        ghjw_decomposition_sample(rho, 2, seed=0, isometry=2 * HADAMARD)
    with pytest.raises(ValueError):
        ghjw_decomposition_sample(rho, 3, seed=0, isometry=HADAMARD)


def test_decomposition_lengths_cycle():
    assert decomposition_lengths(4, 7) == [4, 5, 6, 4, 5, 6, 4]
    assert decomposition_lengths(1, 3) == [1, 2, 3]


def test_coa_bound_small_run():
    result = check_coa_bound(small_cfg(trials=8), decomps_per_state=15)
    assert result.violations == 0
    assert result.trials_run == 8 * 15
    assert 0 < result.details["min_ratio"] <= result.details["max_ratio"] <= 1 + 1e-8


def test_branch_averages_small_run():
    result = check_branch_averages(small_cfg())
    assert result.violations == 0, result.witness


def test_exploration_is_never_asserted():
    result = explore_ab_monotonicity(small_cfg(trials=10))
    assert result.asserted is False
    assert result.passed
    assert result.details["parties"] == ["A", "B"]


def test_trial_config_validation():
    with pytest.raises(ValidationError):
        TrialConfig(trials=0)
    with pytest.raises(ValidationError):
        TrialConfig(tol=0)
    with pytest.raises(ValidationError):
        TrialConfig(n_values=())
    with pytest.raises(ValidationError):
        TrialConfig(n_values=(0, 2))
    assert TrialConfig(n_values=(3, 2, 3)).n_values == (2, 3)


def test_violation_requires_witness():
    with pytest.raises(ValidationError):
        PropertyResult(name="x", trials_run=1, violations=1, worst_margin=-1.0)


def test_margin_tracker_keeps_worst_violation():
    tracker = MarginTracker("demo")
    assert tracker.record(0.5, 1e-8, lambda: {"i": 0})
    assert tracker.record(-1e-9, 1e-8, lambda: {"i": 1})
    assert not tracker.record(-0.1, 1e-8, lambda: {"i": 2})
    assert not tracker.record(-0.01, 1e-8, lambda: {"i": 3})
    result = tracker.result()
    assert (result.trials_run, result.violations) == (4, 2)
    assert result.worst_margin == -0.1
    assert result.witness == {"i": 2}
    assert not result.passed


def test_run_suite_selection_and_order():
    assert run_suite(small_cfg(), []) == []
    with pytest.raises(UnknownSuite):
        run_suite(small_cfg(), ["ordering", "bogus"])
    results = run_suite(small_cfg(trials=5), ["ordering", "monotonicity"])
    assert [r.name for r in results] == ["chi_monotonicity",
                                         "chi_monotonicity_subnormalized", "ordering"]
    assert all_passed(results)


def test_run_suite_is_deterministic():
    first = [r.to_json_line() for r in run_suite(small_cfg(seed=42, trials=100),
                                                 ["ordering"])]
    second = [r.to_json_line() for r in run_suite(small_cfg(seed=42, trials=100),
                                                  ["ordering"])]
    assert first == second
    assert json.loads(first[0])["name"] == "ordering"


def test_all_suites_pass_on_a_short_run():
    results = run_suite(small_cfg(trials=10), SUITES, decomps_per_state=5,
                        explore_ab=True)
    assert all_passed(results)
    assert results[-1].name == "explore_ab_monotonicity"


@pytest.mark.slow
def test_monotonicity_at_acceptance_scale():
    cfg = TrialConfig(seed=42, trials=500, n_values=(2, 3), tol=1e-8)
    assert check_chi_monotonicity(cfg, (2, 3)).violations == 0
    assert check_subnormalized_monotonicity(cfg, (2, 3)).violations == 0


@pytest.mark.slow
def test_ordering_at_acceptance_scale():
    cfg = TrialConfig(seed=42, trials=10_000, n_values=(2, 3, 4), tol=1e-9)
    assert check_ordering(cfg).violations == 0


@pytest.mark.slow
def test_lu_invariance_at_acceptance_scale():
    cfg = TrialConfig(seed=42, trials=1000, n_values=(2, 3), tol=1e-8)
    assert check_lu_invariance(cfg).violations == 0


@pytest.mark.slow
def test_class_signatures_at_acceptance_scale():
    assert check_class_signatures(seed=42, samples=200).violations == 0


@pytest.mark.slow
def test_coa_bound_at_acceptance_scale():
    cfg = TrialConfig(seed=42, trials=200, n_values=(2, 3), tol=1e-8)
    result = check_coa_bound(cfg, decomps_per_state=200)
    assert result.violations == 0
    assert result.details["max_ratio"] <= 1 + 1e-8
