"""
Seeded property checks of the monogamy measures. Every check returns a
PropertyResult; violations are recorded as data, never raised.
"""
from __future__ import annotations

import logging
import math
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..classify import NONZERO_THRESHOLD, ZERO_THRESHOLD
from ..families import (StandardState, ghz_state, product_A_BC, product_AB_C,
                        random_local_unitaries, random_unit_vector, standard_state,
                        w_state)
from ..local_ops import apply_local_unitaries, reduced_AB
from ..matcore import ConvergenceFailure, NotPSD
from ..measures import (REPORT_FIELDS, InconsistentDecomposition,
                        InternalConsistencyError, average_concurrence, chi, coa,
                        full_report, negativity)
from ..params import GHZParams, WParams
from ..state import TripartitePureState, make_state
from .decompositions import eigen_ensemble, ghjw_decomposition_sample
from .kraus import KrausChannel, channel_branches, sample_kraus_channel
from .results import MarginTracker, PropertyResult, TrialConfig

logger = logging.getLogger(__name__)

W_FLOOR = 0.15
GHZ_LAMBDA0_RANGE = (0.1, 0.995)
SUBNORMALIZED_SCALE_RANGE = (0.1, 0.9)
DEFAULT_K_RANGE = (2, 3)
DEFAULT_DECOMPS_PER_STATE = 50
MAX_DECOMPOSITION_LENGTH = 6
CLASS_SIGNATURE_SAMPLES = 200
SUITE_SEED_STRIDE = 1_000_003

SUITES = ("monotonicity", "ordering", "lu_invariance", "class_signatures",
          "coa_bound", "branch_averages")

# failures of the numerics inside a trial; they count as violations
NUMERIC_ERRORS = (InternalConsistencyError, InconsistentDecomposition,
                  ConvergenceFailure, NotPSD)

Witness = Callable[[], Dict[str, Any]]


class UnknownSuite(ValueError):
    """
    Suite name is not one of SUITES.
    """
    pass


def _check(tracker: MarginTracker, allowance: float, witness: Witness,
           margin: Callable[[], float]) -> bool:
    try:
        value = margin()
    except NUMERIC_ERRORS as err:
        logger.debug("%s: numeric failure %s", tracker.name, err)
        return tracker.record(-1.0, allowance, lambda: {**witness(), "error": str(err)})
    ok = tracker.record(value, allowance, witness)
    if not ok:
        logger.debug("%s: violation with margin %.3e", tracker.name, value)
    return ok


def _haar_trial(cfg: TrialConfig, i: int, n: Optional[int] = None
                ) -> Tuple[TripartitePureState, np.random.Generator]:
    rng = np.random.default_rng(cfg.trial_seed(i))
    n = cfg.trial_n(i) if n is None else n
    return make_state(n, random_unit_vector(4 * n, rng)), rng


def _trial_k(cfg: TrialConfig, i: int, k_range: Sequence[int]) -> int:
    ks = sorted(set(k_range))
    return ks[(i // len(cfg.n_values)) % len(ks)]


def _average_chi(branches) -> float:
    return float(sum(p * chi(branch) for p, branch in branches if branch is not None))


def _channel_witness(i: int, cfg: TrialConfig, s: TripartitePureState,
                     channel: KrausChannel, party: str = "C") -> Witness:
    return lambda: {"trial": i, "seed": cfg.trial_seed(i), "state": s.to_dict(),
                    "channel": channel.to_json(),
                    "completeness": channel.completeness.value, "party": party}


def _state_witness(i: int, cfg: TrialConfig, s: TripartitePureState) -> Witness:
    return lambda: {"trial": i, "seed": cfg.trial_seed(i), "state": s.to_dict()}


def _finish(tracker: MarginTracker, asserted: bool = True, **details: Any
            ) -> PropertyResult:
    result = tracker.result(asserted=asserted, **details)
    logger.info("%s: %d checks, %d violations, worst margin %.3e", result.name,
                result.trials_run, result.violations, result.worst_margin)
    return result


def check_chi_monotonicity(cfg: TrialConfig, k_range: Sequence[int] = DEFAULT_K_RANGE,
                           channel: Optional[KrausChannel] = None) -> PropertyResult:
    """
    Checks sum_k p_k chi(branch_k) <= chi(state) for channels on C.
    :param cfg: Trial configuration.
    :param k_range: Numbers of Kraus operators to sample from.
    :param channel: Fixed channel used in every trial instead of sampled ones; its
    dimension overrides cfg.n_values.
    :return: PropertyResult with margin chi - averaged chi.
    """
    tracker = MarginTracker("chi_monotonicity")
    for i in range(cfg.trials):
        if channel is None:
            s, _ = _haar_trial(cfg, i)
            trial_channel = sample_kraus_channel(s.n, _trial_k(cfg, i, k_range),
                                                 seed=[cfg.trial_seed(i), 1])
        else:
            s, _ = _haar_trial(cfg, i, n=channel.n)
            trial_channel = channel
        _check(tracker, cfg.tol, _channel_witness(i, cfg, s, trial_channel),
               lambda: chi(s) - _average_chi(channel_branches(s, trial_channel)))
    return _finish(tracker, k_range=sorted(set(k_range)))


def check_subnormalized_monotonicity(cfg: TrialConfig,
                                     k_range: Sequence[int] = DEFAULT_K_RANGE
                                     ) -> PropertyResult:
    """
    Same bound for channels with sum M_k^dagger M_k = s I, s drawn from (0.1, 0.9).
    """
    tracker = MarginTracker("chi_monotonicity_subnormalized")
    low, high = SUBNORMALIZED_SCALE_RANGE
    for i in range(cfg.trials):
        s, rng = _haar_trial(cfg, i)
        channel = sample_kraus_channel(s.n, _trial_k(cfg, i, k_range),
                                       seed=[cfg.trial_seed(i), 1])
        channel = channel.scaled(float(rng.uniform(low, high)))
        _check(tracker, cfg.tol, _channel_witness(i, cfg, s, channel),
               lambda: chi(s) - _average_chi(channel_branches(s, channel)))
    return _finish(tracker, k_range=sorted(set(k_range)),
                   scale_range=list(SUBNORMALIZED_SCALE_RANGE))


def check_ordering(cfg: TrialConfig) -> PropertyResult:
    """
    Checks C_a >= C >= N on rho_AB of Haar states. The report itself enforces
    tau^2 + C^2 = C_a^2 and chi^2 + N^2 = C_a^2; a broken identity is a violation.
    """
    tracker = MarginTracker("ordering")
    for i in range(cfg.trials):
        s, _ = _haar_trial(cfg, i)

        def margin() -> float:
            report = full_report(s)
            return min(report.coa - report.concurrence,
                       report.concurrence - report.negativity)

        _check(tracker, cfg.tol, _state_witness(i, cfg, s), margin)
    return _finish(tracker)


def check_lu_invariance(cfg: TrialConfig) -> PropertyResult:
    """
    Checks every MeasureReport field is unchanged by a Haar local unitary triple.
    """
    tracker = MarginTracker("lu_invariance")
    for i in range(cfg.trials):
        s, rng = _haar_trial(cfg, i)
        u = random_local_unitaries(s.n, rng)

        def margin() -> float:
            before = full_report(s)
            after = full_report(apply_local_unitaries(s, u))
            return -max(abs(getattr(before, name) - getattr(after, name))
                        for name in REPORT_FIELDS)

        witness = lambda: {**_state_witness(i, cfg, s)(),
                           "uA": _matrix_json(u.uA), "uB": _matrix_json(u.uB),
                           "uC": _matrix_json(u.uC)}
        _check(tracker, cfg.tol, witness, margin)
    return _finish(tracker)


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def sample_w_params(rng: np.random.Generator, floor: float = W_FLOOR) -> WParams:
    """
    Draws lt0, lt1, lt2 uniformly from [floor, 1), rejecting draws whose squares sum
    above 1; lt3 takes the remainder. Over that box varpi is smallest at the corner
    lt0 = lt1 = lt2 = floor, which for W_FLOOR (about 1.7e-4) stays above
    NONZERO_THRESHOLD.
    """
    while True:
        lt = rng.uniform(floor, 1.0, size=3)
        if float(np.sum(lt ** 2)) <= 1.0:
            return WParams.from_leading(*(float(x) for x in lt))


def sample_ghz_params(rng: np.random.Generator) -> GHZParams:
    low, high = GHZ_LAMBDA0_RANGE
    return GHZParams.from_lambda0(float(rng.uniform(low, high)),
                                  float(rng.uniform(0.0, math.pi)))


def _class_fixtures(seed: int, samples: int
                    ) -> Iterable[Tuple[str, TripartitePureState, List[Tuple[str, Any]]]]:
    """
    Yields (fixture name, state, expectations). An expectation is (field, "zero"),
    (field, "nonzero") or (field, exact value).
    """
    rng = np.random.default_rng(seed)
    separable = [("chi", "zero"), ("varpi", "zero"), ("eta", "zero")]
    for i in range(samples):
        n = 2 + i % 3
        yield ("product_AB_C",
               product_AB_C(random_unit_vector(4, rng), random_unit_vector(n, rng)),
               separable)
        yield ("product_A_BC",
               product_A_BC(random_unit_vector(2, rng), random_unit_vector(2 * n, rng)),
               separable)
        ghz = sample_ghz_params(rng)
        yield ("ghz", ghz_state(ghz),
               [("chi", "nonzero"), ("varpi", "zero"),
                ("chi", 2 * ghz.lambda0 * ghz.lambda1)])
        w = sample_w_params(rng)
        yield ("w", w_state(w),
               [("chi", "nonzero"), ("varpi", "nonzero"),
                ("concurrence", 2 * w.lt1 * w.lt2)])
    for which in StandardState:
        yield which.value, standard_state(which), [("chi", "nonzero"), ("varpi", "zero")]
    yield "S223_exact", standard_state(StandardState.S223), [("chi", 2 / 3)]
    yield ("ghz_0.6_0.8", ghz_state(GHZParams.from_lambda0(0.6)),
           [("chi", 0.96), ("varpi", "zero")])
    third = 1 / math.sqrt(3)
    symmetric_w = w_state(WParams.from_leading(third, third, third))
    yield ("w_symmetric", symmetric_w,
           [("concurrence", 2 / 3), ("varpi", (2 * math.sqrt(5) - 2) / 9),
            ("eta", "nonzero")])
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    yield ("bell_x_0", product_AB_C(bell, [1, 0]),
           [("concurrence", 1.0), ("eta", "zero"), ("varpi", "zero")])


def check_class_signatures(tol: float = ZERO_THRESHOLD, seed: int = 0,
                           samples: int = CLASS_SIGNATURE_SAMPLES) -> PropertyResult:
    """
    Fixture table of vanishing and non-vanishing signatures: separable products,
    GHZ and W families, the high-local-rank standard states and the Bell x |0> state
    whose concurrence alone looks like tripartite entanglement.
    :param tol: Threshold for "vanishes" and for exact values.
    :param seed: Seed of the random fixtures.
    :param samples: Random states per family.
    :return: PropertyResult counting one check per expectation.
    """
    tracker = MarginTracker("class_signatures")
    states = 0
    for name, s, expectations in _class_fixtures(seed, samples):
        states += 1
        try:
            report = full_report(s)
        except NUMERIC_ERRORS as err:
            tracker.record(-1.0, tol, lambda: {"fixture": name, "state": s.to_dict(),
                                               "error": str(err)})
            continue
        for field, expected in expectations:
            value = getattr(report, field)
            if expected == "zero":
                margin, allowance = -value, tol
            elif expected == "nonzero":
                margin, allowance = value - NONZERO_THRESHOLD, 0.0
            else:
                margin, allowance = -abs(value - expected), tol
            tracker.record(margin, allowance,
                           lambda: {"fixture": name, "field": field,
                                    "expected": expected, "value": float(value),
                                    "state": s.to_dict()})
    return _finish(tracker, states=states, w_floor=W_FLOOR, zero_threshold=tol,
                   nonzero_threshold=NONZERO_THRESHOLD)


def decomposition_lengths(rank: int, count: int) -> List[int]:
    """
    Lengths rank, rank + 1, ..., MAX_DECOMPOSITION_LENGTH cycled to count entries.
    """
    span = MAX_DECOMPOSITION_LENGTH - rank + 1
    return [rank + j % span for j in range(count)]


def check_coa_bound(cfg: TrialConfig, decomps_per_state: int = DEFAULT_DECOMPS_PER_STATE
                    ) -> PropertyResult:
    """
    Checks that no sampled decomposition of rho_AB averages more concurrence than
    C_a. The best-found / C_a ratios go to the details.
    """
    tracker = MarginTracker("coa_bound")
    ratios = []
    for i in range(cfg.trials):
        s, _ = _haar_trial(cfg, i)
        rho = reduced_AB(s)
        ca = coa(rho)
        best = 0.0
        rank = eigen_ensemble(rho)[0].size
        for j, length in enumerate(decomposition_lengths(rank, decomps_per_state)):
            seed = [cfg.trial_seed(i), j + 1]

            def margin() -> float:
                nonlocal best
                average = average_concurrence(ghjw_decomposition_sample(rho, length,
                                                                        seed))
                best = max(best, average)
                return ca - average

            witness = lambda: {**_state_witness(i, cfg, s)(), "length": length,
                               "decomposition_seed": seed}
            _check(tracker, cfg.tol, witness, margin)
        if ca > ZERO_THRESHOLD:
            ratios.append(best / ca)
    details = {"decomps_per_state": decomps_per_state}
    if ratios:
        details.update(min_ratio=float(min(ratios)), mean_ratio=float(np.mean(ratios)),
                       max_ratio=float(max(ratios)))
    return _finish(tracker, **details)


def check_branch_averages(cfg: TrialConfig, k_range: Sequence[int] = DEFAULT_K_RANGE
                          ) -> PropertyResult:
    """
    Checks the steps of the semi-monotonicity bound for complete channels on C:
    the averaged rho_AB is unchanged, the averaged C_a does not grow, the averaged N
    does not shrink, and the averaged chi obeys the Cauchy-Schwarz bound.
    """
    tracker = MarginTracker("branch_averages")
    for i in range(cfg.trials):
        s, _ = _haar_trial(cfg, i)
        channel = sample_kraus_channel(s.n, _trial_k(cfg, i, k_range),
                                       seed=[cfg.trial_seed(i), 1])

        def margin() -> float:
            rho = reduced_AB(s)
            branches = [(p, b) for p, b in channel_branches(s, channel)
                        if b is not None]
            reduced = [(p, reduced_AB(b)) for p, b in branches]
            averaged = sum(p * r.matrix for p, r in reduced)
            mean_coa = sum(p * coa(r) for p, r in reduced)
            mean_negativity = sum(p * negativity(r) for p, r in reduced)
            mean_chi = sum(p * chi(b) for p, b in branches)
            bound = math.sqrt(max(mean_coa ** 2 - mean_negativity ** 2, 0.0))
            return min(-float(np.max(np.abs(averaged - rho.matrix))),
                       coa(rho) - mean_coa,
                       mean_negativity - negativity(rho),
                       bound - mean_chi)

        _check(tracker, cfg.tol, _channel_witness(i, cfg, s, channel), margin)
    return _finish(tracker, k_range=sorted(set(k_range)))


def explore_ab_monotonicity(cfg: TrialConfig, k_range: Sequence[int] = DEFAULT_K_RANGE
                            ) -> PropertyResult:
    """
    Records chi - averaged chi for channels on A (even trials) or B (odd trials).
    Exploratory only: the result is never asserted.
    """
    tracker = MarginTracker("explore_ab_monotonicity")
    for i in range(cfg.trials):
        s, _ = _haar_trial(cfg, i)
        party = "A" if i % 2 == 0 else "B"
        channel = sample_kraus_channel(2, _trial_k(cfg, i, k_range),
                                       seed=[cfg.trial_seed(i), 2])
        _check(tracker, cfg.tol, _channel_witness(i, cfg, s, channel, party),
               lambda: chi(s) - _average_chi(channel_branches(s, channel, party)))
    return _finish(tracker, asserted=False, parties=["A", "B"],
                   k_range=sorted(set(k_range)))


def run_suite(cfg: TrialConfig, suites: Iterable[str],
              k_range: Sequence[int] = DEFAULT_K_RANGE,
              decomps_per_state: int = DEFAULT_DECOMPS_PER_STATE,
              explore_ab: bool = False) -> List[PropertyResult]:
    """
    Runs the named suites in the canonical SUITES order. Suite number j runs with
    base seed cfg.seed + j * SUITE_SEED_STRIDE.
    :param cfg: Trial configuration.
    :param suites: Names from SUITES.
    :param k_range: Numbers of Kraus operators for the channel suites.
    :param decomps_per_state: Decompositions sampled per state in coa_bound.
    :param explore_ab: Append the non-asserted A/B channel exploration.
    :return: PropertyResult list; the run passes iff every asserted result has no
    violations.
    """
    names = set(suites)
    unknown = sorted(names - set(SUITES))
    if unknown:
        raise UnknownSuite(f"Unknown suite(s) {unknown}, expected names from "
                           f"{list(SUITES)}")
    results: List[PropertyResult] = []
    for j, name in enumerate(SUITES):
        if name not in names:
            continue
        sub = cfg.model_copy(update={"seed": cfg.seed + j * SUITE_SEED_STRIDE})
        logger.info("suite %s: seed %d, %d trials", name, sub.seed, sub.trials)
        if name == "monotonicity":
            results.append(check_chi_monotonicity(sub, k_range))
            results.append(check_subnormalized_monotonicity(sub, k_range))
        elif name == "ordering":
            results.append(check_ordering(sub))
        elif name == "lu_invariance":
            results.append(check_lu_invariance(sub))
        elif name == "class_signatures":
            results.append(check_class_signatures(ZERO_THRESHOLD, seed=sub.seed))
        elif name == "coa_bound":
            results.append(check_coa_bound(sub, decomps_per_state))
        elif name == "branch_averages":
            results.append(check_branch_averages(sub, k_range))
    if explore_ab:
        sub = cfg.model_copy(update={"seed": cfg.seed + len(SUITES) * SUITE_SEED_STRIDE})
        results.append(explore_ab_monotonicity(sub, k_range))
    return results


def all_passed(results: Iterable[PropertyResult]) -> bool:
    return all(result.passed for result in results)
