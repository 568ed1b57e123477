"""
Local-rank class labels of a (2 x 2 x n) pure state, decided from its ranks and
from the chi / varpi signatures of rho_AB.
"""
from __future__ import annotations

from typing import Tuple

from pydantic import BaseModel, ConfigDict

from .local_ops import local_ranks, reduced_AB
from .measures import MeasureReport, report_from_density
from .state import TripartitePureState

ZERO_THRESHOLD = 1e-9
NONZERO_THRESHOLD = 1e-4

SEPARABLE = "separable"
# bipartite cut named by the party whose local rank is 1
SEPARABLE_CUTS = ("A-BC", "B-AC", "AB-C")
GHZ_TYPE = "GHZ-type (2,2,2)"
W_TYPE = "W-type (2,2,2)"
CLASS_223 = "(2,2,3) class"
CLASS_224 = "(2,2,4) class"
UNDETERMINED = "undetermined"


class Classification(BaseModel):
    """
    Label of one state together with the evidence it was read from.
    Attributes:
        label (str): Class label or "undetermined".
        ranks (Tuple[int, int, int]): Local ranks of rho_A, rho_B, rho_C.
        report (MeasureReport): The seven scalars.
        zero_threshold (float): Values at or below count as vanishing.
        nonzero_threshold (float): Values above count as non-vanishing.
    """

    model_config = ConfigDict(frozen=True)

    label: str
    ranks: Tuple[int, int, int]
    report: MeasureReport
    zero_threshold: float = ZERO_THRESHOLD
    nonzero_threshold: float = NONZERO_THRESHOLD


def separable_label(ranks: Tuple[int, int, int]) -> str:
    """
    Separable label listing every cut across which the state is a product, e.g.
    "separable (B-AC)" for local ranks (2, 1, 2).
    """
    cuts = [cut for cut, rank in zip(SEPARABLE_CUTS, ranks) if rank == 1]
    return f"{SEPARABLE} (" + " or ".join(cuts) + ")"


def _label(ranks: Tuple[int, int, int], report: MeasureReport) -> str:
    if 1 in ranks:
        return separable_label(ranks)
    rank_c = ranks[2]
    if rank_c == 3:
        return CLASS_223
    if rank_c == 4:
        return CLASS_224
    if report.varpi > NONZERO_THRESHOLD:
        return W_TYPE
    if report.chi > NONZERO_THRESHOLD and report.varpi <= ZERO_THRESHOLD:
        return GHZ_TYPE
    return UNDETERMINED


def classify_state(s: TripartitePureState) -> Classification:
    """
    Classifies a state by local ranks, separating the two (2,2,2) classes with varpi.
    Values between the two thresholds leave the label undetermined.
    :param s: Tripartite pure state.
    :return: Classification instance.
    """
    ranks = local_ranks(s)
    report = report_from_density(reduced_AB(s))
    return Classification(label=_label(ranks, report), ranks=ranks, report=report)
