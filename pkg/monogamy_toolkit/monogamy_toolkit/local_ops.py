from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from .amplitudes import DimensionMismatch
from .matcore import as_matrix, rank_with_tol
from .params import LocalUnitaryTriple
from .state import TripartitePureState, make_state
from .two_qubit_density import TwoQubitDensity

RANK_TOL = 1e-8
BRANCH_CUTOFF = 1e-14


def reduced_AB(s: TripartitePureState) -> TwoQubitDensity:
    """
    rho_AB = Tr_C |Psi><Psi|.
    :param s: Tripartite pure state.
    :return: Two-qubit reduced density.
    """
    psi = s.vector.reshape(4, s.n)
    return TwoQubitDensity(psi @ np.conj(psi).T)


def local_ranks(s: TripartitePureState, tol: float = RANK_TOL) -> Tuple[int, int, int]:
    """
    Ranks of rho_A, rho_B and rho_C, read from the singular values of the amplitude
    unfoldings.
    :param s: Tripartite pure state.
    :param tol: Singular value threshold.
    :return: (rank_A, rank_B, rank_C).
    """
    t = s.tensor
    rank_a = rank_with_tol(t.reshape(2, 2 * s.n), tol)
    rank_b = rank_with_tol(t.transpose(1, 0, 2).reshape(2, 2 * s.n), tol)
    rank_c = rank_with_tol(t.reshape(4, s.n), tol)
    return rank_a, rank_b, rank_c


def apply_local_unitaries(s: TripartitePureState,
                          u: LocalUnitaryTriple) -> TripartitePureState:
    """
    Applies uA (x) uB (x) uC to the state.
    :param s: Tripartite pure state.
    :param u: Local unitary triple with uC of dimension n.
    :return: Transformed state.
    """
    if u.n != s.n:
        raise DimensionMismatch(f"uC acts on dimension {u.n}, the state has n = {s.n}")
    out = np.einsum("ia,jb,kc,abc->ijk", u.uA, u.uB, u.uC, s.tensor)
    return make_state(s.n, out.reshape(-1))


def apply_local_operator(s: TripartitePureState, m, party: str
                         ) -> Tuple[float, Optional[TripartitePureState]]:
    """
    Applies one Kraus operator to a single party and renormalizes the outcome.
    :param s: Tripartite pure state.
    :param m: Operator with as many columns as the party's dimension; on C the row
    count sets the new dimension, on A and B it must stay 2.
    :param party: "A", "B" or "C".
    :return: Probability p_k and the post-measurement state, None when p_k is below
    BRANCH_CUTOFF.
    """
    op = as_matrix(m)
    dims = {"A": 2, "B": 2, "C": s.n}
    if party not in dims:
        raise ValueError(f"Unknown party {party!r}, expected 'A', 'B' or 'C'")
    if op.shape[1] != dims[party]:
        raise DimensionMismatch(f"Operator on {party} needs {dims[party]} columns, got "
                                f"{op.shape[1]}")
    if party != "C" and op.shape[0] != 2:
        raise DimensionMismatch(f"Operator on {party} must map a qubit to a qubit, got "
                                f"{op.shape[0]} rows")
    subscripts = {"A": "ka,abc->kbc", "B": "kb,abc->akc", "C": "kc,abc->abk"}[party]
    out = np.einsum(subscripts, op, s.tensor).reshape(-1)
    probability = float(np.real(np.vdot(out, out)))
    if probability < BRANCH_CUTOFF:
        return probability, None
    new_n = op.shape[0] if party == "C" else s.n
    return probability, make_state(new_n, out / np.sqrt(probability))


def apply_kraus_branch(s: TripartitePureState, m
                       ) -> Tuple[float, Optional[TripartitePureState]]:
    """
    Applies (I_AB (x) M_k) to the state.
    :param s: Tripartite pure state.
    :param m: Operator on C with n columns and n' >= 1 rows.
    :return: Probability p_k and the renormalized branch, None when p_k < 1e-14.
    """
    return apply_local_operator(s, m, "C")
