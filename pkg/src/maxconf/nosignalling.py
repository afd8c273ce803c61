"""Bipartite checks that left-side measurements cannot signal.

Conditioned on outcome omega of an effect Pi on the left half of the
purification, the right system holds

    rho_{R|omega} = Tr_L[ |Psi><Psi| (Pi tensor I) ] / P(omega).

Whatever Pi is chosen, rho_{R|omega} stays inside the subspace spanned by
the right Schmidt vectors, and the outcome-averaged right state equals the
unmeasured right marginal.  The confidence of outcome j is the weight of
rho_{R|j} on the index block sigma(j), which is how the measurement-side
bound reappears as a geometric statement about one subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import BipartiteState, SubspaceProjector
from .linalg import frobenius, hermitize, real_trace, require_hermitian

_PROB_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class ConditionalRightState:
    """Right-side state given one left-side outcome."""

    label: int | None
    state: np.ndarray
    probability: float


def _unnormalized_conditional(bs: BipartiteState, effect: np.ndarray) -> np.ndarray:
    # Tr_L[|Psi><Psi| (Pi tensor I)] in terms of the amplitude matrix.
    return bs.amplitudes.T @ effect.conj() @ bs.amplitudes.conj()


def conditional_right_state(bs: BipartiteState, effect, label: int | None = None) -> ConditionalRightState:
    e = require_hermitian(effect, name="effect")
    if e.shape != (bs.dim_left, bs.dim_left):
        raise ValueError("effect must act on the left system")
    m = _unnormalized_conditional(bs, e)
    p = real_trace(m)
    if p <= _PROB_FLOOR:
        raise ValueError(f"outcome probability {p!r} too small: conditional undefined")
    return ConditionalRightState(label, hermitize(m) / p, float(p))


def confidence_bipartite(bs: BipartiteState, effect, j: int) -> float:
    """Weight of the conditional right state on index block sigma(j).

    Equals p_j Tr(rho_j Pi) / Tr(rho Pi) computed on the left side.
    """
    crs = conditional_right_state(bs, effect, j)
    idx = list(bs.index_sets[j])
    return float(np.sum(np.diag(crs.state)[idx].real))


def bound_bipartite(bs: BipartiteState, p_d: SubspaceProjector, j: int) -> float:
    """Maximum confidence for member j read off the allowed subspace.

    A single right label i gives <i| P_D |i>; a block sigma(j) gives the
    largest eigenvalue of P_D Pi_sigma P_D with Pi_sigma the projector
    onto the block.
    """
    idx = list(bs.index_sets[j])
    pd = p_d.matrix
    if len(idx) == 1:
        i = idx[0]
        return float(pd[i, i].real)
    pi_sigma = np.zeros((bs.dim_right, bs.dim_right), dtype=np.complex128)
    for i in idx:
        pi_sigma[i, i] = 1.0
    sandwich = hermitize(pd @ pi_sigma @ pd)
    return float(np.linalg.eigvalsh(sandwich)[-1])


def state_leakage(rho_r: np.ndarray, p_d: SubspaceProjector) -> float:
    """Weight of a right-side state outside the allowed subspace."""
    q = p_d.complement()
    return max(real_trace(q @ rho_r @ q), 0.0)


def subspace_leakage(bs: BipartiteState, p_d: SubspaceProjector, effect) -> float:
    """Leakage of the conditional right state of `effect`; must vanish."""
    crs = conditional_right_state(bs, effect)
    return state_leakage(crs.state, p_d)


def marginal_invariance(bs: BipartiteState, pom) -> float:
    """Frobenius deviation between the outcome-averaged right state and the marginal.

    Sums the unnormalized conditionals over every effect the measurement
    carries (fail included when present), so zero-probability outcomes are
    harmless.  Complete measurements must come out at most 1e-10; a
    measurement missing its fail element reports the weight it dropped.
    """
    total = np.zeros((bs.dim_right, bs.dim_right), dtype=np.complex128)
    for _, e in pom.all_effects():
        total = total + _unnormalized_conditional(bs, np.asarray(e, dtype=np.complex128))
    return frobenius(hermitize(total) - bs.right_marginal())
