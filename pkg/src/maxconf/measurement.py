"""Maximum-confidence measurements.

The confidence of outcome omega_j is the posterior probability that the
prepared state really was rho_j:

    P(rho_j | omega_j) = p_j Tr(rho_j Pi_j) / Tr(rho Pi_j),

with rho = sum_i p_i rho_i.  Over all effects this is bounded by

    C_j = p_j Tr(rho_j rho^{-1})                      (rho_j pure)
    C_j = gamma_max(p_j rho^{-1/2} rho_j rho^{-1/2})  (rho_j mixed)

with inverses restricted to the support of rho, and the bound is attained
by Pi_j proportional to rho^{-1} p_j rho_j rho^{-1} (pure) or
rho^{-1/2} P_max rho^{-1/2} with P_max the projector onto the full top
eigenspace (mixed).  Scaling an effect changes outcome probabilities but
never its confidence, so one overall scale completes the collection into
a measurement with an inconclusive remainder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import Ensemble
from .linalg import (
    frobenius,
    hermitian_eigen,
    hermitize,
    real_trace,
    require_hermitian,
    support_inv,
    support_inv_sqrt,
)

_EFFECT_PSD_TOL = 1e-10
_COMPLETENESS_TOL = 1e-9
_DEGENERACY_TOL = 1e-9
_OUTCOME_PROB_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class POM:
    """Probability operator measurement: labelled effects plus optional fail.

    effects is a tuple of (label, matrix) pairs.  Each effect must be PSD
    and the effects must sum to at most the identity; when fail is present
    the collection must resolve the identity within 1e-9.
    """

    effects: tuple
    fail: np.ndarray | None = None

    def __post_init__(self):
        if len(self.effects) == 0 and self.fail is None:
            raise ValueError("a measurement needs at least one effect")
        if len(self.effects) > 0:
            dim = np.asarray(self.effects[0][1]).shape[0]
        else:
            dim = np.asarray(self.fail).shape[0]
        checked = []
        total = np.zeros((dim, dim), dtype=np.complex128)
        for label, e in self.effects:
            h = require_hermitian(e, name=f"effect {label}")
            if h.shape != (dim, dim):
                raise ValueError("effects must share one dimension")
            if np.linalg.eigvalsh(h)[0] < -_EFFECT_PSD_TOL:
                raise ValueError(f"effect {label} is not positive semidefinite")
            h = np.array(h)
            h.setflags(write=False)
            checked.append((int(label), h))
            total = total + h
        fail = self.fail
        if fail is not None:
            fail = require_hermitian(fail, name="fail effect")
            if np.linalg.eigvalsh(fail)[0] < -_EFFECT_PSD_TOL:
                raise ValueError("fail effect is not positive semidefinite")
            if frobenius(total + fail - np.eye(dim)) > _COMPLETENESS_TOL:
                raise ValueError("effects plus fail do not resolve the identity")
            fail = np.array(fail)
            fail.setflags(write=False)
        elif np.linalg.eigvalsh(total)[-1] > 1.0 + _COMPLETENESS_TOL:
            raise ValueError("effects exceed the identity")
        object.__setattr__(self, "effects", tuple(checked))
        object.__setattr__(self, "fail", fail)

    @property
    def dim(self) -> int:
        if self.effects:
            return self.effects[0][1].shape[0]
        return self.fail.shape[0]

    @property
    def complete(self) -> bool:
        return self.fail is not None

    def all_effects(self) -> list:
        """(label, matrix) pairs with the fail effect appended last as label None."""
        out = list(self.effects)
        if self.fail is not None:
            out.append((None, self.fail))
        return out


def confidence_of(ens: Ensemble, effect: np.ndarray, j: int) -> float:
    """Posterior probability of state j given the outcome tied to `effect`.

    Invariant under rescaling of the effect.  Raises when the outcome
    probability Tr(rho effect) is too small for the conditional to exist.
    """
    e = require_hermitian(effect, name="effect")
    denom = real_trace(ens.average @ e)
    if denom <= _OUTCOME_PROB_FLOOR:
        raise ValueError(f"outcome probability {denom!r} too small: conditional undefined")
    numer = ens.priors[j] * real_trace(ens.states[j] @ e)
    return float(numer / denom)


def max_confidence(ens: Ensemble, j: int) -> float:
    """Largest achievable confidence for ensemble member j."""
    rho = ens.average
    if ens.is_pure(j):
        return float(ens.priors[j] * real_trace(ens.states[j] @ support_inv(rho)))
    s = support_inv_sqrt(rho)
    x = hermitize(ens.priors[j] * (s @ ens.states[j] @ s))
    return float(np.linalg.eigvalsh(x)[-1])


def optimal_effect(ens: Ensemble, j: int) -> np.ndarray:
    """Unnormalized effect attaining max_confidence(ens, j).

    For a mixed member the top eigenspace is taken whole: eigenvalues within
    1e-9 relative of the maximum all enter, so degenerate directions are
    never split by roundoff.
    """
    rho = ens.average
    if ens.is_pure(j):
        rinv = support_inv(rho)
        return hermitize(rinv @ (ens.priors[j] * ens.states[j]) @ rinv)
    s = support_inv_sqrt(rho)
    x = hermitize(ens.priors[j] * (s @ ens.states[j] @ s))
    eig = hermitian_eigen(x)
    top = eig.eigenvalues[0]
    keep = eig.eigenvalues >= top * (1.0 - _DEGENERACY_TOL)
    v = eig.eigenvectors[:, keep]
    p_max = v @ v.conj().T
    return hermitize(s @ p_max @ s)


def complete_pom(ens: Ensemble) -> POM:
    """Scale the optimal effects into a single measurement.

    All effects share the largest scale t keeping I - t sum_j D_j positive
    semidefinite on the support of rho (t = 1 / gamma_max of the sum); the
    remainder, including the orthocomplement of the support, becomes the
    fail effect.  Every conclusive outcome then still attains its
    maximum-confidence bound.
    """
    dirs = [optimal_effect(ens, j) for j in range(ens.n_states)]
    total = hermitize(sum(dirs))
    gamma = float(np.linalg.eigvalsh(total)[-1])
    t = 1.0 / gamma
    effects = tuple((j, t * d) for j, d in enumerate(dirs))
    fail = hermitize(np.eye(ens.dim) - t * total)
    return POM(effects, fail)


@dataclass(frozen=True, eq=False)
class ConfidenceReport:
    """Per-state bound / achieved-confidence / outcome-probability summary."""

    records: tuple  # (label, bound, achieved, outcome_probability)
    inconclusive_probability: float

    def __post_init__(self):
        total = self.inconclusive_probability
        for label, bound, achieved, prob in self.records:
            for name, value in (("bound", bound), ("confidence", achieved), ("probability", prob)):
                if not -1e-10 <= value <= 1.0 + 1e-10:
                    raise ValueError(f"{name} for state {label} out of range: {value!r}")
            total += prob
        if not -1e-10 <= self.inconclusive_probability <= 1.0 + 1e-10:
            raise ValueError("inconclusive probability out of range")
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"outcome probabilities sum to {total!r}")


def confidence_report(ens: Ensemble, pom: POM) -> ConfidenceReport:
    if not pom.complete:
        raise ValueError("report requires a complete measurement")
    rho = ens.average
    records = []
    for label, e in pom.effects:
        records.append(
            (
                label,
                max_confidence(ens, label),
                confidence_of(ens, e, label),
                real_trace(rho @ e),
            )
        )
    return ConfidenceReport(tuple(records), real_trace(rho @ pom.fail))


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Empirical outcome statistics of a finite-shot measurement run.

    outcome_counts follows the effect order of the measurement with the
    fail outcome last.  conditional_frequencies[k] is the fraction of
    outcome-k shots whose prepared label matched the outcome label, or
    None when the outcome never fired (and for the fail outcome).
    """

    trials: int
    seed: int
    labels: tuple
    outcome_counts: tuple
    correct_counts: tuple
    conditional_frequencies: tuple

    @property
    def fail_count(self) -> int:
        return self.outcome_counts[-1]

    @property
    def fail_frequency(self) -> float:
        return self.fail_count / self.trials


def simulate_measurement(ens: Ensemble, pom: POM, trials: int, seed: int) -> SimulationResult:
    """Sample prepared labels and outcomes, counting correct identifications.

    Sampling is inverse-CDF over cumulative probabilities: first the
    prepared label from the priors, then the outcome from Tr(rho_i Pi_k)
    in effect order with fail last, one uniform pair per trial from
    numpy's seeded generator.  Deterministic for fixed (seed, trials).
    """
    if not pom.complete:
        raise ValueError("simulation requires a complete measurement")
    if trials < 1:
        raise ValueError("trials must be positive")
    labelled = pom.all_effects()
    prob = np.empty((ens.n_states, len(labelled)))
    for i, rho_i in enumerate(ens.states):
        for k, (_, e) in enumerate(labelled):
            prob[i, k] = real_trace(rho_i @ e)
    prob = np.clip(prob, 0.0, None)
    prob /= prob.sum(axis=1, keepdims=True)

    rng = np.random.default_rng(seed)
    u = rng.random((trials, 2))
    cum_priors = np.cumsum(ens.priors)
    prepared = np.searchsorted(cum_priors, u[:, 0], side="right")
    prepared = np.minimum(prepared, ens.n_states - 1)
    cum = np.cumsum(prob, axis=1)
    cum[:, -1] = 1.0
    outcome = (u[:, 1:] >= cum[prepared]).sum(axis=1)

    n_out = len(labelled)
    outcome_counts = np.bincount(outcome, minlength=n_out)
    labels = tuple(label for label, _ in pom.effects)
    correct = []
    freqs = []
    for k, label in enumerate(labels):
        hits = int(np.count_nonzero((outcome == k) & (prepared == label)))
        correct.append(hits)
        n_k = int(outcome_counts[k])
        freqs.append(hits / n_k if n_k > 0 else None)
    return SimulationResult(
        trials=trials,
        seed=seed,
        labels=labels,
        outcome_counts=tuple(int(c) for c in outcome_counts),
        correct_counts=tuple(correct),
        conditional_frequencies=tuple(freqs),
    )
