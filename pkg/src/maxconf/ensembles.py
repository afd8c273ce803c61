"""Discrimination ensembles and their bipartite companions.

An Ensemble is a finite set of density operators with strictly positive
prior probabilities.  Every ensemble has a canonical two-party picture:
a pure state

    |Psi> = sum_i sqrt(beta_i) |beta_i>_L |i>_R

whose left marginal is the average state sum_i p_i rho_i and whose right
index labels are grouped into one contiguous block sigma(j) per ensemble
member, with sum over i in sigma(j) of beta_i |beta_i><beta_i| = p_j rho_j.
Conditioned on a right-side index in sigma(j), the left system holds rho_j
with probability p_j, so measurements on the left realize discrimination
of the ensemble while the right side keeps the record.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import (
    RANK_TOL,
    fix_phase,
    frobenius,
    hermitian_eigen,
    hermitize,
    real_trace,
    require_hermitian,
    support_inv_sqrt,
    support_rank,
)

_TRACE_TOL = 1e-10
_STATE_PSD_TOL = 1e-10
_PRIOR_SUM_TOL = 1e-12
_NORM_TOL = 1e-12
_MARGINAL_CONSISTENCY_TOL = 1e-8


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Ensemble:
    """States rho_i with priors p_i on a d-dimensional system."""

    dim: int
    states: tuple
    priors: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if len(self.states) == 0:
            raise ValueError("ensemble needs at least one state")
        priors = np.asarray(self.priors, dtype=np.float64)
        if priors.shape != (len(self.states),):
            raise ValueError("one prior per state required")
        if np.any(priors <= 0.0):
            raise ValueError("priors must be strictly positive")
        if abs(priors.sum() - 1.0) > _PRIOR_SUM_TOL:
            raise ValueError(f"priors sum to {float(priors.sum())!r}, expected 1")
        checked = []
        for k, rho in enumerate(self.states):
            h = require_hermitian(rho, name=f"state {k}")
            if h.shape != (self.dim, self.dim):
                raise ValueError(f"state {k} has shape {h.shape}, expected ({self.dim}, {self.dim})")
            vals = np.linalg.eigvalsh(h)
            if vals[0] < -_STATE_PSD_TOL:
                raise ValueError(f"state {k} is not positive semidefinite (min eigenvalue {vals[0]:.3e})")
            if abs(real_trace(h) - 1.0) > _TRACE_TOL:
                raise ValueError(f"state {k} has trace {real_trace(h)!r}, expected 1")
            checked.append(_frozen(h))
        priors.setflags(write=False)
        object.__setattr__(self, "states", tuple(checked))
        object.__setattr__(self, "priors", priors)

    @classmethod
    def from_pure(cls, kets, priors) -> "Ensemble":
        kets = [np.asarray(k, dtype=np.complex128).reshape(-1) for k in kets]
        dim = kets[0].size
        states = []
        for k in kets:
            if k.size != dim:
                raise ValueError("kets must share one dimension")
            n = np.linalg.norm(k)
            if n == 0.0:
                raise ValueError("zero ket")
            k = k / n
            states.append(np.outer(k, k.conj()))
        return cls(dim, tuple(states), np.asarray(priors, dtype=np.float64))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @cached_property
    def average(self) -> np.ndarray:
        """The mixture sum_i p_i rho_i actually handed to the measurement."""
        return _frozen(sum(p * rho for p, rho in zip(self.priors, self.states)))

    @cached_property
    def state_ranks(self) -> tuple:
        return tuple(support_rank(rho) for rho in self.states)

    def is_pure(self, j: int) -> bool:
        return self.state_ranks[j] == 1


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure two-party state given by its amplitude matrix.

    amplitudes[a, i] is the coefficient of |a>_L |i>_R.  index_sets
    partitions the right-side labels into one tuple per ensemble member.
    """

    dim_left: int
    dim_right: int
    amplitudes: np.ndarray
    index_sets: tuple

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.dim_left, self.dim_right):
            raise ValueError(f"amplitude matrix shape {amps.shape}, expected ({self.dim_left}, {self.dim_right})")
        n = np.linalg.norm(amps)
        if abs(n - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm {float(n)!r} deviates from 1 beyond {_NORM_TOL}")
        sets = tuple(tuple(int(i) for i in s) for s in self.index_sets)
        seen = [i for s in sets for i in s]
        if sorted(seen) != list(range(self.dim_right)):
            raise ValueError("index sets must partition the right-side labels")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "index_sets", sets)

    def left_marginal(self) -> np.ndarray:
        return hermitize(self.amplitudes @ self.amplitudes.conj().T)

    def right_marginal(self) -> np.ndarray:
        return hermitize(self.amplitudes.T @ self.amplitudes.conj())

    def ket(self) -> np.ndarray:
        """Flattened state vector in the left-major composite basis."""
        return self.amplitudes.reshape(-1)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt form of a bipartite pure state.

    coefficients are the squared singular values of the amplitude matrix,
    descending, summing to 1 for a normalized state; column m of
    left_vectors / right_vectors carries the m-th Schmidt pair, so
    sum_m sqrt(coefficients[m]) left[:, m] right[:, m]^T rebuilds the
    amplitude matrix.
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.coefficients, dtype=np.float64)
        if np.any(lam <= 0.0):
            raise ValueError("Schmidt coefficients must be positive")
        if abs(lam.sum() - 1.0) > 1e-10:
            raise ValueError(f"Schmidt coefficients sum to {float(lam.sum())!r}")
        for name, block in (("left", self.left_vectors), ("right", self.right_vectors)):
            g = block.conj().T @ block
            if frobenius(g - np.eye(lam.size)) > 1e-10:
                raise ValueError(f"{name} Schmidt vectors are not orthonormal")

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * np.sqrt(self.coefficients)) @ self.right_vectors.T


@dataclass(frozen=True, eq=False)
class SubspaceProjector:
    """Orthogonal projector onto the reachable right-side subspace."""

    dim: int
    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        m = require_hermitian(self.matrix, name="projector")
        if m.shape != (self.dim, self.dim):
            raise ValueError("projector dimension mismatch")
        if frobenius(m @ m - m) > 1e-10:
            raise ValueError("projector is not idempotent within 1e-10")
        if abs(real_trace(m) - self.rank) > 1e-9:
            raise ValueError(f"projector trace {real_trace(m)!r} does not match rank {self.rank}")
        object.__setattr__(self, "matrix", _frozen(m))

    def complement(self) -> np.ndarray:
        return np.eye(self.dim) - self.matrix


def purify(ens: Ensemble) -> BipartiteState:
    """Canonical purification of an ensemble.

    Each member contributes one contiguous block of right-side labels, in
    ensemble order: a pure rho_j = |psi_j><psi_j| contributes the single
    column sqrt(p_j) |psi_j>, a mixed rho_j one column sqrt(beta_i) |beta_i>
    per nonzero eigenvalue of p_j rho_j (descending).  Eigenvector phases
    are fixed (largest-magnitude entry real positive) so the construction
    is reproducible.
    """
    columns = []
    index_sets = []
    cursor = 0
    for p, rho in zip(ens.priors, ens.states):
        eig = hermitian_eigen(p * rho)
        keep = eig.eigenvalues > RANK_TOL * eig.eigenvalues[0]
        block = []
        for beta, v in zip(eig.eigenvalues[keep], eig.eigenvectors[:, keep].T):
            block.append(np.sqrt(beta) * fix_phase(v))
        columns.extend(block)
        index_sets.append(tuple(range(cursor, cursor + len(block))))
        cursor += len(block)
    amps = np.column_stack(columns)
    amps = amps / np.linalg.norm(amps)
    return BipartiteState(ens.dim, cursor, amps, tuple(index_sets))


def rho_left(ens: Ensemble) -> np.ndarray:
    """Average state sum_i p_i rho_i, the left marginal of the purification."""
    return ens.average


def schmidt(bs: BipartiteState) -> SchmidtDecomposition:
    """Schmidt decomposition via SVD of the amplitude matrix.

    Squared singular values at or below the shared rank tolerance
    (relative to the largest) are discarded.
    """
    u, s, vh = np.linalg.svd(bs.amplitudes, full_matrices=False)
    lam = s * s
    keep = lam > RANK_TOL * lam[0]
    return SchmidtDecomposition(lam[keep], u[:, keep], vh[keep, :].T)


def allowed_subspace(bs: BipartiteState, rho_l: np.ndarray) -> SubspaceProjector:
    """Projector onto the right-side subspace reachable by left measurements.

    Computed as the left partial trace of
    (rho_L^{-1/2} tensor I) |Psi><Psi| (rho_L^{-1/2} tensor I),
    which equals the sum of projectors onto the right Schmidt vectors.
    Conditional right states of any outcome live inside this subspace;
    that containment is what stops the left party from signalling.
    """
    rho_l = require_hermitian(rho_l, name="left marginal")
    if frobenius(bs.left_marginal() - rho_l) > _MARGINAL_CONSISTENCY_TOL:
        raise ValueError("left marginal inconsistent with the bipartite state")
    phi = support_inv_sqrt(rho_l) @ bs.amplitudes
    proj = hermitize(phi.T @ phi.conj())
    rank = support_rank(rho_l)
    return SubspaceProjector(bs.dim_right, proj, rank)
