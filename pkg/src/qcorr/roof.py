"""Convex-roof extension of B^(m) to mixed states.

Every pure-state ensemble of rho with k members arises from a k x r
isometry V acting on the weighted eigenvectors,

    |psi_i~> = sum_j V_ij sqrt(lambda_j) |e_j>,

so the roof is a minimization over isometries. The search moves V by
two-member rotations (coordinates of the unitary group acting on the
left) with a multi-restart coordinate descent. The result is always an upper bound on
the true roof.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .catalog import werner
from .errors import NumericError, ShapeError
from .measure import _check_subset, default_normalization, raw_sums_batch
from .state import DensityMatrix, PureState, to_density

log = logging.getLogger(__name__)

ISOMETRY_TOL = 1e-10
ZERO_WEIGHT = 1e-12
DEFAULT_K_CAP = 8


@dataclass(frozen=True, eq=False)
class EnsembleDecomposition:
    weights: np.ndarray
    states: tuple[PureState, ...]

    @property
    def k(self) -> int:
        return len(self.states)

    def reconstruct(self) -> np.ndarray:
        return sum(
            p * np.outer(s.amplitudes, s.amplitudes.conj())
            for p, s in zip(self.weights, self.states)
        )


@dataclass(frozen=True)
class RoofBudget:
    restarts: int = 32
    max_iterations: int = 200
    k_max: int | None = None
    initial_step: float = 0.5
    min_step: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ShapeError("roof budget must be positive")
        if self.k_max is not None and self.k_max < 1:
            raise ShapeError("k_max must be positive")


@dataclass(frozen=True, eq=False)
class RoofResult:
    """Best ensemble average found; an upper bound on the convex roof."""

    value: float
    ensemble: EnsembleDecomposition
    restarts: int
    iterations: int
    converged: bool
    spread: float
    eigen_value: float
    restart_values: tuple[float, ...] = field(default=())

    label = "roof (upper bound)"

    def as_dict(self) -> dict:
        return {
            "kind": self.label,
            "B": self.value,
            "eigendecomposition_B": self.eigen_value,
            "members": self.ensemble.k,
            "weights": [float(p) for p in self.ensemble.weights],
            "restarts": self.restarts,
            "iterations": self.iterations,
            "converged": self.converged,
            "spread": self.spread,
        }


def _eigen(rho: DensityMatrix, tol=1e-12):
    vals, vecs = np.linalg.eigh(rho.entries)
    keep = vals > tol
    # descending, so V = identity lists the largest weight first
    order = np.argsort(vals[keep])[::-1]
    return vals[keep][order], vecs[:, keep][:, order]


def _unnormalized_members(vals, vecs, V) -> np.ndarray:
    return V @ (np.sqrt(vals)[:, None] * vecs.T)


def ensemble_from_parameters(rho: DensityMatrix, mixing: np.ndarray) -> EnsembleDecomposition:
    """Ensemble generated by the k x r isometry ``mixing`` over the eigenbasis of rho."""
    vals, vecs = _eigen(rho)
    r = len(vals)
    V = np.asarray(mixing, dtype=complex)
    if V.ndim != 2 or V.shape[1] != r:
        raise ShapeError(f"mixing matrix must have r = {r} columns, got shape {V.shape}")
    if V.shape[0] < r:
        raise ShapeError(f"need k >= rank = {r} members, got {V.shape[0]}")
    if np.max(np.abs(V.conj().T @ V - np.eye(r))) > ISOMETRY_TOL:
        raise ShapeError("mixing matrix does not have orthonormal columns")
    tilde = _unnormalized_members(vals, vecs, V)
    weights = np.sum(np.abs(tilde) ** 2, axis=1)
    keep = weights >= ZERO_WEIGHT
    states = tuple(PureState(rho.register, row) for row in tilde[keep])
    return EnsembleDecomposition(weights[keep] / weights[keep].sum(), states)


class _Ensemble:
    """Mutable working ensemble: k unnormalized member rows and their contributions."""

    def __init__(self, rows: np.ndarray, dims, subset, normalization: float):
        self.rows = np.array(rows, dtype=complex)
        self.dims = dims
        self.subset = subset
        self.normalization = normalization
        self.evaluations = 0
        self.contrib = self.contributions(self.rows)

    def contributions(self, rows: np.ndarray) -> np.ndarray:
        """p_i B(psi_i) for each (unnormalized) row; zero-weight rows contribute 0."""
        self.evaluations += 1
        weights = np.sum(np.abs(rows) ** 2, axis=1)
        out = np.zeros(len(rows))
        keep = weights >= ZERO_WEIGHT
        if np.any(keep):
            psi = rows[keep] / np.sqrt(weights[keep])[:, None]
            sums = raw_sums_batch(psi, self.dims, self.subset)
            out[keep] = weights[keep] * sums / self.normalization
        if not np.all(np.isfinite(out)):
            raise NumericError("roof objective evaluated to a non-finite value")
        return out

    @property
    def value(self) -> float:
        return float(np.sum(self.contrib))

    def refresh(self):
        self.contrib = self.contributions(self.rows)


def _pair_rotations(step: float) -> list[np.ndarray]:
    """The four 2x2 unitaries exp(+/- i step G) for G = sigma_y-like and sigma_x-like mixers."""
    c, s = math.cos(step), math.sin(step)
    return [
        np.array([[c, -s], [s, c]], dtype=complex),
        np.array([[c, s], [-s, c]], dtype=complex),
        np.array([[c, 1j * s], [1j * s, c]]),
        np.array([[c, -1j * s], [-1j * s, c]]),
    ]


def _round_robin(k: int) -> list[list[tuple[int, int]]]:
    """Schedule all k(k-1)/2 member pairs into rounds of disjoint pairs (circle method)."""
    players = list(range(k)) + ([None] if k % 2 else [])
    n = len(players)
    rounds = []
    for _ in range(n - 1):
        pairs = []
        for i in range(n // 2):
            a, b = players[i], players[n - 1 - i]
            if a is not None and b is not None:
                pairs.append((min(a, b), max(a, b)))
        rounds.append(pairs)
        players = [players[0], players[-1], *players[1:-1]]
    return [r for r in rounds if r]


def _coordinate_search(ens: _Ensemble, budget: RoofBudget):
    """Coordinate-wise search over pairwise member rotations with step halving.

    Each coordinate is a rotation mixing two members a, b of the ensemble
    (real or imaginary mixer, both signs), applied on the left of the
    current isometry. Pairs within a round are disjoint, so their trials
    are evaluated together and accepted independently. Returns
    (sweeps, converged); converged means a full sweep at the finest step
    improved the value by less than 1e-10.
    """
    rounds = _round_robin(len(ens.rows))
    step = budget.initial_step
    for sweep in range(1, budget.max_iterations + 1):
        start = ens.value
        rotations = np.array(_pair_rotations(step))  # (4, 2, 2)
        for pairs in rounds:
            idx = np.array(pairs)  # (p, 2)
            old = ens.rows[idx]  # (p, 2, D)
            trials = np.einsum("uab,pbd->puad", rotations, old)
            contrib = ens.contributions(trials.reshape(-1, old.shape[-1]))
            contrib = contrib.reshape(len(pairs), len(rotations), 2)
            gain = ens.contrib[idx].sum(axis=1)[:, None] - contrib.sum(axis=2)
            for p, (a, b) in enumerate(pairs):
                best = int(np.argmax(gain[p]))
                if gain[p, best] > 0:
                    ens.rows[[a, b]] = trials[p, best]
                    ens.contrib[[a, b]] = contrib[p, best]
        ens.refresh()
        if start - ens.value < 1e-10:
            if step <= budget.min_step:
                return sweep, True
            step *= 0.5
    return budget.max_iterations, False


def roof_B(
    rho: DensityMatrix | PureState,
    subset: Sequence[int],
    budget: RoofBudget | None = None,
    seed: int = 0,
    normalization: float | None = None,
) -> RoofResult:
    """Minimize the ensemble average of B^(m) over decompositions of rho.

    Restart 0 starts from the eigendecomposition (padded with empty members
    up to k); later restarts start from Haar-random isometries drawn from
    per-restart child seeds, so results are reproducible for a fixed
    ``seed``.
    """
    if isinstance(rho, PureState):
        rho = to_density(rho)
    budget = budget or RoofBudget()
    subset = _check_subset(rho.register, subset, 2)
    if normalization is None:
        normalization = default_normalization(rho.register, subset)
    vals, vecs = _eigen(rho)
    r = len(vals)
    k = budget.k_max if budget.k_max is not None else min(r * r, DEFAULT_K_CAP)
    k = max(k, r)

    eigen_rows = _unnormalized_members(vals, vecs, np.eye(k, r))
    eigen_value = _Ensemble(eigen_rows, rho.dims, subset, normalization).value
    best_rows, best_value, best_converged = eigen_rows, eigen_value, True
    restart_values = []
    total_sweeps = 0
    children = np.random.SeedSequence(seed).spawn(budget.restarts)
    for i, child in enumerate(children):
        if i == 0 or k == 1:
            V = np.eye(k, r)
        else:
            V = unitary_group.rvs(k, random_state=np.random.default_rng(child))[:, :r]
        ens = _Ensemble(_unnormalized_members(vals, vecs, V), rho.dims, subset, normalization)
        sweeps, converged = _coordinate_search(ens, budget)
        total_sweeps += sweeps
        restart_values.append(ens.value)
        log.debug("restart %d: value %.3e after %d sweeps", i, ens.value, sweeps)
        if ens.value < best_value:
            best_rows, best_value, best_converged = ens.rows.copy(), ens.value, converged
    # recover the isometry: rows = V diag(sqrt(vals)) vecs^T
    V = best_rows @ vecs.conj() / np.sqrt(vals)[None, :]
    ensemble = ensemble_from_parameters(rho, _polish_isometry(V))
    return RoofResult(
        value=best_value,
        ensemble=ensemble,
        restarts=budget.restarts,
        iterations=total_sweeps,
        converged=best_converged,
        spread=float(max(restart_values) - min(restart_values)),
        eigen_value=eigen_value,
        restart_values=tuple(restart_values),
    )


def _polish_isometry(V: np.ndarray) -> np.ndarray:
    """Remove accumulated rounding from a product of many rotations (polar factor)."""
    u, _, vh = np.linalg.svd(V, full_matrices=False)
    return u @ vh


def werner_direct_B(F: float) -> float:
    """Closed form (4F - 1)**2 / 9 of the direct (non-roof) measure on a Werner state."""
    F = float(F)
    if not 0.0 <= F <= 1.0:
        raise ShapeError(f"fidelity must lie in [0, 1], got {F}")
    return (4.0 * F - 1.0) ** 2 / 9.0


def werner_roof(F: float, **kwargs) -> RoofResult:
    return roof_B(werner(F), (1, 2), **kwargs)
