"""Randomized checks of the measure's structural properties."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .measure import connected_tensor, measure_B
from .randomness import haar_state, haar_unitary, product_state, random_density, random_subset
from .state import apply_local, permute_sites, tensor_product

CHECKS = ("separable-zero", "nonneg", "lu-invariance", "product-cut", "permutation")

THRESHOLDS = {
    "separable-zero": 1e-10,
    "nonneg": 0.0,
    "lu-invariance": 1e-9,
    "product-cut": 1e-10,
    "permutation": 1e-12,
}


@dataclass
class PropertyReport:
    check: str
    trials: int
    seed: int
    worst: float
    threshold: float
    passed: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "PropertyReport":
        return cls(**json.loads(text))


def _register(rng) -> tuple[int, ...]:
    """Two to five qubits, or two to three qutrits (one local dimension per trial)."""
    if rng.random() < 0.8:
        return (2,) * int(rng.integers(2, 6))
    return (3,) * int(rng.integers(2, 4))


def _separable_zero(rng) -> float:
    dims = _register(rng)
    state = product_state(dims, rng)
    return measure_B(state, random_subset(len(dims), rng)).value


def _nonneg(rng) -> float:
    dims = _register(rng)
    if rng.random() < 0.5 or len(dims) > 3:
        state = haar_state(dims, rng)
    else:
        state = random_density(dims, rng)
    # reported as a deviation: how far below zero B went
    return max(0.0, -measure_B(state, random_subset(len(dims), rng)).value)


def _lu_invariance(rng) -> float:
    dims = _register(rng)
    state = haar_state(dims, rng)
    subset = random_subset(len(dims), rng)
    rotated = apply_local(state, [haar_unitary(d, rng) for d in dims])
    return abs(measure_B(state, subset).value - measure_B(rotated, subset).value)


def _product_cut(rng) -> float:
    n_a = int(rng.integers(1, 4))
    n_b = int(rng.integers(1, 4))
    state = tensor_product(haar_state((2,) * n_a, rng), haar_state((2,) * n_b, rng))
    n = n_a + n_b
    while True:
        subset = random_subset(n, rng)
        if any(s <= n_a for s in subset) and any(s > n_a for s in subset):
            break
    return float(np.max(np.abs(connected_tensor(state, subset).values)))


def _permutation(rng) -> float:
    dims = _register(rng)
    state = haar_state(dims, rng)
    subset = random_subset(len(dims), rng)
    order = [int(x) + 1 for x in rng.permutation(len(dims))]
    relabeled = permute_sites(state, order)
    # old site s now sits at position order.index(s) + 1
    moved = [order.index(s) + 1 for s in subset]
    return abs(measure_B(state, subset).value - measure_B(relabeled, moved).value)


_RUNNERS: dict[str, Callable[[np.random.Generator], float]] = {
    "separable-zero": _separable_zero,
    "nonneg": _nonneg,
    "lu-invariance": _lu_invariance,
    "product-cut": _product_cut,
    "permutation": _permutation,
}


def run_check(check: str, trials: int = 100, seed: int = 0) -> PropertyReport:
    """Run ``trials`` randomized instances of ``check``; worst is the largest deviation seen."""
    if check not in _RUNNERS:
        raise ValueError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
    rng = np.random.default_rng(seed)
    worst = max(_RUNNERS[check](rng) for _ in range(trials))
    threshold = THRESHOLDS[check]
    passed = worst <= threshold if check == "nonneg" else worst < threshold
    return PropertyReport(check, trials, seed, float(worst), threshold, bool(passed))
