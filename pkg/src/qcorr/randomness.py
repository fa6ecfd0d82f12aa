"""Seeded random states and local unitaries for property checks."""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .state import DensityMatrix, PureState, QuditRegister, tensor_product


def haar_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    register = QuditRegister(tuple(dims))
    z = rng.normal(size=register.total_dim) + 1j * rng.normal(size=register.total_dim)
    return PureState(register, z)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng)


def product_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    """Fully separable state: an independent Haar state on every site."""
    return tensor_product(*(haar_state([d], rng) for d in dims))


def random_density(dims: Sequence[int], rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Mixture of ``rank`` Haar states with Dirichlet weights."""
    register = QuditRegister(tuple(dims))
    rank = rank or register.total_dim
    weights = rng.dirichlet(np.ones(rank))
    rho = np.zeros((register.total_dim,) * 2, dtype=complex)
    for p in weights:
        psi = haar_state(dims, rng).amplitudes
        rho += p * np.outer(psi, psi.conj())
    return DensityMatrix(register, (rho + rho.conj().T) / 2)


def random_subset(n_sites: int, rng: np.random.Generator, min_size: int = 2, max_size: int | None = None):
    max_size = min(max_size or n_sites, n_sites)
    m = int(rng.integers(min_size, max_size + 1))
    return tuple(int(s) for s in rng.choice(np.arange(1, n_sites + 1), size=m, replace=False))
