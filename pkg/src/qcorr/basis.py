"""Traceless Hermitian generator bases and local expectation values.

For every local dimension d the basis holds d**2 - 1 generators normalized
as tr(g_a g_b) = 2 delta_ab, so d = 2 gives the Pauli matrices (X, Y, Z).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .errors import NumericError, ShapeError
from .state import DensityMatrix, PureState, reduced_tensor

IMAG_TOL = 1e-10

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"

_PAULI_NAMES = {"x": 1, "y": 2, "z": 3}


@lru_cache(maxsize=None)
def _basis(d: int) -> np.ndarray:
    mats = []
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[j, k] = g[k, j] = 1.0
        mats.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[j, k], g[k, j] = -1j, 1j
        mats.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(complex))
    out = np.array(mats)
    out.flags.writeable = False
    return out


def generator_basis(d: int) -> np.ndarray:
    """Generators g_1..g_{d^2-1} of su(d) stacked as an array of shape (d^2-1, d, d).

    Ordering is symmetric off-diagonal pairs, antisymmetric pairs, then the
    diagonal generators, each pair family in lexicographic (j, k) order.
    """
    d = int(d)
    if d < 2:
        raise ShapeError(f"generator basis needs d >= 2, got {d}")
    return _basis(d)


def n_generators(d: int) -> int:
    return d * d - 1


def _generator_index(spec, d: int) -> int:
    """1-based generator index; 'x'/'y'/'z' accepted for qubits."""
    if isinstance(spec, str):
        key = spec.lower()
        if d != 2 or key not in _PAULI_NAMES:
            raise ShapeError(f"generator name {spec!r} only valid for qubits")
        return _PAULI_NAMES[key]
    i = int(spec)
    if not 1 <= i <= n_generators(d):
        raise ShapeError(f"generator index {i} out of range 1..{n_generators(d)}")
    return i


def contract_sites(red: np.ndarray, ops: Sequence[np.ndarray]) -> np.ndarray:
    """tr(rho O_1 ⊗ ... ⊗ O_m) for every choice of local operators.

    ``red`` has shape (batch, d_1..d_m, d_1..d_m); ``ops[k]`` has shape
    (batch, n_k, d_k, d_k) or (n_k, d_k, d_k). Returns complex values of
    shape (batch, n_1, ..., n_m).
    """
    m = len(ops)
    if 1 + 3 * m > len(_LETTERS):
        raise ShapeError(f"too many sites ({m}) for a single contraction")
    z = "Z"
    rows = _LETTERS[:m]
    cols = _LETTERS[m:2 * m]
    outs = _LETTERS[2 * m:3 * m]
    terms = [z + rows + cols]
    for k, op in enumerate(ops):
        prefix = z if op.ndim == 4 else ""
        terms.append(prefix + outs[k] + cols[k] + rows[k])
    spec = ",".join(terms) + "->" + z + outs
    return np.einsum(spec, red, *ops, optimize=m > 2)


def _batched_reduced(state: PureState | DensityMatrix, sites: Sequence[int]) -> np.ndarray:
    return reduced_tensor(state, sites)[None, ...]


def expectation(state: PureState | DensityMatrix, ops: Mapping[int, int | str]) -> float:
    """<⊗_alpha g_{i_alpha}(alpha)> with identity on every unlisted site.

    ``ops`` maps 1-based sites to 1-based generator indices (or 'x', 'y',
    'z' on qubits). The state is reduced to the listed sites and contracted
    locally; no full-register operator is formed.
    """
    sites = state.register.check_sites(list(ops), allow_empty=True)
    if not sites:
        return 1.0
    mats = []
    for s in sites:
        d = state.dims[s - 1]
        mats.append(generator_basis(d)[_generator_index(ops[s], d) - 1][None])
    value = contract_sites(_batched_reduced(state, sites), mats).reshape(-1)[0]
    return _real(value)


def local_mean(state: PureState | DensityMatrix, site: int, generator: int | str) -> float:
    """Single-site mean lambda_i(alpha)."""
    return expectation(state, {site: generator})


def _real(value, tol=IMAG_TOL):
    value = np.asarray(value)
    if np.max(np.abs(value.imag), initial=0.0) > tol:
        raise NumericError(
            f"expectation has imaginary part {np.max(np.abs(value.imag)):.3e}; "
            "operator or state is not Hermitian"
        )
    return float(value.real) if value.ndim == 0 else value.real
