"""Reference entanglement quantities used to cross-check B^(m)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ShapeError
from .state import DensityMatrix, PureState, to_density

_SY = np.array([[0, -1j], [1j, 0]])
_SPIN_FLIP = np.kron(_SY, _SY)


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    roots: tuple[float, float, float, float]


def concurrence(rho: DensityMatrix | PureState) -> ConcurrenceResult:
    """Wootters concurrence of a two-qubit state.

    The roots are square roots of the eigenvalues of
    rho (Y⊗Y) rho* (Y⊗Y), with complex conjugation taken in the
    computational basis, sorted in decreasing order. They are computed as
    singular values of A^T (Y⊗Y) A for rho = A A^dagger, which avoids the
    square-root blow-up of rounding noise near zero eigenvalues.
    """
    rho = to_density(rho)
    if rho.dims != (2, 2):
        raise ShapeError(f"concurrence needs a two-qubit register, got {list(rho.dims)}")
    vals, vecs = np.linalg.eigh(rho.entries)
    a = vecs * np.sqrt(np.clip(vals, 0.0, None))[None, :]
    roots = np.linalg.svd(a.T @ _SPIN_FLIP @ a, compute_uv=False)
    roots = np.concatenate([roots, np.zeros(4 - len(roots))])
    value = max(0.0, roots[0] - roots[1] - roots[2] - roots[3])
    return ConcurrenceResult(float(min(value, 1.0)), tuple(float(x) for x in roots))


def partial_transpose(rho: DensityMatrix | PureState, sites: Sequence[int]) -> np.ndarray:
    """Matrix of rho with the transpose taken on ``sites`` (1-based)."""
    rho = to_density(rho)
    sites = rho.register.check_sites(sites)
    n = rho.n_sites
    perm = list(range(2 * n))
    for s in sites:
        perm[s - 1], perm[n + s - 1] = n + s - 1, s - 1
    dim = rho.register.total_dim
    return rho.as_tensor().transpose(perm).reshape(dim, dim)


def ppt_min_eigenvalue(rho: DensityMatrix | PureState, sites: Sequence[int]) -> float:
    """Smallest eigenvalue of the partial transpose over ``sites``.

    Negative values certify entanglement across the cut; for 2x2 and 2x3
    systems a nonnegative value certifies separability.
    """
    rho = to_density(rho)
    sites = rho.register.check_sites(sites)
    if len(sites) == rho.n_sites:
        raise ShapeError("bipartition must leave at least one site on the other side")
    return float(np.linalg.eigvalsh(partial_transpose(rho, sites)).min())
