"""Correlation tensors, connected tensors and the measure B^(m).

For a subset S of sites the correlation tensor is

    M_{i j ...}(S) = < (g_i - lambda_i) ⊗ (g_j - lambda_j) ⊗ ... >

with lambda the single-site means. The connected tensor subtracts every
factorization of M over partitions of S into blocks of size >= 2, and

    B^(m)(S) = sum(M'**2) / N(m)

where N(m) is fixed by requiring B^(m)(GHZ_m) = 1.

All internal routines carry a leading batch axis so that many pure states
(e.g. an ensemble decomposition) are evaluated in one pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

from .basis import _LETTERS, _real, contract_sites, generator_basis
from .errors import NumericError, ShapeError
from .partitions import enumerate_partitions_min2
from .state import DensityMatrix, PureState, QuditRegister, reduced_tensor

#: Default cap on |S|; the dense tensor has prod(d^2 - 1) entries.
DEFAULT_MAX_SITES = 8


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    subset: tuple[int, ...]
    values: np.ndarray
    connected: bool = False

    @property
    def m(self) -> int:
        return len(self.subset)

    def __getitem__(self, idx):
        return self.values[idx]


@dataclass(frozen=True)
class MeasureResult:
    subset: tuple[int, ...]
    raw_sum: float
    normalization: float
    value: float

    @property
    def m(self) -> int:
        return len(self.subset)

    def as_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "m": self.m,
            "B": self.value,
            "raw_sum": self.raw_sum,
            "normalization": self.normalization,
        }


# ----------------------------------------------------------------- helpers


def _check_subset(register: QuditRegister, subset, min_size=1, max_sites=DEFAULT_MAX_SITES):
    subset = register.check_sites(subset)
    if len(subset) < min_size:
        raise ShapeError(f"subset {list(subset)} needs at least {min_size} sites")
    if max_sites is not None and len(subset) > max_sites:
        raise ShapeError(
            f"subset of {len(subset)} sites exceeds max_sites={max_sites}; raise the cap explicitly"
        )
    return subset


def reduced_batch(psi: np.ndarray, dims: Sequence[int], subset: Sequence[int]) -> np.ndarray:
    """Reduced operators on ``subset`` for a batch of state vectors of shape (batch, prod(dims))."""
    dims = tuple(dims)
    n = len(dims)
    psi = psi.reshape((-1,) + dims)
    ket = _LETTERS[:n]
    bra = list(ket)
    for s in subset:
        bra[s - 1] = _LETTERS[n + s - 1]
    out = "".join(ket[s - 1] for s in subset) + "".join(bra[s - 1] for s in subset)
    return np.einsum(f"Z{ket},Z{''.join(bra)}->Z{out}", psi, psi.conj())


def _trace_to(red: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Restrict a batched reduced operator over positions 0..m-1 to positions ``keep``."""
    m = (red.ndim - 1) // 2
    rows = list(_LETTERS[:m])
    cols = list(_LETTERS[m:2 * m])
    for p in range(m):
        if p not in keep:
            cols[p] = rows[p]
    out = "".join(rows[p] for p in keep) + "".join(cols[p] for p in keep)
    return np.einsum(f"Z{''.join(rows)}{''.join(cols)}->Z{out}", red)


def _site_means(red: np.ndarray, dims: Sequence[int]) -> list[np.ndarray]:
    """lambda_i(alpha) for each position: list of real arrays of shape (batch, d^2-1)."""
    means = []
    for p, d in enumerate(dims):
        single = _trace_to(red, [p])
        vals = contract_sites(single, [generator_basis(d)])
        means.append(_real(vals))
    return means


def _shifted_ops(red: np.ndarray, dims: Sequence[int]) -> list[np.ndarray]:
    ops = []
    for d, lam in zip(dims, _site_means(red, dims)):
        g = generator_basis(d)[None]
        ops.append(g - lam[:, :, None, None] * np.eye(d)[None, None])
    return ops


def _raw_direct(red: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    return _real(contract_sites(red, _shifted_ops(red, dims)))


def _extended_expectations(red: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Real tensor of <O_1 ⊗ ... ⊗ O_m> with O_k in (I, g_1, ..., g_{d^2-1}).

    Index 0 on an axis means identity there, so every marginal expectation
    over a sub-block is a slice of this one tensor.
    """
    ext = [np.concatenate([np.eye(d, dtype=complex)[None], generator_basis(d)]) for d in dims]
    return _real(contract_sites(red, ext))


def _raw_from_extended(full: np.ndarray, block: Sequence[int]) -> np.ndarray:
    """Correlation tensor of ``block`` by expanding the product of shifted operators."""
    m = full.ndim - 1
    index = (slice(None),) + tuple(slice(None) if p in block else 0 for p in range(m))
    marg = full[index]
    b = len(block)
    means = []
    for q in range(b):
        sel = (slice(None),) + tuple(slice(1, None) if r == q else 0 for r in range(b))
        means.append(marg[sel])
    batch = full.shape[0]
    out = np.zeros((batch,) + tuple(n - 1 for n in marg.shape[1:]))
    for mask in range(1 << b):
        sel = (slice(None),) + tuple(
            slice(1, None) if mask >> q & 1 else slice(0, 1) for q in range(b)
        )
        term = marg[sel]
        for q in range(b):
            if not mask >> q & 1:
                shape = [batch] + [1] * b
                shape[q + 1] = -1
                term = term * (-means[q]).reshape(shape)
        out = out + term
    return out


def _raw_inclusion_exclusion(red: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Same tensor as :func:`_raw_direct`, expanded as a signed sum over sub-products."""
    return _raw_from_extended(_extended_expectations(red, dims), range(len(dims)))


def _outer(blocks: Sequence[tuple[int, ...]], tensors: Sequence[np.ndarray], m: int) -> np.ndarray:
    specs = ["Z" + "".join(_LETTERS[p] for p in block) for block in blocks]
    return np.einsum(",".join(specs) + "->Z" + _LETTERS[:m], *tensors)


def _connected(red: np.ndarray, dims: Sequence[int], recursive: bool = True) -> np.ndarray:
    m = len(dims)
    full = _extended_expectations(red, dims)
    cache: dict[tuple[int, ...], np.ndarray] = {}

    def raw(block):
        return _raw_from_extended(full, block)

    def conn(block):
        if block in cache:
            return cache[block]
        value = raw(block)
        if len(block) >= 4:
            for part in enumerate_partitions_min2(block):
                factors = [conn(b) if recursive else raw(b) for b in part]
                local = [tuple(block.index(p) for p in b) for b in part]
                value = value - _outer(local, factors, len(block))
        cache[block] = value
        return value

    return conn(tuple(range(m)))


def _reduce_state(state: PureState | DensityMatrix, subset: Sequence[int]) -> np.ndarray:
    return reduced_tensor(state, subset)[None, ...]


# ---------------------------------------------------------------- public API


def correlation_tensor(
    state: PureState | DensityMatrix,
    subset: Sequence[int],
    method: str = "direct",
    max_sites: int | None = DEFAULT_MAX_SITES,
) -> CorrelationTensor:
    """Tensor of shifted-operator expectations over ``subset``.

    ``method="direct"`` contracts the shifted local operators against the
    reduced state; ``method="expansion"`` sums raw multi-site expectations
    times products of minus the means. The two agree to rounding.
    """
    subset = _check_subset(state.register, subset, 1, max_sites)
    dims = [state.dims[s - 1] for s in subset]
    red = _reduce_state(state, subset)
    if method == "direct":
        values = _raw_direct(red, dims)
    elif method == "expansion":
        values = _raw_inclusion_exclusion(red, dims)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CorrelationTensor(subset, values[0])


def connected_tensor(
    state: PureState | DensityMatrix,
    subset: Sequence[int],
    recursive: bool = True,
    max_sites: int | None = DEFAULT_MAX_SITES,
) -> CorrelationTensor:
    """Connected correlation tensor M'(S).

    Block factors use M' recursively (cumulant form). With
    ``recursive=False`` raw M is used inside each block instead; the two
    conventions coincide for |S| <= 5.
    """
    subset = _check_subset(state.register, subset, 2, max_sites)
    dims = [state.dims[s - 1] for s in subset]
    values = _connected(_reduce_state(state, subset), dims, recursive)
    return CorrelationTensor(subset, values[0], connected=True)


def raw_sum(state: PureState | DensityMatrix, subset: Sequence[int], **kwargs) -> float:
    """Sum of squared connected-tensor entries."""
    t = connected_tensor(state, subset, **kwargs).values
    return float(np.sum(t * t))


def raw_sums_batch(
    psi: np.ndarray, dims: Sequence[int], subset: Sequence[int], recursive: bool = True
) -> np.ndarray:
    """Raw sums for a batch of unnormalized-or-normalized vectors, shape (batch, prod(dims)).

    Rows must already be normalized; used by the convex-roof search.
    """
    red = reduced_batch(psi, dims, subset)
    t = _connected(red, [dims[s - 1] for s in subset], recursive)
    return np.sum(t.reshape(t.shape[0], -1) ** 2, axis=1)


@lru_cache(maxsize=None)
def _calibration(m: int, d: int) -> float:
    from .catalog import ghz

    return raw_sum(ghz(m, d), range(1, m + 1), max_sites=None)


def calibrate_normalization(m: int, d: int = 2) -> float:
    """Normalization N(m) = raw sum of the m-site GHZ state of local dimension d.

    This is the constant that sets B^(m)(GHZ_m) = 1.
    """
    m, d = int(m), int(d)
    if m < 2:
        raise ShapeError(f"normalization needs m >= 2, got {m}")
    if d < 2:
        raise ShapeError(f"local dimension must be >= 2, got {d}")
    return _calibration(m, d)


def default_normalization(register: QuditRegister, subset: Sequence[int]) -> float:
    dims = {register.dims[s - 1] for s in subset}
    if len(dims) != 1:
        raise ShapeError(
            "subset mixes local dimensions; pass an explicit normalization"
        )
    return calibrate_normalization(len(subset), dims.pop())


def measure_B(
    state: PureState | DensityMatrix,
    subset: Sequence[int],
    normalization: float | None = None,
    max_sites: int | None = DEFAULT_MAX_SITES,
) -> MeasureResult:
    """B^(m) over ``subset`` (m = len(subset)).

    For a density matrix this is the direct evaluation with tr(rho .)
    expectations, not the convex roof.
    """
    subset = _check_subset(state.register, subset, 2, max_sites)
    if normalization is None:
        normalization = default_normalization(state.register, subset)
    if not normalization > 0:
        raise NumericError(f"normalization must be positive, got {normalization}")
    s = raw_sum(state, subset, max_sites=max_sites)
    return MeasureResult(subset, s, float(normalization), s / normalization)


def all_subsets(n_sites: int, m: int):
    """Every m-site subset of 1..n in lexicographic order."""
    return list(combinations(range(1, n_sites + 1), m))
