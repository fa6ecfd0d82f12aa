"""Dense multi-qudit states: registers, pure states and density matrices.

Sites are labelled 1..n. Site 1 is the most significant digit of a basis
ket, so ``|01>`` on a two-qubit register is amplitude index 1.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericError, ParseError, ShapeError

#: Largest total Hilbert-space dimension accepted for dense storage.
MAX_TOTAL_DIMENSION = 1 << 20

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class QuditRegister:
    """Ordered per-site local dimensions."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ShapeError("register needs at least one site")
        if any(d < 2 for d in dims):
            raise ShapeError(f"every site dimension must be >= 2, got {list(dims)}")
        total = math.prod(dims)
        if total > MAX_TOTAL_DIMENSION:
            raise ShapeError(
                f"total dimension {total} exceeds the dense limit {MAX_TOTAL_DIMENSION}"
            )
        object.__setattr__(self, "dims", dims)

    @classmethod
    def qubits(cls, n: int) -> "QuditRegister":
        return cls((2,) * n)

    @property
    def n_sites(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def __len__(self):
        return len(self.dims)

    def __add__(self, other: "QuditRegister") -> "QuditRegister":
        return QuditRegister(self.dims + other.dims)

    def check_sites(self, sites: Iterable[int], *, allow_empty=False) -> tuple[int, ...]:
        """Validate a 1-based site list and return it as a tuple (order kept)."""
        sites = tuple(int(s) for s in sites)
        if not sites and not allow_empty:
            raise ShapeError("site subset must be nonempty")
        if len(set(sites)) != len(sites):
            raise ShapeError(f"duplicate sites in {list(sites)}")
        bad = [s for s in sites if not 1 <= s <= self.n_sites]
        if bad:
            raise ShapeError(f"sites {bad} out of range 1..{self.n_sites}")
        return sites

    def subregister(self, sites: Sequence[int]) -> "QuditRegister":
        return QuditRegister(tuple(self.dims[s - 1] for s in sites))


def _as_register(dims) -> QuditRegister:
    if isinstance(dims, QuditRegister):
        return dims
    return QuditRegister(tuple(dims))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector on a register.

    The constructor normalizes its input; the zero vector is rejected.
    """

    register: QuditRegister
    amplitudes: np.ndarray

    def __post_init__(self):
        register = _as_register(self.register)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != register.total_dim:
            raise ShapeError(
                f"{amps.size} amplitudes do not fit register {list(register.dims)}"
            )
        if not np.all(np.isfinite(amps)):
            raise NumericError("amplitudes must be finite")
        norm = np.linalg.norm(amps)
        if norm < 1e-300:
            raise NumericError("cannot normalize the zero vector")
        amps = amps / norm
        object.__setattr__(self, "register", register)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.register.dims

    @property
    def n_sites(self) -> int:
        return self.register.n_sites

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per site."""
        return self.amplitudes.reshape(self.dims)

    def allclose(self, other: "PureState", atol=1e-12) -> bool:
        return self.dims == other.dims and np.allclose(
            self.amplitudes, other.amplitudes, rtol=0, atol=atol
        )

    def render(self, tol=0.0) -> str:
        """Ket-expression text that parses back to this state."""
        terms = []
        for idx in np.flatnonzero(np.abs(self.amplitudes) > tol):
            digits = "".join(str(k) for k in np.unravel_index(idx, self.dims))
            amp = self.amplitudes[idx]
            for part, suffix in ((amp.real, ""), (amp.imag, "i")):
                if part != 0.0:
                    sign = "-" if part < 0 else "+"
                    terms.append(f"{sign} {float(abs(part))!r}{suffix}*|{digits}>")
        text = " ".join(terms)
        return text[2:] if text.startswith("+ ") else text

    def __repr__(self):
        return f"PureState(dims={list(self.dims)}, {self.render(tol=1e-14)})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator on a register."""

    register: QuditRegister
    entries: np.ndarray

    def __post_init__(self):
        register = _as_register(self.register)
        rho = np.asarray(self.entries, dtype=np.complex128)
        n = register.total_dim
        if rho.shape != (n, n):
            raise ShapeError(f"density matrix shape {rho.shape} does not match dimension {n}")
        if not np.all(np.isfinite(rho)):
            raise NumericError("density matrix entries must be finite")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise NumericError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise NumericError(f"density matrix trace is {tr}, expected 1")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise NumericError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "register", register)
        object.__setattr__(self, "entries", _frozen(rho))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.register.dims

    @property
    def n_sites(self) -> int:
        return self.register.n_sites

    def as_tensor(self) -> np.ndarray:
        """Entries reshaped to (row axes..., column axes...)."""
        return self.entries.reshape(self.dims + self.dims)

    def rank(self, tol=1e-10) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.entries) > tol))

    def to_json(self) -> str:
        flat = self.entries.reshape(-1)
        return json.dumps(
            {"dims": list(self.dims), "entries": [[z.real, z.imag] for z in flat]}
        )

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        try:
            obj = json.loads(text)
            dims = [int(d) for d in obj["dims"]]
            flat = np.array([complex(re, im) for re, im in obj["entries"]])
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseError(f"invalid density-matrix JSON: {exc}") from exc
        register = QuditRegister(tuple(dims))
        n = register.total_dim
        if flat.size != n * n:
            raise ShapeError(f"expected {n * n} entries for dims {dims}, got {flat.size}")
        return cls(register, flat.reshape(n, n))


State = PureState | DensityMatrix


def basis_state(digits: Sequence[int], dims: Sequence[int] | None = None) -> PureState:
    """Computational basis state ``|digits>``."""
    dims = tuple(dims) if dims is not None else (2,) * len(digits)
    register = QuditRegister(dims)
    if len(digits) != len(dims):
        raise ShapeError("one digit per site required")
    amps = np.zeros(register.total_dim, dtype=complex)
    amps[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return PureState(register, amps)


def tensor_product(*states: PureState) -> PureState:
    """Kronecker product of pure states; registers concatenate."""
    if not states:
        raise ShapeError("tensor_product needs at least one state")
    register = QuditRegister(sum((s.dims for s in states), ()))
    amps = states[0].amplitudes
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
    return PureState(register, amps)


def to_density(state: PureState | DensityMatrix) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    psi = state.amplitudes
    return DensityMatrix(state.register, np.outer(psi, psi.conj()))


def reduced_tensor(state: PureState | DensityMatrix, keep: Sequence[int]) -> np.ndarray:
    """Reduced density operator on ``keep`` (1-based, order as given) in tensor form.

    Returns an array of shape ``(d_k1, ..., d_km, d_k1, ..., d_km)``.
    """
    keep = state.register.check_sites(keep)
    n = state.n_sites
    axes = [k - 1 for k in keep]
    rest = [a for a in range(n) if a not in axes]
    if isinstance(state, PureState):
        psi = state.as_tensor()
        red = np.tensordot(psi, psi.conj(), axes=(rest, rest))
    else:
        red = state.as_tensor()
        # highest site first so the remaining axis numbers stay valid
        for a in sorted(rest, reverse=True):
            red = np.trace(red, axis1=a, axis2=a + red.ndim // 2)
    # red now carries the kept sites in ascending order
    ascending = sorted(axes)
    order = [ascending.index(a) for a in axes]
    m = len(order)
    return red.transpose(order + [m + o for o in order])


def partial_trace(rho: PureState | DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on ``keep``; kept sites stay in their original relative order."""
    keep = rho.register.check_sites(keep)
    keep = tuple(sorted(keep))
    sub = rho.register.subregister(keep)
    red = reduced_tensor(rho, keep).reshape(sub.total_dim, sub.total_dim)
    return DensityMatrix(sub, red)


def permute_sites(state: PureState, order: Sequence[int]) -> PureState:
    """Relabel sites: new site j is old site ``order[j-1]``."""
    order = state.register.check_sites(order)
    if len(order) != state.n_sites:
        raise ShapeError("permutation must list every site exactly once")
    psi = state.as_tensor().transpose([o - 1 for o in order])
    return PureState(state.register.subregister(order), psi.reshape(-1))


def apply_local(state: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Apply one operator per site (U_1 ⊗ ... ⊗ U_n) by local contraction."""
    if len(unitaries) != state.n_sites:
        raise ShapeError("need one operator per site")
    psi = state.as_tensor()
    for axis, u in enumerate(unitaries):
        psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [axis])), 0, axis)
    return PureState(state.register, psi.reshape(-1))
