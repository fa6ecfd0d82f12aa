"""Named states used throughout the tables and tests."""
from __future__ import annotations

import numpy as np

from .errors import ParseError, ShapeError
from .ketparse import parse_ket_expression
from .state import DensityMatrix, PureState, QuditRegister, tensor_product, to_density

NAMES = ("bell", "ghz", "w", "phi4", "phi6", "werner", "product")


def bell() -> PureState:
    """Singlet (|01> - |10>)/sqrt(2)."""
    return parse_ket_expression("(|01> - |10>)/sqrt(2)")


def ghz(n: int, d: int = 2) -> PureState:
    """(sum_k |k...k>)/sqrt(d) on n sites of dimension d."""
    if n < 2:
        raise ShapeError(f"ghz needs n >= 2, got {n}")
    register = QuditRegister((d,) * n)
    amps = np.zeros(register.total_dim, dtype=complex)
    for k in range(d):
        amps[np.ravel_multi_index((k,) * n, register.dims)] = 1.0
    return PureState(register, amps)


def w(n: int) -> PureState:
    if n < 2:
        raise ShapeError(f"w needs n >= 2, got {n}")
    register = QuditRegister.qubits(n)
    amps = np.zeros(register.total_dim, dtype=complex)
    amps[[1 << k for k in range(n)]] = 1.0
    return PureState(register, amps)


def phi4() -> PureState:
    return parse_ket_expression("(|0000> + |0011> + |1100> - |1111>)/2")


def phi6() -> PureState:
    return parse_ket_expression(
        "(|0011> + |0101> + |1001> + |1010> + |0110> + |1100>)/sqrt(6)"
    )


def werner(F: float) -> DensityMatrix:
    """F |psi-><psi-| + (1 - F)/3 (I - |psi-><psi-|), parametrized by singlet fidelity."""
    F = float(F)
    if not 0.0 <= F <= 1.0:
        raise ShapeError(f"werner fidelity must lie in [0, 1], got {F}")
    singlet = to_density(bell()).entries
    rho = F * singlet + (1.0 - F) / 3.0 * (np.eye(4) - singlet)
    return DensityMatrix(QuditRegister((2, 2)), rho)


def product(*states: PureState) -> PureState:
    return tensor_product(*states)


def catalog_state(name: str, *args, **params) -> PureState | DensityMatrix:
    """Look up a named state: ``catalog_state("ghz", 3)``, ``catalog_state("werner", F=0.3)``."""
    builders = {
        "bell": bell,
        "ghz": ghz,
        "w": w,
        "phi4": phi4,
        "phi6": phi6,
        "werner": werner,
        "product": product,
    }
    try:
        builder = builders[name.lower()]
    except KeyError:
        raise ParseError(f"unknown state {name!r}; known: {', '.join(NAMES)}") from None
    try:
        return builder(*args, **params)
    except TypeError as exc:
        raise ShapeError(f"bad parameters for {name!r}: {exc}") from exc
