"""Correlation-tensor entanglement measure B^(m) for multi-qudit states."""

from .baselines import concurrence, partial_transpose, ppt_min_eigenvalue
from .basis import expectation, generator_basis, local_mean
from .catalog import bell, catalog_state, ghz, phi4, phi6, w, werner
from .errors import NumericError, ParseError, QcorrError, ShapeError
from .ketparse import parse_ket_expression
from .measure import (
    CorrelationTensor,
    MeasureResult,
    calibrate_normalization,
    connected_tensor,
    correlation_tensor,
    measure_B,
    raw_sum,
)
from .partitions import enumerate_partitions_min2
from .roof import (
    EnsembleDecomposition,
    RoofBudget,
    RoofResult,
    ensemble_from_parameters,
    roof_B,
    werner_direct_B,
)
from .state import (
    DensityMatrix,
    PureState,
    QuditRegister,
    basis_state,
    partial_trace,
    tensor_product,
    to_density,
)

__all__ = [
    "CorrelationTensor",
    "DensityMatrix",
    "EnsembleDecomposition",
    "MeasureResult",
    "NumericError",
    "ParseError",
    "PureState",
    "QcorrError",
    "QuditRegister",
    "RoofBudget",
    "RoofResult",
    "ShapeError",
    "basis_state",
    "bell",
    "calibrate_normalization",
    "catalog_state",
    "concurrence",
    "connected_tensor",
    "correlation_tensor",
    "ensemble_from_parameters",
    "enumerate_partitions_min2",
    "expectation",
    "generator_basis",
    "ghz",
    "local_mean",
    "measure_B",
    "parse_ket_expression",
    "partial_trace",
    "partial_transpose",
    "phi4",
    "phi6",
    "ppt_min_eigenvalue",
    "raw_sum",
    "roof_B",
    "tensor_product",
    "to_density",
    "w",
    "werner",
    "werner_direct_B",
]
