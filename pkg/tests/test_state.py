import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_partial_trace
from qcorr import catalog
from qcorr.errors import NumericError, ParseError, ShapeError
from qcorr.ketparse import parse_ket_expression
from qcorr.randomness import haar_state, random_density
from qcorr.state import (
    DensityMatrix,
    PureState,
    QuditRegister,
    apply_local,
    basis_state,
    partial_trace,
    permute_sites,
    tensor_product,
    to_density,
)

S2 = 1 / np.sqrt(2)


def test_register_validation():
    assert QuditRegister((2, 3)).total_dim == 6
    with pytest.raises(ShapeError):
        QuditRegister(())
    with pytest.raises(ShapeError):
        QuditRegister((2, 1))
    with pytest.raises(ShapeError):
        QuditRegister((2,) * 40)  # far beyond the dense limit, rejected not wrapped


def test_pure_state_normalizes_and_rejects_zero():
    s = PureState(QuditRegister((2,)), [3, 4])
    assert np.isclose(np.linalg.norm(s.amplitudes), 1, atol=1e-12)
    assert np.allclose(s.amplitudes, [0.6, 0.8])
    with pytest.raises(NumericError):
        PureState(QuditRegister((2,)), [0, 0])
    with pytest.raises(ShapeError):
        PureState(QuditRegister((2, 2)), [1, 0])


def test_states_are_immutable():
    s = catalog.bell()
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1


def test_density_matrix_invariants():
    with pytest.raises(NumericError):
        DensityMatrix(QuditRegister((2,)), np.diag([0.5, 0.6]))
    with pytest.raises(NumericError):
        DensityMatrix(QuditRegister((2,)), np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(NumericError):
        DensityMatrix(QuditRegister((2,)), np.diag([1.5, -0.5]))


def test_catalog_states():
    assert np.allclose(catalog.bell().amplitudes, [0, S2, -S2, 0])
    ghz3 = catalog.ghz(3).amplitudes
    assert np.allclose(ghz3[[0, 7]], S2) and np.count_nonzero(ghz3) == 2
    phi4 = catalog.phi4().amplitudes
    assert np.allclose(phi4[[0b0000, 0b0011, 0b1100, 0b1111]], [0.5, 0.5, 0.5, -0.5])
    phi6 = catalog.phi6().amplitudes
    assert sorted(np.flatnonzero(phi6)) == [3, 5, 6, 9, 10, 12]
    assert np.allclose(catalog.w(3).amplitudes[[1, 2, 4]], 1 / np.sqrt(3))


def test_werner_limits():
    assert np.allclose(catalog.werner(1.0).entries, to_density(catalog.bell()).entries)
    assert np.allclose(catalog.werner(0.25).entries, np.eye(4) / 4)
    with pytest.raises(ShapeError):
        catalog.werner(1.2)


def test_catalog_errors():
    with pytest.raises(ParseError):
        catalog.catalog_state("cluster")
    with pytest.raises(ShapeError):
        catalog.catalog_state("ghz", 1)
    assert catalog.catalog_state("werner", F=0.5).dims == (2, 2)


def test_tensor_product_examples():
    assert np.allclose(tensor_product(basis_state([0]), basis_state([0])).amplitudes, [1, 0, 0, 0])
    psi3 = tensor_product(catalog.bell(), basis_state([0]))
    expected = parse_ket_expression("(|010> - |100>)/sqrt(2)")
    assert psi3.allclose(expected)
    bb = tensor_product(catalog.bell(), catalog.bell())
    assert bb.dims == (2, 2, 2, 2)
    assert np.isclose(bb.amplitudes[0b0101], 0.5)


def test_tensor_product_associative(rng):
    a, b, c = haar_state([2], rng), haar_state([3], rng), haar_state([2, 2], rng)
    left = tensor_product(tensor_product(a, b), c)
    right = tensor_product(a, tensor_product(b, c))
    assert left.allclose(right, atol=1e-12)


def test_to_density():
    assert np.allclose(to_density(basis_state([0])).entries, np.diag([1, 0]))
    rho = to_density(catalog.bell()).entries
    assert np.allclose(rho[1:3, 1:3], [[0.5, -0.5], [-0.5, 0.5]])
    w3 = to_density(catalog.w(3))
    psi = np.asarray(catalog.w(3).amplitudes)
    assert np.allclose(w3.entries, np.outer(psi, psi.conj()))
    assert np.isclose(np.trace(w3.entries), 1) and w3.rank() == 1


def test_partial_trace_examples():
    ghz = to_density(catalog.ghz(3))
    red = partial_trace(ghz, [1, 2]).entries
    assert np.allclose(red, np.diag([0.5, 0, 0, 0.5]))
    assert np.allclose(partial_trace(ghz, [1, 2, 3]).entries, ghz.entries)

    w3 = to_density(catalog.w(3))
    plus = np.array([0, S2, S2, 0])
    expected = np.diag([1 / 3, 0, 0, 0]) + 2 / 3 * np.outer(plus, plus)
    assert np.allclose(partial_trace(w3, [1, 2]).entries, expected, atol=1e-12)
    assert np.allclose(brute_partial_trace(w3.entries, (2, 2, 2), [1, 2]), expected, atol=1e-12)


def test_partial_trace_matches_brute_force(rng):
    rho = random_density((2, 3, 2), rng)
    for keep in ([1], [2], [3], [1, 3], [2, 3], [1, 2]):
        ours = partial_trace(rho, keep).entries
        assert np.allclose(ours, brute_partial_trace(rho.entries, rho.dims, keep), atol=1e-12)
        # the pure path agrees with the matrix path
    psi = haar_state((2, 3, 2), rng)
    for keep in ([1, 3], [2]):
        assert np.allclose(
            partial_trace(psi, keep).entries,
            partial_trace(to_density(psi), keep).entries,
            atol=1e-12,
        )


def test_partial_trace_errors():
    rho = to_density(catalog.ghz(3))
    with pytest.raises(ShapeError):
        partial_trace(rho, [])
    with pytest.raises(ShapeError):
        partial_trace(rho, [1, 1])
    with pytest.raises(ShapeError):
        partial_trace(rho, [4])


def test_partial_trace_of_product(rng):
    a, b = haar_state([2, 3], rng), haar_state([2], rng)
    red = partial_trace(to_density(tensor_product(a, b)), [1, 2])
    assert np.allclose(red.entries, to_density(a).entries, atol=1e-12)


def test_permute_and_local_unitary(rng):
    s = haar_state([2, 3, 2], rng)
    p = permute_sites(s, [3, 1, 2])
    assert p.dims == (2, 2, 3)
    assert np.isclose(p.as_tensor()[1, 0, 2], s.as_tensor()[0, 2, 1])
    ident = apply_local(s, [np.eye(d) for d in s.dims])
    assert ident.allclose(s)


def test_density_json_round_trip(rng):
    rho = random_density((2, 2), rng)
    back = DensityMatrix.from_json(rho.to_json())
    assert np.allclose(back.entries, rho.entries, atol=0)
    obj = json.loads(rho.to_json())
    assert obj["dims"] == [2, 2] and len(obj["entries"]) == 16
    with pytest.raises(ParseError):
        DensityMatrix.from_json("{not json")
    with pytest.raises(ShapeError):
        DensityMatrix.from_json('{"dims": [2], "entries": [[1, 0]]}')


@pytest.mark.parametrize(
    "state",
    [catalog.bell(), catalog.ghz(3), catalog.w(4), catalog.phi4(), catalog.phi6(), catalog.ghz(2, 3)],
    ids=["bell", "ghz3", "w4", "phi4", "phi6", "ghz-qutrit"],
)
def test_render_round_trip_catalog(state):
    back = parse_ket_expression(state.render(), state.register)
    assert back.allclose(state, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2,), (2, 2), (3, 2), (2, 2, 2)]))
def test_render_round_trip_random(seed, dims):
    s = haar_state(dims, np.random.default_rng(seed))
    back = parse_ket_expression(s.render(), s.register)
    assert back.allclose(s, atol=1e-12)
