import numpy as np
import pytest

from oracles import PAULI, gell_mann, naive_expectation
from qcorr import catalog
from qcorr.basis import expectation, generator_basis, local_mean
from qcorr.errors import NumericError, ShapeError
from qcorr.randomness import haar_state, random_density
from qcorr.state import basis_state, tensor_product


def test_qubit_basis_is_pauli():
    g = generator_basis(2)
    assert len(g) == 3
    for ours, ref in zip(g, PAULI):
        assert np.array_equal(ours, ref)
    assert np.array_equal(g[2], np.diag([1, -1]))
    assert abs(np.trace(g[0] @ g[1])) == 0


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_basis_invariants(d):
    g = generator_basis(d)
    assert g.shape == (d * d - 1, d, d)
    for a in g:
        assert np.max(np.abs(a - a.conj().T)) < 1e-14
        assert abs(np.trace(a)) < 1e-14
    gram = np.einsum("aij,bji->ab", g, g)
    assert np.allclose(gram, 2 * np.eye(d * d - 1), atol=1e-12)
    assert np.allclose(g, gell_mann(d), atol=1e-15)


def test_basis_rejects_small_d():
    with pytest.raises(ShapeError):
        generator_basis(1)


def test_expectation_examples():
    assert np.isclose(expectation(catalog.bell(), {1: "x", 2: "x"}), -1, atol=1e-14)
    w3 = catalog.w(3)
    assert np.isclose(expectation(w3, {1: "z"}), naive_expectation(w3, {1: PAULI[2]}).real)
    assert np.isclose(expectation(w3, {1: "z"}), 1 / 3)
    ghz = catalog.ghz(3)
    zzz = naive_expectation(ghz, {1: PAULI[2], 2: PAULI[2], 3: PAULI[2]}).real
    assert np.isclose(zzz, 0) and np.isclose(expectation(ghz, {1: 3, 2: 3, 3: 3}), 0)


def test_local_mean_examples():
    assert local_mean(catalog.ghz(3), 1, "z") == pytest.approx(0, abs=1e-15)
    assert local_mean(catalog.w(3), 2, "z") == pytest.approx(1 / 3, abs=1e-14)
    assert local_mean(basis_state([0]), 1, "z") == 1


def test_expectation_errors():
    with pytest.raises(ShapeError):
        expectation(catalog.ghz(3), {4: 1})
    with pytest.raises(ShapeError):
        expectation(catalog.ghz(3), {1: 4})
    with pytest.raises(ShapeError):
        expectation(catalog.ghz(2, 3), {1: "x"})


def test_expectation_matches_naive_oracle(rng):
    for _ in range(30):
        n = int(rng.integers(1, 5))
        dims = tuple(int(d) for d in rng.choice([2, 3], size=n, p=[0.75, 0.25]))
        state = haar_state(dims, rng) if rng.random() < 0.5 else random_density(dims, rng)
        m = int(rng.integers(1, n + 1))
        sites = [int(s) + 1 for s in rng.choice(n, size=m, replace=False)]
        ops = {s: int(rng.integers(1, dims[s - 1] ** 2)) for s in sites}
        local = {s: gell_mann(dims[s - 1])[i - 1] for s, i in ops.items()}
        ref = naive_expectation(state, local)
        assert abs(ref.imag) < 1e-12
        assert expectation(state, ops) == pytest.approx(ref.real, abs=1e-10)


def test_expectation_factorizes_on_products(rng):
    a, b = haar_state([2, 2], rng), haar_state([3], rng)
    ab = tensor_product(a, b)
    for i in range(1, 4):
        for j in range(1, 9):
            joint = expectation(ab, {2: i, 3: j})
            assert joint == pytest.approx(expectation(a, {2: i}) * expectation(b, {1: j}), abs=1e-10)


def test_non_hermitian_surfaces_as_error():
    from qcorr.basis import _real

    with pytest.raises(NumericError):
        _real(np.array(1 + 1e-6j))
