import numpy as np
import pytest

from qcorr import catalog
from qcorr.baselines import concurrence, partial_transpose, ppt_min_eigenvalue
from qcorr.errors import ShapeError
from qcorr.ketparse import parse_ket_expression
from qcorr.measure import measure_B
from qcorr.randomness import haar_state, product_state, random_density
from qcorr.state import basis_state, to_density


def test_singlet_concurrence():
    assert concurrence(catalog.bell()).value == pytest.approx(1, abs=1e-12)
    assert concurrence(to_density(catalog.bell())).value == pytest.approx(1, abs=1e-12)


def test_schmidt_state():
    psi = parse_ket_expression("sqrt(0.9)|00> + sqrt(0.1)|11>")
    assert concurrence(psi).value == pytest.approx(2 * np.sqrt(0.09), abs=1e-12)
    assert concurrence(psi).value == pytest.approx(0.6, abs=1e-12)


@pytest.mark.parametrize("F", [0.0, 0.25, 0.5, 0.6, 0.8, 1.0])
def test_werner_concurrence(F):
    assert concurrence(catalog.werner(F)).value == pytest.approx(max(0, 2 * F - 1), abs=1e-12)


def test_concurrence_requires_two_qubits():
    with pytest.raises(ShapeError):
        concurrence(catalog.ghz(3))
    with pytest.raises(ShapeError):
        concurrence(catalog.ghz(2, 3))


def test_partial_transpose_examples():
    assert ppt_min_eigenvalue(catalog.bell(), [2]) == pytest.approx(-0.5, abs=1e-12)
    assert ppt_min_eigenvalue(catalog.werner(0.5), [1]) == pytest.approx(0, abs=1e-10)
    assert ppt_min_eigenvalue(basis_state([0, 1]), [1]) >= -1e-10
    with pytest.raises(ShapeError):
        ppt_min_eigenvalue(catalog.bell(), [1, 2])


def test_partial_transpose_is_involution(rng):
    rho = random_density((2, 3), rng)
    pt = partial_transpose(rho, [2])
    assert np.isclose(np.trace(pt), 1)
    back = partial_transpose(type(rho)(rho.register, pt), [2]) if np.min(np.linalg.eigvalsh(pt)) > -1e-12 else None
    if back is not None:
        assert np.allclose(back, rho.entries)


def test_products_are_ppt(rng):
    for _ in range(10):
        s = product_state((2, 3, 2), rng)
        assert ppt_min_eigenvalue(s, [1]) >= -1e-10
        assert ppt_min_eigenvalue(s, [2, 3]) >= -1e-10


def test_pure_two_qubit_agreement(rng):
    # for pure two-qubit states entanglement shows up in all three quantities together
    for _ in range(20):
        s = haar_state((2, 2), rng)
        c = concurrence(s).value
        assert measure_B(s, (1, 2)).value == pytest.approx((2 * c**2 + c**4) / 3, abs=1e-10)
        assert ppt_min_eigenvalue(s, [1]) == pytest.approx(-c / 2, abs=1e-10)
