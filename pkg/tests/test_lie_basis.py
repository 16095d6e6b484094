import numpy as np
import pytest

from prodgeom.lie_basis import (
    InvalidDimensionError,
    basis_elements,
    gram_matrix,
    su_generators,
)

# textbook Gell-Mann matrices, tr(l_a l_b) = 2 delta_ab, in symmetric /
# antisymmetric / diagonal order
GELL_MANN = [
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
    [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
    [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
    [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
    [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
    np.diag([1, 1, -2]) / np.sqrt(3),
]


def test_pauli():
    s1, s2, s3 = su_generators(2)
    np.testing.assert_array_equal(s1, [[0, 1], [1, 0]])
    np.testing.assert_array_equal(s2, [[0, -1j], [1j, 0]])
    np.testing.assert_allclose(s3, [[1, 0], [0, -1]], atol=1e-15)


def test_qutrit_is_rescaled_gell_mann():
    gens = su_generators(3)
    assert len(gens) == 8
    for s, lam in zip(gens, GELL_MANN):
        np.testing.assert_allclose(s, np.sqrt(1.5) * np.asarray(lam), atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_generator_invariants(n):
    gens = su_generators(n)
    assert len(gens) == n * n - 1
    for s in gens:
        assert np.max(np.abs(s - s.conj().T)) < 1e-14
        assert abs(np.trace(s)) < 1e-14
    np.testing.assert_allclose(gram_matrix(gens), n * np.eye(n * n - 1), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_basis_gram(n):
    basis = basis_elements(n)
    assert len(basis) == n * n
    np.testing.assert_allclose(basis[0], np.eye(n) / n)
    for e, s in zip(basis[1:], su_generators(n)):
        np.testing.assert_allclose(e, s / n)
    np.testing.assert_allclose(gram_matrix(basis), np.eye(n * n) / n, atol=1e-12)


def test_qubit_basis_values():
    e = basis_elements(2)
    assert np.trace(e[0] @ e[0]) == pytest.approx(0.5)
    assert abs(np.trace(e[1] @ e[2])) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_basis_spans_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = a + a.conj().T
    basis = basis_elements(n)
    coeffs = [n * np.trace(h @ e) for e in basis]
    assert max(abs(np.imag(c)) for c in coeffs) < 1e-12
    rebuilt = sum(c.real * e for c, e in zip(coeffs, basis))
    np.testing.assert_allclose(rebuilt, h, atol=1e-12)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.5])
def test_invalid_levels(bad):
    with pytest.raises(InvalidDimensionError):
        su_generators(bad)
    with pytest.raises(InvalidDimensionError):
        basis_elements(bad)


def test_cached_and_read_only():
    a = su_generators(3)
    b = su_generators(3)
    assert a[0] is b[0]
    with pytest.raises(ValueError):
        a[0][0, 0] = 5
