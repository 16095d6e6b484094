import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_decompose, brute_partial_trace
from prodgeom.fano import (
    BlochVector,
    DensityMatrix,
    FanoTensor,
    NormalizationError,
    ShapeError,
    ValidationError,
    as_density,
    bloch_of,
    decompose,
    marginal_bloch,
    partial_trace,
    reconstruct,
    state_from_bloch,
    validate,
)
from prodgeom.lie_basis import basis_elements, su_generators
from prodgeom.states import named_state, random_density

CASES = [(2, 2), (2, 3), (3, 2)]


def test_maximally_mixed():
    d = decompose(DensityMatrix(2, 2, np.eye(4) / 4))
    expected = np.zeros(16)
    expected[0] = 1
    np.testing.assert_allclose(d.data, expected, atol=1e-15)


def test_bell_coefficients_match_brute_force():
    bell = named_state("bell_phi_plus")
    brute = brute_decompose(bell.matrix, 2, 2, basis_elements(2))
    d = decompose(bell)
    np.testing.assert_allclose(d.tensor, brute, atol=1e-14)
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[1, 1] = expected[3, 3] = 1
    expected[2, 2] = -1
    np.testing.assert_allclose(d.tensor, expected, atol=1e-14)


def test_zero_zero_state():
    rho = DensityMatrix(2, 2, np.diag([1.0, 0, 0, 0]))
    t = decompose(rho).tensor
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 0] = expected[0, 3] = expected[3, 3] = 1
    np.testing.assert_allclose(t, expected, atol=1e-14)
    np.testing.assert_allclose(t, brute_decompose(rho.matrix, 2, 2, basis_elements(2)), atol=1e-14)


def test_reconstruct_examples():
    d = np.zeros(16)
    d[0] = 1
    np.testing.assert_allclose(reconstruct(FanoTensor(2, 2, d)).matrix, np.eye(4) / 4)
    d[12] = d[3] = d[15] = 1  # d30, d03, d33
    np.testing.assert_allclose(
        reconstruct(FanoTensor(2, 2, d)).matrix, np.diag([1.0, 0, 0, 0]), atol=1e-15
    )


@pytest.mark.parametrize("levels,qudits", CASES)
def test_reconstruct_of_arbitrary_real_tensor_is_hermitian_trace_one(levels, qudits, rng):
    data = rng.uniform(-3, 3, (levels**2) ** qudits)
    data[0] = 1
    rho = reconstruct(FanoTensor(levels, qudits, data))
    report = validate(rho)
    assert report.hermitian and report.trace_dev < 1e-12


@pytest.mark.parametrize("levels,qudits", CASES)
def test_round_trips(levels, qudits, rng):
    for seed in range(20):
        rho = random_density(levels**qudits, seed=seed, levels=levels)
        back = reconstruct(decompose(rho))
        assert np.linalg.norm(back.matrix - rho.matrix) < 1e-11
        data = rng.uniform(-1, 1, (levels**2) ** qudits)
        data[0] = 1
        d = FanoTensor(levels, qudits, data)
        assert np.max(np.abs(decompose(reconstruct(d)).data - data)) < 1e-11


def test_decompose_matches_brute_force_qutrits():
    rho = random_density(9, seed=3, levels=3)
    brute = brute_decompose(rho.matrix, 3, 2, basis_elements(3))
    np.testing.assert_allclose(decompose(rho).tensor, brute, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(
    p=st.floats(0, 1),
    s1=st.integers(0, 2**31),
    s2=st.integers(0, 2**31),
)
def test_linearity(p, s1, s2):
    r1 = random_density(8, seed=s1)
    r2 = random_density(8, seed=s2)
    mix = DensityMatrix(2, 3, p * r1.matrix + (1 - p) * r2.matrix)
    lhs = decompose(mix).data
    rhs = p * decompose(r1).data + (1 - p) * decompose(r2).data
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_decompose_rejects_non_hermitian():
    with pytest.raises(ValidationError) as err:
        decompose(DensityMatrix(2, 1, [[0.5, 1.0], [0.0, 0.5]]))
    assert not err.value.report.hermitian


def test_decompose_rejects_bad_trace():
    with pytest.raises(ValidationError):
        decompose(DensityMatrix(2, 1, np.eye(2)))


def test_decompose_does_not_require_psd():
    d = decompose(DensityMatrix(2, 1, np.diag([1.5, -0.5])))
    np.testing.assert_allclose(d.data, [1, 0, 0, 2.0], atol=1e-15)


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        DensityMatrix(2, 2, np.eye(3) / 3)
    with pytest.raises(ShapeError):
        as_density(np.eye(6) / 6, levels=4)


def test_reconstruct_normalization_error():
    with pytest.raises(NormalizationError):
        reconstruct(FanoTensor(2, 1, [2.0, 0, 0, 0]))


def test_bloch_of_examples():
    np.testing.assert_allclose(bloch_of(DensityMatrix(3, 1, np.eye(3) / 3)).components, 0, atol=1e-15)
    np.testing.assert_allclose(bloch_of(DensityMatrix(2, 1, np.diag([1.0, 0]))).components, [0, 0, 1])
    s1 = su_generators(2)[0]
    rho = DensityMatrix(2, 1, (np.eye(2) + 0.5 * s1) / 2)
    np.testing.assert_allclose(bloch_of(rho).components, [0.5, 0, 0], atol=1e-15)
    with pytest.raises(ShapeError):
        bloch_of(named_state("bell_phi_plus"))


@pytest.mark.parametrize("levels", [2, 3, 4])
def test_bloch_round_trip(levels, rng):
    rho = random_density(levels, seed=int(rng.integers(1 << 30)), levels=levels)
    back = state_from_bloch(bloch_of(rho))
    np.testing.assert_allclose(back.matrix, rho.matrix, atol=1e-13)


def test_qubit_bloch_norm_bounded():
    for seed in range(50):
        a = bloch_of(random_density(2, seed=seed)).components
        assert np.linalg.norm(a) <= 1 + 1e-12


def test_marginal_bloch_examples():
    bell = decompose(named_state("bell_phi_plus"))
    for l in (1, 2):
        np.testing.assert_allclose(marginal_bloch(bell, l).components, 0, atol=1e-15)
    zz = decompose(DensityMatrix(2, 2, np.diag([1.0, 0, 0, 0])))
    np.testing.assert_allclose(marginal_bloch(zz, 1).components, [0, 0, 1], atol=1e-15)
    trivial = np.zeros(64)
    trivial[0] = 1
    np.testing.assert_array_equal(marginal_bloch(FanoTensor(2, 3, trivial), 2).components, 0)
    with pytest.raises(ShapeError):
        marginal_bloch(bell, 3)
    with pytest.raises(ShapeError):
        marginal_bloch(bell, 0)


@pytest.mark.parametrize("levels,qudits", CASES)
def test_marginal_consistency(levels, qudits):
    for seed in range(10):
        rho = random_density(levels**qudits, seed=100 + seed, levels=levels)
        d = decompose(rho)
        for l in range(1, qudits + 1):
            reduced = partial_trace(rho, [l])
            np.testing.assert_allclose(
                marginal_bloch(d, l).components, bloch_of(reduced).components, atol=1e-11
            )


@pytest.mark.parametrize("keep", [[1], [2], [3], [1, 2], [1, 3], [2, 3]])
def test_partial_trace_matches_loops(keep):
    rho = random_density(8, seed=9)
    np.testing.assert_allclose(
        partial_trace(rho, keep).matrix, brute_partial_trace(rho.matrix, 2, 3, keep), atol=1e-14
    )


def test_validate_examples():
    r = validate(DensityMatrix(2, 2, np.eye(4) / 4))
    assert r.hermitian and r.trace_dev == 0 and r.min_eig == pytest.approx(0.25)
    assert r.is_state
    r = validate(np.diag([1.5, -0.5]))
    assert r.trace_ok and r.min_eig == pytest.approx(-0.5) and not r.is_state
    r = validate(named_state("bell_phi_plus"))
    assert abs(r.min_eig) < 1e-12 and r.is_state
    r = validate(np.array([[0.5, 1.0], [0.0, 0.5]]))
    assert not r.hermitian and r.hermitian_dev == 1.0


def test_tensor_is_immutable():
    d = decompose(named_state("bell_phi_plus"))
    with pytest.raises(ValueError):
        d.data[0] = 2.0
    assert d[(1, 1)] == pytest.approx(1.0)


def test_bloch_vector_shape():
    with pytest.raises(ShapeError):
        BlochVector(2, [1, 0])
