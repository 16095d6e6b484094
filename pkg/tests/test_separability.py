import math

import numpy as np
import pytest

from oracles import kron_of_partition
from prodgeom.fano import DensityMatrix, FanoTensor, decompose
from prodgeom.partition import Partition, PartitionError, all_partitions
from prodgeom.separability import (
    classify,
    group_coefficients,
    is_product,
    product_residual,
)
from prodgeom.states import (
    named_state,
    product_state,
    random_density,
    random_partition_product,
    random_product_state,
    tensor_product,
)

BELL = decompose(named_state("bell_phi_plus"))
GHZ = decompose(named_state("ghz"))
KET0 = DensityMatrix(2, 1, np.diag([1.0, 0.0]))


def test_partition_parsing():
    p = Partition.parse("1,2|3")
    assert p.groups == ((1, 2), (3,)) and str(p) == "1,2|3"
    assert Partition.parse("3|2,1").groups == ((3,), (1, 2))
    for bad in ("1|1", "1,2", "a|b", "0|1,2"):
        with pytest.raises(PartitionError):
            Partition.parse(bad, 3)


def test_all_partitions_counts_and_order():
    bell_numbers = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52}
    for m, count in bell_numbers.items():
        parts = all_partitions(m)
        assert len(parts) == count
        assert len({str(p.canonical()) for p in parts}) == count
        sizes = [p.size for p in parts]
        assert sizes == sorted(sizes)
    assert [str(p) for p in all_partitions(3)] == ["1,2,3", "1,2|3", "1,3|2", "1|2,3", "1|2|3"]


def test_group_coefficients_bell():
    blocks = group_coefficients(BELL, Partition.parse("1|2"))
    for b in blocks:
        np.testing.assert_allclose(b, [1, 0, 0, 0], atol=1e-15)


def test_group_coefficients_biproduct():
    pair = random_density(4, seed=1)
    third = random_density(2, seed=2)
    d = decompose(tensor_product(pair, third))
    first, second = group_coefficients(d, Partition.parse("1,2|3"))
    np.testing.assert_allclose(first, decompose(pair).tensor, atol=1e-14)
    np.testing.assert_allclose(second, decompose(third).tensor, atol=1e-14)
    assert first[0, 0] == pytest.approx(1) and second[0] == pytest.approx(1)


def test_single_group_block_is_tensor():
    (block,) = group_coefficients(GHZ, Partition.single(3))
    np.testing.assert_array_equal(block, GHZ.tensor)


def test_bell_residual():
    r = product_residual(BELL, Partition.parse("1|2"))
    assert r[1, 1] == pytest.approx(-1) and r[2, 2] == pytest.approx(1) and r[3, 3] == pytest.approx(-1)
    assert np.linalg.norm(r) == pytest.approx(math.sqrt(3))
    report = is_product(BELL, Partition.parse("1|2"), 1e-10)
    assert not report.is_product and report.max_violation == pytest.approx(1)


def test_ghz_not_biproduct():
    for text in ("1,2|3", "1,3|2", "1|2,3"):
        assert is_product(GHZ, Partition.parse(text)).max_violation >= 0.5


def test_product_residual_vanishes():
    d = decompose(product_state([[0.3, -0.2, 0.5], [0, 0.6, -0.1]]))
    r = product_residual(d, Partition.parse("1|2"))
    assert np.max(np.abs(r)) < 1e-15 or np.max(np.abs(r)) < 1e-12
    assert is_product(d, Partition.parse("1|2"), 1e-10).is_product


def test_perturbed_product_passes_loose_tolerance(rng):
    d = decompose(random_product_state(2, 3, seed=4))
    noisy = d.data + 1e-6 * rng.standard_normal(d.data.size)
    noisy[0] = 1
    report = is_product(FanoTensor(2, 3, noisy), Partition.totally_product(3), 1e-4)
    assert report.is_product
    assert 1e-7 < report.max_violation < 1e-4
    assert not is_product(FanoTensor(2, 3, noisy), Partition.totally_product(3), 1e-10).is_product


def test_report_invariants(rng):
    for seed in range(5):
        d = decompose(random_density(8, seed=seed))
        for rep in classify(d, 1e-10):
            assert (rep.residual_norm == 0) == (rep.max_violation == 0)
            assert rep.is_product == (rep.max_violation <= 1e-10)
    with pytest.raises(ValueError):
        is_product(BELL, Partition.parse("1|2"), 0)


def test_single_group_residual_is_zero():
    for seed in range(5):
        d = decompose(random_density(8, seed=seed))
        assert np.max(np.abs(product_residual(d, Partition.single(3)))) == 0


def test_classify_biproduct():
    d = decompose(tensor_product(named_state("bell_phi_plus"), KET0))
    verdict = {str(r.partition): r.is_product for r in classify(d)}
    assert verdict == {"1,2,3": True, "1,2|3": True, "1,3|2": False, "1|2,3": False, "1|2|3": False}


def test_classify_product_and_ghz():
    d = decompose(random_product_state(2, 3, seed=8))
    assert all(r.is_product for r in classify(d))
    passing = [str(r.partition) for r in classify(GHZ) if r.is_product]
    assert passing == ["1,2,3"]


def test_classify_guard():
    d = FanoTensor(2, 7, np.eye(1, 4**7).ravel())
    with pytest.raises(PartitionError):
        classify(d)


def test_partition_qudit_mismatch():
    with pytest.raises(PartitionError):
        is_product(BELL, Partition.totally_product(3))


@pytest.mark.parametrize("levels,qudits", [(2, 2), (2, 3), (3, 2)])
def test_oracle_equivalence(levels, qudits):
    """Fano-condition verdict agrees with an explicit partial-trace factorization."""
    parts = all_partitions(qudits)
    for seed in range(100):
        target = parts[seed % len(parts)]
        if seed % 2:
            rho = random_partition_product(target, levels, seed)
        else:
            rho = random_density(levels**qudits, seed=seed, levels=levels)
        d = decompose(rho)
        for part in parts:
            fano = is_product(d, part, 1e-10).is_product
            diff = np.linalg.norm(rho.matrix - kron_of_partition(rho.matrix, levels, qudits, part.groups))
            assert fano == (diff < 1e-8), (seed, str(part), diff)


def test_refinement_monotonicity():
    for seed in range(20):
        d = decompose(random_product_state(2, 3, seed))
        c = (1 + np.max(np.abs(d.data))) ** 3
        finest = is_product(d, Partition.totally_product(3)).max_violation
        for rep in classify(d):
            assert rep.max_violation <= c * max(finest, 1e-16) + 1e-15
