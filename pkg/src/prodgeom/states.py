"""Test states and manifold sample points.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64, 128-bit
state), so every output is reproducible from its seed.
"""

from functools import reduce

import numpy as np

from .fano import (
    BlochVector,
    DensityMatrix,
    FanoTensor,
    ValidationError,
    decompose,
    reconstruct,
    state_from_bloch,
    validate,
)
from .separability import group_coefficients

REJECTION_BUDGET = 100_000


class SamplingError(RuntimeError):
    """Rejection sampling ran out of attempts."""


def _rng(seed):
    return np.random.default_rng(seed)


def product_state(blochs, levels=2):
    """Tensor product of single-qudit states given by Bloch vectors."""
    mats = []
    for k, b in enumerate(blochs):
        if not isinstance(b, BlochVector):
            b = BlochVector(levels, b)
        rho = state_from_bloch(b)
        report = validate(rho)
        if not report.psd:
            raise ValidationError(
                f"Bloch vector {k + 1} is not a physical state (min eigenvalue {report.min_eig:.3e})",
                report,
            )
        mats.append(rho.matrix)
    return DensityMatrix(levels, len(mats), reduce(np.kron, mats))


def tensor_product(*states):
    """Kronecker product of density matrices with equal ``levels``."""
    levels = states[0].levels
    if any(s.levels != levels for s in states):
        raise ValueError("all factors must have the same number of levels")
    return DensityMatrix(
        levels, sum(s.qudits for s in states), reduce(np.kron, [s.matrix for s in states])
    )


def _ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(str(b) for b in bits), 2)] = 1.0
    return v


def _pure(psi, qudits):
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(2, qudits, np.outer(psi, psi.conj()))


NAMED_STATES = ("bell_phi_plus", "ghz", "w", "werner", "maximally_mixed")


def named_state(name, qudits=None, p=None):
    """Standard qubit fixtures.

    ``ghz`` and ``w`` default to three qubits; ``werner`` is
    ``p |Phi+><Phi+| + (1 - p) I/4``.
    """
    key = name.lower().replace("-", "_")
    if key == "bell_phi_plus":
        return _pure(_ket([0, 0]) + _ket([1, 1]), 2)
    if key == "ghz":
        m = qudits or 3
        return _pure(_ket([0] * m) + _ket([1] * m), m)
    if key == "w":
        m = qudits or 3
        psi = sum(_ket([1 if j == k else 0 for j in range(m)]) for k in range(m))
        return _pure(psi, m)
    if key == "werner":
        if p is None or not 0.0 <= p <= 1.0:
            raise ValueError(f"werner needs p in [0, 1], got {p!r}")
        bell = named_state("bell_phi_plus").matrix
        return DensityMatrix(2, 2, p * bell + (1 - p) * np.eye(4) / 4)
    if key == "maximally_mixed":
        m = qudits or 2
        return DensityMatrix(2, m, np.eye(2**m) / 2**m)
    raise KeyError(f"unknown state {name!r}; expected one of {NAMED_STATES}")


def random_density(dim, seed=None, levels=None):
    """Ginibre-ensemble mixed state ``G G^dag / tr(G G^dag)``.

    ``levels`` defaults to the smallest base of which ``dim`` is a power.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho).real
    rho = 0.5 * (rho + rho.conj().T)
    if levels is None:
        levels = next(b for b in range(2, dim + 1) if _is_power(dim, b))
    qudits = round(np.log(dim) / np.log(levels))
    return DensityMatrix(levels, qudits, rho)


def _is_power(dim, base):
    while dim % base == 0:
        dim //= base
    return dim == 1


def random_bloch(levels, rng):
    """Physical Bloch vector: box rejection for qubits, Ginibre otherwise."""
    if levels == 2:
        for _ in range(REJECTION_BUDGET):
            a = rng.uniform(-1.0, 1.0, 3)
            if a @ a <= 1.0:
                return BlochVector(2, a)
        raise SamplingError(f"no physical Bloch vector in {REJECTION_BUDGET} attempts")
    rho = random_density(levels, seed=rng, levels=levels)
    return BlochVector(levels, decompose(rho).data[1:])


def random_product_state(levels, qudits, seed=None):
    rng = _rng(seed)
    return product_state([random_bloch(levels, rng) for _ in range(qudits)], levels)


def random_partition_product(partition, levels, seed=None):
    """Product of independent random states on each group of ``partition``."""
    rng = _rng(seed)
    factors = []
    for group in partition.groups:
        if len(group) == 1:
            factors.append(state_from_bloch(random_bloch(levels, rng)))
        else:
            factors.append(random_density(levels ** len(group), seed=rng, levels=levels))
    rho = tensor_product(*factors)
    order = [i for g in partition.groups for i in g]
    return _permute_subsystems(rho, order)


def _permute_subsystems(rho, order):
    """Reorder subsystems so that factor ``k`` (label ``order[k]``) lands at its label."""
    n, m = rho.levels, rho.qudits
    if order == sorted(order):
        return rho
    t = rho.matrix.reshape((n,) * (2 * m))
    perm = list(np.argsort(order))
    t = t.transpose(perm + [m + p for p in perm])
    dim = n**m
    return DensityMatrix(n, m, t.reshape(dim, dim))


def random_manifold_point(case, mode="box", seed=None):
    """Coordinate vector on a product manifold.

    ``box``: each coordinate uniform in [-1, 1].
    ``physical``: every group block is the Fano block of a genuine state.
    Single-qubit groups use rejection from the box (unit Bloch ball);
    larger groups read the block of a Ginibre state on the group, since the
    physical region has negligible volume inside the box there.
    """
    rng = _rng(seed)
    if mode == "box":
        return rng.uniform(-1.0, 1.0, case.m)
    if mode != "physical":
        raise ValueError(f"mode must be 'box' or 'physical', got {mode!r}")
    n, m = case.levels, case.qudits
    full = np.zeros((n**2,) * m)
    full[(0,) * m] = 1.0
    for axes in case.partition.positions():
        if len(axes) == 1:
            block = random_bloch(n, rng).augmented
        else:
            rho = random_density(n ** len(axes), seed=rng, levels=n)
            block = decompose(rho).tensor
        index = tuple(slice(None) if ax in axes else 0 for ax in range(m))
        full[index] = block
    return np.array([full[idx] for idx in case.coordinate_order])


def physical_ok(case, u):
    """Whether each group block of ``u`` reconstructs to a PSD state."""
    n, m = case.levels, case.qudits
    full = np.zeros((n**2,) * m)
    full[(0,) * m] = 1.0
    for idx, x in zip(case.coordinate_order, u):
        full[idx] = x
    d = FanoTensor(n, m, full.reshape(-1))
    for block, axes in zip(group_coefficients(d, case.partition), case.partition.positions()):
        rho = reconstruct(FanoTensor(n, len(axes), block.reshape(-1)))
        if not validate(rho).psd:
            return False
    return True


def sample_points(case, count, seed=None, mode="box"):
    """``count`` independent points, one spawned seed per point index."""
    children = np.random.SeedSequence(seed).spawn(count)
    return np.array([random_manifold_point(case, mode, np.random.default_rng(c)) for c in children])
