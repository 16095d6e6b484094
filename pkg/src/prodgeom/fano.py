"""Fano-form coefficient tensors of M-qudit density matrices.

A state of ``M`` qudits with ``N`` levels is expanded as

    rho = sum_{i_1..i_M} d[i_1, ..., i_M] e^{i_1} (x) ... (x) e^{i_M}

with ``d[0, ..., 0] = 1``. Coefficients are stored flat, row-major over the
multi-index with ``i_1`` most significant.
"""

from dataclasses import dataclass

import numpy as np

from .lie_basis import basis_stack

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10


class ValidationError(ValueError):
    """Input matrix is not Hermitian / trace one."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ShapeError(ValueError):
    """Dimensions are inconsistent with the declared ``(levels, qudits)``."""


class NormalizationError(ValueError):
    """A Fano tensor whose all-zero entry is not 1."""


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    levels: int
    qudits: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=complex)
        dim = self.levels**self.qudits
        if mat.shape != (dim, dim):
            raise ShapeError(
                f"matrix shape {mat.shape} does not match levels={self.levels}, "
                f"qudits={self.qudits} (expected {dim}x{dim})"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class FanoTensor:
    levels: int
    qudits: int
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float).reshape(-1)
        size = (self.levels**2) ** self.qudits
        if arr.size != size:
            raise ShapeError(f"expected {size} coefficients, got {arr.size}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def tensor(self):
        """Read-only view with shape ``(N^2,) * M``."""
        return self.data.reshape((self.levels**2,) * self.qudits)

    def __getitem__(self, index):
        return float(self.tensor[tuple(index)])


@dataclass(frozen=True)
class BlochVector:
    levels: int
    components: np.ndarray

    def __post_init__(self):
        arr = np.array(self.components, dtype=float).reshape(-1)
        if arr.size != self.levels**2 - 1:
            raise ShapeError(f"expected {self.levels**2 - 1} components, got {arr.size}")
        arr.setflags(write=False)
        object.__setattr__(self, "components", arr)

    @property
    def augmented(self):
        return np.concatenate([[1.0], self.components])


@dataclass(frozen=True)
class ValidationReport:
    hermitian: bool
    hermitian_dev: float
    trace_dev: float
    min_eig: float

    @property
    def trace_ok(self):
        return self.trace_dev <= TRACE_TOL

    @property
    def psd(self):
        return self.min_eig >= PSD_TOL

    @property
    def is_state(self):
        return self.hermitian and self.trace_ok and self.psd

    def to_dict(self):
        return {
            "hermitian": self.hermitian,
            "hermitian_dev": self.hermitian_dev,
            "trace_dev": self.trace_dev,
            "min_eig": self.min_eig,
            "psd": self.psd,
            "is_state": self.is_state,
        }


def infer_qudits(dim, levels):
    """Number of qudits ``M`` with ``levels**M == dim``."""
    m, d = 0, 1
    while d < dim:
        d *= levels
        m += 1
    if d != dim:
        raise ShapeError(f"dimension {dim} is not a power of {levels}")
    return m


def as_density(matrix, levels=2, qudits=None):
    """Wrap a raw matrix, inferring the qudit count if not given."""
    if isinstance(matrix, DensityMatrix):
        return matrix
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {mat.shape}")
    if qudits is None:
        qudits = infer_qudits(mat.shape[0], levels)
    return DensityMatrix(levels, qudits, mat)


def validate(rho):
    """Report Hermiticity, trace deviation and minimum eigenvalue.

    Never raises on unphysical input; the report carries the measurements.
    """
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    herm_dev = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    trace_dev = float(abs(np.trace(mat) - 1.0))
    hmat = 0.5 * (mat + mat.conj().T)
    min_eig = float(np.linalg.eigvalsh(hmat)[0])
    return ValidationReport(
        hermitian=herm_dev <= HERMITIAN_TOL,
        hermitian_dev=herm_dev,
        trace_dev=trace_dev,
        min_eig=min_eig,
    )


def _contract(tensor, basis, qudits, forward):
    """Contract each subsystem index pair of ``tensor`` against ``basis``.

    ``forward``: density tensor (a_1..a_M, b_1..b_M) -> coefficients,
    using ``sum_{a,b} rho[a, b] e^i[b, a]``. Otherwise the reverse assembly
    ``rho[a, b] = sum_i d[i] e^i[a, b]``.
    """
    m = qudits
    if forward:
        a = list(range(m))
        b = list(range(m, 2 * m))
        idx = list(range(2 * m, 3 * m))
        operands = [tensor, a + b]
        for l in range(m):
            operands += [basis, [idx[l], b[l], a[l]]]
        return np.einsum(*operands, idx, optimize=True)
    idx = list(range(m))
    a = list(range(m, 2 * m))
    b = list(range(2 * m, 3 * m))
    operands = [tensor, idx]
    for l in range(m):
        operands += [basis, [idx[l], a[l], b[l]]]
    return np.einsum(*operands, a + b, optimize=True)


def decompose(rho):
    """Fano coefficients ``d = N^M tr(rho e^{i_1} (x) ... (x) e^{i_M})``.

    Positivity is not required; only Hermiticity and unit trace are.
    """
    report = validate(rho)
    if not report.hermitian:
        raise ValidationError(
            f"matrix is not Hermitian (max deviation {report.hermitian_dev:.3e})", report
        )
    if not report.trace_ok:
        raise ValidationError(f"trace deviates from 1 by {report.trace_dev:.3e}", report)
    n, m = rho.levels, rho.qudits
    t = rho.matrix.reshape((n,) * (2 * m))
    coeffs = _contract(t, basis_stack(n), m, forward=True) * n**m
    return FanoTensor(n, m, coeffs.real.reshape(-1))


def reconstruct(d):
    """Assemble ``rho = sum d[I] e^{i_1} (x) ... (x) e^{i_M}``.

    The result is Hermitian with unit trace; positivity is not checked.
    """
    if abs(d.data[0] - 1.0) > TRACE_TOL:
        raise NormalizationError(f"d[0...0] must be 1, got {d.data[0]!r}")
    n, m = d.levels, d.qudits
    t = _contract(d.tensor.astype(complex), basis_stack(n), m, forward=False)
    dim = n**m
    return DensityMatrix(n, m, t.reshape(dim, dim))


def bloch_of(rho):
    """Bloch vector ``a_i = N tr(rho e^i)`` of a single-qudit state."""
    if rho.qudits != 1:
        raise ShapeError(f"bloch_of needs a single qudit, got qudits={rho.qudits}")
    n = rho.levels
    basis = basis_stack(n)
    comps = n * np.einsum("ab,iba->i", rho.matrix, basis[1:]).real
    return BlochVector(n, comps)


def state_from_bloch(bloch):
    """Single-qudit matrix ``(I + sum a_i s_i) / N``."""
    n = bloch.levels
    mat = np.einsum("i,iab->ab", bloch.augmented, basis_stack(n))
    return DensityMatrix(n, 1, mat)


def marginal_bloch(d, subsystem):
    """Bloch vector of subsystem ``l`` (1-based) read from ``d[0..i_l..0]``."""
    m = d.qudits
    if not 1 <= subsystem <= m:
        raise ShapeError(f"subsystem must lie in 1..{m}, got {subsystem}")
    index = [0] * m
    index[subsystem - 1] = slice(1, None)
    return BlochVector(d.levels, d.tensor[tuple(index)])


def partial_trace(rho, keep):
    """Reduced state on the 1-based subsystems in ``keep`` (sorted).

    Works on the matrix entries directly and is independent of the Fano
    machinery, so it can serve as a cross-check for it.
    """
    n, m = rho.levels, rho.qudits
    keep = sorted(keep)
    if not keep or keep[0] < 1 or keep[-1] > m or len(set(keep)) != len(keep):
        raise ShapeError(f"invalid subsystem selection {keep} for {m} qudits")
    t = rho.matrix.reshape((n,) * (2 * m))
    rows = list(range(m))
    cols = [m + l for l in range(m)]
    for l in range(m):
        if l + 1 not in keep:
            cols[l] = rows[l]
    out = [rows[l - 1] for l in keep] + [cols[l - 1] for l in keep]
    reduced = np.einsum(t, rows + cols, out)
    dim = n ** len(keep)
    return DensityMatrix(n, len(keep), reduced.reshape(dim, dim))
