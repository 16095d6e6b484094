"""Generalized Gell-Mann generators of su(N) and the normalized operator basis.

The generators are rescaled so that ``tr(s_i s_j) = N delta_ij``; the basis
elements ``e^0 = I/N`` and ``e^i = s_i / N`` then satisfy
``tr(e^i e^j) = delta_ij / N``.
"""

from functools import lru_cache

import numpy as np


class InvalidDimensionError(ValueError):
    """Raised when a qudit dimension below 2 is requested."""


def _check_levels(levels):
    if int(levels) != levels or levels < 2:
        raise InvalidDimensionError(f"levels must be an integer >= 2, got {levels!r}")
    return int(levels)


@lru_cache(maxsize=None)
def _generators(levels):
    n = levels
    mats = []
    # symmetric off-diagonal pairs, lexicographic (row, col)
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1.0
            mats.append(m)
    # antisymmetric pairs, same order
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    scale = np.sqrt(n / 2.0)
    out = []
    for m in mats:
        m = m * scale
        m.setflags(write=False)
        out.append(m)
    return tuple(out)


def su_generators(levels):
    """Return the ``N**2 - 1`` Hermitian traceless generators of su(N).

    Order: symmetric off-diagonal matrices, antisymmetric ones, then the
    diagonal ones. For ``N = 2`` these are exactly the Pauli matrices.
    The returned arrays are read-only and shared between calls.
    """
    return list(_generators(_check_levels(levels)))


@lru_cache(maxsize=None)
def _basis(levels):
    n = levels
    e0 = np.eye(n, dtype=complex) / n
    e0.setflags(write=False)
    out = [e0]
    for s in _generators(n):
        e = s / n
        e.setflags(write=False)
        out.append(e)
    return tuple(out)


def basis_elements(levels):
    """Return ``(e^0, ..., e^{N^2-1}) = (I, s_1, ..., s_{N^2-1}) / N``."""
    return list(_basis(_check_levels(levels)))


def basis_stack(levels):
    """Basis elements stacked into a read-only ``(N^2, N, N)`` array."""
    return _stack(_check_levels(levels))


@lru_cache(maxsize=None)
def _stack(levels):
    arr = np.array(_basis(levels))
    arr.setflags(write=False)
    return arr


def gram_matrix(mats):
    """Matrix of ``tr(A_i A_j)`` over a list of square matrices."""
    arr = np.asarray(mats)
    return np.einsum("iab,jba->ij", arr, arr)
