"""Product-state manifolds as multilinear monomial maps R^m -> R^n.

Every output coordinate of the embedding is a product of distinct domain
coordinates, so derivatives of every order are exact products of the
remaining factors.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .partition import Partition

NAMED_CASES = ("two-qubit-product", "three-qubit-biproduct", "three-qubit-product")


@dataclass(frozen=True)
class ManifoldCase:
    name: str
    levels: int
    qudits: int
    partition: Partition
    coordinate_order: tuple
    output_order: tuple

    @property
    def m(self):
        return len(self.coordinate_order)

    @property
    def n(self):
        return len(self.output_order)


def _nonzero_indices(levels, qudits):
    return [idx for idx in itertools.product(range(levels**2), repeat=qudits) if any(idx)]


def _group_coordinates(levels, qudits, group):
    """Multi-indices that are free on ``group`` (0-based axes) and 0 elsewhere."""
    out = []
    for sub in itertools.product(range(levels**2), repeat=len(group)):
        if not any(sub):
            continue
        idx = [0] * qudits
        for ax, v in zip(group, sub):
            idx[ax] = v
        out.append(tuple(idx))
    return out


def general_case(levels, qudits, partition=None):
    """Map for an arbitrary partition.

    Domain coordinates are grouped by partition block (lexicographic inside a
    block); outputs are all non-zero multi-indices in lexicographic order.
    """
    if partition is None:
        partition = Partition.totally_product(qudits)
    if partition.qudits != qudits:
        raise ValueError(f"partition {partition} does not describe {qudits} qudits")
    coords = []
    for axes in partition.positions():
        coords += _group_coordinates(levels, qudits, axes)
    return ManifoldCase(
        name="general",
        levels=levels,
        qudits=qudits,
        partition=partition,
        coordinate_order=tuple(coords),
        output_order=tuple(_nonzero_indices(levels, qudits)),
    )


def _three_qubit_image():
    # 18 leading outputs, then d_ijk with (i, j) != (0, 0) and k = 1..3
    head = [(0, 0, 1), (0, 0, 2), (0, 0, 3)]
    head += [(i, j, 0) for i in range(4) for j in range(4) if (i, j) != (0, 0)]
    tail = [(i, j, k) for i in range(4) for j in range(4) if (i, j) != (0, 0) for k in (1, 2, 3)]
    return tuple(head + tail)


def named_case(name):
    """One of the three frozen two/three-qubit cases."""
    key = name.replace("_", "-")
    if key == "two-qubit-product":
        coords = [(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]
        return ManifoldCase(
            key, 2, 2, Partition(2, ((1,), (2,))), tuple(coords), tuple(_nonzero_indices(2, 2))
        )
    if key == "three-qubit-biproduct":
        image = _three_qubit_image()
        return ManifoldCase(key, 2, 3, Partition(3, ((1, 2), (3,))), image[:18], image)
    if key == "three-qubit-product":
        coords = [(i, 0, 0) for i in (1, 2, 3)]
        coords += [(0, j, 0) for j in (1, 2, 3)]
        coords += [(0, 0, k) for k in (1, 2, 3)]
        return ManifoldCase(
            key, 2, 3, Partition.totally_product(3), tuple(coords), _three_qubit_image()
        )
    raise KeyError(f"unknown manifold case {name!r}; expected one of {NAMED_CASES}")


def get_case(name, levels=None, qudits=None, partition=None):
    if name == "general":
        if levels is None or qudits is None:
            raise ValueError("general case needs levels and qudits")
        if isinstance(partition, str):
            partition = Partition.parse(partition, qudits)
        return general_case(levels, qudits, partition)
    return named_case(name)


class EmbeddingMap:
    """Monomial description of a product-state embedding.

    ``monomials[alpha]`` is the tuple of domain coordinate indices whose
    product gives output ``alpha``.
    """

    def __init__(self, case, monomials):
        self.case = case
        self.monomials = tuple(tuple(mono) for mono in monomials)
        width = max(len(mono) for mono in self.monomials)
        pad = np.full((len(self.monomials), width), case.m, dtype=np.intp)
        for a, mono in enumerate(self.monomials):
            pad[a, : len(mono)] = mono
        pad.setflags(write=False)
        self._pad = pad

    @property
    def m(self):
        return self.case.m

    @property
    def n(self):
        return len(self.monomials)

    @property
    def degree(self):
        return self._pad.shape[1]

    @cached_property
    def singleton_rows(self):
        """Output rows whose monomial is a single coordinate, keyed by coordinate."""
        return {mono[0]: a for a, mono in enumerate(self.monomials) if len(mono) == 1}

    def restricted(self, rows):
        """Submap keeping only the given output rows."""
        rows = list(rows)
        case = ManifoldCase(
            name=f"{self.case.name}[restricted]",
            levels=self.case.levels,
            qudits=self.case.qudits,
            partition=self.case.partition,
            coordinate_order=self.case.coordinate_order,
            output_order=tuple(self.case.output_order[r] for r in rows),
        )
        return EmbeddingMap(case, [self.monomials[r] for r in rows])

    def _factors(self, u):
        u = np.asarray(u, dtype=float)
        if u.shape != (self.m,):
            raise ValueError(f"expected a point of length {self.m}, got shape {u.shape}")
        return np.append(u, 1.0)[self._pad]

    def evaluate(self, u):
        return np.prod(self._factors(u), axis=1)

    def derivative_tensor(self, u, order):
        """Dense array of all ``order``-th partial derivatives, shape ``(n,) + (m,)*order``.

        Entries with a repeated differentiation index vanish (multilinearity).
        """
        fac = self._factors(u)
        n, width = fac.shape
        m = self.m
        out = np.zeros((n,) + (m + 1,) * order)
        rows = np.arange(n)
        for combo in itertools.permutations(range(width), order):
            rest = np.ones(n)
            for p in range(width):
                if p not in combo:
                    rest = rest * fac[:, p]
            cols = tuple(self._pad[:, p] for p in combo)
            # padded positions land in the dropped slot m
            out[(rows,) + cols] = rest
        return out[(slice(None),) + (slice(0, m),) * order]

    def jacobian(self, u):
        return self.derivative_tensor(u, 1)

    def higher_derivative(self, u, order, index):
        """Single derivative ``d^k F^alpha / du^mu_1 ... du^mu_k``.

        ``index`` is ``(alpha, mu_1, ..., mu_k)``.
        """
        if order not in (2, 3):
            raise ValueError("order must be 2 or 3")
        alpha, *mus = index
        if len(mus) != order:
            raise ValueError(f"need {order} differentiation indices, got {len(mus)}")
        mono = self.monomials[alpha]
        if len(set(mus)) != len(mus) or not set(mus) <= set(mono):
            return 0.0
        u = np.asarray(u, dtype=float)
        return float(np.prod([u[c] for c in mono if c not in mus]))

    def verify_immersion(self, u, rtol=1e-10):
        s = np.linalg.svd(self.jacobian(u), compute_uv=False)
        rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
        return {"rank": rank, "full_rank": rank == self.m}

    def __repr__(self):
        return f"EmbeddingMap({self.case.name!r}, m={self.m}, n={self.n})"


def build_map(case):
    """Monomials of the product map for ``case``.

    Output multi-index ``I`` gets the coordinate of each non-zero restriction
    ``I|G_l`` (that restriction is itself a domain coordinate).
    """
    position = {idx: mu for mu, idx in enumerate(case.coordinate_order)}
    groups = case.partition.positions()
    monomials = []
    for idx in case.output_order:
        mono = []
        for axes in groups:
            sub = tuple(idx[ax] if ax in axes else 0 for ax in range(case.qudits))
            if any(sub):
                mono.append(position[sub])
        monomials.append(tuple(mono))
    return EmbeddingMap(case, monomials)


def coordinates_of(d, case):
    """Read the domain coordinates of ``case`` off a Fano tensor."""
    t = d.tensor
    return np.array([t[idx] for idx in case.coordinate_order], dtype=float)


def outputs_of(d, case):
    """Non-trivial Fano entries of ``d`` in the case's output order."""
    t = d.tensor
    return np.array([t[idx] for idx in case.output_order], dtype=float)
