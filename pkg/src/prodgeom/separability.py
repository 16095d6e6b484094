"""Algebraic product conditions on Fano tensors.

For a partition ``G_1 | ... | G_P`` of the subsystems, a state factorizes as
``rho_{G_1} (x) ... (x) rho_{G_P}`` exactly when every coefficient equals the
product of its group restrictions::

    d[i_1..i_M] = prod_l d[restriction of (i_1..i_M) to G_l, zeros elsewhere]

The residual is reported as (product of group blocks) - d.
"""

from dataclasses import dataclass, field

import numpy as np

from .fano import FanoTensor
from .partition import MAX_CLASSIFY_QUDITS, Partition, PartitionError, all_partitions

DEFAULT_TOL = 1e-10


@dataclass
class ProductCheckReport:
    partition: Partition
    residual_norm: float
    max_violation: float
    is_product: bool
    tol: float
    group_coefficients: list = field(repr=False, default_factory=list)

    def to_dict(self, include_blocks=False):
        out = {
            "partition": str(self.partition),
            "residual_norm": self.residual_norm,
            "max_violation": self.max_violation,
            "is_product": self.is_product,
            "tol": self.tol,
        }
        if include_blocks:
            out["group_coefficients"] = [b.reshape(-1).tolist() for b in self.group_coefficients]
        return out


def _check_partition(d, partition):
    if partition.qudits != d.qudits:
        raise PartitionError(
            f"partition covers {partition.qudits} subsystems, tensor has {d.qudits}"
        )


def group_coefficients(d, partition):
    """Fano blocks of the reduced states on each group.

    Block ``l`` has shape ``(N^2,) * |G_l|`` and holds the entries of ``d``
    with free indices on ``G_l`` and zeros on every other position.
    """
    _check_partition(d, partition)
    t = d.tensor
    blocks = []
    for axes in partition.positions():
        index = tuple(slice(None) if ax in axes else 0 for ax in range(d.qudits))
        blocks.append(np.array(t[index]))
    return blocks


def product_of_blocks(blocks, partition):
    """Outer product of group blocks, transposed back to subsystem order."""
    out = np.ones(())
    axes_order = []
    for block, axes in zip(blocks, partition.positions()):
        out = np.multiply.outer(out, block)
        axes_order += axes
    # out axes follow the group order; move them to positions 0..M-1
    return np.transpose(out, np.argsort(axes_order))


def product_residual(d, partition):
    """Residual tensor ``r = prod_l block_l[I|G_l] - d[I]``."""
    blocks = group_coefficients(d, partition)
    return product_of_blocks(blocks, partition) - d.tensor


def is_product(d, partition, tol=DEFAULT_TOL):
    if tol <= 0:
        raise ValueError("tol must be positive")
    blocks = group_coefficients(d, partition)
    r = product_of_blocks(blocks, partition) - d.tensor
    max_violation = float(np.max(np.abs(r)))
    return ProductCheckReport(
        partition=partition,
        residual_norm=float(np.linalg.norm(r)),
        max_violation=max_violation,
        is_product=max_violation <= tol,
        tol=tol,
        group_coefficients=blocks,
    )


def classify(d, tol=DEFAULT_TOL):
    """Product check for every set partition, coarsest first."""
    if d.qudits > MAX_CLASSIFY_QUDITS:
        raise PartitionError(
            f"classify enumerates Bell-number many partitions; refusing for "
            f"{d.qudits} > {MAX_CLASSIFY_QUDITS} qudits. Check explicit partitions instead."
        )
    return [is_product(d, p, tol) for p in all_partitions(d.qudits)]


def tensor_from_blocks(blocks, partition, levels):
    """Fano tensor of the product state built from group blocks."""
    return FanoTensor(levels, partition.qudits, product_of_blocks(blocks, partition).reshape(-1))
