"""Set partitions of the subsystem labels ``{1, ..., M}``."""

from dataclasses import dataclass


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Ordered groups of 1-based subsystem labels.

    Groups are kept as given (each sorted internally); use
    :meth:`canonical` for the order by smallest member.
    """

    qudits: int
    groups: tuple

    def __post_init__(self):
        groups = tuple(tuple(sorted(int(i) for i in g)) for g in self.groups)
        if not groups or any(not g for g in groups):
            raise PartitionError("partition needs at least one non-empty group")
        flat = [i for g in groups for i in g]
        if len(flat) != len(set(flat)):
            raise PartitionError(f"groups overlap: {groups}")
        if sorted(flat) != list(range(1, self.qudits + 1)):
            raise PartitionError(f"groups {groups} do not cover 1..{self.qudits}")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def parse(cls, text, qudits=None):
        """Parse ``"1,2|3"`` style syntax (1-based, ``|`` between groups)."""
        try:
            groups = [[int(tok) for tok in part.split(",")] for part in text.strip().split("|")]
        except ValueError as exc:
            raise PartitionError(f"cannot parse partition {text!r}") from exc
        if qudits is None:
            qudits = max(i for g in groups for i in g)
        return cls(qudits, tuple(groups))

    @classmethod
    def totally_product(cls, qudits):
        return cls(qudits, tuple((i,) for i in range(1, qudits + 1)))

    @classmethod
    def single(cls, qudits):
        return cls(qudits, (tuple(range(1, qudits + 1)),))

    def canonical(self):
        return Partition(self.qudits, tuple(sorted(self.groups)))

    @property
    def size(self):
        return len(self.groups)

    def positions(self):
        """Groups as 0-based tensor axes."""
        return [[i - 1 for i in g] for g in self.groups]

    def __str__(self):
        return "|".join(",".join(str(i) for i in g) for g in self.groups)


MAX_CLASSIFY_QUDITS = 6


def all_partitions(qudits):
    """Every set partition of ``{1..M}``, coarsest (fewest groups) first.

    Enumerated by restricted-growth strings; ties keep RGS lexicographic order.
    """
    found = []

    def grow(prefix, top):
        if len(prefix) == qudits:
            found.append(list(prefix))
            return
        for v in range(top + 2):
            prefix.append(v)
            grow(prefix, max(top, v))
            prefix.pop()

    grow([0], 0)
    parts = []
    for rgs in found:
        k = max(rgs) + 1
        groups = tuple(tuple(i + 1 for i, b in enumerate(rgs) if b == blk) for blk in range(k))
        parts.append(Partition(qudits, groups))
    parts.sort(key=lambda p: p.size)
    return parts
