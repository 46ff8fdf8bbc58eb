"""Partitions of n, dominance order and Gerstenhaber covering relations.

Rows are 1-based throughout: ``p[1]`` is the longest row.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate

from .errors import InputError, RelationError

logger = logging.getLogger(__name__)

MAX_N = 20


@dataclass(frozen=True, order=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise InputError("partition must have at least one part")
        if any(not isinstance(p, int) or p < 1 for p in self.parts):
            raise InputError(f"parts must be positive integers: {self.parts}", parts=list(self.parts))
        if any(a < b for a, b in zip(self.parts, self.parts[1:], strict=False)):
            raise InputError(f"parts must be nonincreasing: {self.parts}", parts=list(self.parts))

    @classmethod
    def of(cls, parts: Sequence[int]) -> "Partition":
        return cls(tuple(int(p) for p in parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"2,2,2"``, ``"(2,2,2)"`` or ``"[2, 2, 2]"``."""
        stripped = text.strip().strip("()[]")
        try:
            values = [int(tok) for tok in stripped.replace(" ", "").split(",") if tok]
        except ValueError as e:
            raise InputError(f"cannot parse partition {text!r}") from e
        return cls.of(values)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __getitem__(self, row: int) -> int:
        """Row length for a 1-based row index; rows past the end have length 0."""
        if row < 1:
            raise IndexError(row)
        return self.parts[row - 1] if row <= len(self.parts) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def to_json(self) -> list[int]:
        return list(self.parts)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise InputError(f"n must be between 1 and {MAX_N}, got {n}", n=n)


def all_partitions(n: int) -> list[Partition]:
    """Every partition of n exactly once, lexicographically descending."""
    _check_n(n)
    return [Partition(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out: list[tuple[int, ...]] = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first,) + rest for rest in _partitions(n - first, first))
    return tuple(out)


def dominance_leq(a: Partition, b: Partition) -> bool:
    """True iff every prefix sum of ``a`` is at most that of ``b`` (zero-padded)."""
    if a.n != b.n:
        raise InputError(f"cannot compare partitions of {a.n} and {b.n}")
    width = max(a.length, b.length)
    pa = list(accumulate(a[r] for r in range(1, width + 1)))
    pb = list(accumulate(b[r] for r in range(1, width + 1)))
    return all(x <= y for x, y in zip(pa, pb, strict=True))


def covers_above(mu: Partition) -> list[Partition]:
    """Partitions covering ``mu`` in dominance order.

    A box moves from row k to row j < k. The move is a cover exactly when the
    rows are adjacent or have equal length, and the result is still a partition.
    """
    rows = list(mu.parts)
    found: set[tuple[int, ...]] = set()
    for j in range(1, len(rows) + 1):
        for k in range(j + 1, len(rows) + 1):
            if not (k == j + 1 or rows[j - 1] == rows[k - 1]):
                continue
            moved = rows.copy()
            moved[j - 1] += 1
            moved[k - 1] -= 1
            if j > 1 and moved[j - 2] < moved[j - 1]:
                continue
            if k < len(rows) and moved[k - 1] < moved[k]:
                continue
            found.add(tuple(p for p in moved if p > 0))
    return [Partition(p) for p in sorted(found, reverse=True)]


@dataclass(frozen=True)
class CoverRows:
    """Receiver row ``i`` gains the box that donor row ``j`` loses (1-based, i < j)."""

    receiver: int
    donor: int

    @property
    def i(self) -> int:
        return self.receiver

    @property
    def j(self) -> int:
        return self.donor

    def to_json(self) -> dict[str, int]:
        return {"i": self.receiver, "j": self.donor}


def cover_rows(mu: Partition, lam: Partition) -> CoverRows:
    """The unique (i, j) with lam_i = mu_i + 1 and lam_j = mu_j - 1."""
    if lam not in covers_above(mu):
        raise RelationError(f"{lam} does not cover {mu}", mu=mu.to_json(), lam=lam.to_json())
    width = max(mu.length, lam.length)
    gained = [r for r in range(1, width + 1) if lam[r] == mu[r] + 1]
    lost = [r for r in range(1, width + 1) if lam[r] == mu[r] - 1]
    return CoverRows(receiver=gained[0], donor=lost[0])


def conjugate(p: Partition) -> Partition:
    """Column lengths of the Young diagram."""
    return Partition(tuple(sum(1 for part in p.parts if part > c) for c in range(p.parts[0])))


def orbit_dim(p: Partition) -> int:
    """Dimension of the adjoint orbit of a nilpotent of Jordan type ``p``."""
    return p.n * p.n - sum(c * c for c in conjugate(p).parts)


def hasse_edges(n: int) -> list[tuple[Partition, Partition]]:
    """All cover pairs (mu, lam) among partitions of n."""
    return [(mu, lam) for mu in all_partitions(n) for lam in covers_above(mu)]


def hasse_dot(n: int) -> str:
    """The dominance Hasse diagram as a DOT digraph, edges pointing upward."""
    lines = [f'digraph "dominance_{n}" {{', "  rankdir=BT;"]
    for p in all_partitions(n):
        lines.append(f'  "{p}";')
    for mu, lam in hasse_edges(n):
        lines.append(f'  "{mu}" -> "{lam}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
