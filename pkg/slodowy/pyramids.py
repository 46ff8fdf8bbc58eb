"""Pyramids of a given shape, their fillings, and the nilpotent and grading they induce.

Row 1 is the bottom (longest) row. Offsets and columns are measured in half-box
units: a box is 2 wide, so row ``r`` has its boxes centred at
``offsets[r-1] + 2t`` for ``t = 0 .. shape[r] - 1``.
"""

import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import product
from typing import Any, Literal

from sympy.polys.domains import QQ

from .errors import InputError
from .gradings import Grading
from .lie_core import Mat
from .partitions import Partition

logger = logging.getLogger(__name__)

RenderFormat = Literal["ascii", "tex", "dot"]
RENDER_FORMATS: tuple[str, ...] = ("ascii", "tex", "dot")


@dataclass(frozen=True)
class Pyramid:
    """A Young diagram whose rows are shifted so that it stays pyramid shaped.

    Offsets are translated on construction so that the bottom row starts at 0;
    two pyramids are equal iff their offset differences agree.
    """

    shape: Partition
    offsets: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.offsets) != self.shape.length:
            raise InputError(
                f"{len(self.offsets)} offsets given for a shape with {self.shape.length} rows",
                shape=self.shape.to_json(),
            )
        if any(not isinstance(s, int) for s in self.offsets):
            raise InputError(f"offsets must be integers: {self.offsets}")
        if self.offsets[0] != 0:
            object.__setattr__(self, "offsets", tuple(s - self.offsets[0] for s in self.offsets))
        for r in range(1, self.shape.length):
            if self.offsets[r] < self.offsets[r - 1]:
                raise InputError(f"row {r + 1} starts left of row {r}", offsets=list(self.offsets))
            if self.last_col(r + 1) > self.last_col(r):
                raise InputError(f"row {r + 1} ends right of row {r}", offsets=list(self.offsets))

    @classmethod
    def of(cls, shape: Partition | Sequence[int], offsets: Sequence[int]) -> "Pyramid":
        p = shape if isinstance(shape, Partition) else Partition.of(shape)
        return cls(p, tuple(int(s) for s in offsets))

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Pyramid":
        try:
            return cls.of(data["shape"], data["offsets"])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed pyramid JSON: {e}") from e

    @property
    def n(self) -> int:
        return self.shape.n

    def first_col(self, row: int) -> int:
        return self.offsets[row - 1]

    def last_col(self, row: int) -> int:
        return self.offsets[row - 1] + 2 * (self.shape[row] - 1)

    def boxes(self) -> Iterator[tuple[int, int]]:
        """(row, column) of every box, row by row from left to right."""
        for row in range(1, self.shape.length + 1):
            for t in range(self.shape[row]):
                yield row, self.first_col(row) + 2 * t

    @property
    def is_right_aligned(self) -> bool:
        return len({self.last_col(r) for r in range(1, self.shape.length + 1)}) == 1

    def to_json(self) -> dict[str, list[int]]:
        return {"shape": self.shape.to_json(), "offsets": list(self.offsets)}

    def __str__(self) -> str:
        return f"{self.shape}@{list(self.offsets)}"


class Filling:
    """A bijective labelling of the boxes of a pyramid by 1..n.

    ``rows[r-1]`` lists the labels of row ``r`` from left to right.
    """

    def __init__(self, pyramid: Pyramid, rows: Sequence[Sequence[int]]) -> None:
        if [len(r) for r in rows] != list(pyramid.shape.parts):
            raise InputError("filling rows do not match the pyramid shape", shape=pyramid.shape.to_json())
        flat = [int(k) for r in rows for k in r]
        if sorted(flat) != list(range(1, pyramid.n + 1)):
            raise InputError(f"labels must be a permutation of 1..{pyramid.n}", labels=flat)
        self.pyramid = pyramid
        self.rows: tuple[tuple[int, ...], ...] = tuple(tuple(int(k) for k in r) for r in rows)
        self._where: dict[int, tuple[int, int]] = {
            k: (row, t) for row, labels in enumerate(self.rows, start=1) for t, k in enumerate(labels)
        }

    @classmethod
    def from_json(cls, pyramid: Pyramid, data: Mapping[str, Any]) -> "Filling":
        flat = list(data.get("labels", []))
        rows, start = [], 0
        for length in pyramid.shape:
            rows.append(flat[start : start + length])
            start += length
        return cls(pyramid, rows)

    @property
    def n(self) -> int:
        return self.pyramid.n

    def row(self, k: int) -> int:
        return self._where[k][0]

    def col(self, k: int) -> int:
        row, t = self._where[k]
        return self.pyramid.first_col(row) + 2 * t

    def label_at(self, row: int, col: int) -> int | None:
        """Label of the box of ``row`` centred at ``col``, if there is one."""
        if not 1 <= row <= len(self.rows):
            return None
        offset = col - self.pyramid.first_col(row)
        if offset % 2 or not 0 <= offset // 2 < len(self.rows[row - 1]):
            return None
        return self.rows[row - 1][offset // 2]

    def from_right(self, row: int, t: int) -> int | None:
        """Label of the ``t``-th box of ``row`` counted from the right (1-based)."""
        if not 1 <= row <= len(self.rows):
            return None
        labels = self.rows[row - 1]
        return labels[-t] if 1 <= t <= len(labels) else None

    def right_adjacent(self) -> list[tuple[int, int]]:
        """Pairs (k, l) with l immediately to the right of k in the same row."""
        return [(a, b) for labels in self.rows for a, b in zip(labels, labels[1:], strict=False)]

    def relabel(self, perm: Mapping[int, int]) -> "Filling":
        return Filling(self.pyramid, [[perm[k] for k in labels] for labels in self.rows])

    def to_json(self) -> dict[str, Any]:
        return {"pyramid": self.pyramid.to_json(), "labels": [k for labels in self.rows for k in labels]}


def enumerate_pyramids(shape: Partition) -> list[Pyramid]:
    """Every pyramid of the given shape, bottom row at offset 0.

    Row ``r+1`` may start anywhere from the start of row ``r`` to the position
    where the two rows end together.
    """
    ranges = [range(0, 2 * (shape[r] - shape[r + 1]) + 1) for r in range(1, shape.length)]
    found: list[Pyramid] = []
    for steps in product(*ranges):
        offsets = [0]
        for step in steps:
            offsets.append(offsets[-1] + step)
        found.append(Pyramid(shape, tuple(offsets)))
    logger.debug("%d pyramids of shape %s", len(found), shape)
    return found


def right_aligned(shape: Partition) -> Pyramid:
    return Pyramid(shape, tuple(2 * (shape[1] - shape[r]) for r in range(1, shape.length + 1)))


def standard_filling(p: Pyramid) -> Filling:
    """Label boxes up each column, columns left to right."""
    ordered = sorted(p.boxes(), key=lambda rc: (rc[1], rc[0]))
    label_of = {box: k for k, box in enumerate(ordered, start=1)}
    rows = [
        [label_of[(row, c)] for c in range(p.first_col(row), p.last_col(row) + 1, 2)]
        for row in range(1, p.shape.length + 1)
    ]
    return Filling(p, rows)


def nilpotent_of(f: Filling) -> Mat:
    """e = sum of E_kl over right-adjacent pairs k -> l."""
    return Mat(f.n, {pair: 1 for pair in f.right_adjacent()})


def grading_of(f: Filling) -> Grading:
    """Grading with deg E_kl = col(l) - col(k), from a trace-zero diagonal element."""
    cols = [f.col(k) for k in range(1, f.n + 1)]
    centre = QQ(sum(cols), len(cols))
    return Grading(Mat.diag([centre - c for c in cols]))


# --------------------------------------------------------------------------- rendering


def render(p: Pyramid, f: Filling | None = None, fmt: str = "ascii") -> str:
    """Text rendering of a pyramid, optionally with labels, bottom row drawn last."""
    if f is not None and f.pyramid != p:
        raise InputError("filling belongs to a different pyramid")
    if fmt == "ascii":
        return _render_ascii(p, f)
    if fmt == "tex":
        return _render_tex(p, f)
    if fmt == "dot":
        return _render_dot(p, f)
    raise InputError(f"unknown render format {fmt!r}; choose from {', '.join(RENDER_FORMATS)}")


def _box_text(f: Filling | None, row: int, t: int) -> str:
    return "[  ]" if f is None else f"[{f.rows[row - 1][t]:2d}]"


def _render_ascii(p: Pyramid, f: Filling | None) -> str:
    left = min(p.offsets)
    lines = []
    for row in range(p.shape.length, 0, -1):
        indent = " " * (2 * (p.first_col(row) - left))
        lines.append(indent + "".join(_box_text(f, row, t) for t in range(p.shape[row])))
    return "\n".join(lines) + "\n"


def _render_tex(p: Pyramid, f: Filling | None) -> str:
    lines = ["\\begin{tikzpicture}[x=0.4cm,y=0.8cm]"]
    for row, col in p.boxes():
        lines.append(f"  \\draw ({col - 1},{row - 1}) rectangle ({col + 1},{row});")
        if f is not None:
            label = f.label_at(row, col)
            lines.append(f"  \\node at ({col},{row - 0.5}) {{{label}}};")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def _render_dot(p: Pyramid, f: Filling | None) -> str:
    def node(row: int, col: int) -> str:
        return f"b{f.label_at(row, col)}" if f is not None else f"r{row}c{col}"

    lines = [f'digraph "pyramid_{p.shape}" {{', "  node [shape=box];"]
    for row, col in p.boxes():
        label = f.label_at(row, col) if f is not None else ""
        lines.append(f'  {node(row, col)} [label="{label}", pos="{col},{row - 1}!"];')
    for row, col in p.boxes():
        if col + 2 <= p.last_col(row):
            lines.append(f"  {node(row, col)} -> {node(row, col + 2)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
