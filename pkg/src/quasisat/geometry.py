"""Uniform grids over boxes, face adjacency, cell merging, and oriented
boundaries of box complexes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from .intervals import RatBox, RatInterval, ival, rat

CellIndex = tuple[int, ...]


@dataclass(frozen=True)
class Grid:
    """Uniform grid over `base`: axis i is cut into counts[i] equal parts.

    Cells are addressed by multi-index and materialized on demand, so a
    grid with millions of cells costs nothing to build.
    """
    base: RatBox
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != self.base.dim:
            raise ValueError("counts and box dimension differ")
        if any(c < 1 for c in self.counts):
            raise ValueError("each axis needs at least one cell")

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def n_cells(self) -> int:
        return math.prod(self.counts)

    def cut(self, axis: int, i: int) -> Fraction:
        iv = self.base[axis]
        return iv.lo + iv.width * i / self.counts[axis]

    def cell_interval(self, axis: int, i: int) -> RatInterval:
        return ival(self.cut(axis, i), self.cut(axis, i + 1))

    def cell(self, idx: CellIndex) -> RatBox:
        return RatBox(tuple(self.cell_interval(a, i) for a, i in enumerate(idx)))

    def indices(self) -> Iterator[CellIndex]:
        def rec(a: int, prefix: CellIndex) -> Iterator[CellIndex]:
            if a == self.dim:
                yield prefix
                return
            for i in range(self.counts[a]):
                yield from rec(a + 1, prefix + (i,))
        yield from rec(0, ())

    def axis_cuts(self, axis: int) -> list[Fraction]:
        iv = self.base[axis]
        n = self.counts[axis]
        step = iv.width / n
        return [iv.lo + step * i for i in range(n)] + [iv.hi]

    def cells(self) -> Iterator[tuple[CellIndex, RatBox]]:
        if self.dim == 1:  # hot path: reuse each cut for both neighbors
            cuts = self.axis_cuts(0)
            for i in range(self.counts[0]):
                yield (i,), RatBox((RatInterval(cuts[i], cuts[i + 1]),))
            return
        for idx in self.indices():
            yield idx, self.cell(idx)

    def face_box(self, axis: int, plane: int, idx: CellIndex) -> RatBox:
        """The (dim-1)-face at cut `plane` of `axis`; `idx` indexes the
        cells along the remaining axes."""
        parts = []
        j = 0
        for a in range(self.dim):
            if a == axis:
                parts.append(ival(self.cut(axis, plane)))
            else:
                parts.append(self.cell_interval(a, idx[j]))
                j += 1
        return RatBox(tuple(parts))

    def faces(self) -> Iterator["Face"]:
        """All grid faces, each degenerate in exactly one axis."""
        if self.dim == 1:
            cuts = self.axis_cuts(0)
            n = self.counts[0]
            for plane in range(n + 1):
                yield Face(RatBox((RatInterval(cuts[plane], cuts[plane]),)), 0,
                           (plane - 1,) if plane > 0 else None,
                           (plane,) if plane < n else None)
            return
        for axis in range(self.dim):
            other = [c for a, c in enumerate(self.counts) if a != axis]
            for plane in range(self.counts[axis] + 1):
                for rest in _multi_range(other):
                    lower = _insert(rest, axis, plane - 1) if plane > 0 else None
                    upper = (_insert(rest, axis, plane)
                             if plane < self.counts[axis] else None)
                    yield Face(self.face_box(axis, plane, rest), axis,
                               lower, upper)


def _multi_range(counts: list[int]) -> Iterator[CellIndex]:
    if not counts:
        yield ()
        return
    for i in range(counts[0]):
        for rest in _multi_range(counts[1:]):
            yield (i,) + rest


def _insert(idx: CellIndex, axis: int, value: int) -> CellIndex:
    return idx[:axis] + (value,) + idx[axis:]


@dataclass(frozen=True)
class Face:
    """A grid face: degenerate in `axis`, between the two incident cells
    (None on the side that falls outside the grid)."""
    box: RatBox
    axis: int
    lower_cell: Optional[CellIndex]
    upper_cell: Optional[CellIndex]

    @property
    def on_boundary(self) -> bool:
        return self.lower_cell is None or self.upper_cell is None

    @property
    def incident_cells(self) -> tuple[CellIndex, ...]:
        return tuple(c for c in (self.lower_cell, self.upper_cell)
                     if c is not None)


def grid_cover(b: RatBox, r) -> Grid:
    """Uniform grid over b with every cell width <= r."""
    r = rat(r)
    if r <= 0:
        raise ValueError("grid width must be positive")
    counts = tuple(max(1, math.ceil(iv.width / r)) for iv in b.intervals)
    return Grid(b, counts)


@dataclass(frozen=True)
class BoxComplex:
    """A face-connected union of congruent aligned grid cells."""
    cells: tuple[RatBox, ...]

    @property
    def dim(self) -> int:
        return self.cells[0].dim


def merge_cells(grid: Grid, zero_faces: Iterable[Face]) -> list[BoxComplex]:
    """SoEI merge step: join cells through internal zero-faces, then drop
    every component that touches a zero-face on the grid boundary."""
    parent: dict[CellIndex, CellIndex] = {}

    def find(i: CellIndex) -> CellIndex:
        root = i
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(i, i) != i:
            parent[i], i = root, parent[i]
        return root

    def union(i: CellIndex, j: CellIndex) -> None:
        parent[find(i)] = find(j)

    doomed_roots: set[CellIndex] = set()
    doomed_cells: set[CellIndex] = set()
    for face in zero_faces:
        if face.on_boundary:
            doomed_cells.update(face.incident_cells)
        else:
            union(face.lower_cell, face.upper_cell)

    groups: dict[CellIndex, list[CellIndex]] = {}
    for idx in grid.indices():
        groups.setdefault(find(idx), []).append(idx)
    doomed_roots = {find(i) for i in doomed_cells}
    return [BoxComplex(tuple(grid.cell(i) for i in members))
            for root, members in sorted(groups.items())
            if root not in doomed_roots]


def oriented_boundary(cells: Iterable[RatBox]) -> dict[RatBox, int]:
    """Outward-oriented boundary of a union of congruent aligned cells,
    as face-box -> integer coefficient.

    Each cell contributes its faces with the induced orientation of the
    standard frame: on the t-th non-degenerate axis (1-based), the upper
    face gets (-1)**(t-1) and the lower face (-1)**t.  Faces shared by
    two cells receive opposite signs and cancel exactly.
    """
    out: dict[RatBox, int] = {}
    for cell in cells:
        _add_cell_boundary(out, cell, 1)
    return {b: c for b, c in out.items() if c}


def _add_cell_boundary(acc: dict[RatBox, int], cell: RatBox, coef: int) -> None:
    t = 0
    for axis, iv in enumerate(cell.intervals):
        if iv.is_degenerate:
            continue
        t += 1
        sign = -1 if t % 2 == 0 else 1
        hi_face = cell.replace(axis, ival(iv.hi))
        lo_face = cell.replace(axis, ival(iv.lo))
        for face, s in ((hi_face, sign * coef), (lo_face, -sign * coef)):
            got = acc.get(face, 0) + s
            if got:
                acc[face] = got
            else:
                acc.pop(face, None)


def boundary(complex: BoxComplex) -> list[tuple[RatBox, int]]:
    """Boundary faces of the complex with outward orientation signs."""
    acc = oriented_boundary(complex.cells)
    return sorted(acc.items(), key=lambda kv: _box_key(kv[0]))


def _box_key(b: RatBox):
    return tuple((iv.lo, iv.hi) for iv in b.intervals)


def subdivide_face(face: Face, r) -> list[Face]:
    """Split a face uniformly to width <= r along its free axes; the
    fixed axis, incident cells and boundary status are inherited."""
    r = rat(r)
    if r <= 0:
        raise ValueError("width must be positive")
    return [Face(b, face.axis, face.lower_cell, face.upper_cell)
            for b in split_box(face.box, r)]


def split_box(b: RatBox, r: Fraction) -> list[RatBox]:
    """Uniform refinement of a box to width <= r (degenerate axes kept)."""
    parts: list[list[RatInterval]] = []
    for iv in b.intervals:
        n = max(1, math.ceil(iv.width / r))
        cuts = [iv.lo + iv.width * i / n for i in range(n)] + [iv.hi]
        parts.append([ival(a, c) for a, c in zip(cuts, cuts[1:])])
    out = [()]
    for axis_parts in parts:
        out = [combo + (piece,) for combo in out for piece in axis_parts]
    return [RatBox(combo) for combo in out]


def bisect_box(b: RatBox) -> list[RatBox]:
    """Split a box in half along every non-degenerate axis."""
    out = [()]
    for iv in b.intervals:
        pieces = iv.split() if not iv.is_degenerate else (iv,)
        out = [combo + (piece,) for combo in out for piece in pieces]
    return [RatBox(combo) for combo in out]
