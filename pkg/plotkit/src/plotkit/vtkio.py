"""Reader for legacy ASCII VTK unstructured grids written by ``trihelm solve``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class VtkParseError(ValueError):
    """Malformed VTK input; reports the byte offset of the offending line."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


@dataclass
class VtkGrid:
    points: np.ndarray  # (nv, 2); z is dropped
    triangles: np.ndarray  # (nt, 3) int
    point_data: dict = field(default_factory=dict)
    cell_data: dict = field(default_factory=dict)


class _Lines:
    """Line cursor over the raw bytes, tracking byte offsets."""

    def __init__(self, raw: bytes, path):
        self.path = path
        self.items = []  # (offset, text)
        pos = 0
        for chunk in raw.split(b"\n"):
            text = chunk.decode("ascii", errors="replace").strip()
            if text:
                self.items.append((pos, text))
            pos += len(chunk) + 1
        self.index = 0
        self.offset = 0

    def next(self, context: str) -> str:
        if self.index >= len(self.items):
            raise VtkParseError(
                f"{self.path}: unexpected end of file while reading {context}",
                self.offset,
            )
        self.offset, text = self.items[self.index]
        self.index += 1
        return text

    def peek(self):
        if self.index >= len(self.items):
            return None
        return self.items[self.index][1]

    def fail(self, message: str):
        raise VtkParseError(f"{self.path}: {message}", self.offset)


def _read_floats(lines: _Lines, count: int, context: str) -> np.ndarray:
    values = []
    while len(values) < count:
        for tok in lines.next(context).split():
            try:
                values.append(float(tok))
            except ValueError:
                lines.fail(f"expected a number in {context}, got {tok!r}")
    if len(values) != count:
        lines.fail(f"{context}: expected {count} values, got {len(values)}")
    return np.asarray(values)


def read_vtk(path) -> VtkGrid:
    with open(path, "rb") as fh:
        lines = _Lines(fh.read(), path)

    if not lines.next("header").startswith("# vtk DataFile"):
        lines.fail("not a VTK file: missing '# vtk DataFile' header")
    lines.next("title")
    if lines.next("format") != "ASCII":
        lines.fail("only ASCII format is supported")
    if lines.next("dataset") != "DATASET UNSTRUCTURED_GRID":
        lines.fail("only DATASET UNSTRUCTURED_GRID is supported")

    parts = lines.next("POINTS").split()
    if len(parts) != 3 or parts[0] != "POINTS":
        lines.fail(f"expected 'POINTS <n> <type>', got {parts!r}")
    nv = _parse_count(lines, parts[1], "POINTS count")
    coords = _read_floats(lines, 3 * nv, "POINTS").reshape(nv, 3)

    parts = lines.next("CELLS").split()
    if len(parts) != 3 or parts[0] != "CELLS":
        lines.fail(f"expected 'CELLS <n> <size>', got {parts!r}")
    nt = _parse_count(lines, parts[1], "CELLS count")
    cells = _read_floats(lines, 4 * nt, "CELLS").reshape(nt, 4)
    if not np.all(cells[:, 0] == 3):
        lines.fail("only 3-node triangle cells are supported")
    triangles = cells[:, 1:].astype(int)
    if triangles.size and (triangles.min() < 0 or triangles.max() >= nv):
        lines.fail("cell connectivity references a point out of range")

    parts = lines.next("CELL_TYPES").split()
    if len(parts) != 2 or parts[0] != "CELL_TYPES":
        lines.fail(f"expected 'CELL_TYPES <n>', got {parts!r}")
    if _parse_count(lines, parts[1], "CELL_TYPES count") != nt:
        lines.fail(f"CELL_TYPES count does not match CELLS count {nt}")
    types = _read_floats(lines, nt, "CELL_TYPES")
    if not np.all(types == 5):
        lines.fail("only VTK cell type 5 (triangle) is supported")

    grid = VtkGrid(points=coords[:, :2], triangles=triangles)
    while lines.peek() is not None:
        parts = lines.next("data section").split()
        if parts[0] == "CELL_DATA":
            _read_scalar_block(lines, _parse_count(lines, parts[1], "CELL_DATA"),
                               grid.cell_data)
        elif parts[0] == "POINT_DATA":
            _read_scalar_block(lines, _parse_count(lines, parts[1], "POINT_DATA"),
                               grid.point_data)
        else:
            lines.fail(f"expected CELL_DATA or POINT_DATA, got {parts[0]!r}")
    return grid


def _parse_count(lines: _Lines, token: str, context: str) -> int:
    try:
        n = int(token)
    except ValueError:
        lines.fail(f"{context}: expected an integer, got {token!r}")
    if n < 0:
        lines.fail(f"{context}: negative count {n}")
    return n


def _read_scalar_block(lines: _Lines, count: int, target: dict) -> None:
    """Read consecutive SCALARS arrays until the next section keyword."""
    while True:
        head = lines.peek()
        if head is None or not head.startswith("SCALARS"):
            return
        parts = lines.next("SCALARS").split()
        if len(parts) < 2:
            lines.fail("SCALARS line missing a name")
        name = parts[1]
        if not lines.next("LOOKUP_TABLE").startswith("LOOKUP_TABLE"):
            lines.fail("expected LOOKUP_TABLE after SCALARS")
        target[name] = _read_floats(lines, count, f"SCALARS {name}")


def region_rectangle(grid: VtkGrid):
    """Bounding rectangle of cells marked region=1, or None if absent.

    The embedded curve is an axis-aligned rectangle whose inside is marked
    in the ``region`` cell array, so its corners are the bounding box of
    the marked cells' vertices.
    """
    region = grid.cell_data.get("region")
    if region is None or not np.any(region == 1.0):
        return None
    verts = grid.points[np.unique(grid.triangles[region == 1.0])]
    (x0, y0), (x1, y1) = verts.min(axis=0), verts.max(axis=0)
    return (x0, y0, x1, y1)
