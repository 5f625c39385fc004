"""
Location Management - reporting cells, location database and bounded search

Some cells are designated reporting cells. A node updates its location only
when it enters one of them. A data request then searches the last reported
cell plus the non-reporting cells reachable from it without crossing another
reporting cell (its vicinity).
"""
import logging
import math
import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from nlos_link.core.positioning import Point2D
from nlos_link.errors import DomainError, GridRangeError, SearchMissError

logger = logging.getLogger(__name__)

CellId = Tuple[int, int]   # (row, col)

_NEUMANN = [(-1, 0), (0, -1), (0, 1), (1, 0)]
_MOORE = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


class Adjacency(str, Enum):
    FOUR = "4"
    EIGHT = "8"


@dataclass(frozen=True)
class CellGrid:
    """Axis-aligned square cell grid; row 0 is the bottom strip (y in [0, cell_size))"""
    rows: int
    cols: int
    cell_size: float
    reporting: FrozenSet[CellId] = frozenset()
    adjacency: Adjacency = Adjacency.FOUR

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError(f"Grid needs at least one row and column, got {self.rows}x{self.cols}",
                              argument="rows/cols")
        if not self.cell_size > 0:
            raise DomainError(f"Cell size must be > 0, got {self.cell_size}", argument="cell_size",
                              value=self.cell_size)
        object.__setattr__(self, 'reporting', frozenset(tuple(c) for c in self.reporting))
        object.__setattr__(self, 'adjacency', Adjacency(self.adjacency))
        for cell in self.reporting:
            if not self.contains(cell):
                raise GridRangeError(f"Reporting cell {cell} is outside the {self.rows}x{self.cols} grid",
                                     cell=cell)

    @property
    def width(self) -> float:
        return self.cols * self.cell_size

    @property
    def height(self) -> float:
        return self.rows * self.cell_size

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def contains(self, cell: CellId) -> bool:
        row, col = cell
        return 0 <= row < self.rows and 0 <= col < self.cols

    def require(self, cell: CellId) -> CellId:
        cell = (int(cell[0]), int(cell[1]))
        if not self.contains(cell):
            raise GridRangeError(f"Cell {cell} is outside the {self.rows}x{self.cols} grid", cell=cell)
        return cell

    def is_reporting(self, cell: CellId) -> bool:
        return tuple(cell) in self.reporting

    def cells(self) -> Iterator[CellId]:
        """All cells in row-major order"""
        for row in range(self.rows):
            for col in range(self.cols):
                yield (row, col)

    def neighbors(self, cell: CellId) -> List[CellId]:
        """Adjacent cells in row-major order"""
        row, col = cell
        offsets = _NEUMANN if self.adjacency == Adjacency.FOUR else _MOORE
        return [(row + dr, col + dc) for dr, dc in offsets if self.contains((row + dr, col + dc))]

    def center_of(self, cell: CellId) -> Point2D:
        row, col = self.require(cell)
        return Point2D((col + 0.5) * self.cell_size, (row + 0.5) * self.cell_size)


@dataclass(frozen=True)
class LocationRecord:
    cell: CellId
    tick: int
    initial_attach: bool = False   # recorded at first appearance in a non-reporting cell


@dataclass(frozen=True)
class LocationUpdate:
    """Emitted when a node reports a new location"""
    node_id: str
    cell: CellId
    tick: int
    previous: Optional[CellId] = None
    initial_attach: bool = False


@dataclass
class LocationDB:
    """
    Most recent reported cell of each node.

    Single writer (the simulation thread); snapshot() gives readers a private copy.
    """
    records: Dict[str, LocationRecord] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def get(self, node_id: str) -> Optional[LocationRecord]:
        return self.records.get(node_id)

    def record(self, node_id: str, cell: CellId, tick: int, initial_attach: bool = False) -> LocationRecord:
        entry = LocationRecord(cell=tuple(cell), tick=tick, initial_attach=initial_attach)
        with self._lock:
            self.records[node_id] = entry
        return entry

    def snapshot(self) -> Dict[str, LocationRecord]:
        with self._lock:
            return dict(self.records)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.records

    def __len__(self) -> int:
        return len(self.records)


def cell_of(grid: CellGrid, position: Point2D) -> CellId:
    """
    Map a position to its cell.

    Interior edges belong to the higher cell; the top and right room edges
    belong to the last row and column.

    Raises:
        GridRangeError: If the position is outside the grid
    """
    if not (0 <= position.x <= grid.width and 0 <= position.y <= grid.height):
        raise GridRangeError(
            f"Position ({position.x}, {position.y}) is outside the {grid.width} x {grid.height} m grid")
    row = min(int(math.floor(position.y / grid.cell_size)), grid.rows - 1)
    col = min(int(math.floor(position.x / grid.cell_size)), grid.cols - 1)
    return (row, col)


def search_order(grid: CellGrid, c: CellId) -> List[CellId]:
    """
    Vicinity of c as a probe list: BFS level from c, row-major within a level.

    Reporting cells other than c are never entered, so the traversal stops at them.
    """
    start = grid.require(c)
    order = [start]
    visited: Set[CellId] = {start}
    frontier = [start]
    while frontier:
        level: Set[CellId] = set()
        for cell in frontier:
            for neighbor in grid.neighbors(cell):
                if neighbor in visited or grid.is_reporting(neighbor):
                    continue
                visited.add(neighbor)
                level.add(neighbor)
        frontier = sorted(level)
        order.extend(frontier)
    return order


def vicinity(grid: CellGrid, c: CellId) -> Set[CellId]:
    """
    c plus every non-reporting cell reachable from c through non-reporting cells.

    Raises:
        GridRangeError: If c is not a grid cell
    """
    return set(search_order(grid, c))


def attach(db: LocationDB, grid: CellGrid, node: str, cell: CellId, tick: int) -> LocationUpdate:
    """Mandatory registration at a node's first appearance, flagged when the cell is not reporting."""
    cell = grid.require(cell)
    flagged = not grid.is_reporting(cell)
    db.record(node, cell, tick, initial_attach=flagged)
    logger.debug(f"Node {node} attached in cell {cell} at tick {tick} (flagged={flagged})")
    return LocationUpdate(node_id=node, cell=cell, tick=tick, initial_attach=flagged)


def on_move(db: LocationDB, grid: CellGrid, node: str, new_cell: CellId, tick: int) -> Optional[LocationUpdate]:
    """
    Apply the reporting-cell rule to a cell entry.

    Returns:
        The update when new_cell is reporting and differs from the last record, else None
    """
    new_cell = grid.require(new_cell)
    if not grid.is_reporting(new_cell):
        return None
    previous = db.get(node)
    if previous is not None and previous.cell == new_cell:
        return None
    db.record(node, new_cell, tick)
    logger.debug(f"Node {node} reported cell {new_cell} at tick {tick}")
    return LocationUpdate(
        node_id=node,
        cell=new_cell,
        tick=tick,
        previous=previous.cell if previous else None,
    )


def locate(
    db: LocationDB,
    grid: CellGrid,
    node: str,
    true_cell_fn: Callable[[CellId], bool],
) -> Tuple[CellId, List[CellId]]:
    """
    Page a node: probe its vicinity in search order until true_cell_fn says found.

    Nodes without a record are searched over the whole grid in row-major order.

    Args:
        db: Location database
        grid: Cell grid
        node: Node to find
        true_cell_fn: Probe callback, True when the node answers in that cell

    Returns:
        (found cell, cells probed in order)

    Raises:
        SearchMissError: When no probed cell answers
    """
    record = db.get(node)
    candidates: Iterable[CellId] = search_order(grid, record.cell) if record else grid.cells()

    probed: List[CellId] = []
    for cell in candidates:
        probed.append(cell)
        if true_cell_fn(cell):
            return cell, probed

    logger.warning(f"Search miss for node {node} after probing {len(probed)} cells")
    raise SearchMissError(f"Node {node} not found in {len(probed)} probed cells", node_id=node, probed=probed)


def cells_along(grid: CellGrid, start: Point2D, end: Point2D) -> List[CellId]:
    """
    Cells a straight segment passes through, in travel order, starting with the start cell.

    Consecutive cells share an edge. A segment through an exact corner steps in x first.
    """
    current = cell_of(grid, start)
    last = cell_of(grid, end)
    path = [current]
    if current == last:
        return path

    size = grid.cell_size
    dx, dy = end.x - start.x, end.y - start.y
    step_col = 1 if dx > 0 else -1
    step_row = 1 if dy > 0 else -1

    def first_crossing(origin: float, delta: float, index: int, step: int) -> float:
        if delta == 0:
            return math.inf
        boundary = (index + 1) * size if step > 0 else index * size
        return (boundary - origin) / delta

    row, col = current
    t_col = first_crossing(start.x, dx, col, step_col)
    t_row = first_crossing(start.y, dy, row, step_row)
    dt_col = size / abs(dx) if dx != 0 else math.inf
    dt_row = size / abs(dy) if dy != 0 else math.inf

    # bounded by the Manhattan distance in cells
    for _ in range(abs(last[0] - row) + abs(last[1] - col) + 2):
        if (row, col) == last:
            break
        if t_col <= t_row and col != last[1]:
            col += step_col
            t_col += dt_col
        elif row != last[0]:
            row += step_row
            t_row += dt_row
        else:
            col += step_col
            t_col += dt_col
        path.append((row, col))
    return path
