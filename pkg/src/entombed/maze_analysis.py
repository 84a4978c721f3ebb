"""From 8-bit rows to the 40-column screen, plus solvability and statistics.

On screen each generated bit is doubled, a four-bit wall is glued to the
left, and the whole half is mirrored across the centre, so one 8-bit row
becomes 40 columns with fixed walls at both edges. The analyses here work
on that expanded grid.

"Solvable" is an analytic proxy, not a game rule: the real game scrolls
continuously and has no fixed entrance, so we ask whether any open cell
in the top row reaches any open cell in the bottom row moving between
4-neighbour open cells. The game demonstrably produces mazes with no such
path; that is what the make-break pickup exists to fix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .mazegen import (
    ModelBitSource,
    MysteryTable,
    PostprocessRule,
    default_table,
    generate_maze,
)
from .prng import buggy_step

GRID_WIDTH = 40


def expand_row(row: int) -> Tuple[int, ...]:
    """One 8-bit row as 40 wall bits: side wall, doubled bits, mirror."""
    if not 0 <= row <= 0xFF:
        raise ValueError(f"row must be an 8-bit value, got {row!r}")
    half = [1, 1, 1, 1]
    for i in range(7, -1, -1):
        bit = (row >> i) & 1
        half.append(bit)
        half.append(bit)
    return tuple(half + half[::-1])


def render_row(row: int) -> str:
    """Render a row as text: 20 characters per half, one space between.

    Walls are ``X``, open cells ``_``; the right half mirrors the left.
    """
    if not 0 <= row <= 0xFF:
        raise ValueError(f"row must be an 8-bit value, got {row!r}")
    half = "XXXX"
    for i in range(7, -1, -1):
        half += "XX" if (row >> i) & 1 else "__"
    return half + " " + half[::-1]


def parse_row(line: str) -> int:
    """Invert :func:`render_row`; raises ValueError on malformed lines."""
    if len(line) != 41 or line[20] != " ":
        raise ValueError("rendered row must be 20 chars, space, 20 chars")
    half, mirror = line[:20], line[21:]
    if mirror != half[::-1]:
        raise ValueError("right half is not the mirror of the left")
    if half[:4] != "XXXX":
        raise ValueError("missing fixed side wall")
    row = 0
    for i in range(8):
        pair = half[4 + 2 * i : 6 + 2 * i]
        if pair == "XX":
            row = (row << 1) | 1
        elif pair == "__":
            row = row << 1
        else:
            raise ValueError(f"cell pair {pair!r} is neither doubled wall nor doubled open")
    return row


@dataclass
class Grid:
    """A wall matrix with the screen's structure baked in.

    Every row must be 40 cells of 0/1 with the fixed side walls, the
    left/right mirror symmetry and the doubled generated bits. Build one
    from 8-bit rows with :meth:`from_rows`.
    """

    cells: List[Tuple[int, ...]]

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("grid must have at least one row")
        for r, row in enumerate(self.cells):
            if len(row) != GRID_WIDTH:
                raise ValueError(f"grid row {r} is not {GRID_WIDTH} cells wide")
            if any(cell not in (0, 1) for cell in row):
                raise ValueError(f"grid row {r} has non-binary cells")
            if row[:4] != (1, 1, 1, 1) or row[36:] != (1, 1, 1, 1):
                raise ValueError(f"grid row {r} is missing its fixed side walls")
            if any(row[39 - j] != row[j] for j in range(GRID_WIDTH // 2)):
                raise ValueError(f"grid row {r} breaks mirror symmetry")
            if any(row[2 * j + 4] != row[2 * j + 5] for j in range(8)):
                raise ValueError(f"grid row {r} breaks bit doubling")

    @classmethod
    def from_rows(cls, rows: Sequence[int]) -> "Grid":
        return cls([expand_row(r) for r in rows])

    @property
    def width(self) -> int:
        return GRID_WIDTH

    @property
    def height(self) -> int:
        return len(self.cells)


@dataclass
class SolvabilityReport:
    solvable: bool
    witness_path: Optional[List[Tuple[int, int]]] = None


def is_solvable(grid: Grid) -> SolvabilityReport:
    """Breadth-first search from every open top-row cell toward the bottom.

    Movement is between 4-neighbour open cells. When a bottom-row cell is
    reached the report carries one witness path, top to bottom.
    """
    height, width = grid.height, grid.width
    cells = grid.cells
    parents: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}
    queue: deque = deque()
    for c in range(width):
        if cells[0][c] == 0:
            parents[(0, c)] = None
            queue.append((0, c))
    while queue:
        r, c = queue.popleft()
        if r == height - 1:
            path = []
            node: Optional[Tuple[int, int]] = (r, c)
            while node is not None:
                path.append(node)
                node = parents[node]
            path.reverse()
            return SolvabilityReport(solvable=True, witness_path=path)
        for nr, nc in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if 0 <= nr < height and 0 <= nc < width and cells[nr][nc] == 0:
                if (nr, nc) not in parents:
                    parents[(nr, nc)] = (r, c)
                    queue.append((nr, nc))
    return SolvabilityReport(solvable=False)


@dataclass
class PatternStats:
    """Tallies from a batch of generated mazes."""

    rows_generated: int
    condition1_fires: int
    condition2_fires: int
    mazes_generated: int
    unsolvable_count: int


def derived_seed(seed: int, index: int) -> int:
    """Per-maze source seed: base seed plus maze index, through the PRNG."""
    return buggy_step((seed + index) & 0xFFFF)


def maze_survey(
    n_mazes: int,
    rows_per_maze: int = 60,
    *,
    seed: int,
    table: Optional[MysteryTable] = None,
) -> PatternStats:
    """Generate ``n_mazes`` mazes with the model source and tally behaviour.

    Maze ``i`` uses a model source seeded with :func:`derived_seed`, so a
    fixed ``seed`` reproduces the whole batch exactly.
    """
    if n_mazes < 1:
        raise ValueError(f"n_mazes must be >= 1, got {n_mazes!r}")
    if table is None:
        table = default_table()
    condition1 = 0
    condition2 = 0
    unsolvable = 0
    for i in range(n_mazes):
        source = ModelBitSource(derived_seed(seed, i))
        rows, traces = generate_maze(source, rows_per_maze, table)
        for trace in traces:
            if trace.postprocess_fired is PostprocessRule.CONDITION1:
                condition1 += 1
            elif trace.postprocess_fired is PostprocessRule.CONDITION2:
                condition2 += 1
        if not is_solvable(Grid.from_rows(rows)).solvable:
            unsolvable += 1
    return PatternStats(
        rows_generated=n_mazes * rows_per_maze,
        condition1_fires=condition1,
        condition2_fires=condition2,
        mazes_generated=n_mazes,
        unsolvable_count=unsolvable,
    )


def table_stats(table: MysteryTable) -> Dict[str, int]:
    """Count the rule variants across the 32 table entries."""
    counts = {"wall": 0, "open": 0, "random": 0}
    for rule in table.entries.values():
        counts[rule.value] += 1
    return counts
