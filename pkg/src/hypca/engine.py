"""Synchronous execution of the automaton on two substrates.

A TrackedRegion is the finite verification model: a handful of named
cells, each with p ordered neighbour slots bound either to another
tracked cell or to a frozen environment state.  This mirrors the
checking-program setup where a table row lists, for every cell under
inspection, which neighbours are wired to other inspected cells and
which ones never change.

A sparse configuration is a map from ball coordinates to non-quiescent
states; everything absent is white.  Both substrates step synchronously:
every new state is computed from the previous snapshot only.

Trace rows follow the convention of the execution tables: row t holds
the states BEFORE step t is applied, so row 1 is the idle configuration.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .rulecore import B, MissingRule, RuleTable, W, lookup
from .tiling import CellCoord, TilingBall

# A slot is either the index of another tracked cell (int) or a frozen
# environment state ("W" / "B") that no step ever rewrites.
Slot = int | str


class SupportEscape(RuntimeError):
    """Non-quiescent state reached the outermost ring of the ball."""


class ColumnMismatch(ValueError):
    """Two traces with different watched-cell columns were compared."""


@dataclass(frozen=True)
class TrackedCell:
    id: int
    name: str
    slots: tuple[Slot, ...]


@dataclass
class TrackedRegion:
    """Named cells with their current states.

    one_sided lists (from, to) name pairs where `from` references `to`
    but `to` deliberately models `from` as frozen environment; every
    other asymmetric reference is a wiring bug.
    """

    cells: list[TrackedCell]
    states: list[str]
    one_sided: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        self._index = {c.name: c.id for c in self.cells}
        if len(self._index) != len(self.cells):
            raise ValueError("duplicate cell names in region")

    def index(self, name: str) -> int:
        return self._index[name]

    def state_of(self, name: str) -> str:
        return self.states[self._index[name]]

    def context(self, cid: int) -> str:
        """The p neighbour states of one cell, read from the snapshot."""
        out = []
        for slot in self.cells[cid].slots:
            out.append(self.states[slot] if isinstance(slot, int) else slot)
        return "".join(out)

    def copy(self) -> "TrackedRegion":
        return TrackedRegion(self.cells, list(self.states), self.one_sided)


def make_region(
    blueprint: dict[str, tuple[str, list[str]]],
    one_sided: frozenset[tuple[str, str]] = frozenset(),
) -> TrackedRegion:
    """Build a region from name -> (state, slots), slots "W"/"B"/"@name".

    Raises KeyError for a slot referencing an unknown name.
    """
    order = list(blueprint)
    ids = {name: i for i, name in enumerate(order)}
    cells = []
    states = []
    for name in order:
        state, slots = blueprint[name]
        bound: list[Slot] = []
        for s in slots:
            if s.startswith("@"):
                bound.append(ids[s[1:]])
            elif s in (W, B):
                bound.append(s)
            else:
                raise ValueError(f"bad slot {s!r} in cell {name}")
        cells.append(TrackedCell(ids[name], name, tuple(bound)))
        states.append(state)
    return TrackedRegion(cells, states, one_sided)


def check_symmetry(region: TrackedRegion) -> list[str]:
    """Wiring violations: refs without a back-ref and not declared one-sided."""
    problems = []
    for cell in region.cells:
        for slot in cell.slots:
            if not isinstance(slot, int):
                continue
            other = region.cells[slot]
            if cell.id in other.slots:
                continue
            if (cell.name, other.name) in region.one_sided:
                continue
            problems.append(f"{cell.name} -> {other.name} has no back-reference")
    return problems


# --------------------------------------------------------------- stepping

def step(region: TrackedRegion, table: RuleTable) -> TrackedRegion:
    """One synchronous step.  Environment slots never change."""
    nxt = []
    for cell in region.cells:
        try:
            nxt.append(lookup(table, region.states[cell.id], region.context(cell.id)))
        except MissingRule as err:
            raise MissingRule(f"cell {cell.name}: {err}") from None
    return TrackedRegion(region.cells, nxt, region.one_sided)


@dataclass
class Trace:
    """Time-indexed states of the watched cells; rows[k] is time k+1."""

    columns: tuple[str, ...]
    rows: list[tuple[str, ...]]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("ragged trace row")

    def to_csv(self) -> str:
        lines = ["t," + ",".join(self.columns)]
        for t, row in enumerate(self.rows, start=1):
            lines.append(f"{t}," + ",".join(row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "Trace":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        header = lines[0].split(",")
        if header[0] != "t":
            raise ValueError(f"trace header must start with 't', got {header[0]!r}")
        rows = []
        for ln in lines[1:]:
            parts = ln.split(",")
            rows.append(tuple(parts[1:]))
        return cls(tuple(header[1:]), rows)


def run(
    region: TrackedRegion,
    table: RuleTable,
    steps: int,
    watch: list[str],
    injections: list[tuple[int, str, int]] = (),
) -> Trace:
    """Run for the given number of rows, recording the watched cells.

    An injection (t, port, n) forces the port cell black at times
    t .. t+n-1, overriding whatever the step computed; n=2 sends a
    two-particle convoy.  Row t is recorded after the injections for
    time t are applied.
    """
    idx = [region.index(name) for name in watch]
    due = defaultdict(list)
    for t, port, n in injections:
        for k in range(n):
            due[t + k].append(region.index(port))
    cur = region.copy()
    rows = []
    for t in range(1, steps + 1):
        for cid in due.get(t, ()):
            cur.states[cid] = B
        rows.append(tuple(cur.states[i] for i in idx))
        if t < steps:
            try:
                cur = step(cur, table)
            except MissingRule as err:
                raise MissingRule(f"t={t + 1}: {err}") from None
    return Trace(tuple(watch), rows)


def trace_diff(actual: Trace, expected: Trace) -> list[tuple[int, str, str, str]]:
    """(time, cell, expected, actual) for every disagreeing entry."""
    if actual.columns != expected.columns:
        raise ColumnMismatch(f"{actual.columns} vs {expected.columns}")
    report = []
    depth = max(len(actual.rows), len(expected.rows))
    for k in range(depth):
        arow = actual.rows[k] if k < len(actual.rows) else ("-",) * len(actual.columns)
        erow = expected.rows[k] if k < len(expected.rows) else ("-",) * len(expected.columns)
        for name, a, e in zip(actual.columns, arow, erow):
            if a != e:
                report.append((k + 1, name, e, a))
    return report


# ----------------------------------------------------------- sparse balls

def region_ball(
    blueprint: dict[str, tuple[str, list[str]]],
) -> tuple[TilingBall, dict[CellCoord, str], dict[str, CellCoord]]:
    """Plant a tracked region inside a synthetic ball for ``step_sparse``.

    Tracked cells become interior tiles wired slot for slot like the
    blueprint.  A white environment slot reads as beyond-the-ball white;
    every black environment slot becomes a dedicated milestone tile, part
    of the configuration, fenced off by its own frontier pads.  Dedicated
    tiles never share a neighbour, so no environment context ever collects
    more than two blacks and the quiescence default keeps the surroundings
    still; anything pushed past them trips the frontier check.

    Returns (ball, config, tiles): the synthetic ball, the idle sparse
    configuration, and the name -> tile map.
    """
    if not blueprint:
        raise ValueError("empty blueprint")
    p = len(next(iter(blueprint.values()))[1])
    tiles = {name: CellCoord(1, i + 1) for i, name in enumerate(blueprint)}
    ball = TilingBall(p, 2)
    config: dict[CellCoord, str] = {}
    milestones: list[CellCoord] = []
    pads: list[CellCoord] = []
    for name, (state, slots) in blueprint.items():
        if len(slots) != p:
            raise ValueError(f"cell {name} has {len(slots)} slots, want {p}")
        if state == B:
            config[tiles[name]] = B
        row: list[CellCoord | None] = []
        for s in slots:
            if s.startswith("@"):
                row.append(tiles[s[1:]])
            elif s == W:
                row.append(None)
            elif s == B:
                m = CellCoord(2, len(milestones) + 1)
                milestones.append(m)
                config[m] = B
                fence: list[CellCoord] = []
                for _ in range(p - 1):
                    q = CellCoord(3, len(pads) + 1)
                    pads.append(q)
                    ball.cells[q] = [m] + [None] * (p - 1)
                    fence.append(q)
                ball.cells[m] = [tiles[name], *fence]
                row.append(m)
            else:
                raise ValueError(f"bad slot {s!r} in cell {name}")
        ball.cells[tiles[name]] = row
    ball.rings = [list(tiles.values()), milestones, pads]
    return ball, config, tiles


def step_sparse(
    config: dict[CellCoord, str],
    table: RuleTable,
    ball: TilingBall,
) -> dict[CellCoord, str]:
    """Synchronous update of a sparse configuration over a ball.

    Only cells that are black or adjacent to a black cell can change;
    everything else keeps the quiescent default.  Neighbours beyond the
    ball boundary read as white, which is only sound while the support
    stays off the outermost ring, hence SupportEscape.
    """
    frontier = set(ball.rings[-1]) if ball.rings else set()
    for coord in config:
        if coord not in ball.cells:
            raise SupportEscape(f"{coord} outside the ball")
        if coord in frontier:
            raise SupportEscape(f"{coord} on the outermost ring")

    candidates = set(config)
    for coord in config:
        for nb in ball.cells[coord]:
            if nb is not None:
                candidates.add(nb)

    out: dict[CellCoord, str] = {}
    for coord in candidates:
        state = config.get(coord, W)
        ctx = "".join(
            W if nb is None else config.get(nb, W) for nb in ball.cells[coord]
        )
        try:
            new = lookup(table, state, ctx)
        except MissingRule as err:
            raise MissingRule(f"cell {coord}: {err}") from None
        if new != W:
            if coord in frontier:
                raise SupportEscape(f"{coord} turned {new} on the outermost ring")
            out[coord] = new
    return out
