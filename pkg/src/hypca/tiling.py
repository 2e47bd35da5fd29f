"""Cell coordinates and neighbourhoods on the {p,3} tiling, p >= 7.

The tiling is split into a central tile plus p congruent sectors.  Each
sector is spanned by a tree: white nodes have p-4 sons, black nodes p-5,
and in both cases the penultimate son is black, the rest are white.  Nodes
of one sector are numbered level by level, 1 at the root, left to right,
so ring r of the ball around the centre is the concatenation of the p
sector level-(r-1) blocks.

Two independent constructions of the ball are provided.

``build_ball`` glues p-gons edge by edge, three tiles around every vertex,
ring after ring.  It never consults the coordinate arithmetic and serves
as the reference for adjacency.

``neighbors`` computes the p neighbours of a cell arithmetically, father
first, counterclockwise.  The subtle part is which tiles touch across
son-block boundaries.  Every consecutive ring pair (u, u') shares one
corner tile J(u, u') of the next ring, touching both.  The ownership
rule, checked exhaustively against the glued ball, is

    J(u, u') = first son of u'   if u is black,
               last son of u     if u' is black or u, u' are siblings,
               last son of u     if u, u' span a block boundary and u
                                 itself has two fathers,
               first son of u'   otherwise (u a one-father white).

Applied one ring up, the same rule decides which tiles have two fathers
("junction" tiles): the first son of a white father f whenever
J(f-1, f) is that son, and the last son of f whenever J(f, f+1) is.
Junction tiles are always white.

The number of a node determines its colour through the digit expansion
of ``to_digits``: black if and only if the last digit is 0.  The digits
use the basis u_i = (size of tree level i-1), greedily from the top,
which makes the expansion maximal in length and then lexicographically
maximal; digits stay in 0..p-5.  At p=7 the basis is 1, 3, 8, 21, ...
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class NodeKind(Enum):
    WHITE = "white"
    BLACK = "black"


@dataclass(frozen=True, order=True)
class CellCoord:
    """Centre is (0, 0); otherwise sector in 1..p, number >= 1 in-sector."""

    sector: int
    number: int

    @property
    def is_center(self) -> bool:
        return self.sector == 0

    def __str__(self) -> str:
        if self.is_center:
            return "C"
        return f"s{self.sector}.{self.number}"


CENTER = CellCoord(0, 0)


def parse_cell(text: str) -> CellCoord:
    text = text.strip()
    if text == "C":
        return CENTER
    if text.startswith("s") and "." in text:
        sec, num = text[1:].split(".", 1)
        if sec.isdigit() and num.isdigit() and int(sec) >= 1 and int(num) >= 1:
            return CellCoord(int(sec), int(num))
    raise ValueError(f"bad cell id {text!r}")


@dataclass(frozen=True)
class TilingParams:
    p: int

    def __post_init__(self):
        if self.p < 7:
            raise ValueError(f"{{p,3}} needs p >= 7, got p={self.p}")


def son_count(kind: NodeKind, p: int) -> int:
    TilingParams(p)
    return p - 4 if kind is NodeKind.WHITE else p - 5


def level_counts(p: int, n: int) -> list[tuple[int, int]]:
    """(whites, blacks) per tree level 0..n for one sector."""
    TilingParams(p)
    counts = [(1, 0)]
    for _ in range(n):
        w, b = counts[-1]
        counts.append(((p - 5) * w + (p - 6) * b, w + b))
    return counts


@lru_cache(maxsize=None)
def _totals(p: int, n: int) -> tuple[int, ...]:
    """Level sizes t_0..t_n for one sector."""
    return tuple(w + b for w, b in level_counts(p, n))


@lru_cache(maxsize=None)
def _cum_totals(p: int, n: int) -> tuple[int, ...]:
    """S_0..S_n with S_r = number of in-sector nodes through level r."""
    out = []
    acc = 0
    for t in _totals(p, n):
        acc += t
        out.append(acc)
    return tuple(out)


@lru_cache(maxsize=None)
def _word(p: int, r: int) -> str:
    """Colour word of one sector's level r (W/B characters)."""
    if r == 0:
        return "W"
    prev = _word(p, r - 1)
    white_sons = "W" * (p - 6) + "BW"
    black_sons = "W" * (p - 7) + "BW"
    return "".join(white_sons if ch == "W" else black_sons for ch in prev)


@lru_cache(maxsize=None)
def _prefix_sons(p: int, r: int) -> tuple[int, ...]:
    """Cumulative son counts over the level-r word, length len(word)+1."""
    sons = [0]
    for ch in _word(p, r):
        sons.append(sons[-1] + (p - 4 if ch == "W" else p - 5))
    return tuple(sons)


def _locate(p: int, number: int) -> tuple[int, int]:
    """In-sector number -> (level, 0-based position inside the level)."""
    if number < 1:
        raise ValueError(f"node numbers start at 1, got {number}")
    r = 0
    while _cum_totals(p, r)[-1] < number:
        r += 1
    cums = _cum_totals(p, r)
    level = bisect_right(cums, number - 1)
    start = 0 if level == 0 else cums[level - 1]
    return level, number - start - 1


def _level_start(p: int, level: int) -> int:
    """In-sector number of the first node of the given level."""
    if level == 0:
        return 1
    return _cum_totals(p, level - 1)[-1] + 1


# ------------------------------------------------------------------- digits


def to_digits(c: CellCoord, p: int) -> tuple[int, ...]:
    """Greedy expansion of the node number over the level-size basis."""
    TilingParams(p)
    if c.is_center:
        raise ValueError("the centre tile has no digits")
    n = c.number
    r = 0
    while _totals(p, r)[-1] <= n:
        r += 1
    basis = _totals(p, r)  # t_0 .. t_r with t_r > n
    digits: list[int] = []
    rem = n
    for u in reversed(basis):
        if u > rem and not digits:
            continue
        digits.append(rem // u)
        rem %= u
    assert rem == 0
    return tuple(digits)


def node_kind(c: CellCoord, p: int) -> NodeKind:
    """Black nodes are exactly those whose digit expansion ends in 0."""
    if c.is_center:
        raise ValueError("the centre tile has no tree colour")
    return NodeKind.BLACK if to_digits(c, p)[-1] == 0 else NodeKind.WHITE


# ------------------------------------------------------- ring arithmetic

# Ring positions are global and 0-based: (sector-1) * t_r + level position,
# modulo p * t_r.  Helpers below work on (p, level, ring position).


def _split(p: int, r: int, ring_pos: int) -> tuple[int, int]:
    """Ring position -> (sector, 0-based level position)."""
    t = _totals(p, r)[-1]
    ring_pos %= p * t
    return ring_pos // t + 1, ring_pos % t


def _join(p: int, r: int, sector: int, pos: int) -> int:
    t = _totals(p, r)[-1]
    return ((sector - 1) * t + pos) % (p * t)


def _coord(p: int, r: int, ring_pos: int) -> CellCoord:
    sector, pos = _split(p, r, ring_pos)
    return CellCoord(sector, _level_start(p, r) + pos)


def _color(p: int, r: int, ring_pos: int) -> str:
    _, pos = _split(p, r, ring_pos)
    return _word(p, r)[pos]


def _father_of(p: int, r: int, ring_pos: int) -> tuple[int, bool, bool]:
    """Father's ring position on ring r-1, plus (first son?, last son?)."""
    sector, pos = _split(p, r, ring_pos)
    sons = _prefix_sons(p, r - 1)
    f_pos = bisect_right(sons, pos) - 1
    first = sons[f_pos] == pos
    last = sons[f_pos + 1] == pos + 1
    return _join(p, r - 1, sector, f_pos), first, last


def _first_son(p: int, r: int, ring_pos: int) -> int:
    """Ring position on ring r+1 of the first son."""
    sector, pos = _split(p, r, ring_pos)
    return _join(p, r + 1, sector, _prefix_sons(p, r)[pos])


def _last_son(p: int, r: int, ring_pos: int) -> int:
    sector, pos = _split(p, r, ring_pos)
    return _join(p, r + 1, sector, _prefix_sons(p, r)[pos + 1] - 1)


@lru_cache(maxsize=None)
def _corner(p: int, r: int, u: int) -> str:
    """Owner of the corner tile J(u, u+1) on ring r+1.

    "L" means it is u's last son, "R" means it is (u+1)'s first son.
    """
    if r == 0:
        return "R"  # sector roots: each corner is the right root's first son
    u %= p * _totals(p, r)[-1]
    if _color(p, r, u) == "B":
        return "R"
    if _color(p, r, u + 1) == "B":
        return "L"
    fu, _, _ = _father_of(p, r, u)
    fv, _, _ = _father_of(p, r, u + 1)
    if fu == fv:
        return "L"  # white siblings
    return "L" if _is_junction(p, r, u) else "R"


@lru_cache(maxsize=None)
def _is_junction(p: int, r: int, ring_pos: int) -> bool:
    """Does this tile touch two tiles of the previous ring?"""
    if r == 0:
        return False
    ring_pos %= p * _totals(p, r)[-1]
    f, first, last = _father_of(p, r, ring_pos)
    if first and _color(p, r - 1, f) == "W":
        return _corner(p, r - 1, f - 1) == "R"
    if last:
        return _corner(p, r - 1, f) == "L"
    return False


def father(c: CellCoord, p: int) -> CellCoord:
    """Tree father; the father of a sector root is the centre tile."""
    TilingParams(p)
    if c.is_center:
        raise ValueError("the centre tile has no father")
    r, pos = _locate(p, c.number)
    if r == 0:
        return CENTER
    f, _, _ = _father_of(p, r, _join(p, r, c.sector, pos))
    return _coord(p, r - 1, f)


def neighbors(c: CellCoord, p: int) -> list[CellCoord]:
    """The p neighbours, counterclockwise, father first.

    For the centre the list is the p sector roots in sector order.  The
    per-case assembly follows the junction rules in the module docstring;
    ``build_ball`` provides the independent cross-check.
    """
    TilingParams(p)
    if c.is_center:
        return [CellCoord(s, 1) for s in range(1, p + 1)]
    r, pos = _locate(p, c.number)

    if r == 0:
        # sector root: centre, both root mates, all of level 1, and the
        # next sector's first level-1 node (the junction it touches)
        sons = [CellCoord(c.sector, n) for n in range(2, p - 2)]
        nxt = c.sector % p + 1
        prv = (c.sector - 2) % p + 1
        return [CENTER, CellCoord(prv, 1), *sons,
                CellCoord(nxt, 2), CellCoord(nxt, 1)]

    rp = _join(p, r, c.sector, pos)
    lm, rm = rp - 1, rp + 1
    f, first, last = _father_of(p, r, rp)
    color = _color(p, r, rp)
    junction = _is_junction(p, r, rp)
    kind = NodeKind.WHITE if color == "W" else NodeKind.BLACK
    sons_lo = _first_son(p, r, rp)
    sons = [_coord(p, r + 1, sons_lo + i) for i in range(son_count(kind, p))]
    f_cell = _coord(p, r - 1, f)
    lm_cell = _coord(p, r, lm)
    rm_cell = _coord(p, r, rm)

    if junction and first:
        second = _coord(p, r - 1, f - 1)
        out = [f_cell, second, lm_cell, *sons, rm_cell]
    elif junction and last:
        second = _coord(p, r - 1, f + 1)
        out = [f_cell, lm_cell, *sons, rm_cell, second]
    else:
        # J(lm, c) is an extra neighbour unless it is c's own first son;
        # J(c, rm) is an extra neighbour unless it is c's own last son
        mid: list[CellCoord] = list(sons)
        if _corner(p, r, lm) == "L":
            mid.insert(0, _coord(p, r + 1, _last_son(p, r, lm)))
        if _corner(p, r, rp) == "R":
            mid.append(_coord(p, r + 1, _first_son(p, r, rm)))
        out = [f_cell, lm_cell, *mid, rm_cell]

    if len(out) != p:
        raise AssertionError(
            f"neighbour assembly for {c} (p={p}) gave {len(out)} tiles"
        )
    return out


# --------------------------------------------------------------- glued ball


class TilingBall:
    """Finite ball of the tiling with explicit adjacency.

    ``cells`` maps CellCoord -> neighbour list, counterclockwise, with
    None for tiles beyond the ball; ``rings[r]`` lists ring r in
    counterclockwise order starting at sector 1.
    """

    def __init__(self, p: int, radius: int):
        self.p = p
        self.radius = radius
        self.cells: dict[CellCoord, list[CellCoord | None]] = {}
        self.rings: list[list[CellCoord]] = []

    def ring_sizes(self) -> list[int]:
        return [len(r) for r in self.rings]

    def dump(self) -> str:
        lines = []
        for ring in self.rings:
            for coord in ring:
                row = " ".join(
                    "-" if n is None else str(n) for n in self.cells[coord]
                )
                lines.append(f"{coord}: {row}")
        return "\n".join(lines) + "\n"


def build_ball(p: int, radius: int) -> TilingBall:
    """Glue the ball of the given radius, ring by ring.

    Pure surgery on p-gons with three tiles around every vertex: between
    two consecutive tiles of a ring the outer corner closes with a single
    shared tile of the next ring, and the free edges in between each
    spawn a sole tile.  Slot layout of a new tile, counterclockwise:
    0 = father (left parent if shared), 1 = left ring mate, then the free
    outward arc, then right ring mate, and for shared tiles slot p-1 is
    the right parent.  Coordinates are assigned by walk order; the walk
    starts every ring at sector 1's first tile, as the level numbering
    does, so labels line up by construction.
    """
    TilingParams(p)
    if radius < 0:
        raise ValueError("radius must be >= 0")

    nbrs: list[list] = [[None] * p]  # tile 0 is the centre
    rings: list[list[int]] = [[0]]
    shared: set[int] = set()

    def new_tile() -> int:
        nbrs.append([None] * p)
        return len(nbrs) - 1

    boundary: list[tuple[int, int]] = []
    if radius >= 1:
        roots = [new_tile() for _ in range(p)]
        rings.append(roots)
        for i, t in enumerate(roots):
            nbrs[0][i] = t
            nbrs[t][0] = 0
            nbrs[t][1] = roots[i - 1]
            nbrs[t][p - 1] = roots[(i + 1) % p]
        boundary = [(t, s) for t in roots for s in range(2, p - 1)]
        boundary = boundary[-1:] + boundary[:-1]

    for _ in range(1, radius):
        edges = boundary
        m = len(edges)
        ring: list[int] = []
        i = 0
        while i < m:
            tile, slot = edges[i]
            nxt_tile, nxt_slot = edges[(i + 1) % m]
            t = new_tile()
            nbrs[t][0] = tile
            nbrs[tile][slot] = t
            if nxt_tile != tile:
                # corner between two ring tiles: t touches both
                nbrs[t][p - 1] = nxt_tile
                nbrs[nxt_tile][nxt_slot] = t
                shared.add(t)
                i += 2
            else:
                i += 1
            ring.append(t)
        for j, t in enumerate(ring):
            left = ring[j - 1]
            nbrs[t][1] = left
            nbrs[left][p - 2 if left in shared else p - 1] = t
        rings.append(ring)
        boundary = []
        for t in ring:
            hi = p - 2 if t in shared else p - 1
            boundary.extend((t, s) for s in range(2, hi))
        boundary = boundary[-1:] + boundary[:-1]

    ball = TilingBall(p, radius)
    labels: dict[int, CellCoord] = {0: CENTER}
    for r in range(1, len(rings)):
        t_r = _totals(p, r - 1)[-1]
        start = _level_start(p, r - 1)
        if len(rings[r]) != p * t_r:
            raise AssertionError(
                f"ring {r} built {len(rings[r])} tiles, expected {p * t_r}"
            )
        for idx, tile in enumerate(rings[r]):
            labels[tile] = CellCoord(idx // t_r + 1, start + idx % t_r)
    for ring_tiles in rings:
        for tile in ring_tiles:
            coord = labels[tile]
            ball.cells[coord] = [
                None if n is None else labels[n] for n in nbrs[tile]
            ]
    ball.rings = [[labels[t] for t in ring_tiles] for ring_tiles in rings]
    return ball
