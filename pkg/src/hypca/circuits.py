"""Hand-wired circuit templates: tracks, round-abouts and the three switches.

Every template is a small tracked region described cell by cell.  A cell's
slot k names its k-th counterclockwise neighbour starting from the father,
so a blueprint line reads exactly like one row of an idle-configuration
figure: ``B`` for a frozen black milestone, ``W`` for frozen white, and
``@name`` for a neighbour whose state is simulated.

The p=13 wirings are fixed data.  For p >= 17 the same roles recur with
slot positions that grow with p: every wide cell keeps fifteen anchor
slots and stretches only its white run, so the marks below p-relative
slots like ``p - 3`` are the whole difference between one p and the next.
Tracks exist in two orientations because a cell's father sits on a
different side depending on which way the path runs through the tiling;
``direction`` selects one of them.

Scenario plumbing lives here too: the named catalog with expected traces,
and a tiny text format so runs can be described in files.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from importlib import resources

from .engine import Trace, TrackedRegion, make_region, run
from .rulecore import B, W

__all__ = [
    "CircuitTemplate",
    "Scenario",
    "UnsupportedP",
    "UnknownRole",
    "DanglingRef",
    "build_track",
    "build_roundabout",
    "build_fixed_switch",
    "build_flipflop",
    "build_memory_switch",
    "scenario_catalog",
    "parse_scenario",
    "emit_scenario",
]


class UnsupportedP(ValueError):
    """Raised for a p that carries no railway: only 13 and >= 17 do."""


class UnknownRole(ValueError):
    """A scenario names a cell its template never declares."""


class DanglingRef(ValueError):
    """A neighbour list points at a cell that is never declared."""


def _check_p(p: int) -> None:
    if p != 13 and p < 17:
        raise UnsupportedP(f"no track layouts for p={p}: need 13 or >= 17")


def _cell(p: int, state: str, marks: dict[int, str]) -> tuple[str, tuple[str, ...]]:
    """One blueprint entry; marks maps slot number (1-based) to B or @ref."""
    slots = [W] * p
    for k, v in marks.items():
        slots[k - 1] = v
    return state, tuple(slots)


# ---------------------------------------------------------------------------
# plain track cells
#
# (milestones, in-slot, out-slot) per (direction, kind).  A cell fires when
# its in-slot neighbour is black, keeps quiet while its out-slot neighbour
# is black, and its milestones never move.  The corner kind carries the
# doubled milestone of a turning path.

_P13_TRACK: dict[tuple[int, str], tuple[tuple[int, ...], int, int]] = {
    (1, "straight"): ((1, 2, 4, 6), 5, 3),
    (1, "corner"): ((1, 2, 4, 5, 7), 6, 3),
    (2, "straight"): ((1, 2, 10, 12), 11, 13),
    (2, "corner"): ((1, 2, 3, 4, 12), 11, 5),
}


def _track_layout(p: int, direction: int, kind: str) -> tuple[tuple[int, ...], int, int]:
    if direction not in (1, 2):
        raise ValueError(f"direction must be 1 or 2, got {direction!r}")
    _check_p(p)
    if p == 13:
        return _P13_TRACK[(direction, kind)]
    return _generic_track_layout(p, direction, kind)


# p-relative entries: a slot s <= 0 means p + s
_GENERIC_TRACK: dict[tuple[int, str], tuple[tuple[int, ...], int, int]] = {
    (1, "straight"): ((1, 4, 8), 3, 5),
    (2, "straight"): ((1, 4, -3), 2, 0),
    (1, "corner"): ((1, 2, 6, -2), 0, 3),
    (2, "corner"): ((1, 2, 5, -3), 3, 0),
}


def _generic_track_layout(p: int, direction: int, kind: str) -> tuple[tuple[int, ...], int, int]:
    miles, in_slot, out_slot = _GENERIC_TRACK[(direction, kind)]

    def at(s: int) -> int:
        return s if s > 0 else p + s

    return tuple(at(s) for s in miles), at(in_slot), at(out_slot)


def _track_marks(
    p: int, direction: int, kind: str, prev: str | None, nxt: str | None
) -> dict[int, str]:
    miles, in_slot, out_slot = _track_layout(p, direction, kind)
    marks: dict[int, str] = {k: B for k in miles}
    if prev is not None:
        marks[in_slot] = "@" + prev
    if nxt is not None:
        marks[out_slot] = "@" + nxt
    return marks


def build_track(
    p: int, length: int, shape: str = "straight", direction: int = 1
) -> "CircuitTemplate":
    """A one-way track of ``length`` cells named t1..tN, ends env-stubbed.

    shape "with-corners" replaces every third interior cell by the corner
    layout; "straight" uses the ordinary layout throughout.  The particle
    enters by forcing t1 and leaves past tN into the frozen surroundings.
    """
    if length < 3:
        raise ValueError(f"length must be >= 3, got {length}")
    if shape not in ("straight", "with-corners"):
        raise ValueError(f"shape must be straight or with-corners, got {shape!r}")
    cells: dict[str, tuple[str, tuple[str, ...]]] = {}
    for k in range(1, length + 1):
        kind = "straight"
        if shape == "with-corners" and 1 < k < length and k % 3 == 0:
            kind = "corner"
        prev = f"t{k - 1}" if k > 1 else None
        nxt = f"t{k + 1}" if k < length else None
        cells[f"t{k}"] = _cell(p, W, _track_marks(p, direction, kind, prev, nxt))
    return CircuitTemplate(
        name=f"track-{shape}-{length}",
        p=p,
        cells=cells,
        entries=("t1",),
        exits=(f"t{length}",),
    )


# ---------------------------------------------------------------------------
# round-about
#
# One branching unit per branch: the ring runs C->D->A->B and the fork at B
# always forwards into the exit track F, F1, F2.  Three sensors decide what
# an exit attempt means: BF guards the exit (its flash annihilates a
# two-particle convoy at F/F1), BC answers a BF flash by re-creating the
# particle on the ring cell past the fork, and CE appends a companion to a
# particle arriving from the access cell E.  A fresh arrival therefore
# becomes a convoy, is refused at the first branching it meets, and the
# re-created single particle leaves cleanly at the second.

def _branch_cells(p: int, i: int, n: int) -> dict[str, tuple[str, tuple[str, ...]]]:
    def nm(role: str, k: int) -> str:
        return role if n == 1 else f"{role}.{k % n}"

    A, Bc, C, D, E, F = (nm(r, i) for r in "ABCDEF")
    F1, F2, BF, BC, CE = (nm(r, i) for r in ("F1", "F2", "BF", "BC", "CE"))
    C1 = nm("C", i + 1)
    if p == 13:
        return {
            # ring segment feeding this unit's fork
            C: _cell(p, W, {1: B, 2: "@" + nm("B", i - 1), 3: "@" + nm("BC", i - 1),
                            4: "@" + nm("E", i - 1), 5: "@" + nm("CE", i - 1),
                            10: B, 11: B, 12: B, 13: "@" + D}),
            D: _cell(p, W, {1: B, 2: B, 3: "@" + A, 4: B, 5: "@" + C, 6: B}),
            A: _cell(p, W, {1: B, 2: B, 3: "@" + Bc, 4: B, 5: "@" + D, 6: B}),
            # the fork: forwards into F and touches the next ring cell
            Bc: _cell(p, W, {1: B, 2: "@" + A, 3: B, 8: B, 9: B,
                             10: "@" + F, 11: "@" + BF, 12: "@" + BC, 13: "@" + C1}),
            # exit track
            F: _cell(p, W, {1: B, 2: B, 3: "@" + F1, 4: "@" + BF, 5: "@" + Bc, 6: B}),
            F1: _cell(p, W, {1: B, 2: "@" + F2, 3: "@" + BF, 4: B, 12: B, 13: "@" + F}),
            F2: _cell(p, W, {1: B, 4: B, 5: "@" + F1, 6: B, 8: B, 11: "@" + BF, 12: B}),
            # access cell; slot 11 stays env white and is the injection side
            E: _cell(p, W, {1: "@" + BC, 2: B, 10: B, 12: "@" + CE, 13: "@" + C1}),
            # sensors, idle black
            BF: _cell(p, B, {1: "@" + Bc, 2: "@" + F, 3: "@" + F1, 4: "@" + F2,
                             5: B, 6: B, 7: B, 8: B, 10: B, 11: B, 13: "@" + BC}),
            BC: _cell(p, B, {1: "@" + Bc, 2: "@" + BF, 3: B, 4: B, 6: B, 7: B,
                             8: B, 9: B, 10: B, 12: "@" + E, 13: "@" + C1}),
            CE: _cell(p, B, {1: "@" + C1, 2: "@" + E, 4: B, 5: B, 6: B,
                             8: B, 9: B, 10: B, 12: B}),
        }
    s = p - 16  # widening of the single stretchable white run
    return {
        # ring segment feeding this unit's fork
        C: _cell(p, W, {1: B, 2: B, 3: B, 4: B, 8: B,
                        11 + s: "@" + D, 12 + s: "@" + nm("B", i - 1),
                        13 + s: "@" + nm("BC", i - 1),
                        14 + s: "@" + nm("E", i - 1),
                        15 + s: "@" + nm("CE", i - 1)}),
        D: _cell(p, W, {1: B, 3: "@" + C, 4: B, 5: "@" + A, 8: B}),
        A: _cell(p, W, {1: B, 3: "@" + D, 4: B, 5: "@" + Bc, 8: B}),
        # the fork: forwards into F and touches the next ring cell
        Bc: _cell(p, W, {1: B, 2: B, 3: B, 4: B, 7: B,
                         10 + s: "@" + F, 11 + s: "@" + BF, 12 + s: "@" + BC,
                         13 + s: "@" + C1, 14 + s: B, 15 + s: "@" + A}),
        # exit track; the guard BF stands in for F's middle milestone
        F: _cell(p, W, {1: B, 3: "@" + Bc, 4: "@" + BF, 5: "@" + F1,
                        6: "@" + F2, 8: B}),
        F1: _cell(p, W, {1: "@" + BF, 2: "@" + F, 4: B, 5: "@" + F2, 8: B}),
        F2: _cell(p, W, {1: B, 2: "@" + F1, 4: "@" + BF, 5: "@" + F, 8: B}),
        # access cell merging onto the ring cell past the fork
        E: _cell(p, W, {1: B, 3: "@" + CE, 4: B, 5: "@" + C1, 8: B}),
        # sensors; BF and BC idle black, CE idle white
        BF: _cell(p, B, {1: B, 2: B, 3: B, 4: B, 9: B,
                         12 + s: "@" + BC, 13 + s: "@" + Bc,
                         14 + s: "@" + F, 15 + s: "@" + F1}),
        BC: _cell(p, B, {1: B, 2: B, 3: B, 4: B, 7: B, 8: B,
                         13 + s: "@" + C1, 14 + s: "@" + Bc, 15 + s: "@" + BF}),
        CE: _cell(p, W, {1: B, 2: B, 3: B, 4: B, 7: B, 9: B,
                         14 + s: "@" + C1, 15 + s: "@" + E}),
    }


def build_roundabout(p: int, branch_count: int = 4) -> "CircuitTemplate":
    """Ring with ``branch_count`` branchings; branch i's access cell is E.i.

    A particle injected at E.i merges onto the ring just past branching i,
    so the first exit it meets belongs to branch i+1 and it actually leaves
    at branch i+2 (indices mod branch_count).  With branch_count=1 the ring
    closes on a single branching, cells keep their bare role names, and
    both passages reuse the same exit track.
    """
    _check_p(p)
    if branch_count < 1:
        raise ValueError(f"branch_count must be >= 1, got {branch_count}")
    cells: dict[str, tuple[str, tuple[str, ...]]] = {}
    for i in range(branch_count):
        cells.update(_branch_cells(p, i, branch_count))
    suffix = (lambda r, k: r) if branch_count == 1 else (lambda r, k: f"{r}.{k}")
    # for p >= 17 the guard's view of F2 moved out of its slot range
    one_sided = frozenset() if p == 13 else frozenset(
        (suffix("F2", i), suffix("BF", i)) for i in range(branch_count))
    return CircuitTemplate(
        name="crossing" if branch_count == 1 else f"roundabout-{branch_count}",
        p=p,
        cells=cells,
        entries=tuple(suffix("E", i) for i in range(branch_count)),
        exits=tuple(suffix("F2", i) for i in range(branch_count)),
        one_sided=one_sided,
    )


# ---------------------------------------------------------------------------
# switches
#
# All three share the shape: two one-way legs B and C merging into O, which
# feeds the single leg A.  The active switches run A-ward and keep a mark
# cell per leg (H beside B, K beside C); a black mark blocks its leg.  O
# sits next to the controller D, which never moves, so O carries D as a
# frozen black milestone and the pair is declared one-sided.

def build_fixed_switch(p: int) -> "CircuitTemplate":
    """Passive merge: particles from bB or bC leave through A, no marks."""
    _check_p(p)
    if p == 13:
        o_marks = {1: B, 2: B, 3: "@A", 4: B, 7: B, 8: "@C", 9: B,
                   10: "@B", 11: B}
    else:
        o_marks = {1: B, 2: B, 3: B, 5: B, 6: "@A", 8: B, 9: B, 10: B,
                   13: "@C", 14: B, 15: "@B"}
    cells = {
        "O": _cell(p, W, o_marks),
        "A": _cell(p, W, _track_marks(p, 1, "straight", "O", "aA")),
        "aA": _cell(p, W, _track_marks(p, 1, "straight", "A", None)),
        "B": _cell(p, W, _track_marks(p, 2, "straight", "bB", "O")),
        "bB": _cell(p, W, _track_marks(p, 2, "straight", None, "B")),
        "C": _cell(p, W, _track_marks(p, 1, "straight", "bC", "O")),
        "bC": _cell(p, W, _track_marks(p, 1, "straight", None, "C")),
    }
    return CircuitTemplate(
        name="fixed-switch", p=p, cells=cells,
        entries=("bB", "bC"), exits=("aA",),
    )


def _marks_for(selected: str) -> tuple[str, str]:
    # left leg is C: a black H blocks leg B, a black K blocks leg C
    if selected == "left":
        return B, W
    if selected == "right":
        return W, B
    raise ValueError(f"selected must be left or right, got {selected!r}")


def build_flipflop(p: int, selected: str = "left") -> "CircuitTemplate":
    """Active fork O -> B|C whose open leg toggles after every passage.

    The controller D flashes white one step after the open leg fires and
    the flash swaps both marks, so consecutive particles alternate legs.
    """
    _check_p(p)
    h, k = _marks_for(selected)
    if p == 13:
        cells = {
            "O": _cell(p, W, {1: B, 2: "@A", 3: B, 6: B, 7: "@C", 8: B, 9: "@B", 10: B}),
            "B": _cell(p, W, {1: B, 2: B, 3: "@aB", 4: B, 5: "@O", 6: "@D", 7: "@H",
                              10: B, 11: B}),
            "C": _cell(p, W, {1: B, 2: B, 5: B, 6: B, 9: "@K", 10: "@D", 11: "@O",
                              12: B, 13: "@aC"}),
            "D": _cell(p, B, {1: "@O", 2: "@C", 3: "@K", 4: B, 7: B, 10: B,
                              12: "@H", 13: "@B"}),
            "H": _cell(p, h, {1: "@B", 2: "@D", 3: B, 4: B, 5: B, 6: B, 7: B}),
            "K": _cell(p, k, {1: "@C", 3: B, 4: B, 5: B, 6: B, 7: B, 13: "@D"}),
        }
        one_sided = frozenset({("D", "O")})
    else:
        cells = {
            "O": _cell(p, W, {1: B, 2: "@A", 4: B, 5: B, 6: B, 9: "@C", 10: B,
                              11: "@B", 13: B, 14: B, 15: B}),
            "B": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 6: B, 7: B, 10: B,
                              11: "@aB", p - 3: "@O", p - 2: "@D", p - 1: "@H"}),
            "C": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 6: B, 7: B, 8: B,
                              p - 5: "@K", p - 4: "@D", p - 3: "@O", p - 1: "@aC"}),
            "D": _cell(p, B, {1: B, 2: B, 3: B, 4: B, 6: B, 8: B,
                              p - 5: "@H", p - 4: "@B", p - 2: "@C", p - 1: "@K"}),
            "H": _cell(p, h, {1: B, 2: B, 3: B, 4: B, 6: B, 9: B,
                              p - 2: "@B", p - 1: "@D"}),
            "K": _cell(p, k, {1: B, 2: B, 3: B, 4: B, 6: B, 7: B, 9: B,
                              p - 3: "@D", p - 2: "@C"}),
        }
        one_sided = frozenset()
    cells.update({
        "A": _cell(p, W, _track_marks(p, 1, "straight", "bA", "O")),
        "bA": _cell(p, W, _track_marks(p, 1, "straight", None, "A")),
        "aB": _cell(p, W, _track_marks(p, 1, "straight", "B", None)),
        "aC": _cell(p, W, _track_marks(p, 1, "straight", "C", None)),
    })
    return CircuitTemplate(
        name="flip-flop", p=p, cells=cells,
        entries=("bA",), exits=("aB", "aC"),
        selectable=selected, one_sided=one_sided,
    )


def build_memory_switch(p: int, selected: str = "left") -> "CircuitTemplate":
    """Active fork plus passive merge sharing one selection.

    The active half reads marks H, K like the flip-flop but its controller
    D keeps still during active passages.  The passive half merges X and Y
    into T under marks I, J and controller Z; a passive particle through
    the non-selected leg makes Z flash, which swaps I with J and starts a
    signal down the five-cell path Z1 .. D1.  When the signal reaches D1,
    D flashes and swaps H with K, so the next active particle follows the
    leg the passive side last used.  Passages through the selected passive
    leg change nothing.
    """
    _check_p(p)
    h, k = _marks_for(selected)
    # left pairs leg C with leg Y: a black I blocks (marks) leg X
    i, j = _marks_for(selected)
    if p == 13:
        cells = {
            # active half
            "O": _cell(p, W, {1: B, 2: "@A", 3: B, 6: B, 7: "@C", 8: B, 9: "@B", 10: B}),
            "B": _cell(p, W, {1: B, 2: B, 3: "@aB", 4: B, 5: "@O", 6: "@D", 7: "@H",
                              10: B, 11: B}),
            "C": _cell(p, W, {1: B, 2: B, 5: B, 6: B, 9: "@K", 10: "@D", 11: "@O",
                              12: B, 13: "@aC"}),
            "D": _cell(p, B, {1: "@O", 2: "@C", 3: "@K", 4: B, 6: B, 7: "@D1",
                              8: B, 9: B, 10: B, 12: "@H", 13: "@B"}),
            "H": _cell(p, h, {1: "@B", 2: "@D", 3: B, 4: B, 5: B, 6: B, 7: B}),
            "K": _cell(p, k, {1: "@C", 3: B, 4: B, 5: B, 6: B, 7: B, 13: "@D"}),
            # passive half
            "T": _cell(p, W, {1: B, 2: B, 3: "@V", 4: B, 7: B, 8: "@Y", 9: "@Z",
                              10: "@X", 11: B}),
            "X": _cell(p, W, {1: "@T", 2: "@Z", 3: "@I", 5: B, 6: B, 7: B, 8: B,
                              9: B, 10: "@bX", 11: B, 12: B, 13: B}),
            "Y": _cell(p, W, {1: "@T", 2: B, 3: B, 4: B, 5: "@bY", 6: B, 7: B,
                              8: B, 12: "@J", 13: "@Z"}),
            "Z": _cell(p, B, {1: "@T", 2: "@Y", 3: "@J", 5: B, 6: B, 7: B,
                              8: "@Z1", 9: B, 10: B, 12: "@I", 13: "@X"}),
            "I": _cell(p, i, {1: "@X", 2: "@Z", 5: B, 6: B, 7: B, 8: B, 10: B, 11: B}),
            "J": _cell(p, j, {1: "@Y", 3: B, 4: B, 5: B, 6: B, 8: B, 9: B, 13: "@Z"}),
            # signal path from Z to D; Z1 watches Z, D1 pokes D
            "Z1": _cell(p, W, {1: "@Z", 2: B, 4: B, 5: B, 6: B, 7: B, 8: B, 9: B,
                               10: "@M1", 11: B, 13: B}),
            "D1": _cell(p, W, {1: B, 2: B, 5: B, 6: B, 10: B, 11: "@M2", 12: B,
                               13: "@D"}),
        }
        one_sided = frozenset({("D", "O")})
    else:
        cells = {
            # active half: flip-flop shapes, but B and C turn their backs on
            # their exit stubs and D watches the signal path end at D1
            "O": _cell(p, W, {1: B, 2: "@A", 4: B, 5: B, 6: B, 9: "@C", 10: B,
                              11: "@B", 13: B, 14: B, 15: B}),
            "B": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 6: B, 7: B, 10: B,
                              p - 3: "@O", p - 2: "@D", p - 1: "@H"}),
            "C": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 6: B, 7: B, 8: B,
                              p - 5: "@K", p - 4: "@D", p - 3: "@O"}),
            "D": _cell(p, B, {1: B, 2: B, 3: B, 4: B, 6: B, 8: B, 9: B,
                              10: "@D1", p - 5: "@H", p - 4: "@B", p - 3: "@O",
                              p - 2: "@C", p - 1: "@K"}),
            "H": _cell(p, h, {1: B, 2: B, 3: B, 4: B, 6: B, 9: B,
                              p - 2: "@B", p - 1: "@D"}),
            "K": _cell(p, k, {1: B, 2: B, 3: B, 4: B, 6: B, 7: B, 9: B,
                              p - 3: "@D", p - 2: "@C"}),
            # passive half; T reuses the passive-merge center shape
            "T": _cell(p, W, {1: B, 2: B, 3: B, 5: B, 6: "@V", 8: B, 9: B,
                              10: B, 13: "@X", 14: B, 15: "@Y"}),
            "X": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 5: B, 7: B, 10: B,
                              11: "@bX", p - 3: "@T", p - 2: "@Z", p - 1: "@I"}),
            "Y": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 5: B, 7: B, 8: B,
                              p - 6: "@J", p - 5: "@Z", p - 4: "@T", p - 1: "@bY"}),
            "Z": _cell(p, B, {1: B, 2: B, 3: B, 4: B, 5: B, 8: B,
                              p - 5: "@I", p - 4: "@X", p - 3: "@T",
                              p - 2: "@Y", p - 1: "@J"}),
            "I": _cell(p, i, {1: B, 2: B, 3: B, 4: B, 5: B, 9: B,
                              p - 2: "@X", p - 1: "@Z"}),
            "J": _cell(p, j, {1: B, 2: B, 3: B, 4: B, 5: B, 7: B, 9: B,
                              p - 3: "@Z", p - 2: "@Y"}),
            # signal path from Z to D; Z1 watches Z, D1 pokes D
            "Z1": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 5: B, 8: B, 9: B,
                               11: "@M1", p - 2: "@Z"}),
            "D1": _cell(p, W, {1: B, 2: B, 3: B, 4: B, 5: B, 7: B, 8: B, 9: B,
                               11: "@M2", p - 2: "@D", p - 1: B}),
        }
        one_sided = frozenset({("D", "O"), ("Z", "T"), ("Z1", "Z"),
                               ("aB", "B"), ("aC", "C")})
    cells.update({
        "A": _cell(p, W, _track_marks(p, 1, "straight", "bA", "O")),
        "bA": _cell(p, W, _track_marks(p, 1, "straight", None, "A")),
        "aB": _cell(p, W, _track_marks(p, 1, "straight", "B", None)),
        "aC": _cell(p, W, _track_marks(p, 1, "straight", "C", None)),
        "V": _cell(p, W, _track_marks(p, 1, "straight", "T", "aV")),
        "aV": _cell(p, W, _track_marks(p, 1, "straight", "V", None)),
        "bX": _cell(p, W, _track_marks(p, 1, "straight", None, "X")),
        "bY": _cell(p, W, _track_marks(p, 1, "straight", None, "Y")),
        "M1": _cell(p, W, _track_marks(p, 1, "straight", "Z1", "M")),
        "M": _cell(p, W, _track_marks(p, 1, "straight", "M1", "M2")),
        "M2": _cell(p, W, _track_marks(p, 1, "straight", "M", "D1")),
    })
    return CircuitTemplate(
        name="memory-switch", p=p, cells=cells,
        entries=("bA", "bX", "bY"), exits=("aB", "aC", "aV"),
        selectable=selected, one_sided=one_sided,
    )


# ---------------------------------------------------------------------------
# templates and scenarios

@dataclass
class CircuitTemplate:
    """Blueprint for a tracked region plus its port and selection metadata."""

    name: str
    p: int
    cells: dict[str, tuple[str, tuple[str, ...]]]
    entries: tuple[str, ...] = ()
    exits: tuple[str, ...] = ()
    selectable: str | None = None
    one_sided: frozenset[tuple[str, str]] = frozenset()

    def region(self) -> TrackedRegion:
        return make_region(self.cells, one_sided=self.one_sided)


@dataclass
class Scenario:
    """A template with an injection schedule and what to record.

    injections hold (time, port, count) with count particles meaning the
    port is forced black for count consecutive steps.
    """

    name: str
    template: CircuitTemplate
    injections: tuple[tuple[int, str, int], ...]
    steps: int
    watch: tuple[str, ...]
    expected: Trace | None = None
    expect_path: str | None = None

    def __post_init__(self) -> None:
        for t, port, n in self.injections:
            if port not in self.template.cells:
                raise UnknownRole(f"injection port {port!r} is not a cell")
            if self.template.entries and port not in self.template.entries:
                raise UnknownRole(f"injection port {port!r} is not an entry")
            if n not in (1, 2):
                raise ValueError(f"particle count must be 1 or 2, got {n}")
            if t < 1:
                raise ValueError(f"injection time must be >= 1, got {t}")
        for name in self.watch:
            if name not in self.template.cells:
                raise UnknownRole(f"watched cell {name!r} is not a cell")

    def run(self, table) -> Trace:
        return run(self.template.region(), table, self.steps, self.watch,
                   self.injections)


def _packaged_trace(name: str) -> Trace:
    text = resources.files("hypca").joinpath(f"data/traces/{name}.csv").read_text()
    return Trace.from_csv(text)


_ACTIVE_WATCH = ("bA", "A", "O", "B", "aB", "C", "aC", "D", "H", "K")
_PASSIVE_WATCH = ("aV", "V", "T", "X", "bX", "Y", "bY", "Z", "I", "J",
                  "D", "H", "K", "Z1", "M", "D1")


def _catalog_entries():
    """(name, template, injections, steps, watch), no expected traces yet.

    The p=17 twins repeat the p=13 runs on the generated rules; only the
    crossing twin watches one extra column, the exit cell F2.
    """
    entries = []
    for p, tag in ((13, ""), (17, "_p17")):
        crossing_watch = ("A", "B", "C", "D", "E", "F", "F1", "BF", "BC", "CE")
        if p != 13:
            crossing_watch += ("F2",)
        entries += [
            (f"crossing{tag}", build_roundabout(p, branch_count=1),
             ((3, "E", 1),), 18, crossing_watch),
            (f"fixed_from_bB{tag}", build_fixed_switch(p),
             ((2, "bB", 1),), 7, ("aA", "A", "O", "B", "bB", "C", "bC")),
            (f"fixed_from_bC{tag}", build_fixed_switch(p),
             ((2, "bC", 1),), 7, ("aA", "A", "O", "B", "bB", "C", "bC")),
            (f"flipflop_toward_C{tag}", build_flipflop(p, "left"),
             ((3, "bA", 1),), 8, _ACTIVE_WATCH),
            (f"flipflop_toward_B{tag}", build_flipflop(p, "right"),
             ((3, "bA", 1),), 8, _ACTIVE_WATCH),
            (f"memory_active_sel_C{tag}", build_memory_switch(p, "left"),
             ((3, "bA", 1),), 8, _ACTIVE_WATCH),
            (f"memory_active_sel_B{tag}", build_memory_switch(p, "right"),
             ((3, "bA", 1),), 8, _ACTIVE_WATCH),
            (f"memory_passive_X_toggle{tag}", build_memory_switch(p, "left"),
             ((3, "bX", 1),), 15, _PASSIVE_WATCH),
            (f"memory_passive_X_quiet{tag}", build_memory_switch(p, "right"),
             ((3, "bX", 1),), 8, _PASSIVE_WATCH),
            (f"memory_passive_Y_toggle{tag}", build_memory_switch(p, "right"),
             ((2, "bY", 1),), 15, _PASSIVE_WATCH),
            (f"memory_passive_Y_quiet{tag}", build_memory_switch(p, "left"),
             ((2, "bY", 1),), 8, _PASSIVE_WATCH),
        ]
    return entries


def scenario_catalog() -> list[Scenario]:
    """The replayable runs, one per shipped trace: p=13 and p=17 twins."""
    return [
        Scenario(name=name, template=tpl, injections=inj, steps=steps,
                 watch=watch, expected=_packaged_trace(name))
        for name, tpl, inj, steps, watch in _catalog_entries()
    ]


# ---------------------------------------------------------------------------
# scenario files
#
#   p=13
#   cell A state=W nbrs=B,B,@B,B,@D,B,W,W,W,W,W,W,W
#   inject t=3 port=E n=1
#   watch A,B,C
#   steps 18
#   expect traces/crossing.csv        (optional; kept verbatim)

_CELL_RE = re.compile(r"cell\s+(\S+)\s+state=([WB])\s+nbrs=(\S+)$")
_INJECT_RE = re.compile(r"inject\s+t=(\d+)\s+port=(\S+)\s+n=(\d+)$")


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    p: int | None = None
    cells: dict[str, tuple[str, tuple[str, ...]]] = {}
    injections: list[tuple[int, str, int]] = []
    watch: tuple[str, ...] = ()
    steps: int | None = None
    expect_path: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("p="):
            try:
                p = int(line[2:])
            except ValueError:
                raise SyntaxError(f"line {lineno}: bad p {line[2:]!r}") from None
            continue
        if p is None:
            raise SyntaxError(f"line {lineno}: p=<int> must come first")
        if line.startswith("cell"):
            m = _CELL_RE.match(line)
            if m is None:
                raise SyntaxError(f"line {lineno}: cannot parse cell line {line!r}")
            cname, state, nbrs = m.group(1), m.group(2), m.group(3).split(",")
            if len(nbrs) != p:
                raise SyntaxError(
                    f"line {lineno}: cell {cname!r} has {len(nbrs)} slots, want {p}")
            for s in nbrs:
                if s not in (W, B) and not s.startswith("@"):
                    raise SyntaxError(f"line {lineno}: bad slot {s!r}")
            if cname in cells:
                raise SyntaxError(f"line {lineno}: duplicate cell {cname!r}")
            cells[cname] = (state, tuple(nbrs))
        elif line.startswith("inject"):
            m = _INJECT_RE.match(line)
            if m is None:
                raise SyntaxError(f"line {lineno}: cannot parse inject line {line!r}")
            injections.append((int(m.group(1)), m.group(2), int(m.group(3))))
        elif line.startswith("watch"):
            watch = tuple(w for w in line[5:].strip().split(",") if w)
        elif line.startswith("steps"):
            try:
                steps = int(line[5:].strip())
            except ValueError:
                raise SyntaxError(f"line {lineno}: bad steps {line[5:]!r}") from None
        elif line.startswith("expect"):
            expect_path = line[6:].strip()
        else:
            raise SyntaxError(f"line {lineno}: unrecognized line {line!r}")
    if p is None:
        raise SyntaxError("missing p=<int> header")
    if steps is None:
        raise SyntaxError("missing steps line")
    for cname, (_, nbrs) in cells.items():
        for s in nbrs:
            if s.startswith("@") and s[1:] not in cells:
                raise DanglingRef(f"cell {cname!r} points at undeclared {s[1:]!r}")
    template = CircuitTemplate(name=name, p=p, cells=cells)
    return Scenario(name=name, template=template, injections=tuple(injections),
                    steps=steps, watch=watch, expect_path=expect_path)


def emit_scenario(scenario: Scenario) -> str:
    out = io.StringIO()
    print(f"p={scenario.template.p}", file=out)
    for cname, (state, nbrs) in scenario.template.cells.items():
        print(f"cell {cname} state={state} nbrs={','.join(nbrs)}", file=out)
    for t, port, n in scenario.injections:
        print(f"inject t={t} port={port} n={n}", file=out)
    if scenario.watch:
        print(f"watch {','.join(scenario.watch)}", file=out)
    print(f"steps {scenario.steps}", file=out)
    if scenario.expect_path is not None:
        print(f"expect {scenario.expect_path}", file=out)
    return out.getvalue()
