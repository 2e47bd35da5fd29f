"""Drawings: tiling balls in the Poincare disk, and schematic circuit maps.

A disk picture places every tile of a ball by walking the father tree
with Mobius maps: the child frame is the father frame turned toward the
child's slot, pushed one tile-width out, and turned around so its own
first slot faces back.  Each tile is drawn as its polygon plus its
inscribed circle.  The in-circle touches every edge at the edge midpoint,
so the circles of two adjacent tiles must come out exactly tangent; any
gluing or metric mistake shows up as a visible gap or overlap.

The schematic view ignores geometry altogether and draws a circuit
region as a ring of named cells with arrows for their cross references.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .tiling import CENTER, CellCoord, TilingBall, build_ball

__all__ = [
    "DiskLayout",
    "euclidean_circle",
    "hyperbolic_distance",
    "layout_ball",
    "render_schematic",
    "render_svg",
    "tile_metrics",
]

# a Mobius map of the disk, (a, b) acting as z -> (a z + b)/(~b z + ~a)
Mobius = tuple[complex, complex]

IDENTITY: Mobius = (1 + 0j, 0j)


def mobius_apply(m: Mobius, z: complex) -> complex:
    a, b = m
    return (a * z + b) / (b.conjugate() * z + a.conjugate())


def mobius_compose(m1: Mobius, m2: Mobius) -> Mobius:
    a1, b1 = m1
    a2, b2 = m2
    return (a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())


def rotation(theta: float) -> Mobius:
    return (cmath.exp(0.5j * theta), 0j)


def translation(d: float) -> Mobius:
    """Move the origin to tanh(d/2) along the positive real axis."""
    return (math.cosh(d / 2) + 0j, math.sinh(d / 2) + 0j)


def tile_metrics(p: int) -> tuple[float, float]:
    """In-radius and circumradius of one tile of the three-valent tiling.

    Both come from the right triangle cut out by a tile center, an edge
    midpoint and a vertex, whose angles are pi/p at the center and pi/3
    at the vertex.
    """
    if p < 7:
        raise ValueError(f"hyperbolic tilings need p >= 7, got {p}")
    rho = math.acosh(1 / (2 * math.sin(math.pi / p)))
    big = math.acosh(1 / (math.tan(math.pi / p) * math.sqrt(3)))
    return rho, big


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    return 2 * math.atanh(abs(z1 - z2) / abs(1 - z1.conjugate() * z2))


def euclidean_circle(center: complex, rho: float) -> tuple[complex, float]:
    """The Euclidean circle that draws the hyperbolic one.

    The hyperbolic circle around ``center`` of radius ``rho`` is again a
    Euclidean circle in the disk, but off-center; two diametral points
    along the axis through the origin pin it down.
    """
    t = math.tanh(rho / 2)
    u = center / abs(center) if center else 1 + 0j
    move = (1 + 0j, center)
    z1 = mobius_apply(move, t * u)
    z2 = mobius_apply(move, -t * u)
    return (z1 + z2) / 2, abs(z1 - z2) / 2


@dataclass(frozen=True)
class DiskLayout:
    """Frames and centers for every tile of a ball, plus the tile size."""

    p: int
    radius: int
    ball: TilingBall
    frames: dict[CellCoord, Mobius]
    centers: dict[CellCoord, complex]
    apothem: float
    circumradius: float

    def vertices(self, cell: CellCoord) -> list[complex]:
        """Polygon corners, counter-clockwise; corner k sits between the
        edges toward neighbors k and k+1."""
        t = math.tanh(self.circumradius / 2)
        frame = self.frames[cell]
        return [
            mobius_apply(frame, t * cmath.exp(1j * math.pi * (2 * k + 1) / self.p))
            for k in range(self.p)
        ]


def layout_ball(p: int, radius: int) -> DiskLayout:
    """Place a whole ball, center tile at the origin.

    Neighbor k of a tile sits at angle 2 pi k / p in the tile's own
    frame; since slot order is counter-clockwise everywhere, one walk
    down the father tree fixes every frame, and the non-tree adjacencies
    must then close up by themselves.
    """
    ball = build_ball(p, radius)
    rho, big = tile_metrics(p)
    out = translation(2 * rho)
    about = rotation(math.pi)
    frames: dict[CellCoord, Mobius] = {CENTER: IDENTITY}
    for ring in ball.rings[1:]:
        for cell in ring:
            father = ball.cells[cell][0]
            k = ball.cells[father].index(cell)
            arm = mobius_compose(
                rotation(2 * math.pi * k / p), mobius_compose(out, about))
            frames[cell] = mobius_compose(frames[father], arm)
    centers = {cell: mobius_apply(f, 0j) for cell, f in frames.items()}
    return DiskLayout(p=p, radius=radius, ball=ball, frames=frames,
                      centers=centers, apothem=rho, circumradius=big)


def _geodesic_points(z1: complex, z2: complex, segments: int = 10):
    """Sample the geodesic segment from z1 to z2."""
    pull = (1 + 0j, -z1)
    push = (1 + 0j, z1)
    w = mobius_apply(pull, z2)
    return [mobius_apply(push, w * (i / segments)) for i in range(segments + 1)]


def _fmt(z: complex) -> str:
    return f"{z.real:.6f},{z.imag:.6f}"


def render_svg(layout: DiskLayout, states: dict[CellCoord, str] | None = None,
               size: int = 700) -> str:
    """The ball as SVG: tile polygons, inscribed circles, the disk rim.

    ``states`` maps cells to "B" to fill them dark; missing cells are
    drawn white.
    """
    states = states or {}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="-1.05 -1.05 2.1 2.1">',
        '<g transform="scale(1,-1)" stroke-linejoin="round">',
        '<circle class="rim" cx="0" cy="0" r="1" fill="none" '
        'stroke="#bbb" stroke-width="0.004"/>',
    ]
    for cell in layout.frames:
        corners = layout.vertices(cell)
        points: list[complex] = []
        for i, corner in enumerate(corners):
            points.extend(_geodesic_points(corner, corners[(i + 1) % layout.p])[:-1])
        path = "M " + " L ".join(_fmt(z) for z in points) + " Z"
        fill = "#333" if states.get(cell) == "B" else "#fff"
        parts.append(f'<path class="tile" d="{path}" fill="{fill}" '
                     'stroke="#888" stroke-width="0.003"/>')
    for cell, center in layout.centers.items():
        c, r = euclidean_circle(center, layout.apothem)
        parts.append(
            f'<circle class="incircle" cx="{c.real:.6f}" cy="{c.imag:.6f}" '
            f'r="{r:.6f}" fill="none" stroke="#2a6" stroke-width="0.0025"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts)


def render_schematic(template, states: dict[str, str] | None = None,
                     size: int = 700) -> str:
    """A circuit region as a ring of labeled cells with reference arrows.

    Takes any region description with ``cells`` (name -> (state, slots))
    and ``entries``; geometry plays no part, the picture only shows who
    watches whom.
    """
    states = states or {}
    names = list(template.cells)
    n = len(names)
    pos: dict[str, complex] = {}
    for i, name in enumerate(names):
        a = 2 * math.pi * i / n - math.pi / 2
        pos[name] = 0.8 * complex(math.cos(a), math.sin(a))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="-1.05 -1.05 2.1 2.1">',
        '<defs><marker id="tip" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="5" markerHeight="5" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#678"/></marker></defs>',
        f'<text x="-1" y="-0.97" font-size="0.06" fill="#567">'
        f'{escape(getattr(template, "name", ""))}</text>',
    ]
    for name, (state, slots) in template.cells.items():
        for slot in slots:
            if not slot.startswith("@"):
                continue
            other = slot[1:]
            a, b = pos[name], pos[other]
            direction = (b - a) / abs(b - a)
            start, end = a + 0.09 * direction, b - 0.09 * direction
            parts.append(
                f'<line class="edge" x1="{start.real:.4f}" y1="{-start.imag:.4f}" '
                f'x2="{end.real:.4f}" y2="{-end.imag:.4f}" stroke="#678" '
                'stroke-width="0.006" marker-end="url(#tip)"/>')
    for name in names:
        z = pos[name]
        idle = states.get(name, template.cells[name][0])
        fill = "#333" if idle == "B" else "#fff"
        ring = "#d42" if name in getattr(template, "entries", ()) else "#345"
        parts.append(
            f'<circle class="node" cx="{z.real:.4f}" cy="{-z.imag:.4f}" r="0.07" '
            f'fill="{fill}" stroke="{ring}" stroke-width="0.01"/>')
        label = z * 1.17
        color = "#eee" if fill == "#333" else "#123"
        parts.append(
            f'<text class="label" x="{label.real:.4f}" y="{-label.imag + 0.02:.4f}" '
            f'font-size="0.07" text-anchor="middle" fill="#123">{escape(name)}</text>')
        if fill == "#333":
            parts.append(
                f'<text x="{z.real:.4f}" y="{-z.imag + 0.02:.4f}" font-size="0.05" '
                f'text-anchor="middle" fill="{color}">*</text>')
    parts.append("</svg>")
    return "\n".join(parts)
