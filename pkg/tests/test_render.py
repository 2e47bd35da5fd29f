"""Disk geometry and the two SVG views.

The hard assertions live in the geometry: every pair of adjacent tiles
must sit at the same center distance, and their inscribed circles must
touch.  That closes the loop between the tiling arithmetic and the
metric, because the frames are laid out along the father tree only and
the non-tree adjacencies have no say in where a tile lands.
"""

import math
import xml.etree.ElementTree as ET

import pytest

from hypca.circuits import build_roundabout, build_track
from hypca.render import (
    euclidean_circle,
    hyperbolic_distance,
    layout_ball,
    render_schematic,
    render_svg,
    tile_metrics,
)
from hypca.tiling import CENTER


def adjacent_pairs(layout):
    pairs = set()
    for u, row in layout.ball.cells.items():
        for v in row:
            if v is not None and v in layout.centers:
                pairs.add(frozenset((u, v)))
    return [tuple(pair) for pair in pairs]


@pytest.mark.parametrize("p", range(7, 20))
def test_tile_metrics_satisfy_the_right_triangle(p):
    rho, big = tile_metrics(p)
    half_edge = math.acosh(math.cos(math.pi / p) / math.sin(math.pi / 3))
    assert math.cosh(big) == pytest.approx(math.cosh(rho) * math.cosh(half_edge))
    assert big > rho > 0


def test_small_p_has_no_hyperbolic_tile():
    with pytest.raises(ValueError):
        tile_metrics(6)


@pytest.mark.parametrize("p", [7, 13])
def test_adjacent_tiles_sit_at_twice_the_apothem(p):
    lay = layout_ball(p, 2)
    want = 2 * lay.apothem
    for u, v in adjacent_pairs(lay):
        d = hyperbolic_distance(lay.centers[u], lay.centers[v])
        assert abs(d - want) < 1e-9, (u, v, d)


@pytest.mark.parametrize("p", [7, 13])
def test_inscribed_circles_of_adjacent_tiles_are_tangent(p):
    lay = layout_ball(p, 2)
    for u, v in adjacent_pairs(lay):
        c1, r1 = euclidean_circle(lay.centers[u], lay.apothem)
        c2, r2 = euclidean_circle(lay.centers[v], lay.apothem)
        assert abs(abs(c1 - c2) - (r1 + r2)) < 1e-6, (u, v)


def test_non_adjacent_tiles_keep_their_distance():
    lay = layout_ball(7, 2)
    adjacent = {frozenset(pair) for pair in adjacent_pairs(lay)}
    floor = 2 * lay.apothem + 0.1
    cells = list(lay.centers)
    for i, a in enumerate(cells):
        for b in cells[i + 1:]:
            if frozenset((a, b)) not in adjacent:
                assert hyperbolic_distance(lay.centers[a], lay.centers[b]) > floor


def test_layout_counts_match_the_ball():
    lay = layout_ball(7, 3)
    assert len(lay.centers) == sum(len(ring) for ring in lay.ball.rings)
    assert lay.centers[CENTER] == 0


def test_vertices_close_into_a_p_gon():
    lay = layout_ball(9, 1)
    for cell in lay.centers:
        corners = lay.vertices(cell)
        assert len(corners) == 9
        sides = [hyperbolic_distance(corners[i], corners[(i + 1) % 9])
                 for i in range(9)]
        assert max(sides) - min(sides) < 1e-9


def test_radius_zero_draws_one_tile():
    svg = render_svg(layout_ball(7, 0))
    ET.fromstring(svg)
    assert svg.count('class="tile"') == 1
    assert svg.count('class="incircle"') == 1


def test_ring_one_circles_all_touch_the_central_one():
    lay = layout_ball(13, 1)
    svg = render_svg(lay)
    ET.fromstring(svg)
    assert svg.count('class="incircle"') == 14
    c0, r0 = euclidean_circle(lay.centers[CENTER], lay.apothem)
    for cell in lay.ball.rings[1]:
        c, r = euclidean_circle(lay.centers[cell], lay.apothem)
        assert abs(abs(c - c0) - (r + r0)) < 1e-6


def test_svg_is_well_formed_and_fills_marked_cells():
    lay = layout_ball(7, 2)
    cell = lay.ball.rings[1][0]
    svg = render_svg(lay, states={cell: "B"})
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert svg.count('fill="#333"') == 1


def test_schematic_names_every_cell_and_parses():
    tpl = build_roundabout(17)
    svg = render_schematic(tpl)
    ET.fromstring(svg)
    for name in tpl.cells:
        assert f">{name}<" in svg
    assert svg.count('class="node"') == len(tpl.cells)
    assert svg.count('class="edge"') > 0


def test_schematic_state_override_beats_the_idle_state():
    tpl = build_track(13, 4)
    svg = render_schematic(tpl, states={"t2": "B"})
    assert svg.count('fill="#333"') == 1
