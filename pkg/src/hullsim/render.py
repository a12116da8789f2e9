"""ASCII and SVG views of a configuration.

Both renderers draw the same node sets — the object plus every occupied
node — so their outputs can be diffed for occupancy.  The SVG embedding maps
an axial node (x, y) to the Cartesian point (x + y/2, -y*sqrt(3)/2), the
standard unit-edge drawing of the triangular lattice with the y axis rising
to the upper left.
"""

from __future__ import annotations

import math
from typing import TYPE_CHECKING, Iterable

from .engine import (
    FILLER,
    FINISHED,
    FOLLOWER,
    HULL,
    IDLE,
    LEADER,
    MARKER,
    NON_TIGHTENING,
    PRE_FILLER,
    PRE_FINISHED,
    PRE_MARKER,
    TIGHTENING,
    TIGHT_FINISHED,
    TRAPPED,
)

if TYPE_CHECKING:  # pragma: no cover
    from .engine import Simulation

Node = tuple[int, int]

GLYPHS = {
    IDLE: "i",
    FOLLOWER: "f",
    LEADER: "L",
    HULL: "h",
    PRE_MARKER: "m",
    MARKER: "M",
    FINISHED: "F",
    FILLER: "g",
    TRAPPED: "t",
    PRE_FILLER: "p",
    PRE_FINISHED: "q",
    TIGHTENING: "T",
    NON_TIGHTENING: "n",
    TIGHT_FINISHED: "W",
}

COLORS = {
    IDLE: "#bbbbbb",
    FOLLOWER: "#7f8fd4",
    LEADER: "#d62728",
    HULL: "#2ca02c",
    PRE_MARKER: "#e8a33d",
    MARKER: "#ff7f0e",
    FINISHED: "#1f77b4",
    FILLER: "#17becf",
    TRAPPED: "#8c564b",
    PRE_FILLER: "#9edae5",
    PRE_FINISHED: "#aec7e8",
    TIGHTENING: "#9467bd",
    NON_TIGHTENING: "#c5b0d5",
    TIGHT_FINISHED: "#4b0082",
}

_SQ3_2 = math.sqrt(3.0) / 2.0


def _extent(nodes: Iterable[Node]) -> tuple[int, int, int, int]:
    xs = [v[0] for v in nodes]
    ys = [v[1] for v in nodes]
    return min(xs), max(xs), min(ys), max(ys)


def render_ascii(sim: Simulation) -> str:
    """One character per lattice node: '#' object, '.' empty, a state glyph
    for each particle head, '*' for an expanded particle's tail."""
    cells: dict[Node, str] = {v: "#" for v in sim.shape.nodes}
    for p in sim.particles:
        cells[p.head] = GLYPHS.get(p.state, "?")
        if p.expanded:
            cells[p.tail] = "*"
    x0, x1, y0, y1 = _extent(cells)
    # Columns are doubled so vertical neighbors interleave like the lattice.
    c0 = min(2 * x + y for x, y in cells)
    c1 = max(2 * x + y for x, y in cells)
    lines = []
    for y in range(y1, y0 - 1, -1):
        row = []
        for c in range(c0, c1 + 1):
            if (c - y) % 2:
                row.append(" ")
                continue
            x = (c - y) // 2
            if x0 <= x <= x1:
                row.append(cells.get((x, y), "."))
            else:
                row.append(" ")
        lines.append("".join(row).rstrip())
    return "\n".join(lines) + "\n"


def _xy(v: Node, scale: float) -> tuple[float, float]:
    x, y = v
    return (x + y / 2.0) * scale, -y * _SQ3_2 * scale


def _svg_open(nodes: Iterable[Node], scale: float) -> tuple[list[str], float, float]:
    pts = [_xy(v, scale) for v in nodes]
    pad = scale
    x0 = min(p[0] for p in pts) - pad
    x1 = max(p[0] for p in pts) + pad
    y0 = min(p[1] for p in pts) - pad
    y1 = max(p[1] for p in pts) + pad
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0:.1f} {y0:.1f} {x1 - x0:.1f} {y1 - y0:.1f}" '
        f'width="{x1 - x0:.0f}" height="{y1 - y0:.0f}">',
        '<rect x="%.1f" y="%.1f" width="%.1f" height="%.1f" fill="white"/>'
        % (x0, y0, x1 - x0, y1 - y0),
    ]
    return head, x0, y0


def render_svg(sim: Simulation, scale: float = 20.0) -> str:
    """Object nodes black, particles outlined and colored by role, expanded
    particles drawn as head and tail joined by a bar."""
    nodes = set(sim.shape.nodes)
    for p in sim.particles:
        nodes.update(p.nodes)
    out, _, _ = _svg_open(nodes, scale)
    r_obj = 0.32 * scale
    r_par = 0.38 * scale
    for v in sorted(sim.shape.nodes):
        cx, cy = _xy(v, scale)
        out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{r_obj:.1f}" '
                   f'fill="black"/>')
    for p in sorted(sim.particles, key=lambda q: q.pid):
        color = COLORS.get(p.state, "#999999")
        stroke = "black"
        width = 1.5
        if p.state == LEADER or p.state == MARKER:
            width = 3.0
        if p.expanded:
            hx, hy = _xy(p.head, scale)
            tx, ty = _xy(p.tail, scale)
            out.append(f'<line x1="{hx:.1f}" y1="{hy:.1f}" x2="{tx:.1f}" '
                       f'y2="{ty:.1f}" stroke="{color}" '
                       f'stroke-width="{0.3 * scale:.1f}"/>')
            for cx, cy in ((hx, hy), (tx, ty)):
                out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" '
                           f'r="{r_par:.1f}" fill="{color}" '
                           f'stroke="{stroke}" stroke-width="{width}"/>')
        else:
            cx, cy = _xy(p.head, scale)
            out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{r_par:.1f}" '
                       f'fill="{color}" stroke="{stroke}" '
                       f'stroke-width="{width}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_hulls_svg(shape, hull, scale: float = 20.0) -> str:
    """Overlay of the object with both hull rings for oracle inspection."""
    nodes = set(shape.nodes) | set(hull.strong_cycle) | set(hull.weak_cycle)
    out, _, _ = _svg_open(nodes, scale)
    for v in sorted(shape.nodes):
        cx, cy = _xy(v, scale)
        out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="{0.32 * scale:.1f}" '
                   f'fill="black"/>')
    for cycle, color in ((hull.strong_cycle, "#d62728"),
                         (hull.weak_cycle, "#9467bd")):
        for k, v in enumerate(cycle):
            w = cycle[(k + 1) % len(cycle)]
            x1, y1 = _xy(v, scale)
            x2, y2 = _xy(w, scale)
            out.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" '
                       f'y2="{y2:.1f}" stroke="{color}" stroke-width="2"/>')
        for v in cycle:
            cx, cy = _xy(v, scale)
            out.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" '
                       f'r="{0.2 * scale:.1f}" fill="none" stroke="{color}" '
                       f'stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def ascii_origin(sim: Simulation) -> tuple[int, int]:
    """(top row y, leftmost column index) of render_ascii's character grid."""
    cells = set(sim.shape.nodes)
    for p in sim.particles:
        cells.update(p.nodes)
    y_top = max(y for _, y in cells)
    c_left = min(2 * x + y for x, y in cells)
    return y_top, c_left


def occupancy_of_ascii(text: str, y_top: int, c_left: int) -> set[Node]:
    """Invert render_ascii back to its node set (objects and particles)."""
    nodes: set[Node] = set()
    for dy, line in enumerate(text.splitlines()):
        y = y_top - dy
        for dc, ch in enumerate(line):
            if ch in " .":
                continue
            c = c_left + dc
            nodes.add(((c - y) // 2, y))
    return nodes
