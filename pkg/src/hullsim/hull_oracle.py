"""Centralized brute-force hull geometry: the strong and weak lattice hulls of
a static object and half-plane distances, used as ground truth for every
simulation run.

Each of the six half-planes h has an integer linear functional f_h; the
supporting extent of the object is m_h = min over O of f_h. The strong region
is the intersection of the six supporting half-planes; the strong cycle is the
ring of nodes one layer outside it (particles cannot occupy the region's own
support lines when the object touches them). The weak region is the minimal
set containing O whose intersection with every lattice line in the three axis
orientations is contiguous; the weak cycle is the ring around it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import DIRS, Node, ObjectShape, boundary, region_walk

# Gradient (coefficients of x, y) of the functional per half-plane, chosen so
# that f_h(v + DIRS[i]) - f_h(v) = delta(i)[h].
FUNCTIONALS: tuple[tuple[int, int], ...] = (
    (1, 1),  # N
    (1, 0),  # NE
    (0, -1),  # SE
    (-1, -1),  # S
    (-1, 0),  # SW
    (0, 1),  # NW
)


def functional(h: int, v: Node) -> int:
    """Value of half-plane h's functional at node v."""
    a, b = FUNCTIONALS[h]
    return a * v[0] + b * v[1]


def support_extents(O: ObjectShape) -> tuple[int, ...]:
    """m_h = min over the object of f_h, for each half-plane."""
    mins = [None] * 6
    for v in O.nodes:
        for h in range(6):
            a, b = FUNCTIONALS[h]
            val = a * v[0] + b * v[1]
            if mins[h] is None or val < mins[h]:
                mins[h] = val
    return tuple(mins)


@dataclass
class HullSets:
    """Oracle output: clockwise hull cycles and the enclosed regions."""

    strong_cycle: list[Node] = field(default_factory=list)
    weak_cycle: list[Node] = field(default_factory=list)
    strong_region: frozenset[Node] = frozenset()
    weak_region: frozenset[Node] = frozenset()


def _ring_walk(region: frozenset[Node]) -> list[Node]:
    """Clockwise ring one layer outside region, starting at its smallest node."""
    ring = boundary(region)
    return region_walk(region, min(ring))


def strong_region_of(O: ObjectShape) -> frozenset[Node]:
    """All nodes inside every supporting half-plane of the object."""
    m = support_extents(O)
    # The NE/SW and NW/SE pairs bound x and y; enumerate that box and filter.
    x_lo, x_hi = m[1], -m[4]
    y_lo, y_hi = m[5], -m[2]
    region = set()
    for x in range(x_lo, x_hi + 1):
        for y in range(y_lo, y_hi + 1):
            if x + y >= m[0] and -x - y >= m[3]:
                region.add((x, y))
    return frozenset(region)


def strong_hull(O: ObjectShape) -> HullSets:
    """Strong-hull fields: enclosed region and the clockwise ring around it."""
    region = strong_region_of(O)
    return HullSets(strong_cycle=_ring_walk(region), strong_region=region)


def weak_region_of(O: ObjectShape) -> frozenset[Node]:
    """Minimal set containing the object with contiguous axis-line sections.

    Computed as the fixpoint of filling, on every lattice line in each of the
    three axis orientations, all gaps between the line's extremal members.
    """
    region: set[Node] = set(O.nodes)
    # (key function, step vector) per orientation: lines of constant y,
    # constant x, and constant x + y.
    axes = (
        (lambda v: v[1], (1, 0)),
        (lambda v: v[0], (0, 1)),
        (lambda v: v[0] + v[1], (1, -1)),
    )
    changed = True
    while changed:
        changed = False
        for key, step in axes:
            lines: dict[int, list[Node]] = {}
            for v in region:
                lines.setdefault(key(v), []).append(v)
            for members in lines.values():
                if step[0]:
                    members.sort(key=lambda v: v[0])
                else:
                    members.sort(key=lambda v: v[1])
                lo, hi = members[0], members[-1]
                span = (hi[0] - lo[0]) // step[0] if step[0] else (hi[1] - lo[1]) // step[1]
                if span + 1 == len(members):
                    continue
                v = lo
                for _ in range(span - 1):
                    v = (v[0] + step[0], v[1] + step[1])
                    if v not in region:
                        region.add(v)
                        changed = True
    return frozenset(region)


def weak_hull(O: ObjectShape) -> HullSets:
    """Weak-hull fields: enclosed region and the clockwise ring around it."""
    region = weak_region_of(O)
    return HullSets(weak_cycle=_ring_walk(region), weak_region=region)


def hulls(O: ObjectShape) -> HullSets:
    """Both hulls of one object."""
    s = strong_hull(O)
    w = weak_hull(O)
    return HullSets(
        strong_cycle=s.strong_cycle,
        weak_cycle=w.weak_cycle,
        strong_region=s.strong_region,
        weak_region=w.weak_region,
    )


def distances_to_strong_hull(v: Node, O: ObjectShape) -> tuple[int, ...]:
    """L1 distances from v to the six lines the strong cycle runs along.

    The cycle lies one layer outside the region, so line h sits at functional
    value m_h - 1; valid for any v on or inside the cycle.
    """
    m = support_extents(O)
    d = tuple(functional(h, v) - (m[h] - 1) for h in range(6))
    if any(x < 0 for x in d):
        raise ValueError(f"{v} is outside the hull closure")
    return d
