"""Deterministic object generators: regular families for scaling benchmarks
and seeded random blobs for correctness sweeps."""

from __future__ import annotations

import random
from collections import deque

from .lattice import Node, ObjectShape, boundary, is_connected, neighbors, tunnel_pinch_nodes
from .hull_oracle import strong_region_of, weak_region_of


def hexagon(k: int) -> ObjectShape:
    """Filled hexagon of side k: all nodes within k of the origin."""
    nodes = {
        (x, y)
        for x in range(-k, k + 1)
        for y in range(-k, k + 1)
        if abs(x + y) <= k
    }
    return ObjectShape(nodes)


def triangle(k: int) -> ObjectShape:
    """Filled triangle with legs of length k."""
    nodes = {(x, y) for x in range(k + 1) for y in range(k + 1 - x)}
    return ObjectShape(nodes)


def lshape(a: int) -> ObjectShape:
    """Two thin arms of length a meeting at 120 degrees.

    The set is already contiguous on every axis line, so its weak hull hugs
    the arms while its strong hull spans the whole wedge; the two differ for
    every a >= 1.
    """
    nodes = {(x, 0) for x in range(a + 1)} | {(-k, k) for k in range(a + 1)}
    return ObjectShape(nodes)


def fill_holes(nodes: set[Node]) -> set[Node]:
    """Add every complement pocket not connected to the outside."""
    xs = [v[0] for v in nodes]
    ys = [v[1] for v in nodes]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = min(ys) - 1, max(ys) + 1
    seen: set[Node] = {(x0, y0)}
    queue = deque(((x0, y0),))
    while queue:
        v = queue.popleft()
        for w in neighbors(v):
            if w in nodes or w in seen:
                continue
            if not (x0 <= w[0] <= x1 and y0 <= w[1] <= y1):
                continue
            seen.add(w)
            queue.append(w)
    filled = set(nodes)
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            if (x, y) not in filled and (x, y) not in seen:
                filled.add((x, y))
    return filled


def random_blob(seed: int, target_boundary: int) -> ObjectShape:
    """Seeded random tunnel-free object with roughly the requested boundary size.

    Grows by repeatedly annexing a random boundary node, fills enclosed
    pockets, widens any single-node tunnels the growth left behind, and
    retries with a derived seed if validation still fails.
    """
    for attempt in range(64):
        rng = random.Random((seed << 8) ^ attempt)
        nodes: set[Node] = {(0, 0)}
        # The frontier is exactly the boundary of the current set.
        frontier = set(neighbors((0, 0)))
        while len(frontier) < target_boundary:
            v = rng.choice(sorted(frontier))
            nodes.add(v)
            frontier.discard(v)
            for w in neighbors(v):
                if w not in nodes:
                    frontier.add(w)
        nodes = fill_holes(nodes)
        # Random growth pinches the surrounding free space easily; absorbing
        # the pinch nodes (and any pocket that seals off) restores validity.
        for _ in range(64):
            pinches = tunnel_pinch_nodes(nodes)
            if not pinches:
                break
            nodes = fill_holes(nodes | pinches)
        try:
            return ObjectShape(nodes)
        except ValueError:
            continue
    raise RuntimeError(f"could not generate a valid blob for seed {seed}")


def random_nonconvex_blob(seed: int, target_boundary: int) -> ObjectShape:
    """Seeded random object whose weak and strong hulls differ."""
    for attempt in range(64):
        try:
            shape = random_blob((seed << 6) ^ attempt, target_boundary)
        except RuntimeError:
            continue
        if weak_region_of(shape) != strong_region_of(shape):
            return shape
    raise RuntimeError(f"no nonconvex blob for seed {seed}")


def family(name: str, size: int) -> ObjectShape:
    """Size-parameterized object family used by the benchmark command."""
    if name == "hexagon":
        return hexagon(max(1, size // 6 - 1))
    if name == "triangle":
        return triangle(max(1, int(size / 3) - 1))
    if name == "blob":
        return random_blob(size, size)
    if name == "lshape":
        return lshape(max(2, size // 4))
    raise ValueError(f"unknown object family {name!r}")
