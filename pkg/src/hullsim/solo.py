"""Single-walker hull learner.

One walker with unbounded counters circles the object clockwise along its
boundary, maintaining six distance estimates (one per half-plane of the
convex hull) and six terminating bits. It halts once it has visited every
half-plane of its estimate without pushing any of them outward.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import Node, ObjectShape, boundary, delta, neighbor, walk_step


@dataclass
class SoloState:
    """Walker position plus its hull estimate."""

    pos: Node
    distances: list[int] = field(default_factory=lambda: [0] * 6)
    bits: list[int] = field(default_factory=lambda: [0] * 6)
    incoming: int | None = None
    steps: int = 0

    @property
    def done(self) -> bool:
        return all(self.bits)


def get_rhr(occupied, pos: Node, incoming: int | None = None) -> int:
    """Right-hand-rule direction for the next clockwise step around occupied."""
    return walk_step(occupied, pos, incoming)


def solo_step(shape: ObjectShape, state: SoloState) -> None:
    """Advance the walker one node and update its estimate.

    Moving toward a half-plane already at distance 0 pushes that half-plane
    outward (the distance is clamped at 0) and resets all terminating bits;
    otherwise every half-plane at distance 0 after the move is marked visited.
    """
    i = walk_step(shape.nodes, state.pos, state.incoming)
    row = delta(i)
    d = state.distances
    pushed = False
    for h in range(6):
        nd = d[h] + row[h]
        if nd < 0:
            nd = 0
            pushed = True
        d[h] = nd
    if pushed:
        state.bits[:] = [0] * 6
    else:
        for h in range(6):
            if d[h] == 0:
                state.bits[h] = 1
    state.pos = neighbor(state.pos, i)
    state.incoming = i
    state.steps += 1


def run_solo(shape: ObjectShape, start: Node | None = None) -> SoloState:
    """Run the walker from start (default: smallest boundary node) to completion."""
    ring = boundary(shape.nodes)
    if start is None:
        start = min(ring)
    elif start not in ring:
        raise ValueError(f"start {start} is not on the object's boundary")
    state = SoloState(pos=start)
    limit = 10 * (6 * len(shape.nodes) + 6)
    while not state.done:
        if state.steps >= limit:
            raise RuntimeError("walker failed to terminate")
        solo_step(shape, state)
    return state
