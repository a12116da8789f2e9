"""Distributed binary counter over a particle path, plus the six-counter
variant used during hull formation.

A counter is a chain of cells, least significant first. Each cell holds one
bit and a FIFO token queue (capacity 2; capacity 1 at the origin cell).
Increment and decrement tokens ripple outward; a unique final token f marks
the position one past the most significant bit. A cell's bit is 0/1 while the
cell is inside the counter, EMPTY beyond the final token, and BLANK while the
cell is a hole awaiting a bit shifted toward the origin.

A slot is a two-element list [bit, tokens]; the same transition function
drives both the standalone path harness and the per-particle slot pairs of
the hull variant.
"""

from __future__ import annotations

import random

# Bit values.
EMPTY = -1  # beyond the most significant bit
BLANK = -2  # hole in an active chain (hull variant only)

# Token kinds.
CPLUS = 1
CMINUS = 2
FINAL = 3

TOKEN_NAMES = {CPLUS: "c+", CMINUS: "c-", FINAL: "f"}

Slot = list  # [bit, list of tokens]


def new_slot(bit: int = EMPTY, tokens: tuple[int, ...] = ()) -> Slot:
    return [bit, list(tokens)]


def process_counter(p: Slot, q: Slot, origin: bool = False) -> tuple[int, bool]:
    """One token-processing step of cell p against the next cell q.

    origin marks the least significant cell, which never retracts the final
    token (its bit stays materialized). Returns (delta, acted) where delta is
    the change in the number of outstanding increment/decrement tokens (-1
    when one is consumed) and acted reports whether anything changed.
    """
    toks = p[1]
    if not toks:
        return 0, False
    t = toks[0]
    ti = 0
    if t == FINAL:
        if len(toks) < 2:
            return 0, False
        t = toks[1]
        ti = 1
    bit = p[0]
    if t == CPLUS:
        if bit == 0:
            del toks[ti]
            p[0] = 1
            return -1, True
        if bit == 1 and len(q[1]) < 2:
            del toks[ti]
            q[1].append(CPLUS)
            p[0] = 0
            return 0, True
        if bit == EMPTY:
            # p holds the final token; push it outward and take the new bit.
            fi = toks.index(FINAL)
            del toks[fi]
            q[1].append(FINAL)
            toks.remove(CPLUS)
            p[0] = 1
            return -1, True
    elif t == CMINUS:
        if bit == 1:
            if not (q[0] == 1 and q[1] == [CMINUS]):
                del toks[ti]
                p[0] = 0
                if q[1] == [FINAL] and not origin:
                    q[1].pop()
                    toks.append(FINAL)
                    p[0] = EMPTY
                return -1, True
            return 0, False
        if bit == 0 and len(q[1]) < 2:
            del toks[ti]
            q[1].append(CMINUS)
            p[0] = 1
            return 0, True
    return 0, False


def generate(slot: Slot, op: int) -> bool:
    """Enqueue an increment (op > 0) or decrement token if the queue is empty."""
    if slot[1]:
        return False
    slot[1].append(CPLUS if op > 0 else CMINUS)
    return True


def zero_test(p0: Slot, p1: Slot):
    """Whether the counter reads 0; None when temporarily unavailable."""
    if p1[0] == 1 and p1[1] == [CMINUS]:
        return None
    return p1[1] == [FINAL] and (
        (p0[0] == 0 and not p0[1]) or (p0[0] == 1 and p0[1] == [CMINUS])
    )


def counter_value(slots: list[Slot]) -> int:
    """Settled binary reading, least significant cell first."""
    value = 0
    for i, slot in enumerate(slots):
        if slot[0] in (0, 1):
            value += slot[0] << i
    return value


def make_ops(m: int, seed: int, cap: int = 8000) -> list[int]:
    """A seeded random operation sequence of +1/-1 whose running sum never
    goes negative (counters cannot hold negative values) nor exceeds cap."""
    rng = random.Random(seed)
    ops: list[int] = []
    value = 0
    for bit in rng.choices((1, -1), k=m):
        if value == 0:
            bit = 1
        elif value >= cap:
            bit = -1
        ops.append(bit)
        value += bit
    return ops


class PathHarness:
    """Standalone counter on a static path of cells, driven at full rate.

    The origin cell generates the next operation whenever its queue is empty;
    rounds are counted the same way the simulation engine counts them (a round
    ends once every cell has been activated at least once since the last
    boundary).
    """

    def __init__(self, cells: int):
        if cells < 2:
            raise ValueError("need at least two cells")
        self.cells = cells
        self.slots = [new_slot(0), new_slot(EMPTY, (FINAL,))]
        self.slots += [new_slot(EMPTY) for _ in range(cells - 2)]
        # Overflow guard: carries past the last cell indicate too few cells.
        self.overflow = new_slot(EMPTY)

    def run(
        self,
        ops: list[int],
        seed: int,
        observe_zero=None,
    ) -> tuple[int, int]:
        """Feed ops (sequence of +1/-1) to a settled state.

        observe_zero, if given, is called as observe_zero(result, logical)
        at every origin-cell activation, where logical is the running value
        including generated tokens. Returns (settled value, rounds used).
        """
        slots = self.slots
        k = self.cells
        rng = random.Random(seed)
        nxt = 0
        total = len(ops)
        outstanding = 0
        logical = 0
        rounds = 0
        epoch = 1
        stamps = [0] * k
        remaining = k
        draws: list[int] = []
        di = 0
        while nxt < total or outstanding:
            if di == len(draws):
                draws = rng.choices(range(k), k=4096)
                di = 0
            i = draws[di]
            di += 1
            if stamps[i] != epoch:
                stamps[i] = epoch
                remaining -= 1
                if remaining == 0:
                    rounds += 1
                    epoch += 1
                    remaining = k
            slot = slots[i]
            if i == 0:
                if nxt < total and not slot[1]:
                    op = ops[nxt]
                    nxt += 1
                    slot[1].append(CPLUS if op > 0 else CMINUS)
                    outstanding += 1
                    logical += op
                if observe_zero is not None:
                    observe_zero(zero_test(slots[0], slots[1]), logical)
                if slot[1]:
                    outstanding += process_counter(slot, slots[1], origin=True)[0]
            elif slot[1]:
                q = slots[i + 1] if i + 1 < k else self.overflow
                outstanding += process_counter(slot, q)[0]
        if self.overflow[0] != EMPTY or self.overflow[1]:
            raise RuntimeError("counter overflowed the path")
        return counter_value(slots), rounds


# Hull variant: each particle carries, per half-plane, a less significant (L)
# and more significant (M) slot; bits are forwarded toward the origin so the
# chain stays compact.


def forward_bits(p_l: Slot, p_m: Slot, q_l: Slot, q_m: Slot) -> bool:
    """Move the next bit of one counter from particle slots (q) into p's M."""
    if p_m[0] != BLANK:
        return False
    if q_m[0] != BLANK:
        p_m[0] = q_l[0]
        p_m[1] = q_l[1]
        q_l[0] = q_m[0]
        q_l[1] = q_m[1]
        q_m[0] = BLANK if q_m[0] in (0, 1) else q_m[0]
        q_m[1] = []
        return True
    if FINAL in q_l[1]:
        # The chain ends at q's low slot: pull the terminator inward so the
        # hole annihilates and q drops off the chain entirely.
        p_m[0] = q_l[0]
        p_m[1] = q_l[1]
        q_l[0] = EMPTY
        q_l[1] = []
        return True
    return False


def next_counter_particle(candidates, avoid=None):
    """Pick the chain successor among a particle's children.

    candidates is a sequence of (particle, is_boundary) pairs in a
    deterministic local order. Preference: a child already holding chain
    content in its L slots, then a child in a hull-chain state, then a child
    on the object's boundary. Returns None when no class matches.

    avoid, if given, is a node the picker steers around when seeding a fresh
    chain (a leader about to walk there would have to role-swap with the
    occupant, and swapping with a chain cell is costlier). A child already
    holding content is never avoided: the chain must stay contiguous.
    """
    for child, _ in candidates:
        ctr_l = child.ctr_l
        for h in range(6):
            s = ctr_l[h]
            if s[0] in (0, 1) or s[1]:
                return child
    fallback = None
    for child, _ in candidates:
        if child.state in ("hull", "marker", "pre_marker"):
            if avoid is not None and avoid in child.nodes:
                fallback = fallback or child
                continue
            return child
    for child, on_boundary in candidates:
        if on_boundary:
            if avoid is not None and avoid in child.nodes:
                fallback = fallback or child
                continue
            return child
    return fallback


def process_hull_counters(p, q) -> bool:
    """Run one activation's worth of counter work for particle p against its
    chain successor q (may be None while p's chains are fully internal).
    Returns whether any token or bit moved."""
    acted = False
    for h in range(6):
        pl = p.ctr_l[h]
        pm = p.ctr_m[h]
        if q is not None:
            ql = q.ctr_l[h]
            if forward_bits(pl, pm, ql, q.ctr_m[h]):
                acted = True
            if pm[0] == BLANK:
                if process_counter(pl, ql, origin=p.is_leader)[1]:
                    acted = True
                continue
            if process_counter(pm, ql)[1]:
                acted = True
        elif pm[0] == BLANK:
            continue
        if process_counter(pl, pm, origin=p.is_leader)[1]:
            acted = True
    return acted


def hull_generate(p, i: int, pushed: frozenset[int] | set[int]) -> bool:
    """Enqueue the movement tokens for a step in direction i.

    Planes in pushed sit at distance 0 and are being pushed outward by this
    move; their decrements are skipped (the clamped distance stays 0, and an
    unmatched decrement would jam the chain at the final token forever).
    """
    from .lattice import delta

    row = delta(i)
    queued = False
    for h in range(6):
        if row[h] > 0:
            p.ctr_l[h][1].append(CPLUS)
            queued = True
        elif row[h] < 0 and h not in pushed:
            p.ctr_l[h][1].append(CMINUS)
            queued = True
    return queued


def hull_zero_test(p, q, h: int):
    """Zero test of counter h at the origin particle p with chain successor q."""
    if p.ctr_m[h][0] != BLANK:
        return zero_test(p.ctr_l[h], p.ctr_m[h])
    if q is None:
        return None
    return zero_test(p.ctr_l[h], q.ctr_l[h])


def holds_chain_content(p, h: int) -> bool:
    """Whether particle p keeps counter bits of plane h (any real bit or any
    token, including the final token, in either slot)."""
    pl = p.ctr_l[h]
    pm = p.ctr_m[h]
    return pl[0] in (0, 1) or pm[0] in (0, 1) or bool(pl[1]) or bool(pm[1])


def holds_any_content(p) -> bool:
    """Whether any slot of p differs from the everywhere-empty rest state.
    Cheap negative gate: a particle reporting False has no counter work."""
    for h in range(6):
        pl = p.ctr_l[h]
        if pl[0] != EMPTY or pl[1]:
            return True
        pm = p.ctr_m[h]
        if pm[0] != EMPTY or pm[1]:
            return True
    return False
