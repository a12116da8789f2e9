"""Simulation engine: particle records, a serialized fair random scheduler
with round accounting, movement primitives with handover semantics, invariant
checking, and trace/metrics plumbing.

The engine knows nothing about individual algorithm rules; each activation is
delegated to a per-state rule function that sees the system only through a
sealed one-hop LocalView and may request at most one movement.
"""

from __future__ import annotations

import json
import math
import random
from typing import Callable, TextIO

from .counter import EMPTY, FINAL, holds_chain_content, new_slot, next_counter_particle
from .hull_oracle import functional, hulls, support_extents
from .lattice import DIRS, Node, ObjectShape, neighbor

# Particle states.
IDLE = "idle"
FOLLOWER = "follower"
LEADER = "leader"
HULL = "hull"
PRE_MARKER = "pre_marker"
MARKER = "marker"
FINISHED = "finished"
FILLER = "filler"
TRAPPED = "trapped"
PRE_FILLER = "pre_filler"
PRE_FINISHED = "pre_finished"
TIGHTENING = "tightening"
NON_TIGHTENING = "non_tightening"
TIGHT_FINISHED = "tight_finished"

_DIRSET = frozenset(DIRS)


class EngineError(RuntimeError):
    """A rule produced an action that violates the model's preconditions."""


class ValidationError(ValueError):
    """Bad run parameters: object, particle count, or placement."""


class InvariantViolation(EngineError):
    """A checked system invariant failed during a debug run."""


# Module-wide tally of invariant violations, read by the verification suite.
violation_count = 0


class Particle:
    """One particle: geometry, state label, memory, and counter slots."""

    __slots__ = (
        "pid", "state", "head", "tail", "offset", "parent",
        "ctr_l", "ctr_m", "bits", "plane",
        "premarker_pending", "allexp_generated",
        "has_all_exp", "has_termination", "all_con", "terminated",
        "succ_pid", "pred_pid", "is_first", "tight_token", "tight_created",
        "tight_moved",
    )

    def __init__(self, pid: int, node: Node, state: str = IDLE, offset: int = 0):
        self.pid = pid
        self.state = state
        self.head = node
        self.tail = node
        self.offset = offset
        self.parent: Node | None = None
        self.ctr_l = [new_slot() for _ in range(6)]
        self.ctr_m = [new_slot() for _ in range(6)]
        self.bits = [0] * 6
        self.plane: int | None = None
        self.premarker_pending = False
        self.allexp_generated = False
        self.has_all_exp = False
        self.has_termination = False
        self.all_con: int | None = None
        self.terminated = False
        self.succ_pid: int | None = None
        self.pred_pid: int | None = None
        self.is_first = False
        self.tight_token: int | None = None
        self.tight_created = False
        self.tight_moved = False

    @property
    def contracted(self) -> bool:
        return self.head == self.tail

    @property
    def expanded(self) -> bool:
        return self.head != self.tail

    @property
    def nodes(self) -> tuple[Node, ...]:
        if self.head == self.tail:
            return (self.head,)
        return (self.head, self.tail)

    @property
    def is_leader(self) -> bool:
        return self.state == LEADER

    def __repr__(self) -> str:  # debugging aid only
        span = f"{self.head}" if self.contracted else f"{self.head}<-{self.tail}"
        return f"<P{self.pid} {self.state} {span}>"


class LocalView:
    """Sealed one-hop window a particle's rule may read and act through.

    Exposes the activated particle, occupancy and object membership within
    one hop of its nodes, a single movement intent, and trace notes. Reads
    beyond one hop raise EngineError.
    """

    __slots__ = ("p", "mode", "_occ", "_all", "_obj", "_bnd", "_nodes",
                 "_intent", "_notes", "_post")

    def __init__(self, p: Particle, occupancy: dict, particles: list,
                 obj: frozenset, bnd: frozenset, mode: str):
        self.p = p
        self.mode = mode
        self._occ = occupancy
        self._all = particles
        self._obj = obj
        self._bnd = bnd
        self._nodes = p.nodes
        self._intent: tuple | None = None
        self._notes: list = []
        self._post: Callable | None = None

    # -- reads ------------------------------------------------------------

    def _local(self, v: Node) -> bool:
        for u in self._nodes:
            if u == v or (v[0] - u[0], v[1] - u[1]) in _DIRSET:
                return True
        return False

    def occupant(self, v: Node) -> Particle | None:
        if not self._local(v):
            raise EngineError(f"non-local read at {v} by particle {self.p.pid}")
        i = self._occ.get(v)
        return None if i is None else self._all[i]

    def is_object(self, v: Node) -> bool:
        if not self._local(v):
            raise EngineError(f"non-local read at {v} by particle {self.p.pid}")
        return v in self._obj

    def on_boundary(self, q: Particle) -> bool:
        """Whether a neighboring particle touches the object's boundary layer."""
        bnd = self._bnd
        return q.head in bnd or q.tail in bnd

    def around(self) -> list[Particle]:
        """Distinct neighbor particles in deterministic port order."""
        occ = self._occ
        all_ = self._all
        mypid = self.p.pid
        seen = set()
        out = []
        for u in self._nodes:
            for d in DIRS:
                i = occ.get((u[0] + d[0], u[1] + d[1]))
                if i is not None and i != mypid and i not in seen:
                    seen.add(i)
                    out.append(all_[i])
        return out

    def children(self) -> list[Particle]:
        nodes = self._nodes
        return [q for q in self.around() if q.parent in nodes]

    def chain_candidates(self) -> list[tuple[Particle, bool]]:
        """(child, touches-boundary) pairs for chain-successor selection."""
        return [(q, self.on_boundary(q)) for q in self.children()]

    def quiet(self, around: list[Particle]) -> bool:
        """No children and no idle neighbors."""
        nodes = self._nodes
        for q in around:
            if q.state == IDLE or q.parent in nodes:
                return False
        return True

    # -- actions ----------------------------------------------------------

    def _set(self, intent: tuple) -> None:
        if self._intent is not None:
            raise EngineError(
                f"particle {self.p.pid} requested two movements in one activation")
        self._intent = intent

    def expand(self, i: int) -> None:
        self._set(("expand", i))

    def contract(self) -> None:
        self._set(("contract",))

    def pull(self, child: Particle) -> None:
        self._set(("pull", child))

    def push(self, parent: Particle) -> None:
        self._set(("push", parent))

    def push_head(self, parent: Particle) -> None:
        self._set(("push_head", parent))

    def note(self, action: str, frm: Node | None = None, to: Node | None = None,
             tokens: tuple | list = ()) -> None:
        self._notes.append((action, frm, to, list(tokens)))

    def then(self, hook: Callable) -> None:
        """Register a continuation run right after this activation's movement,
        with a fresh view (used by rules that re-read post-move geometry)."""
        self._post = hook


class Simulation:
    """A full run: object, particles, scheduler, and bookkeeping."""

    def __init__(self, shape: ObjectShape, n: int | None = None, seed: int = 0,
                 mode: str = "strong", placement: list[Node] | None = None,
                 debug_invariants: bool = False, trace: TextIO | None = None):
        if mode not in ("strong", "weak"):
            raise ValidationError(f"unknown mode {mode!r}")
        self.shape = shape
        self.seed = seed
        self.mode = mode
        self.debug_invariants = debug_invariants
        self.trace = trace
        self.rng = random.Random(seed)

        self.hull = hulls(shape)
        self.H = len(self.hull.strong_cycle)

        if placement is not None:
            nodes = [tuple(v) for v in placement]
            if n is not None and n != len(nodes):
                raise ValidationError("particle count does not match placement")
            n = len(nodes)
            self._validate_placement(nodes)
        else:
            if n is None:
                raise ValidationError("need a particle count or a placement")
            if n < 1:
                raise ValidationError("need at least one particle")
            nodes = self._grow_placement(n)
        if n <= math.log2(self.H):
            raise ValidationError(
                f"{n} particles cannot count to the hull size {self.H}")
        if mode == "weak" and n < self.H:
            raise ValidationError(
                f"weak-hull runs need at least {self.H} particles, got {n}")

        self.n = n
        self.particles: list[Particle] = []
        self.occupancy: dict[Node, int] = {}
        for pid, v in enumerate(nodes):
            p = Particle(pid, v, IDLE, offset=self.rng.randrange(6))
            self.particles.append(p)
            self.occupancy[v] = pid
        leader = self.particles[0]
        leader.state = LEADER
        for h in range(6):
            leader.ctr_l[h] = new_slot(0)
            leader.ctr_m[h] = new_slot(EMPTY, (FINAL,))

        # Scheduler and round accounting.
        self.steps = 0
        self.rounds = 0
        self.epoch = 1
        self.stamps = [0] * n
        self.remaining = n
        self._draws: list[int] = []
        self._di = 0
        self._round_acted = False

        # Run status and phase bookkeeping.
        self.status: str | None = None
        self.closed = False
        self.termination_started = False
        self.s_node: Node | None = None
        self.m_learning: int | None = None
        self.m_closing_end: int | None = None
        self.m_fill_end: int | None = None
        self._act: Callable | None = None
        self._chain_bound = self._counter_length_bound()

    # -- placement --------------------------------------------------------

    def _grow_placement(self, n: int) -> list[Node]:
        """Leader on the smallest boundary node, the rest grown as a random
        connected blob hugging it (seeded, deterministic)."""
        obj = self.shape.nodes
        start = min(self.shape.boundary_nodes)
        nodes = [start]
        taken = {start}
        frontier = {v for v in neighbor_fan(start) if v not in obj}
        while len(nodes) < n:
            if not frontier:
                raise ValidationError("no room to place that many particles")
            v = self.rng.choice(sorted(frontier))
            frontier.discard(v)
            nodes.append(v)
            taken.add(v)
            for u in neighbor_fan(v):
                if u not in obj and u not in taken:
                    frontier.add(u)
        return nodes

    def _validate_placement(self, nodes: list[Node]) -> None:
        if len(set(nodes)) != len(nodes):
            raise ValidationError("placement repeats a node")
        obj = self.shape.nodes
        for v in nodes:
            if v in obj:
                raise ValidationError(f"placement node {v} is inside the object")
        if nodes[0] not in self.shape.boundary_nodes:
            raise ValidationError("the first placement node (the leader) must "
                                  "touch the object's boundary")
        club = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            v = stack.pop()
            for u in neighbor_fan(v):
                if u in club and u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(club):
            raise ValidationError("placement is not connected")

    # -- scheduler ---------------------------------------------------------

    def step(self) -> int:
        """Activate one uniformly random particle; returns its pid."""
        if self._di == len(self._draws):
            self._draws = self.rng.choices(range(self.n), k=4096)
            self._di = 0
        pid = self._draws[self._di]
        self._di += 1
        if self.stamps[pid] != self.epoch:
            self.stamps[pid] = self.epoch
            self.remaining -= 1
        if self.activate(pid):
            self._round_acted = True
        self.steps += 1
        if self.remaining == 0:
            self._boundary()
        return pid

    def _boundary(self) -> None:
        self.rounds += 1
        self.epoch += 1
        self.remaining = self.n
        if self.debug_invariants:
            errs = self.check_invariants()
            if errs:
                self._violate(errs[0])
        if all(q.terminated for q in self.particles):
            self.status = "terminated"
        elif not self._round_acted:
            self.status = "quiescent"
        self._round_acted = False

    def run(self, max_rounds: int = 0) -> str:
        """Step until the system halts; returns the halt status."""
        limit = max_rounds if max_rounds else 200 + 100 * max(self.H, self.n)
        while self.status is None:
            self.step()
            if self.status is None and self.rounds >= limit:
                self.status = "timeout"
        return self.status

    # -- activation --------------------------------------------------------

    def activate(self, pid: int) -> bool:
        """Run one particle's rule; returns whether anything changed."""
        p = self.particles[pid]
        if p.terminated:
            return False
        if self.termination_started and (
                p.has_termination
                or any(q.terminated for q in self._around(p))):
            # Terminated neighbors are visible, so contact spreads the signal
            # even to particles that wandered in after the first broadcast.
            p.terminated = True
            for q in self._around(p):
                if not q.terminated:
                    q.has_termination = True
            self._event(p.pid, "terminate", p.head, None, [])
            return True
        act = self._act
        if act is None:
            from .hull_algo import act
            self._act = act
        view = LocalView(p, self.occupancy, self.particles,
                         self.shape.nodes, self.shape.boundary_nodes, self.mode)
        acted = act(p, view)
        if view._intent is not None:
            self._apply(p, view._intent)
            acted = True
            if view._post is not None:
                view._post(LocalView(p, self.occupancy, self.particles,
                                     self.shape.nodes, self.shape.boundary_nodes,
                                     self.mode))
        for note in view._notes:
            self._note(p, note)
        return acted

    # -- movement primitives ------------------------------------------------

    def _require(self, cond: bool, p: Particle, msg: str) -> None:
        if not cond:
            raise EngineError(
                f"step {self.steps}: particle {p.pid} ({p.state}): {msg}")

    def _apply(self, p: Particle, move: tuple) -> None:
        kind = move[0]
        occ = self.occupancy
        if kind == "expand":
            i = move[1]
            self._require(p.contracted, p, "expand while expanded")
            v = neighbor(p.head, i)
            self._require(v not in self.shape.nodes, p, f"expand into object {v}")
            self._require(v not in occ, p, f"expand into occupied node {v}")
            p.tail = p.head
            p.head = v
            occ[v] = p.pid
            self._event(p.pid, "expand", p.tail, v, [])
        elif kind == "contract":
            self._require(p.expanded, p, "contract while contracted")
            t = p.tail
            del occ[t]
            p.tail = p.head
            self._event(p.pid, "contract", t, p.head, [])
            if self.debug_invariants:
                self._check_connectivity()
        elif kind == "pull":
            q = move[1]
            self._require(p.expanded, p, "pull by a contracted particle")
            self._require(q.contracted, p, f"pull expanded particle {q.pid}")
            t = p.tail
            self._require(adjacent(q.head, t), p,
                          f"pull of non-adjacent particle {q.pid}")
            self._require(q.parent in (p.head, t), p,
                          f"pull of non-child particle {q.pid}")
            p.tail = p.head
            q.tail = q.head
            q.head = t
            occ[t] = q.pid
            q.parent = p.head
            self._event(p.pid, "pull", q.tail, t, [])
        elif kind == "push":
            q = move[1]
            self._require(p.contracted, p, "push by an expanded particle")
            self._require(q.expanded, p, f"push of contracted particle {q.pid}")
            t = q.tail
            self._require(adjacent(p.head, t), p,
                          f"push of non-adjacent particle {q.pid}")
            q.tail = q.head
            p.tail = p.head
            p.head = t
            occ[t] = p.pid
            p.parent = q.head
            self._event(p.pid, "push", p.tail, t, [])
        elif kind == "push_head":
            q = move[1]
            self._require(p.contracted, p, "push by an expanded particle")
            self._require(q.expanded, p, f"push of contracted particle {q.pid}")
            t = q.head
            self._require(adjacent(p.head, t), p,
                          f"push of non-adjacent particle {q.pid}")
            q.head = q.tail
            p.tail = p.head
            p.head = t
            occ[t] = p.pid
            p.parent = q.head
            q.parent = p.head
            self._event(p.pid, "push", p.tail, t, [])
        else:  # pragma: no cover - intents are built only by LocalView
            raise EngineError(f"unknown movement {kind!r}")

    # -- notes, trace, metrics ----------------------------------------------

    def _note(self, p: Particle, note: tuple) -> None:
        action, frm, to, tokens = note
        if action == "closing_start":
            self.s_node = to
            if self.m_learning is None:
                self.m_learning = self.rounds
        elif action in ("closed", "early_term"):
            if self.m_closing_end is None:
                self.m_closing_end = self.rounds
            if action == "closed":
                self.closed = True
        elif action == "tighten_start":
            if self.m_fill_end is None:
                self.m_fill_end = self.rounds
        elif action == "terminate_all":
            self.termination_started = True
        self._event(p.pid, action, frm, to, tokens)

    def _event(self, pid: int, action: str, frm: Node | None, to: Node | None,
               tokens: list) -> None:
        if self.trace is None:
            return
        rec = {
            "step": self.steps,
            "round": self.rounds,
            "pid": pid,
            "action": action,
            "from": None if frm is None else [frm[0], frm[1]],
            "to": None if to is None else [to[0], to[1]],
            "tokens": tokens,
        }
        self.trace.write(json.dumps(rec, separators=(",", ":")) + "\n")

    def metrics(self) -> dict:
        total = self.rounds
        learn = self.m_learning if self.m_learning is not None else total
        if self.m_learning is None:
            closing = 0
        elif self.m_closing_end is not None:
            closing = self.m_closing_end - learn
        else:
            closing = total - learn
        if self.m_closing_end is None:
            filling = 0
        elif self.m_fill_end is not None:
            filling = self.m_fill_end - self.m_closing_end
        else:
            filling = total - self.m_closing_end
        weak = total - self.m_fill_end if self.m_fill_end is not None else 0
        return {
            "B": len(self.shape.boundary_nodes),
            "H": self.H,
            "n": self.n,
            "seed": self.seed,
            "learning_rounds": learn,
            "closing_rounds": closing,
            "filling_rounds": filling,
            "weak_rounds": weak,
            "total_rounds": total,
            "steps": self.steps,
            "status": self.status,
        }

    # -- invariants ----------------------------------------------------------

    def _violate(self, msg: str) -> None:
        global violation_count
        violation_count += 1
        raise InvariantViolation(f"round {self.rounds}: {msg}")

    def _around(self, p: Particle) -> list[Particle]:
        occ = self.occupancy
        out = []
        seen = {p.pid}
        for u in p.nodes:
            for d in DIRS:
                i = occ.get((u[0] + d[0], u[1] + d[1]))
                if i is not None and i not in seen:
                    seen.add(i)
                    out.append(self.particles[i])
        return out

    def _check_connectivity(self) -> None:
        """Every particle node must reach the object through occupied nodes."""
        occ = self.occupancy
        obj = self.shape.nodes
        seen = set()
        stack = []
        for v in occ:
            for u in neighbor_fan(v):
                if u in obj:
                    seen.add(v)
                    stack.append(v)
                    break
        while stack:
            v = stack.pop()
            for u in neighbor_fan(v):
                if u in occ and u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(occ):
            self._violate("system disconnected from the object")

    def _counter_length_bound(self) -> int:
        m = support_extents(self.shape)
        maxd = 1
        for v in self.hull.strong_cycle:
            for h in range(6):
                d = functional(h, v) - (m[h] - 1)
                if d > maxd:
                    maxd = d
        return int(math.log2(maxd)) + 4

    def check_invariants(self) -> list[str]:
        """Global checks; returns human-readable violations (empty if clean)."""
        errs: list[str] = []
        occ = self.occupancy
        obj = self.shape.nodes
        count = 0
        for p in self.particles:
            for u in p.nodes:
                if occ.get(u) != p.pid:
                    errs.append(f"occupancy mismatch for particle {p.pid} at {u}")
                if u in obj:
                    errs.append(f"particle {p.pid} standing on the object at {u}")
            if p.expanded and not adjacent(p.head, p.tail):
                errs.append(f"particle {p.pid} expanded over non-adjacent nodes")
            count += len(p.nodes)
        if count != len(occ):
            errs.append("occupancy map has stray entries")

        if sum(1 for p in self.particles if p.has_all_exp) > 1:
            errs.append("more than one all-expanded token alive")
        if sum(1 for p in self.particles if p.all_con is not None) > 1:
            errs.append("more than one all-contracted token alive")
        for h in range(6):
            fc = 0
            for p in self.particles:
                fc += p.ctr_l[h][1].count(FINAL) + p.ctr_m[h][1].count(FINAL)
            if fc != 1:
                errs.append(f"plane {h} has {fc} final tokens")

        if self.s_node is not None:
            anchors = [p for p in self.particles if p.state in (PRE_MARKER, MARKER)]
            if len(anchors) > 1:
                errs.append("more than one marker particle")
            elif anchors:
                if self.s_node not in anchors[0].nodes:
                    errs.append(f"marker left the anchor node {self.s_node}")
            elif self.s_node not in occ:
                errs.append(f"anchor node {self.s_node} unoccupied")

        leaders = [p for p in self.particles if p.state == LEADER]
        if len(leaders) > 1:
            errs.append("more than one leader")
        if leaders:
            errs.extend(self._check_chain(leaders[0]))
        return errs

    def _check_chain(self, leader: Particle) -> list[str]:
        errs: list[str] = []
        visited = {leader.pid}
        order = [leader]
        cur = leader
        while True:
            cands = [(q, self.on_boundary(q)) for q in self._children(cur)]
            nxt = next_counter_particle(cands)
            if nxt is None or nxt.pid in visited:
                break
            visited.add(nxt.pid)
            order.append(nxt)
            cur = nxt
        for h in range(6):
            holders = 0
            for p in self.particles:
                if holds_chain_content(p, h):
                    holders += 1
                    if p.pid not in visited:
                        errs.append(
                            f"plane {h} content on particle {p.pid} off the chain")
            if holders > self._chain_bound:
                errs.append(f"plane {h} chain grew to {holders} holders "
                            f"(bound {self._chain_bound})")
        return errs

    def on_boundary(self, q: Particle) -> bool:
        bnd = self.shape.boundary_nodes
        return q.head in bnd or q.tail in bnd

    def _children(self, p: Particle) -> list[Particle]:
        nodes = p.nodes
        return [q for q in self._around(p) if q.parent in nodes]


def neighbor_fan(v: Node) -> tuple[Node, ...]:
    return tuple((v[0] + d[0], v[1] + d[1]) for d in DIRS)


def adjacent(a: Node, b: Node) -> bool:
    return (b[0] - a[0], b[1] - a[1]) in _DIRSET


# Module-level operation wrappers.

def activate(sim: Simulation, pid: int) -> bool:
    """Activate one particle of a simulation."""
    return sim.activate(pid)


def step(sim: Simulation) -> int:
    """Advance the scheduler by one activation."""
    return sim.step()


def run(sim: Simulation, max_rounds: int = 0) -> str:
    """Run a simulation to a halt status."""
    return sim.run(max_rounds)


def check_invariants(sim: Simulation) -> list[str]:
    """Check the global invariants of a simulation's current configuration."""
    return sim.check_invariants()
