"""Per-state activation rules for distributed convex hull formation.

The particle system runs three phases.  A single leader first walks the
object's surface with six distributed distance counters until it has seen
every support line of the hull (learning), then walks the hull itself,
dropping a marker at the start node and recruiting the particles it meets
into a hull chain until the ring closes (closing), and finally the ring
certifies itself, recruits leftover particles into gaps, and floods a
termination signal (filling).  Every rule reads and writes strictly within
one hop of the acting particle and moves at most once per activation.
"""

from __future__ import annotations

from typing import Iterable

from .counter import (
    BLANK,
    FINAL,
    holds_any_content,
    holds_chain_content,
    hull_generate,
    hull_zero_test,
    new_slot,
    next_counter_particle,
    process_hull_counters,
)
from .engine import (
    FILLER,
    FINISHED,
    FOLLOWER,
    HULL,
    IDLE,
    LEADER,
    MARKER,
    PRE_FILLER,
    PRE_FINISHED,
    PRE_MARKER,
    TIGHTENING,
    TRAPPED,
    LocalView,
    Particle,
    adjacent,
)
from .lattice import delta, direction_between, neighbor, next_plane, plane_to_dir

# -- shared helpers -----------------------------------------------------------


def chain_successor(view: LocalView, avoid=None) -> Particle | None:
    """The child that continues the acting particle's counter chain."""
    return next_counter_particle(view.chain_candidates(), avoid)


def _counter_step(p: Particle, view: LocalView) -> bool:
    """Counter relay work for a non-leader particle; skipped entirely when
    every slot is at rest."""
    if not holds_any_content(p):
        return False
    return process_hull_counters(p, chain_successor(view))


def handover_is_safe(p: Particle, q: Particle) -> bool:
    """Whether a handover between p and its expanded parent q keeps every
    counter chain contiguous.

    A handover re-parents the mover onto the ceding particle, so it is only
    safe per plane when both sides hold chain content, neither does, or the
    lone content side holds that plane's final token (the chain ends there,
    so no third particle can be cut off it).
    """
    for h in range(6):
        cp = holds_chain_content(p, h)
        cq = holds_chain_content(q, h)
        if cp == cq:
            continue
        holder = q if cq else p
        if FINAL in holder.ctr_l[h][1] or FINAL in holder.ctr_m[h][1]:
            continue
        return False
    return True


def can_swap_roles(p: Particle, q: Particle) -> bool:
    """Whether the leader p may hand its role to the blocking particle q.

    Safe unless q is a chain cell whose counters continue on a third
    particle: the swap can reorder two particles' rows but cannot re-link a
    chain tail beyond them.
    """
    if not holds_any_content(q):
        return True
    for h in range(6):
        if not holds_chain_content(q, h):
            continue
        queues = (p.ctr_l[h][1], p.ctr_m[h][1], q.ctr_l[h][1], q.ctr_m[h][1])
        if not any(FINAL in toks for toks in queues):
            return False
    return True


def role_swap(p: Particle, q: Particle, view: LocalView,
              closing: bool = False) -> None:
    """Hand the leader role from p to the adjacent contracted particle q.

    q takes p's less significant counter row and the leader's memory. When q
    is a fresh cell, p keeps its more significant row shifted down into the
    low slots, blank bits marking the vacated cells until the chain compacts
    them away; when q is p's own chain successor (it already holds counter
    bits), the two particles exchange rows outright, which preserves cell
    order with q in front.
    """
    if holds_any_content(q):
        for h in range(6):
            q.ctr_l[h], q.ctr_m[h], p.ctr_l[h], p.ctr_m[h] = \
                p.ctr_l[h], p.ctr_m[h], q.ctr_l[h], q.ctr_m[h]
    else:
        for h in range(6):
            q.ctr_l[h] = p.ctr_l[h]
            q.ctr_m[h] = new_slot(BLANK)
            p.ctr_l[h] = p.ctr_m[h]
            p.ctr_m[h] = new_slot(BLANK)
    q.state = LEADER
    q.parent = None
    p.parent = q.head
    if closing:
        q.plane = p.plane
        q.premarker_pending = p.premarker_pending
        q.has_all_exp = p.has_all_exp
        p.plane = None
        p.has_all_exp = False
        if p.premarker_pending:
            p.state = MARKER
            p.premarker_pending = False
            q.premarker_pending = False
            view.note("premarker", to=p.head)
        else:
            p.state = HULL
    else:
        q.bits = p.bits
        p.bits = [0] * 6
        p.state = FOLLOWER
    view.note("swap", frm=p.head, to=q.head)


def _parent_particle(p: Particle, view: LocalView) -> Particle | None:
    if p.parent is None:
        return None
    return view.occupant(p.parent)


def _rhr_dir(view: LocalView, pos: tuple[int, int]) -> int:
    """Clockwise surface-following direction: back off from the first object
    neighbor until the port is free."""
    g = -1
    for k in range(6):
        if view.is_object(neighbor(pos, k)):
            g = k
            break
    if g < 0:
        raise ValueError(f"{pos} does not touch the object")
    while view.is_object(neighbor(pos, g)):
        g = (g + 5) % 6
    return g


def _port_cycle(p: Particle) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """(own node, facing node) pairs in clockwise cyclic port order: six for a
    contracted particle, ten for an expanded one."""
    head = p.head
    if p.contracted:
        return [(head, neighbor(head, g)) for g in range(6)]
    tail = p.tail
    t = direction_between(head, tail)
    tb = (t + 3) % 6
    ports = [(head, neighbor(head, (t + 1 + k) % 6)) for k in range(5)]
    ports += [(tail, neighbor(tail, (tb + 1 + k) % 6)) for k in range(5)]
    return ports


def _termination_child(view: LocalView,
                       around: Iterable[Particle]) -> Particle | None:
    nodes = view.p.nodes
    for q in around:
        if q.parent in nodes and q.state in (HULL, MARKER, PRE_MARKER):
            return q
    return None


def _safe_tail_child(p: Particle, view: LocalView) -> Particle | None:
    """A contracted child of any state next to p's tail whose handover keeps
    the counter chains intact."""
    tail = p.tail
    for q in view.children():
        if q.contracted and adjacent(q.head, tail) and handover_is_safe(q, p):
            return q
    return None


def _can_contract(p: Particle, around: Iterable[Particle]) -> bool:
    """Whether an expanded particle may contract without stranding anyone.

    Contraction pulls the tail into the head, so only children rooted on the
    tail node would be orphaned; children rooted on the head keep pointing at
    this particle.  Idle neighbors must be adopted before anyone leaves.
    """
    tail = p.tail
    for q in around:
        if q.state == IDLE or q.parent == tail:
            return False
    return True


def _pull_hull_child(p: Particle, view: LocalView) -> Particle | None:
    tail = p.tail
    for q in view.children():
        if q.state == HULL and q.contracted and adjacent(q.head, tail):
            return q
    return None


# -- idle and follower --------------------------------------------------------


def act_idle(p: Particle, view: LocalView) -> bool:
    for g in range(6):
        v = neighbor(p.head, g)
        q = view.occupant(v)
        if q is not None and q.state != IDLE:
            p.state = FOLLOWER
            p.parent = v
            return True
    return False


def _finished_neighbor_node(p: Particle, around: Iterable[Particle]):
    """A node of an adjacent finished particle to adopt as parent, preferring
    its tail (the end a handover will vacate next). Only nodes adjacent to
    p's head qualify: contraction keeps the head, so a head-adjacent parent
    stays in view."""
    head = p.head
    for q in around:
        if q.state != FINISHED:
            continue
        for u in (q.tail, q.head):
            if adjacent(head, u):
                return u
    return None


def act_follower(p: Particle, view: LocalView) -> bool:
    acted = _counter_step(p, view)
    around = view.around()
    tgt = _finished_neighbor_node(p, around)
    if tgt is not None and p.parent != tgt:
        p.parent = tgt
        return True
    if p.expanded:
        q = _safe_tail_child(p, view)
        if q is not None:
            view.pull(q)
            return True
        if _can_contract(p, around):
            view.contract()
            return True
        return acted
    par = _parent_particle(p, view)
    if par is None or not par.expanded or not adjacent(p.head, par.tail):
        return acted
    if not handover_is_safe(p, par):
        return acted
    st = par.state
    if st == LEADER:
        if par.premarker_pending:
            p.state = PRE_MARKER
            par.premarker_pending = False
            view.note("premarker", to=par.tail)
            view.push(par)
            return True
        if par.plane is None:
            view.push(par)
            return True
        return acted
    if st == PRE_MARKER:
        par.state = MARKER
        view.push(par)
        return True
    if st == MARKER:
        p.state = PRE_MARKER
        par.state = HULL
        view.push(par)
        return True
    if st == FOLLOWER:
        view.push(par)
        return True
    if st == PRE_FINISHED:
        par.state = FINISHED
        view.push(par)
        return True
    return acted


# -- leader -------------------------------------------------------------------


def _learning_pull_child(p: Particle, view: LocalView) -> Particle | None:
    """Prefer the child that keeps counter content (pulling past it would cut
    the chain), then any follower on the object's surface layer."""
    tail = p.tail
    cands = [q for q in view.children()
             if q.contracted and q.state == FOLLOWER and adjacent(q.head, tail)]
    for q in cands:
        if any(holds_chain_content(q, h) for h in range(6)):
            return q
    for q in cands:
        if view.on_boundary(q):
            return q
    return None


def _closing_plane(p: Particle, succ: Particle | None) -> int | None:
    """The last support plane of the clockwise run of zero distances, i.e. the
    plane h with d_h = 0 and d_{h+1} > 0.  None while any test is unsettled
    or no boundary exists yet."""
    tests = [hull_zero_test(p, succ, h) for h in range(6)]
    for h in range(6):
        if tests[h] is True and tests[next_plane(h)] is False:
            return h
    return None


def _leader_learning(p: Particle, view: LocalView, succ: Particle | None,
                     acted: bool) -> bool:
    if p.expanded:
        q = _learning_pull_child(p, view)
        if q is not None:
            view.pull(q)
            return True
        return acted
    if all(p.bits):
        h = _closing_plane(p, succ)
        if h is None:
            return acted
        p.plane = h
        p.premarker_pending = True
        view.note("closing_start", to=p.head)
        return True
    tests = [hull_zero_test(p, succ, h) for h in range(6)]
    if any(t is None for t in tests):
        return acted
    if any(p.ctr_l[h][1] for h in range(6)):
        return acted
    i = _rhr_dir(view, p.head)
    v = neighbor(p.head, i)
    vq = view.occupant(v)
    if vq is not None:
        if not vq.contracted:
            return acted
        if any(p.ctr_m[h][0] == BLANK for h in range(6)):
            return acted
        if not can_swap_roles(p, vq):
            return acted
    row = delta(i)
    pushed = frozenset(h for h in range(6) if row[h] < 0 and tests[h] is True)
    hull_generate(p, i, pushed)
    if pushed:
        p.bits = [0] * 6
    else:
        for h in range(6):
            if hull_zero_test(p, succ, h) is True:
                p.bits[h] = 1
    if vq is None:
        view.expand(i)
    else:
        role_swap(p, vq, view)
    return True


def _premarker_mint_child(p: Particle, view: LocalView,
                          succ: Particle | None) -> Particle | None:
    if succ is not None and succ.state == FOLLOWER and succ.contracted \
            and adjacent(succ.head, p.tail):
        return succ
    return None


def _leader_closing(p: Particle, view: LocalView, succ: Particle | None,
                    acted: bool) -> bool:
    around = view.around()
    if p.has_all_exp:
        # The whole chain is expanded; without the marker in sight the ring
        # cannot close, so certify the partial cover and stop here.
        if not any(q.state in (MARKER, PRE_MARKER) for q in around):
            p.has_all_exp = False
            p.state = FINISHED
            tgt = _termination_child(view, around)
            if tgt is not None:
                tgt.has_termination = True
            view.note("early_term", frm=p.head)
            return True
    if p.expanded:
        q = _pull_hull_child(p, view)
        if q is not None:
            view.pull(q)
            return True
        if p.premarker_pending:
            q = _premarker_mint_child(p, view, succ)
            if q is not None:
                q.state = PRE_MARKER
                p.premarker_pending = False
                view.note("premarker", to=p.tail)
                view.pull(q)
                return True
        # When the ring is tiled entirely by expanded particles nobody can
        # hand over, so the walk must be allowed to close from the head.
        zt = hull_zero_test(p, succ, next_plane(p.plane))
        if zt is not None:
            if zt is True:
                p.plane = next_plane(p.plane)
            v = neighbor(p.head, plane_to_dir(p.plane))
            vq = view.occupant(v)
            if vq is not None and vq.state == MARKER:
                vq.state = FINISHED
                p.state = FINISHED
                p.parent = v
                p.all_con = 0
                p.has_all_exp = False
                view.note("closed", to=v)
                return True
        return acted
    zt = hull_zero_test(p, succ, next_plane(p.plane))
    if zt is None:
        return acted
    if zt is True:
        p.plane = next_plane(p.plane)
    i = plane_to_dir(p.plane)
    v = neighbor(p.head, i)
    vq = view.occupant(v)
    if vq is not None and vq.state == MARKER:
        # The walk has come full circle: close the ring.
        vq.state = FINISHED
        p.state = FINISHED
        p.parent = v
        p.all_con = 0
        p.has_all_exp = False
        view.note("closed", to=v)
        return True
    if any(p.ctr_l[h][1] for h in range(6)):
        return acted
    if vq is None:
        hull_generate(p, i, frozenset())
        view.expand(i)
        return True
    if vq.contracted and vq.state == FOLLOWER \
            and all(p.ctr_m[h][0] != BLANK for h in range(6)) \
            and can_swap_roles(p, vq):
        hull_generate(p, i, frozenset())
        role_swap(p, vq, view, closing=True)
        return True
    return acted


def _walk_target(p: Particle, view: LocalView):
    """The node the leader would move to next, or None when not imminent."""
    if p.expanded:
        return None
    if p.plane is not None:
        return neighbor(p.head, plane_to_dir(p.plane))
    try:
        return neighbor(p.head, _rhr_dir(view, p.head))
    except ValueError:
        return None


def act_leader(p: Particle, view: LocalView) -> bool:
    succ = chain_successor(view, _walk_target(p, view))
    acted = process_hull_counters(p, succ)
    if p.plane is None:
        return _leader_learning(p, view, succ, acted)
    return _leader_closing(p, view, succ, acted)


# -- hull chain, marker, and its understudy -----------------------------------


def act_hull(p: Particle, view: LocalView) -> bool:
    acted = _counter_step(p, view)
    around = view.around()
    if p.has_termination:
        p.has_termination = False
        p.state = FINISHED
        p.has_all_exp = False
        tgt = _termination_child(view, around)
        if tgt is not None:
            tgt.has_termination = True
        return True
    par = _parent_particle(p, view)
    if par is not None and par.state == FINISHED:
        p.state = FINISHED
        p.has_all_exp = False
        return True
    if p.expanded:
        q = _pull_hull_child(p, view)
        if q is not None:
            view.pull(q)
            return True
    if p.has_all_exp and par is not None and par.expanded:
        p.has_all_exp = False
        par.has_all_exp = True
        return True
    if p.contracted and par is not None and par.expanded \
            and par.state in (HULL, LEADER) and adjacent(p.head, par.tail):
        view.push(par)
        return True
    return acted


def act_premarker(p: Particle, view: LocalView) -> bool:
    acted = _counter_step(p, view)
    if p.expanded:
        around = view.around()
        q = _safe_tail_child(p, view)
        if q is not None:
            p.state = MARKER
            view.note("marker", to=p.head)
            view.pull(q)
            return True
        if _can_contract(p, around):
            p.state = MARKER
            view.note("marker", to=p.head)
            view.contract()
            return True
        return acted
    p.state = MARKER
    view.note("marker", to=p.head)
    return True


def act_marker(p: Particle, view: LocalView) -> bool:
    acted = _counter_step(p, view)
    if p.has_termination:
        p.has_termination = False
        p.state = FINISHED
        return True
    par = _parent_particle(p, view)
    if p.expanded:
        if p.has_all_exp and par is not None and par.expanded:
            p.has_all_exp = False
            par.has_all_exp = True
            return True
        around = view.around()
        if view.quiet(around):
            if not p.allexp_generated:
                # The chain behind the marker is gone; report that every
                # chain member is expanded, exactly once.
                p.allexp_generated = True
                p.has_all_exp = True
                view.note("all_exp", frm=p.head)
                return True
            return acted
        q = _safe_tail_child(p, view)
        if q is not None:
            q.state = PRE_MARKER
            p.state = HULL
            view.pull(q)
            return True
        return acted
    if par is not None and par.expanded and adjacent(p.head, par.tail):
        view.push(par)
        return True
    return acted


# -- finished ring: certification, recruiting, termination --------------------


def _contracted_finished_child(p: Particle,
                               around: Iterable[Particle]) -> Particle | None:
    nodes = p.nodes
    for q in around:
        if q.parent in nodes and q.state == FINISHED and q.contracted:
            return q
    return None


def _recruit(p: Particle, view: LocalView, around: list[Particle]) -> bool:
    """Hand one adjacent contracted follower a role in the gap machinery:
    filler if it sits on the open arc between the finished child and the
    parent, trapped if it sits in the enclosed pocket."""
    # A pre-filler is a finished particle marked for replacement; it still
    # holds its ring node, so it anchors recruitment the same way.
    par = _parent_particle(p, view)
    if par is None or par.state not in (FINISHED, PRE_FILLER):
        return False
    nodes = p.nodes
    qfin = None
    for q in around:
        if q.parent in nodes and q.state in (FINISHED, PRE_FILLER):
            qfin = q
            break
    if qfin is None:
        return False
    ports = _port_cycle(p)
    n = len(ports)
    i = j = None
    for idx, (_, tgt) in enumerate(ports):
        if i is None and tgt in (qfin.head, qfin.tail):
            i = idx
        if j is None and tgt == p.parent:
            j = idx
    if i is None or j is None or i == j:
        return False
    dj = (j - i) % n
    for k in range(1, n):
        idx = (i + k) % n
        if idx == j:
            continue
        base, tgt = ports[idx]
        r = view.occupant(tgt)
        if r is not None and r.state == FOLLOWER and r.contracted:
            r.parent = base
            r.state = FILLER if 0 < (idx - i) % n < dj else TRAPPED
            view.note("recruit", to=tgt, tokens=[r.state])
            return True
    return False


def act_finished(p: Particle, view: LocalView) -> bool:
    around = view.around()
    if p.has_termination:
        p.has_termination = False
        tgt = _termination_child(view, around)
        if tgt is not None:
            tgt.has_termination = True
        return True
    if view.mode == "weak" and p.contracted:
        par = _parent_particle(p, view)
        if par is not None and par.state == TIGHTENING:
            from .weak_hull import adopt_tightening
            if adopt_tightening(p, par, view):
                return True
    if p.all_con is not None and p.contracted:
        if p.all_con >= 7:
            # Seven turns certify a full convex traversal of the ring.
            p.all_con = None
            if view.mode == "weak":
                from .weak_hull import init_tightening
                init_tightening(p, view)
            else:
                p.has_termination = True
                view.note("terminate_all", frm=p.head)
            return True
        q = _contracted_finished_child(p, around)
        if q is not None and p.parent is not None:
            t = p.all_con
            straight = (direction_between(p.head, p.parent) + 3) % 6
            if direction_between(p.head, q.head) != straight:
                t += 1
            q.all_con = t
            p.all_con = None
            return True
    return _recruit(p, view, around)


# -- gap filling --------------------------------------------------------------


def _follower_tail_child(p: Particle, view: LocalView) -> Particle | None:
    tail = p.tail
    for q in view.children():
        if q.state == FOLLOWER and q.contracted and adjacent(q.head, tail):
            return q
    return None


def act_filler(p: Particle, view: LocalView) -> bool:
    if p.expanded:
        q = _follower_tail_child(p, view)
        if q is not None:
            view.pull(q)
            return True
        if _can_contract(p, view.around()):
            view.contract()
            return True
        return False
    i = -1
    for g in range(6):
        q = view.occupant(neighbor(p.head, g))
        if q is not None and q.state == FINISHED:
            i = g
            break
    if i < 0:
        return False
    # Rotate counterclockwise off the finished wall to the first open port.
    for _ in range(6):
        q = view.occupant(neighbor(p.head, i))
        if q is None or q.state != FINISHED:
            break
        i = (i + 5) % 6
    else:
        return False
    w = neighbor(p.head, (i + 1) % 6)
    q = view.occupant(w)
    if q is not None and q.expanded and q.tail == w:
        p.state = PRE_FINISHED
        view.push(q)
        return True
    v = neighbor(p.head, i)
    if view.occupant(v) is None and not view.is_object(v):
        view.expand(i)
        return True
    return False


def _adopt_parent(node: tuple[int, int] | None):
    """Post-move hook: a particle taking over a ring node inherits the ring
    parent of the particle that vacated it, keeping the cycle intact."""
    def hook(view: LocalView) -> None:
        if node is not None:
            view.p.parent = node
    return hook


def _bequeath_parent(node: tuple[int, int] | None, ceded: tuple[int, int]):
    """Post-move hook: hand the ring parent to whichever particle now holds
    the ceded node."""
    def hook(view: LocalView) -> None:
        q = view.occupant(ceded)
        if q is not None and node is not None:
            q.parent = node
    return hook


def act_trapped(p: Particle, view: LocalView) -> bool:
    par = _parent_particle(p, view)
    if par is None:
        return False
    if par.expanded and par.state in (FINISHED, PRE_FILLER):
        if adjacent(p.head, par.tail):
            if par.state == PRE_FILLER:
                par.state = FILLER
                if par.all_con is not None:
                    p.all_con = par.all_con
                    par.all_con = None
                view.then(_adopt_parent(par.parent))
            p.state = PRE_FINISHED
            view.push(par)
            return True
        if adjacent(p.head, par.head):
            # Only the head is reachable from inside the pocket: take it and
            # inherit the ring parent the ceded particle held for that node.
            if par.state == PRE_FILLER:
                par.state = FILLER
                if par.all_con is not None:
                    p.all_con = par.all_con
                    par.all_con = None
            p.state = PRE_FINISHED
            view.push_head(par)
            view.then(_adopt_parent(par.parent))
            return True
        return False
    if par.contracted and par.state == FINISHED:
        par.state = PRE_FILLER
        return True
    return False


def act_prefiller(p: Particle, view: LocalView) -> bool:
    if p.contracted:
        if p.parent is None:
            return False
        out = (direction_between(p.head, p.parent) + 5) % 6
        v = neighbor(p.head, out)
        if view.occupant(v) is None and not view.is_object(v):
            view.expand(out)
            return True
        return False
    for q in view.children():
        if q.state == TRAPPED and q.contracted and adjacent(q.head, p.tail):
            p.state = FILLER
            q.state = PRE_FINISHED
            if p.all_con is not None:
                q.all_con = p.all_con
                p.all_con = None
            view.then(_bequeath_parent(p.parent, p.tail))
            view.pull(q)
            return True
    return False


def act_prefinished(p: Particle, view: LocalView) -> bool:
    if p.expanded:
        q = _follower_tail_child(p, view)
        if q is not None:
            p.state = FINISHED
            view.pull(q)
            return True
        if _can_contract(p, view.around()):
            p.state = FINISHED
            view.contract()
            return True
        return False
    p.state = FINISHED
    return True


# -- dispatch -----------------------------------------------------------------

_RULES = {
    IDLE: act_idle,
    FOLLOWER: act_follower,
    LEADER: act_leader,
    HULL: act_hull,
    PRE_MARKER: act_premarker,
    MARKER: act_marker,
    FINISHED: act_finished,
    FILLER: act_filler,
    TRAPPED: act_trapped,
    PRE_FILLER: act_prefiller,
    PRE_FINISHED: act_prefinished,
}


def act(p: Particle, view: LocalView) -> bool:
    """Run one activation of p against its sealed one-hop view.  Returns
    whether the particle changed any state, token, or position."""
    if view.mode == "weak":
        from .weak_hull import weak_act
        res = weak_act(p, view)
        if res is not None:
            return res
    rule = _RULES.get(p.state)
    if rule is None:
        return False
    return rule(p, view)
