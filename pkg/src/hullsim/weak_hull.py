"""Hull tightening: shrinking the closed six-direction hull ring onto the
line-convex hull.

Once the ring has certified itself all-contracted, the certifying particle
anchors a tightening cycle that follows the ring's parent pointers.  Convex
cycle members repeatedly step inward (swapping roles through any leftover
helper particles they meet) until every member rests on the line-convex
hull, which a circulating probe token detects as one full lap with no
movement anywhere.
"""

from __future__ import annotations

from .engine import (
    NON_TIGHTENING,
    TIGHTENING,
    TIGHT_FINISHED,
    LocalView,
    Particle,
    adjacent,
)
from .lattice import direction_between, neighbor

# -- cycle construction -------------------------------------------------------


def init_tightening(p: Particle, view: LocalView) -> None:
    """Anchor the tightening cycle at the particle that certified the ring."""
    p.state = TIGHTENING
    p.is_first = True
    par = view.occupant(p.parent) if p.parent is not None else None
    if par is not None:
        p.succ_pid = par.pid
        par.pred_pid = p.pid
    p.parent = None
    view.note("tighten_start", frm=p.head)


def adopt_tightening(p: Particle, par: Particle, view: LocalView) -> bool:
    """Join the cycle behind an already-tightening parent.  Each member keeps
    its first claimed predecessor so a second claimant cannot split the
    cycle.  Cycle members navigate by successor/predecessor from here on, so
    the tree pointer is dropped."""
    if par.pred_pid is not None and par.pred_pid != p.pid:
        return False
    p.state = TIGHTENING
    p.succ_pid = par.pid
    par.pred_pid = p.pid
    p.parent = None
    return True


# -- local queries -------------------------------------------------------------


def _cycle_neighbor(p: Particle, view: LocalView,
                    pid: int | None) -> tuple[Particle | None, int | None]:
    """The adjacent cycle member with the given pid and, when the acting
    particle is contracted, the direction toward it."""
    if pid is None:
        return None, None
    for q in view.around():
        if q.pid != pid:
            continue
        d = None
        if p.contracted:
            if adjacent(p.head, q.head):
                d = direction_between(p.head, q.head)
            elif q.expanded and adjacent(p.head, q.tail):
                d = direction_between(p.head, q.tail)
        return q, d
    return None, None


def _is_convex(p: Particle, succ: Particle | None, sdir: int | None,
               pred: Particle | None) -> bool:
    """A contracted member flanked by contracted members 120 degrees apart
    sits on a convex corner and may fold inward."""
    if succ is None or pred is None or sdir is None:
        return False
    if not (p.contracted and succ.contracted and pred.contracted):
        return False
    if succ.state != TIGHTENING or pred.state != TIGHTENING:
        return False
    if not adjacent(p.head, pred.head):
        return False
    return direction_between(p.head, pred.head) == (sdir + 2) % 6


def _touches_object(p: Particle, view: LocalView) -> bool:
    for w in p.nodes:
        for g in range(6):
            if view.is_object(neighbor(w, g)):
                return True
    return False


def _tight_finished_neighbor(p: Particle, view: LocalView) -> bool:
    return any(q.state == TIGHT_FINISHED for q in view.around())


def _finish(p: Particle) -> None:
    p.state = TIGHT_FINISHED
    p.terminated = True
    p.tight_token = None


def _move_target(p: Particle, sdir: int) -> tuple[int, tuple[int, int]]:
    out = (sdir + 1) % 6
    return out, neighbor(p.head, out)


def _can_step(p: Particle, view: LocalView, succ: Particle | None,
              sdir: int | None, pred: Particle | None) -> bool:
    if not _is_convex(p, succ, sdir, pred):
        return False
    _, v = _move_target(p, sdir)
    if view.is_object(v):
        return False
    vq = view.occupant(v)
    if vq is None:
        return True
    if vq.state != NON_TIGHTENING:
        return False
    return vq.contracted or vq.tail == v


# -- helper (non-cycle) particles ----------------------------------------------


def _weak_neighbor_join(p: Particle, view: LocalView) -> bool:
    """Leftover particles attach below the cycle as helpers."""
    for w in p.nodes:
        for g in range(6):
            v = neighbor(w, g)
            q = view.occupant(v)
            if q is not None and q.state in (TIGHTENING, NON_TIGHTENING):
                p.state = NON_TIGHTENING
                p.parent = v
                return True
    return False


def _non_tightening_tail_child(p: Particle, view: LocalView) -> Particle | None:
    tail = p.tail
    for q in view.children():
        if q.state == NON_TIGHTENING and q.contracted and adjacent(q.head, tail):
            return q
    return None


def _tail_children(p: Particle, view: LocalView) -> bool:
    return any(q.parent == p.tail for q in view.children())


def act_non_tightening(p: Particle, view: LocalView) -> bool:
    if p.contracted and _tight_finished_neighbor(p, view):
        _finish(p)
        return True
    if p.expanded:
        q = _non_tightening_tail_child(p, view)
        if q is not None:
            view.pull(q)
            return True
        if not _tail_children(p, view):
            view.contract()
            return True
        return False
    par = view.occupant(p.parent) if p.parent is not None else None
    if par is None:
        return _weak_neighbor_join(p, view)
    if par.expanded and par.state in (TIGHTENING, NON_TIGHTENING) \
            and adjacent(p.head, par.tail):
        view.push(par)
        return True
    return False


# -- cycle members -------------------------------------------------------------


def _weak_swap(p: Particle, q: Particle, view: LocalView,
               succ: Particle | None, pred: Particle | None) -> None:
    """Fold through an adjacent contracted helper: the helper takes over p's
    place in the cycle and p drops out below it."""
    q.state = TIGHTENING
    q.succ_pid = p.succ_pid
    q.pred_pid = p.pred_pid
    q.is_first = p.is_first
    q.tight_token = p.tight_token
    q.tight_created = p.tight_created
    q.tight_moved = True  # the cycle slot just stepped inward
    q.parent = None
    p.state = NON_TIGHTENING
    p.parent = q.head
    p.succ_pid = None
    p.pred_pid = None
    p.is_first = False
    p.tight_token = None
    p.tight_created = False
    p.tight_moved = False
    if succ is not None:
        succ.pred_pid = q.pid
    if pred is not None:
        pred.succ_pid = q.pid
    view.note("tight_swap", frm=p.head, to=q.head)


def _handle_token(p: Particle, view: LocalView, succ: Particle | None,
                  sdir: int | None, pred: Particle | None) -> bool:
    """Circulate the probe: it zeroes at any member that could still move,
    so a full silent lap returns it to the anchor still holding 1.  The
    anchor only accepts a clean lap if it has been still itself the whole
    time and cannot move now; otherwise it starts a fresh lap."""
    if succ is None or succ.state != TIGHTENING:
        return False
    val = p.tight_token
    p.tight_token = None
    if p.is_first:
        if val >= 1 and not p.tight_moved \
                and not _can_step(p, view, succ, sdir, pred):
            _finish(p)
            view.note("tight_done", frm=p.head)
            return True
        p.tight_moved = False
        succ.tight_token = 1
        return True
    succ.tight_token = 0 if _can_step(p, view, succ, sdir, pred) else val
    return True


def act_tightening(p: Particle, view: LocalView) -> bool:
    if p.contracted and _tight_finished_neighbor(p, view):
        _finish(p)
        return True
    succ, sdir = _cycle_neighbor(p, view, p.succ_pid)
    pred, _ = _cycle_neighbor(p, view, p.pred_pid)
    if p.is_first and not p.tight_created and p.contracted \
            and succ is not None and succ.state == TIGHTENING \
            and (_touches_object(p, view)
                 or not _can_step(p, view, succ, sdir, pred)):
        # The cycle is complete behind the anchor and the anchor itself has
        # come to rest (against the object, or simply out of moves for now);
        # launch the probe.
        succ.tight_token = 1
        p.tight_created = True
        p.tight_moved = False
        return True
    if p.tight_token is not None:
        return _handle_token(p, view, succ, sdir, pred)
    if p.expanded:
        q = _non_tightening_tail_child(p, view)
        if q is not None:
            view.pull(q)
            return True
        if not _tail_children(p, view):
            view.contract()
            return True
        return False
    if _is_convex(p, succ, sdir, pred):
        out, v = _move_target(p, sdir)
        if view.is_object(v):
            return False
        vq = view.occupant(v)
        if vq is None:
            p.tight_moved = True
            view.expand(out)
            return True
        if vq.state == NON_TIGHTENING:
            if vq.expanded and vq.tail == v:
                p.tight_moved = True
                view.push(vq)
                return True
            if vq.contracted:
                _weak_swap(p, vq, view, succ, pred)
                return True
    return False


# -- dispatch ------------------------------------------------------------------


def weak_act(p: Particle, view: LocalView) -> bool | None:
    """Weak-mode rules; None falls through to the standard rules."""
    state = p.state
    if state == TIGHT_FINISHED:
        return False
    if state == TIGHTENING:
        return act_tightening(p, view)
    if state == NON_TIGHTENING:
        return act_non_tightening(p, view)
    if p.contracted and _tight_finished_neighbor(p, view):
        _finish(p)
        return True
    return None
