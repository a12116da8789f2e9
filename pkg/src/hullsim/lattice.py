"""Triangular-lattice geometry: axial coordinates, directions, half-planes,
the per-move distance-update table, and static object validation.

Nodes are (x, y) integer tuples in axial coordinates. The six unit directions
are indexed 0..5 and increase clockwise; direction 0 points along +x.
"""

from __future__ import annotations

from collections import deque

Node = tuple[int, int]

# Unit displacement per direction, clockwise starting at +x.
DIRS: tuple[Node, ...] = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))

# Half-plane labels in fixed ordinal order.
HALF_PLANES: tuple[str, ...] = ("N", "NE", "SE", "S", "SW", "NW")

# delta(i)[h] = change of the distance counter for half-plane h when moving in
# direction i. Generated so that row i is _DELTA_BASE rotated by i, which makes
# delta(i)[h] = f_h(DIRS[i]) for the linear functionals in hull_oracle.
_DELTA_BASE = (1, 1, 0, -1, -1, 0)
_DELTA_ROWS: tuple[tuple[int, ...], ...] = tuple(
    tuple(_DELTA_BASE[(h - i) % 6] for h in range(6)) for i in range(6)
)


def neighbor(v: Node, g: int) -> Node:
    """Adjacent node in global direction g."""
    d = DIRS[g]
    return (v[0] + d[0], v[1] + d[1])


def neighbors(v: Node) -> tuple[Node, ...]:
    """All six adjacent nodes, in direction order."""
    return tuple((v[0] + d[0], v[1] + d[1]) for d in DIRS)


def opposite(g: int) -> int:
    """Direction pointing back along g."""
    return (g + 3) % 6


def direction_between(a: Node, b: Node) -> int:
    """Direction index g with neighbor(a, g) == b; ValueError if not adjacent."""
    d = (b[0] - a[0], b[1] - a[1])
    try:
        return DIRS.index(d)
    except ValueError:
        raise ValueError(f"{a} and {b} are not adjacent") from None


def are_adjacent(a: Node, b: Node) -> bool:
    """True if a and b are distinct lattice neighbors."""
    return (b[0] - a[0], b[1] - a[1]) in DIRS


def delta(i: int) -> tuple[int, ...]:
    """Distance-change row for a move in direction i, indexed by half-plane."""
    return _DELTA_ROWS[i]


def plane_to_dir(h: int) -> int:
    """Direction that follows the boundary line of half-plane h clockwise."""
    return (h + 4) % 6


def next_plane(h: int) -> int:
    """Half-plane whose boundary line is reached next on a clockwise circuit."""
    return (h + 1) % 6


def is_connected(nodes: set[Node]) -> bool:
    """True if the node set induces a connected subgraph (empty set counts)."""
    if not nodes:
        return True
    start = next(iter(nodes))
    seen = {start}
    queue = deque((start,))
    while queue:
        v = queue.popleft()
        for w in neighbors(v):
            if w in nodes and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(nodes)


def _bounding_box(nodes: set[Node], pad: int) -> tuple[int, int, int, int]:
    xs = [v[0] for v in nodes]
    ys = [v[1] for v in nodes]
    return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)


def is_simply_connected(nodes: set[Node]) -> bool:
    """True iff nodes is connected and its complement has no bounded component."""
    if not nodes:
        return False
    if not is_connected(nodes):
        return False
    x0, x1, y0, y1 = _bounding_box(nodes, 1)
    start = (x0, y0)
    seen = {start}
    queue = deque((start,))
    while queue:
        v = queue.popleft()
        for w in neighbors(v):
            if w in nodes or w in seen:
                continue
            if not (x0 <= w[0] <= x1 and y0 <= w[1] <= y1):
                continue
            seen.add(w)
            queue.append(w)
    box_size = (x1 - x0 + 1) * (y1 - y0 + 1)
    return len(seen) == box_size - len(nodes)


def tunnel_pinch_nodes(nodes: set[Node]) -> set[Node]:
    """Free nodes where the complement around the object pinches to width one.

    The complement is restricted to the bounding box padded by 2, with every
    padded-border node merged into one super-node; the articulation nodes of
    that graph are exactly the pinches.
    """
    if not nodes:
        return set()
    x0, x1, y0, y1 = _bounding_box(nodes, 2)

    def on_border(v: Node) -> bool:
        return v[0] in (x0, x1) or v[1] in (y0, y1)

    free = [
        (x, y)
        for x in range(x0, x1 + 1)
        for y in range(y0, y1 + 1)
        if (x, y) not in nodes
    ]
    interior = [v for v in free if not on_border(v)]
    if not interior:
        return set()

    index = {v: i for i, v in enumerate(interior)}
    border_id = len(interior)  # merged super-node
    n = border_id + 1
    adj: list[set[int]] = [set() for _ in range(n)]
    for v, i in index.items():
        for w in neighbors(v):
            if w in nodes:
                continue
            if not (x0 <= w[0] <= x1 and y0 <= w[1] <= y1):
                continue
            j = border_id if on_border(w) else index[w]
            if j != i:
                adj[i].add(j)
                adj[j].add(i)

    # Iterative Tarjan articulation-point search over the interior nodes.
    visited = [False] * n
    disc = [0] * n
    low = [0] * n
    parent = [-1] * n
    timer = 0
    pinches: set[int] = set()
    for root in range(n):
        if visited[root]:
            continue
        root_children = 0
        stack = [(root, iter(adj[root]))]
        visited[root] = True
        disc[root] = low[root] = timer = timer + 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    timer += 1
                    disc[w] = low[w] = timer
                    parent[w] = v
                    if v == root:
                        root_children += 1
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
                elif w != parent[v]:
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if u != root and low[v] >= disc[u] and u != border_id:
                        pinches.add(u)
        if root != border_id and root_children > 1:
            pinches.add(root)
    return {interior[i] for i in pinches}


def has_width1_tunnel(nodes: set[Node]) -> bool:
    """True iff the free space around the object narrows to a single node."""
    return bool(tunnel_pinch_nodes(nodes))


class ObjectError(ValueError):
    """Raised when an object node set violates a load-time assumption."""


class ObjectShape:
    """Validated static object: node set plus derived boundary metadata."""

    __slots__ = ("nodes", "boundary_nodes")

    def __init__(self, nodes: set[Node]):
        if not nodes:
            raise ObjectError("object is empty")
        nodes = set(nodes)
        if not is_connected(nodes):
            raise ObjectError("object is not connected")
        if not is_simply_connected(nodes):
            raise ObjectError("object has a hole (not simply connected)")
        if has_width1_tunnel(nodes):
            raise ObjectError("object has a width-1 tunnel")
        self.nodes = frozenset(nodes)
        self.boundary_nodes = frozenset(boundary(nodes))

    def __contains__(self, v: Node) -> bool:
        return v in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


def boundary(nodes: set[Node] | frozenset[Node]) -> set[Node]:
    """Nodes outside the set that are adjacent to it."""
    out: set[Node] = set()
    for v in nodes:
        for w in neighbors(v):
            if w not in nodes:
                out.add(w)
    return out


def walk_step(
    occupied: frozenset[Node] | set[Node], pos: Node, incoming: int | None = None
) -> int:
    """Right-hand-rule step direction from pos along the boundary of occupied.

    The scan starts at a direction pointing into the occupied set and
    decrements (mod 6) until the first free direction. Without an incoming
    step direction any occupied direction may start the scan (the result is
    unique when the occupied set's adjacency arc at pos is contiguous); with
    one, the scan starts at the flank (incoming + 2) mod 6, which is always
    occupied and selects the wall segment the walk arrived along.
    """
    if incoming is None:
        start = -1
        for g in range(6):
            if neighbor(pos, g) in occupied:
                start = g
                break
        if start < 0:
            raise ValueError(f"{pos} is not adjacent to the occupied set")
    else:
        start = (incoming + 2) % 6
        if neighbor(pos, start) not in occupied:
            raise ValueError(f"walk flank at {pos} is not occupied")
    g = start
    while neighbor(pos, g) in occupied:
        g = (g + 5) % 6
    return g


def region_walk(occupied: frozenset[Node] | set[Node], start: Node) -> list[Node]:
    """Clockwise right-hand-rule ring walk around an occupied set.

    Returns the cyclic visit sequence beginning at start, without repeating
    the closing node. A node may appear more than once where the ring touches
    itself; the walk is a cycle over (node, outgoing-step) states.
    """
    first = walk_step(occupied, start, None)
    walk = [start]
    cur, step = start, first
    limit = 12 * len(occupied) + 24
    while True:
        nxt = neighbor(cur, step)
        nxt_step = walk_step(occupied, nxt, step)
        if nxt == start and nxt_step == first:
            return walk
        walk.append(nxt)
        cur, step = nxt, nxt_step
        if len(walk) > limit:
            raise RuntimeError("boundary walk failed to close")


def clockwise_boundary_walk(shape: ObjectShape, start: Node) -> list[Node]:
    """Clockwise right-hand-rule walk of B(O) starting (and ending) at start."""
    if start not in shape.boundary_nodes:
        raise ValueError(f"walk start {start} is not on the boundary")
    return region_walk(shape.nodes, start)


def parse_object_text(text: str) -> set[Node]:
    """Parse the object file format: one 'x y' pair per line, '#' comments."""
    nodes: set[Node] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ObjectError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            v = (int(parts[0]), int(parts[1]))
        except ValueError:
            raise ObjectError(f"line {lineno}: expected two integers, got {raw!r}") from None
        if v in nodes:
            raise ObjectError(f"line {lineno}: duplicate node {v}")
        nodes.add(v)
    return nodes


def load_object(path: str) -> ObjectShape:
    """Read and validate an object file."""
    with open(path, "r", encoding="utf-8") as fh:
        return ObjectShape(parse_object_text(fh.read()))
