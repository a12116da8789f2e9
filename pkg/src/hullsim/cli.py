"""Command line for the hull simulator.

Subcommands: run (simulate one configuration), oracle (print the centralized
hull sets), verify (run and check the final configuration against the
oracle), bench (round-scaling CSV over an object family), counter-harness
(counter throughput CSV).  Exit codes: 0 success, 2 validation error, 3
non-termination, 4 verification mismatch, 5 invariant violation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys
from concurrent.futures.process import BrokenProcessPool
from typing import Sequence

from . import shapes
from .counter import PathHarness, make_ops
from .engine import (
    FINISHED,
    InvariantViolation,
    Simulation,
    ValidationError,
)
from .hull_oracle import hulls
from .lattice import Node, ObjectError, ObjectShape, load_object
from .render import render_ascii, render_hulls_svg, render_svg
from .solo import run_solo

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TIMEOUT = 3
EXIT_MISMATCH = 4
EXIT_INVARIANT = 5

BENCH_SIZES = (48, 96, 192, 384)
BENCH_SEEDS = 10
BENCH_HEADER = ("B", "H", "n", "seed", "learning_rounds", "closing_rounds",
                "filling_rounds", "weak_rounds", "total_rounds")


def _write_out(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_placement(path: str) -> list[Node]:
    nodes: list[Node] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ValidationError(f"bad placement line {raw!r}")
            nodes.append((int(parts[0]), int(parts[1])))
    if not nodes:
        raise ValidationError("placement file is empty")
    return nodes


class _SoloParticle:
    """Duck-typed single walker so the renderers can draw a solo run."""

    __slots__ = ("pid", "state", "head", "tail")

    def __init__(self, pos: Node):
        self.pid = 0
        self.state = "leader"
        self.head = pos
        self.tail = pos

    @property
    def expanded(self) -> bool:
        return False

    @property
    def nodes(self) -> tuple[Node, ...]:
        return (self.head,)


class _SoloScene:
    __slots__ = ("shape", "particles")

    def __init__(self, shape: ObjectShape, pos: Node):
        self.shape = shape
        self.particles = [_SoloParticle(pos)]


def _render(args, scene) -> None:
    if args.render == "ascii":
        _write_out(render_ascii(scene), args.out)
    elif args.render == "svg":
        _write_out(render_svg(scene), args.out)


def _run_solo_mode(args, shape: ObjectShape) -> int:
    try:
        state = run_solo(shape)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    hull = hulls(shape)
    if args.metrics:
        metrics = {
            "B": len(shape.boundary_nodes),
            "H": len(hull.strong_cycle),
            "n": 1,
            "mode": "solo",
            "steps": state.steps,
            "rounds": state.steps,
            "status": "terminated",
            "final": list(state.pos),
            "distances": list(state.distances),
        }
        _write_out(json.dumps(metrics, sort_keys=True) + "\n", args.metrics)
    _render(args, _SoloScene(shape, state.pos))
    return EXIT_OK


def _simulate(args, shape: ObjectShape) -> tuple[Simulation | None, int]:
    """Build and run a Simulation per the parsed flags."""
    placement = _load_placement(args.placement) if args.placement else None
    trace = open(args.trace, "w", encoding="utf-8") if args.trace else None
    try:
        sim = Simulation(
            shape,
            n=args.particles,
            seed=args.seed,
            mode=args.mode,
            placement=placement,
            debug_invariants=args.debug_invariants,
            trace=trace,
        )
        sim.run(max_rounds=args.max_rounds)
    finally:
        if trace is not None:
            trace.close()
    if args.metrics:
        _write_out(json.dumps(sim.metrics(), sort_keys=True) + "\n",
                   args.metrics)
    _render(args, sim)
    if sim.status == "timeout":
        print(f"error: no quiescence within {sim.rounds} rounds",
              file=sys.stderr)
        return sim, EXIT_TIMEOUT
    return sim, EXIT_OK


def cmd_run(args) -> int:
    shape = load_object(args.object)
    if args.mode == "solo":
        return _run_solo_mode(args, shape)
    _, code = _simulate(args, shape)
    return code


def _fmt_cycle(cycle) -> str:
    return " ".join(f"{x},{y}" for x, y in cycle)


def cmd_oracle(args) -> int:
    shape = load_object(args.object)
    hull = hulls(shape)
    print(f"|B(O)| = {len(shape.boundary_nodes)}")
    print(f"|H(O)| = {len(hull.strong_cycle)}")
    print(f"|H'(O)| = {len(hull.weak_cycle)}")
    print(f"H(O): {_fmt_cycle(hull.strong_cycle)}")
    print(f"H'(O): {_fmt_cycle(hull.weak_cycle)}")
    if args.render == "svg":
        _write_out(render_hulls_svg(shape, hull), args.out)
    return EXIT_OK


def verify_strong(sim: Simulation) -> tuple[str, Node | None]:
    """Check the final strong-mode configuration against the oracle.

    Returns (verdict, None) on success or (message, offending node)."""
    ring = set(sim.hull.strong_cycle)
    H = len(ring)
    n = sim.n
    if n >= H:
        for v in sim.hull.strong_cycle:
            pid = sim.occupancy.get(v)
            p = sim.particles[pid] if pid is not None else None
            if p is None or p.state != FINISHED or p.expanded:
                return "hull node not held by a contracted finished particle", v
        for p in sim.particles:
            if not p.terminated:
                return "particle never terminated", p.head
        return "hull filled", None
    for p in sim.particles:
        if p.state != FINISHED:
            return f"particle still {p.state}", p.head
        for v in p.nodes:
            if v not in ring:
                return "particle finished off the hull", v
    if n >= math.ceil(H / 2):
        if not sim.closed:
            return "hull never closed", None
        return "hull closed", None
    covered = set()
    for p in sim.particles:
        if p.contracted:
            return "particle finished contracted", p.head
        covered.update(p.nodes)
    if len(covered) != 2 * n:
        return f"expected 2n = {2 * n} covered hull nodes, got {len(covered)}", None
    return "all expanded on hull", None


def verify_weak(sim: Simulation) -> tuple[str, Node | None]:
    if sim.status != "terminated":
        return f"run ended {sim.status}, not terminated", None
    cycle = {p.head for p in sim.particles if p.succ_pid is not None}
    want = set(sim.hull.weak_cycle)
    extra = cycle - want
    if extra:
        return "tightening cycle node off the weak hull", min(extra)
    missing = want - cycle
    if missing:
        return "weak hull node not on the tightening cycle", min(missing)
    return "weak hull formed", None


def cmd_verify(args) -> int:
    shape = load_object(args.object)
    if args.mode == "solo":
        state = run_solo(shape)
        hull = hulls(shape)
        ring = set(hull.strong_cycle)
        if state.pos not in shape.boundary_nodes or state.pos not in ring:
            print(f"mismatch: final position {state.pos} not on B(O) and H(O)")
            return EXIT_MISMATCH
        from .hull_oracle import distances_to_strong_hull
        want = distances_to_strong_hull(state.pos, shape)
        if tuple(state.distances) != tuple(want):
            print(f"mismatch: distances {state.distances} != oracle {list(want)}")
            return EXIT_MISMATCH
        print("verified: solo walk learned the hull distances")
        return EXIT_OK
    sim, code = _simulate(args, shape)
    if code != EXIT_OK:
        return code
    if args.mode == "weak":
        verdict, node = verify_weak(sim)
    else:
        verdict, node = verify_strong(sim)
    if node is not None or verdict not in ("hull filled", "hull closed",
                                           "all expanded on hull",
                                           "weak hull formed"):
        where = f" at {node}" if node is not None else ""
        print(f"mismatch: {verdict}{where}")
        return EXIT_MISMATCH
    print(f"verified: {verdict}")
    return EXIT_OK


def bench_trial(family: str, size: int, seed: int, mode: str) -> dict:
    """One seeded benchmark run; module-level so process pools can ship it."""
    shape = shapes.family(family, size)
    hull = hulls(shape)
    sim = Simulation(shape, n=len(hull.strong_cycle), seed=seed, mode=mode)
    sim.run()
    if sim.status == "timeout":
        raise RuntimeError(f"{family} B={size} seed={seed} did not finish")
    return sim.metrics()


def cmd_bench(args) -> int:
    family = args.object or "hexagon"
    mode = "weak" if args.mode == "weak" else "strong"
    jobs = [(family, size, args.seed + k, mode)
            for size in BENCH_SIZES for k in range(BENCH_SEEDS)]
    rows: list[dict] = []
    try:
        with concurrent.futures.ProcessPoolExecutor() as pool:
            rows = list(pool.map(bench_trial, *zip(*jobs)))
    except (OSError, BrokenProcessPool):
        rows = [bench_trial(*job) for job in jobs]
    rows.sort(key=lambda r: (r["B"], r["seed"]))
    lines = [",".join(BENCH_HEADER)]
    for r in rows:
        lines.append(",".join(str(r[k]) for k in BENCH_HEADER))
    _write_out("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_counter_harness(args) -> int:
    cells = args.particles or 14
    out = ["m,seed,settle_rounds,rounds_per_op,ok"]
    for m in (100, 1000, 10000):
        ops = make_ops(m, args.seed)
        value, rounds = PathHarness(cells).run(ops, seed=args.seed)
        ok = value == sum(ops)
        out.append(f"{m},{args.seed},{rounds},{rounds / m:.3f},{int(ok)}")
    _write_out("\n".join(out) + "\n", args.out)
    return EXIT_OK


def _add_flags(sp: argparse.ArgumentParser, *, object_required: bool = True) -> None:
    sp.add_argument("--object", required=object_required, metavar="PATH",
                    help="object file (or family name for bench)")
    sp.add_argument("--particles", type=int, metavar="N")
    sp.add_argument("--placement", metavar="PATH")
    sp.add_argument("--seed", type=int, default=0, metavar="U64")
    sp.add_argument("--mode", choices=("solo", "strong", "weak"),
                    default="strong")
    sp.add_argument("--max-rounds", type=int, default=0, metavar="N")
    sp.add_argument("--trace", metavar="PATH")
    sp.add_argument("--metrics", metavar="PATH")
    sp.add_argument("--render", choices=("none", "ascii", "svg"),
                    default="none")
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--debug-invariants", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hullsim",
        description="Distributed convex hull formation on the triangular "
                    "lattice.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("run", cmd_run), ("oracle", cmd_oracle),
                     ("verify", cmd_verify)):
        sp = sub.add_parser(name)
        _add_flags(sp)
        sp.set_defaults(fn=fn)
    sp = sub.add_parser("bench")
    _add_flags(sp, object_required=False)
    sp.set_defaults(fn=cmd_bench)
    sp = sub.add_parser("counter-harness")
    _add_flags(sp, object_required=False)
    sp.set_defaults(fn=cmd_counter_harness)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ObjectError, ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT


if __name__ == "__main__":
    sys.exit(main())
