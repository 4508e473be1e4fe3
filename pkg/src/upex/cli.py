"""Command-line entry point: decide, transform, gen, draw, bench, oracle-check.

Exit status is 0 whenever a question was answered (YES and NO alike) and 2 on
any error; the answer itself is in the JSON report on standard output.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .core import Decision, FullDrawing, PreconditionError, UpeInstance, UpexError, UpwardEmbedding
from .generators import random_cycle_instance, random_path_instance, random_st_instance
from .geometry import Point
from .io import (
    certificate_from_json,
    certificate_to_json,
    drawing_to_json,
    dump_json,
    element_map_to_json,
    embedding_to_json,
    instance_to_json,
    load_instance,
    load_json,
)
from .levelplan import solve_upe_edgeless_distinct_y
from .oracle import Certificate, brute_force_decide, check_certificate, oracle_cap
from .pathcycle import path_or_cycle_order, solve_cycle_fue, solve_path_fue, solve_path_or_cycle_upe
from .stgraph import build_witness_drawing_st, solve_st_fue, solve_st_upe
from .transforms import eliminate_partial_edges, make_distinct_y

ENGINES = ("auto", "st-fue", "st-upe", "path-fue", "cycle-fue", "path-upe", "olp", "oracle")
EXIT_OK = 0
EXIT_ERROR = 2


class CliError(UpexError):
    """A user-facing failure that ends the command with exit status 2."""


# ---------------------------------------------------------------------------
# engine dispatch
# ---------------------------------------------------------------------------

def _oracle(inst: UpeInstance) -> Decision:
    return brute_force_decide(inst, cap=oracle_cap())


def _shape(inst: UpeInstance) -> str | None:
    try:
        return path_or_cycle_order(inst.graph)[1]
    except PreconditionError:
        return None


def _path_or_cycle_fue(inst: UpeInstance) -> Decision:
    shape = _shape(inst)
    if shape == "path":
        return solve_path_fue(inst)
    if shape == "cycle":
        return solve_cycle_fue(inst)
    raise PreconditionError("graph is neither a path nor a cycle")


def _only(shape: str) -> Callable[[UpeInstance], Decision]:
    solver = solve_path_fue if shape == "path" else solve_cycle_fue

    def run(inst: UpeInstance) -> Decision:
        return solver(inst)

    return run


SOLVERS: dict[str, Callable[[UpeInstance], Decision]] = {
    "st-fue": solve_st_fue,
    "st-upe": solve_st_upe,
    "path-fue": _only("path"),
    "cycle-fue": _only("cycle"),
    "path-upe": solve_path_or_cycle_upe,
    "olp": solve_upe_edgeless_distinct_y,
    "oracle": _oracle,
}

# (selector, solver) in the order auto mode tries them
AUTO_ORDER: tuple[tuple[str, Callable[[UpeInstance], Decision]], ...] = (
    ("st-fue", solve_st_fue),
    ("st-upe", solve_st_upe),
    ("path-fue", _path_or_cycle_fue),
    ("path-upe", solve_path_or_cycle_upe),
    ("olp", solve_upe_edgeless_distinct_y),
    ("oracle", _oracle),
)


def _applicable(inst: UpeInstance) -> list[tuple[str, Callable[[UpeInstance], Decision]]]:
    """Cheap structural filter so auto mode does not call engines that must refuse."""
    shape = _shape(inst)
    st = len(inst.graph.sources()) == 1 and len(inst.graph.sinks()) == 1 and shape != "cycle"
    out = []
    for name, fn in AUTO_ORDER:
        if name == "st-fue" and not (st and inst.embedding is not None):
            continue
        if name == "st-upe" and not (st and inst.embedding is None):
            continue
        if name in ("path-fue", "path-upe") and shape is None:
            continue
        if name == "oracle" and inst.n > oracle_cap():
            continue
        out.append((name, fn))
    return out


def decide(inst: UpeInstance, engine: str = "auto") -> Decision:
    if engine not in ENGINES:
        raise CliError(f"unknown engine {engine!r}")
    if engine != "auto":
        return SOLVERS[engine](inst)
    reasons = []
    for name, fn in _applicable(inst):
        try:
            return fn(inst)
        except PreconditionError as exc:
            reasons.append(f"{name}: {exc}")
    detail = "; ".join(reasons)
    raise CliError("no applicable engine" + (f" ({detail})" if detail else ""))


def cross_check(inst: UpeInstance) -> list[Decision]:
    """Run every applicable engine; disagreement is a hard failure."""
    found = []
    for _, fn in _applicable(inst):
        try:
            found.append(fn(inst))
        except PreconditionError:
            continue
    if not found:
        raise CliError("no applicable engine")
    if len({d.answer for d in found}) > 1:
        table = ", ".join(f"{d.engine}={d.label}" for d in found)
        raise AssertionError(f"engines disagree: {table}")
    return found


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, UpwardEmbedding):
        return embedding_to_json(obj)
    if isinstance(obj, Certificate):
        return certificate_to_json(obj)
    if isinstance(obj, FullDrawing):
        return drawing_to_json(obj)
    if isinstance(obj, Point):
        return [str(obj.x), str(obj.y)]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def report(decision: Decision) -> dict:
    witness = decision.witness
    if decision.engine == "oracle" and isinstance(witness, tuple):
        cert, drawing = witness
        witness = {"certificate": cert, "drawing": drawing}
    return {"decision": decision.label, "engine": decision.engine, "witness": _jsonable(witness)}


# ---------------------------------------------------------------------------
# drawings and SVG
# ---------------------------------------------------------------------------

VIEWPORT = 1000
MARGIN = 50
_AFFINE_RE = re.compile(r"affine: X = (\S+) \+ (\S+) \* \(x - (\S+)\); Y = (\S+) - (\S+) \* \(y - (\S+)\)")


def witness_drawing(inst: UpeInstance) -> FullDrawing:
    """A full drawing from st-fue (via st-upe when no embedding is given) or the oracle."""
    shape = _shape(inst)
    st = len(inst.graph.sources()) == 1 and len(inst.graph.sinks()) == 1 and shape != "cycle"
    if st:
        try:
            if inst.embedding is None:
                found = solve_st_upe(inst)
                if not found.answer:
                    raise CliError("instance is a NO instance; nothing to draw")
                inst = inst.with_embedding(found.witness["embedding"])
            return build_witness_drawing_st(inst)
        except PreconditionError as exc:
            if "no drawing exists" in str(exc):
                raise CliError("instance is a NO instance; nothing to draw") from exc
    if inst.n > oracle_cap():
        raise CliError("no witness-producing engine applies")
    found = _oracle(inst)
    if not found.answer:
        raise CliError("instance is a NO instance; nothing to draw")
    return found.witness[1]


def _affine(drawing: FullDrawing) -> tuple[Fraction, Fraction, Fraction]:
    pts = list(drawing.vertex_pos.values())
    for route in drawing.edge_routes.values():
        pts.extend(route)
    x0 = min(p.x for p in pts)
    y0 = min(p.y for p in pts)
    span = max(max(p.x for p in pts) - x0, max(p.y for p in pts) - y0)
    scale = Fraction(VIEWPORT - 2 * MARGIN) / span if span else Fraction(1)
    return x0, y0, scale


def _num(value: Fraction) -> str:
    return f"{float(value):.6f}".rstrip("0").rstrip(".")


def _exact(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def render_svg(inst: UpeInstance, drawing: FullDrawing) -> str:
    """Vertices as labeled circles, edges as polylines, fixed elements in red.

    Screen coordinates are X = m + k (x - x0), Y = (1000 - m) - k (y - y0);
    every element also carries its exact scaled coordinates in data attributes.
    """
    x0, y0, k = _affine(drawing)
    ox, oy = Fraction(MARGIN), Fraction(VIEWPORT - MARGIN)

    def screen(p: Point) -> tuple[Fraction, Fraction]:
        return ox + k * (p.x - x0), oy - k * (p.y - y0)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEWPORT}" height="{VIEWPORT}" '
        f'viewBox="0 0 {VIEWPORT} {VIEWPORT}">',
        f"<!-- affine: X = {_exact(ox)} + {_exact(k)} * (x - {_exact(x0)}); "
        f"Y = {_exact(oy)} - {_exact(k)} * (y - {_exact(y0)}) -->",
    ]
    for e in sorted(drawing.edge_routes):
        pts = [screen(p) for p in drawing.edge_routes[e]]
        color = "#c0392b" if e in inst.h_edges else "#34495e"
        shown = " ".join(f"{_num(X)},{_num(Y)}" for X, Y in pts)
        exact = " ".join(f"{_exact(X)},{_exact(Y)}" for X, Y in pts)
        lines.append(f'<polyline class="edge" data-edge="{e[0]}-{e[1]}" data-points="{exact}" '
                     f'points="{shown}" fill="none" stroke="{color}" stroke-width="2"/>')
    for v in sorted(drawing.vertex_pos):
        X, Y = screen(drawing.vertex_pos[v])
        color = "#c0392b" if v in inst.h_vertices else "#ffffff"
        lines.append(f'<circle class="vertex" data-vertex="{v}" data-center="{_exact(X)},{_exact(Y)}" '
                     f'cx="{_num(X)}" cy="{_num(Y)}" r="8" fill="{color}" stroke="#000000"/>')
        lines.append(f'<text x="{_num(X + 10)}" y="{_num(Y - 10)}" font-size="14">{v}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def parse_svg(text: str) -> FullDrawing:
    """Invert render_svg exactly using the recorded affine map."""
    m = _AFFINE_RE.search(text)
    if m is None:
        raise CliError("SVG lacks the affine map comment")
    ox, k, x0, oy, _, y0 = (Fraction(g) for g in m.groups())

    def world(pair: str) -> Point:
        X, Y = (Fraction(c) for c in pair.split(","))
        return Point((X - ox) / k + x0, (oy - Y) / k + y0)

    positions = {int(v): world(c) for v, c in re.findall(r'data-vertex="(\d+)" data-center="([^"]+)"', text)}
    routes = {}
    for tail, head, pts in re.findall(r'data-edge="(\d+)-(\d+)" data-points="([^"]+)"', text):
        routes[(int(tail), int(head))] = tuple(world(p) for p in pts.split())
    return FullDrawing(positions, routes)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _emit(data) -> None:
    sys.stdout.write(dump_json(data) + "\n")


def cmd_decide(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    if args.cross_check:
        found = cross_check(inst)
        out = report(found[0])
        out["engines"] = [d.engine for d in found]
        _emit(out)
        return EXIT_OK
    decision = decide(inst, args.engine)
    out = report(decision)
    if args.drawing and decision.answer:
        out["drawing"] = drawing_to_json(witness_drawing(inst))
    _emit(out)
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    if args.which == "no-partial-edges":
        new, emap = eliminate_partial_edges(inst)
    else:
        new, emap = make_distinct_y(inst)
    out = Path(args.out)
    dump_json(instance_to_json(new), out)
    map_path = out.with_name(out.stem + ".map.json")
    dump_json(element_map_to_json(emap), map_path)
    _emit({"instance": str(out), "element_map": str(map_path), "n": new.n, "size": new.size()})
    return EXIT_OK


def generate(kind: str, n: int, seed: int, pin_fraction: float, embedded: bool,
             adversarial: bool) -> UpeInstance:
    if n < 2:
        raise CliError("n must be at least 2")
    if not 0.0 <= pin_fraction <= 1.0:
        raise CliError("pin fraction must lie in [0, 1]")
    if kind == "st":
        return random_st_instance(n, seed, pin_fraction, embedded, adversarial)
    if kind == "path":
        return random_path_instance(n, seed, pin_fraction, embedded, adversarial)
    if kind == "cycle":
        if n < 3:
            raise CliError("a cycle needs n >= 3")
        return random_cycle_instance(n, seed, pin_fraction, embedded, adversarial)
    raise CliError(f"unknown kind {kind!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    inst = generate(args.kind, args.n, args.seed, args.pin_fraction, args.embedded, args.adversarial)
    text = dump_json(instance_to_json(inst))
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return EXIT_OK


def cmd_draw(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    svg = render_svg(inst, witness_drawing(inst))
    Path(args.out).write_text(svg, encoding="utf-8")
    return EXIT_OK


BENCH_KINDS = {
    "st-fue": ("st", True, solve_st_fue),
    "st-upe": ("st", False, solve_st_upe),
    "path-fue": ("path", True, solve_path_fue),
    "cycle-fue": ("cycle", True, solve_cycle_fue),
}


def bench_rows(kind: str, sizes: Sequence[int], seed: int, pin_fraction: float = 0.5) -> list[dict]:
    if kind not in BENCH_KINDS:
        raise CliError(f"unknown bench kind {kind!r}")
    family, embedded, solver = BENCH_KINDS[kind]
    rows = []
    for n in sizes:
        inst = generate(family, n, seed, pin_fraction, embedded, False)
        start = time.perf_counter()
        decision = solver(inst)
        rows.append({"n": n, "seconds": time.perf_counter() - start, "decision": decision.label})
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    rows = bench_rows(args.kind, args.sizes, args.seed, args.pin_fraction)
    sys.stdout.write("n\tseconds\tdecision\n")
    for row in rows:
        sys.stdout.write(f"{row['n']}\t{row['seconds']:.4f}\t{row['decision']}\n")
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    inst = load_instance(args.file)
    cert = certificate_from_json(load_json(args.certificate))
    result = check_certificate(inst, cert)
    _emit({"valid": result.ok, "failed_check": result.failed_check, "detail": result.detail})
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="upex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide whether the partial drawing extends")
    p.add_argument("file")
    p.add_argument("--engine", choices=ENGINES, default="auto")
    p.add_argument("--drawing", action="store_true", help="attach a full witness drawing on YES")
    p.add_argument("--cross-check", action="store_true", help="run all applicable engines and compare")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("transform", help="remove fixed edges or separate equal heights")
    p.add_argument("file")
    p.add_argument("which", choices=("no-partial-edges", "distinct-y"))
    p.add_argument("out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--kind", choices=("st", "path", "cycle"), default="st")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pin-fraction", type=float, default=0.5)
    p.add_argument("--embedded", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--adversarial", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("draw", help="render a witness drawing as SVG")
    p.add_argument("file")
    p.add_argument("out")
    p.set_defaults(func=cmd_draw)

    p = sub.add_parser("bench", help="time an engine on generated instances")
    p.add_argument("--kind", choices=tuple(BENCH_KINDS), default="st-fue")
    p.add_argument("--sizes", type=int, nargs="*", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pin-fraction", type=float, default=0.5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("oracle-check", help="verify a certificate against an instance")
    p.add_argument("file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UpexError, ValueError, KeyError, OSError, AssertionError) as exc:
        sys.stderr.write(f"upex: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
