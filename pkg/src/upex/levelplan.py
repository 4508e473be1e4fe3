"""Level planarity with one vertex per level, and the point-set solver built on it.

The engine sweeps the levels bottom-up and keeps the left-to-right sequence
of edges that are currently open (tail drawn, head not yet).  Edges are
identified by their heads; neighbouring edges with a common head are
interchangeable, so runs of equal heads are collapsed.  At each level the
open edges into the new vertex must form one block, which the vertex then
replaces by its outgoing edges in some order.  Sources may enter anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .core import Decision, DirectedGraph, PreconditionError, UpeInstance
from .transforms import upe_to_olp


@dataclass(frozen=True)
class LevelGraphSingleton:
    graph: DirectedGraph
    level: tuple[int, ...]

    def problem(self) -> str | None:
        if len(self.level) != self.graph.n:
            return "every vertex needs a level"
        if len(set(self.level)) != len(self.level):
            return "levels must be pairwise distinct"
        return None


def _collapse(seq: list[int]) -> tuple[int, ...]:
    out: list[int] = []
    for h in seq:
        if not out or out[-1] != h:
            out.append(h)
    return tuple(out)


def is_level_planar_singleton(lg: LevelGraphSingleton) -> Decision:
    """Decide level planarity; the witness lists the open-edge sequence after each level."""
    problem = lg.problem()
    if problem:
        raise PreconditionError(problem)
    g = lg.graph
    for u, v in g.edges:
        if not lg.level[u] < lg.level[v]:
            return Decision(False, "olp", {"reason": f"edge {(u, v)} does not climb"})
    sweep = sorted(range(g.n), key=lambda v: lg.level[v])
    dead: set[tuple[int, tuple[int, ...]]] = set()
    trail: list[tuple[int, ...]] = []

    def blocks(v: int) -> list[tuple[int, ...]]:
        heads = g.out_adj[v]
        if len(heads) <= 1:
            return [tuple(heads)]
        return [tuple(p) for p in permutations(sorted(heads))]

    def step(k: int, state: tuple[int, ...]) -> bool:
        if k == len(sweep):
            return not state
        if (k, state) in dead:
            return False
        v = sweep[k]
        spots = [idx for idx, h in enumerate(state) if h == v]
        if len(spots) > 1:
            dead.add((k, state))
            return False
        if spots:
            cut = [(spots[0], spots[0] + 1)]
        else:
            cut = [(p, p) for p in range(len(state) + 1)]
        for lo, hi in cut:
            for block in blocks(v):
                nxt = _collapse(list(state[:lo]) + list(block) + list(state[hi:]))
                trail.append(nxt)
                if step(k + 1, nxt):
                    return True
                trail.pop()
        dead.add((k, state))
        return False

    if step(0, ()):
        return Decision(True, "olp", {"sweep": sweep, "open_edges": [list(s) for s in trail]})
    return Decision(False, "olp")


def solve_upe_edgeless_distinct_y(inst: UpeInstance) -> Decision:
    """Every vertex fixed, no fixed edges, all heights distinct."""
    if inst.embedding is not None:
        raise PreconditionError("this engine ignores embeddings; drop it first")
    if not inst.distinct_pinned_y():
        raise PreconditionError("two fixed vertices share a height")
    olg = upe_to_olp(inst)
    result = is_level_planar_singleton(LevelGraphSingleton(olg.graph, olg.level))
    return Decision(result.answer, "olp", result.witness)
