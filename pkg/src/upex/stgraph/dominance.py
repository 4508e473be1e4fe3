"""Dominance coordinates answering successor/predecessor/left/right queries.

dom_x lists the vertices so that predecessors and vertices to the left come
first; dom_y so that predecessors and vertices to the right come first.  Both
are reverse postorders of a depth-first search from s on the transitive
reduction, exploring out-edges rightmost-first for dom_x and leftmost-first
for dom_y.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..core import UpwardEmbedding
from .base import StGraph, restrict_embedding
from .reduction import transitive_reduction


class Relation(str, Enum):
    SUCCESSOR = "Successor"
    PREDECESSOR = "Predecessor"
    LEFT = "Left"
    RIGHT = "Right"


@dataclass(frozen=True)
class DominanceIndex:
    dom_x: tuple[int, ...]
    dom_y: tuple[int, ...]

    def relation(self, u: int, v: int) -> Relation:
        """Where v lies as seen from u."""
        if u == v:
            raise ValueError("relation is defined for distinct vertices")
        left_of_u = self.dom_x[v] < self.dom_x[u]
        below_u = self.dom_y[v] < self.dom_y[u]
        if left_of_u and below_u:
            return Relation.PREDECESSOR
        if not left_of_u and not below_u:
            return Relation.SUCCESSOR
        return Relation.LEFT if left_of_u else Relation.RIGHT

    def reaches(self, u: int, v: int) -> bool:
        return self.dom_x[u] <= self.dom_x[v] and self.dom_y[u] <= self.dom_y[v]

    def is_left_of(self, u: int, v: int) -> bool:
        """True when u lies to the left of v."""
        return self.dom_x[u] < self.dom_x[v] and self.dom_y[u] > self.dom_y[v]


def _reverse_postorder(succ: tuple[tuple[int, ...], ...], s: int, rightmost_first: bool) -> list[int]:
    n = len(succ)
    rank = [0] * n
    seen = [False] * n
    counter = n
    stack = [(s, iter(reversed(succ[s]) if rightmost_first else succ[s]))]
    seen[s] = True
    while stack:
        v, it = stack[-1]
        for w in it:
            if not seen[w]:
                seen[w] = True
                stack.append((w, iter(reversed(succ[w]) if rightmost_first else succ[w])))
                break
        else:
            stack.pop()
            counter -= 1
            rank[v] = counter
    return rank


def build_dominance_index(st: StGraph, emb: UpwardEmbedding) -> DominanceIndex:
    reduced = transitive_reduction(st, emb)
    succ = restrict_embedding(emb, reduced.graph).succ
    return DominanceIndex(
        tuple(_reverse_postorder(succ, st.s, rightmost_first=True)),
        tuple(_reverse_postorder(succ, st.s, rightmost_first=False)),
    )
