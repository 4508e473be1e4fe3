"""SPQR-tree of an st-graph plus (s,t), by recursive split-pair decomposition.

Every node has a source pole and a sink pole and a skeleton whose edges are
(tail, head, child) triples; Q-nodes stand for single edges of the graph.  The
edge (s,t) is the reference edge: it is kept outside the tree and the root is
the node decomposing everything else.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import networkx as nx

from ..core import Edge, PreconditionError
from .base import StGraph


@dataclass
class SpqrNode:
    kind: str
    source: int
    sink: int
    parent: int | None = None
    skeleton: list[tuple[int, int, int]] = field(default_factory=list)
    edge: Edge | None = None

    @property
    def children(self) -> list[int]:
        return [c for _, _, c in self.skeleton]

    def skeleton_vertices(self) -> set[int]:
        out = {self.source, self.sink}
        for u, v, _ in self.skeleton:
            out.update((u, v))
        return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        self.parent[self.find(a)] = self.find(b)


def _split_components(edges: list[Edge], cut: set[int]) -> list[list[Edge]]:
    """Group edges that are linked through vertices outside cut."""
    uf = _UnionFind(len(edges))
    owner: dict[int, int] = {}
    for k, (u, v) in enumerate(edges):
        for w in (u, v):
            if w in cut:
                continue
            if w in owner:
                uf.union(k, owner[w])
            else:
                owner[w] = k
    groups: dict[int, list[Edge]] = {}
    for k, e in enumerate(edges):
        groups.setdefault(uf.find(k), []).append(e)
    return list(groups.values())


def _source_pole(edges: list[Edge], x: int, y: int) -> tuple[int, int]:
    heads = {v for _, v in edges}
    return (x, y) if x not in heads else (y, x)


# ---------------------------------------------------------------------------
# the tree
# ---------------------------------------------------------------------------

class SpqrTree:
    def __init__(self, st: StGraph):
        self.st = st
        self.nodes: list[SpqrNode] = []
        edges = list(st.graph.edges)
        self.has_st_edge = (st.s, st.t) in st.graph.edge_set
        rest = [e for e in edges if e != (st.s, st.t)]
        if not rest:
            self.root = self._new(SpqrNode("Q", st.s, st.t, edge=(st.s, st.t)))
            self.reference = None
        else:
            self.reference = (st.s, st.t)
            self.root = self._decompose(rest, st.s, st.t)
        self._index()

    # construction -------------------------------------------------------

    def _new(self, node: SpqrNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def _attach(self, parent: int, tail: int, head: int, child: int) -> None:
        self.nodes[parent].skeleton.append((tail, head, child))
        self.nodes[child].parent = parent

    def _decompose(self, edges: list[Edge], a: int, b: int) -> int:
        """Decompose the pertinent graph `edges` with source pole a and sink pole b;
        explicit stack instead of recursion so deep series chains are fine."""
        top = self._new(SpqrNode("?", a, b))
        work = [(top, edges)]
        while work:
            nid, part = work.pop()
            node = self.nodes[nid]
            a, b = node.source, node.sink
            if len(part) == 1:
                node.kind, node.edge = "Q", part[0]
                continue
            comps = _split_components(part, {a, b})
            if len(comps) >= 2:
                node.kind = "P"
                for comp in comps:
                    child = self._new(SpqrNode("?", a, b))
                    self._attach(nid, a, b, child)
                    work.append((child, comp))
                continue
            chain = self._cut_chain(part, a, b)
            if len(chain) > 2:
                node.kind = "S"
                cuts = set(chain)
                blocks: dict[tuple[int, int], list[Edge]] = {}
                rank = {c: k for k, c in enumerate(chain)}
                for comp in _split_components(part, cuts):
                    ends = sorted({w for e in comp for w in e if w in cuts}, key=rank.get)
                    blocks.setdefault((ends[0], ends[-1]), []).extend(comp)
                for lo, hi in zip(chain, chain[1:]):
                    child = self._new(SpqrNode("?", lo, hi))
                    self._attach(nid, lo, hi, child)
                    work.append((child, blocks[(lo, hi)]))
                continue
            node.kind = "R"
            for x, y, sub in self._maximal_split_parts(part, a, b):
                src, dst = _source_pole(sub, x, y)
                child = self._new(SpqrNode("?", src, dst))
                self._attach(nid, src, dst, child)
                work.append((child, sub))
        return top

    @staticmethod
    def _cut_chain(part: list[Edge], a: int, b: int) -> list[int]:
        und = nx.Graph(part)
        cuts = set(nx.articulation_points(und))
        path = nx.shortest_path(und, a, b)
        return [w for w in path if w in cuts or w in (a, b)]

    @staticmethod
    def _maximal_split_parts(part: list[Edge], a: int, b: int) -> list[tuple[int, int, list[Edge]]]:
        """For a rigid pertinent graph: the maximal pieces hanging off split pairs
        (other than the poles), plus each remaining edge as its own piece."""
        reference = (-1, -1)
        whole = part + [reference]
        verts = sorted({w for e in part for w in e})
        pieces: list[tuple[int, int, frozenset]] = []
        for i, x in enumerate(verts):
            for y in verts[i + 1:]:
                if {x, y} == {a, b}:
                    continue
                comps = _split_components(whole, {x, y, -1})
                # the reference edge has to be glued to the a/b side explicitly
                inside: list[Edge] = []
                for comp in comps:
                    touches = {w for e in comp for w in e} - {x, y}
                    if reference in comp or touches & {a, b}:
                        continue
                    inside.extend(comp)
                if len(inside) >= 2 and len(inside) < len(part):
                    pieces.append((x, y, frozenset(inside)))
        maximal = [p for p in pieces if not any(p[2] < q[2] for q in pieces)]
        seen: set[frozenset] = set()
        out: list[tuple[int, int, list[Edge]]] = []
        covered: set[Edge] = set()
        for x, y, sub in maximal:
            if sub in seen:
                continue
            seen.add(sub)
            covered |= sub
            out.append((x, y, sorted(sub)))
        for e in part:
            if e not in covered:
                out.append((e[0], e[1], [e]))
        return out

    # queries ------------------------------------------------------------

    def _index(self) -> None:
        n_nodes = len(self.nodes)
        self.depth = [0] * n_nodes
        self.tin = [0] * n_nodes
        self.tout = [0] * n_nodes
        euler: list[int] = []
        self.first = [0] * n_nodes
        stack = [(self.root, 0)]
        clock = 0
        while stack:
            nid, k = stack.pop()
            if k == 0:
                self.tin[nid] = clock
                clock += 1
                self.first[nid] = len(euler)
            euler.append(nid)
            kids = self.nodes[nid].children
            if k < len(kids):
                stack.append((nid, k + 1))
                self.depth[kids[k]] = self.depth[nid] + 1
                stack.append((kids[k], 0))
            else:
                self.tout[nid] = clock
        # sparse table over the Euler tour, keyed by depth
        self._euler = euler
        table = [euler[:]]
        span = 1
        while 2 * span <= len(euler):
            prev = table[-1]
            table.append([min(prev[i], prev[i + span], key=self.depth.__getitem__)
                          for i in range(len(euler) - 2 * span + 1)])
            span *= 2
        self._sparse = table
        self._child_tins = {nid: sorted((self.tin[c], c) for c in node.children)
                            for nid, node in enumerate(self.nodes)}
        self.allocation: dict[int, int] = {}
        holders: dict[int, list[int]] = {}
        for nid, node in enumerate(self.nodes):
            if node.kind != "Q" or len(self.nodes) == 1:
                for v in node.skeleton_vertices():
                    holders.setdefault(v, []).append(nid)
        for v, hs in holders.items():
            top = hs[0]
            for h in hs[1:]:
                top = self.lca(top, h)
            self.allocation[v] = top

    def lca(self, a: int, b: int) -> int:
        lo, hi = sorted((self.first[a], self.first[b]))
        k = (hi - lo + 1).bit_length() - 1
        left, right = self._sparse[k][lo], self._sparse[k][hi - (1 << k) + 1]
        return left if self.depth[left] <= self.depth[right] else right

    def proper_allocation(self, v: int) -> int:
        return self.allocation[v]

    def representative(self, nid: int, v: int) -> tuple[str, int]:
        """('vertex', v) when v is in the skeleton of nid, else ('edge', child)
        for the child whose pertinent graph holds v."""
        if v in self.nodes[nid].skeleton_vertices():
            return "vertex", v
        mu = self.allocation[v]
        tins = self._child_tins[nid]
        k = bisect_right(tins, (self.tin[mu], len(self.nodes))) - 1
        child = tins[k][1]
        if not self.tin[child] <= self.tin[mu] < self.tout[child]:
            raise ValueError(f"vertex {v} is not below node {nid}")
        return "edge", child


def build_spqr_tree(st: StGraph) -> SpqrTree:
    if st.n < 2:
        raise PreconditionError("need at least two vertices")
    return SpqrTree(st)
