"""Instance families: enumerated series-parallel st-graphs and seeded random
st-graphs, paths and cycles."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

import networkx as nx

from .core import DirectedGraph, PartialDrawing, UpeInstance, UpwardEmbedding, extract_embedding
from .geometry import Point

# ---------------------------------------------------------------------------
# enumerated families
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _sp_edge_sets(n: int) -> tuple[frozenset, ...]:
    """Two-terminal series-parallel simple DAGs on n vertices, pole 0 to pole 1,
    internal vertices 2..n-1 (not deduplicated)."""
    if n == 2:
        return (frozenset({(0, 1)}),)
    found: set[frozenset] = set()
    for na in range(2, n):
        nb = n - na + 1
        if nb < 2:
            continue
        for a in _sp_edge_sets(na):
            for b in _sp_edge_sets(nb):
                # series: a's sink becomes a new internal vertex joined to b's source
                mid = n - 1
                ra = {0: 0, 1: mid}
                ra.update({k: k for k in range(2, na)})
                rb = {0: mid, 1: 1}
                rb.update({k: na + k - 2 for k in range(2, nb)})
                found.add(frozenset({(ra[u], ra[v]) for u, v in a} | {(rb[u], rb[v]) for u, v in b}))
    for na in range(3, n):
        nb = n - na + 2
        if nb < 3 or nb > na:
            continue
        for a in _sp_edge_sets(na):
            for b in _sp_edge_sets(nb):
                rb = {0: 0, 1: 1}
                rb.update({k: na + k - 2 for k in range(2, nb)})
                mapped = {(rb[u], rb[v]) for u, v in b}
                if mapped & a:
                    continue
                found.add(frozenset(a | mapped))
    found |= {edges | {(0, 1)} for edges in found if (0, 1) not in edges}
    return tuple(sorted(found, key=sorted))


def _relabel_st(n: int, edges: frozenset) -> DirectedGraph:
    """Pole 0 stays s; pole 1 becomes n-1 so vertex ids follow a topological order."""
    g = nx.DiGraph(list(edges))
    order = list(nx.lexicographical_topological_sort(g))
    rank = {v: k for k, v in enumerate(order)}
    return DirectedGraph(n, tuple(sorted((rank[u], rank[v]) for u, v in edges)))


def sp_st_graphs(max_n: int) -> list[DirectedGraph]:
    """Series-parallel st-graphs with 2..max_n vertices, each also with the (s,t)
    edge toggled, one representative per isomorphism class."""
    out: list[DirectedGraph] = []
    for n in range(2, max_n + 1):
        reps: list[nx.DiGraph] = []
        for edges in _sp_edge_sets(n):
            variants = [edges]
            variants.append(edges - {(0, 1)} if (0, 1) in edges else edges | {(0, 1)})
            for variant in variants:
                if not variant or _poles_ok(n, variant) is False:
                    continue
                g = _relabel_st(n, variant)
                probe = nx.DiGraph(list(g.edges))
                if any(nx.is_isomorphic(probe, r) for r in reps):
                    continue
                reps.append(probe)
                out.append(g)
    return out


def _poles_ok(n: int, edges: frozenset) -> bool:
    tails = {u for u, _ in edges}
    heads = {v for _, v in edges}
    covered = tails | heads
    return len(covered) == n and [v for v in covered if v not in heads] == [0] \
        and [v for v in covered if v not in tails] == [1]


def bridge_graphs() -> list[DirectedGraph]:
    """The smallest non-series-parallel st-graphs (a rigid component), with and
    without the (s,t) edge."""
    base = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    return [DirectedGraph(4, tuple(base)), DirectedGraph(4, tuple(base + [(0, 3)]))]


def candidate_embeddings(graph: DirectedGraph):
    """All permutations of successor and predecessor lists; callers filter."""
    succ_choices = [list(permutations(graph.out_adj[v])) for v in range(graph.n)]
    pred_choices = [list(permutations(graph.in_adj[v])) for v in range(graph.n)]
    for succ in product(*succ_choices):
        for pred in product(*pred_choices):
            yield UpwardEmbedding(succ, pred)


def st_embeddings(graph: DirectedGraph) -> list[UpwardEmbedding]:
    from .stgraph.base import StGraph, embedding_problem, st_poles

    s, t = st_poles(graph)
    st = StGraph(graph, s, t)
    return [e for e in candidate_embeddings(graph) if embedding_problem(st, e) is None]


# ---------------------------------------------------------------------------
# random embedded st-graphs
# ---------------------------------------------------------------------------

def _inner_face_sides(succ: list[list[int]], pred: list[list[int]], v: int, k: int,
                      limit: int) -> tuple[list[int], list[int]] | None:
    """Trace the face right of the k-th out-edge of v; return (left, right)
    boundary paths from the face source to its sink, or None for the outer
    face or an overly long walk."""
    def rot(w):
        return succ[w] + pred[w][::-1]

    walk = []
    a, x = v, succ[v][k]
    r = rot(a)
    y = r[(r.index(x) + 1) % len(r)]
    start = (a, x, y)
    angle = start
    while True:
        walk.append(angle)
        if len(walk) > limit:
            return None
        a, x, y = angle
        r = rot(y)
        nxt = r[(r.index(a) + 1) % len(r)]
        angle = (y, a, nxt)
        if angle == start:
            break
    outs = [set(succ[w]) for w, _, _ in walk]
    src = [i for i, (w, x, y) in enumerate(walk) if x in outs[i] and y in outs[i]]
    snk = [i for i, (w, x, y) in enumerate(walk) if x not in outs[i] and y not in outs[i]]
    if len(src) != 1 or len(snk) != 1:
        return None
    i, j = src[0], snk[0]
    if walk[i][0] == 0 and walk[i][1] == succ[0][-1] and walk[i][2] == succ[0][0]:
        return None
    seq = [w for w, _, _ in walk]
    rotated = seq[i:] + seq[:i]
    cut = (j - i) % len(seq)
    right = rotated[:cut + 1]
    left = (rotated[cut:] + rotated[:1])[::-1]
    return left, right


def random_st_graph(n: int, rng: random.Random, chord_rate: float = 0.3
                    ) -> tuple[DirectedGraph, UpwardEmbedding]:
    """Grow an embedded st-graph: subdivisions (series),
    new paths beside an edge (parallel) and chords inside faces."""
    if n < 2:
        raise ValueError("need n >= 2")
    succ: list[list[int]] = [[1], []]
    pred: list[list[int]] = [[], [0]]
    edges: set[tuple[int, int]] = {(0, 1)}
    edge_list = [(0, 1)]

    def add_edge(u, v):
        edges.add((u, v))
        edge_list.append((u, v))

    while len(succ) < n:
        u, v = edge_list[rng.randrange(len(edge_list))]
        if (u, v) not in edges:
            continue
        w = len(succ)
        if rng.random() < 0.5:
            succ.append([v])
            pred.append([u])
            succ[u][succ[u].index(v)] = w
            pred[v][pred[v].index(u)] = w
            edges.discard((u, v))
            add_edge(u, w)
            add_edge(w, v)
        else:
            succ.append([v])
            pred.append([u])
            succ[u].insert(succ[u].index(v) + 1, w)
            pred[v].insert(pred[v].index(u) + 1, w)
            add_edge(u, w)
            add_edge(w, v)
        if rng.random() < chord_rate:
            _random_chord(succ, pred, edges, add_edge, rng)
    return _renumber(succ, pred)


def _renumber(succ: list[list[int]], pred: list[list[int]]) -> tuple[DirectedGraph, UpwardEmbedding]:
    """Relabel vertices in a leftmost-first topological order so that ids of
    neighbouring vertices are close (s becomes 0, t becomes n-1)."""
    n = len(succ)
    indeg = [len(p) for p in pred]
    order: list[int] = []
    stack = [0]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in reversed(succ[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    new = [0] * n
    for k, v in enumerate(order):
        new[v] = k
    s_lists = [()] * n
    p_lists = [()] * n
    for v in range(n):
        s_lists[new[v]] = tuple(new[w] for w in succ[v])
        p_lists[new[v]] = tuple(new[u] for u in pred[v])
    edges = tuple((v, w) for v in range(n) for w in s_lists[v])
    return DirectedGraph(n, edges), UpwardEmbedding(tuple(s_lists), tuple(p_lists))


def _random_chord(succ, pred, edges, add_edge, rng) -> None:
    v = rng.randrange(len(succ))
    if not succ[v]:
        return
    k = rng.randrange(len(succ[v]))
    sides = _inner_face_sides(succ, pred, v, k, limit=64)
    if sides is None:
        return
    left, right = sides
    options = []
    for i in range(len(left) - 1):
        for j in range(1, len(right)):
            options.append((left, i, right, j))
    for j in range(len(right) - 1):
        for i in range(1, len(left)):
            options.append((right, j, left, i))
    rng.shuffle(options)
    for lo_side, i, hi_side, j in options:
        a, b = lo_side[i], hi_side[j]
        if a == b or (a, b) in edges:
            continue
        if lo_side is left:
            succ[a].insert(succ[a].index(lo_side[i + 1]) + 1, b)
            pred[b].insert(pred[b].index(hi_side[j - 1]), a)
        else:
            succ[a].insert(succ[a].index(lo_side[i + 1]), b)
            pred[b].insert(pred[b].index(hi_side[j - 1]) + 1, a)
        add_edge(a, b)
        return


# ---------------------------------------------------------------------------
# instances with pins read off a drawing
# ---------------------------------------------------------------------------

def longest_path_layers(graph: DirectedGraph) -> list[int]:
    layer = [0] * graph.n
    for v in graph.topological_order():
        for w in graph.out_adj[v]:
            layer[w] = max(layer[w], layer[v] + 1)
    return layer


def st_yes_positions(graph: DirectedGraph, emb: UpwardEmbedding) -> dict[int, Point]:
    """Vertex positions of a drawing of the embedded st-graph: height is the
    longest-path layer, x the dominance x-coordinate, so vertices sharing a
    layer appear in their left-to-right order."""
    from .stgraph.base import as_st_graph
    from .stgraph.dominance import build_dominance_index

    idx = build_dominance_index(as_st_graph(graph, emb), emb)
    layer = longest_path_layers(graph)
    return {v: Point(Fraction(idx.dom_x[v]), Fraction(layer[v])) for v in range(graph.n)}


def _choose_pins(rng: random.Random, positions: dict[int, Point], pin_fraction: float,
                 adversarial: bool) -> dict[int, Point]:
    pins = {v: p for v, p in positions.items() if rng.random() < pin_fraction}
    if adversarial and pins:
        ys = [p.y for p in pins.values()]
        rng.shuffle(ys)
        pins = {v: Point(p.x, y + rng.choice((-1, 0, 0, 1))) for (v, p), y in zip(pins.items(), ys)}
        seen: set = set()
        for v in list(pins):
            if pins[v] in seen:
                del pins[v]
            else:
                seen.add(pins[v])
    return pins


def random_st_instance(n: int, seed: int, pin_fraction: float = 0.5, embedded: bool = True,
                       adversarial: bool = False, edge_fraction: float = 0.0) -> UpeInstance:
    """Random st-graph with pins; non-adversarial instances are YES.  With
    edge_fraction > 0 some edges are fixed too, routed as in a witness drawing."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    graph, emb = random_st_graph(n, rng)
    positions = st_yes_positions(graph, emb)
    pins = _choose_pins(rng, positions, pin_fraction, adversarial)
    inst = UpeInstance(graph, frozenset(pins), frozenset(), PartialDrawing(pins, {}),
                       emb if embedded else None)
    if edge_fraction > 0 and not adversarial:
        from .stgraph.witness import build_witness_drawing_st

        full = build_witness_drawing_st(inst.with_embedding(emb))
        chosen = [e for e in graph.edges if rng.random() < edge_fraction]
        vpos = dict(pins)
        for u, v in chosen:
            vpos[u], vpos[v] = full.vertex_pos[u], full.vertex_pos[v]
        routes = {e: full.edge_routes[e] for e in chosen}
        inst = UpeInstance(graph, frozenset(vpos), frozenset(routes), PartialDrawing(vpos, routes),
                           emb if embedded else None)
    return inst


def _random_orientation(n: int, rng: random.Random, cyclic: bool) -> list[tuple[int, int]]:
    pairs = [(k, k + 1) for k in range(n - 1)] + ([(n - 1, 0)] if cyclic else [])
    while True:
        edges = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in pairs]
        if not cyclic or len({(a - b) % n for a, b in edges}) > 1:
            return edges


def _random_heights(n: int, edges: list[tuple[int, int]], rng: random.Random) -> list[int]:
    """A uniformly shuffled topological numbering."""
    g = DirectedGraph(n, tuple(edges))
    indeg = [len(p) for p in g.in_adj]
    ready = [v for v in range(n) if indeg[v] == 0]
    height = [0] * n
    k = 0
    while ready:
        v = ready.pop(rng.randrange(len(ready)))
        height[v] = k
        k += 1
        for w in g.out_adj[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return height


def random_path_instance(n: int, seed: int, pin_fraction: float = 1.0, embedded: bool = True,
                         adversarial: bool = False) -> UpeInstance:
    """Path 0-1-...-(n-1) drawn x-monotone with heights from a topological
    numbering; the embedding is read off that drawing."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = random.Random(seed)
    edges = _random_orientation(n, rng, cyclic=False)
    height = _random_heights(n, edges, rng)
    positions = {v: Point(Fraction(v), Fraction(height[v])) for v in range(n)}
    graph = DirectedGraph(n, tuple(edges))
    emb = None
    if embedded:
        routes = {e: (positions[e[0]], positions[e[1]]) for e in edges}
        emb = extract_embedding(graph, PartialDrawing(positions, routes))
    pins = _choose_pins(rng, positions, pin_fraction, adversarial)
    return UpeInstance(graph, frozenset(pins), frozenset(), PartialDrawing(pins, {}), emb)


def random_cycle_instance(n: int, seed: int, pin_fraction: float = 1.0, embedded: bool = True,
                          adversarial: bool = False) -> UpeInstance:
    """Cycle 0-1-...-(n-1)-0 with heights from a topological numbering; when
    embedded, junction choices are drawn until the fully pinned cycle is YES."""
    if n < 3:
        raise ValueError("a cycle needs n >= 3")
    from .pathcycle import junction_embedding, solve_cycle_fue

    rng = random.Random(seed)
    edges = _random_orientation(n, rng, cyclic=True)
    height = _random_heights(n, edges, rng)
    positions = {v: Point(Fraction(v), Fraction(height[v])) for v in range(n)}
    graph = DirectedGraph(n, tuple(edges))
    emb = None
    if embedded:
        junctions = [v for v in range(n) if len(graph.out_adj[v]) == 2 or len(graph.in_adj[v]) == 2]
        full = UpeInstance(graph, frozenset(positions), frozenset(), PartialDrawing(positions, {}))
        for _ in range(4 * 2 ** len(junctions)):
            cand = junction_embedding(graph, {v: rng.random() < 0.5 for v in junctions})
            if solve_cycle_fue(full.with_embedding(cand)).answer:
                emb = cand
                break
        if emb is None:
            raise RuntimeError("no compatible embedding found")
    pins = _choose_pins(rng, positions, pin_fraction, adversarial)
    return UpeInstance(graph, frozenset(pins), frozenset(), PartialDrawing(pins, {}), emb)
