"""Extension over an st-graph whose embedding is free: constraints from
equal-height pairs are pushed into the SPQR-tree (orders at P-nodes, flips at
R-nodes) and an embedding is assembled from the choices."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from ..core import Decision, DirectedGraph, UpeInstance, UpwardEmbedding, require_valid
from ..transforms import eliminate_partial_edges
from .base import StGraph, as_st_graph
from .conditions import check_condition1, height_groups
from .dominance import DominanceIndex, build_dominance_index
from .fue import solve_st_fue
from .spqr import SpqrTree, build_spqr_tree


@dataclass
class RigidSkeleton:
    """Chosen upward embedding of an R-node skeleton (parent edge removed), keyed
    by skeleton edge child ids, and a dominance index over the skeleton with one
    dummy vertex per edge."""

    succ: dict[int, list[int]]
    pred: dict[int, list[int]]
    index: DominanceIndex
    vertex_id: dict[int, int]
    edge_id: dict[int, int]
    preserve: bool = False
    flip: bool = False


@dataclass
class SpqrConstraints:
    tree: SpqrTree
    lr: dict[int, set[tuple[int, int]]] = field(default_factory=dict)
    rigid: dict[int, RigidSkeleton] = field(default_factory=dict)


def _rigid_skeleton(tree: SpqrTree, nid: int) -> RigidSkeleton:
    node = tree.nodes[nid]
    a, b = node.source, node.sink
    und = nx.Graph()
    und.add_edge(a, b)
    child_of: dict[tuple[int, int], int] = {}
    outs: dict[int, set[int]] = {}
    for u, v, c in node.skeleton:
        und.add_edge(u, v)
        child_of[(u, v)] = c
        outs.setdefault(u, set()).add(v)
    planar, rot = nx.check_planarity(und)
    if not planar:
        raise AssertionError("rigid skeleton is not planar")
    succ: dict[int, list[int]] = {}
    pred: dict[int, list[int]] = {}
    for w in und.nodes:
        cw = list(rot.neighbors_cw_order(w))
        if w == a:
            k = cw.index(b)
            succ[w] = [child_of[(w, x)] for x in cw[k + 1:] + cw[:k]]
            pred[w] = []
            continue
        if w == b:
            k = cw.index(a)
            succ[w] = []
            pred[w] = [child_of[(x, w)] for x in reversed(cw[k + 1:] + cw[:k])]
            continue
        is_out = [x in outs.get(w, ()) for x in cw]
        d = len(cw)
        start = next(k for k in range(d) if is_out[k] and not is_out[k - 1])
        turned = cw[start:] + cw[:start]
        n_out = sum(is_out)
        succ[w] = [child_of[(w, x)] for x in turned[:n_out]]
        pred[w] = [child_of[(x, w)] for x in reversed(turned[n_out:])]
    # subdivided skeleton: skeleton vertices first, then one dummy per edge
    vertex_id = {w: k for k, w in enumerate(sorted(und.nodes))}
    edge_id = {c: len(vertex_id) + k for k, (_, _, c) in enumerate(node.skeleton)}
    ends = {c: (u, v) for u, v, c in node.skeleton}
    total = len(vertex_id) + len(edge_id)
    s_lists: list[list[int]] = [[] for _ in range(total)]
    p_lists: list[list[int]] = [[] for _ in range(total)]
    edges = []
    for w, cs in succ.items():
        s_lists[vertex_id[w]] = [edge_id[c] for c in cs]
    for w, cs in pred.items():
        p_lists[vertex_id[w]] = [edge_id[c] for c in cs]
    for c, d in edge_id.items():
        u, v = ends[c]
        edges += [(vertex_id[u], d), (d, vertex_id[v])]
        s_lists[d], p_lists[d] = [vertex_id[v]], [vertex_id[u]]
    st = StGraph(DirectedGraph(total, tuple(edges)), vertex_id[a], vertex_id[b])
    emb = UpwardEmbedding(tuple(map(tuple, s_lists)), tuple(map(tuple, p_lists)))
    return RigidSkeleton(succ, pred, build_dominance_index(st, emb), vertex_id, edge_id)


def _collect(inst: UpeInstance, st: StGraph) -> tuple[SpqrConstraints | None, dict]:
    """Run the pair loop; return constraints or (None, reason)."""
    tree = build_spqr_tree(st)
    cons = SpqrConstraints(tree)
    for group in height_groups(inst):
        for u, v in zip(group, group[1:]):
            if {u, v} & {st.s, st.t}:
                return None, {"reason": "pole shares a height", "pair": [u, v]}
            nu = tree.lca(tree.proper_allocation(u), tree.proper_allocation(v))
            node = tree.nodes[nu]
            if node.kind == "S":
                return None, {"reason": "pair is comparable (S-node)", "pair": [u, v], "node": nu}
            x_u, x_v = tree.representative(nu, u), tree.representative(nu, v)
            if node.kind == "P":
                cons.lr.setdefault(nu, set()).add((x_u[1], x_v[1]))
            elif node.kind == "R":
                sk = cons.rigid.get(nu)
                if sk is None:
                    sk = cons.rigid[nu] = _rigid_skeleton(tree, nu)

                def key(rep):
                    return sk.vertex_id[rep[1]] if rep[0] == "vertex" else sk.edge_id[rep[1]]

                if sk.index.is_left_of(key(x_u), key(x_v)):
                    sk.preserve = True
                elif sk.index.is_left_of(key(x_v), key(x_u)):
                    sk.flip = True
                else:
                    return None, {"reason": "pair is comparable (R-node)", "pair": [u, v], "node": nu}
                if sk.preserve and sk.flip:
                    return None, {"reason": "R-node needs both orientations", "node": nu}
            else:
                raise AssertionError(f"unexpected node kind {node.kind}")
    for nu, arcs in cons.lr.items():
        kids = tree.nodes[nu].children
        local = {c: k for k, c in enumerate(kids)}
        if DirectedGraph(len(kids), tuple((local[x], local[y]) for x, y in arcs)).topological_order() is None:
            return None, {"reason": "cyclic P-node constraints", "node": nu}
    return cons, {}


def _assemble(cons: SpqrConstraints) -> UpwardEmbedding:
    tree = cons.tree
    st = tree.st
    succ: dict[int, list[int]] = {}
    pred: dict[int, list[int]] = {}
    out_of: dict[int, list[int]] = {}
    into: dict[int, list[int]] = {}
    order = []
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        order.append(nid)
        stack.extend(tree.nodes[nid].children)
    for nid in reversed(order):
        node = tree.nodes[nid]
        if node.kind == "Q":
            u, v = node.edge
            out_of[nid], into[nid] = [v], [u]
        elif node.kind == "S":
            parts = node.skeleton
            for (_, mid, c_lo), (_, _, c_hi) in zip(parts, parts[1:]):
                succ[mid] = out_of[c_hi]
                pred[mid] = into[c_lo]
            out_of[nid], into[nid] = out_of[parts[0][2]], into[parts[-1][2]]
        elif node.kind == "P":
            kids = node.children
            local = {c: k for k, c in enumerate(kids)}
            arcs = tuple((local[x], local[y]) for x, y in sorted(cons.lr.get(nid, ())))
            ranked = [kids[k] for k in DirectedGraph(len(kids), arcs).topological_order()]
            out_of[nid] = [w for c in ranked for w in out_of[c]]
            into[nid] = [w for c in ranked for w in into[c]]
        else:
            sk = cons.rigid.get(nid) or _rigid_skeleton(tree, nid)
            turn = (lambda xs: xs[::-1]) if sk.flip else (lambda xs: xs)
            for w in sk.succ:
                s_list = [x for c in turn(sk.succ[w]) for x in out_of[c]]
                p_list = [x for c in turn(sk.pred[w]) for x in into[c]]
                if w == node.source:
                    out_of[nid] = s_list
                elif w == node.sink:
                    into[nid] = p_list
                else:
                    succ[w], pred[w] = s_list, p_list
    top = tree.root
    s_list, t_list = list(out_of[top]), list(into[top])
    if tree.reference is not None and tree.has_st_edge:
        s_list.append(st.t)
        t_list.append(st.s)
    succ[st.s], pred[st.t] = s_list, t_list
    return UpwardEmbedding.from_lists(st.n, succ, pred)


def _lift_embedding(emb: UpwardEmbedding, n: int, vertex_origin: dict) -> UpwardEmbedding:
    """Map an embedding of the edge-eliminated graph back to the first n vertices."""

    def up(w: int, v: int, outgoing: bool) -> int:
        if w < n:
            return w
        tail, head = vertex_origin[w][1]
        return head if outgoing else tail

    succ = tuple(tuple(up(w, v, True) for w in emb.succ[v]) for v in range(n))
    pred = tuple(tuple(up(w, v, False) for w in emb.pred[v]) for v in range(n))
    return UpwardEmbedding(succ, pred)


def solve_st_upe(inst: UpeInstance) -> Decision:
    require_valid(inst)
    base = as_st_graph(inst.graph)
    flat, emap = eliminate_partial_edges(inst.with_embedding(None))
    st = StGraph(flat.graph, base.s, base.t)
    if not check_condition1(flat):
        return Decision(False, "st-upe", {"condition": 1})
    cons, why = _collect(flat, st)
    if cons is None:
        return Decision(False, "st-upe", {"condition": 2, **why})
    emb = _assemble(cons)
    if flat.n != inst.n:
        emb = _lift_embedding(emb, inst.n, emap.vertex_origin)
    check = solve_st_fue(inst.with_embedding(emb))
    if not check.answer:
        raise AssertionError("assembled embedding rejected by the fixed-embedding test")
    return Decision(True, "st-upe", {"embedding": emb})
