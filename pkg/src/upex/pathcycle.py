"""Extension tests for directed paths and cycles.

With a fixed embedding the answer comes from a four-index dynamic program:
``t(i, j, m, M)`` says whether the subpath ``u_i..u_j`` has an upward planar
drawing extending the fixed points in which ``u_m`` is strictly lowest and
``u_M`` strictly highest.  Without an embedding a linear scan over the
monotone runs suffices.

Positions along the path are 0-based internally; witnesses report them
1-based, matching the usual ``u_1..u_n`` naming.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Decision, DirectedGraph, PreconditionError, UpeInstance, UpwardEmbedding, require_valid

DEFAULT_MAX_N = 256


# ---------------------------------------------------------------------------
# shape detection and runs
# ---------------------------------------------------------------------------

def path_or_cycle_order(graph: DirectedGraph) -> tuple[list[int], str]:
    """Vertex sequence along the underlying path or cycle, and its shape."""
    n = graph.n
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in graph.edges:
        if u in nbrs[v]:
            raise PreconditionError("antiparallel edges: not a simple path or cycle")
        nbrs[u].add(v)
        nbrs[v].add(u)
    if any(len(s) > 2 for s in nbrs):
        raise PreconditionError("a vertex has more than two neighbours")
    m = len(graph.edges)
    if n == 0:
        raise PreconditionError("empty graph")
    if m == n - 1:
        shape = "path"
        ends = [v for v in range(n) if len(nbrs[v]) <= 1]
        start = min(ends)
    elif m == n and n >= 3:
        shape = "cycle"
        start = 0
    else:
        raise PreconditionError("graph is neither a path nor a cycle")
    order = [start]
    prev = None
    while len(order) < n:
        cur = order[-1]
        options = sorted(nbrs[cur] - {prev} - ({order[0]} if len(order) > 1 else set()))
        if not options:
            break
        prev = cur
        order.append(options[0])
    if len(order) != n:
        raise PreconditionError("graph is disconnected")
    return order, shape


@dataclass(frozen=True)
class MonotoneRunPartition:
    runs: tuple[tuple[int, ...], ...]
    shape: str


def partition_monotone_runs(graph: DirectedGraph) -> MonotoneRunPartition:
    """Maximal monotone subpaths, each listed from its source end to its sink end."""
    order, shape = path_or_cycle_order(graph)
    n = len(order)
    closed = shape == "cycle"
    steps = n if closed else n - 1
    forward = [(order[k], order[(k + 1) % n]) in graph.edge_set for k in range(steps)]
    if steps == 0:
        return MonotoneRunPartition(((order[0],),), shape)
    if closed and all(forward) or closed and not any(forward):
        raise PreconditionError("directed cycle has no monotone run partition")
    start = 0
    if closed:
        # rotate so the first step starts a new run
        start = next(k for k in range(steps) if forward[k] != forward[k - 1])
    runs = []
    k = 0
    while k < steps:
        direction = forward[(start + k) % steps]
        seq = [order[(start + k) % n]]
        while k < steps and forward[(start + k) % steps] == direction:
            seq.append(order[(start + k + 1) % n])
            k += 1
        runs.append(tuple(seq) if direction else tuple(reversed(seq)))
    return MonotoneRunPartition(tuple(runs), shape)


def junction_embedding(graph: DirectedGraph, lower_left: dict[int, bool]) -> UpwardEmbedding:
    """Build the rotation lists of a path or cycle from one bit per junction.

    ``lower_left[v]`` says whether the neighbour that comes earlier in the
    path order is the left one at the source or sink ``v``.
    """
    order, shape = path_or_cycle_order(graph)
    n = len(order)
    idx = {v: k for k, v in enumerate(order)}
    succ = {v: list(graph.out_adj[v]) for v in range(n)}
    pred = {v: list(graph.in_adj[v]) for v in range(n)}

    def earlier_first(v: int, pair: list[int]) -> list[int]:
        k = idx[v]
        before = order[(k - 1) % n] if (shape == "cycle" or k > 0) else None
        return sorted(pair, key=lambda w: 0 if w == before else 1)

    for v in range(n):
        for lists in (succ, pred):
            if len(lists[v]) == 2:
                pair = earlier_first(v, lists[v])
                lists[v] = pair if lower_left.get(v, True) else pair[::-1]
    return UpwardEmbedding.from_lists(n, succ, pred)


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------

class DpTable:
    """Packed bit table over (i, j, m, M) plus the wildcard projections.

    ``low_end[i][j]``   : some t(i, j, j, *)  (j lowest)
    ``high_start[i][j]``: some t(i, j, *, i)  (i highest)
    ``high_end[i][j]``  : some t(i, j, *, j)  (j highest)
    ``low_start[i][j]`` : some t(i, j, i, *)  (i lowest)
    ``rise[i][j]``      : t(i, j, i, j)
    ``fall[i][j]``      : t(i, j, j, i)
    """

    def __init__(self, size: int):
        self.size = size
        self.bits = bytearray((size ** 4 + 7) // 8)
        blank = lambda: [[False] * size for _ in range(size)]  # noqa: E731
        self.low_end = blank()
        self.high_start = blank()
        self.high_end = blank()
        self.low_start = blank()
        self.rise = blank()
        self.fall = blank()

    def _index(self, i: int, j: int, m: int, M: int) -> int:
        n = self.size
        return ((i * n + j) * n + m) * n + M

    def get(self, i: int, j: int, m: int, M: int) -> bool:
        k = self._index(i, j, m, M)
        return bool(self.bits[k >> 3] >> (k & 7) & 1)

    def set(self, i: int, j: int, m: int, M: int) -> None:
        k = self._index(i, j, m, M)
        self.bits[k >> 3] |= 1 << (k & 7)


@dataclass
class _PathData:
    order: list[int]
    ys: list[Fraction | None]
    forward: list[bool]
    s_lower_left: list[bool | None]
    p_lower_left: list[bool | None]


def _fill(data: _PathData, max_span: int) -> DpTable:
    ys = data.ys
    n = len(ys)
    forward = data.forward
    table = DpTable(n)
    rise, fall = table.rise, table.fall
    low_end, high_start = table.low_end, table.high_start
    high_end, low_start = table.high_end, table.low_start
    s_ll, p_ll = data.s_lower_left, data.p_lower_left
    bits = table.bits
    n2 = n * n

    # furthest index reachable from i along one direction
    mono_end = [0] * n
    mono_end[n - 1] = n - 1
    for i in range(n - 2, -1, -1):
        if i + 1 < n - 1 and forward[i + 1] == forward[i]:
            mono_end[i] = mono_end[i + 1]
        else:
            mono_end[i] = i + 1

    # lowest and highest fixed vertex of every window (index or -1)
    lo_pin = [[-1] * n for _ in range(n)]
    hi_pin = [[-1] * n for _ in range(n)]
    for i in range(n):
        lo = hi = -1
        for j in range(i, n):
            if ys[j] is not None:
                if lo < 0 or ys[j] < ys[lo]:
                    lo = j
                if hi < 0 or ys[j] > ys[hi]:
                    hi = j
            lo_pin[i][j] = lo
            hi_pin[i][j] = hi

    for span in range(1, min(max_span, n - 1) + 1):
        for i in range(0, n - span):
            j = i + span
            lo, hi = lo_pin[i][j], hi_pin[i][j]
            if j <= mono_end[i]:
                pinned = [ys[k] for k in range(i, j + 1) if ys[k] is not None]
                if forward[i]:
                    if all(a < b for a, b in zip(pinned, pinned[1:])):
                        table.set(i, j, i, j)
                        rise[i][j] = low_start[i][j] = high_end[i][j] = True
                elif all(a > b for a, b in zip(pinned, pinned[1:])):
                    table.set(i, j, j, i)
                    fall[i][j] = low_end[i][j] = high_start[i][j] = True
                continue

            def lowest_ok(k: int) -> bool:
                return ys[k] is None or lo == k

            def highest_ok(k: int) -> bool:
                return ys[k] is None or hi == k

            # both extremes at the ends
            val_rise = False
            if lowest_ok(i) and highest_ok(j):
                for top in range(i + 1, j - 1):
                    if not rise[i][top]:
                        continue
                    row = fall[top]
                    for bottom in range(top + 1, j):
                        if row[bottom] and rise[bottom][j] and p_ll[top] == s_ll[bottom]:
                            val_rise = True
                            break
                    if val_rise:
                        break
            val_fall = False
            if highest_ok(i) and lowest_ok(j):
                for bottom in range(i + 1, j - 1):
                    if not fall[i][bottom]:
                        continue
                    row = rise[bottom]
                    for top in range(bottom + 1, j):
                        if row[top] and fall[top][j] and s_ll[bottom] == p_ll[top]:
                            val_fall = True
                            break
                    if val_fall:
                        break

            base_ij = (i * n + j) * n2
            any_low_end = any_high_start = any_high_end = any_low_start = False
            low_end_i, high_end_i, rise_i, fall_i = low_end[i], high_end[i], rise[i], fall[i]
            for m in range(i, j + 1):
                m_ok = ys[m] is None or lo == m
                rise_m, low_start_m = rise[m], low_start[m]
                low_end_im = low_end_i[m]
                base_m = base_ij + m * n
                for M in range(i, j + 1):
                    if M == m:
                        continue
                    if m == i and M == j:
                        val = val_rise
                    elif m == j and M == i:
                        val = val_fall
                    elif m == i:
                        val = m_ok and rise_i[M] and high_start[M][j]
                    elif m == j:
                        val = m_ok and fall[M][j] and high_end_i[M]
                    elif M == i:
                        val = (ys[M] is None or hi == M) and fall_i[m] and low_start_m[j]
                    elif M == j:
                        val = (ys[M] is None or hi == M) and rise_m[j] and low_end_im
                    elif m < M:
                        val = (m_ok and (ys[M] is None or hi == M) and low_end_im
                               and rise_m[M] and high_start[M][j])
                    else:
                        val = (m_ok and (ys[M] is None or hi == M) and high_end_i[M]
                               and fall[M][m] and low_start_m[j])
                    if val:
                        k = base_m + M
                        bits[k >> 3] |= 1 << (k & 7)
                        if m == j:
                            any_low_end = True
                        if M == i:
                            any_high_start = True
                        if M == j:
                            any_high_end = True
                        if m == i:
                            any_low_start = True
            rise[i][j] = val_rise
            fall[i][j] = val_fall
            low_end[i][j] = any_low_end
            high_start[i][j] = any_high_start
            high_end[i][j] = any_high_end
            low_start[i][j] = any_low_start
    return table


# ---------------------------------------------------------------------------
# embedded paths and cycles
# ---------------------------------------------------------------------------

def _check_fixed_scope(inst: UpeInstance, shape: str, need_embedding: bool) -> list[int]:
    require_valid(inst)
    order, found = path_or_cycle_order(inst.graph)
    if found != shape:
        raise PreconditionError(f"graph is a {found}, not a {shape}")
    if inst.h_edges:
        raise PreconditionError("fixed edges present; remove them first")
    if not inst.distinct_pinned_y():
        raise PreconditionError("two fixed vertices share a height")
    if need_embedding and inst.embedding is None:
        raise PreconditionError("an upward embedding is required")
    if not need_embedding and inst.embedding is not None:
        raise PreconditionError("this test ignores embeddings; drop it first")
    return order


def _path_data(inst: UpeInstance, order: list[int], cyclic: bool) -> _PathData:
    n = len(order)
    copies = 2 if cyclic else 1
    seq = [order[k % n] for k in range(n * copies)]
    emb = inst.embedding
    ys = [inst.pos(v).y if v in inst.h_vertices else None for v in seq]
    forward = [(seq[k], seq[k + 1]) in inst.graph.edge_set for k in range(len(seq) - 1)]
    s_ll: list = []
    p_ll: list = []
    for k, v in enumerate(seq):
        if cyclic or 0 < k < len(seq) - 1:
            before, after = order[(k - 1) % n], order[(k + 1) % n]
            s_ll.append(emb.succ[v] == (before, after) if len(emb.succ[v]) == 2 else None)
            p_ll.append(emb.pred[v] == (before, after) if len(emb.pred[v]) == 2 else None)
        else:
            s_ll.append(None)
            p_ll.append(None)
    return _PathData(seq, ys, forward, s_ll, p_ll)


def path_table(inst: UpeInstance, max_n: int = DEFAULT_MAX_N) -> tuple[DpTable, list[int]]:
    order = _check_fixed_scope(inst, "path", True)
    if len(order) > max_n:
        raise PreconditionError(f"path longer than the table cap {max_n}")
    data = _path_data(inst, order, False)
    return _fill(data, len(order) - 1), order


def solve_path_fue(inst: UpeInstance, max_n: int = DEFAULT_MAX_N) -> Decision:
    """Fixed-embedding test for a directed path."""
    table, order = path_table(inst, max_n)
    n = len(order)
    if n == 1:
        return Decision(True, "path-fue", {"order": order, "tree": None})
    for m in range(n):
        for M in range(n):
            if m != M and table.get(0, n - 1, m, M):
                tree = explain(table, _path_data(inst, order, False), 0, n - 1, m, M)
                return Decision(True, "path-fue", {"order": order, "tree": tree})
    return Decision(False, "path-fue")


def solve_cycle_fue(inst: UpeInstance, max_n: int = DEFAULT_MAX_N) -> Decision:
    """Fixed-embedding test for a directed cycle via the doubled path."""
    order = _check_fixed_scope(inst, "cycle", True)
    n = len(order)
    if 2 * n > max_n:
        raise PreconditionError(f"cycle longer than the table cap {max_n // 2}")
    data = _path_data(inst, order, True)
    table = _fill(data, n - 1)
    s_ll, p_ll = data.s_lower_left, data.p_lower_left
    for m in range(n):
        for M in range(n):
            if m == M or s_ll[m] is None or p_ll[M] is None or s_ll[m] == p_ll[M]:
                continue
            if m < M:
                first, second = (m, M, m, M), (M, n + m, n + m, M)
            else:
                first, second = (M, m, m, M), (m, n + M, m, n + M)
            if table.get(*first) and table.get(*second):
                witness = {
                    "order": order,
                    "lowest": order[m],
                    "highest": order[M],
                    "trees": [explain(table, data, *first), explain(table, data, *second)],
                }
                return Decision(True, "cycle-fue", witness)
    return Decision(False, "cycle-fue")


def explain(table: DpTable, data: _PathData, i: int, j: int, m: int, M: int) -> dict:
    """Decomposition tree showing why a true entry is true."""
    node = {"entry": [i + 1, j + 1, m + 1, M + 1]}

    def first_true(cands):
        for c in cands:
            if table.get(*c):
                return c
        raise AssertionError(f"no true split below {(i, j, m, M)}")

    def child(c):
        return explain(table, data, *c)

    forward = data.forward
    mono = all(forward[k] == forward[i] for k in range(i, j))
    if mono:
        node.update(rule="base", splits=[])
        return node
    s_ll, p_ll = data.s_lower_left, data.p_lower_left
    if (m, M) in ((i, j), (j, i)):
        rising = (m, M) == (i, j)
        for a in range(i + 1, j - 1):
            for b in range(a + 1, j):
                if rising:
                    parts = [(i, a, i, a), (a, b, b, a), (b, j, b, j)]
                    ok = p_ll[a] == s_ll[b]
                else:
                    parts = [(i, a, a, i), (a, b, a, b), (b, j, j, b)]
                    ok = s_ll[a] == p_ll[b]
                if ok and all(table.get(*p) for p in parts):
                    node.update(rule="ends-extreme", splits=[child(p) for p in parts])
                    return node
        raise AssertionError("ends-extreme entry without a split")
    if m == i:
        parts = [(i, M, i, M), first_true((M, j, x, M) for x in range(M + 1, j + 1))]
    elif m == j:
        parts = [(M, j, j, M), first_true((i, M, x, M) for x in range(i, M))]
    elif M == i:
        parts = [(i, m, m, i), first_true((m, j, m, x) for x in range(m + 1, j + 1))]
    elif M == j:
        parts = [(m, j, m, j), first_true((i, m, m, x) for x in range(i, m))]
    else:
        if m < M:
            parts = [first_true((i, m, m, x) for x in range(i, m)), (m, M, m, M),
                     first_true((M, j, x, M) for x in range(M + 1, j + 1))]
        else:
            parts = [first_true((i, M, x, M) for x in range(i, M)), (M, m, m, M),
                     first_true((m, j, m, x) for x in range(m + 1, j + 1))]
        node.update(rule="interior-extremes", splits=[child(p) for p in parts])
        return node
    node.update(rule="one-end-extreme", splits=[child(p) for p in parts])
    return node


# ---------------------------------------------------------------------------
# no embedding
# ---------------------------------------------------------------------------

def runs_increasing(inst: UpeInstance, runs: MonotoneRunPartition) -> bool:
    for run in runs.runs:
        last = None
        for v in run:
            if v in inst.h_vertices:
                y = inst.pos(v).y
                if last is not None and not y > last:
                    return False
                last = y
    return True


def solve_path_or_cycle_upe(inst: UpeInstance, shape: str | None = None) -> Decision:
    """Embedding-free test: fixed heights must rise along every monotone run."""
    require_valid(inst)
    order, found = path_or_cycle_order(inst.graph)
    if shape is not None and shape != found:
        raise PreconditionError(f"graph is a {found}, not a {shape}")
    if inst.h_edges:
        raise PreconditionError("fixed edges present; remove them first")
    if not inst.distinct_pinned_y():
        raise PreconditionError("two fixed vertices share a height")
    if inst.embedding is not None:
        raise PreconditionError("this test ignores embeddings; drop it first")
    engine = "path-upe"
    try:
        runs = partition_monotone_runs(inst.graph)
    except PreconditionError:
        return Decision(False, engine, None)  # a directed cycle is never upward
    ok = runs_increasing(inst, runs)
    return Decision(ok, engine, {"runs": [list(r) for r in runs.runs]} if ok else None)
