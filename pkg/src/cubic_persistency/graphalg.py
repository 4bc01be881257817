"""Graph algorithms used by the decision procedures.

* :class:`DisjointSets` with path compression and union-by-size.
* :func:`max_flow_min_cut`: push-relabel with FIFO active-vertex selection
  and the gap heuristic.
* :func:`global_min_cut`: Stoer-Wagner.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence


class DisjointSets:
    """Union-find over ``0..n-1``."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Component id per element; ids are the smallest member of each component."""
    ds = DisjointSets(n)
    for p, q in edges:
        ds.union(p, q)
    roots = [ds.find(v) for v in range(n)]
    smallest: dict[int, int] = {}
    for v, r in enumerate(roots):
        smallest.setdefault(r, v)
    return [smallest[r] for r in roots]


class FlowNetwork:
    """Directed capacitated network with a designated source and sink.

    Arcs are stored in pairs: arc ``2k`` is the forward arc added by the
    ``k``-th call to :meth:`add_arc` and ``2k + 1`` its reverse, which has
    capacity 0 unless the pair was added with :meth:`add_edge`.
    """

    def __init__(self, node_count: int, source: int, sink: int):
        if source == sink:
            raise ValueError("source and sink must differ")
        if not (0 <= source < node_count and 0 <= sink < node_count):
            raise ValueError("source/sink out of range")
        self.node_count = node_count
        self.source = source
        self.sink = sink
        self.head: list[int] = []
        self.capacity: list[float] = []
        self.out: list[list[int]] = [[] for _ in range(node_count)]

    def add_arc(self, u: int, v: int, capacity: float) -> int:
        return self.add_edge(u, v, capacity, 0.0)

    def add_edge(self, u: int, v: int, capacity: float, reverse_capacity: float) -> int:
        """Arc ``u -> v`` and arc ``v -> u`` sharing one residual pair."""
        if capacity < 0 or reverse_capacity < 0:
            raise ValueError(f"negative capacity on arc ({u}, {v})")
        k = len(self.head)
        self.head.append(v)
        self.head.append(u)
        self.capacity.append(float(capacity))
        self.capacity.append(float(reverse_capacity))
        self.out[u].append(k)
        self.out[v].append(k + 1)
        return k

    def arcs(self) -> list[tuple[int, int, float]]:
        """All arcs with positive capacity as ``(tail, head, capacity)``."""
        head, cap = self.head, self.capacity
        return [(head[k ^ 1], head[k], cap[k]) for k in range(len(head)) if cap[k] > 0]

    def cut_capacity(self, source_side: Iterable[int]) -> float:
        S = set(source_side)
        head, cap = self.head, self.capacity
        return sum(cap[k] for k in range(len(head))
                   if cap[k] > 0 and head[k ^ 1] in S and head[k] not in S)


def max_flow_min_cut(network: FlowNetwork) -> tuple[float, frozenset[int]]:
    """Maximum flow value and the minimal minimum cut.

    Returns ``(value, source_side)`` where ``source_side`` is the set of
    vertices reachable from the source in the final residual network.
    """
    n = network.node_count
    s, t = network.source, network.sink
    head = network.head
    res = list(network.capacity)
    out = network.out
    excess = [0.0] * n
    count = [0] * (2 * n + 1)
    current = [0] * n
    active = deque()
    in_queue = [False] * n

    # exact distance labels to the sink as the initial heights
    height = [n] * n
    height[t] = 0
    bfs = deque([t])
    while bfs:
        v = bfs.popleft()
        for k in out[v]:
            u = head[k]
            if height[u] == n and u != t and res[k ^ 1] > 0:
                height[u] = height[v] + 1
                bfs.append(u)
    height[s] = n
    for h in height:
        count[h] += 1

    for k in out[s]:
        c = res[k]
        if c > 0:
            v = head[k]
            res[k] = 0.0
            res[k ^ 1] += c
            excess[v] += c
            excess[s] -= c
            if v != t and v != s and not in_queue[v]:
                in_queue[v] = True
                active.append(v)

    while active:
        u = active.popleft()
        in_queue[u] = False
        arcs_u = out[u]
        deg = len(arcs_u)
        while excess[u] > 0:
            if current[u] == deg:
                # relabel
                old = height[u]
                best = 2 * n
                for k in arcs_u:
                    if res[k] > 0:
                        h = height[head[k]]
                        if h < best:
                            best = h
                new = min(best + 1, 2 * n)
                count[old] -= 1
                height[u] = new
                count[new] += 1
                current[u] = 0
                if count[old] == 0 and old < n:
                    # gap: nothing below can reach the sink through heights in (old, n)
                    for v in range(n):
                        if old < height[v] < n and v != s:
                            count[height[v]] -= 1
                            height[v] = n + 1
                            count[n + 1] += 1
                if height[u] >= 2 * n:
                    break
                continue
            k = arcs_u[current[u]]
            v = head[k]
            r = res[k]
            if r > 0 and height[u] == height[v] + 1:
                delta = excess[u] if excess[u] < r else r
                res[k] = r - delta
                res[k ^ 1] += delta
                excess[u] -= delta
                excess[v] += delta
                if v != s and v != t and not in_queue[v]:
                    in_queue[v] = True
                    active.append(v)
            else:
                current[u] += 1

    # residual reachability from the source
    seen = [False] * n
    seen[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        for k in out[u]:
            v = head[k]
            if res[k] > 0 and not seen[v]:
                seen[v] = True
                stack.append(v)
    side = frozenset(v for v in range(n) if seen[v])
    value = excess[t]
    cut = network.cut_capacity(side)
    if seen[t] or not math.isclose(value, cut, rel_tol=1e-9, abs_tol=1e-9):
        raise ArithmeticError(f"flow {value} does not match cut capacity {cut}")
    return value, side


class WeightedGraph:
    """Undirected graph with nonnegative edge weights on ``0..n-1``."""

    def __init__(self, vertex_count: int,
                 edges: Iterable[tuple[int, int, float]] = ()):
        self.vertex_count = vertex_count
        self.weights: dict[tuple[int, int], float] = {}
        for p, q, w in edges:
            self.add_edge(p, q, w)

    def add_edge(self, p: int, q: int, w: float) -> None:
        if w < 0:
            raise ValueError(f"negative weight {w} on edge ({p}, {q})")
        if p == q:
            raise ValueError("self loops are not allowed")
        key = (p, q) if p < q else (q, p)
        self.weights[key] = self.weights.get(key, 0.0) + float(w)

    def cut_value(self, side: Iterable[int]) -> float:
        S = set(side)
        return sum(w for (p, q), w in self.weights.items() if (p in S) != (q in S))


def global_min_cut(graph: WeightedGraph) -> tuple[float, frozenset[int]]:
    """Stoer-Wagner minimum cut over all nonempty proper vertex subsets.

    The returned side is the one containing vertex 0.
    """
    n = graph.vertex_count
    if n < 2:
        raise ValueError("global min cut needs at least two vertices")
    comp = connected_components(n, graph.weights)
    if len(set(comp)) > 1:
        return 0.0, frozenset(v for v in range(n) if comp[v] == comp[0])

    w = [[0.0] * n for _ in range(n)]
    for (p, q), c in graph.weights.items():
        w[p][q] += c
        w[q][p] += c
    members: list[list[int]] = [[v] for v in range(n)]
    alive = list(range(n))
    best = math.inf
    best_side: list[int] = []
    while len(alive) > 1:
        # maximum adjacency ordering
        key = {v: 0.0 for v in alive}
        used: set[int] = set()
        prev = last = alive[0]
        for _ in range(len(alive)):
            sel = max((v for v in alive if v not in used), key=lambda v: (key[v], -v))
            used.add(sel)
            prev, last = last, sel
            row = w[sel]
            for v in alive:
                if v not in used:
                    key[v] += row[v]
        cut_of_phase = key[last]
        if cut_of_phase < best:
            best = cut_of_phase
            best_side = list(members[last])
        # merge last into prev
        members[prev].extend(members[last])
        for v in alive:
            w[prev][v] += w[last][v]
            w[v][prev] = w[prev][v]
        w[prev][prev] = 0.0
        alive.remove(last)
    side = frozenset(best_side)
    if 0 not in side:
        side = frozenset(range(n)) - side
    return best, side


def brute_force_st_cut(network: FlowNetwork) -> float:
    """Minimum st-cut by enumerating all vertex bipartitions (tests only)."""
    from itertools import product

    others = [v for v in range(network.node_count) if v not in (network.source, network.sink)]
    best = math.inf
    for bits in product((0, 1), repeat=len(others)):
        S = {network.source} | {v for v, b in zip(others, bits) if b}
        best = min(best, network.cut_capacity(S))
    return best


def components_by_bfs(n: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    """Reference component labelling by breadth-first search."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for p, q in edges:
        adj[p].append(q)
        adj[q].append(p)
    label = [-1] * n
    for v in range(n):
        if label[v] != -1:
            continue
        label[v] = v
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for x in adj[u]:
                if label[x] == -1:
                    label[x] = v
                    queue.append(x)
    return label
