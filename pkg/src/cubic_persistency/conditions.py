"""Deciders for the partial optimality conditions.

Every checker is read-only on the instance and returns a
:class:`Certificate` when its condition holds, otherwise ``None``.  A
certificate's ``margin`` is the left-hand side minus the right-hand side of
the decided inequality (oriented so that the condition holds iff the margin
is nonnegative).  ``slack`` is subtracted from the margin before the test,
making acceptance conservative for noisy real costs.

Cut searches are solved exactly (maximum margin) through
:mod:`cubic_persistency.reductions`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .graphalg import WeightedGraph, connected_components, global_min_cut
from .instance import Edge, Instance, Triple, canonical_edge, neg, pos
from .reductions import fold_triples_into_edges, min_cut_folded

EDGE_FIXED_0 = "edge_fixed_0"
EDGE_FIXED_1 = "edge_fixed_1"
TRIPLE_CUT = "triple_cut"
TRIPLE_JOINED = "triple_joined"
SUBSET_JOINED = "subset_joined"
SEPARATION = "separation"


@dataclass(frozen=True)
class Certificate:
    """Witnessed outcome of one condition.

    ``target`` is an edge, a triple, or (for subset joins and separations) a
    tuple of vertices or edges; ``witness`` holds the vertex sets used.
    """

    condition: str
    kind: str
    target: tuple
    witness: tuple[frozenset[int], ...]
    margin: float

    @property
    def edge(self) -> Edge:
        return self.target  # type: ignore[return-value]


class _Context:
    """Per-instance derived weights shared by all checkers."""

    def __init__(self, inst: Instance):
        self.inst = inst
        ec, tc = inst.edge_costs, inst.triple_costs
        self.neg_e = [neg(c) for c in ec]
        self.neg_t = [neg(c) for c in tc]
        self.abs_e = [abs(c) for c in ec]
        self.abs_t = [abs(c) for c in tc]
        self.sum_pos = sum(pos(c) for c in ec) + sum(pos(c) for c in tc)
        self._folded: dict[str, list[float]] = {}
        self._adjacent: dict[str, list[dict[int, float]]] = {}
        self._tri_rhs: dict[Triple, float] = {}

    def folded(self, which: str) -> list[float]:
        if which not in self._folded:
            if which == "neg":
                e, t = self.neg_e, self.neg_t
            else:
                e, t = self.abs_e, self.abs_t
            self._folded[which] = fold_triples_into_edges(
                self.inst.edges, e, self.inst.triples, t)
        return self._folded[which]

    def adjacent(self, which: str) -> list[dict[int, float]]:
        if which not in self._adjacent:
            adj: list[dict[int, float]] = [{} for _ in range(self.inst.vertex_count)]
            for (p, q), w in zip(self.inst.edges, self.folded(which)):
                if w > 0:
                    adj[p][q] = w
                    adj[q][p] = w
            self._adjacent[which] = adj
        return self._adjacent[which]

    def flow_lower_bound(self, which: str, source: int, sinks: tuple[int, ...],
                         limit: float = math.inf) -> float:
        """Value of a feasible flow from ``source`` to ``sinks``, packed
        greedily from paths of at most three edges.  Every separating cut is
        at least this value.  Packing stops once the value exceeds ``limit``."""
        adj = self.adjacent(which)
        used: dict[tuple[int, int], float] = {}

        def cap(u: int, v: int) -> float:
            w = adj[u].get(v)
            if w is None:
                return 0.0
            return w - used.get((u, v) if u < v else (v, u), 0.0)

        def take(u: int, v: int, f: float) -> None:
            key = (u, v) if u < v else (v, u)
            used[key] = used.get(key, 0.0) + f

        def drain(r: int, f: float) -> None:
            # route f from r into the sinks
            for b in sinks:
                c = cap(r, b)
                if c > 0:
                    g = c if c < f else f
                    take(r, b, g)
                    f -= g
                    if f <= 0:
                        return

        near = adj[source]
        total = sum(near.get(b, 0.0) for b in sinks)
        middle = [r for r in near if r not in sinks]
        for r in middle:
            if total > limit:
                return total
            f = min(cap(source, r), sum(cap(r, b) for b in sinks))
            if f > 0:
                take(source, r, f)
                drain(r, f)
                total += f
        for r in middle:
            if total > limit:
                return total
            for x in adj[r]:
                head = cap(source, r)
                if head <= 0:
                    break
                if x == source or x in sinks:
                    continue
                f = min(head, cap(r, x), sum(cap(x, b) for b in sinks))
                if f > 0:
                    take(source, r, f)
                    take(r, x, f)
                    drain(x, f)
                    total += f
                    if total > limit:
                        return total
        return total

    def min_cut(self, which: str, source: int, forbidden: Iterable[int]):
        inst = self.inst
        return min_cut_folded(inst.vertex_count, inst.edges, self.folded(which),
                              source, forbidden)

    def eidx(self, p: int, q: int) -> int:
        return self.inst.edge_index[canonical_edge(p, q)]

    def triples_on(self, *edge_ids: int) -> set[int]:
        out: set[int] = set()
        for k in edge_ids:
            out.update(t for _, t in self.inst.edge_triples[k])
        return out

    def boundary(self, S: set[int]) -> tuple[list[int], set[int]]:
        """Edge ids of ``delta(S)`` and triple ids of ``T_delta(S)``."""
        inst = self.inst
        edges = []
        for v in sorted(S):
            for k in inst.vertex_edges[v]:
                p, q = inst.edges[k]
                if (p in S) != (q in S):
                    edges.append(k)
        return edges, self.triples_on(*edges)


def _ctx(inst: Instance) -> _Context:
    ctx = inst._cache.get("conditions")
    if ctx is None:
        ctx = inst._cache["conditions"] = _Context(inst)
    return ctx


def _apex_orders(triple: Triple) -> list[tuple[int, int, int]]:
    i, j, k = triple
    return [(i, j, k), (j, i, k), (k, i, j)]


# -- cut conditions -----------------------------------------------------------

def check_subset_separation(inst: Instance) -> tuple[list[list[int]], Optional[Certificate]]:
    """Vertex groups of the graph restricted to edges with a negative cost or
    a negative triple; all edges between groups have an optimal value 0.

    The certificate (``None`` for a single group) lists the cross edges.
    """
    keep = []
    for k, (e, c) in enumerate(zip(inst.edges, inst.edge_costs)):
        if c < 0 or any(inst.triple_costs[t] < 0 for _, t in inst.edge_triples[k]):
            keep.append(e)
    comp = connected_components(inst.vertex_count, keep)
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(comp):
        groups.setdefault(c, []).append(v)
    ordered = [groups[c] for c in sorted(groups)]
    if len(ordered) == 1:
        return ordered, None
    cross = tuple(e for e in inst.edges if comp[e[0]] != comp[e[1]])
    values = [inst.edge_costs[inst.edge_index[e]] for e in cross]
    cross_set = set(inst.edge_index[e] for e in cross)
    values += [inst.triple_costs[t] for t in _ctx(inst).triples_on(*cross_set)]
    margin = min(values) if values else 0.0
    witness = tuple(frozenset(g) for g in ordered)
    return ordered, Certificate("separation", SEPARATION, cross, witness, margin)


def check_edge_cut(inst: Instance, edge: Edge, slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ij = 0`` if ``c_ij^+ >= min_U c^-(T_delta(U)) + c^-(delta(U))``."""
    ctx = _ctx(inst)
    i, j = canonical_edge(*edge)
    k = ctx.eidx(i, j)
    lhs = pos(inst.edge_costs[k]) - slack
    # every admissible U cuts ij and all triples containing it
    bound = ctx.neg_e[k] + sum(ctx.neg_t[t] for _, t in inst.edge_triples[k])
    if lhs < bound or lhs < ctx.flow_lower_bound("neg", i, (j,), lhs):
        return None
    rhs, U = ctx.min_cut("neg", i, (j,))
    if lhs >= rhs:
        return Certificate("edge_cut", EDGE_FIXED_0, (i, j), (U,), lhs - rhs)
    return None


def check_triplet_cut(inst: Instance, triple: Triple, slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ij x*_ik x*_jk = 0`` if, for some apex ``i``,
    ``c_ijk^+ + c_ij^+ + c_ik^+ >= min_U c^-(T_delta(U)) + c^-(delta(U))``
    with ``i in U`` and ``j, k`` outside."""
    ctx = _ctx(inst)
    t = inst.triple_index[triple]
    for a, b, c in _apex_orders(triple):
        kab, kac = ctx.eidx(a, b), ctx.eidx(a, c)
        ec = inst.edge_costs
        lhs = pos(inst.triple_costs[t]) + pos(ec[kab]) + pos(ec[kac]) - slack
        bound = ctx.neg_e[kab] + ctx.neg_e[kac] + sum(
            ctx.neg_t[x] for x in ctx.triples_on(kab, kac))
        if lhs < bound or lhs < ctx.flow_lower_bound("neg", a, (b, c), lhs):
            continue
        rhs, U = ctx.min_cut("neg", a, (b, c))
        if lhs >= rhs:
            return Certificate("triplet_cut", TRIPLE_CUT, triple, (U,), lhs - rhs)
    return None


# -- join conditions ----------------------------------------------------------

def check_edge_join(inst: Instance, edge: Edge, slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ij = 1`` if
    ``2c_ij^- + sum_{T_ij} c^- >= min_U |c|(T_delta(U)) + |c|(delta(U))``."""
    ctx = _ctx(inst)
    i, j = canonical_edge(*edge)
    k = ctx.eidx(i, j)
    on_ij = [t for _, t in inst.edge_triples[k]]
    lhs = 2 * ctx.neg_e[k] + sum(ctx.neg_t[t] for t in on_ij) - slack
    bound = ctx.abs_e[k] + sum(ctx.abs_t[t] for t in on_ij)
    if lhs < bound or lhs < ctx.flow_lower_bound("abs", i, (j,), lhs):
        return None
    rhs, U = ctx.min_cut("abs", i, (j,))
    if lhs >= rhs:
        return Certificate("edge_join", EDGE_FIXED_1, (i, j), (U,), lhs - rhs)
    return None


def check_triplet_join(inst: Instance, triple: Triple, slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ij x*_ik x*_jk = 1`` if, for some apex ``i``,

    ``2c_ijk^- + 2c_ij^- + 2c_ik^- + c_jk^- - sum_T c^+ - sum_E c^+
    + min{0, c_ij, c_ik, c_jk} >= min_U c^-(T_delta(U)) + c^-(delta(U))``.
    """
    ctx = _ctx(inst)
    t = inst.triple_index[triple]
    i, j, k = triple
    ec = inst.edge_costs
    tri = [ec[ctx.eidx(i, j)], ec[ctx.eidx(i, k)], ec[ctx.eidx(j, k)]]
    # not-all-joined labelings of a triangle: all apart, or exactly one pair joined
    inner = min(0.0, *tri)
    for a, b, c in _apex_orders(triple):
        kab, kac, kbc = ctx.eidx(a, b), ctx.eidx(a, c), ctx.eidx(b, c)
        lhs = (2 * ctx.neg_t[t] + 2 * ctx.neg_e[kab] + 2 * ctx.neg_e[kac]
               + ctx.neg_e[kbc] - ctx.sum_pos + inner - slack)
        if lhs < 0:
            continue
        bound = ctx.neg_e[kab] + ctx.neg_e[kac] + sum(
            ctx.neg_t[x] for x in ctx.triples_on(kab, kac))
        if lhs < bound or lhs < ctx.flow_lower_bound("neg", a, (b, c), lhs):
            continue
        rhs, U = ctx.min_cut("neg", a, (b, c))
        if lhs >= rhs:
            return Certificate("triplet_join", TRIPLE_JOINED, triple, (U,), lhs - rhs)
    return None


def _triangle_boundary_rhs(ctx: _Context, triple: Triple) -> float:
    """``-sum |c|`` over negative boundary edges of ``ijk`` and negative
    triples with exactly one vertex in ``ijk``."""
    inst = ctx.inst
    S = set(triple)
    edges, _ = ctx.boundary(S)
    total = sum(ctx.abs_e[k] for k in edges if inst.edge_costs[k] < 0)
    seen: set[int] = set()
    for k in edges:
        for r, x in inst.edge_triples[k]:
            if x in seen:
                continue
            seen.add(x)
            if sum(v in S for v in inst.triples[x]) == 1 and inst.triple_costs[x] < 0:
                total += ctx.abs_t[x]
    return -total


def check_triangle_edge_join(inst: Instance, triple: Triple,
                             slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ik = 1`` for the edge ``ik`` of a triple ``ijk`` if

    1. ``c_ijk^- + 2c_ij^- + 2c_ik^- + sum_{T_{ij,ik}} c^-`` is at least the
       min ``|c|``-cut separating ``i`` from ``j, k``;
    2. the same with the roles of ``i`` and ``k`` exchanged;
    3. ``c_ijk + c_ij + c_ik + c_jk`` is at most minus the negative boundary
       mass of ``ijk``.

    The three choices of the vertex ``j`` off the certified edge are tried in
    ascending order.  The witness is ``(U, U', {i, j, k})``.
    """
    ctx = _ctx(inst)
    t = inst.triple_index[triple]
    p, q, r = triple
    ec = inst.edge_costs
    total = inst.triple_costs[t] + ec[ctx.eidx(p, q)] + ec[ctx.eidx(p, r)] + ec[ctx.eidx(q, r)]
    if total + slack > 0:
        # the right-hand side of condition 3 is never positive
        return None
    margin3 = None
    for j in triple:
        i, k = [v for v in triple if v != j]
        kij, kik, kjk = ctx.eidx(i, j), ctx.eidx(i, k), ctx.eidx(j, k)
        sides = []
        for src, kx in ((i, kij), (k, kjk)):
            on = ctx.triples_on(kx, kik)
            lhs = (ctx.neg_t[t] + 2 * ctx.neg_e[kx] + 2 * ctx.neg_e[kik]
                   + sum(ctx.neg_t[x] for x in on) - slack)
            bound = ctx.abs_e[kx] + ctx.abs_e[kik] + sum(ctx.abs_t[x] for x in on)
            sinks = tuple(v for v in triple if v != src)
            if lhs < bound or lhs < ctx.flow_lower_bound("abs", src, sinks, lhs):
                break
            sides.append((src, sinks, lhs))
        else:
            if margin3 is None:
                margin3 = _triangle_boundary_rhs(ctx, triple) - total - slack
            if margin3 < 0:
                return None
            witness = []
            margins = [margin3]
            for src, sinks, lhs in sides:
                rhs, U = ctx.min_cut("abs", src, sinks)
                if lhs < rhs:
                    break
                witness.append(U)
                margins.append(lhs - rhs)
            else:
                witness.append(frozenset(triple))
                return Certificate("triangle_edge_join", EDGE_FIXED_1, (i, k),
                                   tuple(witness), min(margins))
    return None


def _negative_boundary_sum(ctx: _Context, S: set[int]) -> float:
    """``sum_{delta(S) & E^-} c + sum_{T_delta(S) & T^-} c`` (a nonpositive number)."""
    inst = ctx.inst
    edges, triples = ctx.boundary(S)
    return (sum(inst.edge_costs[k] for k in edges if inst.edge_costs[k] < 0)
            + sum(inst.triple_costs[x] for x in triples if inst.triple_costs[x] < 0))


def check_edge_subgraph_join(inst: Instance, edge: Edge,
                             slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ij = 1`` if ``c_ij`` is at most the negative boundary mass of ``{i, j}``."""
    ctx = _ctx(inst)
    i, j = canonical_edge(*edge)
    c = inst.edge_costs[ctx.eidx(i, j)]
    margin = _negative_boundary_sum(ctx, {i, j}) - c - slack
    if margin >= 0:
        return Certificate("edge_subgraph_join", EDGE_FIXED_1, (i, j),
                           (frozenset((i, j)),), margin)
    return None


def check_triplet_subgraph_join(inst: Instance, triple: Triple,
                                slack: float = 0.0) -> Optional[Certificate]:
    """``x*_ik = 1`` for an edge of ``ijk`` if the seven inequalities
    ``c_ij + c_ik <= 0`` (each pair), ``c_ij + c_ik + c_jk <= 0``,
    ``c_ij + c_ik + c_jk + c_ijk / 2 <= 0`` and
    ``c_ij + c_ik + c_ijk <= B``, ``c_jk + c_ik + c_ijk <= B`` hold, where
    ``B`` is the negative boundary mass of ``ijk``."""
    ctx = _ctx(inst)
    t = inst.triple_index[triple]
    cijk = inst.triple_costs[t]
    p, q, r = triple
    ec = inst.edge_costs
    cpq, cpr, cqr = ec[ctx.eidx(p, q)], ec[ctx.eidx(p, r)], ec[ctx.eidx(q, r)]
    s3 = cpq + cpr + cqr
    common = min(-(cpq + cpr), -(cpq + cqr), -(cpr + cqr), -s3, -(s3 + 0.5 * cijk)) - slack
    if common < 0:
        return None
    B = _negative_boundary_sum(ctx, set(triple))
    for j in triple:
        i, k = [v for v in triple if v != j]
        cij, cik, cjk = ec[ctx.eidx(i, j)], ec[ctx.eidx(i, k)], ec[ctx.eidx(j, k)]
        margin = min(common, B - (cij + cik + cijk) - slack, B - (cjk + cik + cijk) - slack)
        if margin >= 0:
            return Certificate("triplet_subgraph_join", EDGE_FIXED_1, (i, k),
                               (frozenset(triple),), margin)
    return None


def grow_join_candidate(inst: Instance, edge: Edge) -> list[int]:
    """Grow ``{i, j}`` by the smallest adjacent vertex that keeps every edge
    and triple inside the set nonpositive, until none qualifies."""
    U = set(edge)
    ec, tc = inst.edge_costs, inst.triple_costs
    while True:
        frontier = sorted({w for u in U for w in inst.neighbors[u]} - U)
        added = False
        for v in frontier:
            ok = True
            for u in U:
                k = inst.edge_index.get(canonical_edge(u, v))
                if k is None:
                    continue
                if ec[k] > 0:
                    ok = False
                    break
                for w, x in inst.edge_triples[k]:
                    if w in U and tc[x] > 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                U.add(v)
                added = True
                break
        if not added:
            return sorted(U)


def check_subset_join(inst: Instance, VH: Iterable[int],
                      slack: float = 0.0) -> Optional[Certificate]:
    """All edges inside ``VH`` are 1 in some optimum if every internal cost is
    nonpositive and the global min cut of ``G[VH]`` with folded weights
    ``-(c_uv + 1/2 sum_r c_uvr)`` is at least the negative boundary mass of
    ``VH`` in absolute value."""
    ctx = _ctx(inst)
    VH = sorted(set(VH))
    S = set(VH)
    local = {v: a for a, v in enumerate(VH)}
    weights: dict[int, float] = {}
    for v in VH:
        for k in inst.vertex_edges[v]:
            p, q = inst.edges[k]
            if p in S and q in S and k not in weights:
                if inst.edge_costs[k] > 0:
                    return None
                w = -inst.edge_costs[k]
                for r, x in inst.edge_triples[k]:
                    if r in S:
                        if inst.triple_costs[x] > 0:
                            return None
                        w -= 0.5 * inst.triple_costs[x]
                weights[k] = w
    if len(VH) < 2:
        return None
    graph = WeightedGraph(len(VH), [(local[inst.edges[k][0]], local[inst.edges[k][1]], w)
                                    for k, w in sorted(weights.items())])
    cut, _ = global_min_cut(graph)
    margin = cut + _negative_boundary_sum(ctx, S) - slack
    if margin >= 0:
        return Certificate("subset_join", SUBSET_JOINED, tuple(VH), (frozenset(VH),), margin)
    return None


def find_subset_join(inst: Instance, slack: float = 0.0) -> Optional[Certificate]:
    """Heuristic search for a jointly joinable vertex set.

    Seeds are edges with ``c_ij <= 0`` in canonical order; each seed is grown
    by :func:`grow_join_candidate` and the first candidate passing
    :func:`check_subset_join` is returned.
    """
    tried: set[tuple[int, ...]] = set()
    for e, c in zip(inst.edges, inst.edge_costs):
        if c > 0:
            continue
        cand = tuple(grow_join_candidate(inst, e))
        if cand in tried:
            continue
        tried.add(cand)
        cert = check_subset_join(inst, cand, slack)
        if cert is not None:
            return cert
    return None


EDGE_CHECKERS = {
    "edge_cut": check_edge_cut,
    "edge_join": check_edge_join,
    "edge_subgraph_join": check_edge_subgraph_join,
}

TRIPLE_CHECKERS = {
    "triplet_cut": check_triplet_cut,
    "triplet_join": check_triplet_join,
    "triangle_edge_join": check_triangle_edge_join,
    "triplet_subgraph_join": check_triplet_subgraph_join,
}
