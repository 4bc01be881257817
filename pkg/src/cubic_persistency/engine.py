"""Recursive application of the partial optimality conditions.

The engine keeps a worklist of subproblems.  Each subproblem is a working
instance together with, for every working vertex, the group of original
vertices merged into it.  One round on a subproblem is

1. subset separation; if it splits, each part becomes a new subproblem;
2. join conditions in a fixed order; the first certificate is applied by
   contraction and the round restarts;
3. otherwise edge cuts and triplet cuts are decided on the final instance
   and recorded together, and the subproblem is finished.

Joins are never attempted after a cut has been recorded on a subproblem:
the join maps need not respect fixed zeros.

All certificates are mapped to original edges and triples when recorded.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

from . import conditions as cond
from .instance import Edge, Instance, Triple, canonical_edge, canonical_triple
from .maps import contract_edge
from .oracle import ENUMERATION_BOUND, Fixations, verify_persistency

SEPARATION = "subset_separation"
CUT_CONDITIONS = ("edge_cut", "triplet_cut")
DEFAULT_JOIN_ORDER = (
    "subset_join",
    "edge_join",
    "triangle_edge_join",
    "edge_subgraph_join",
    "triplet_subgraph_join",
    "triplet_join",
)
ALL_CONDITIONS = (SEPARATION,) + DEFAULT_JOIN_ORDER + CUT_CONDITIONS

FREE = -1


@dataclass
class EngineConfig:
    """Which conditions run, in which join order, with which slack.

    ``time_limit`` is in seconds; ``None`` means unlimited.
    """

    enabled: frozenset[str] = frozenset(ALL_CONDITIONS)
    slack: float = 0.0
    join_order: tuple[str, ...] = DEFAULT_JOIN_ORDER
    time_limit: Optional[float] = None

    def __post_init__(self):
        self.enabled = frozenset(self.enabled)
        unknown = (self.enabled | set(self.join_order)) - set(ALL_CONDITIONS)
        if unknown:
            raise ValueError(f"unknown conditions: {', '.join(sorted(unknown))}")
        if set(self.join_order) & (set(CUT_CONDITIONS) | {SEPARATION}):
            raise ValueError("join order may only list join conditions")

    @classmethod
    def only(cls, names: Sequence[str], **kw) -> "EngineConfig":
        return cls(enabled=frozenset(names), **kw)


@dataclass(frozen=True)
class Event:
    """An applied certificate in original vertex labels.

    ``target`` lists, per target vertex of the working instance, its group
    of original vertices (for separations: the groups found).
    """

    condition: str
    kind: str
    target: tuple[tuple[int, ...], ...]
    witness: tuple[tuple[int, ...], ...]
    margin: float

    def line(self) -> str:
        target = ",".join("+".join(map(str, g)) for g in self.target)
        witness = "|".join(",".join(map(str, w)) for w in self.witness) or "-"
        return f"{self.condition} {target} {witness} {self.margin!r}"


@dataclass
class Residual:
    """A finished (or abandoned) subproblem."""

    instance: Instance
    groups: tuple[tuple[int, ...], ...]


@dataclass
class PersistencyState:
    instance: Instance
    edge_status: list[int]
    triples_zero: set[Triple] = field(default_factory=set)
    triples_one: set[Triple] = field(default_factory=set)
    representative: list[int] = field(default_factory=list)
    component: list[int] = field(default_factory=list)
    offset: float = 0.0
    events: list[Event] = field(default_factory=list)
    residuals: list[Residual] = field(default_factory=list)
    timed_out: bool = False
    runtime_ns: int = 0

    @classmethod
    def empty(cls, instance: Instance) -> "PersistencyState":
        n = instance.vertex_count
        return cls(instance, [FREE] * len(instance.edges),
                   representative=list(range(n)), component=[0] * n,
                   offset=instance.offset)

    # -- bookkeeping ----------------------------------------------------------

    def _fix_edges_between(self, A: Sequence[int], B: Sequence[int], value: int) -> None:
        index = self.instance.edge_index
        for a, b in product(A, B):
            k = index.get(canonical_edge(a, b))
            if k is None:
                continue
            if self.edge_status[k] not in (FREE, value):
                raise AssertionError(f"edge {canonical_edge(a, b)} fixed both ways")
            self.edge_status[k] = value

    def _triples_across(self, A, B, C) -> list[Triple]:
        index = self.instance.triple_index
        out = []
        for a, b, c in product(A, B, C):
            t = canonical_triple(a, b, c)
            if t in index:
                out.append(t)
        return out

    def fixed_edge_count(self) -> int:
        return sum(s != FREE for s in self.edge_status)

    def fixed_triple_count(self) -> int:
        inst = self.instance
        idx = inst.edge_index
        count = 0
        for t in inst.triples:
            if t in self.triples_zero or t in self.triples_one:
                count += 1
                continue
            p, q, r = t
            if all(self.edge_status[idx[e]] != FREE for e in ((p, q), (p, r), (q, r))):
                count += 1
        return count

    def event_log(self) -> str:
        return "".join(e.line() + "\n" for e in self.events)


def _expand(groups, vertices) -> tuple[int, ...]:
    return tuple(sorted(v for x in vertices for v in groups[x]))


class _Reducer:
    def __init__(self, instance: Instance, config: EngineConfig):
        self.config = config
        self.state = PersistencyState.empty(instance)
        self.deadline = (None if config.time_limit is None
                         else time.perf_counter() + config.time_limit)

    def expired(self) -> bool:
        return self.deadline is not None and time.perf_counter() > self.deadline

    def on(self, name: str) -> bool:
        return name in self.config.enabled

    def record(self, cert: cond.Certificate, groups, target_vertices) -> None:
        self.state.events.append(Event(
            cert.condition, cert.kind,
            tuple(groups[v] for v in target_vertices),
            tuple(_expand(groups, w) for w in cert.witness),
            cert.margin))

    def contract(self, inst: Instance, groups: list, pair: Edge):
        """Contract a working edge, fixing original edges between the groups to 1."""
        a, b = pair
        self.state._fix_edges_between(groups[a], groups[b], 1)
        res = contract_edge(inst, pair)
        merged: list[list[int]] = [[] for _ in range(res.instance.vertex_count)]
        for v, g in enumerate(groups):
            merged[res.vertex_map[v]].extend(g)
        self.state.offset += res.instance.offset
        reduced = Instance(res.instance.vertex_count,
                           dict(zip(res.instance.edges, res.instance.edge_costs)),
                           dict(zip(res.instance.triples, res.instance.triple_costs)), 0.0)
        return reduced, [tuple(sorted(g)) for g in merged], res.vertex_map

    def contract_set(self, inst: Instance, groups, VH: Sequence[int]):
        """Contract a spanning tree of ``VH``, edges in breadth-first order from its lowest vertex."""
        S = set(VH)
        root = min(S)
        seen = {root}
        queue = deque([root])
        tree = []
        while queue:
            u = queue.popleft()
            for w in inst.neighbors[u]:
                if w in S and w not in seen:
                    seen.add(w)
                    tree.append((u, w))
                    queue.append(w)
        if seen != S:
            raise AssertionError("joined set is not connected")
        where = list(range(inst.vertex_count))
        for u, w in tree:
            inst, groups, vmap = self.contract(inst, groups, canonical_edge(where[u], where[w]))
            where = [vmap[x] for x in where]
        return inst, groups

    def try_joins(self, inst: Instance, groups):
        """Apply the first join certificate found; None if no join fires."""
        slack = self.config.slack
        for name in self.config.join_order:
            if not self.on(name):
                continue
            if self.expired():
                return None
            if name == "subset_join":
                cert = cond.find_subset_join(inst, slack)
                if cert is not None:
                    self.record(cert, groups, cert.target)
                    return self.contract_set(inst, groups, cert.target)
                continue
            if name in cond.EDGE_CHECKERS:
                check = cond.EDGE_CHECKERS[name]
                for e in inst.edges:
                    cert = check(inst, e, slack)
                    if cert is not None:
                        self.record(cert, groups, cert.target)
                        return self.contract(inst, groups, cert.target)[:2]
                continue
            check = cond.TRIPLE_CHECKERS[name]
            for t in inst.triples:
                cert = check(inst, t, slack)
                if cert is None:
                    continue
                self.record(cert, groups, cert.target)
                if cert.kind == cond.TRIPLE_JOINED:
                    i, j, k = t
                    self.state.triples_one.update(self._across(groups, t))
                    inst, groups, vmap = self.contract(inst, groups, (i, j))
                    return self.contract(inst, groups, canonical_edge(vmap[i], vmap[k]))[:2]
                return self.contract(inst, groups, cert.target)[:2]
        return None

    def _across(self, groups, t) -> list[Triple]:
        return self.state._triples_across(*(groups[v] for v in t))

    def apply_cuts(self, inst: Instance, groups) -> None:
        slack = self.config.slack
        found = []
        if self.on("edge_cut"):
            for e in inst.edges:
                if self.expired():
                    self.state.timed_out = True
                    break
                cert = cond.check_edge_cut(inst, e, slack)
                if cert is not None:
                    found.append(cert)
        if self.on("triplet_cut") and not self.state.timed_out:
            for t in inst.triples:
                if self.expired():
                    self.state.timed_out = True
                    break
                cert = cond.check_triplet_cut(inst, t, slack)
                if cert is not None:
                    found.append(cert)
        # all certificates were decided on the same instance and apply jointly
        for cert in found:
            self.record(cert, groups, cert.target)
            if cert.kind == cond.EDGE_FIXED_0:
                p, q = cert.target
                self.state._fix_edges_between(groups[p], groups[q], 0)
            else:
                self.state.triples_zero.update(self._across(groups, cert.target))

    def separate(self, inst: Instance, groups):
        """Split by subset separation; returns the parts or None."""
        parts, cert = cond.check_subset_separation(inst)
        if cert is None:
            return None
        self.state.events.append(Event(
            "subset_separation", cond.SEPARATION,
            tuple(_expand(groups, part) for part in parts), (), cert.margin))
        for p, q in cert.target:
            self.state._fix_edges_between(groups[p], groups[q], 0)
        return [(inst.induced(part), [groups[v] for v in part]) for part in parts]

    def run(self) -> PersistencyState:
        start = time.perf_counter_ns()
        orig = self.state.instance
        plain = orig.induced(range(orig.vertex_count))
        work = deque([(plain, [(v,) for v in range(orig.vertex_count)])])
        while work:
            inst, groups = work.popleft()
            if self.state.timed_out or self.expired():
                self.state.timed_out = True
                self.finish(inst, groups)
                continue
            while True:
                if inst.vertex_count == 1:
                    self.finish(inst, groups)
                    break
                if self.on(SEPARATION):
                    parts = self.separate(inst, groups)
                    if parts is not None:
                        work.extend(parts)
                        break
                step = self.try_joins(inst, groups)
                if self.expired():
                    self.state.timed_out = True
                    if step is not None:
                        inst, groups = step
                    self.finish(inst, groups)
                    break
                if step is not None:
                    inst, groups = step
                    continue
                self.apply_cuts(inst, groups)
                self.finish(inst, groups)
                break
        self.state.runtime_ns = time.perf_counter_ns() - start
        return self.state

    def finish(self, inst: Instance, groups) -> None:
        groups = tuple(tuple(g) for g in groups)
        for g in groups:
            for v in g:
                self.state.representative[v] = g[0]
        self.state.residuals.append(Residual(inst, groups))


def reduce(instance: Instance, config: Optional[EngineConfig] = None) -> PersistencyState:
    """Run the persistency engine; the instance itself is not modified."""
    state = _Reducer(instance, config or EngineConfig()).run()
    # residual order is the order subproblems finished; components are labelled
    # by the smallest original vertex of each residual
    for res in state.residuals:
        label = min(v for g in res.groups for v in g)
        for g in res.groups:
            for v in g:
                state.component[v] = label
    return state


def stats(state: PersistencyState) -> dict:
    """Fixed edge and triple fractions of the original instance and the runtime."""
    inst = state.instance
    m, t = len(inst.edges), len(inst.triples)
    return {
        "fixed_edge_fraction": state.fixed_edge_count() / m if m else 1.0,
        "fixed_triple_fraction": state.fixed_triple_count() / t if t else 1.0,
        "runtime_ns": state.runtime_ns,
    }


def stats_line(state: PersistencyState) -> str:
    inst = state.instance
    return (f"edges {state.fixed_edge_count()}/{len(inst.edges)} "
            f"triples {state.fixed_triple_count()}/{len(inst.triples)} "
            f"runtime_ns {state.runtime_ns}"
            + (" timed_out" if state.timed_out else ""))


def to_fixations(state: PersistencyState) -> Fixations:
    inst = state.instance
    edges = {e: s for e, s in zip(inst.edges, state.edge_status) if s != FREE}
    return Fixations(edges, set(state.triples_zero), set(state.triples_one))


def verify(state: PersistencyState, bound: int = ENUMERATION_BOUND) -> bool:
    """True iff some optimum of the original instance obeys every fixation."""
    return verify_persistency(state.instance, to_fixations(state), bound)


def reduced_instance(state: PersistencyState) -> tuple[Instance, list[tuple[int, ...]]]:
    """Disjoint union of the residual subproblems, with the accumulated offset.

    Its minimum equals the minimum of the original instance over labelings
    consistent with the joins and separations (cut fixations are not encoded).
    Returns the instance and the original vertex group of each vertex.
    """
    ec: dict[Edge, float] = {}
    tc: dict[Triple, float] = {}
    groups: list[tuple[int, ...]] = []
    for res in state.residuals:
        base = len(groups)
        groups.extend(res.groups)
        for (p, q), c in zip(res.instance.edges, res.instance.edge_costs):
            ec[(base + p, base + q)] = c
        for (p, q, r), c in zip(res.instance.triples, res.instance.triple_costs):
            tc[(base + p, base + q, base + r)] = c
    return Instance(max(len(groups), 1), ec, tc, state.offset), groups


def fixed_labeling(state: PersistencyState) -> Optional[tuple[int, ...]]:
    """The labeling determined by the fixations, or None while any edge is free."""
    if any(s == FREE for s in state.edge_status):
        return None
    return tuple(state.edge_status)
