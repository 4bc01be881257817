"""Instances of cubic correlation clustering, labelings, partitions and I/O.

An instance is a graph ``G = (V, E)`` on dense vertices ``0..n-1`` together
with a set ``T`` of 3-cliques, real costs on edges and triples, and a constant
offset.  A feasible edge labeling ``x`` assigns 1 to an edge iff both
endpoints share a cluster; clusters are blocks of a partition whose blocks
induce connected subgraphs.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, int]
Triple = tuple[int, int, int]
Labeling = tuple[int, ...]


class InstanceError(ValueError):
    """Raised for malformed instances, labelings and partitions."""


class FormatError(InstanceError):
    """Raised when an instance file cannot be parsed."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno


def pos(r: float) -> float:
    """Positive part ``max(0, r)``."""
    return r if r > 0 else 0.0


def neg(r: float) -> float:
    """Negative part ``max(0, -r)``."""
    return -r if r < 0 else 0.0


def canonical_edge(p: int, q: int) -> Edge:
    return (p, q) if p < q else (q, p)


def canonical_triple(p: int, q: int, r: int) -> Triple:
    return tuple(sorted((p, q, r)))  # type: ignore[return-value]


class Instance:
    """Immutable cubic correlation clustering instance.

    Edges and triples are stored canonically sorted and iterate in ascending
    lexicographic order.  ``edge_costs[e]`` is the cost of ``edges[e]``.
    """

    __slots__ = (
        "vertex_count", "edges", "edge_costs", "triples", "triple_costs",
        "offset", "edge_index", "triple_index", "neighbors",
        "edge_triples", "vertex_edges", "_cache",
    )

    def __init__(self, vertex_count: int, edge_costs: Mapping[Edge, float],
                 triple_costs: Mapping[Triple, float] | None = None,
                 offset: float = 0.0):
        if vertex_count < 1:
            raise InstanceError("vertex_count must be positive")
        triple_costs = triple_costs or {}
        ec: dict[Edge, float] = {}
        for (p, q), c in edge_costs.items():
            if not (0 <= p < vertex_count and 0 <= q < vertex_count) or p == q:
                raise InstanceError(f"invalid edge ({p}, {q})")
            e = canonical_edge(p, q)
            if e in ec:
                raise InstanceError(f"duplicate edge {e}")
            ec[e] = float(c)
        tc: dict[Triple, float] = {}
        for t, c in triple_costs.items():
            if len(set(t)) != 3 or not all(0 <= v < vertex_count for v in t):
                raise InstanceError(f"invalid triple {tuple(t)}")
            t = canonical_triple(*t)
            if t in tc:
                raise InstanceError(f"duplicate triple {t}")
            p, q, r = t
            if (p, q) not in ec or (p, r) not in ec or (q, r) not in ec:
                raise InstanceError(f"triple {t} is not a 3-clique of the graph")
            tc[t] = float(c)

        self.vertex_count = vertex_count
        self.edges: tuple[Edge, ...] = tuple(sorted(ec))
        self.edge_costs: tuple[float, ...] = tuple(ec[e] for e in self.edges)
        self.triples: tuple[Triple, ...] = tuple(sorted(tc))
        self.triple_costs: tuple[float, ...] = tuple(tc[t] for t in self.triples)
        self.offset = float(offset)
        self.edge_index = {e: k for k, e in enumerate(self.edges)}
        self.triple_index = {t: k for k, t in enumerate(self.triples)}

        nbrs: list[list[int]] = [[] for _ in range(vertex_count)]
        vedges: list[list[int]] = [[] for _ in range(vertex_count)]
        for k, (p, q) in enumerate(self.edges):
            nbrs[p].append(q)
            nbrs[q].append(p)
            vedges[p].append(k)
            vedges[q].append(k)
        self.neighbors = tuple(tuple(sorted(a)) for a in nbrs)
        self.vertex_edges = tuple(tuple(a) for a in vedges)

        # per edge: (third vertex, triple index) for each triple containing it
        et: list[list[tuple[int, int]]] = [[] for _ in self.edges]
        for k, (p, q, r) in enumerate(self.triples):
            et[self.edge_index[(p, q)]].append((r, k))
            et[self.edge_index[(p, r)]].append((q, k))
            et[self.edge_index[(q, r)]].append((p, k))
        self.edge_triples = tuple(tuple(a) for a in et)
        self._cache: dict = {}

    def __repr__(self) -> str:
        return (f"Instance(n={self.vertex_count}, |E|={len(self.edges)}, "
                f"|T|={len(self.triples)}, offset={self.offset})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.vertex_count == other.vertex_count
                and self.edges == other.edges
                and self.edge_costs == other.edge_costs
                and self.triples == other.triples
                and self.triple_costs == other.triple_costs
                and self.offset == other.offset)

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges, self.edge_costs,
                     self.triples, self.triple_costs, self.offset))

    def edge_cost(self, p: int, q: int) -> float:
        return self.edge_costs[self.edge_index[canonical_edge(p, q)]]

    def triple_cost(self, p: int, q: int, r: int) -> float:
        return self.triple_costs[self.triple_index[canonical_triple(p, q, r)]]

    def has_edge(self, p: int, q: int) -> bool:
        return canonical_edge(p, q) in self.edge_index

    def degree(self) -> int:
        """Maximum vertex degree."""
        return max((len(a) for a in self.neighbors), default=0)

    def triple_degree(self) -> int:
        """Maximum number of triples sharing an edge."""
        return max((len(a) for a in self.edge_triples), default=0)

    def edge_triple_sums(self) -> tuple[float, ...]:
        """Per edge, the summed cost of all triples containing it."""
        return tuple(sum(self.triple_costs[k] for _, k in a)
                     for a in self.edge_triples)

    def induced(self, vertices: Sequence[int], offset: float = 0.0) -> "Instance":
        """Sub-instance induced by ``vertices``, renumbered in the given order."""
        local = {v: k for k, v in enumerate(vertices)}
        ec = {}
        for (p, q), c in zip(self.edges, self.edge_costs):
            if p in local and q in local:
                ec[canonical_edge(local[p], local[q])] = c
        tc = {}
        for (p, q, r), c in zip(self.triples, self.triple_costs):
            if p in local and q in local and r in local:
                tc[canonical_triple(local[p], local[q], local[r])] = c
        return Instance(len(vertices), ec, tc, offset)


def build_instance(vertex_count: int,
                   edge_cost_list: Iterable[tuple[int, int, float]],
                   triple_cost_list: Iterable[tuple[int, int, int, float]] = (),
                   offset: float = 0.0) -> Instance:
    """Build an :class:`Instance` from ``(p, q, c)`` and ``(p, q, r, c)`` lists.

    Raises :class:`InstanceError` on duplicate edges or triples, invalid
    vertices, or triples that are not 3-cliques of the edge set.
    """
    ec: dict[Edge, float] = {}
    for p, q, c in edge_cost_list:
        e = canonical_edge(p, q)
        if e in ec:
            raise InstanceError(f"duplicate edge {e}")
        ec[e] = c
    tc: dict[Triple, float] = {}
    for p, q, r, c in triple_cost_list:
        t = canonical_triple(p, q, r)
        if t in tc:
            raise InstanceError(f"duplicate triple {t}")
        tc[t] = c
    return Instance(vertex_count, ec, tc, offset)


# -- labelings and partitions -------------------------------------------------

def _check_dim(instance: Instance, labeling: Sequence[int]) -> None:
    if len(labeling) != len(instance.edges):
        raise InstanceError(
            f"labeling has {len(labeling)} entries, instance has "
            f"{len(instance.edges)} edges")


def objective_unchecked(instance: Instance, labeling: Sequence[int]) -> float:
    """Objective value without the feasibility check."""
    total = instance.offset
    for c, xe in zip(instance.edge_costs, labeling):
        if xe:
            total += c
    idx = instance.edge_index
    for (p, q, r), c in zip(instance.triples, instance.triple_costs):
        if labeling[idx[(p, q)]] and labeling[idx[(p, r)]] and labeling[idx[(q, r)]]:
            total += c
    return total


def objective(instance: Instance, labeling: Sequence[int]) -> float:
    """``c_0 + sum c_pq x_pq + sum c_pqr x_pq x_pr x_qr`` for a feasible labeling."""
    _check_dim(instance, labeling)
    if not is_feasible(instance, labeling):
        raise InstanceError("objective is only defined for feasible labelings")
    return objective_unchecked(instance, labeling)


def _components_of_ones(instance: Instance, labeling: Sequence[int]) -> list[int]:
    from .graphalg import DisjointSets

    ds = DisjointSets(instance.vertex_count)
    for (p, q), xe in zip(instance.edges, labeling):
        if xe:
            ds.union(p, q)
    return [ds.find(v) for v in range(instance.vertex_count)]


def is_feasible(instance: Instance, labeling: Sequence[int]) -> bool:
    """True iff the labeling satisfies all cycle inequalities.

    Equivalently: every edge inside a connected component of the 1-labeled
    subgraph is labeled 1.
    """
    _check_dim(instance, labeling)
    if any(xe not in (0, 1) for xe in labeling):
        return False
    comp = _components_of_ones(instance, labeling)
    return all(xe or comp[p] != comp[q]
               for (p, q), xe in zip(instance.edges, labeling))


def labeling_from_blocks(instance: Instance, block_of: Sequence[int]) -> Labeling:
    """Labeling induced by a block id per vertex (no connectivity check)."""
    return tuple(1 if block_of[p] == block_of[q] else 0 for p, q in instance.edges)


@dataclass(frozen=True)
class Partition:
    """A clustering: disjoint nonempty blocks covering ``0..n-1``."""

    blocks: tuple[frozenset[int], ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bs = [frozenset(b) for b in blocks]
        return cls(tuple(sorted(bs, key=min)))

    def block_ids(self, n: int) -> list[int]:
        ids = [-1] * n
        for k, b in enumerate(self.blocks):
            for v in b:
                if not 0 <= v < n or ids[v] != -1:
                    raise InstanceError(f"vertex {v} invalid or in two blocks")
                ids[v] = k
        if -1 in ids:
            raise InstanceError("partition does not cover all vertices")
        return ids


def _block_connected(instance: Instance, block: frozenset[int]) -> bool:
    start = min(block)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in instance.neighbors[v]:
            if w in block and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(block)


def labeling_from_partition(instance: Instance, partition: Partition) -> Labeling:
    ids = partition.block_ids(instance.vertex_count)
    for b in partition.blocks:
        if not b:
            raise InstanceError("empty block")
        if not _block_connected(instance, b):
            raise InstanceError(f"block {sorted(b)} is not connected in the graph")
    return labeling_from_blocks(instance, ids)


def partition_from_labeling(instance: Instance, labeling: Sequence[int]) -> Partition:
    if not is_feasible(instance, labeling):
        raise InstanceError("labeling is infeasible")
    comp = _components_of_ones(instance, labeling)
    groups: dict[int, set[int]] = {}
    for v, c in enumerate(comp):
        groups.setdefault(c, set()).add(v)
    return Partition.from_blocks(groups.values())


def partition_objective(instance: Instance, partition: Partition) -> float:
    """Set-sum form: offset plus costs of edges and triples inside blocks."""
    total = instance.offset
    for block in partition.blocks:
        for (p, q), c in zip(instance.edges, instance.edge_costs):
            if p in block and q in block:
                total += c
        for (p, q, r), c in zip(instance.triples, instance.triple_costs):
            if p in block and q in block and r in block:
                total += c
    return total


# -- set notation -------------------------------------------------------------

def boundary_edges(instance: Instance, U: Iterable[int],
                   U2: Iterable[int] | None = None) -> list[Edge]:
    """``delta(U, U')``; with ``U2`` omitted, ``delta(U) = delta(U, V \\ U)``."""
    U = set(U)
    if U2 is None:
        return [(p, q) for p, q in instance.edges if (p in U) != (q in U)]
    U2 = set(U2)
    if U & U2:
        raise InstanceError("vertex sets overlap")
    return [(p, q) for p, q in instance.edges
            if (p in U and q in U2) or (q in U and p in U2)]


def triples_cut_by(instance: Instance, edge_set: Iterable[Edge]) -> list[Triple]:
    """``T_{E'}``: triples containing at least one edge of ``edge_set``."""
    ks: set[int] = set()
    for e in edge_set:
        for _, k in instance.edge_triples[instance.edge_index[canonical_edge(*e)]]:
            ks.add(k)
    return [instance.triples[k] for k in sorted(ks)]


def triples_between(instance: Instance, U1: Iterable[int], U2: Iterable[int],
                    U3: Iterable[int]) -> list[Triple]:
    """``T_{UU'U''}``: triples with one vertex in each of the three sets."""
    from itertools import permutations

    sets = (set(U1), set(U2), set(U3))
    out = []
    for t in instance.triples:
        if any(a in sets[0] and b in sets[1] and c in sets[2]
               for a, b, c in permutations(t)):
            out.append(t)
    return out


def positive_edges(instance: Instance) -> list[Edge]:
    return [e for e, c in zip(instance.edges, instance.edge_costs) if c > 0]


def negative_edges(instance: Instance) -> list[Edge]:
    return [e for e, c in zip(instance.edges, instance.edge_costs) if c < 0]


def positive_triples(instance: Instance) -> list[Triple]:
    return [t for t, c in zip(instance.triples, instance.triple_costs) if c > 0]


def negative_triples(instance: Instance) -> list[Triple]:
    return [t for t, c in zip(instance.triples, instance.triple_costs) if c < 0]


# -- multicut view ------------------------------------------------------------

@dataclass(frozen=True)
class MulticutInstance:
    """Cubic multicut view over cut indicators ``z = 1 - x`` and ``y = 1 - xxx``.

    ``objective(z, y) = sum y_cost * y + sum z_cost * z + offset`` with the
    costs of the source instance, and the clustering objective equals
    ``constant - objective``.  Minimising the clustering objective therefore
    maximises this one; flip the cost signs to obtain a minimisation.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    z_costs: tuple[float, ...]
    triples: tuple[Triple, ...]
    y_costs: tuple[float, ...]
    offset: float
    constant: float

    def objective(self, z: Sequence[int], y: Sequence[int]) -> float:
        return (sum(c * v for c, v in zip(self.y_costs, y))
                + sum(c * v for c, v in zip(self.z_costs, z)) + self.offset)

    def image(self, instance: Instance, labeling: Sequence[int]) -> tuple[Labeling, Labeling]:
        """``(z, y)`` image of a clustering labeling."""
        idx = instance.edge_index
        z = tuple(1 - v for v in labeling)
        y = tuple(1 - (labeling[idx[(p, q)]] * labeling[idx[(p, r)]] * labeling[idx[(q, r)]])
                  for p, q, r in instance.triples)
        return z, y


def to_cubic_multicut(instance: Instance) -> MulticutInstance:
    constant = (sum(instance.triple_costs) + sum(instance.edge_costs)
                + 2.0 * instance.offset)
    return MulticutInstance(
        instance.vertex_count, instance.edges, instance.edge_costs,
        instance.triples, instance.triple_costs, instance.offset, constant)


# -- text format ----------------------------------------------------------------

def _fmt(v: float) -> str:
    return repr(float(v))


def dumps_instance(instance: Instance) -> str:
    out = io.StringIO()
    out.write(f"CCC {instance.vertex_count}\n")
    out.write(f"c {_fmt(instance.offset)}\n")
    for (p, q), c in zip(instance.edges, instance.edge_costs):
        out.write(f"e {p} {q} {_fmt(c)}\n")
    for (p, q, r), c in zip(instance.triples, instance.triple_costs):
        out.write(f"t {p} {q} {r} {_fmt(c)}\n")
    return out.getvalue()


def loads_instance(text: str) -> Instance:
    """Parse the ``CCC`` text format; errors name the first offending line."""
    n = None
    offset = 0.0
    ec: dict[Edge, float] = {}
    tc: dict[Triple, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if n is None:
                if parts[0] != "CCC" or len(parts) != 2:
                    raise FormatError(lineno, raw, "expected header 'CCC <vertex_count>'")
                n = int(parts[1])
                if n < 1:
                    raise FormatError(lineno, raw, "vertex count must be positive")
            elif parts[0] == "c" and len(parts) == 2:
                offset = float(parts[1])
            elif parts[0] == "e" and len(parts) == 4:
                p, q = int(parts[1]), int(parts[2])
                if p == q or not (0 <= p < n and 0 <= q < n):
                    raise FormatError(lineno, raw, "invalid edge endpoints")
                e = canonical_edge(p, q)
                if e in ec:
                    raise FormatError(lineno, raw, "duplicate edge")
                ec[e] = float(parts[3])
            elif parts[0] == "t" and len(parts) == 5:
                p, q, r = int(parts[1]), int(parts[2]), int(parts[3])
                if len({p, q, r}) != 3 or not all(0 <= v < n for v in (p, q, r)):
                    raise FormatError(lineno, raw, "invalid triple vertices")
                t = canonical_triple(p, q, r)
                if t in tc:
                    raise FormatError(lineno, raw, "duplicate triple")
                a, b, c = t
                if (a, b) not in ec or (a, c) not in ec or (b, c) not in ec:
                    raise FormatError(lineno, raw, "triple is not a 3-clique of the edges listed so far")
                tc[t] = float(parts[4])
            else:
                raise FormatError(lineno, raw, "unrecognized line")
        except ValueError as err:
            if isinstance(err, FormatError):
                raise
            raise FormatError(lineno, raw, "malformed number") from None
    if n is None:
        raise FormatError(0, "", "missing header")
    return Instance(n, ec, tc, offset)


def write_instance(instance: Instance, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_instance(instance))


def read_instance(path: str | os.PathLike) -> Instance:
    with open(path) as fh:
        return loads_instance(fh.read())


def dumps_multicut(mc: MulticutInstance) -> str:
    out = io.StringIO()
    out.write(f"CMC {mc.vertex_count}\n")
    out.write(f"C {_fmt(mc.constant)}\n")
    out.write(f"c {_fmt(mc.offset)}\n")
    for (p, q), c in zip(mc.edges, mc.z_costs):
        out.write(f"z {p} {q} {_fmt(c)}\n")
    for (p, q, r), c in zip(mc.triples, mc.y_costs):
        out.write(f"y {p} {q} {r} {_fmt(c)}\n")
    return out.getvalue()

