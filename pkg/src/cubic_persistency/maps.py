"""Elementary cut and join maps, and contraction of a joined edge."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graphalg import DisjointSets
from .instance import Edge, Instance, InstanceError, Labeling, canonical_edge, canonical_triple


def cut_map(instance: Instance, labeling: Sequence[int], U: Iterable[int]) -> Labeling:
    """Set every edge with exactly one endpoint in ``U`` to 0."""
    U = set(U)
    return tuple(0 if (p in U) != (q in U) else xe
                 for (p, q), xe in zip(instance.edges, labeling))


def join_map(instance: Instance, labeling: Sequence[int], U: Iterable[int]) -> Labeling:
    """Join ``U``: edges inside ``U`` become 1, then close along 1-paths.

    An edge becomes 1 iff its endpoints are connected by a path whose edges
    are 1-labeled or lie inside ``U``.
    """
    U = set(U)
    ds = DisjointSets(instance.vertex_count)
    for (p, q), xe in zip(instance.edges, labeling):
        if xe or (p in U and q in U):
            ds.union(p, q)
    return tuple(1 if xe or ds.same(p, q) else 0
                 for (p, q), xe in zip(instance.edges, labeling))


@dataclass(frozen=True)
class ContractionResult:
    """Result of merging vertex ``pair[1]`` into ``pair[0]``.

    ``vertex_map[v]`` is the index of old vertex ``v`` in ``instance``.
    """

    instance: Instance
    vertex_map: tuple[int, ...]
    pair: Edge


def contract_edge(instance: Instance, edge: Edge) -> ContractionResult:
    """Contract ``ij``; the optimum over ``x_ij = 1`` equals the reduced optimum.

    The smaller endpoint is kept; the larger one is removed and higher
    vertices shift down by one.  Edge costs ``c_pi, c_pj`` and the triple
    ``c_pij`` sum onto the new edge, triples ``pqi, pqj`` sum onto ``pqi``,
    and ``c_ij`` moves into the offset.
    """
    i, j = canonical_edge(*edge)
    if (i, j) not in instance.edge_index:
        raise InstanceError(f"({i}, {j}) is not an edge")
    vmap = tuple(v if v < j else (i if v == j else v - 1)
                 for v in range(instance.vertex_count))

    ec: dict[Edge, float] = {}
    for (p, q), c in zip(instance.edges, instance.edge_costs):
        if (p, q) == (i, j):
            continue
        e = canonical_edge(vmap[p], vmap[q])
        ec[e] = ec.get(e, 0.0) + c
    tc: dict[tuple[int, int, int], float] = {}
    for (p, q, r), c in zip(instance.triples, instance.triple_costs):
        a, b, d = vmap[p], vmap[q], vmap[r]
        if len({a, b, d}) == 2:
            # triple pij: its cost moves onto the merged edge
            e = canonical_edge(*{a, b, d})
            ec[e] += c
        else:
            t = canonical_triple(a, b, d)
            tc[t] = tc.get(t, 0.0) + c
    reduced = Instance(instance.vertex_count - 1, ec, tc,
                       instance.offset + instance.edge_costs[instance.edge_index[(i, j)]])
    return ContractionResult(reduced, vmap, (i, j))
