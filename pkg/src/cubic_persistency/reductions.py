"""Reduction of constrained cut searches to minimum st-cuts.

The search

    min  sum_{pqr in T_delta(U)} w_pqr + sum_{pq in delta(U)} w_pq
    s.t. i in U,  U disjoint from V0

with nonnegative weights is solved in three steps: triple weights are folded
onto edges (each cut triple is cut on exactly two of its edges), the cut
problem is written as a quadratic pseudo-boolean function over the free
vertices, and that function, being submodular, is minimised as an st-cut.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graphalg import FlowNetwork, max_flow_min_cut

Edge = tuple[int, int]
Triple = tuple[int, int, int]


def fold_triples_into_edges(edges: Sequence[Edge], edge_weights: Sequence[float],
                            triples: Sequence[Triple],
                            triple_weights: Sequence[float]) -> list[float]:
    """``w'_pq = w_pq + 1/2 * sum_r w_pqr``, aligned with ``edges``."""
    index = {e: k for k, e in enumerate(edges)}
    folded = [float(w) for w in edge_weights]
    for (p, q, r), w in zip(triples, triple_weights):
        if w:
            half = 0.5 * w
            folded[index[(p, q)]] += half
            folded[index[(p, r)]] += half
            folded[index[(q, r)]] += half
    return folded


@dataclass
class Qubo:
    """``sum_pq quadratic[pq] y_p y_q + sum_p linear[p] y_p + constant``.

    ``variables`` lists the original vertex of each variable; quadratic keys
    are variable-index pairs ``(a, b)`` with ``a < b``.
    """

    variables: list[int]
    linear: list[float]
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    constant: float = 0.0

    def evaluate(self, y: Sequence[int]) -> float:
        total = self.constant
        for a, c in enumerate(self.linear):
            if y[a]:
                total += c
        for (a, b), c in self.quadratic.items():
            if y[a] and y[b]:
                total += c
        return total

    def brute_force_min(self) -> tuple[float, tuple[int, ...]]:
        from itertools import product

        best = None
        for y in product((0, 1), repeat=len(self.linear)):
            v = self.evaluate(y)
            if best is None or v < best[0]:
                best = (v, y)
        return best  # type: ignore[return-value]


def cut_problem_to_qubo(vertex_count: int, edges: Sequence[Edge],
                        weights: Sequence[float], source: int,
                        forbidden: Iterable[int]) -> Qubo:
    """Encode ``min_{U: source in U, U & forbidden = {}} w(delta(U))``.

    Variables are the vertices outside ``forbidden | {source}``; ``y_p = 1``
    means ``p in U``.  The Qubo minimum equals the constrained cut minimum.
    """
    forbidden = set(forbidden)
    if source in forbidden:
        raise ValueError("source must not be forbidden")
    variables = [v for v in range(vertex_count) if v != source and v not in forbidden]
    var_of = {v: a for a, v in enumerate(variables)}
    linear = [0.0] * len(variables)
    quadratic: dict[tuple[int, int], float] = {}
    constant = 0.0
    for (p, q), w in zip(edges, weights):
        if not w:
            continue
        a, b = var_of.get(p), var_of.get(q)
        # w * (y_p + y_q - 2 y_p y_q) with y_source = 1 and y_forbidden = 0
        if a is not None and b is not None:
            linear[a] += w
            linear[b] += w
            key = (a, b) if a < b else (b, a)
            quadratic[key] = quadratic.get(key, 0.0) - 2.0 * w
        elif a is not None or b is not None:
            free = a if a is not None else b
            other = q if a is not None else p
            if other == source:
                constant += w
                linear[free] -= w
            else:
                linear[free] += w
        elif source in (p, q):
            constant += w
    return Qubo(variables, linear, quadratic, constant)


@dataclass
class QuboNetwork:
    network: FlowNetwork
    constant: float
    variable_count: int


def qubo_to_flow(qubo: Qubo) -> QuboNetwork:
    """Build the st-network of a submodular Qubo.

    Node ``a`` is variable ``a``; the source and sink are the last two nodes.
    Min cut value plus ``constant`` equals the Qubo minimum, and ``y_a = 1``
    iff node ``a`` lies on the source side.
    """
    m = len(qubo.linear)
    s, t = m, m + 1
    net = FlowNetwork(m + 2, s, t)
    lin = list(qubo.linear)
    arcs = []
    for (a, b), c in sorted(qubo.quadratic.items()):
        if c > 0:
            raise ValueError(f"quadratic coefficient {c} > 0 on ({a}, {b}): not submodular")
        if c == 0:
            continue
        half = -0.5 * c
        lin[a] += 0.5 * c
        lin[b] += 0.5 * c
        arcs.append((a, b, half))
    constant = qubo.constant
    for a, c in enumerate(lin):
        if c > 0:
            net.add_arc(a, t, c)
        elif c < 0:
            net.add_arc(s, a, -c)
            constant += c
    for a, b, half in arcs:
        net.add_edge(a, b, half, half)
    return QuboNetwork(net, constant, m)


def solve_qubo(qubo: Qubo) -> tuple[float, tuple[int, ...]]:
    """Minimum and a minimiser of a submodular Qubo via max-flow."""
    qn = qubo_to_flow(qubo)
    value, side = max_flow_min_cut(qn.network)
    y = tuple(1 if a in side else 0 for a in range(qn.variable_count))
    return value + qn.constant, y


def min_cut_folded(vertex_count: int, edges: Sequence[Edge],
                   folded_weights: Sequence[float], source: int,
                   forbidden: Iterable[int]) -> tuple[float, frozenset[int]]:
    """Constrained min cut on already folded, nonnegative edge weights."""
    qubo = cut_problem_to_qubo(vertex_count, edges, folded_weights, source, forbidden)
    value, y = solve_qubo(qubo)
    U = frozenset([source] + [v for v, b in zip(qubo.variables, y) if b])
    return value, U


def min_constrained_cut(vertex_count: int, edges: Sequence[Edge],
                        pair_weights: Sequence[float], triples: Sequence[Triple],
                        triple_weights: Sequence[float], source: int,
                        forbidden: Iterable[int]) -> tuple[float, frozenset[int]]:
    """Minimise ``w(T_delta(U)) + w(delta(U))`` over ``U`` with ``source in U``
    and ``U`` disjoint from ``forbidden``.

    Returns the minimum and the smallest minimising ``U``.
    """
    forbidden = frozenset(forbidden)
    if not forbidden:
        raise ValueError("forbidden set must be nonempty")
    if any(w < 0 for w in pair_weights) or any(w < 0 for w in triple_weights):
        raise ValueError("weights must be nonnegative")
    folded = fold_triples_into_edges(edges, pair_weights, triples, triple_weights)
    return min_cut_folded(vertex_count, edges, folded, source, forbidden)


def cut_value(edges: Sequence[Edge], pair_weights: Sequence[float],
              triples: Sequence[Triple], triple_weights: Sequence[float],
              U: Iterable[int]) -> float:
    """``w(T_delta(U)) + w(delta(U))`` evaluated directly."""
    U = set(U)
    total = 0.0
    for (p, q), w in zip(edges, pair_weights):
        if (p in U) != (q in U):
            total += w
    for (p, q, r), w in zip(triples, triple_weights):
        inside = (p in U) + (q in U) + (r in U)
        if 0 < inside < 3:
            total += w
    return total
