"""Brute-force exact solver for desk-scale instances.

Feasible labelings are enumerated as restricted growth strings (set
partitions of the vertex set) whose blocks induce connected subgraphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .instance import Edge, Instance, Labeling, Triple, labeling_from_blocks, objective_unchecked

ENUMERATION_BOUND = 12


class TooLargeError(ValueError):
    """Raised when an instance exceeds the enumeration bound."""


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """All set partitions of ``0..n-1`` as block-id lists, ``a[0] = 0`` and
    ``a[k] <= 1 + max(a[:k])``."""
    if n == 0:
        yield []
        return
    a = [0] * n
    m = [0] * n  # m[k] = max(a[:k+1])

    def rec(k: int):
        if k == n:
            yield list(a)
            return
        for b in range(m[k - 1] + 2):
            a[k] = b
            m[k] = max(m[k - 1], b)
            yield from rec(k + 1)

    yield from rec(1)


def _blocks_connected(instance: Instance, ids: Sequence[int]) -> bool:
    seen = [False] * instance.vertex_count
    roots: set[int] = set()
    for v in range(instance.vertex_count):
        if seen[v]:
            continue
        if ids[v] in roots:
            return False
        roots.add(ids[v])
        seen[v] = True
        stack = [v]
        while stack:
            u = stack.pop()
            for w in instance.neighbors[u]:
                if not seen[w] and ids[w] == ids[u]:
                    seen[w] = True
                    stack.append(w)
    return True


def _guard(instance: Instance, bound: int) -> None:
    if instance.vertex_count > bound:
        raise TooLargeError(
            f"{instance.vertex_count} vertices exceed the enumeration bound {bound}")


def enumerate_feasible(instance: Instance, bound: int = ENUMERATION_BOUND) -> Iterator[Labeling]:
    """Every feasible labeling exactly once."""
    _guard(instance, bound)
    for ids in restricted_growth_strings(instance.vertex_count):
        if _blocks_connected(instance, ids):
            yield labeling_from_blocks(instance, ids)


@dataclass
class ExactResult:
    minimum: float
    argmins: list[Labeling]
    exact: bool = True


def _integral(instance: Instance) -> bool:
    return all(float(c).is_integer() for c in
               (*instance.edge_costs, *instance.triple_costs, instance.offset))


def _evaluated(instance: Instance, bound: int) -> list[tuple[float, Labeling]]:
    key = ("oracle_values", bound)
    if key not in instance._cache:
        instance._cache[key] = [(objective_unchecked(instance, x), x)
                                for x in enumerate_feasible(instance, bound)]
    return instance._cache[key]


def solve_exact(instance: Instance, bound: int = ENUMERATION_BOUND) -> ExactResult:
    """Exact minimum and all minimising labelings.

    Integer costs compare exactly; otherwise within ``1e-9`` and the result
    is flagged as not exact.
    """
    values = _evaluated(instance, bound)
    best = min(v for v, _ in values)
    exact = _integral(instance)
    tol = 0.0 if exact else 1e-9
    argmins = [x for v, x in values if v <= best + tol]
    return ExactResult(best, argmins, exact)


@dataclass
class Fixations:
    """Persistency claims to verify: edge values and triple products."""

    edge_values: dict[Edge, int] = field(default_factory=dict)
    triples_zero: set[Triple] = field(default_factory=set)
    triples_one: set[Triple] = field(default_factory=set)

    def satisfied_by(self, instance: Instance, labeling: Sequence[int]) -> bool:
        idx = instance.edge_index
        for e, val in self.edge_values.items():
            if labeling[idx[e]] != val:
                return False
        for group, want in ((self.triples_zero, 0), (self.triples_one, 1)):
            for p, q, r in group:
                prod = labeling[idx[(p, q)]] * labeling[idx[(p, r)]] * labeling[idx[(q, r)]]
                if prod != want:
                    return False
        return True


def constrained_minimum(instance: Instance, fixations: Fixations,
                        bound: int = ENUMERATION_BOUND) -> float:
    """Minimum over feasible labelings satisfying ``fixations`` (inf if none)."""
    values = _evaluated(instance, bound)
    return min((v for v, x in values if fixations.satisfied_by(instance, x)),
               default=math.inf)


def verify_persistency(instance: Instance, fixations: Fixations,
                       bound: int = ENUMERATION_BOUND) -> bool:
    """True iff some optimal labeling satisfies every fixation."""
    result = solve_exact(instance, bound)
    tol = 0.0 if result.exact else 1e-9
    return constrained_minimum(instance, fixations, bound) <= result.minimum + tol
