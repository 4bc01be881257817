"""Shared helpers for the test suite: random instances and certificate checks."""

from __future__ import annotations

import itertools
import random

from cubic_persistency import conditions as cond
from cubic_persistency.instance import Instance, canonical_edge
from cubic_persistency.maps import cut_map, join_map
from cubic_persistency.oracle import Fixations

DENSITIES = (0.4, 0.7, 1.0)


def random_instance(rng: random.Random, n: int, density: float, low: int = -3,
                    high: int = 3, offset: int = 0) -> Instance:
    """Integer costs on a random graph; triples on all 3-cliques."""
    edges = {e: rng.randint(low, high)
             for e in itertools.combinations(range(n), 2) if rng.random() < density}
    triples = {t: rng.randint(low, high) for t in itertools.combinations(range(n), 3)
               if all(p in edges for p in itertools.combinations(t, 2))}
    return Instance(n, edges, triples, offset)


def instance_stream(seed: int, count: int, nmin: int = 2, nmax: int = 8):
    rng = random.Random(seed)
    for k in range(count):
        n = rng.randint(nmin, nmax)
        yield random_instance(rng, n, DENSITIES[k % len(DENSITIES)])


def all_certificates(inst: Instance, slack: float = 0.0) -> list:
    certs = []
    for e in inst.edges:
        for check in cond.EDGE_CHECKERS.values():
            certs.append(check(inst, e, slack))
    for t in inst.triples:
        for check in cond.TRIPLE_CHECKERS.values():
            certs.append(check(inst, t, slack))
    certs.append(cond.find_subset_join(inst, slack))
    certs.append(cond.check_subset_separation(inst)[1])
    return [c for c in certs if c is not None]


def fixations_of(inst: Instance, cert) -> Fixations:
    f = Fixations()
    if cert.kind == cond.EDGE_FIXED_0:
        f.edge_values[cert.target] = 0
    elif cert.kind == cond.EDGE_FIXED_1:
        f.edge_values[cert.target] = 1
    elif cert.kind == cond.TRIPLE_CUT:
        f.triples_zero.add(cert.target)
    elif cert.kind == cond.TRIPLE_JOINED:
        f.triples_one.add(cert.target)
    elif cert.kind == cond.SUBSET_JOINED:
        S = set(cert.target)
        for p, q in inst.edges:
            if p in S and q in S:
                f.edge_values[(p, q)] = 1
    elif cert.kind == cond.SEPARATION:
        for e in cert.target:
            f.edge_values[e] = 0
    return f


def _x(inst, x, p, q):
    return x[inst.edge_index[canonical_edge(p, q)]]


def improving_map(inst: Instance, cert):
    """The self-map of feasible labelings used to prove the certificate's
    proposition, or None for separations."""
    name = cert.condition
    if name == "edge_cut":
        i, j = cert.target
        (U,) = cert.witness
        return lambda x: x if _x(inst, x, i, j) == 0 else cut_map(inst, x, U)
    if name in ("triplet_cut", "triplet_join"):
        (U,) = cert.witness
        i, j, k = cert.target
        want = 0 if name == "triplet_cut" else 1

        def sigma(x):
            prod = _x(inst, x, i, j) * _x(inst, x, i, k) * _x(inst, x, j, k)
            if prod == want:
                return x
            y = cut_map(inst, x, U)
            return y if want == 0 else join_map(inst, y, (i, j, k))
        return sigma
    if name == "edge_join":
        i, j = cert.target
        (U,) = cert.witness
        return lambda x: x if _x(inst, x, i, j) == 1 else join_map(inst, cut_map(inst, x, U), (i, j))
    if name == "triangle_edge_join":
        i, k = cert.target
        U, U2, ijk = cert.witness
        (j,) = set(ijk) - {i, k}

        def sigma(x):
            xik, xij, xjk = _x(inst, x, i, k), _x(inst, x, i, j), _x(inst, x, j, k)
            if xik == 1:
                return x
            if xij == 0 and xjk == 1:
                return join_map(inst, cut_map(inst, x, U), (i, k))
            if xjk == 0 and xij == 1:
                return join_map(inst, cut_map(inst, x, U2), (i, k))
            return join_map(inst, cut_map(inst, x, ijk), ijk)
        return sigma
    if name in ("edge_subgraph_join", "triplet_subgraph_join", "subset_join"):
        (VH,) = cert.witness
        pairs = [(p, q) for p, q in inst.edges if p in VH and q in VH]
        target = cert.target if name != "subset_join" else None

        def sigma(x):
            if target is not None:
                done = _x(inst, x, *target) == 1
            else:
                done = all(_x(inst, x, p, q) == 1 for p, q in pairs)
            return x if done else join_map(inst, cut_map(inst, x, VH), VH)
        return sigma
    return None


def repulsive_triangle() -> Instance:
    """Triangle with edge costs -2 and triple cost 5."""
    return Instance(3, {(0, 1): -2, (0, 2): -2, (1, 2): -2}, {(0, 1, 2): 5})


def triangle(c01, c02, c12, t=None, offset=0) -> Instance:
    return Instance(3, {(0, 1): c01, (0, 2): c02, (1, 2): c12},
                    {} if t is None else {(0, 1, 2): t}, offset)


# acceptance criterion number -> "PASS ..." / "FAIL ..." line
ACCEPTANCE_LINES: dict[int, str] = {}


class OracleTable:
    """All feasible labelings of a small instance with their objective values."""

    def __init__(self, inst: Instance):
        from cubic_persistency.instance import objective
        from cubic_persistency.oracle import enumerate_feasible
        self.inst = inst
        self.rows = [(objective(inst, x), x) for x in enumerate_feasible(inst)]
        self.minimum = min(v for v, _ in self.rows)

    def consistent(self, fixations: Fixations) -> bool:
        """True iff some optimum satisfies ``fixations``."""
        return any(v == self.minimum and fixations.satisfied_by(self.inst, x)
                   for v, x in self.rows)
