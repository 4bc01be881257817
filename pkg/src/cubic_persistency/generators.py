"""Seeded synthetic instances: planted partitions and noisy equilateral triangles.

Randomness comes from numpy's PCG64 bit generator.  The user seed is fed to
a ``SeedSequence`` which spawns two independent streams, one for the graph
topology (or point cloud) and one for the costs, so that the same topology
can carry different cost draws.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .graphalg import DisjointSets
from .instance import Edge, Instance, Partition, Triple

SIGMA_0 = 0.1
SIGMA_1 = 0.4


def _streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    topo, costs = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(topo)), np.random.Generator(np.random.PCG64(costs))


def _cliques(vertex_count: int, edges: Sequence[Edge]) -> list[Triple]:
    """All 3-cliques, in ascending lexicographic order."""
    nbrs = [set() for _ in range(vertex_count)]
    for p, q in edges:
        nbrs[p].add(q)
        nbrs[q].add(p)
    out = []
    for p, q in edges:
        for r in sorted(nbrs[p] & nbrs[q]):
            if r > q:
                out.append((p, q, r))
    out.sort()
    return out


# -- planted partition ----------------------------------------------------------

@dataclass(frozen=True)
class PartitionConfig:
    """``8n`` vertices in blocks of sizes ``n, 2n, 2n, 3n``."""

    n: int
    p_edge: float = 1.0
    alpha: float = 0.5
    beta: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        for name in ("p_edge", "alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    @property
    def sigma(self) -> float:
        return SIGMA_0 + self.alpha * (SIGMA_1 - SIGMA_0)


def planted_blocks(n: int) -> list[list[int]]:
    sizes = (n, 2 * n, 2 * n, 3 * n)
    blocks, start = [], 0
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    return blocks


def gen_partition(config: PartitionConfig) -> tuple[Instance, Partition]:
    """Random graph around a planted partition with Gaussian costs.

    Each pair is kept with probability ``p_edge``; afterwards, inside every
    block, pairs are scanned in lexicographic order and added whenever their
    endpoints are not yet connected within the block.  Costs of pairs and
    triples inside a block have mean ``alpha - 1``, all others ``1 - alpha``.
    Edge costs are scaled by ``1 - beta`` and triple costs by ``beta``.
    """
    topo, draw = _streams(config.seed)
    N = 8 * config.n
    blocks = planted_blocks(config.n)
    block_of = [0] * N
    for b, members in enumerate(blocks):
        for v in members:
            block_of[v] = b

    pairs = list(combinations(range(N), 2))
    keep = topo.random(len(pairs)) < config.p_edge
    edges = {e for e, k in zip(pairs, keep) if k}
    for members in blocks:
        ds = DisjointSets(N)
        for p, q in combinations(members, 2):
            if (p, q) in edges:
                ds.union(p, q)
        for p, q in combinations(members, 2):
            if ds.union(p, q):
                edges.add((p, q))
    edges_sorted = sorted(edges)
    triples = _cliques(N, edges_sorted)

    mean_in, mean_out = config.alpha - 1.0, 1.0 - config.alpha
    sigma = config.sigma
    e_same = np.array([block_of[p] == block_of[q] for p, q in edges_sorted], dtype=bool)
    t_same = np.array([block_of[p] == block_of[q] == block_of[r] for p, q, r in triples],
                      dtype=bool)
    e_cost = draw.normal(np.where(e_same, mean_in, mean_out), sigma) * (1.0 - config.beta)
    t_cost = (draw.normal(np.where(t_same, mean_in, mean_out), sigma) * config.beta
              if triples else np.zeros(0))
    # + 0.0 turns the -0.0 produced by a zero factor into 0.0
    inst = Instance(N, {e: float(c) + 0.0 for e, c in zip(edges_sorted, e_cost)},
                    {t: float(c) + 0.0 for t, c in zip(triples, t_cost)})
    return inst, Partition.from_blocks(blocks)


# -- geometric ------------------------------------------------------------------

TRIANGLE_CENTERS = ((0.0, 0.0), (3.0, 0.5), (1.25, 3.0))
TRIANGLE_ROTATIONS = (0.0, math.pi / 7, 2 * math.pi / 5)


def default_triangle_vertices() -> tuple[tuple[float, float], ...]:
    """Nine points: three unit-side equilateral triangles with distinct
    centers and orientations, three consecutive points per triangle."""
    radius = 1.0 / math.sqrt(3.0)
    out = []
    for (cx, cy), rot in zip(TRIANGLE_CENTERS, TRIANGLE_ROTATIONS):
        for k in range(3):
            a = rot + math.pi / 2 + 2 * math.pi * k / 3
            out.append((cx + radius * math.cos(a), cy + radius * math.sin(a)))
    return tuple(out)


@dataclass(frozen=True)
class GeometricConfig:
    """``m`` points per triangle vertex; ``k=None`` gives a complete graph."""

    m: int
    sigma: float = 0.1
    k: Optional[int] = None
    seed: int = 0
    triangle_vertices: tuple[tuple[float, float], ...] = field(
        default_factory=default_triangle_vertices)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be positive or None")
        if len(self.triangle_vertices) != 9:
            raise ValueError("need exactly nine triangle vertices")


def _angles(a, b, c) -> tuple[float, float, float]:
    def at(p, q, r):
        u = (q[0] - p[0], q[1] - p[1])
        v = (r[0] - p[0], r[1] - p[1])
        return abs(math.atan2(u[0] * v[1] - u[1] * v[0], u[0] * v[0] + u[1] * v[1]))
    return at(a, b, c), at(b, c, a), at(c, a, b)


def triple_cost_geometric(p, q, r, sigma: float) -> float:
    """Cost of putting three plane points into one cluster.

    Mutually close points (longest side at most ``4 sigma``) are rewarded,
    mixed triples cost 0, and mutually far points are scored by how far
    their inner angles deviate from ``pi/3``.  Coincident points always
    fall into one of the first two cases.
    """
    d = (math.dist(p, q), math.dist(p, r), math.dist(q, r))
    dmax, dmin = max(d), min(d)
    radius = 4.0 * sigma
    if dmax <= radius:
        return -1.0 + dmax / radius
    if dmin <= radius:
        return 0.0
    # collinear far points have angles (0, 0, pi) and the maximal deviation 4pi/3
    delta = sum(abs(a - math.pi / 3) for a in _angles(p, q, r))
    if delta <= math.pi / 6:
        return -1.0 + 6.0 * delta / math.pi
    return 6.0 / 7.0 * (delta - math.pi / 6) / math.pi


def gen_geometric(config: GeometricConfig) -> tuple[Instance, np.ndarray, list[int]]:
    """Noisy points around nine triangle vertices.

    Point ``a*m + s`` is the ``s``-th draw around triangle vertex ``a``.
    Returns the instance, the ``(9m, 2)`` coordinates and the source
    triangle vertex of each point.
    """
    points_rng, _ = _streams(config.seed)
    m = config.m
    centers = np.repeat(np.asarray(config.triangle_vertices, dtype=float), m, axis=0)
    pts = centers + config.sigma * points_rng.standard_normal(centers.shape)
    N = len(pts)
    source = [a // m for a in range(N)]  # triangle vertex index
    tri = [a // 3 for a in source]

    edges: set[Edge] = set()
    if config.k is None or config.k >= N - 1:
        edges.update(combinations(range(N), 2))
    else:
        for p, q in combinations(range(N), 2):
            if tri[p] == tri[q]:
                edges.add((p, q))
        dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        k = config.k
        for p in range(N):
            order = [q for q in np.argsort(dist[p], kind="stable") if q != p]
            for q in order[:k] + order[-k:]:
                edges.add((min(p, int(q)), max(p, int(q))))
    edges_sorted = sorted(edges)
    triples = _cliques(N, edges_sorted)
    tc = {t: triple_cost_geometric(pts[t[0]], pts[t[1]], pts[t[2]], config.sigma)
          for t in triples}
    inst = Instance(N, {e: 0.0 for e in edges_sorted}, tc)
    return inst, pts, source


# -- sidecar files --------------------------------------------------------------

def dumps_points(points: np.ndarray, source: Sequence[int]) -> str:
    """``p <vertex> <x> <y> <triangle vertex>`` per point."""
    out = io.StringIO()
    for v, ((x, y), a) in enumerate(zip(points, source)):
        out.write(f"p {v} {float(x)!r} {float(y)!r} {a}\n")
    return out.getvalue()


def dumps_partition(partition: Partition, vertex_count: int) -> str:
    """``b <vertex> <block>`` per vertex."""
    ids = partition.block_ids(vertex_count)
    return "".join(f"b {v} {b}\n" for v, b in enumerate(ids))
