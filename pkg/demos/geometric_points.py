"""Noisy points around three triangles; triple costs reward equilateral shapes.

At this size nothing is fixed on complete graphs, while sparse
k-nearest-neighbour graphs, with far fewer triples, are largely fixed.

Run:  python demos/geometric_points.py
"""

from cubic_persistency.engine import reduce, stats
from cubic_persistency.generators import GeometricConfig, gen_geometric

for k in (None, 3):
    for sigma in (0.05, 0.15, 0.3):
        inst, _, _ = gen_geometric(GeometricConfig(m=3, sigma=sigma, k=k, seed=1))
        st = stats(reduce(inst))
        graph = "complete" if k is None else f"{k}-NN"
        print(f"{graph:>8} sigma {sigma:.2f}: |V|={inst.vertex_count} |E|={len(inst.edges)} "
              f"|T|={len(inst.triples)} fixed edges {st['fixed_edge_fraction']:.3f} "
              f"triples {st['fixed_triple_fraction']:.3f}")
