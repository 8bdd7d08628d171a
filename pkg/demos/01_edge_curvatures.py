"""Four edge curvatures on small graphs.

Positive curvature marks locally dense neighborhoods, negative curvature
marks tree-like or bridging edges. This script prints all four measures on
a few canonical graphs and on a two-cluster toy where the single bridge
edge stands out.
"""

import numpy as np

from curvkit import CurvatureKind, build_graph, curvature_all

TOYS = {
    "triangle": [(0, 1), (0, 2), (1, 2)],
    "path P3": [(0, 1), (1, 2)],
    "4-cycle": [(0, 1), (1, 2), (2, 3), (3, 0)],
    "star K1,4": [(0, i) for i in range(1, 5)],
}

for name, edges in TOYS.items():
    g, _ = build_graph(edges)
    print(f"\n{name} (n={g.n}, m={g.m})")
    print(f"  {'edge':>8} {'frc':>6} {'bfc':>7} {'lrc':>7} {'orc':>7}")
    per_kind = {k: curvature_all(g, k).values for k in CurvatureKind}
    for idx, (u, v) in enumerate(g.canonical_edges()):
        row = " ".join(f"{per_kind[k][idx]:7.3f}" for k in CurvatureKind)
        print(f"  ({u}, {v})   {row}")

# Two dense 5-cliques joined by one bridge: the bridge is the most negative
# edge under every measure that is scale-free.
clique_a = [(i, j) for i in range(5) for j in range(i + 1, 5)]
clique_b = [(i + 5, j + 5) for i in range(5) for j in range(i + 1, 5)]
bridge = [(0, 5)]
g, _ = build_graph(clique_a + clique_b + bridge)
lrc = curvature_all(g, CurvatureKind.LRC).values
edges = list(g.canonical_edges())
order = np.argsort(lrc)
print("\ntwo cliques + bridge, edges by ascending lower Ricci curvature:")
for idx in order[:3]:
    print(f"  {edges[idx]}  lrc={lrc[idx]:+.3f}")
print("  ...")
for idx in order[-2:]:
    print(f"  {edges[idx]}  lrc={lrc[idx]:+.3f}")
print("\nthe bridge (0, 5) is the unique strongly negative edge")
