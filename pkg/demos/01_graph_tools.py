"""Walk through the graph core and the eleven tools on small examples."""

from graphstage import WeightKind, build_graph, canonical_edge_set, dispatch, graphs_equal

# an undirected triangle plus a pendant node
g = build_graph(False, 4, [(0, 1), (1, 2), (0, 2), (2, 3)])
print("edges:", g.edges)
print("canonical set:", sorted(canonical_edge_set(g)))

print("cycle_detection:", dispatch("cycle_detection", g, ()).value)
print("edge_count:", dispatch("edge_count", g, ()).value)
print("node_count:", dispatch("node_count", g, ()).value)
print("degree_count(2):", dispatch("degree_count", g, (2,)).value)
print("edge_existence(0, 3):", dispatch("edge_existence", g, (0, 3)).value)
print("path_existence(0, 3):", dispatch("path_existence", g, (0, 3)).value)

# the same triangle with weights
w = build_graph(False, 3, [(0, 1, 2), (1, 2, 5), (0, 2, 9)], WeightKind.WEIGHT)
print("max_triangle_sum:", dispatch("max_triangle_sum", w, ()).value)
print("shortest_path(0, 1):", dispatch("shortest_path", w, (0, 1)).value)

# a small flow network
f = build_graph(True, 4, [(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 3)], WeightKind.CAPACITY)
print("maximum_flow(0, 3):", dispatch("maximum_flow", f, (0, 3)).value)

# a directed chain has exactly one topological order
chain = build_graph(True, 4, [(2, 0), (0, 3), (3, 1)])
print("topological_sort:", dispatch("topological_sort", chain, ()).value)

# edge-level equality ignores edge order but not weights
a = build_graph(False, 3, [(0, 1), (1, 2)])
b = build_graph(False, 3, [(2, 1), (1, 0)])
print("graphs_equal regardless of order:", graphs_equal(a, b))
