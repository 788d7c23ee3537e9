#pragma once

#include <span>
#include <utility>
#include <vector>

namespace mlab {

/// Undirected weighted graph in adjacency-list form. Weights must be >= 0.
struct WeightedGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;

    void add_edge(int u, int v, double w) {
        adj[u].emplace_back(v, w);
        adj[v].emplace_back(u, w);
    }
};

/// Single-source Dijkstra. Unreachable nodes get +inf. When `parents` is
/// non-null it receives the predecessor of each node (-1 at the source and
/// unreachable nodes); distance ties resolve to the smallest predecessor
/// index so witness paths are deterministic.
void dijkstra(const WeightedGraph& g, int source, std::vector<double>& dist,
              std::vector<int>* parents = nullptr);

/// All-pairs shortest paths, one Dijkstra per source. Parallelized by source
/// row; the serial path is the same code without OpenMP.
std::vector<double> all_pairs_shortest_paths(const WeightedGraph& g, bool parallel);

/// As above but also records all predecessor arrays (n*n, row per source).
std::vector<double> all_pairs_shortest_paths(const WeightedGraph& g, bool parallel,
                                             std::vector<int>& parents);

/// Reconstructs source->target as a node sequence from a predecessor row.
std::vector<int> path_from_parents(std::span<const int> parents, int source, int target);

}  // namespace mlab
