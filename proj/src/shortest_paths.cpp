#include "mlab/shortest_paths.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <queue>

#include "mlab/common.hpp"

namespace mlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void dijkstra(const WeightedGraph& g, int source, std::vector<double>& dist,
              std::vector<int>* parents) {
    dist.assign(g.n, kInf);
    if (parents) parents->assign(g.n, -1);
    std::vector<char> done(g.n, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        auto [du, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (auto [v, w] : g.adj[u]) {
            const double cand = du + w;
            if (cand < dist[v]) {
                dist[v] = cand;
                if (parents) (*parents)[v] = u;
                queue.emplace(cand, v);
            } else if (parents && cand == dist[v] && !done[v] && u < (*parents)[v]) {
                (*parents)[v] = u;
            }
        }
    }
}

std::vector<double> all_pairs_shortest_paths(const WeightedGraph& g, bool parallel) {
    std::vector<double> out(static_cast<std::size_t>(g.n) * g.n);
#pragma omp parallel if (parallel) num_threads(effective_threads())
    {
        std::vector<double> row;
#pragma omp for schedule(dynamic, 8)
        for (int s = 0; s < g.n; ++s) {
            dijkstra(g, s, row);
            std::copy(row.begin(), row.end(), out.begin() + static_cast<std::size_t>(s) * g.n);
        }
    }
    return out;
}

std::vector<double> all_pairs_shortest_paths(const WeightedGraph& g, bool parallel,
                                             std::vector<int>& parents) {
    std::vector<double> out(static_cast<std::size_t>(g.n) * g.n);
    parents.assign(static_cast<std::size_t>(g.n) * g.n, -1);
#pragma omp parallel if (parallel) num_threads(effective_threads())
    {
        std::vector<double> row;
        std::vector<int> prow;
#pragma omp for schedule(dynamic, 8)
        for (int s = 0; s < g.n; ++s) {
            dijkstra(g, s, row, &prow);
            std::copy(row.begin(), row.end(), out.begin() + static_cast<std::size_t>(s) * g.n);
            std::copy(prow.begin(), prow.end(),
                      parents.begin() + static_cast<std::size_t>(s) * g.n);
        }
    }
    return out;
}

std::vector<int> path_from_parents(std::span<const int> parents, int source, int target) {
    std::vector<int> path;
    int cur = target;
    while (cur != -1) {
        path.push_back(cur);
        if (cur == source) break;
        cur = parents[cur];
    }
    if (path.back() != source) fail(errc::no_geodesic, "target unreachable from source");
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace mlab
