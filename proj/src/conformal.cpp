#include "mlab/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlab/common.hpp"
#include "mlab/hyperbolicity.hpp"

namespace mlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double PointCloud::distance(int i, int j) const {
    const auto& a = pts[i];
    const auto& b = pts[j];
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

int DomainGraph::deepest_node() const {
    int best = 0;
    for (int i = 1; i < interior_count(); ++i)
        if (bdist[i] > bdist[best]) best = i;
    return interior_nodes[best];
}

DomainGraph build_domain_graph(const PointCloud& cloud, double h) {
    if (!(h > 0)) fail(errc::spec_invalid, "connection radius h must be > 0");
    DomainGraph g;
    g.cloud = cloud;
    g.h = h;
    std::vector<int> boundary_nodes;
    g.interior_index.assign(cloud.size(), -1);
    for (int i = 0; i < cloud.size(); ++i) {
        if (cloud.boundary[i]) {
            boundary_nodes.push_back(i);
        } else {
            g.interior_index[i] = static_cast<int>(g.interior_nodes.size());
            g.interior_nodes.push_back(i);
        }
    }
    if (g.interior_nodes.empty()) fail(errc::empty_interior, "no interior sample points");
    if (boundary_nodes.empty()) fail(errc::empty_boundary, "no boundary sample points");

    const int n = g.interior_count();
    g.graph.n = n;
    g.graph.adj.assign(n, {});

    // uniform-grid buckets of cell size h keep neighbor search near-linear
    double lo[3] = {kInf, kInf, kInf};
    for (int i : g.interior_nodes)
        for (int c = 0; c < 3; ++c) lo[c] = std::min(lo[c], cloud.pts[i][c]);
    auto cell_of = [&](int node) {
        std::array<long, 3> cell;
        for (int c = 0; c < 3; ++c)
            cell[c] = static_cast<long>(std::floor((cloud.pts[node][c] - lo[c]) / h));
        return cell;
    };
    std::vector<std::pair<std::array<long, 3>, int>> buckets;  // (cell, local idx), sorted
    buckets.reserve(n);
    for (int li = 0; li < n; ++li) buckets.emplace_back(cell_of(g.interior_nodes[li]), li);
    std::sort(buckets.begin(), buckets.end());
    auto bucket_range = [&](const std::array<long, 3>& cell) {
        return std::equal_range(buckets.begin(), buckets.end(),
                                std::make_pair(cell, std::numeric_limits<int>::min()),
                                [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    for (int li = 0; li < n; ++li) {
        const int node = g.interior_nodes[li];
        const auto cell = cell_of(node);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    const std::array<long, 3> nc{cell[0] + dx, cell[1] + dy, cell[2] + dz};
                    auto [first, last] = bucket_range(nc);
                    for (auto it = first; it != last; ++it) {
                        const int lj = it->second;
                        if (lj <= li) continue;
                        const double len = cloud.distance(node, g.interior_nodes[lj]);
                        if (len <= h) g.graph.add_edge(li, lj, len);
                    }
                }
    }

    g.bdist.assign(n, kInf);
    for (int li = 0; li < n; ++li)
        for (int b : boundary_nodes)
            g.bdist[li] = std::min(g.bdist[li], cloud.distance(g.interior_nodes[li], b));

    // connectivity sweep over the interior subgraph
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (auto [v, w] : g.graph.adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
    }
    if (reached != n)
        fail(errc::disconnected_interior,
             std::to_string(n - reached) + " interior nodes unreachable at h = " + std::to_string(h));
    return g;
}

WeightedGraph quasihyperbolic_graph(const DomainGraph& g) {
    WeightedGraph qh;
    qh.n = g.graph.n;
    qh.adj.assign(qh.n, {});
    for (int u = 0; u < qh.n; ++u)
        for (auto [v, len] : g.graph.adj[u]) {
            if (v < u) continue;
            qh.add_edge(u, v, len * 0.5 * (1.0 / g.bdist[u] + 1.0 / g.bdist[v]));
        }
    return qh;
}

std::vector<double> quasihyperbolic_metric(const DomainGraph& g, bool parallel) {
    return all_pairs_shortest_paths(quasihyperbolic_graph(g), parallel);
}

UniformizeResult uniformize_lengths(const WeightedGraph& lengths, int base, double eps,
                                    std::optional<double> delta_hint, bool parallel,
                                    int delta_measure_cap) {
    if (!(eps > 0)) fail(errc::spec_invalid, "eps must be > 0");
    if (base < 0 || base >= lengths.n) fail(errc::index_out_of_range, "base point");

    std::vector<double> from_base;
    dijkstra(lengths, base, from_base);
    for (double v : from_base)
        if (v == kInf) fail(errc::no_geodesic, "graph disconnected from base");

    WeightedGraph weighted;
    weighted.n = lengths.n;
    weighted.adj.assign(lengths.n, {});
    for (int u = 0; u < lengths.n; ++u)
        for (auto [v, len] : lengths.adj[u]) {
            if (v < u) continue;
            weighted.add_edge(
                u, v, len * 0.5 * (std::exp(-eps * from_base[u]) + std::exp(-eps * from_base[v])));
        }

    UniformizeResult out;
    out.matrix = all_pairs_shortest_paths(weighted, parallel);
    for (double v : out.matrix) out.diameter = std::max(out.diameter, v);
    if (out.diameter > 2.0 / eps)
        fail(errc::spec_invalid, "uniformized diameter " + std::to_string(out.diameter) +
                                     " exceeds 2/eps; mesh too coarse for this eps");

    double delta;
    bool subsampled = false;
    if (delta_hint) {
        delta = *delta_hint;
    } else {
        // delta is measured on the shortest-path metric of the input lengths
        if (lengths.n <= delta_measure_cap) {
            delta = four_point_delta(all_pairs_shortest_paths(lengths, parallel), lengths.n).delta;
        } else {
            std::vector<int> sample;
            const int stride = (lengths.n + delta_measure_cap - 1) / delta_measure_cap;
            for (int i = 0; i < lengths.n; i += stride) sample.push_back(i);
            const int m = static_cast<int>(sample.size());
            std::vector<double> sub(static_cast<std::size_t>(m) * m), row;
            for (int a = 0; a < m; ++a) {
                dijkstra(lengths, sample[a], row);
                for (int b = 0; b < m; ++b) sub[static_cast<std::size_t>(a) * m + b] = row[sample[b]];
            }
            delta = four_point_delta(sub, m).delta;
            subsampled = true;
        }
    }
    const auto [L, eps0] = epsilon0(delta);
    if (eps > eps0) {
        out.warning = "eps = " + std::to_string(eps) + " exceeds epsilon0(delta) = " +
                      std::to_string(eps0) + " for delta " + std::to_string(delta) +
                      (subsampled ? " (subsampled estimate)" : "") +
                      "; uniform-space guarantee lapses";
    }
    return out;
}

UniformizeResult uniformize(const DomainGraph& g, int base_cloud_index, double eps,
                            std::optional<double> delta_hint, bool parallel) {
    const int base = g.interior_index[base_cloud_index];
    if (base < 0) fail(errc::index_out_of_range, "base must be an interior node");
    return uniformize_lengths(g.graph, base, eps, delta_hint, parallel);
}

CurveSample make_curve(const DomainGraph& g, std::span<const int> cloud_nodes) {
    if (cloud_nodes.size() < 2) fail(errc::invalid_curve, "curve needs at least two nodes");
    CurveSample c;
    c.cumlen.push_back(0.0);
    for (std::size_t i = 0; i < cloud_nodes.size(); ++i) {
        const int node = cloud_nodes[i];
        if (node < 0 || node >= g.cloud.size() || g.interior_index[node] < 0)
            fail(errc::invalid_curve, "curve node " + std::to_string(node) + " not interior");
        c.nodes.push_back(node);
        if (i == 0) continue;
        const int u = g.interior_index[cloud_nodes[i - 1]];
        const int v = g.interior_index[node];
        double len = -1.0;
        for (auto [w, l] : g.graph.adj[u])
            if (w == v) {
                len = l;
                break;
            }
        if (len < 0)
            fail(errc::invalid_curve, "consecutive curve nodes " + std::to_string(cloud_nodes[i - 1]) +
                                          "," + std::to_string(node) + " share no edge");
        c.cumlen.push_back(c.cumlen.back() + len);
    }
    return c;
}

UniformCurveCheck check_uniform_curve(const CurveSample& curve, double A, const DomainGraph& g) {
    if (curve.nodes.size() < 2 || curve.cumlen.size() != curve.nodes.size())
        fail(errc::invalid_curve, "malformed curve sample");
    UniformCurveCheck out;
    const double total = curve.cumlen.back();
    const double endpoint_d = g.cloud.distance(curve.nodes.front(), curve.nodes.back());
    out.length_ratio = endpoint_d > 0 ? total / endpoint_d : kInf;
    for (std::size_t i = 0; i < curve.nodes.size(); ++i) {
        const double along = std::min(curve.cumlen[i], total - curve.cumlen[i]);
        const double ratio = along / g.bdist[g.interior_index[curve.nodes[i]]];
        if (ratio > out.worst_cigar) {
            out.worst_cigar = ratio;
            out.worst_node = curve.nodes[i];
        }
    }
    out.pass = out.length_ratio <= A && out.worst_cigar <= A;
    return out;
}

UniformityEstimate estimate_uniformity_constant(const DomainGraph& g, int pair_cap,
                                                bool parallel) {
    const int n = g.interior_count();
    const WeightedGraph qh = quasihyperbolic_graph(g);

    std::vector<int> sources(n);
    std::iota(sources.begin(), sources.end(), 0);
    UniformityEstimate out;
    out.exact = n <= pair_cap;
    if (!out.exact) {
        const int stride = (n + pair_cap - 1) / pair_cap;
        sources.clear();
        for (int i = 0; i < n; i += stride) sources.push_back(i);
    }

    struct Worst {
        double a = 0.0;
        int from = -1, to = -1;
    };
    std::vector<Worst> per_source(sources.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel) num_threads(effective_threads())
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(sources.size()); ++si) {
        const int s = sources[si];
        std::vector<double> kdist;
        std::vector<int> parents;
        dijkstra(qh, s, kdist, &parents);
        Worst local;
        std::vector<int> path;
        std::vector<double> cum;
        for (int t = s + 1; t < n; ++t) {
            path = path_from_parents(parents, s, t);
            cum.assign(1, 0.0);
            for (std::size_t i = 1; i < path.size(); ++i) {
                const int u = g.interior_nodes[path[i - 1]];
                const int v = g.interior_nodes[path[i]];
                cum.push_back(cum.back() + g.cloud.distance(u, v));
            }
            const double total = cum.back();
            const double endpoint =
                g.cloud.distance(g.interior_nodes[s], g.interior_nodes[t]);
            double ratio = endpoint > 0 ? total / endpoint : kInf;
            for (std::size_t i = 0; i < path.size(); ++i) {
                const double along = std::min(cum[i], total - cum[i]);
                ratio = std::max(ratio, along / g.bdist[path[i]]);
            }
            if (ratio > local.a) {
                local.a = ratio;
                local.from = s;
                local.to = t;
            }
        }
        per_source[si] = local;
    }
    for (const auto& w : per_source) {
        if (w.a > out.A) {
            out.A = w.a;
            out.worst_from = g.interior_nodes[w.from];
            out.worst_to = g.interior_nodes[w.to];
        }
    }
    return out;
}

double clearance_constant(double dp, double R) {
    return 0.5 * dp * std::min(1.0 / std::expm1(R), 1.0);
}

ClearanceResult qh_ball_clearance(const DomainGraph& g, int base_cloud_index, double R) {
    if (!(R > 0)) fail(errc::spec_invalid, "R must be > 0");
    const int base = g.interior_index[base_cloud_index];
    if (base < 0) fail(errc::index_out_of_range, "base must be an interior node");
    ClearanceResult out;
    out.c = clearance_constant(g.bdist[base], R);
    std::vector<double> kdist;
    dijkstra(quasihyperbolic_graph(g), base, kdist);
    for (int li = 0; li < g.interior_count(); ++li) {
        if (kdist[li] < R && !(g.bdist[li] > out.c)) {
            out.inclusion_holds = false;
            out.violations.push_back(g.interior_nodes[li]);
        }
    }
    return out;
}

}  // namespace mlab
