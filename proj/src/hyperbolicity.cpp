#include "mlab/hyperbolicity.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mlab/common.hpp"

namespace mlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct DeltaBest {
    double defect = -kInf;
    std::array<int, 4> witness{0, 0, 0, 0};

    void offer(double d, int x, int y, int z, int m) {
        if (d > defect) {
            defect = d;
            witness = {x, y, z, m};
        } else if (d == defect && std::array<int, 4>{x, y, z, m} < witness) {
            witness = {x, y, z, m};
        }
    }
    void merge(const DeltaBest& other) {
        if (other.defect > defect || (other.defect == defect && other.witness < witness))
            *this = other;
    }
};
}  // namespace

double gromov_product(std::span<const double> dist, int n, int x, int y, int m) {
    if (x < 0 || y < 0 || m < 0 || x >= n || y >= n || m >= n)
        fail(errc::index_out_of_range, "gromov product indices");
    const auto at = [&](int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; };
    return 0.5 * (at(m, x) + at(m, y) - at(x, y));
}

double gromov_product(const MarkedMetricSpace& space, int x, int y, int m) {
    return gromov_product(space.dist, space.n, x, y, m);
}

HyperbolicityReport four_point_delta(std::span<const double> dist, int n, bool parallel) {
    if (n <= 0) fail(errc::spec_invalid, "empty space");
    HyperbolicityReport report;
    DeltaBest best;
    // scanned ordered quadruples modulo the x<->z swap
    report.quadruples_scanned =
        static_cast<std::int64_t>(n) * n * (static_cast<std::int64_t>(n) * (n + 1) / 2);

#pragma omp parallel if (parallel) num_threads(effective_threads())
    {
        std::vector<double> prod(static_cast<std::size_t>(n) * n);
        DeltaBest local;
#pragma omp for schedule(dynamic, 1)
        for (int m = 0; m < n; ++m) {
            const double* dm = dist.data() + static_cast<std::size_t>(m) * n;
            for (int x = 0; x < n; ++x) {
                const double* dx = dist.data() + static_cast<std::size_t>(x) * n;
                double* px = prod.data() + static_cast<std::size_t>(x) * n;
                for (int y = 0; y < n; ++y) px[y] = 0.5 * (dm[x] + dm[y] - dx[y]);
            }
            for (int x = 0; x < n; ++x) {
                const double* px = prod.data() + static_cast<std::size_t>(x) * n;
                for (int y = 0; y < n; ++y) {
                    const double pxy = px[y];
                    const double* py = prod.data() + static_cast<std::size_t>(y) * n;
                    double row_best = -kInf;
                    int row_z = x;
                    for (int z = x; z < n; ++z) {
                        const double defect = std::min(pxy, py[z]) - px[z];
                        if (defect > row_best) {
                            row_best = defect;
                            row_z = z;
                        }
                    }
                    local.offer(row_best, x, y, row_z, m);
                }
            }
        }
#pragma omp critical
        best.merge(local);
    }
    report.delta = std::max(best.defect, 0.0);
    report.witness = best.witness;
    return report;
}

HyperbolicityReport four_point_delta(const MarkedMetricSpace& space, bool parallel) {
    return four_point_delta(space.dist, space.n, parallel);
}

VisualMetricResult visual_metric(const MarkedMetricSpace& space, int base, double eps,
                                 double delta_hint, int delta_measure_cap) {
    if (base < 0 || base >= space.n) fail(errc::index_out_of_range, "base point");
    if (space.is_boundary(base)) fail(errc::spec_invalid, "base must be an interior point");
    if (!(eps > 0)) fail(errc::spec_invalid, "eps must be > 0");
    VisualMetricResult out;
    out.boundary_ids = space.boundary_points();
    if (out.boundary_ids.empty()) fail(errc::empty_boundary, "no designated boundary points");

    double delta = delta_hint;
    bool subsampled = false;
    if (delta < 0) {
        if (space.n <= delta_measure_cap) {
            delta = four_point_delta(space).delta;
        } else {
            // deterministic stride subsample; a lower bound on the true delta
            std::vector<int> sample;
            const int stride = (space.n + delta_measure_cap - 1) / delta_measure_cap;
            for (int i = 0; i < space.n; i += stride) sample.push_back(i);
            delta = four_point_delta(space.restricted(sample), static_cast<int>(sample.size())).delta;
            subsampled = true;
        }
    }
    if (delta > 0 && eps >= 1.0 / (5.0 * delta)) {
        out.warning = "eps >= 1/(5*delta) for measured delta " + std::to_string(delta) +
                      (subsampled ? " (subsampled estimate)" : "") +
                      "; visual metric bounds may not apply";
    }

    // chain infimum = shortest path in the complete graph with rho weights
    WeightedGraph g;
    g.n = space.n;
    g.adj.assign(space.n, {});
    for (int i = 0; i < space.n; ++i)
        for (int j = i + 1; j < space.n; ++j)
            g.add_edge(i, j, std::exp(-eps * gromov_product(space, i, j, base)));

    const int b = static_cast<int>(out.boundary_ids.size());
    out.matrix.assign(static_cast<std::size_t>(b) * b, 0.0);
    std::vector<double> row;
    for (int r = 0; r < b; ++r) {
        dijkstra(g, out.boundary_ids[r], row);
        for (int c = 0; c < b; ++c)
            out.matrix[static_cast<std::size_t>(r) * b + c] = row[out.boundary_ids[c]];
    }
    return out;
}

WeightedGraph metric_graph(std::span<const double> dist, int n, double rel_tol) {
    const auto at = [&](int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; };
    WeightedGraph g;
    g.n = n;
    g.adj.assign(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool dominated = false;
            const double dij = at(i, j);
            for (int k = 0; k < n && !dominated; ++k) {
                if (k == i || k == j) continue;
                dominated = at(i, k) + at(k, j) <= dij * (1.0 + rel_tol);
            }
            if (!dominated) g.add_edge(i, j, dij);
        }
    return g;
}

std::vector<int> farthest_points(std::span<const double> dist, int n, int base) {
    const double* row = dist.data() + static_cast<std::size_t>(base) * n;
    double far = 0.0;
    for (int i = 0; i < n; ++i) far = std::max(far, row[i]);
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (row[i] == far) out.push_back(i);
    return out;
}

StarlikeResult rough_starlike_constant(std::span<const double> dist, int n,
                                       const WeightedGraph& graph, int base,
                                       std::span<const int> targets) {
    if (base < 0 || base >= n) fail(errc::index_out_of_range, "base point");
    if (targets.empty()) fail(errc::spec_invalid, "no ray targets");
    const auto at = [&](int i, int j) { return dist[static_cast<std::size_t>(i) * n + j]; };

    std::vector<double> gdist;
    std::vector<int> parents;
    dijkstra(graph, base, gdist, &parents);

    std::vector<std::vector<int>> geodesics;
    geodesics.reserve(targets.size());
    for (int t : targets) {
        if (t < 0 || t >= n) fail(errc::index_out_of_range, "ray target");
        if (gdist[t] == kInf) fail(errc::no_geodesic, "target " + std::to_string(t) + " unreachable");
        geodesics.push_back(path_from_parents(parents, base, t));
    }

    StarlikeResult out;
    out.targets.assign(targets.begin(), targets.end());
    for (int x = 0; x < n; ++x) {
        double to_rays = kInf;
        for (const auto& path : geodesics) {
            double to_path = kInf;
            for (int node : path) to_path = std::min(to_path, at(x, node));
            to_rays = std::min(to_rays, to_path);
        }
        if (to_rays > out.M) {
            out.M = to_rays;
            out.witness = x;
        }
    }
    if (out.witness < 0) out.witness = 0;
    return out;
}

StarlikeResult rough_starlike_constant(const MarkedMetricSpace& space, int base,
                                       std::span<const int> targets) {
    if (base < 0 || base >= space.n) fail(errc::index_out_of_range, "base point");
    if (space.is_boundary(base)) fail(errc::spec_invalid, "base must be an interior point");
    const WeightedGraph g = metric_graph(space.dist, space.n);
    std::vector<int> chosen(targets.begin(), targets.end());
    if (chosen.empty()) chosen = farthest_points(space.dist, space.n, base);
    return rough_starlike_constant(space.dist, space.n, g, base, chosen);
}

std::pair<double, double> epsilon0(double delta) {
    if (delta < 0) fail(errc::negative_delta, "delta must be >= 0");
    const double L = 6.0 * (1.0 + 24.0 * delta) * (2.0 + 40.0 * delta) + 48.0 * delta + 3.0;
    return {L, 1.0 / (14.0 * L)};
}

}  // namespace mlab
