#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mlab/metric_core.hpp"

namespace test_support {

// Unit-spaced path 0..n-1; flags default to all interior.
inline mlab::MarkedMetricSpace path_space(int n, std::vector<char> flags = {}) {
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(i) * n + j] = std::abs(i - j);
    if (flags.empty()) flags.assign(n, 0);
    return mlab::make_space_unchecked(n, std::move(d), std::move(flags));
}

// Random Euclidean point set in the unit square; a genuine metric.
inline mlab::MarkedMetricSpace random_euclidean_space(int n, std::mt19937_64& rng,
                                                      bool with_boundary = true) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = unit(rng);
        ys[i] = unit(rng);
    }
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d[static_cast<std::size_t>(i) * n + j] = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
    std::vector<char> flags(n, 0);
    if (with_boundary && n >= 2) {
        // at least one boundary and one interior point, rest random
        flags[0] = 1;
        for (int i = 2; i < n; ++i) flags[i] = (rng() & 1) ? 1 : 0;
    }
    return mlab::make_space_unchecked(n, std::move(d), std::move(flags));
}

// Independent unpruned oracle: all n^4 ordered quadruples straight from the
// four-point condition.
inline double delta_oracle(const mlab::MarkedMetricSpace& s) {
    auto gp = [&](int x, int y, int m) {
        return 0.5 * (s.d(m, x) + s.d(m, y) - s.d(x, y));
    };
    double worst = 0.0;
    for (int x = 0; x < s.n; ++x)
        for (int y = 0; y < s.n; ++y)
            for (int z = 0; z < s.n; ++z)
                for (int m = 0; m < s.n; ++m)
                    worst = std::max(worst, std::min(gp(x, y, m), gp(y, z, m)) - gp(x, z, m));
    return worst;
}

// Min-plus closure by Floyd-Warshall over a full cost matrix.
inline std::vector<double> min_plus_closure_oracle(std::vector<double> cost, int n) {
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double via = cost[static_cast<std::size_t>(i) * n + k] +
                                   cost[static_cast<std::size_t>(k) * n + j];
                double& cur = cost[static_cast<std::size_t>(i) * n + j];
                if (via < cur) cur = via;
            }
    return cost;
}

}  // namespace test_support
