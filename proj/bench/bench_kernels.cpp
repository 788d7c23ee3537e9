#include <benchmark/benchmark.h>

#include <random>

#include "mlab/ghb.hpp"
#include "mlab/hyperbolicity.hpp"
#include "mlab/metric_core.hpp"
#include "mlab/shortest_paths.hpp"

namespace {

using namespace mlab;

std::vector<double> random_points_metric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
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
    return d;
}

WeightedGraph grid_graph(int side) {
    WeightedGraph g;
    g.n = side * side;
    g.adj.assign(g.n, {});
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const int v = y * side + x;
            if (x + 1 < side) g.add_edge(v, v + 1, 1.0 + 0.01 * ((v * 7919) % 13));
            if (y + 1 < side) g.add_edge(v, v + side, 1.0 + 0.01 * ((v * 104729) % 17));
        }
    return g;
}

void bm_apsp(benchmark::State& state) {
    const WeightedGraph g = grid_graph(static_cast<int>(state.range(0)));
    const bool parallel = state.range(1) != 0;
    for (auto _ : state) {
        auto m = all_pairs_shortest_paths(g, parallel);
        benchmark::DoNotOptimize(m.data());
    }
}
BENCHMARK(bm_apsp)->Args({24, 0})->Args({24, 1})->Unit(benchmark::kMillisecond);

void bm_four_point_delta(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const bool parallel = state.range(1) != 0;
    const auto d = random_points_metric(n, 7);
    for (auto _ : state) {
        auto r = four_point_delta(d, n, parallel);
        benchmark::DoNotOptimize(r.delta);
    }
}
BENCHMARK(bm_four_point_delta)->Args({64, 0})->Args({64, 1})->Unit(benchmark::kMillisecond);

void bm_max_distortion(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const bool parallel = state.range(1) != 0;
    const auto dx = random_points_metric(n, 11);
    const auto dy = random_points_metric(n, 13);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) pairs.emplace_back(i, (i * 31 + 7) % n);
    for (int i = 0; i < n; ++i) pairs.emplace_back((i * 17 + 3) % n, i);
    for (auto _ : state) {
        double v = max_distortion(dx, n, dy, n, pairs, parallel);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_max_distortion)->Args({700, 0})->Args({700, 1})->Unit(benchmark::kMillisecond);

void bm_directed_hausdorff(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const bool parallel = state.range(1) != 0;
    const auto d = random_points_metric(n, 17);
    std::vector<int> from, to;
    for (int i = 0; i < n; i += 2) from.push_back(i);
    for (int i = 1; i < n; i += 2) to.push_back(i);
    for (auto _ : state) {
        double v = directed_hausdorff(d, n, from, to, parallel);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(bm_directed_hausdorff)->Args({1500, 0})->Args({1500, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
