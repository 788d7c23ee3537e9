#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mlab/hyperbolicity.hpp"
#include "test_support.hpp"

using namespace mlab;
using test_support::delta_oracle;
using test_support::min_plus_closure_oracle;
using test_support::path_space;
using test_support::random_euclidean_space;

namespace {

// star with given spoke lengths; point 0 is the hub, leaves follow
MarkedMetricSpace star_space(const std::vector<double>& spokes, std::vector<char> flags = {}) {
    const int n = static_cast<int>(spokes.size()) + 1;
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& { return d[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 1; i < n; ++i) {
        at(0, i) = at(i, 0) = spokes[i - 1];
        for (int j = i + 1; j < n; ++j) at(i, j) = at(j, i) = spokes[i - 1] + spokes[j - 1];
    }
    if (flags.empty()) flags.assign(n, 0);
    return make_space_unchecked(n, std::move(d), std::move(flags));
}

MarkedMetricSpace unit_square_corners() {
    const double r2 = std::sqrt(2.0);
    std::vector<double> d{0, 1, r2, 1, 1, 0, 1, r2, r2, 1, 0, 1, 1, r2, 1, 0};
    return make_space_unchecked(4, std::move(d), {0, 0, 0, 0});
}

}  // namespace

TEST_CASE("gromov product closed forms") {
    auto s = path_space(5);
    CHECK(gromov_product(s, 2, 2, 0) == doctest::Approx(2.0));  // (x|x)_m = d(m,x)
    CHECK(gromov_product(s, 2, 3, 2) == 0.0);                   // (x|y)_x = 0
    CHECK(gromov_product(s, 2, 3, 0) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)gromov_product(s, 0, 1, 9), Error);
}

TEST_CASE("gromov product is bounded by the distances to the base") {
    std::mt19937_64 rng(71);
    auto s = random_euclidean_space(30, rng);
    for (int x = 0; x < s.n; ++x)
        for (int y = 0; y < s.n; ++y)
            for (int m = 0; m < s.n; ++m) {
                const double p = gromov_product(s, x, y, m);
                CHECK(p >= -1e-12);
                CHECK(p <= std::min(s.d(m, x), s.d(m, y)) + 1e-12);
            }
}

TEST_CASE("four_point_delta vanishes on path metrics and tiny spaces") {
    CHECK(four_point_delta(path_space(6)).delta == 0.0);
    CHECK(four_point_delta(path_space(3)).delta == 0.0);
    CHECK(four_point_delta(path_space(1)).delta == 0.0);
}

TEST_CASE("four_point_delta of the unit square corners is sqrt(2) - 1") {
    const auto s = unit_square_corners();
    const double expected = std::sqrt(2.0) - 1.0;
    CHECK(delta_oracle(s) == doctest::Approx(expected).epsilon(1e-12));  // oracle confirms
    const auto r = four_point_delta(s);
    CHECK(r.delta == doctest::Approx(expected).epsilon(1e-12));
    // witness defect equals delta exactly
    const double wd = std::min(gromov_product(s, r.witness[0], r.witness[1], r.witness[3]),
                               gromov_product(s, r.witness[1], r.witness[2], r.witness[3])) -
                      gromov_product(s, r.witness[0], r.witness[2], r.witness[3]);
    CHECK(wd == r.delta);
}

TEST_CASE("four_point_delta matches the unpruned oracle on random spaces") {
    std::mt19937_64 rng(73);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 4 + static_cast<int>(rng() % 9);  // up to 12
        auto s = random_euclidean_space(n, rng);
        CHECK(four_point_delta(s).delta == doctest::Approx(delta_oracle(s)).epsilon(1e-13));
    }
}

TEST_CASE("four_point_delta parallel and serial paths agree exactly") {
    std::mt19937_64 rng(79);
    auto s = random_euclidean_space(14, rng);
    const auto par = four_point_delta(s, true);
    const auto ser = four_point_delta(s, false);
    CHECK(par.delta == ser.delta);
    CHECK(par.witness == ser.witness);
    CHECK(par.quadruples_scanned == ser.quadruples_scanned);
}

TEST_CASE("four_point_delta is isometry-invariant and scales linearly") {
    std::mt19937_64 rng(83);
    auto s = random_euclidean_space(9, rng);
    const double base = four_point_delta(s).delta;

    // relabeling: reverse the point order
    std::vector<double> rev(static_cast<std::size_t>(s.n) * s.n);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            rev[static_cast<std::size_t>(i) * s.n + j] = s.d(s.n - 1 - i, s.n - 1 - j);
    CHECK(four_point_delta(rev, s.n).delta == doctest::Approx(base).epsilon(1e-13));

    std::vector<double> scaled = s.dist;
    for (double& v : scaled) v *= 3.5;
    CHECK(four_point_delta(scaled, s.n).delta == doctest::Approx(3.5 * base).epsilon(1e-12));
}

TEST_CASE("visual metric on a five-point star against the min-plus oracle") {
    // hub interior, five leaves of varying spoke length, all leaves boundary
    const std::vector<double> spokes{1.0, 1.2, 0.8, 1.5, 1.1};
    auto s = star_space(spokes, {0, 1, 1, 1, 1, 1});
    const double eps = 0.3;
    const auto vm = visual_metric(s, 0, eps);
    REQUIRE(vm.boundary_ids.size() == 5);

    // independent oracle: full rho matrix, Floyd-Warshall closure
    std::vector<double> rho(static_cast<std::size_t>(s.n) * s.n, 0.0);
    for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j)
            if (i != j)
                rho[static_cast<std::size_t>(i) * s.n + j] =
                    std::exp(-eps * gromov_product(s, i, j, 0));
    const auto closed = min_plus_closure_oracle(rho, s.n);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) {
            const int i = vm.boundary_ids[r], j = vm.boundary_ids[c];
            CHECK(vm.matrix[static_cast<std::size_t>(r) * 5 + c] ==
                  doctest::Approx(closed[static_cast<std::size_t>(i) * s.n + j]).epsilon(1e-12));
        }

    // one-link chains dominate, diagonal vanishes, symmetry holds
    for (int r = 0; r < 5; ++r) {
        CHECK(vm.matrix[static_cast<std::size_t>(r) * 5 + r] == 0.0);
        for (int c = 0; c < 5; ++c) {
            const int i = vm.boundary_ids[r], j = vm.boundary_ids[c];
            if (r != c)
                CHECK(vm.matrix[static_cast<std::size_t>(r) * 5 + c] <=
                      std::exp(-eps * gromov_product(s, i, j, 0)) + 1e-15);
            CHECK(vm.matrix[static_cast<std::size_t>(r) * 5 + c] ==
                  doctest::Approx(vm.matrix[static_cast<std::size_t>(c) * 5 + r]));
        }
    }
}

TEST_CASE("visual metric warns above the eps range and needs a boundary") {
    auto flat = star_space({1, 1, 1});
    CHECK_THROWS_AS((void)visual_metric(flat, 0, 0.3), Error);  // no boundary points

    auto sq = unit_square_corners();
    auto marked = make_space_unchecked(4, sq.dist, {0, 1, 1, 1});
    // delta = sqrt(2)-1 so 1/(5 delta) ~ 0.48
    CHECK(visual_metric(marked, 0, 0.6).warning != "");
    CHECK(visual_metric(marked, 0, 0.3).warning == "");
}

TEST_CASE("rough starlike constant on paths and stars") {
    auto path = path_space(6);
    const std::vector<int> far{5};
    CHECK(rough_starlike_constant(path, 0, far).M == 0.0);

    auto star = star_space({1.0, 2.0, 3.0});
    const std::vector<int> all_leaves{1, 2, 3};
    CHECK(rough_starlike_constant(star, 0, all_leaves).M == 0.0);

    const std::vector<int> one_leaf{1};
    const auto r = rough_starlike_constant(star, 0, one_leaf);
    CHECK(r.M == doctest::Approx(3.0));  // longest uncovered spoke
    CHECK(r.witness == 3);
}

TEST_CASE("rough starlike constant is monotone in the target set") {
    std::mt19937_64 rng(89);
    auto s = random_euclidean_space(10, rng);
    const std::vector<int> small{3};
    const std::vector<int> large{3, 7, 9};
    CHECK(rough_starlike_constant(s, 1, large).M <= rough_starlike_constant(s, 1, small).M);
}

TEST_CASE("default targets are the farthest points") {
    auto star = star_space({1.0, 2.0, 3.0});
    const auto r = rough_starlike_constant(star, 0);
    CHECK(r.targets == std::vector<int>{3});
}

TEST_CASE("epsilon0 matches the closed-form constants") {
    const auto [l0, e0] = epsilon0(0.0);
    CHECK(l0 == 15.0);
    CHECK(e0 == doctest::Approx(1.0 / 210.0).epsilon(1e-15));
    const auto [l1, e1] = epsilon0(1.0);
    CHECK(l1 == 6351.0);
    CHECK(e1 == doctest::Approx(1.0 / 88914.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)epsilon0(-0.1), Error);

    double prev = epsilon0(0.0).second;
    for (double d = 0.25; d <= 2.0; d += 0.25) {
        const double cur = epsilon0(d).second;
        CHECK(cur < prev);
        prev = cur;
    }
}
