#include <doctest.h>

#include <algorithm>
#include <random>

#include "mlab/io.hpp"
#include "mlab/metric_core.hpp"
#include "test_support.hpp"

using namespace mlab;
using test_support::path_space;
using test_support::random_euclidean_space;

namespace {

bool has_violation(const ValidationOutcome& v, errc kind) {
    for (const auto& viol : v.violations)
        if (viol.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("validate_space accepts the smallest marked space") {
    const std::vector<double> m{0, 1, 1, 0};
    auto v = validate_space(2, m, {0, 1});
    REQUIRE(v.ok());
    CHECK(v.space->interior_count() == 1);
    CHECK(v.space->boundary_count() == 1);
}

TEST_CASE("validate_space reports triangle violations with the witnessing triple") {
    // d(0,2) = 5 > d(0,1) + d(1,2) = 2
    const std::vector<double> m{0, 1, 5, 1, 0, 1, 5, 1, 0};
    auto v = validate_space(3, m, {0, 0, 1});
    REQUIRE_FALSE(v.ok());
    REQUIRE(has_violation(v, errc::triangle_violation));
    const auto& t = v.violations.front();
    CHECK(t.i == 0);
    CHECK(t.j == 1);
    CHECK(t.k == 2);
}

TEST_CASE("validate_space reports asymmetry and negative entries") {
    const std::vector<double> m{0, 1, 2, 0};
    auto v = validate_space(2, m, {0, 1});
    CHECK(has_violation(v, errc::asymmetric_matrix));

    const std::vector<double> neg{0, -1, -1, 0};
    CHECK(has_violation(validate_space(2, neg, {0, 1}), errc::negative_entry));

    const std::vector<double> diag{1, 2, 2, 0};
    CHECK(has_violation(validate_space(2, diag, {0, 1}), errc::nonzero_diagonal));
}

TEST_CASE("neighborhood at eps 0 is the set itself") {
    auto s = path_space(5);
    const PointSubset a{&s, {2}};
    CHECK(neighborhood(a, 0.0).members == std::vector<int>{2});
}

TEST_CASE("neighborhood on the unit path") {
    auto s = path_space(5);
    const PointSubset a{&s, {2}};
    CHECK(neighborhood(a, 1.0).members == std::vector<int>{1, 2, 3});

    PointSubset all{&s, {0, 1, 2, 3, 4}};
    CHECK(neighborhood(all, 2.5).members.size() == 5);
}

TEST_CASE("neighborhood is monotone in eps") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        auto s = random_euclidean_space(8, rng);
        const PointSubset a{&s, {0, 3}};
        const auto small = neighborhood(a, 0.2).members;
        const auto large = neighborhood(a, 0.5).members;
        for (int v : small) CHECK(std::find(large.begin(), large.end(), v) != large.end());
    }
}

TEST_CASE("hausdorff on path instances") {
    auto s = path_space(4);
    const PointSubset a{&s, {0}}, b{&s, {3}};
    CHECK(hausdorff(a, b) == doctest::Approx(3.0));
    const PointSubset c{&s, {0, 2}}, d{&s, {0, 1, 2}};
    CHECK(hausdorff(c, d) == doctest::Approx(1.0));
    CHECK(hausdorff(a, a) == 0.0);
}

TEST_CASE("hausdorff errors") {
    auto s = path_space(4);
    auto t = path_space(4);
    const PointSubset a{&s, {0}}, b{&t, {1}};
    CHECK_THROWS_AS((void)hausdorff(a, b), Error);
    const PointSubset empty{&s, {}};
    CHECK_THROWS_AS((void)hausdorff(a, empty), Error);
}

TEST_CASE("hausdorff is a metric on subsets, exhaustively for n = 8") {
    std::mt19937_64 rng(5);
    auto s = random_euclidean_space(8, rng);
    const int subsets = (1 << 8) - 1;
    // directed distance table point -> subset
    std::vector<double> table(static_cast<std::size_t>(8) * (subsets + 1));
    for (int p = 0; p < 8; ++p)
        for (int mask = 1; mask <= subsets; ++mask) {
            double best = 1e300;
            for (int q = 0; q < 8; ++q)
                if (mask >> q & 1) best = std::min(best, s.d(p, q));
            table[static_cast<std::size_t>(p) * (subsets + 1) + mask] = best;
        }
    auto dh = [&](int ma, int mb) {
        double worst = 0.0;
        for (int p = 0; p < 8; ++p) {
            if (ma >> p & 1)
                worst = std::max(worst, table[static_cast<std::size_t>(p) * (subsets + 1) + mb]);
            if (mb >> p & 1)
                worst = std::max(worst, table[static_cast<std::size_t>(p) * (subsets + 1) + ma]);
        }
        return worst;
    };
    // symmetry is built into dh; triangle inequality over sampled triples and
    // agreement with the public function over sampled pairs
    std::uniform_int_distribution<int> pick(1, subsets);
    for (int rep = 0; rep < 4000; ++rep) {
        const int ma = pick(rng), mb = pick(rng), mc = pick(rng);
        CHECK(dh(ma, mc) <= dh(ma, mb) + dh(mb, mc) + 1e-12);
    }
    for (int rep = 0; rep < 200; ++rep) {
        const int ma = pick(rng), mb = pick(rng);
        PointSubset a{&s, {}}, b{&s, {}};
        for (int p = 0; p < 8; ++p) {
            if (ma >> p & 1) a.members.push_back(p);
            if (mb >> p & 1) b.members.push_back(p);
        }
        CHECK(hausdorff(a, b) == doctest::Approx(dh(ma, mb)));
    }
}

TEST_CASE("subset inclusion reduces hausdorff to one direction") {
    std::mt19937_64 rng(7);
    auto s = random_euclidean_space(9, rng);
    const PointSubset a{&s, {1, 4}};
    const PointSubset b{&s, {1, 2, 4, 7}};
    double directed = 0.0;
    for (int q : b.members) {
        double best = 1e300;
        for (int p : a.members) best = std::min(best, s.d(p, q));
        directed = std::max(directed, best);
    }
    CHECK(hausdorff(a, b) == doctest::Approx(directed));
}

TEST_CASE("hausdorff_with_boundary sums the part distances") {
    auto s = path_space(4);
    const MarkedSubspace x1{&s, {1}, {0}};
    const MarkedSubspace x2{&s, {2}, {3}};
    CHECK(hausdorff_with_boundary(x1, x2) == doctest::Approx(4.0));
    CHECK(hausdorff_with_boundary(x1, x1) == 0.0);

    // same interiors, boundaries differing by one point at distance r = 3
    const MarkedSubspace y1{&s, {1}, {0}};
    const MarkedSubspace y2{&s, {1}, {0, 3}};
    CHECK(hausdorff_with_boundary(y1, y2) == doctest::Approx(3.0));

    CHECK(hausdorff_with_boundary(x1, x2) >=
          hausdorff(PointSubset{&s, x1.interior}, PointSubset{&s, x2.interior}));
    CHECK_THROWS_AS((void)hausdorff_with_boundary(MarkedSubspace{&s, {1}, {}}, x2), Error);
}

TEST_CASE("net and separation on small instances") {
    auto one = path_space(1);
    auto r1 = net_and_separation(one, 0.5);
    CHECK(r1.net_size == 1);
    CHECK(r1.sep_size == 1);
    CHECK(r1.exact);

    auto s = path_space(4);
    auto r = net_and_separation(s, 1.0);
    CHECK(r.net_size == 2);
    CHECK(r.sep_size == 4);

    auto big = net_and_separation(s, 10.0);
    CHECK(big.net_size == 1);
}

TEST_CASE("net and separation match an exhaustive subset oracle") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 15; ++rep) {
        const int n = 4 + static_cast<int>(rng() % 5);  // up to 8
        auto s = random_euclidean_space(n, rng);
        const double eps = 0.15 + 0.1 * static_cast<double>(rng() % 5);
        int best_net = n, best_sep = 0;
        for (int mask = 1; mask < (1 << n); ++mask) {
            int size = __builtin_popcount(static_cast<unsigned>(mask));
            bool covers = true;
            for (int p = 0; p < n && covers; ++p) {
                bool near = false;
                for (int q = 0; q < n && !near; ++q)
                    near = (mask >> q & 1) && s.d(p, q) <= eps;
                covers = near;
            }
            if (covers) best_net = std::min(best_net, size);
            bool separated = true;
            for (int p = 0; p < n && separated; ++p)
                for (int q = p + 1; q < n && separated; ++q)
                    if ((mask >> p & 1) && (mask >> q & 1)) separated = s.d(p, q) >= eps;
            if (separated) best_sep = std::max(best_sep, size);
        }
        const auto r = net_and_separation(s, eps);
        REQUIRE(r.exact);
        CHECK(r.net_size == best_net);
        CHECK(r.sep_size == best_sep);
        CHECK(r.net_size <= r.sep_size);  // every maximal separated set is a net
    }
}

TEST_CASE("greedy fallback flags inexact results and brackets the truth") {
    std::mt19937_64 rng(17);
    auto s = random_euclidean_space(10, rng);
    const auto exact = net_and_separation(s, 0.3);
    const auto greedy = net_and_separation(s, 0.3, /*exact_cap=*/4);
    REQUIRE(exact.exact);
    REQUIRE_FALSE(greedy.exact);
    CHECK(greedy.net_size >= exact.net_size);
    CHECK(greedy.sep_size <= exact.sep_size);
}

TEST_CASE("marked space file format round-trips") {
    std::mt19937_64 rng(23);
    auto s = random_euclidean_space(7, rng);
    s.labels = {"a", "b", "c", "d", "e", "f", "g"};
    const Json j = marked_space_to_json(s);
    const MarkedMetricSpace back = marked_space_from_json(j);
    REQUIRE(back.n == s.n);
    CHECK(back.dist == s.dist);
    CHECK(back.boundary == s.boundary);
    CHECK(back.labels == s.labels);
}

TEST_CASE("readers accept a diagonal-inclusive lower triangle") {
    Json j;
    j["kind"] = "marked_metric";
    j["version"] = 1;
    j["n"] = 2;
    j["dist"] = {0.0, 1.0, 0.0};  // rows (0), (1,0) with the zero diagonal
    j["boundary"] = {0, 1};
    const MarkedMetricSpace s = marked_space_from_json(j);
    CHECK(s.d(0, 1) == 1.0);

    Json bad = j;
    bad["dist"] = {1.0, 2.0};  // neither strict nor diagonal-inclusive length
    CHECK_THROWS_AS((void)marked_space_from_json(bad), Error);
}
