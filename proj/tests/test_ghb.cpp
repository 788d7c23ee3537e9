#include <doctest.h>

#include <cmath>
#include <random>

#include "mlab/experiments.hpp"
#include "mlab/ghb.hpp"
#include "test_support.hpp"

using namespace mlab;
using test_support::random_euclidean_space;

namespace {

// two-point marked space: interior point 0, boundary point 1, distance d
MarkedMetricSpace two_point(double d) {
    return make_space_unchecked(2, {0, d, d, 0}, {0, 1});
}

MarkedMetricSpace with_flags(const MarkedMetricSpace& s, std::vector<char> flags) {
    return make_space_unchecked(s.n, s.dist, std::move(flags), s.labels);
}

}  // namespace

TEST_CASE("distortion of the two-point example is 1") {
    const auto x = two_point(1.0);
    const auto y = two_point(2.0);
    const Correspondence r{{{0, 0}, {1, 1}}};
    CHECK(distortion(r, x, y) == doctest::Approx(1.0));
}

TEST_CASE("distortion of an isometry graph is 0") {
    std::mt19937_64 rng(3);
    const auto x = random_euclidean_space(6, rng);
    Correspondence r;
    for (int i = 0; i < x.n; ++i) r.pairs.emplace_back(i, i);
    CHECK(distortion(r, x, x) == 0.0);
}

TEST_CASE("adding pairs never decreases distortion") {
    std::mt19937_64 rng(19);
    for (int rep = 0; rep < 20; ++rep) {
        const auto x = random_euclidean_space(5, rng);
        const auto y = random_euclidean_space(5, rng);
        Correspondence r;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (x.is_boundary(i) == y.is_boundary(j)) {
                    r.pairs.emplace_back(i, j);
                    break;
                }
        for (int j = 0; j < 5; ++j)
            for (int i = 0; i < 5; ++i)
                if (x.is_boundary(i) == y.is_boundary(j)) {
                    r.pairs.emplace_back(i, j);
                    break;
                }
        const double base = distortion(r, x, y);
        Correspondence bigger = r;
        bigger.pairs.emplace_back(0, y.n - 1);  // any extra pair, possibly mixed
        CHECK(max_distortion(x.dist, x.n, y.dist, y.n, bigger.pairs, false) >= base);
    }
}

TEST_CASE("distortion validates the four surjectivity conditions") {
    const auto x = two_point(1.0);
    const auto y = two_point(1.0);
    const Correspondence missing_boundary{{{0, 0}}};
    CHECK_THROWS_AS((void)distortion(missing_boundary, x, y), Error);
    const Correspondence mixed_only{{{0, 1}, {1, 0}}};  // mixed pairs carry no coverage
    CHECK_THROWS_AS((void)distortion(mixed_only, x, y), Error);

    // mixed pairs are permitted on top of a covering relation
    const auto z = two_point(2.0);
    const Correspondence covering{{{0, 0}, {1, 1}}};
    Correspondence with_mixed = covering;
    with_mixed.pairs.emplace_back(0, 1);
    CHECK(distortion(with_mixed, x, z) >= distortion(covering, x, z));
}

TEST_CASE("ghb_exact on isometric spaces with matched flags is [0,0]") {
    std::mt19937_64 rng(29);
    const auto x = random_euclidean_space(5, rng);
    const auto b = ghb_exact(x, x);
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 0.0);
    CHECK(b.method == BracketMethod::exact);
    CHECK(distortion(b.witness, x, x) == 0.0);
}

TEST_CASE("ghb_exact two-point bracket is [0.5, 1]") {
    const auto x = two_point(1.0);
    const auto y = two_point(2.0);
    const auto b = ghb_exact(x, y);
    CHECK(b.lower == doctest::Approx(0.5));
    CHECK(b.upper == doctest::Approx(1.0));
    CHECK(distortion(b.witness, x, y) == doctest::Approx(1.0));
}

TEST_CASE("moving the boundary flag separates spaces the plain GH distance cannot") {
    // path 0-1-2 with d(0,1)=1, d(1,2)=2; flag one far end vs the other
    std::vector<double> d{0, 1, 3, 1, 0, 2, 3, 2, 0};
    const auto x = make_space_unchecked(3, d, {1, 0, 0});
    const auto y = make_space_unchecked(3, d, {0, 0, 1});
    const auto marked = ghb_exact(x, y);
    CHECK(marked.upper > 0.5);
    const auto plain = gh_unmarked(x.dist, x.n, y.dist, y.n, {});
    CHECK(plain.upper == doctest::Approx(0.0));  // identical unmarked spaces
}

TEST_CASE("ghb_exact rejects oversize inputs and empty boundaries") {
    std::mt19937_64 rng(31);
    const auto x = random_euclidean_space(9, rng);
    const auto y = random_euclidean_space(9, rng);
    CHECK_THROWS_AS((void)ghb_exact(x, y, 14), Error);
    const auto no_boundary = with_flags(x, std::vector<char>(9, 0));
    CHECK_THROWS_AS((void)ghb_exact(no_boundary, no_boundary, 20), Error);
}

namespace {

// Independent oracle: enumerate every type-respecting double assignment
// (f: X->Y, g: Y->X) and take the least distortion of the union.
double min_distortion_bruteforce(const MarkedMetricSpace& x, const MarkedMetricSpace& y) {
    std::vector<std::vector<int>> cands_xy(x.n), cands_yx(y.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < y.n; ++j)
            if (x.is_boundary(i) == y.is_boundary(j)) cands_xy[i].push_back(j);
    for (int j = 0; j < y.n; ++j)
        for (int i = 0; i < x.n; ++i)
            if (x.is_boundary(i) == y.is_boundary(j)) cands_yx[j].push_back(i);

    std::vector<std::pair<int, int>> pairs(static_cast<std::size_t>(x.n) + y.n);
    double best = 1e300;
    auto dis = [&]() {
        double worst = 0.0;
        for (std::size_t a = 0; a < pairs.size(); ++a)
            for (std::size_t b = a + 1; b < pairs.size(); ++b)
                worst = std::max(worst, std::abs(x.d(pairs[a].first, pairs[b].first) -
                                                 y.d(pairs[a].second, pairs[b].second)));
        return worst;
    };
    auto rec = [&](auto&& self, int slot) -> void {
        if (slot == x.n + y.n) {
            best = std::min(best, dis());
            return;
        }
        if (slot < x.n) {
            for (int j : cands_xy[slot]) {
                pairs[slot] = {slot, j};
                self(self, slot + 1);
            }
        } else {
            for (int i : cands_yx[slot - x.n]) {
                pairs[slot] = {i, slot - x.n};
                self(self, slot + 1);
            }
        }
    };
    rec(rec, 0);
    return best;
}

}  // namespace

TEST_CASE("branch and bound matches a brute-force enumeration") {
    std::mt19937_64 rng(83);
    for (int rep = 0; rep < 12; ++rep) {
        const int nx = 2 + static_cast<int>(rng() % 3);
        const int ny = 2 + static_cast<int>(rng() % 3);
        const auto x = random_euclidean_space(nx, rng);
        const auto y = random_euclidean_space(ny, rng);
        const auto exact = ghb_exact(x, y);
        CHECK(exact.upper == doctest::Approx(min_distortion_bruteforce(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("exact brackets are sound, symmetric and triangle-compatible") {
    std::mt19937_64 rng(37);
    std::vector<MarkedMetricSpace> spaces;
    for (int i = 0; i < 12; ++i) spaces.push_back(random_euclidean_space(3 + i % 4, rng));
    std::vector<GhbBracket> vs_next;
    for (std::size_t i = 0; i + 1 < spaces.size(); ++i) {
        const auto b = ghb_exact(spaces[i], spaces[i + 1]);
        CHECK(b.lower <= b.upper);
        CHECK(b.upper <= 2 * b.lower + 1e-12);
        const auto rev = ghb_exact(spaces[i + 1], spaces[i]);
        CHECK(b.lower == doctest::Approx(rev.lower));
        CHECK(b.upper == doctest::Approx(rev.upper));
        vs_next.push_back(b);
    }
    for (std::size_t i = 0; i + 2 < spaces.size(); ++i) {
        const auto xz = ghb_exact(spaces[i], spaces[i + 2]);
        CHECK(xz.lower <= vs_next[i].upper + vs_next[i + 1].upper + 1e-12);
    }
}

TEST_CASE("heuristic finds the exact optimum with the stated budget") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 8; ++rep) {
        const int nx = 3 + static_cast<int>(rng() % 3);
        const int ny = 3 + static_cast<int>(rng() % 3);
        const auto x = random_euclidean_space(nx, rng);
        const auto y = random_euclidean_space(ny, rng);
        const auto exact = ghb_exact(x, y);
        HeuristicOptions opt;
        opt.budget = 10LL * (nx * ny) * (nx * ny);
        opt.restarts = 5;
        const auto h = ghb_heuristic(x, y, opt);
        CHECK(h.upper >= exact.upper - 1e-12);
        CHECK(h.upper == doctest::Approx(exact.upper));
        CHECK(gh_boundary_lower_bound(x, y) <= h.upper + 1e-12);
    }
}

TEST_CASE("heuristic on the same object reaches 0 in one restart") {
    std::mt19937_64 rng(43);
    const auto x = random_euclidean_space(8, rng);
    HeuristicOptions opt;
    opt.budget = 50;
    opt.restarts = 1;
    const auto b = ghb_heuristic(x, x, opt);
    CHECK(b.upper == 0.0);
}

TEST_CASE("heuristic brackets are deterministic under a fixed seed") {
    std::mt19937_64 rng(67);
    const auto x = random_euclidean_space(9, rng);
    const auto y = random_euclidean_space(10, rng);
    HeuristicOptions opt;
    opt.budget = 4000;
    opt.seed = 99;
    const auto a = ghb_heuristic(x, y, opt);
    const auto b = ghb_heuristic(x, y, opt);
    CHECK(a.upper == b.upper);
    CHECK(a.lower == b.lower);
    CHECK(a.witness.pairs == b.witness.pairs);
}

TEST_CASE("gh_boundary_lower_bound basics") {
    std::mt19937_64 rng(47);
    const auto x = random_euclidean_space(6, rng);
    CHECK(gh_boundary_lower_bound(x, x) == 0.0);

    // diameters 1 and 3 force at least |3-1|/2 = 1
    const auto small = two_point(1.0);
    const auto large = two_point(3.0);
    CHECK(gh_boundary_lower_bound(small, large) >= 1.0);
}

TEST_CASE("eps-isometry certification") {
    std::mt19937_64 rng(53);
    const auto x = random_euclidean_space(6, rng);
    std::vector<int> identity(6);
    for (int i = 0; i < 6; ++i) identity[i] = i;
    CHECK(check_eps_isometry_with_boundary(identity, x, x) == 0.0);

    const auto y = random_euclidean_space(6, rng);
    const auto b = ghb_exact(x, y);
    // map induced from the witnessing correspondence: first partner per point
    std::vector<int> f(6, -1);
    for (auto [i, j] : b.witness.pairs)
        if (f[i] < 0) f[i] = j;
    for (int i = 0; i < 6; ++i) REQUIRE(f[i] >= 0);
    const double eps_cert = check_eps_isometry_with_boundary(f, x, y);
    CHECK(eps_cert <= 2 * b.upper + 1e-12);

    // any certified map bounds the bracket: upper <= 3 eps
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<int> g(6);
        for (int i = 0; i < 6; ++i) g[i] = static_cast<int>(rng() % 6);
        const double eps = check_eps_isometry_with_boundary(g, x, y);
        if (!std::isfinite(eps)) continue;
        CHECK(b.upper <= 3 * eps + 1e-12);
    }
}

TEST_CASE("constant map certification equals the worst of the three defects") {
    const auto x = two_point(1.0);
    std::vector<double> d{0, 1, 2, 1, 0, 1.5, 2, 1.5, 0};
    const auto y = make_space_unchecked(3, d, {0, 0, 1});
    const std::vector<int> f{0, 0};  // everything onto point 0 of Y
    // dis(f) = d_X(0,1) = 1; interior defect = d_Y(1,0) = 1;
    // boundary defect = d_Y(2,0) = 2
    CHECK(check_eps_isometry_with_boundary(f, x, y) == doctest::Approx(2.0));
}

TEST_CASE("pointed ball distance") {
    std::mt19937_64 rng(59);
    const auto x = random_euclidean_space(7, rng, false);
    SUBCASE("identical pointed spaces give a zero bracket") {
        const auto b = pointed_gh_ball_distance(x.dist, x.n, 2, x.dist, x.n, 2, 0.4);
        CHECK(b.upper == doctest::Approx(0.0));
    }
    SUBCASE("R beyond both diameters reproduces the whole-space bracket") {
        const auto y = random_euclidean_space(6, rng, false);
        const auto ball = pointed_gh_ball_distance(x.dist, x.n, 0, y.dist, y.n, 0, 100.0);
        GhUnmarkedOptions opt;
        opt.forced = {{0, 0}};
        const auto whole = gh_unmarked(x.dist, x.n, y.dist, y.n, opt);
        CHECK(ball.upper == doctest::Approx(whole.upper));
        CHECK(ball.lower == doctest::Approx(whole.lower));
    }
}

TEST_CASE("parallel and serial distortion kernels agree bitwise") {
    std::mt19937_64 rng(97);
    const auto x = random_euclidean_space(40, rng);
    const auto y = random_euclidean_space(40, rng);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 40; ++i) {
        pairs.emplace_back(i, static_cast<int>(rng() % 40));
        pairs.emplace_back(static_cast<int>(rng() % 40), i);
    }
    CHECK(max_distortion(x.dist, x.n, y.dist, y.n, pairs, true) ==
          max_distortion(x.dist, x.n, y.dist, y.n, pairs, false));
}

TEST_CASE("unmarked exact bracket collapses to the GH value") {
    std::mt19937_64 rng(61);
    const auto x = random_euclidean_space(5, rng, false);
    const auto y = random_euclidean_space(5, rng, false);
    const auto b = gh_unmarked(x.dist, x.n, y.dist, y.n, {});
    CHECK(b.method == BracketMethod::exact);
    CHECK(b.lower == doctest::Approx(b.upper));
    CHECK(b.upper >= std::abs(x.diameter() - y.diameter()) / 2.0 - 1e-12);
}
