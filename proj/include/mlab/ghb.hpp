#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mlab/metric_core.hpp"

namespace mlab {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// A relation between two marked spaces. Pairs may be interior-interior,
/// boundary-boundary, or mixed; only the first two kinds count toward the
/// four surjectivity conditions.
struct Correspondence {
    std::vector<std::pair<int, int>> pairs;
};

enum class BracketMethod { exact, heuristic };

/// Two-sided enclosure of d_GHB: exact results satisfy
/// lower = m/2 <= d_GHB <= m = upper for m = inf dis(R).
struct GhbBracket {
    double lower = 0.0;
    double upper = 0.0;
    BracketMethod method = BracketMethod::exact;
    Correspondence witness;  // attains the upper end
};

/// Value bracket for the unmarked GH distance (d_GH = inf dis(R) / 2), used
/// by the boundary lower bound and the pointed-ball comparisons. Exact
/// results collapse to a point.
struct GhBracket {
    double lower = 0.0;
    double upper = 0.0;
    BracketMethod method = BracketMethod::exact;
    Correspondence witness;
};

/// sup over pair-of-pairs of |d_X - d_Y| after validating the four
/// surjectivity conditions. Throws InvalidCorrespondence naming an
/// uncovered point otherwise.
double distortion(const Correspondence& r, const MarkedMetricSpace& x,
                  const MarkedMetricSpace& y);

/// Raw distortion kernel, no validation. Parallel over the pair index; the
/// serial path is the identical loop.
double max_distortion(std::span<const double> dx, int nx, std::span<const double> dy, int ny,
                      std::span<const std::pair<int, int>> pairs, bool parallel);

/// Exact minimum distortion over type-respecting correspondences via branch
/// and bound (points ordered by decreasing eccentricity, annealed incumbent,
/// per-branch pruning). Bracket [m/2, m] with the witnessing R.
GhbBracket ghb_exact(const MarkedMetricSpace& x, const MarkedMetricSpace& y,
                     int size_cap = 14, bool parallel = true);

struct HeuristicOptions {
    long long budget = 20000;  // total iterations across restarts
    int restarts = 5;
    std::uint64_t seed = kDefaultSeed;
    std::vector<int> hint_xy;  // optional initial partner per X point
    std::vector<int> hint_yx;  // optional initial partner per Y point
    bool parallel = true;
};

/// Simulated annealing over double assignments augmented to correspondences;
/// deterministic under a fixed seed. upper = dis(best R); lower =
/// max(upper/2, gh_boundary_lower_bound).
GhbBracket ghb_heuristic(const MarkedMetricSpace& x, const MarkedMetricSpace& y,
                         const HeuristicOptions& opt = {});

/// Certified lower bound from d_GH(completions) + d_GH(boundaries), each via
/// the exact unmarked machinery when small enough plus the |diam-diam|/2
/// floor.
double gh_boundary_lower_bound(const MarkedMetricSpace& x, const MarkedMetricSpace& y,
                               int exact_cap = 14);

/// Least eps for which the total map f (indices of Y per point of X)
/// satisfies all three clauses: max of dis(f), the covering defect of Y's
/// interior by f(interior X), and of Y's boundary by f(boundary X).
double check_eps_isometry_with_boundary(std::span<const int> f, const MarkedMetricSpace& x,
                                        const MarkedMetricSpace& y);

struct GhUnmarkedOptions {
    int exact_cap = 14;
    bool force_heuristic = false;
    long long budget = 20000;
    int restarts = 5;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::pair<int, int>> forced;  // pairs pinned into every R
    std::vector<int> hint_xy;
    std::vector<int> hint_yx;
    bool parallel = true;
};

/// Unmarked GH bracket between two plain distance matrices.
GhBracket gh_unmarked(std::span<const double> dx, int nx, std::span<const double> dy, int ny,
                      const GhUnmarkedOptions& opt = {});

}  // namespace mlab
