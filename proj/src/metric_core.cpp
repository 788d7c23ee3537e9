#include "mlab/metric_core.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace mlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_owner(const PointSubset& s) {
    if (s.owner == nullptr) fail(errc::owner_mismatch, "subset has no owner space");
    if (s.members.empty()) fail(errc::empty_subset, "subset is empty");
    for (int i : s.members)
        if (i < 0 || i >= s.owner->n)
            fail(errc::index_out_of_range, "subset member " + std::to_string(i));
}

}  // namespace

int MarkedMetricSpace::interior_count() const {
    int c = 0;
    for (char b : boundary) c += (b == 0);
    return c;
}

int MarkedMetricSpace::boundary_count() const { return n - interior_count(); }

std::vector<int> MarkedMetricSpace::interior_points() const {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (!is_boundary(i)) out.push_back(i);
    return out;
}

std::vector<int> MarkedMetricSpace::boundary_points() const {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (is_boundary(i)) out.push_back(i);
    return out;
}

double MarkedMetricSpace::diameter() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m = std::max(m, d(i, j));
    return m;
}

std::vector<double> MarkedMetricSpace::restricted(std::span<const int> members) const {
    const int m = static_cast<int>(members.size());
    std::vector<double> out(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out[static_cast<std::size_t>(a) * m + b] = d(members[a], members[b]);
    return out;
}

ValidationOutcome validate_space(int n, std::span<const double> matrix,
                                 std::vector<char> boundary,
                                 std::vector<std::string> labels, double rel_tol) {
    ValidationOutcome out;
    if (n <= 0 || matrix.size() != static_cast<std::size_t>(n) * n ||
        boundary.size() != static_cast<std::size_t>(n))
        fail(errc::parse_error, "matrix/flag shape mismatch");
    auto at = [&](int i, int j) { return matrix[static_cast<std::size_t>(i) * n + j]; };

    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0.0)
            out.violations.push_back({errc::nonzero_diagonal, i, i, -1, at(i, i)});
        for (int j = 0; j < n; ++j) {
            double v = at(i, j);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                out.violations.push_back({errc::negative_entry, i, j, -1, v});
            } else if (i != j && v == 0.0) {
                // distinct points must be at positive distance; report as a
                // degenerate entry with the same witness shape
                out.violations.push_back({errc::negative_entry, i, j, -1, 0.0});
            }
            if (j > i && at(i, j) != at(j, i))
                out.violations.push_back({errc::asymmetric_matrix, i, j, -1, at(i, j) - at(j, i)});
        }
    }
    if (out.violations.empty()) {
        // triangle scan, slack relative to the largest side of the triple;
        // partitioned by the middle point, merged back in index order
        std::vector<std::vector<MetricViolation>> found(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(effective_threads())
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double dij = at(i, j);
                for (int k = j + 1; k < n; ++k) {
                    if (k == i) continue;
                    const double lhs = at(j, k);
                    const double rhs = dij + at(i, k);
                    if (lhs > rhs + rel_tol * std::max(lhs, rhs))
                        found[i].push_back({errc::triangle_violation, j, i, k, lhs - rhs});
                }
            }
        }
        for (const auto& per_middle : found)
            out.violations.insert(out.violations.end(), per_middle.begin(), per_middle.end());
    }
    if (out.violations.empty()) {
        MarkedMetricSpace s;
        s.n = n;
        s.dist.assign(matrix.begin(), matrix.end());
        s.boundary = std::move(boundary);
        s.labels = std::move(labels);
        out.space = std::move(s);
    }
    return out;
}

MarkedMetricSpace make_space_unchecked(int n, std::vector<double> matrix,
                                       std::vector<char> boundary,
                                       std::vector<std::string> labels) {
    MarkedMetricSpace s;
    s.n = n;
    s.dist = std::move(matrix);
    s.boundary = std::move(boundary);
    s.labels = std::move(labels);
    return s;
}

PointSubset neighborhood(const PointSubset& a, double eps) {
    check_owner(a);
    if (eps < 0) fail(errc::spec_invalid, "eps must be >= 0");
    const MarkedMetricSpace& s = *a.owner;
    PointSubset out{a.owner, {}};
    for (int x = 0; x < s.n; ++x) {
        for (int m : a.members) {
            if (s.d(x, m) <= eps) {
                out.members.push_back(x);
                break;
            }
        }
    }
    return out;
}

double directed_hausdorff(std::span<const double> dist, int n, std::span<const int> from,
                          std::span<const int> to, bool parallel) {
    const auto rows = static_cast<std::int64_t>(from.size());
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static) if (parallel) \
    num_threads(effective_threads())
    for (std::int64_t r = 0; r < rows; ++r) {
        const double* row = dist.data() + static_cast<std::size_t>(from[r]) * n;
        double best = kInf;
        for (int t : to) best = std::min(best, row[t]);
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff(const PointSubset& a, const PointSubset& b) {
    check_owner(a);
    check_owner(b);
    if (a.owner != b.owner) fail(errc::owner_mismatch, "subsets live in different spaces");
    const MarkedMetricSpace& s = *a.owner;
    const double ab = directed_hausdorff(s.dist, s.n, a.members, b.members, false);
    const double ba = directed_hausdorff(s.dist, s.n, b.members, a.members, false);
    return std::max(ab, ba);
}

double hausdorff_with_boundary(const MarkedSubspace& x1, const MarkedSubspace& x2) {
    if (x1.owner == nullptr || x2.owner == nullptr || x1.owner != x2.owner)
        fail(errc::owner_mismatch, "subspaces live in different spaces");
    if (x1.interior.empty() || x2.interior.empty() || x1.boundary.empty() || x2.boundary.empty())
        fail(errc::empty_part, "each subspace needs a nonempty interior and boundary part");
    const PointSubset i1{x1.owner, x1.interior}, i2{x2.owner, x2.interior};
    const PointSubset b1{x1.owner, x1.boundary}, b2{x2.owner, x2.boundary};
    return hausdorff(i1, i2) + hausdorff(b1, b2);
}

namespace {

// Exact minimum set cover over ball masks, DP on covered-subset masks.
int min_net_exact(const std::vector<std::uint32_t>& ball, int n) {
    const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
    std::vector<std::uint8_t> cost(static_cast<std::size_t>(full) + 1, 255);
    cost[0] = 0;
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (cost[mask] == 255) continue;
        if (mask == full) break;
        const int lowest = std::countr_one(mask);  // first uncovered point
        for (int i = 0; i < n; ++i) {
            if (!(ball[i] >> lowest & 1u)) continue;
            const std::uint32_t next = mask | ball[i];
            cost[next] = std::min<int>(cost[next], cost[mask] + 1);
        }
    }
    return cost[full];
}

// Exact maximum independent set, branch and bound on the conflict graph.
int max_independent_exact(const std::vector<std::uint32_t>& conflict, int n) {
    int best = 0;
    auto rec = [&](auto&& self, std::uint32_t candidates, int size) -> void {
        if (size + std::popcount(candidates) <= best) return;
        if (candidates == 0) {
            best = std::max(best, size);
            return;
        }
        const int v = std::countr_zero(candidates);
        self(self, candidates & ~(1u << v) & ~conflict[v], size + 1);  // take v
        self(self, candidates & ~(1u << v), size);                    // skip v
    };
    rec(rec, n == 32 ? ~0u : ((1u << n) - 1), 0);
    return best;
}

}  // namespace

NetSeparationResult net_and_separation(const MarkedMetricSpace& space, double eps, int exact_cap) {
    if (!(eps > 0)) fail(errc::spec_invalid, "eps must be > 0");
    const int n = space.n;
    NetSeparationResult out;
    if (n <= std::min(exact_cap, 31)) {
        std::vector<std::uint32_t> ball(n, 0), conflict(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (space.d(i, j) <= eps) ball[i] |= 1u << j;
                if (i != j && space.d(i, j) < eps) conflict[i] |= 1u << j;
            }
        out.net_size = min_net_exact(ball, n);
        out.sep_size = max_independent_exact(conflict, n);
        out.exact = true;
        // every maximal eps-separated set is an eps-net
        if (out.net_size > out.sep_size)
            fail(errc::spec_invalid, "internal: Net_eps > Sep_eps on an exact result");
        return out;
    }
    // Greedy set cover: largest uncovered ball first, ties to smallest index.
    std::vector<char> covered(n, 0);
    int left = n;
    while (left > 0) {
        int pick = -1, gain = -1;
        for (int i = 0; i < n; ++i) {
            int g = 0;
            for (int j = 0; j < n; ++j) g += (!covered[j] && space.d(i, j) <= eps);
            if (g > gain) {
                gain = g;
                pick = i;
            }
        }
        for (int j = 0; j < n; ++j)
            if (space.d(pick, j) <= eps && !covered[j]) {
                covered[j] = 1;
                --left;
            }
        ++out.net_size;
    }
    // Greedy maximal separated set in index order (a lower bound).
    std::vector<int> chosen;
    for (int i = 0; i < n; ++i) {
        bool ok = true;
        for (int c : chosen)
            if (space.d(i, c) < eps) {
                ok = false;
                break;
            }
        if (ok) chosen.push_back(i);
    }
    out.sep_size = static_cast<int>(chosen.size());
    out.exact = false;
    return out;
}

}  // namespace mlab
