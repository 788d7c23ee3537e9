#include "mlab/ghb.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mlab/common.hpp"

namespace mlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Internal view of one search side: distances plus a type per point
// (0 interior, 1 boundary; all 0 in unmarked mode).
struct Side {
    int n = 0;
    std::span<const double> dist;
    std::vector<int> type;

    double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
    double diameter() const {
        double m = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m = std::max(m, d(i, j));
        return m;
    }
    std::vector<int> ecc_order() const {
        std::vector<double> ecc(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ecc[i] = std::max(ecc[i], d(i, j));
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return ecc[a] > ecc[b]; });
        return order;
    }
};

Side make_side(std::span<const double> dist, int n, const std::vector<int>& type) {
    return Side{n, dist, type};
}

std::vector<int> marked_types(const MarkedMetricSpace& s) {
    std::vector<int> t(s.n);
    for (int i = 0; i < s.n; ++i) t[i] = s.is_boundary(i) ? 1 : 0;
    return t;
}

struct SearchResult {
    double value = kInf;
    std::vector<std::pair<int, int>> pairs;
};

double pairs_distortion(const Side& x, const Side& y,
                        std::span<const std::pair<int, int>> pairs) {
    double worst = 0.0;
    const auto p = static_cast<std::int64_t>(pairs.size());
    for (std::int64_t a = 0; a < p; ++a)
        for (std::int64_t b = a + 1; b < p; ++b)
            worst = std::max(worst, std::abs(x.d(pairs[a].first, pairs[b].first) -
                                             y.d(pairs[a].second, pairs[b].second)));
    return worst;
}

// ---------------------------------------------------------------------------
// Simulated annealing over double assignments (f: X->Y, g: Y->X). The union
// of both graphs is always a valid type-respecting correspondence.
// ---------------------------------------------------------------------------

struct AnnealState {
    std::vector<std::pair<int, int>> pairs;  // entries 0..nx-1 are (x, f(x)), rest (g(y), y)
    std::vector<char> frozen;                // forced entries never move
    double cost = 0.0;
    int arg_a = -1, arg_b = -1;  // pair-of-pairs attaining cost
};

void recompute_cost(const Side& x, const Side& y, AnnealState& st) {
    st.cost = 0.0;
    st.arg_a = st.arg_b = -1;
    const int p = static_cast<int>(st.pairs.size());
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) {
            const double c = std::abs(x.d(st.pairs[a].first, st.pairs[b].first) -
                                      y.d(st.pairs[a].second, st.pairs[b].second));
            if (c > st.cost) {
                st.cost = c;
                st.arg_a = a;
                st.arg_b = b;
            }
        }
}

// Greedy double assignment: each point takes the partner minimizing the
// partial distortion so far, high-eccentricity points first.
AnnealState greedy_state(const Side& x, const Side& y,
                         std::span<const std::pair<int, int>> forced) {
    AnnealState st;
    st.pairs.assign(static_cast<std::size_t>(x.n) + y.n, {-1, -1});
    st.frozen.assign(st.pairs.size(), 0);
    for (auto [fx, fy] : forced) {
        st.pairs[fx] = {fx, fy};
        st.frozen[fx] = 1;
        st.pairs[static_cast<std::size_t>(x.n) + fy] = {fx, fy};
        st.frozen[static_cast<std::size_t>(x.n) + fy] = 1;
    }
    std::vector<std::pair<int, int>> placed(forced.begin(), forced.end());
    auto eccentricities = [](const Side& s) {
        std::vector<double> ecc(s.n, 0.0);
        for (int i = 0; i < s.n; ++i)
            for (int j = 0; j < s.n; ++j) ecc[i] = std::max(ecc[i], s.d(i, j));
        return ecc;
    };
    const std::vector<double> ecc_x = eccentricities(x);
    const std::vector<double> ecc_y = eccentricities(y);
    // ties in partial distortion break toward matching eccentricity, so an
    // exact partner (isometric inputs) wins immediately
    auto best_partner = [&](int idx, bool x_side) {
        const Side& own = x_side ? x : y;
        const Side& other = x_side ? y : x;
        const std::vector<double>& own_ecc = x_side ? ecc_x : ecc_y;
        const std::vector<double>& other_ecc = x_side ? ecc_y : ecc_x;
        std::pair<double, double> best{kInf, kInf};
        int pick = -1;
        for (int cand = 0; cand < other.n; ++cand) {
            if (other.type[cand] != own.type[idx]) continue;
            double c = 0.0;
            for (auto [px, py] : placed) {
                const double v = x_side ? std::abs(own.d(idx, px) - other.d(cand, py))
                                        : std::abs(other.d(cand, px) - own.d(idx, py));
                c = std::max(c, v);
                if (c > best.first) break;
            }
            const std::pair<double, double> key{c, std::abs(own_ecc[idx] - other_ecc[cand])};
            if (key < best) {
                best = key;
                pick = cand;
            }
        }
        return pick;
    };
    for (int xi : x.ecc_order()) {
        if (st.frozen[xi]) continue;
        const int partner = best_partner(xi, true);
        st.pairs[xi] = {xi, partner};
        placed.emplace_back(xi, partner);
    }
    for (int yi : y.ecc_order()) {
        const std::size_t slot = static_cast<std::size_t>(x.n) + yi;
        if (st.frozen[slot]) continue;
        const int partner = best_partner(yi, false);
        st.pairs[slot] = {partner, yi};
        placed.emplace_back(partner, yi);
    }
    recompute_cost(x, y, st);
    return st;
}

// O(n log n) start for large instances: partners matched by eccentricity
// rank within each type class.
AnnealState rank_state(const Side& x, const Side& y,
                       std::span<const std::pair<int, int>> forced) {
    AnnealState st;
    st.pairs.assign(static_cast<std::size_t>(x.n) + y.n, {-1, -1});
    st.frozen.assign(st.pairs.size(), 0);
    for (auto [fx, fy] : forced) {
        st.pairs[fx] = {fx, fy};
        st.frozen[fx] = 1;
        st.pairs[static_cast<std::size_t>(x.n) + fy] = {fx, fy};
        st.frozen[static_cast<std::size_t>(x.n) + fy] = 1;
    }
    for (int type = 0; type < 2; ++type) {
        std::vector<int> xs, ys;
        for (int i : x.ecc_order())
            if (x.type[i] == type) xs.push_back(i);
        for (int i : y.ecc_order())
            if (y.type[i] == type) ys.push_back(i);
        if (xs.empty() || ys.empty()) continue;
        for (std::size_t r = 0; r < xs.size(); ++r) {
            const std::size_t q = r * ys.size() / xs.size();
            if (!st.frozen[xs[r]]) st.pairs[xs[r]] = {xs[r], ys[q]};
        }
        for (std::size_t r = 0; r < ys.size(); ++r) {
            const std::size_t q = r * xs.size() / ys.size();
            const std::size_t slot = static_cast<std::size_t>(x.n) + ys[r];
            if (!st.frozen[slot]) st.pairs[slot] = {xs[q], ys[r]};
        }
    }
    recompute_cost(x, y, st);
    return st;
}

AnnealState random_state(const Side& x, const Side& y,
                         std::span<const std::pair<int, int>> forced, std::mt19937_64& rng) {
    AnnealState st;
    st.pairs.assign(static_cast<std::size_t>(x.n) + y.n, {-1, -1});
    st.frozen.assign(st.pairs.size(), 0);
    for (auto [fx, fy] : forced) {
        st.pairs[fx] = {fx, fy};
        st.frozen[fx] = 1;
        st.pairs[static_cast<std::size_t>(x.n) + fy] = {fx, fy};
        st.frozen[static_cast<std::size_t>(x.n) + fy] = 1;
    }
    std::vector<std::vector<int>> y_by_type(2), x_by_type(2);
    for (int i = 0; i < y.n; ++i) y_by_type[y.type[i]].push_back(i);
    for (int i = 0; i < x.n; ++i) x_by_type[x.type[i]].push_back(i);
    for (int xi = 0; xi < x.n; ++xi) {
        if (st.frozen[xi]) continue;
        const auto& cands = y_by_type[x.type[xi]];
        st.pairs[xi] = {xi, cands[rng() % cands.size()]};
    }
    for (int yi = 0; yi < y.n; ++yi) {
        const std::size_t slot = static_cast<std::size_t>(x.n) + yi;
        if (st.frozen[slot]) continue;
        const auto& cands = x_by_type[y.type[yi]];
        st.pairs[slot] = {cands[rng() % cands.size()], yi};
    }
    recompute_cost(x, y, st);
    return st;
}

SearchResult anneal_one(const Side& x, const Side& y, AnnealState st, long long iterations,
                        std::mt19937_64 rng) {
    SearchResult best{st.cost, st.pairs};
    if (st.cost == 0.0 || st.pairs.size() < 2) return best;

    std::vector<std::vector<int>> y_by_type(2), x_by_type(2);
    for (int i = 0; i < y.n; ++i) y_by_type[y.type[i]].push_back(i);
    for (int i = 0; i < x.n; ++i) x_by_type[x.type[i]].push_back(i);
    std::vector<int> movable;
    for (std::size_t e = 0; e < st.pairs.size(); ++e)
        if (!st.frozen[e]) movable.push_back(static_cast<int>(e));
    if (movable.empty()) return best;

    const double t0 = std::max(x.diameter(), y.diameter()) / 4.0 + 1e-12;
    double temp = t0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int p = static_cast<int>(st.pairs.size());

    for (long long it = 0; it < iterations; ++it, temp *= 0.995) {
        const int e = movable[rng() % movable.size()];
        const bool x_side = e < x.n;
        const auto& cands = x_side ? y_by_type[x.type[st.pairs[e].first]]
                                   : x_by_type[y.type[st.pairs[e].second]];
        const int cand = cands[rng() % cands.size()];
        const std::pair<int, int> proposal =
            x_side ? std::pair{st.pairs[e].first, cand} : std::pair{cand, st.pairs[e].second};
        if (proposal == st.pairs[e]) continue;

        // exact incremental cost: scan the changed entry against the rest
        double e_max = 0.0;
        int e_arg = -1;
        for (int b = 0; b < p; ++b) {
            if (b == e) continue;
            const double c = std::abs(x.d(proposal.first, st.pairs[b].first) -
                                      y.d(proposal.second, st.pairs[b].second));
            if (c > e_max) {
                e_max = c;
                e_arg = b;
            }
        }
        double new_cost;
        if (st.arg_a == e || st.arg_b == e) {
            const auto saved = st.pairs[e];
            st.pairs[e] = proposal;
            AnnealState probe = st;
            recompute_cost(x, y, probe);
            st.pairs[e] = saved;
            new_cost = probe.cost;
            if (new_cost <= st.cost || unit(rng) < std::exp(-(new_cost - st.cost) / temp)) {
                st.pairs[e] = proposal;
                st.cost = probe.cost;
                st.arg_a = probe.arg_a;
                st.arg_b = probe.arg_b;
            }
        } else {
            new_cost = std::max(st.cost, e_max);
            if (new_cost <= st.cost || unit(rng) < std::exp(-(new_cost - st.cost) / temp)) {
                st.pairs[e] = proposal;
                if (e_max > st.cost) {
                    st.cost = e_max;
                    st.arg_a = std::min(e, e_arg);
                    st.arg_b = std::max(e, e_arg);
                }
            }
        }
        if (st.cost < best.value) {
            best.value = st.cost;
            best.pairs = st.pairs;
            if (best.value == 0.0) break;
        }
    }
    return best;
}

SearchResult min_distortion_anneal(const Side& x, const Side& y,
                                   std::span<const std::pair<int, int>> forced,
                                   long long budget, int restarts, std::uint64_t seed,
                                   const std::vector<int>& hint_xy,
                                   const std::vector<int>& hint_yx, bool parallel) {
    restarts = std::max(restarts, 1);
    const long long per_restart = std::max<long long>(budget / restarts, 1);

    std::vector<SearchResult> results(restarts);
#pragma omp parallel for schedule(dynamic, 1) if (parallel) num_threads(effective_threads())
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        AnnealState init;
        if (r == 0) {
            if (!hint_xy.empty() && !hint_yx.empty()) {
                init.pairs.assign(static_cast<std::size_t>(x.n) + y.n, {-1, -1});
                init.frozen.assign(init.pairs.size(), 0);
                for (int xi = 0; xi < x.n; ++xi) init.pairs[xi] = {xi, hint_xy[xi]};
                for (int yi = 0; yi < y.n; ++yi)
                    init.pairs[static_cast<std::size_t>(x.n) + yi] = {hint_yx[yi], yi};
                for (auto [fx, fy] : forced) {
                    init.pairs[fx] = {fx, fy};
                    init.frozen[fx] = 1;
                    init.pairs[static_cast<std::size_t>(x.n) + fy] = {fx, fy};
                    init.frozen[static_cast<std::size_t>(x.n) + fy] = 1;
                }
                recompute_cost(x, y, init);
            } else if (x.n + y.n <= 600) {
                init = greedy_state(x, y, forced);
            } else {
                init = rank_state(x, y, forced);  // greedy is cubic, too slow here
            }
        } else {
            init = random_state(x, y, forced, rng);
        }
        results[r] = anneal_one(x, y, std::move(init), per_restart, std::move(rng));
    }
    int pick = 0;
    for (int r = 1; r < restarts; ++r)
        if (results[r].value < results[pick].value) pick = r;
    return results[pick];
}

// ---------------------------------------------------------------------------
// Branch and bound. Slots are X points then Y points, each by decreasing
// eccentricity; a Y slot is skipped when already covered. Parallel branches
// run independently from the same annealed incumbent so the reported value
// and witness match the serial path exactly.
// ---------------------------------------------------------------------------

struct BBContext {
    const Side* x;
    const Side* y;
    std::vector<int> x_slots, y_slots;
    double incumbent = kInf;
};

struct BBNodeState {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> y_cover;  // cover count per Y point
    double partial = 0.0;
};

void bb_recurse(const BBContext& ctx, BBNodeState& st, std::size_t slot, SearchResult& best) {
    const int nx_slots = static_cast<int>(ctx.x_slots.size());
    const int total = nx_slots + static_cast<int>(ctx.y_slots.size());
    if (slot == static_cast<std::size_t>(total)) {
        if (st.partial < best.value) {
            best.value = st.partial;
            best.pairs = st.pairs;
        }
        return;
    }
    const bool x_side = slot < static_cast<std::size_t>(nx_slots);
    if (!x_side) {
        const int yi = ctx.y_slots[slot - nx_slots];
        if (st.y_cover[yi] > 0) {
            bb_recurse(ctx, st, slot + 1, best);
            return;
        }
    }
    const int point = x_side ? ctx.x_slots[slot] : ctx.y_slots[slot - nx_slots];
    const int own_type = x_side ? ctx.x->type[point] : ctx.y->type[point];
    const Side& other = x_side ? *ctx.y : *ctx.x;

    // candidates ordered by incremental contribution, ties by index
    std::vector<std::pair<double, int>> cands;
    for (int cand = 0; cand < other.n; ++cand) {
        if (other.type[cand] != own_type) continue;
        double contrib = 0.0;
        for (auto [px, py] : st.pairs) {
            const double c = x_side ? std::abs(ctx.x->d(point, px) - ctx.y->d(cand, py))
                                    : std::abs(ctx.x->d(cand, px) - ctx.y->d(point, py));
            contrib = std::max(contrib, c);
            if (contrib >= best.value) break;
        }
        if (std::max(contrib, st.partial) < best.value) cands.emplace_back(contrib, cand);
    }
    std::sort(cands.begin(), cands.end());
    for (auto [contrib, cand] : cands) {
        const double partial = std::max(st.partial, contrib);
        if (partial >= best.value) continue;  // re-check: best may have shrunk
        const std::pair<int, int> pair = x_side ? std::pair{point, cand} : std::pair{cand, point};
        st.pairs.push_back(pair);
        ++st.y_cover[pair.second];
        const double saved = st.partial;
        st.partial = partial;
        bb_recurse(ctx, st, slot + 1, best);
        st.partial = saved;
        --st.y_cover[pair.second];
        st.pairs.pop_back();
    }
}

SearchResult min_distortion_exact(const Side& x, const Side& y,
                                  std::span<const std::pair<int, int>> forced,
                                  std::uint64_t seed, bool parallel) {
    // warm incumbent: cheap deterministic anneal
    const long long warm_budget = 200LL * (x.n + y.n);
    SearchResult incumbent =
        min_distortion_anneal(x, y, forced, warm_budget, 3, seed, {}, {}, parallel);
    if (incumbent.value == 0.0) return incumbent;

    BBContext ctx;
    ctx.x = &x;
    ctx.y = &y;
    ctx.incumbent = incumbent.value;
    std::vector<char> x_forced(x.n, 0);
    std::vector<int> y_cover0(y.n, 0);
    std::vector<std::pair<int, int>> base_pairs(forced.begin(), forced.end());
    for (auto [fx, fy] : forced) {
        x_forced[fx] = 1;
        ++y_cover0[fy];
    }
    for (int xi : x.ecc_order())
        if (!x_forced[xi]) ctx.x_slots.push_back(xi);
    ctx.y_slots = y.ecc_order();

    double base_partial = pairs_distortion(x, y, base_pairs);

    // top-level candidates of the first slot, searched independently
    struct Branch {
        std::pair<int, int> pair;
        double partial;
    };
    std::vector<Branch> branches;
    if (ctx.x_slots.empty() && ctx.y_slots.empty()) {
        SearchResult only{base_partial, base_pairs};
        return only.value < incumbent.value ? only : incumbent;
    }
    {
        const bool x_side = !ctx.x_slots.empty();
        const int point = x_side ? ctx.x_slots[0] : ctx.y_slots[0];
        // a covered first Y slot degenerates to a single skip branch
        if (!x_side && y_cover0[point] > 0) {
            branches.push_back({{-1, -1}, base_partial});
        } else {
            const int own_type = x_side ? x.type[point] : y.type[point];
            const Side& other = x_side ? y : x;
            for (int cand = 0; cand < other.n; ++cand) {
                if (other.type[cand] != own_type) continue;
                double contrib = base_partial;
                for (auto [px, py] : base_pairs)
                    contrib = std::max(contrib, x_side
                                                    ? std::abs(x.d(point, px) - y.d(cand, py))
                                                    : std::abs(x.d(cand, px) - y.d(point, py)));
                if (contrib < incumbent.value)
                    branches.push_back({x_side ? std::pair{point, cand} : std::pair{cand, point},
                                        contrib});
            }
        }
    }

    std::vector<SearchResult> branch_best(branches.size(), SearchResult{incumbent.value, {}});
#pragma omp parallel for schedule(dynamic, 1) if (parallel) num_threads(effective_threads())
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(branches.size()); ++b) {
        BBNodeState st;
        st.pairs = base_pairs;
        st.y_cover = y_cover0;
        st.partial = branches[b].partial;
        if (branches[b].pair.first >= 0) {
            st.pairs.push_back(branches[b].pair);
            ++st.y_cover[branches[b].pair.second];
        }
        bb_recurse(ctx, st, 1, branch_best[b]);
    }
    SearchResult best = incumbent;
    for (const auto& r : branch_best)
        if (r.value < best.value) best = r;
    return best;
}

Side side_of(const MarkedMetricSpace& s, std::vector<int> types) {
    return Side{s.n, s.dist, std::move(types)};
}

void require_marked(const MarkedMetricSpace& s, const char* name) {
    if (s.boundary_count() == 0) fail(errc::empty_boundary, std::string(name) + " has no boundary points");
    if (s.interior_count() == 0) fail(errc::empty_interior, std::string(name) + " has no interior points");
}

}  // namespace

double max_distortion(std::span<const double> dx, int nx, std::span<const double> dy, int ny,
                      std::span<const std::pair<int, int>> pairs, bool parallel) {
    const auto p = static_cast<std::int64_t>(pairs.size());
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 16) if (parallel) \
    num_threads(effective_threads())
    for (std::int64_t a = 0; a < p; ++a) {
        const double* row_x = dx.data() + static_cast<std::size_t>(pairs[a].first) * nx;
        const double* row_y = dy.data() + static_cast<std::size_t>(pairs[a].second) * ny;
        double local = 0.0;
        for (std::int64_t b = a + 1; b < p; ++b)
            local = std::max(local, std::abs(row_x[pairs[b].first] - row_y[pairs[b].second]));
        worst = std::max(worst, local);
    }
    return worst;
}

double distortion(const Correspondence& r, const MarkedMetricSpace& x,
                  const MarkedMetricSpace& y) {
    std::vector<char> xi(x.n, 0), yi(y.n, 0), xb(x.n, 0), yb(y.n, 0);
    for (auto [a, b] : r.pairs) {
        if (a < 0 || a >= x.n || b < 0 || b >= y.n)
            fail(errc::index_out_of_range, "correspondence pair");
        const bool ab = x.is_boundary(a), bb = y.is_boundary(b);
        if (!ab && !bb) {
            xi[a] = 1;
            yi[b] = 1;
        } else if (ab && bb) {
            xb[a] = 1;
            yb[b] = 1;
        }  // mixed pairs carry no coverage
    }
    auto uncovered = [](const std::vector<char>& seen, const MarkedMetricSpace& s, bool want_bnd,
                        const char* what) {
        for (int i = 0; i < s.n; ++i)
            if (s.is_boundary(i) == want_bnd && !seen[i])
                fail(errc::invalid_correspondence,
                     std::string(what) + " point " + std::to_string(i) + " uncovered");
    };
    uncovered(xi, x, false, "X interior");
    uncovered(yi, y, false, "Y interior");
    uncovered(xb, x, true, "X boundary");
    uncovered(yb, y, true, "Y boundary");
    return max_distortion(x.dist, x.n, y.dist, y.n, r.pairs, true);
}

GhbBracket ghb_exact(const MarkedMetricSpace& x, const MarkedMetricSpace& y, int size_cap,
                     bool parallel) {
    require_marked(x, "X");
    require_marked(y, "Y");
    if (x.n + y.n > size_cap)
        fail(errc::size_cap_exceeded, "|X|+|Y| = " + std::to_string(x.n + y.n) + " exceeds cap " +
                                          std::to_string(size_cap) + "; use ghb_heuristic");
    const Side sx = side_of(x, marked_types(x));
    const Side sy = side_of(y, marked_types(y));
    SearchResult res = min_distortion_exact(sx, sy, {}, kDefaultSeed, parallel);
    GhbBracket out;
    out.lower = res.value / 2.0;
    out.upper = res.value;
    out.method = BracketMethod::exact;
    out.witness.pairs = std::move(res.pairs);
    return out;
}

GhbBracket ghb_heuristic(const MarkedMetricSpace& x, const MarkedMetricSpace& y,
                         const HeuristicOptions& opt) {
    require_marked(x, "X");
    require_marked(y, "Y");
    if (opt.budget < 1) fail(errc::spec_invalid, "budget must be >= 1");
    const Side sx = side_of(x, marked_types(x));
    const Side sy = side_of(y, marked_types(y));
    SearchResult res = min_distortion_anneal(sx, sy, {}, opt.budget, opt.restarts, opt.seed,
                                             opt.hint_xy, opt.hint_yx, opt.parallel);
    GhbBracket out;
    out.upper = res.value;
    out.lower = std::min(std::max(res.value / 2.0, gh_boundary_lower_bound(x, y)), out.upper);
    out.method = BracketMethod::heuristic;
    out.witness.pairs = std::move(res.pairs);
    return out;
}

GhBracket gh_unmarked(std::span<const double> dx, int nx, std::span<const double> dy, int ny,
                      const GhUnmarkedOptions& opt) {
    const Side sx = make_side(dx, nx, std::vector<int>(nx, 0));
    const Side sy = make_side(dy, ny, std::vector<int>(ny, 0));
    GhBracket out;
    const double diam_floor = std::abs(sx.diameter() - sy.diameter()) / 2.0;
    if (!opt.force_heuristic && nx + ny <= opt.exact_cap) {
        SearchResult res = min_distortion_exact(sx, sy, opt.forced, opt.seed, opt.parallel);
        out.lower = out.upper = res.value / 2.0;
        out.method = BracketMethod::exact;
        out.witness.pairs = std::move(res.pairs);
        return out;
    }
    SearchResult res = min_distortion_anneal(sx, sy, opt.forced, opt.budget, opt.restarts,
                                             opt.seed, opt.hint_xy, opt.hint_yx, opt.parallel);
    out.upper = res.value / 2.0;
    out.lower = std::min(diam_floor, out.upper);
    out.method = BracketMethod::heuristic;
    out.witness.pairs = std::move(res.pairs);
    return out;
}

double gh_boundary_lower_bound(const MarkedMetricSpace& x, const MarkedMetricSpace& y,
                               int exact_cap) {
    auto part = [&](const std::vector<int>& ax, const std::vector<int>& ay) -> double {
        if (ax.empty() || ay.empty()) return 0.0;  // no certified contribution
        const std::vector<double> mx = x.restricted(ax);
        const std::vector<double> my = y.restricted(ay);
        GhUnmarkedOptions opt;
        opt.exact_cap = exact_cap;
        if (static_cast<int>(ax.size() + ay.size()) <= exact_cap) {
            return gh_unmarked(mx, static_cast<int>(ax.size()), my, static_cast<int>(ay.size()),
                               opt)
                .lower;
        }
        const Side sx = make_side(mx, static_cast<int>(ax.size()), std::vector<int>(ax.size(), 0));
        const Side sy = make_side(my, static_cast<int>(ay.size()), std::vector<int>(ay.size(), 0));
        return std::abs(sx.diameter() - sy.diameter()) / 2.0;
    };
    std::vector<int> all_x(x.n), all_y(y.n);
    for (int i = 0; i < x.n; ++i) all_x[i] = i;
    for (int i = 0; i < y.n; ++i) all_y[i] = i;
    return part(all_x, all_y) + part(x.boundary_points(), y.boundary_points());
}

double check_eps_isometry_with_boundary(std::span<const int> f, const MarkedMetricSpace& x,
                                        const MarkedMetricSpace& y) {
    if (static_cast<int>(f.size()) != x.n) fail(errc::spec_invalid, "map must be total on X");
    for (int v : f)
        if (v < 0 || v >= y.n) fail(errc::index_out_of_range, "map image");

    double dis = 0.0;
    for (int a = 0; a < x.n; ++a)
        for (int b = a + 1; b < x.n; ++b)
            dis = std::max(dis, std::abs(y.d(f[a], f[b]) - x.d(a, b)));

    auto defect = [&](bool bnd) -> double {
        std::vector<int> image;
        for (int i = 0; i < x.n; ++i)
            if (x.is_boundary(i) == bnd) image.push_back(f[i]);
        double worst = 0.0;
        for (int j = 0; j < y.n; ++j) {
            if (y.is_boundary(j) != bnd) continue;
            if (image.empty()) return kInf;
            double near = kInf;
            for (int i : image) near = std::min(near, y.d(j, i));
            worst = std::max(worst, near);
        }
        return worst;
    };
    return std::max({dis, defect(false), defect(true)});
}

}  // namespace mlab
