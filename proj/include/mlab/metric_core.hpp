#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlab/common.hpp"

namespace mlab {

/// Finite metric space whose points carry interior/boundary flags.
/// The point list models the completion: interior points are the space
/// itself, flagged points its metric boundary.
struct MarkedMetricSpace {
    int n = 0;
    std::vector<double> dist;      // n*n row-major, symmetric, zero diagonal
    std::vector<char> boundary;    // 1 = boundary point, 0 = interior
    std::vector<std::string> labels;  // empty or size n

    double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * n + j]; }
    bool is_boundary(int i) const { return boundary[static_cast<std::size_t>(i)] != 0; }

    int interior_count() const;
    int boundary_count() const;
    std::vector<int> interior_points() const;
    std::vector<int> boundary_points() const;
    double diameter() const;

    /// Submatrix distances over an index subset, in subset order.
    std::vector<double> restricted(std::span<const int> members) const;
};

struct PointSubset {
    const MarkedMetricSpace* owner = nullptr;
    std::vector<int> members;
};

/// A marked subspace of one ambient space: its own interior/boundary split.
struct MarkedSubspace {
    const MarkedMetricSpace* owner = nullptr;
    std::vector<int> interior;
    std::vector<int> boundary;
};

struct MetricViolation {
    errc kind;       // asymmetric_matrix, nonzero_diagonal, triangle_violation, negative_entry
    int i = -1, j = -1, k = -1;  // witnessing indices; k used by triangle violations
    double detail = 0.0;         // offending value or triangle slack
};

struct ValidationOutcome {
    std::optional<MarkedMetricSpace> space;
    std::vector<MetricViolation> violations;
    bool ok() const { return space.has_value(); }
};

/// Checks all metric axioms and returns the space iff they hold; otherwise
/// every violated axiom with its witnessing triple. Triangle slack is judged
/// relative to the largest side of the triple (default 1e-9).
ValidationOutcome validate_space(int n, std::span<const double> matrix,
                                 std::vector<char> boundary,
                                 std::vector<std::string> labels = {},
                                 double rel_tol = 1e-9);

/// Builds a space from a full matrix assumed valid (e.g. Euclidean input);
/// only shape checks, no O(n^3) axiom scan.
MarkedMetricSpace make_space_unchecked(int n, std::vector<double> matrix,
                                       std::vector<char> boundary,
                                       std::vector<std::string> labels = {});

/// Closed eps-neighborhood of A inside its owner.
PointSubset neighborhood(const PointSubset& a, double eps);

/// max(sup_{a in A} dist(a,B), sup_{b in B} dist(b,A)).
double hausdorff(const PointSubset& a, const PointSubset& b);

/// Hausdorff distance of the interior parts plus Hausdorff distance of the
/// boundary parts, both inside the common ambient space.
double hausdorff_with_boundary(const MarkedSubspace& x1, const MarkedSubspace& x2);

struct NetSeparationResult {
    int net_size = 0;   // minimal eps-net cardinality (upper bound when !exact)
    int sep_size = 0;   // maximal eps-separated cardinality (lower bound when !exact)
    bool exact = false;
};

/// Exact via subset search for n <= exact_cap, greedy bounds beyond.
NetSeparationResult net_and_separation(const MarkedMetricSpace& space, double eps,
                                       int exact_cap = 20);

// Directed sup-inf kernels shared with the experiment code. `parallel`
// selects the OpenMP path; both paths produce identical results.
double directed_hausdorff(std::span<const double> dist, int n,
                          std::span<const int> from, std::span<const int> to,
                          bool parallel);

}  // namespace mlab
