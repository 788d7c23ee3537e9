#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "mlab/metric_core.hpp"
#include "mlab/shortest_paths.hpp"

namespace mlab {

struct HyperbolicityReport {
    double delta = 0.0;
    std::array<int, 4> witness{0, 0, 0, 0};  // (x, y, z, m) attaining the max defect
    std::int64_t quadruples_scanned = 0;
};

/// (x|y)_m = (d(m,x) + d(m,y) - d(x,y)) / 2.
double gromov_product(std::span<const double> dist, int n, int x, int y, int m);
double gromov_product(const MarkedMetricSpace& space, int x, int y, int m);

/// Exact four-point condition scan: delta = max over quadruples of
/// min((x|y)_m, (y|z)_m) - (x|z)_m. Uses the x<->z symmetry to halve the
/// scan and partitions by the m index across workers; the serial path is
/// the same loop without OpenMP and returns the identical witness.
HyperbolicityReport four_point_delta(std::span<const double> dist, int n, bool parallel = true);
HyperbolicityReport four_point_delta(const MarkedMetricSpace& space, bool parallel = true);

struct VisualMetricResult {
    std::vector<int> boundary_ids;  // row/column order of the matrix
    std::vector<double> matrix;     // |B| x |B| chain-infimum distances
    std::string warning;            // nonempty when eps >= 1/(5*delta)
};

/// Chain-infimum closure of rho(x,y) = exp(-eps*(x|y)_base) over all points,
/// restricted to the boundary rows/columns. `delta_hint` skips the O(n^4)
/// measurement used only for the eps-range warning.
VisualMetricResult visual_metric(const MarkedMetricSpace& space, int base, double eps,
                                 double delta_hint = -1.0, int delta_measure_cap = 150);

struct StarlikeResult {
    double M = 0.0;
    int witness = -1;          // point farthest from every target geodesic
    std::vector<int> targets;  // targets actually used
};

/// M = max over points x of min over targets t of dist(x, geodesic(base->t)),
/// geodesics realized as shortest paths in `graph` with deterministic
/// predecessor ties. Distances are taken from `dist`.
StarlikeResult rough_starlike_constant(std::span<const double> dist, int n,
                                       const WeightedGraph& graph, int base,
                                       std::span<const int> targets);

/// Marked-space wrapper: geodesics run in the dominance-pruned complete
/// graph (an edge survives iff no third point realizes it as a sum).
/// Empty `targets` defaults to all points of maximal distance from base.
StarlikeResult rough_starlike_constant(const MarkedMetricSpace& space, int base,
                                       std::span<const int> targets = {});

/// Pruned complete graph on a finite metric: keeps edge (i,j) iff no k has
/// d(i,k) + d(k,j) <= d(i,j) (within relative tolerance).
WeightedGraph metric_graph(std::span<const double> dist, int n, double rel_tol = 1e-9);

/// L = 6(1+24*delta)(2+40*delta) + 48*delta + 3 and eps0 = 1/(14L).
std::pair<double, double> epsilon0(double delta);

/// All points at maximal distance from base (the default ray targets).
std::vector<int> farthest_points(std::span<const double> dist, int n, int base);

}  // namespace mlab
