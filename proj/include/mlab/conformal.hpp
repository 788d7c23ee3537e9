#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlab/shortest_paths.hpp"

namespace mlab {

struct PointCloud {
    int dim = 2;
    std::vector<std::array<double, 3>> pts;  // third coordinate 0 when dim == 2
    std::vector<char> boundary;              // 1 = boundary sample point

    int size() const { return static_cast<int>(pts.size()); }
    double distance(int i, int j) const;
};

/// Weighted graph discretizing a bounded domain. Edges join interior sample
/// points within the connection radius; boundary samples carry coordinates
/// only and feed the boundary-distance field.
struct DomainGraph {
    PointCloud cloud;
    double h = 0.0;                   // connection radius
    std::vector<int> interior_nodes;  // cloud indices, ascending
    std::vector<int> interior_index;  // cloud index -> local index or -1
    WeightedGraph graph;              // over local interior indices, ambient lengths
    std::vector<double> bdist;        // per local node: distance to the boundary sample

    int interior_count() const { return static_cast<int>(interior_nodes.size()); }
    /// Interior node of maximal boundary distance (ties to smallest index).
    int deepest_node() const;
};

/// Connects interior points within ambient distance h and computes exact
/// boundary distances against the boundary sample. The interior subgraph
/// must come out connected.
DomainGraph build_domain_graph(const PointCloud& cloud, double h);

/// All-pairs quasihyperbolic metric: shortest paths under the trapezoidal
/// edge weight length * (1/bdist_i + 1/bdist_j) / 2. Dimensionless.
std::vector<double> quasihyperbolic_metric(const DomainGraph& g, bool parallel = true);

/// Quasihyperbolic edge-weight graph (shared by the metric, geodesic trees
/// and single-source queries).
WeightedGraph quasihyperbolic_graph(const DomainGraph& g);

struct UniformizeResult {
    std::vector<double> matrix;  // interior x interior d_eps
    double diameter = 0.0;
    std::string warning;  // set when eps exceeds epsilon0 of the measured delta
};

/// Uniformization of an edge-length graph: d(p,.) is the shortest-path
/// metric of `lengths`, edge weight length * (e^{-eps d(p,i)} + e^{-eps d(p,j)})/2.
/// Checks the hard diameter bound 2/eps.
UniformizeResult uniformize_lengths(const WeightedGraph& lengths, int base, double eps,
                                    std::optional<double> delta_hint = std::nullopt,
                                    bool parallel = true, int delta_measure_cap = 150);

/// DomainGraph variant over the ambient edge lengths; base is a cloud index
/// of an interior node.
UniformizeResult uniformize(const DomainGraph& g, int base_cloud_index, double eps,
                            std::optional<double> delta_hint = std::nullopt,
                            bool parallel = true);

struct CurveSample {
    std::vector<int> nodes;       // cloud indices of interior nodes, consecutive share an edge
    std::vector<double> cumlen;   // arclength parameter values, cumlen[0] == 0
};

/// Builds the sample from a node sequence, validating adjacency.
CurveSample make_curve(const DomainGraph& g, std::span<const int> cloud_nodes);

struct UniformCurveCheck {
    bool pass = false;
    double length_ratio = 0.0;    // l(curve) / d(endpoints)
    double worst_cigar = 0.0;     // max over t of min(l[0,t], l[t,1]) / bdist
    int worst_node = -1;          // cloud index attaining worst_cigar
};

/// Evaluates both uniform-curve conditions at every sample node.
UniformCurveCheck check_uniform_curve(const CurveSample& curve, double A, const DomainGraph& g);

struct UniformityEstimate {
    double A = 0.0;
    int worst_from = -1, worst_to = -1;  // cloud indices
    bool exact = false;                  // all pairs vs subsampled sources
};

/// Upper estimate of the uniformity constant using quasihyperbolic geodesics
/// as the candidate curve family. Exact over all pairs up to `pair_cap`
/// interior nodes, deterministically subsampled sources beyond.
UniformityEstimate estimate_uniformity_constant(const DomainGraph& g, int pair_cap = 400,
                                                bool parallel = true);

struct ClearanceResult {
    double c = 0.0;
    bool inclusion_holds = true;
    std::vector<int> violations;  // cloud indices with k(p,x) < R but bdist <= c
};

/// Ball clearance c = min(bdist(p)/2 / (e^R - 1), bdist(p)/2) and the
/// inclusion check over the quasihyperbolic R-ball around base.
ClearanceResult qh_ball_clearance(const DomainGraph& g, int base_cloud_index, double R);

/// The clearance formula alone.
double clearance_constant(double dp, double R);

}  // namespace mlab
