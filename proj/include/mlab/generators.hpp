#pragma once

#include <string>

#include "mlab/conformal.hpp"
#include "mlab/metric_core.hpp"

namespace mlab {

/// Grid sample of the open unit square with n-1 half-width slits removed.
/// Slit nodes and the outer frame are the boundary sample. The mesh must
/// divide the slit spacing and satisfy mesh <= 1/(4n).
PointCloud generate_slit_square(int n, double mesh);

/// Closed unit-square grid with exactly two puncture nodes flagged as
/// boundary: variant "mid" punctures (1/2,0),(1/2,1); "corner" (1,0),(1,1).
PointCloud generate_punctured_square(const std::string& variant, double mesh);

/// Axis-stretch rectangle [0,1+alpha] x [0,1]; alpha must be a multiple of
/// the mesh. Convex, hence a length space.
PointCloud generate_perturbed_square(double alpha, double mesh);

/// Disk of radius r0 with radial boundary perturbation
/// r(theta) = r0 (1 + alpha cos(freq theta)).
PointCloud generate_perturbed_disk(double r0, double alpha, int freq, double mesh);

/// Annulus with outer radius 1 and inner radius rho.
PointCloud generate_annulus(double rho, double mesh);

/// Ambient (Euclidean) marked metric space of a sample cloud.
MarkedMetricSpace to_marked_space(const PointCloud& cloud);

/// Nearest-neighbor assignments between clouds (same dimension), matching
/// interior to interior and boundary to boundary; used to seed the
/// correspondence search with a grid-alignment certificate.
void alignment_hint(const PointCloud& a, const PointCloud& b, std::vector<int>& a_to_b,
                    std::vector<int>& b_to_a);

}  // namespace mlab
