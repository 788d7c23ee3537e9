#include "mlab/generators.hpp"

#include <cmath>
#include <limits>

#include "mlab/common.hpp"

namespace mlab {

namespace {

constexpr double kGridTol = 1e-9;

/// 1/mesh as an integer, or -1 when mesh does not divide the unit length.
int grid_steps(double mesh, double span = 1.0) {
    const double raw = span / mesh;
    const int k = static_cast<int>(std::llround(raw));
    if (k < 1 || std::abs(raw - k) > kGridTol * raw) return -1;
    return k;
}

void push(PointCloud& cloud, double x, double y, bool bnd) {
    cloud.pts.push_back({x, y, 0.0});
    cloud.boundary.push_back(bnd ? 1 : 0);
}

}  // namespace

PointCloud generate_slit_square(int n, double mesh) {
    if (n < 1) fail(errc::spec_invalid, "slit count index n must be >= 1");
    const int k = grid_steps(mesh);
    if (k < 0 || k % 2 != 0 || k % n != 0 || mesh > 1.0 / (4.0 * n) + kGridTol)
        fail(errc::mesh_too_coarse,
             "mesh must divide 1, 1/2 and the slit spacing 1/n, and satisfy mesh <= 1/(4n)");
    PointCloud cloud;
    cloud.dim = 2;
    const int slit_stride = k / n;
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= k; ++i) {
            const bool frame = i == 0 || i == k || j == 0 || j == k;
            const bool on_slit =
                !frame && j % slit_stride == 0 && j != 0 && j != k && i >= k / 2;
            push(cloud, i * mesh, j * mesh, frame || on_slit);
        }
    return cloud;
}

PointCloud generate_punctured_square(const std::string& variant, double mesh) {
    const int k = grid_steps(mesh);
    if (k < 0) fail(errc::mesh_misaligned, "mesh must divide the unit square");
    int px;  // puncture column; punctures sit at (px*mesh, 0) and (px*mesh, 1)
    if (variant == "mid") {
        if (k % 2 != 0) fail(errc::mesh_misaligned, "mid punctures need a node at x = 1/2");
        px = k / 2;
    } else if (variant == "corner") {
        px = k;
    } else {
        fail(errc::spec_invalid, "variant must be mid or corner");
    }
    PointCloud cloud;
    cloud.dim = 2;
    for (int j = 0; j <= k; ++j)
        for (int i = 0; i <= k; ++i) {
            const bool puncture = i == px && (j == 0 || j == k);
            push(cloud, i * mesh, j * mesh, puncture);
        }
    return cloud;
}

PointCloud generate_perturbed_square(double alpha, double mesh) {
    if (alpha < 0) fail(errc::spec_invalid, "alpha must be >= 0");
    const int ky = grid_steps(mesh);
    const int kx = grid_steps(mesh, 1.0 + alpha);
    if (ky < 0 || kx < 0)
        fail(errc::mesh_misaligned, "mesh must divide both 1 and 1 + alpha");
    PointCloud cloud;
    cloud.dim = 2;
    for (int j = 0; j <= ky; ++j)
        for (int i = 0; i <= kx; ++i)
            push(cloud, i * mesh, j * mesh, i == 0 || i == kx || j == 0 || j == ky);
    return cloud;
}

PointCloud generate_perturbed_disk(double r0, double alpha, int freq, double mesh) {
    if (!(r0 > 0) || alpha < 0 || alpha >= 1) fail(errc::spec_invalid, "bad disk parameters");
    PointCloud cloud;
    cloud.dim = 2;
    auto radius = [&](double theta) { return r0 * (1.0 + alpha * std::cos(freq * theta)); };
    const double rmax = r0 * (1.0 + alpha);
    // boundary sampled at arc step <= mesh
    const int arcs = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI * rmax / mesh)));
    for (int a = 0; a < arcs; ++a) {
        const double theta = 2.0 * M_PI * a / arcs;
        push(cloud, radius(theta) * std::cos(theta), radius(theta) * std::sin(theta), true);
    }
    const int span = static_cast<int>(std::ceil(rmax / mesh));
    for (int j = -span; j <= span; ++j)
        for (int i = -span; i <= span; ++i) {
            const double x = i * mesh, y = j * mesh;
            const double r = std::hypot(x, y);
            if (r <= radius(std::atan2(y, x)) - 0.5 * mesh) push(cloud, x, y, false);
        }
    return cloud;
}

PointCloud generate_annulus(double rho, double mesh) {
    if (!(rho > 0) || rho >= 1) fail(errc::spec_invalid, "inner radius must be in (0,1)");
    PointCloud cloud;
    cloud.dim = 2;
    for (double r : {1.0, rho}) {
        const int arcs = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI * r / mesh)));
        for (int a = 0; a < arcs; ++a) {
            const double theta = 2.0 * M_PI * a / arcs;
            push(cloud, r * std::cos(theta), r * std::sin(theta), true);
        }
    }
    const int span = static_cast<int>(std::ceil(1.0 / mesh));
    for (int j = -span; j <= span; ++j)
        for (int i = -span; i <= span; ++i) {
            const double x = i * mesh, y = j * mesh;
            const double r = std::hypot(x, y);
            if (r >= rho + 0.5 * mesh && r <= 1.0 - 0.5 * mesh) push(cloud, x, y, false);
        }
    return cloud;
}

MarkedMetricSpace to_marked_space(const PointCloud& cloud) {
    const int n = cloud.size();
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = cloud.distance(i, j);
            dist[static_cast<std::size_t>(i) * n + j] = d;
            dist[static_cast<std::size_t>(j) * n + i] = d;
        }
    return make_space_unchecked(n, std::move(dist), cloud.boundary);
}

void alignment_hint(const PointCloud& a, const PointCloud& b, std::vector<int>& a_to_b,
                    std::vector<int>& b_to_a) {
    auto nearest = [](const PointCloud& from, const PointCloud& to, std::vector<int>& out) {
        out.assign(from.size(), -1);
        for (int i = 0; i < from.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < to.size(); ++j) {
                if (from.boundary[i] != to.boundary[j]) continue;
                const double dx = from.pts[i][0] - to.pts[j][0];
                const double dy = from.pts[i][1] - to.pts[j][1];
                const double dz = from.pts[i][2] - to.pts[j][2];
                const double d2 = dx * dx + dy * dy + dz * dz;
                if (d2 < best) {
                    best = d2;
                    out[i] = j;
                }
            }
        }
    };
    nearest(a, b, a_to_b);
    nearest(b, a, b_to_a);
}

}  // namespace mlab
