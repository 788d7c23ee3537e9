#pragma once

#include <string>

#include <json.hpp>

#include "mlab/conformal.hpp"
#include "mlab/experiments.hpp"
#include "mlab/metric_core.hpp"

namespace mlab {

using Json = nlohmann::ordered_json;

// marked_metric format: { kind, version, n, dist (row-major strict lower
// triangle), boundary (0/1), labels? }
Json marked_space_to_json(const MarkedMetricSpace& space);
MarkedMetricSpace marked_space_from_json(const Json& j);

/// Shape-checked parse without the metric-axiom scan, for the validator.
struct RawMarkedSpace {
    int n = 0;
    std::vector<double> dist;  // full symmetric matrix
    std::vector<char> boundary;
    std::vector<std::string> labels;
};
RawMarkedSpace marked_space_raw_from_json(const Json& j);

// point_cloud format: { kind, version, dim, points, boundary }
Json point_cloud_to_json(const PointCloud& cloud);
PointCloud point_cloud_from_json(const Json& j);

Json experiment_report_to_json(const ExperimentReport& report);

/// Loads either format; point clouds are converted to their ambient marked
/// space (kept alongside for alignment hints when wanted).
struct LoadedSpace {
    MarkedMetricSpace space;
    std::optional<PointCloud> cloud;
};
LoadedSpace load_space_file(const std::string& path);

PointCloud load_point_cloud_file(const std::string& path);
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace mlab
