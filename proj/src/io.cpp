#include "mlab/io.hpp"

#include <filesystem>
#include <fstream>

#include "mlab/common.hpp"

namespace mlab {

Json marked_space_to_json(const MarkedMetricSpace& space) {
    Json j;
    j["kind"] = "marked_metric";
    j["version"] = 1;
    j["n"] = space.n;
    Json lower = Json::array();
    for (int i = 1; i < space.n; ++i)
        for (int k = 0; k < i; ++k) lower.push_back(space.d(i, k));
    j["dist"] = std::move(lower);
    Json flags = Json::array();
    for (char b : space.boundary) flags.push_back(b ? 1 : 0);
    j["boundary"] = std::move(flags);
    if (!space.labels.empty()) j["labels"] = space.labels;
    return j;
}

RawMarkedSpace marked_space_raw_from_json(const Json& j) {
    if (j.value("kind", "") != "marked_metric") fail(errc::parse_error, "kind != marked_metric");
    const int n = j.value("n", -1);
    if (n <= 0) fail(errc::parse_error, "field n must be a positive integer");
    if (!j.contains("dist") || !j["dist"].is_array()) fail(errc::parse_error, "field dist missing");
    if (!j.contains("boundary") || !j["boundary"].is_array())
        fail(errc::parse_error, "field boundary missing");

    const auto& tri = j["dist"];
    const std::size_t strict = static_cast<std::size_t>(n) * (n - 1) / 2;
    const std::size_t with_diag = static_cast<std::size_t>(n) * (n + 1) / 2;
    const bool has_diag = tri.size() == with_diag;
    if (tri.size() != strict && !has_diag)
        fail(errc::parse_error, "dist must hold the row-major lower triangle (" +
                                    std::to_string(strict) + " entries for n = " +
                                    std::to_string(n) + ")");
    RawMarkedSpace raw;
    raw.n = n;
    raw.dist.assign(static_cast<std::size_t>(n) * n, 0.0);
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= (has_diag ? i : i - 1); ++k) {
            if (!tri[pos].is_number()) fail(errc::parse_error, "dist entry " + std::to_string(pos));
            const double v = tri[pos++].get<double>();
            raw.dist[static_cast<std::size_t>(i) * n + k] = v;
            raw.dist[static_cast<std::size_t>(k) * n + i] = v;
        }

    for (const auto& b : j["boundary"]) {
        if (!b.is_number_integer()) fail(errc::parse_error, "boundary entries must be 0/1");
        raw.boundary.push_back(b.get<int>() ? 1 : 0);
    }
    if (static_cast<int>(raw.boundary.size()) != n)
        fail(errc::parse_error, "boundary length != n");
    if (j.contains("labels")) raw.labels = j["labels"].get<std::vector<std::string>>();
    return raw;
}

MarkedMetricSpace marked_space_from_json(const Json& j) {
    RawMarkedSpace raw = marked_space_raw_from_json(j);
    ValidationOutcome v =
        validate_space(raw.n, raw.dist, std::move(raw.boundary), std::move(raw.labels));
    if (!v.ok()) {
        const auto& first = v.violations.front();
        fail(first.kind, "space fails metric axioms (witness " + std::to_string(first.i) + "," +
                             std::to_string(first.j) +
                             (first.k >= 0 ? "," + std::to_string(first.k) : "") + "); " +
                             std::to_string(v.violations.size()) + " violation(s)");
    }
    return std::move(*v.space);
}

Json point_cloud_to_json(const PointCloud& cloud) {
    Json j;
    j["kind"] = "point_cloud";
    j["version"] = 1;
    j["dim"] = cloud.dim;
    Json pts = Json::array();
    for (const auto& p : cloud.pts) {
        Json row = Json::array();
        for (int c = 0; c < cloud.dim; ++c) row.push_back(p[c]);
        pts.push_back(std::move(row));
    }
    j["points"] = std::move(pts);
    Json flags = Json::array();
    for (char b : cloud.boundary) flags.push_back(b ? 1 : 0);
    j["boundary"] = std::move(flags);
    return j;
}

PointCloud point_cloud_from_json(const Json& j) {
    if (j.value("kind", "") != "point_cloud") fail(errc::parse_error, "kind != point_cloud");
    PointCloud cloud;
    cloud.dim = j.value("dim", 2);
    if (cloud.dim < 1 || cloud.dim > 3) fail(errc::parse_error, "dim must be 1..3");
    if (!j.contains("points") || !j["points"].is_array())
        fail(errc::parse_error, "field points missing");
    for (const auto& row : j["points"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != cloud.dim)
            fail(errc::parse_error, "each point needs dim coordinates");
        std::array<double, 3> p{0, 0, 0};
        for (int c = 0; c < cloud.dim; ++c) p[c] = row[c].get<double>();
        cloud.pts.push_back(p);
    }
    if (!j.contains("boundary")) fail(errc::parse_error, "field boundary missing");
    for (const auto& b : j["boundary"]) cloud.boundary.push_back(b.get<int>() ? 1 : 0);
    if (cloud.boundary.size() != cloud.pts.size())
        fail(errc::parse_error, "boundary length != point count");
    return cloud;
}

Json experiment_report_to_json(const ExperimentReport& report) {
    Json j;
    j["kind"] = "experiment_report";
    j["version"] = 1;
    j["experiment"] = report.experiment;
    j["family"] = report.family;
    j["seed"] = report.seed;
    Json steps = Json::array();
    for (const auto& s : report.steps) {
        Json step;
        step["index"] = s.index;
        for (const auto& [k, v] : s.values) step[k] = v;
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    Json tol;
    for (const auto& [k, v] : report.tolerances) tol[k] = v;
    j["tolerances"] = std::move(tol);
    Json checks;
    for (const auto& [k, v] : report.checks) checks[k] = v;
    j["checks"] = std::move(checks);
    j["verdict"] = report.pass ? "pass" : "fail";
    return j;
}

Json load_json_file(const std::string& path) {
    if (!std::filesystem::exists(path)) fail(errc::file_not_found, path);
    std::ifstream in(path);
    if (!in) fail(errc::file_not_found, path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(errc::parse_error, path + ": malformed JSON");
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) fail(errc::file_not_found, "cannot write " + path);
    out << j.dump(2) << '\n';
}

LoadedSpace load_space_file(const std::string& path) {
    const Json j = load_json_file(path);
    const std::string kind = j.value("kind", "");
    if (kind == "marked_metric") return {marked_space_from_json(j), std::nullopt};
    if (kind == "point_cloud") {
        PointCloud cloud = point_cloud_from_json(j);
        return {to_marked_space(cloud), std::move(cloud)};
    }
    fail(errc::parse_error, path + ": unknown kind '" + kind + "'");
}

PointCloud load_point_cloud_file(const std::string& path) {
    return point_cloud_from_json(load_json_file(path));
}

}  // namespace mlab
