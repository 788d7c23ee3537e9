#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mlab/conformal.hpp"
#include "mlab/generators.hpp"
#include "mlab/ghb.hpp"

namespace mlab {

enum class Family {
    slit_square,
    punctured_square,
    perturbed_square,
    perturbed_disk,
    shrinking_annulus,
    constant,
};

enum class Theorem {
    T1_delta,
    T1_starlike,
    T2_uniformized,
    T4_quasihyperbolic,
    U_completeness,
    counterexample_ghb,
};

Family family_from_name(const std::string& name);
Theorem theorem_from_name(const std::string& name);
const char* family_name(Family f);
const char* theorem_name(Theorem t);

struct DomainSequenceSpec {
    Family family = Family::perturbed_square;
    int index_lo = 0;
    int index_hi = 3;
    std::vector<double> meshes;  // one per index, or a single entry for all
    double param = 0.0;          // family parameter (amplitudes, hole radius)
    std::string variant = "mid";

    int count() const { return index_hi - index_lo + 1; }
    double mesh_at(int index) const;
    void validate() const;
};

struct StepRecord {
    int index = 0;
    std::vector<std::pair<std::string, double>> values;  // stable key order
};

struct ExperimentReport {
    std::string experiment;
    std::string family;
    std::uint64_t seed = 0;
    std::vector<StepRecord> steps;
    std::vector<std::pair<std::string, double>> tolerances;
    std::vector<std::pair<std::string, bool>> checks;
    bool pass = false;
    double runtime_seconds = 0.0;  // human-readable output only, never serialized
};

struct LabOptions {
    std::uint64_t seed = kDefaultSeed;
    long long budget = 20000;
    int restarts = 5;
    bool parallel = true;
};

/// Runs the theorem pipeline over the generated member sequence. The limit
/// object is represented by the highest-index member.
ExperimentReport run_experiment(const DomainSequenceSpec& spec, Theorem theorem,
                                const LabOptions& opt = {});

/// Cloud of one family member.
PointCloud generate_member(const DomainSequenceSpec& spec, int index);

/// Closed metric ball as an ascending index list.
std::vector<int> metric_ball(std::span<const double> dist, int n, int center, double R);

/// Base-point-pinned GH bracket between closed R-balls: both spaces restrict
/// to their balls and the base pair is forced into every correspondence.
/// Hints in `opt`, when present, are indexed ball-locally.
GhBracket pointed_gh_ball_distance(std::span<const double> dx, int nx, int base_x,
                                   std::span<const double> dy, int ny, int base_y, double R,
                                   GhUnmarkedOptions opt = {});

}  // namespace mlab
