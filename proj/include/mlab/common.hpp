#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlab {

/// Error codes surfaced verbatim through the CLI.
enum class errc {
    asymmetric_matrix,
    nonzero_diagonal,
    triangle_violation,
    negative_entry,
    empty_subset,
    owner_mismatch,
    empty_part,
    invalid_correspondence,
    size_cap_exceeded,
    empty_boundary,
    empty_interior,
    index_out_of_range,
    no_geodesic,
    disconnected_interior,
    mesh_too_coarse,
    mesh_misaligned,
    invalid_curve,
    spec_invalid,
    budget_exceeded,
    negative_delta,
    file_not_found,
    parse_error,
    usage_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

/// Worker threads for the OpenMP kernels. Resolution order:
/// METRIC_LAB_THREADS env var, then set_thread_request(), then hardware.
int effective_threads();
void set_thread_request(int threads);

/// Stream-split seeding so parallel restarts stay schedule-independent.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace mlab
