#include "mlab/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace mlab {

const char* errc_name(errc code) {
    switch (code) {
        case errc::asymmetric_matrix: return "AsymmetricMatrix";
        case errc::nonzero_diagonal: return "NonzeroDiagonal";
        case errc::triangle_violation: return "TriangleViolation";
        case errc::negative_entry: return "NegativeEntry";
        case errc::empty_subset: return "EmptySubset";
        case errc::owner_mismatch: return "OwnerMismatch";
        case errc::empty_part: return "EmptyPart";
        case errc::invalid_correspondence: return "InvalidCorrespondence";
        case errc::size_cap_exceeded: return "SizeCapExceeded";
        case errc::empty_boundary: return "EmptyBoundary";
        case errc::empty_interior: return "EmptyInterior";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::no_geodesic: return "NoGeodesic";
        case errc::disconnected_interior: return "DisconnectedInterior";
        case errc::mesh_too_coarse: return "MeshTooCoarse";
        case errc::mesh_misaligned: return "MeshMisaligned";
        case errc::invalid_curve: return "InvalidCurve";
        case errc::spec_invalid: return "SpecInvalid";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::negative_delta: return "NegativeDelta";
        case errc::file_not_found: return "FileNotFound";
        case errc::parse_error: return "ParseError";
        case errc::usage_error: return "UsageError";
    }
    return "UnknownError";
}

namespace {
int g_thread_request = 0;  // 0 = unset
}

void set_thread_request(int threads) { g_thread_request = std::max(threads, 0); }

int effective_threads() {
    if (const char* env = std::getenv("METRIC_LAB_THREADS")) {
        int value = std::atoi(env);
        if (value > 0) return value;
    }
    if (g_thread_request > 0) return g_thread_request;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step over seed + odd-spaced stream offset
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace mlab
