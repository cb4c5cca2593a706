#pragma once

// Naive finite model generation: assign function-table cells in a fixed
// order with ascending values and check each ground axiom instance as soon
// as every cell it reads is decided.

#include <chrono>
#include <cstdint>
#include <vector>

#include "cspkit/ir.hpp"
#include "cspkit/search.hpp"

namespace cspkit {

struct ModelFinderStats {
    std::uint64_t backtracks = 0;
    std::uint64_t choices = 0;
    std::uint64_t checks = 0;  // ground axiom instance evaluations
    std::chrono::nanoseconds elapsed{0};
};

struct ModelFinderResult {
    std::vector<Interpretation> models;
    ModelFinderStats stats;
    SearchStatus status = SearchStatus::Complete;
};

struct ModelFinderOptions {
    SearchLimits limits;
    bool check_at_leaf = false;  // defer every instance to the full table
};

ModelFinderResult find_models(const CspSpec& spec, const ModelFinderOptions& opts = {});

}  // namespace cspkit
