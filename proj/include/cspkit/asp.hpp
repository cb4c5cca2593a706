#pragma once

// Stable-model search over a ground normal program: unit propagation plus
// chronological backtracking, with every candidate confirmed by the
// reduct-based stability check before it is reported.

#include <chrono>
#include <cstdint>
#include <vector>

#include "cspkit/program.hpp"
#include "cspkit/search.hpp"

namespace cspkit {

enum class Truth : std::int8_t { Unknown, True, False };

class PartialAssignment {
public:
    explicit PartialAssignment(std::size_t atoms) : values_(atoms, Truth::Unknown) {}

    Truth value(AtomId a) const { return values_.at(a); }
    std::size_t size() const { return values_.size(); }

    // False when `a` already holds the opposite value.
    bool assign(AtomId a, Truth v);
    void backtrack_to(std::size_t trail_size);

    const std::vector<AtomId>& trail() const { return trail_; }
    AtomSet true_atoms() const;
    bool complete() const;

private:
    std::vector<Truth> values_;
    std::vector<AtomId> trail_;
};

struct AspStats {
    std::uint64_t backtracks = 0;
    std::uint64_t choices = 0;
    std::uint64_t propagations = 0;
    std::chrono::nanoseconds elapsed{0};
};

struct AspResult {
    std::vector<AtomSet> models;
    AspStats stats;
    SearchStatus status = SearchStatus::Complete;

    bool truncated() const { return status == SearchStatus::Truncated; }
};

enum class PropagateResult { Ok, Conflict };

// Closes `a` under: rule bodies that are true fire their heads; atoms with
// no remaining support become false; a denial with a true body is a
// conflict; a denial with one open literal forces that literal false.
PropagateResult propagate(const GroundProgram& g, PartialAssignment& a);

AspResult solve(const GroundProgram& g, const SearchLimits& limits = {});

bool is_stable(const GroundProgram& g, const AtomSet& m);

inline constexpr std::size_t kBruteforceAtomLimit = 20;

// Every subset of the atom universe through is_stable. Throws CspError
// above kBruteforceAtomLimit atoms.
std::vector<AtomSet> enumerate_bruteforce(const GroundProgram& g);

}  // namespace cspkit
