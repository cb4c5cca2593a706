#pragma once

#include <chrono>
#include <cstddef>
#include <optional>

namespace cspkit {

enum class SearchMode { First, All };

using Clock = std::chrono::steady_clock;

struct SearchLimits {
    SearchMode mode = SearchMode::First;
    std::optional<std::size_t> max_solutions;  // only meaningful with SearchMode::All
    std::optional<Clock::time_point> deadline;

    std::size_t solution_cap() const {
        if (mode == SearchMode::First) return 1;
        return max_solutions.value_or(static_cast<std::size_t>(-1));
    }
};

enum class SearchStatus {
    Complete,   // the search space was exhausted (or mode=first found one)
    Truncated,  // stopped at max_solutions
    TimedOut,
};

// Deadline polling with a cheap counter so the clock is read rarely.
class DeadlineGuard {
public:
    explicit DeadlineGuard(std::optional<Clock::time_point> deadline) : deadline_(deadline) {}

    bool expired() {
        if (expired_) return true;
        if (!deadline_ || ++ticks_ % 1024 != 0) return false;
        expired_ = Clock::now() >= *deadline_;
        return expired_;
    }

private:
    std::optional<Clock::time_point> deadline_;
    std::size_t ticks_ = 0;
    bool expired_ = false;
};

}  // namespace cspkit
