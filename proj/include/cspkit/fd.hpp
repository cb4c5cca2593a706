#pragma once

// Finite-domain store over small integer domains with binary constraints,
// AC-3 propagation and depth-first labeling.

#include <chrono>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cspkit/ir.hpp"
#include "cspkit/search.hpp"

namespace cspkit {

using FdVarId = std::size_t;

// Integer set over [lo, lo + width). Empty only inside a failed propagation.
class Domain {
public:
    Domain() = default;
    Domain(int lo, int hi);  // inclusive range
    static Domain of(std::initializer_list<int> values);

    bool contains(int v) const;
    bool remove(int v);  // true if v was present
    void assign(int v);  // collapse to {v}; v must be present
    int size() const { return count_; }
    bool empty() const { return count_ == 0; }
    int min() const;
    std::vector<int> values() const;

    friend bool operator==(const Domain& a, const Domain& b) { return a.values() == b.values(); }

private:
    int lo_ = 0;
    std::vector<bool> bits_;
    int count_ = 0;
};

struct NotEqual {
    FdVarId x, y;
};
struct AbsDiffNotEqual {  // |x - y| != d
    FdVarId x, y;
    int d;
};
struct NotEqualOffset {  // x != y + c
    FdVarId x, y;
    int c;
};
struct BinaryTable {
    FdVarId x, y;
    std::set<std::pair<int, int>> allowed;
};

using FdConstraint = std::variant<NotEqual, AbsDiffNotEqual, NotEqualOffset, BinaryTable>;

std::pair<FdVarId, FdVarId> scope(const FdConstraint& c);
bool allows(const FdConstraint& c, int vx, int vy);

struct FdStats {
    std::uint64_t backtracks = 0;
    std::uint64_t choices = 0;
    std::uint64_t propagations = 0;  // arc revisions
    std::uint64_t deletions = 0;
    std::uint64_t leaves_tested = 0;  // full assignments checked (generate-and-test)
    std::chrono::nanoseconds elapsed{0};
};

enum class ArcOrder { Fifo, Lifo };

enum class Heuristic { Ffc, Lex };
enum class Consistency { Ac3, CheckOnly, None };

struct FdVar {
    Domain original;
    Domain current;
};

class FdStore {
public:
    FdVarId add_var(Domain d);
    FdVarId add_var(int lo, int hi) { return add_var(Domain(lo, hi)); }

    // Records `c` and propagates. Returns false on wipe-out.
    [[nodiscard]] bool post(FdConstraint c);

    [[nodiscard]] bool propagate_ac3(ArcOrder order = ArcOrder::Fifo);

    std::size_t var_count() const { return vars_.size(); }
    const Domain& domain(FdVarId v) const { return vars_.at(v).current; }
    Domain& mutable_domain(FdVarId v) { return vars_.at(v).current; }
    const std::vector<FdConstraint>& constraints() const { return constraints_; }
    const std::vector<std::size_t>& constraints_of(FdVarId v) const { return incident_.at(v); }

    FdStats& stats() { return stats_; }
    const FdStats& stats() const { return stats_; }

    // Arc revision of `var` against constraint `ci`; true if a value was removed.
    bool revise(FdVarId var, std::size_t ci);
    // AC-3 with the worklist seeded only by arcs towards neighbours of `changed`.
    bool propagate_from(FdVarId changed);

private:
    bool run_worklist(std::vector<std::pair<FdVarId, std::size_t>> work, ArcOrder order);

    std::vector<FdVar> vars_;
    std::vector<FdConstraint> constraints_;
    std::vector<std::vector<std::size_t>> incident_;
    FdStats stats_;
};

struct LabelOptions {
    Heuristic heuristic = Heuristic::Ffc;
    Consistency consistency = Consistency::Ac3;
    SearchLimits limits;
    // Called for every attempted assignment with the values chosen so far,
    // indexed by variable (-1 = unassigned).
    std::function<void(std::span<const int>)> on_node;
};

struct FdResult {
    std::vector<std::vector<int>> solutions;
    FdStats stats;
    SearchStatus status = SearchStatus::Complete;
};

FdResult label(FdStore store, const LabelOptions& opts);

}  // namespace cspkit
