#include "cspkit/fd.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

namespace cspkit {

Domain::Domain(int lo, int hi) : lo_(lo) {
    if (hi < lo) throw CspError("empty domain range");
    bits_.assign(static_cast<std::size_t>(hi - lo + 1), true);
    count_ = hi - lo + 1;
}

Domain Domain::of(std::initializer_list<int> values) {
    if (values.size() == 0) throw CspError("empty domain");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    Domain d(*lo, *hi);
    std::fill(d.bits_.begin(), d.bits_.end(), false);
    d.count_ = 0;
    for (int v : values) {
        if (!d.bits_[v - d.lo_]) ++d.count_;
        d.bits_[v - d.lo_] = true;
    }
    return d;
}

bool Domain::contains(int v) const {
    const long i = static_cast<long>(v) - lo_;
    return i >= 0 && i < static_cast<long>(bits_.size()) && bits_[i];
}

bool Domain::remove(int v) {
    if (!contains(v)) return false;
    bits_[v - lo_] = false;
    --count_;
    return true;
}

void Domain::assign(int v) {
    if (!contains(v)) throw CspError("assigning a value outside the domain");
    std::fill(bits_.begin(), bits_.end(), false);
    bits_[v - lo_] = true;
    count_ = 1;
}

int Domain::min() const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) return lo_ + static_cast<int>(i);
    throw CspError("min of an empty domain");
}

std::vector<int> Domain::values() const {
    std::vector<int> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(lo_ + static_cast<int>(i));
    return out;
}

std::pair<FdVarId, FdVarId> scope(const FdConstraint& c) {
    return std::visit([](const auto& k) { return std::pair{k.x, k.y}; }, c);
}

bool allows(const FdConstraint& c, int vx, int vy) {
    return std::visit(
        [&](const auto& k) -> bool {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, NotEqual>)
                return vx != vy;
            else if constexpr (std::is_same_v<T, AbsDiffNotEqual>)
                return std::abs(vx - vy) != k.d;
            else if constexpr (std::is_same_v<T, NotEqualOffset>)
                return vx != vy + k.c;
            else
                return k.allowed.contains({vx, vy});
        },
        c);
}

FdVarId FdStore::add_var(Domain d) {
    if (d.empty()) throw CspError("variable with empty domain");
    vars_.push_back({d, d});
    incident_.emplace_back();
    return vars_.size() - 1;
}

bool FdStore::post(FdConstraint c) {
    const auto [x, y] = scope(c);
    if (x >= vars_.size() || y >= vars_.size()) throw CspError("constraint on unknown variable");
    if (x == y) throw CspError("binary constraint needs two distinct variables");
    if (const auto* t = std::get_if<BinaryTable>(&c)) {
        for (const auto& [a, b] : t->allowed)
            if (!vars_[x].original.contains(a) || !vars_[y].original.contains(b))
                throw CspError("table pair outside the original domains");
    }
    const std::size_t ci = constraints_.size();
    constraints_.push_back(std::move(c));
    incident_[x].push_back(ci);
    incident_[y].push_back(ci);
    return run_worklist({{x, ci}, {y, ci}}, ArcOrder::Fifo);
}

bool FdStore::revise(FdVarId var, std::size_t ci) {
    ++stats_.propagations;
    const auto& c = constraints_[ci];
    const auto [x, y] = scope(c);
    const bool is_x = var == x;
    const FdVarId other = is_x ? y : x;
    const auto other_values = vars_[other].current.values();
    bool changed = false;
    for (int a : vars_[var].current.values()) {
        const bool supported = std::any_of(other_values.begin(), other_values.end(), [&](int b) {
            return is_x ? allows(c, a, b) : allows(c, b, a);
        });
        if (!supported) {
            vars_[var].current.remove(a);
            ++stats_.deletions;
            changed = true;
        }
    }
    return changed;
}

bool FdStore::run_worklist(std::vector<std::pair<FdVarId, std::size_t>> seed, ArcOrder order) {
    // Arc id: 2*ci for the x side, 2*ci+1 for the y side.
    std::vector<char> queued(constraints_.size() * 2, 0);
    std::deque<std::pair<FdVarId, std::size_t>> work;
    auto arc_id = [&](FdVarId v, std::size_t ci) {
        return 2 * ci + (scope(constraints_[ci]).first == v ? 0 : 1);
    };
    auto push = [&](FdVarId v, std::size_t ci) {
        auto& q = queued[arc_id(v, ci)];
        if (q) return;
        q = 1;
        work.emplace_back(v, ci);
    };
    for (const auto& [v, ci] : seed) push(v, ci);

    while (!work.empty()) {
        std::pair<FdVarId, std::size_t> arc;
        if (order == ArcOrder::Fifo) {
            arc = work.front();
            work.pop_front();
        } else {
            arc = work.back();
            work.pop_back();
        }
        const auto [var, ci] = arc;
        queued[arc_id(var, ci)] = 0;
        if (!revise(var, ci)) continue;
        if (vars_[var].current.empty()) return false;
        for (std::size_t cj : incident_[var]) {
            if (cj == ci) continue;
            const auto [x, y] = scope(constraints_[cj]);
            push(x == var ? y : x, cj);
        }
    }
    return true;
}

bool FdStore::propagate_ac3(ArcOrder order) {
    std::vector<std::pair<FdVarId, std::size_t>> seed;
    for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
        const auto [x, y] = scope(constraints_[ci]);
        seed.emplace_back(x, ci);
        seed.emplace_back(y, ci);
    }
    if (order == ArcOrder::Lifo) std::reverse(seed.begin(), seed.end());
    return run_worklist(std::move(seed), order);
}

bool FdStore::propagate_from(FdVarId changed) {
    std::vector<std::pair<FdVarId, std::size_t>> seed;
    for (std::size_t ci : incident_.at(changed)) {
        const auto [x, y] = scope(constraints_[ci]);
        seed.emplace_back(x == changed ? y : x, ci);
    }
    return run_worklist(std::move(seed), ArcOrder::Fifo);
}

namespace {

class Labeler {
public:
    Labeler(FdStore store, const LabelOptions& opts)
        : store_(std::move(store)),
          opts_(opts),
          assigned_(store_.var_count(), -1),
          cap_(opts.limits.solution_cap()),
          guard_(opts.limits.deadline) {}

    FdResult run() {
        const auto start = Clock::now();
        bool ok = true;
        if (opts_.consistency == Consistency::Ac3) ok = store_.propagate_ac3();
        if (ok) descend();
        result_.stats = store_.stats();
        result_.stats.elapsed = Clock::now() - start;
        return std::move(result_);
    }

private:
    std::optional<FdVarId> select() const {
        std::optional<FdVarId> best;
        int best_size = 0;
        std::size_t best_degree = 0;
        for (FdVarId v = 0; v < assigned_.size(); ++v) {
            if (assigned_[v] >= 0) continue;
            if (opts_.heuristic == Heuristic::Lex) return v;
            const int size = store_.domain(v).size();
            if (best && size > best_size) continue;
            const std::size_t degree = dynamic_degree(v);
            if (!best || size < best_size || degree > best_degree) {
                best = v;
                best_size = size;
                best_degree = degree;
            }
        }
        return best;
    }

    std::size_t dynamic_degree(FdVarId v) const {
        std::size_t n = 0;
        for (std::size_t ci : store_.constraints_of(v)) {
            const auto [x, y] = scope(store_.constraints()[ci]);
            if (assigned_[x == v ? y : x] < 0) ++n;
        }
        return n;
    }

    bool consistent_with_assigned(FdVarId v) const {
        for (std::size_t ci : store_.constraints_of(v)) {
            const auto& c = store_.constraints()[ci];
            const auto [x, y] = scope(c);
            if (assigned_[x] >= 0 && assigned_[y] >= 0 && !allows(c, assigned_[x], assigned_[y]))
                return false;
        }
        return true;
    }

    bool all_constraints_hold() const {
        for (const auto& c : store_.constraints()) {
            const auto [x, y] = scope(c);
            if (!allows(c, assigned_[x], assigned_[y])) return false;
        }
        return true;
    }

    // Returns false when the search must stop.
    bool descend() {
        if (guard_.expired()) {
            result_.status = SearchStatus::TimedOut;
            return false;
        }
        const auto var = select();
        if (!var) {
            if (opts_.consistency == Consistency::None) {
                ++store_.stats().leaves_tested;
                if (!all_constraints_hold()) return true;
            }
            result_.solutions.push_back(assigned_);
            if (result_.solutions.size() >= cap_) {
                if (cap_ > 1) result_.status = SearchStatus::Truncated;
                return false;
            }
            return true;
        }

        const FdVarId v = *var;
        for (int value : store_.domain(v).values()) {
            if (guard_.expired()) {
                result_.status = SearchStatus::TimedOut;
                return false;
            }
            ++store_.stats().choices;
            assigned_[v] = value;
            if (opts_.on_node) opts_.on_node(assigned_);

            bool ok = true;
            std::vector<Domain> saved;
            switch (opts_.consistency) {
            case Consistency::Ac3:
                saved = snapshot();
                store_.mutable_domain(v).assign(value);
                ok = store_.propagate_from(v);
                break;
            case Consistency::CheckOnly: ok = consistent_with_assigned(v); break;
            case Consistency::None: break;
            }
            if (ok && !descend()) return false;

            if (!saved.empty()) restore(saved);
            assigned_[v] = -1;
            ++store_.stats().backtracks;
        }
        return true;
    }

    std::vector<Domain> snapshot() const {
        std::vector<Domain> out;
        out.reserve(store_.var_count());
        for (FdVarId v = 0; v < store_.var_count(); ++v) out.push_back(store_.domain(v));
        return out;
    }

    void restore(std::vector<Domain>& saved) {
        for (FdVarId v = 0; v < saved.size(); ++v) store_.mutable_domain(v) = std::move(saved[v]);
    }

    FdStore store_;
    const LabelOptions& opts_;
    std::vector<int> assigned_;
    std::size_t cap_;
    DeadlineGuard guard_;
    FdResult result_;
};

}  // namespace

FdResult label(FdStore store, const LabelOptions& opts) { return Labeler(std::move(store), opts).run(); }

}  // namespace cspkit
