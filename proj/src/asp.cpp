#include "cspkit/asp.hpp"

#include <algorithm>
#include <deque>

namespace cspkit {

bool PartialAssignment::assign(AtomId a, Truth v) {
    auto& cur = values_.at(a);
    if (cur == v) return true;
    if (cur != Truth::Unknown) return false;
    cur = v;
    trail_.push_back(a);
    return true;
}

void PartialAssignment::backtrack_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
        values_[trail_.back()] = Truth::Unknown;
        trail_.pop_back();
    }
}

AtomSet PartialAssignment::true_atoms() const {
    AtomSet out;
    for (AtomId a = 0; a < values_.size(); ++a)
        if (values_[a] == Truth::True) out.push_back(a);
    return out;
}

bool PartialAssignment::complete() const {
    return std::none_of(values_.begin(), values_.end(),
                        [](Truth t) { return t == Truth::Unknown; });
}

namespace {

// Counter-based propagation engine. Rules and denials share one body
// table; body b is a denial when head[b] < 0.
class Engine {
public:
    explicit Engine(const GroundProgram& g) : g_(g), assign_(g.atom_count()) {
        const std::size_t n = g.atom_count();
        pos_occ_.resize(n);
        neg_occ_.resize(n);
        supports_.assign(n, 0);
        active_denials_.assign(n, 0);
        for (const auto& r : g.rules) add_body(static_cast<long>(r.head), r.pos, r.neg);
        for (const auto& d : g.denials) add_body(-1, d.pos, d.neg);
    }

    PartialAssignment& assignment() { return assign_; }
    const AspStats& stats() const { return stats_; }
    AspStats& stats() { return stats_; }

    // Initial pass: unsupported atoms, empty bodies, unit denials.
    bool initialize() {
        for (AtomId a = 0; a < supports_.size(); ++a)
            if (supports_[a] == 0 && !set(a, Truth::False)) return false;
        for (std::size_t b = 0; b < heads_.size(); ++b)
            if (!examine(b)) return false;
        return run();
    }

    bool decide(AtomId a, Truth v) {
        if (!assign_.assign(a, v)) return false;
        return run();
    }

    // Undo everything past `mark`, including counter updates.
    void backtrack_to(std::size_t mark) {
        const auto& trail = assign_.trail();
        while (processed_ > mark) {
            --processed_;
            unprocess(trail[processed_]);
        }
        assign_.backtrack_to(mark);
    }

    std::size_t mark() const { return assign_.trail().size(); }

    std::optional<AtomId> pick_branch_atom() const {
        std::optional<AtomId> best;
        std::uint32_t best_score = 0;
        for (AtomId a = 0; a < supports_.size(); ++a) {
            if (assign_.value(a) != Truth::Unknown) continue;
            if (!best || active_denials_[a] > best_score) {
                best = a;
                best_score = active_denials_[a];
            }
        }
        return best;
    }

    bool run() {
        const auto& trail = assign_.trail();
        bool ok = true;
        while (ok && processed_ < trail.size()) {
            ok = process(trail[processed_]);
            ++processed_;
        }
        return ok;
    }

private:
    void add_body(long head, const std::vector<AtomId>& pos, const std::vector<AtomId>& neg) {
        const auto b = static_cast<std::uint32_t>(heads_.size());
        heads_.push_back(head);
        pos_.push_back(pos);
        neg_.push_back(neg);
        n_true_.push_back(0);
        n_false_.push_back(0);
        for (auto a : pos) pos_occ_[a].push_back(b);
        for (auto a : neg) neg_occ_[a].push_back(b);
        if (head >= 0) {
            ++supports_[head];
        } else {
            for (auto a : pos) ++active_denials_[a];
            for (auto a : neg) ++active_denials_[a];
        }
    }

    std::size_t body_size(std::size_t b) const { return pos_[b].size() + neg_[b].size(); }

    bool set(AtomId a, Truth v) {
        if (assign_.value(a) == v) return true;
        if (!assign_.assign(a, v)) return false;
        ++stats_.propagations;
        return true;
    }

    // Called when body b gained a literal value; fires the unit rules.
    bool examine(std::size_t b) {
        if (n_false_[b] > 0) return true;
        const std::size_t size = body_size(b);
        if (heads_[b] >= 0) {
            if (n_true_[b] == size) return set(static_cast<AtomId>(heads_[b]), Truth::True);
            return true;
        }
        if (n_true_[b] == size) return false;
        if (n_true_[b] + 1 == size) {
            for (auto a : pos_[b])
                if (assign_.value(a) == Truth::Unknown) return set(a, Truth::False);
            for (auto a : neg_[b])
                if (assign_.value(a) == Truth::Unknown) return set(a, Truth::True);
        }
        return true;
    }

    bool body_became_false(std::size_t b) {
        if (heads_[b] >= 0) {
            const auto h = static_cast<AtomId>(heads_[b]);
            if (--supports_[h] == 0) return set(h, Truth::False);
            return true;
        }
        for (auto a : pos_[b]) --active_denials_[a];
        for (auto a : neg_[b]) --active_denials_[a];
        return true;
    }

    void body_revived(std::size_t b) {
        if (heads_[b] >= 0) {
            ++supports_[heads_[b]];
            return;
        }
        for (auto a : pos_[b]) ++active_denials_[a];
        for (auto a : neg_[b]) ++active_denials_[a];
    }

    // Counter updates for one assigned atom are always applied in full so
    // that unprocess() can mirror them exactly.
    bool process(AtomId a) {
        const bool is_true = assign_.value(a) == Truth::True;
        bool ok = true;
        auto lit = [&](std::uint32_t b, bool lit_true) {
            if (lit_true) {
                ++n_true_[b];
                ok = examine(b) && ok;
            } else if (n_false_[b]++ == 0) {
                ok = body_became_false(b) && ok;
            }
        };
        for (auto b : pos_occ_[a]) lit(b, is_true);
        for (auto b : neg_occ_[a]) lit(b, !is_true);
        return ok;
    }

    void unprocess(AtomId a) {
        const bool is_true = assign_.value(a) == Truth::True;
        auto lit = [&](std::uint32_t b, bool lit_true) {
            if (lit_true)
                --n_true_[b];
            else if (--n_false_[b] == 0)
                body_revived(b);
        };
        for (auto b : pos_occ_[a]) lit(b, is_true);
        for (auto b : neg_occ_[a]) lit(b, !is_true);
    }

    const GroundProgram& g_;
    PartialAssignment assign_;
    std::size_t processed_ = 0;
    AspStats stats_;

    std::vector<long> heads_;
    std::vector<std::vector<AtomId>> pos_, neg_;
    std::vector<std::uint32_t> n_true_, n_false_;
    std::vector<std::vector<std::uint32_t>> pos_occ_, neg_occ_;
    std::vector<std::uint32_t> supports_;
    std::vector<std::uint32_t> active_denials_;
};

class Search {
public:
    Search(const GroundProgram& g, const SearchLimits& limits)
        : g_(g), engine_(g), cap_(limits.solution_cap()), guard_(limits.deadline) {}

    AspResult run() {
        const auto start = Clock::now();
        if (engine_.initialize()) descend();
        result_.stats = engine_.stats();
        result_.stats.elapsed = Clock::now() - start;
        return std::move(result_);
    }

private:
    // Returns false when the search must stop.
    bool descend() {
        if (guard_.expired()) {
            result_.status = SearchStatus::TimedOut;
            return false;
        }
        auto atom = engine_.pick_branch_atom();
        if (!atom) {
            auto m = engine_.assignment().true_atoms();
            if (is_stable(g_, m)) {
                result_.models.push_back(std::move(m));
                if (result_.models.size() >= cap_) {
                    if (cap_ > 1) result_.status = SearchStatus::Truncated;
                    return false;
                }
            }
            return true;
        }
        ++engine_.stats().choices;
        const auto mark = engine_.mark();
        if (engine_.decide(*atom, Truth::True) && !descend()) return false;
        engine_.backtrack_to(mark);
        ++engine_.stats().backtracks;
        if (engine_.decide(*atom, Truth::False) && !descend()) return false;
        engine_.backtrack_to(mark);
        return true;
    }

    const GroundProgram& g_;
    Engine engine_;
    std::size_t cap_;
    DeadlineGuard guard_;
    AspResult result_;
};

}  // namespace

PropagateResult propagate(const GroundProgram& g, PartialAssignment& a) {
    if (a.size() != g.atom_count()) throw CspError("assignment size does not match the program");
    Engine e(g);
    bool ok = e.initialize();
    for (AtomId x : a.trail()) {
        if (!ok) break;
        ok = e.decide(x, a.value(x));
    }
    a = e.assignment();
    return ok ? PropagateResult::Ok : PropagateResult::Conflict;
}

AspResult solve(const GroundProgram& g, const SearchLimits& limits) {
    return Search(g, limits).run();
}

bool is_stable(const GroundProgram& g, const AtomSet& m) {
    const std::size_t n = g.atom_count();
    std::vector<char> in(n, 0);
    for (auto a : m) {
        if (a >= n) return false;
        in[a] = 1;
    }
    for (const auto& d : g.denials) {
        const bool sat = std::all_of(d.pos.begin(), d.pos.end(), [&](AtomId a) { return in[a]; }) &&
                         std::none_of(d.neg.begin(), d.neg.end(), [&](AtomId a) { return in[a]; });
        if (sat) return false;
    }

    // Least model of the reduct by forward chaining.
    std::vector<std::vector<std::size_t>> watch(n);
    std::vector<std::size_t> missing;
    std::vector<char> derived(n, 0);
    std::deque<AtomId> queue;
    std::vector<const GroundRule*> kept;
    for (const auto& r : g.rules) {
        if (std::any_of(r.neg.begin(), r.neg.end(), [&](AtomId a) { return in[a]; })) continue;
        const std::size_t idx = kept.size();
        kept.push_back(&r);
        missing.push_back(r.pos.size());
        for (auto a : r.pos) watch[a].push_back(idx);
        if (r.pos.empty() && !derived[r.head]) {
            derived[r.head] = 1;
            queue.push_back(r.head);
        }
    }
    while (!queue.empty()) {
        const AtomId a = queue.front();
        queue.pop_front();
        for (auto idx : watch[a]) {
            if (--missing[idx] == 0) {
                const AtomId h = kept[idx]->head;
                if (!derived[h]) {
                    derived[h] = 1;
                    queue.push_back(h);
                }
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        if (derived[a] != in[a]) return false;
    return true;
}

std::vector<AtomSet> enumerate_bruteforce(const GroundProgram& g) {
    const std::size_t n = g.atom_count();
    if (n > kBruteforceAtomLimit)
        throw CspError("brute-force enumeration refused: " + std::to_string(n) + " atoms exceeds " +
                       std::to_string(kBruteforceAtomLimit));
    std::vector<AtomSet> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        AtomSet m;
        for (std::size_t a = 0; a < n; ++a)
            if (mask & (std::uint64_t{1} << a)) m.push_back(static_cast<AtomId>(a));
        if (is_stable(g, m)) out.push_back(std::move(m));
    }
    return out;
}

}  // namespace cspkit
