#include "cspkit/model_finder.hpp"

#include <algorithm>
#include <optional>

namespace cspkit {

namespace {

struct Cell {
    FuncId func;
    int arg;
};

struct Instance {
    std::size_t axiom;
    Binding binding;
};

// Tables plus an index from cells to the axiom instances that become
// fully decided when that cell is assigned.
class TableSearch {
public:
    TableSearch(const CspSpec& spec, const ModelFinderOptions& opts)
        : spec_(spec), cap_(opts.limits.solution_cap()), guard_(opts.limits.deadline) {
        std::vector<std::size_t> offset;
        for (FuncId f = 0; f < spec.funcs.size(); ++f) {
            offset.push_back(cells_.size());
            const int n = spec.sorts.at(spec.funcs[f].arg_sorts.at(0)).size;
            for (int x = 0; x < n; ++x) cells_.push_back({f, x});
            interp_.tables.emplace_back(n, -1);
        }
        by_last_cell_.resize(cells_.size());

        for (std::size_t a = 0; a < spec.axioms.size(); ++a) {
            const auto& ax = spec.axioms[a];
            for_each_binding(spec, ax, [&](const Binding& b) {
                if (!eval_guard(spec, ax, b)) return;
                const auto last = last_cell(ax, b, offset);
                if (!last || opts.check_at_leaf)
                    leaf_checks_.push_back({a, b});
                else
                    by_last_cell_[*last].push_back({a, b});
            });
        }
    }

    ModelFinderResult run() {
        const auto start = Clock::now();
        descend(0);
        result_.stats.elapsed = Clock::now() - start;
        return std::move(result_);
    }

private:
    // Index of the last cell (in assignment order) read by the instance, or
    // nullopt if the cells read cannot be determined statically (nested
    // applications) or no cell is read.
    std::optional<std::size_t> last_cell(const Axiom& ax, const Binding& b,
                                         const std::vector<std::size_t>& offset) const {
        std::optional<std::size_t> last;
        bool dynamic = false;
        for (const auto& c : ax.body) {
            collect(c.lhs, b, offset, last, dynamic);
            collect(c.rhs, b, offset, last, dynamic);
        }
        if (dynamic) return std::nullopt;
        return last;
    }

    void collect(const Expr& e, const Binding& b, const std::vector<std::size_t>& offset,
                 std::optional<std::size_t>& last, bool& dynamic) const {
        if (e.kind == Expr::Kind::Apply) {
            if (e.args[0].contains_apply()) {
                dynamic = true;
                return;
            }
            static const Interpretation none;
            const long long x = eval_expr(spec_, e.args[0], none, b);
            const int n = spec_.sorts.at(spec_.funcs[e.value].arg_sorts.at(0)).size;
            if (x < 0 || x >= n)
                throw CspError("argument " + std::to_string(x) + " outside the domain of " +
                               spec_.funcs[e.value].name);
            const std::size_t cell = offset[e.value] + static_cast<std::size_t>(x);
            last = last ? std::max(*last, cell) : cell;
            return;
        }
        for (const auto& a : e.args) collect(a, b, offset, last, dynamic);
    }

    bool holds(const Instance& inst) {
        ++result_.stats.checks;
        return eval_axiom(spec_, spec_.axioms[inst.axiom], interp_, inst.binding);
    }

    // Returns false when the search must stop.
    bool descend(std::size_t depth) {
        if (guard_.expired()) {
            result_.status = SearchStatus::TimedOut;
            return false;
        }
        if (depth == cells_.size()) {
            for (const auto& inst : leaf_checks_)
                if (!holds(inst)) return true;
            result_.models.push_back(interp_);
            if (result_.models.size() >= cap_) {
                if (cap_ > 1) result_.status = SearchStatus::Truncated;
                return false;
            }
            return true;
        }
        const auto [f, x] = cells_[depth];
        const int range = spec_.sorts.at(spec_.funcs[f].result_sort).size;
        for (int y = 0; y < range; ++y) {
            ++result_.stats.choices;
            interp_.tables[f][x] = y;
            const auto& pending = by_last_cell_[depth];
            const bool ok = std::all_of(pending.begin(), pending.end(),
                                        [&](const Instance& i) { return holds(i); });
            if (ok && !descend(depth + 1)) return false;
            ++result_.stats.backtracks;
        }
        interp_.tables[f][x] = -1;
        return true;
    }

    const CspSpec& spec_;
    std::size_t cap_;
    DeadlineGuard guard_;
    std::vector<Cell> cells_;
    std::vector<std::vector<Instance>> by_last_cell_;
    std::vector<Instance> leaf_checks_;
    Interpretation interp_;
    ModelFinderResult result_;
};

}  // namespace

ModelFinderResult find_models(const CspSpec& spec, const ModelFinderOptions& opts) {
    if (auto diags = validate(spec); !diags.empty())
        throw CspError("invalid spec: " + diags.front().message);
    return TableSearch(spec, opts).run();
}

}  // namespace cspkit
