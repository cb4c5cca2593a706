#include "cspkit/abduction.hpp"

#include <algorithm>
#include <map>

namespace cspkit {

namespace {

std::string pred_of(const std::string& atom_name) { return atom_name.substr(0, atom_name.find('(')); }

std::vector<GroundAtom> abducible_atoms(const AbductiveFramework& fw) {
    std::vector<GroundAtom> out;
    for (const auto& p : fw.abducibles) {
        const auto* decl = fw.program.find_pred(p);
        if (!decl) throw CspError("undeclared abducible " + p);
        std::vector<int> sizes;
        for (auto s : decl->arg_sorts) sizes.push_back(fw.signature.sorts.at(s).size);
        std::vector<int> args(sizes.size(), 0);
        while (true) {
            out.push_back({p, args});
            std::size_t i = args.size();
            bool done = true;
            while (i > 0) {
                --i;
                if (++args[i] < sizes[i]) {
                    done = false;
                    break;
                }
                args[i] = 0;
            }
            if (done) break;
        }
    }
    return out;
}

NamedAtomSet named(const GroundProgram& g, const AtomSet& m) {
    NamedAtomSet out;
    for (auto a : m) out.insert(g.name(a));
    return out;
}

}  // namespace

void validate_framework(const AbductiveFramework& fw) {
    for (const auto& p : fw.abducibles)
        if (!fw.program.find_pred(p)) throw CspError("undeclared abducible " + p);
    for (const auto& r : fw.program.rules)
        if (r.head && fw.abducibles.contains(r.head->pred))
            throw CspError("abducible " + r.head->pred + " used in a rule head");
    for (const auto& r : fw.integrity)
        if (!r.is_denial()) throw CspError("integrity constraint with a head");
}

std::vector<std::string> ground_abducibles(const AbductiveFramework& fw) {
    std::vector<std::string> out;
    for (const auto& a : abducible_atoms(fw)) out.push_back(ground_atom_name(a.pred, a.args));
    return out;
}

std::vector<GsmSolution> gsm_bruteforce(const AbductiveFramework& fw) {
    validate_framework(fw);
    const auto abd = abducible_atoms(fw);
    if (abd.size() > kAbducibleAtomLimit)
        throw CspError("generalized stable model enumeration refused: " + std::to_string(abd.size()) +
                       " ground abducibles exceeds " + std::to_string(kAbducibleAtomLimit));

    NormalProgram p = fw.program;
    p.rules.insert(p.rules.end(), fw.integrity.begin(), fw.integrity.end());
    GroundProgram base = ground(p, fw.signature);
    std::vector<AtomId> ids;
    for (const auto& a : abd) ids.push_back(base.intern(a.pred, a.args));

    // Small programs go through the exhaustive oracle; larger ones (P + Delta
    // is then mostly definite) through the solver.
    constexpr std::size_t kExhaustiveAtoms = 12;
    std::vector<GsmSolution> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << abd.size()); ++mask) {
        GroundProgram g = base;
        NamedAtomSet delta;
        for (std::size_t i = 0; i < abd.size(); ++i) {
            if (!(mask & (std::uint64_t{1} << i))) continue;
            g.rules.push_back({ids[i], {}, {}});
            delta.insert(g.name(ids[i]));
        }
        const auto models = g.atom_count() <= kExhaustiveAtoms
                                ? enumerate_bruteforce(g)
                                : solve(g, {SearchMode::All, std::nullopt, std::nullopt}).models;
        for (const auto& m : models) out.push_back({delta, named(g, m)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

NormalProgram to_stable(const AbductiveFramework& fw) {
    validate_framework(fw);
    TransformResult t;
    t.program = fw.program;
    t.program.rules.insert(t.program.rules.end(), fw.integrity.begin(), fw.integrity.end());
    t.open_predicates = fw.abducibles;
    return add_open_declarations(t, false);
}

StableDecoding decode_stable(const AbductiveFramework& fw, const NamedAtomSet& m_prime) {
    std::set<std::string> complements;
    for (const auto& p : fw.abducibles) complements.insert(complement_name(p));
    StableDecoding d;
    for (const auto& a : m_prime) {
        const auto pred = pred_of(a);
        if (fw.abducibles.contains(pred)) d.delta.insert(a);
        if (complements.contains(pred))
            d.complement.insert(a);
        else
            d.rest.insert(a);
    }
    return d;
}

std::vector<NamedAtomSet> stable_models_of_translation(const AbductiveFramework& fw) {
    const GroundProgram g = ground(to_stable(fw), fw.signature);
    const auto res = solve(g, {SearchMode::All, std::nullopt, std::nullopt});
    std::vector<NamedAtomSet> out;
    for (const auto& m : res.models) out.push_back(named(g, m));
    std::sort(out.begin(), out.end());
    return out;
}

Interpretation FdReduction::decode(const std::vector<int>& solution) const {
    Interpretation interp;
    for (const auto& row : cells) {
        auto& table = interp.tables.emplace_back();
        for (FdVarId v : row) table.push_back(solution.at(v));
    }
    return interp;
}

namespace {

// Linear form over function cells: sum(coef[cell] * cell) + k.
struct Linear {
    std::map<FdVarId, long long> coef;
    long long k = 0;
};

class Reducer {
public:
    explicit Reducer(const CspSpec& spec) : spec_(spec) {}

    FdReduction run() {
        for (FuncId f = 0; f < spec_.funcs.size(); ++f) {
            const auto& fs = spec_.funcs[f];
            const int n = spec_.sorts.at(fs.arg_sorts.at(0)).size;
            const int range = spec_.sorts.at(fs.result_sort).size;
            auto& row = out_.cells.emplace_back();
            for (int x = 0; x < n; ++x) {
                row.push_back(out_.store.add_var(0, range - 1));
                cell_of_var_.push_back({f, x});
            }
        }
        for (const auto& ax : spec_.axioms) {
            for_each_binding(spec_, ax, [&](const Binding& b) {
                if (!eval_guard(spec_, ax, b)) return;
                for (const auto& c : ax.body) reduce(ax, c, b);
            });
        }
        return std::move(out_);
    }

private:
    void cells_in(const Axiom& ax, const Expr& e, const Binding& b, std::set<FdVarId>& out) const {
        if (e.kind == Expr::Kind::Apply) {
            out.insert(cell(ax, e, b));
            return;
        }
        for (const auto& a : e.args) cells_in(ax, a, b, out);
    }

    FdVarId cell(const Axiom& ax, const Expr& app, const Binding& b) const {
        if (app.args[0].contains_apply())
            throw CspError("axiom " + ax.name +
                           " is not expressible as a binary constraint: nested function application");
        static const Interpretation none;
        const long long x = eval_expr(spec_, app.args[0], none, b);
        const auto& row = out_.cells.at(app.value);
        if (x < 0 || x >= static_cast<long long>(row.size()))
            throw CspError("argument " + std::to_string(x) + " outside the domain of " +
                           spec_.funcs[app.value].name);
        return row[x];
    }

    std::optional<Linear> linear(const Axiom& ax, const Expr& e, const Binding& b) const {
        switch (e.kind) {
        case Expr::Kind::Var: return Linear{{}, b.at(e.value)};
        case Expr::Kind::Const: return Linear{{}, e.value};
        case Expr::Kind::Apply: return Linear{{{cell(ax, e, b), 1}}, 0};
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            auto l = linear(ax, e.args[0], b), r = linear(ax, e.args[1], b);
            if (!l || !r) return std::nullopt;
            const long long sign = e.kind == Expr::Kind::Add ? 1 : -1;
            for (const auto& [v, c] : r->coef) l->coef[v] += sign * c;
            l->k += sign * r->k;
            std::erase_if(l->coef, [](const auto& kv) { return kv.second == 0; });
            return l;
        }
        case Expr::Kind::Abs: {
            auto inner = linear(ax, e.args[0], b);
            if (!inner || !inner->coef.empty()) return std::nullopt;
            return Linear{{}, inner->k < 0 ? -inner->k : inner->k};
        }
        }
        return std::nullopt;
    }

    // x - y with no constant part, as (x, y).
    static std::optional<std::pair<FdVarId, FdVarId>> difference(const Linear& l) {
        if (l.coef.size() != 2 || l.k != 0) return std::nullopt;
        auto it = l.coef.begin();
        const auto [v1, c1] = *it++;
        const auto [v2, c2] = *it;
        if (c1 == 1 && c2 == -1) return std::pair{v1, v2};
        if (c1 == -1 && c2 == 1) return std::pair{v2, v1};
        return std::nullopt;
    }

    std::optional<FdConstraint> pattern(const Axiom& ax, const Comparison& c, const Binding& b) const {
        if (c.op != CmpOp::Ne) return std::nullopt;
        auto l = linear(ax, c.lhs, b), r = linear(ax, c.rhs, b);
        if (l && r) {
            for (const auto& [v, k] : r->coef) l->coef[v] -= k;
            std::erase_if(l->coef, [](const auto& kv) { return kv.second == 0; });
            const long long offset = l->k - r->k;
            l->k = 0;
            // x - y + offset != 0  <=>  x != y - offset
            if (auto d = difference(*l)) {
                if (offset == 0) return NotEqual{d->first, d->second};
                return NotEqualOffset{d->first, d->second, static_cast<int>(-offset)};
            }
            return std::nullopt;
        }
        // abs(x - y) != D
        const Expr* abs_side = c.lhs.kind == Expr::Kind::Abs ? &c.lhs
                               : c.rhs.kind == Expr::Kind::Abs ? &c.rhs
                                                               : nullptr;
        if (!abs_side) return std::nullopt;
        const Expr& other = abs_side == &c.lhs ? c.rhs : c.lhs;
        auto inner = linear(ax, abs_side->args[0], b);
        auto dist = linear(ax, other, b);
        if (!inner || !dist || !dist->coef.empty()) return std::nullopt;
        if (auto d = difference(*inner)) return AbsDiffNotEqual{d->first, d->second, static_cast<int>(dist->k)};
        return std::nullopt;
    }

    bool eval_with(const Comparison& c, const Binding& b,
                   const std::vector<std::pair<FdVarId, int>>& values) const {
        Interpretation interp;
        for (const auto& row : out_.cells) interp.tables.emplace_back(row.size(), 0);
        for (const auto& [v, val] : values) {
            const auto [f, x] = cell_of_var_[v];
            interp.tables[f][x] = val;
        }
        return eval_comparison(spec_, c, interp, b);
    }

    void reduce(const Axiom& ax, const Comparison& c, const Binding& b) {
        if (out_.inconsistent) return;
        std::set<FdVarId> vars;
        cells_in(ax, c.lhs, b, vars);
        cells_in(ax, c.rhs, b, vars);
        if (vars.size() > 2)
            throw CspError("axiom " + ax.name + " is not expressible as a binary constraint: " +
                           std::to_string(vars.size()) + " cells in one comparison");
        if (vars.empty()) {
            if (!eval_with(c, b, {})) out_.inconsistent = true;
            return;
        }
        if (vars.size() == 1) {
            const FdVarId v = *vars.begin();
            auto& dom = out_.store.mutable_domain(v);
            for (int val : dom.values())
                if (!eval_with(c, b, {{v, val}})) dom.remove(val);
            if (dom.empty()) out_.inconsistent = true;
            return;
        }
        if (auto k = pattern(ax, c, b)) {
            if (!out_.store.post(std::move(*k))) out_.inconsistent = true;
            return;
        }
        const FdVarId x = *vars.begin(), y = *vars.rbegin();
        BinaryTable t{x, y, {}};
        for (int vx : out_.store.domain(x).values())
            for (int vy : out_.store.domain(y).values())
                if (eval_with(c, b, {{x, vx}, {y, vy}})) t.allowed.insert({vx, vy});
        if (!out_.store.post(std::move(t))) out_.inconsistent = true;
    }

    const CspSpec& spec_;
    FdReduction out_;
    std::vector<std::pair<FuncId, int>> cell_of_var_;
};

}  // namespace

FdReduction reduce_to_fd(const CspSpec& spec) {
    if (auto diags = validate(spec); !diags.empty())
        throw CspError("invalid spec: " + diags.front().message);
    return Reducer(spec).run();
}

AbductiveFramework framework_from_spec(const CspSpec& spec) {
    auto t = functions_to_predicates(spec);
    AbductiveFramework fw;
    fw.signature = spec;
    fw.program.preds = t.program.preds;
    for (auto& r : t.program.rules) {
        if (r.is_denial())
            fw.integrity.push_back(std::move(r));
        else
            fw.program.rules.push_back(std::move(r));
    }
    fw.abducibles = t.open_predicates;
    return fw;
}

}  // namespace cspkit
