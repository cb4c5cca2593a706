#include "cspkit/ir.hpp"

#include <cstdlib>
#include <sstream>

namespace cspkit {

std::string Sort::element_name(int e) const {
    if (e >= 0 && static_cast<std::size_t>(e) < element_names.size()) return element_names[e];
    return std::to_string(e);
}

Expr Expr::var(int index) { return Expr{Kind::Var, index, {}}; }
Expr Expr::constant(int v) { return Expr{Kind::Const, v, {}}; }
Expr Expr::apply(FuncId f, Expr arg) {
    return Expr{Kind::Apply, static_cast<int>(f), {std::move(arg)}};
}
Expr Expr::abs(Expr e) { return Expr{Kind::Abs, 0, {std::move(e)}}; }

Expr operator+(Expr lhs, Expr rhs) {
    return Expr{Expr::Kind::Add, 0, {std::move(lhs), std::move(rhs)}};
}
Expr operator-(Expr lhs, Expr rhs) {
    return Expr{Expr::Kind::Sub, 0, {std::move(lhs), std::move(rhs)}};
}

bool Expr::contains_apply() const {
    if (kind == Kind::Apply) return true;
    for (const auto& a : args)
        if (a.contains_apply()) return true;
    return false;
}

void Expr::collect_vars(std::set<int>& out) const {
    if (kind == Kind::Var) out.insert(value);
    for (const auto& a : args) a.collect_vars(out);
}

CmpOp negate(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

const char* to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

bool compare(CmpOp op, long long lhs, long long rhs) {
    switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
    }
    return false;
}

std::optional<SortId> CspSpec::find_sort(const std::string& name) const {
    for (SortId i = 0; i < sorts.size(); ++i)
        if (sorts[i].name == name) return i;
    return std::nullopt;
}

std::optional<FuncId> CspSpec::find_func(const std::string& name) const {
    for (FuncId i = 0; i < funcs.size(); ++i)
        if (funcs[i].name == name) return i;
    return std::nullopt;
}

std::optional<RelId> CspSpec::find_relation(const std::string& name) const {
    for (RelId i = 0; i < relations.size(); ++i)
        if (relations[i].name == name) return i;
    return std::nullopt;
}

namespace {

class Validator {
public:
    explicit Validator(const CspSpec& spec) : spec_(spec) {}

    std::vector<Diagnostic> run() {
        std::set<std::string> names;
        for (const auto& s : spec_.sorts) {
            if (s.size < 1) report("sort " + s.name + " has non-positive size");
            if (!names.insert(s.name).second) report("duplicate sort name " + s.name);
        }
        for (const auto& f : spec_.funcs) {
            if (f.arg_sorts.size() != 1)
                report("unsupported arity " + std::to_string(f.arg_sorts.size()) +
                       " for function " + f.name);
            for (auto s : f.arg_sorts) check_sort(s, "function " + f.name);
            check_sort(f.result_sort, "function " + f.name);
        }
        for (const auto& r : spec_.relations) {
            bool sorts_ok = true;
            for (auto s : r.arg_sorts) sorts_ok &= check_sort(s, "relation " + r.name);
            if (!sorts_ok) continue;
            for (const auto& t : r.tuples) {
                if (t.size() != r.arg_sorts.size()) {
                    report("tuple arity mismatch in relation " + r.name);
                    continue;
                }
                for (std::size_t i = 0; i < t.size(); ++i)
                    if (t[i] < 0 || t[i] >= spec_.sorts[r.arg_sorts[i]].size)
                        report("tuple element out of sort range in relation " + r.name);
            }
        }
        for (const auto& ax : spec_.axioms) check_axiom(ax);
        return std::move(diags_);
    }

private:
    void report(std::string msg) { diags_.push_back({std::move(msg)}); }

    bool check_sort(SortId s, const std::string& where) {
        if (s < spec_.sorts.size()) return true;
        report("unknown sort " + std::to_string(s) + " in " + where);
        return false;
    }

    void check_var(const Axiom& ax, int v, std::set<int>& unquantified) {
        if (v < 0 || static_cast<std::size_t>(v) >= ax.vars.size() || !ax.vars[v].sort) {
            if (unquantified.insert(v).second)
                report("unquantified variable " +
                       (v >= 0 && static_cast<std::size_t>(v) < ax.vars.size()
                            ? ax.vars[v].name
                            : "#" + std::to_string(v)) +
                       " in axiom " + ax.name);
        }
    }

    void check_expr(const Axiom& ax, const Expr& e, std::set<int>& unquantified) {
        switch (e.kind) {
        case Expr::Kind::Var: check_var(ax, e.value, unquantified); break;
        case Expr::Kind::Apply:
            if (e.value < 0 || static_cast<std::size_t>(e.value) >= spec_.funcs.size())
                report("unknown function in axiom " + ax.name);
            break;
        default: break;
        }
        for (const auto& a : e.args) check_expr(ax, a, unquantified);
    }

    void check_axiom(const Axiom& ax) {
        std::set<int> unquantified;
        for (const auto& v : ax.vars)
            if (v.sort) check_sort(*v.sort, "axiom " + ax.name);
        for (std::size_t i = 0; i < ax.vars.size(); ++i)
            if (!ax.vars[i].sort) check_var(ax, static_cast<int>(i), unquantified);
        for (const auto& g : ax.guard) {
            if (const auto* c = std::get_if<Comparison>(&g)) {
                if (c->lhs.contains_apply() || c->rhs.contains_apply())
                    report("function application in guard of axiom " + ax.name);
                check_expr(ax, c->lhs, unquantified);
                check_expr(ax, c->rhs, unquantified);
            } else {
                const auto& a = std::get<RelAtom>(g);
                if (a.rel >= spec_.relations.size()) {
                    report("unknown relation in guard of axiom " + ax.name);
                    continue;
                }
                if (a.vars.size() != spec_.relations[a.rel].arg_sorts.size())
                    report("relation arity mismatch in axiom " + ax.name);
                for (int v : a.vars) check_var(ax, v, unquantified);
            }
        }
        for (const auto& c : ax.body) {
            check_expr(ax, c.lhs, unquantified);
            check_expr(ax, c.rhs, unquantified);
        }
    }

    const CspSpec& spec_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate(const CspSpec& spec) { return Validator(spec).run(); }

long long eval_expr(const CspSpec& spec, const Expr& e, const Interpretation& interp,
                    const Binding& binding) {
    switch (e.kind) {
    case Expr::Kind::Var: return binding.at(e.value);
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Add:
        return eval_expr(spec, e.args[0], interp, binding) +
               eval_expr(spec, e.args[1], interp, binding);
    case Expr::Kind::Sub:
        return eval_expr(spec, e.args[0], interp, binding) -
               eval_expr(spec, e.args[1], interp, binding);
    case Expr::Kind::Abs: return std::llabs(eval_expr(spec, e.args[0], interp, binding));
    case Expr::Kind::Apply: {
        const auto& f = spec.funcs.at(e.value);
        const long long x = eval_expr(spec, e.args[0], interp, binding);
        if (x < 0 || x >= spec.sorts.at(f.arg_sorts.at(0)).size)
            throw CspError("argument " + std::to_string(x) + " outside the domain of " + f.name);
        if (e.value >= static_cast<int>(interp.tables.size()))
            throw CspError("interpretation has no table for " + f.name);
        const auto& table = interp.tables[e.value];
        if (static_cast<std::size_t>(x) >= table.size())
            throw CspError("table for " + f.name + " is not total");
        return table[x];
    }
    }
    throw CspError("malformed expression");
}

bool eval_comparison(const CspSpec& spec, const Comparison& c, const Interpretation& interp,
                     const Binding& binding) {
    return compare(c.op, eval_expr(spec, c.lhs, interp, binding),
                   eval_expr(spec, c.rhs, interp, binding));
}

bool eval_guard(const CspSpec& spec, const Axiom& ax, const Binding& binding) {
    static const Interpretation empty;
    for (const auto& g : ax.guard) {
        if (const auto* c = std::get_if<Comparison>(&g)) {
            if (!eval_comparison(spec, *c, empty, binding)) return false;
        } else {
            const auto& a = std::get<RelAtom>(g);
            std::vector<int> tuple;
            tuple.reserve(a.vars.size());
            for (int v : a.vars) tuple.push_back(binding.at(v));
            if (!spec.relations.at(a.rel).tuples.contains(tuple)) return false;
        }
    }
    return true;
}

bool eval_axiom(const CspSpec& spec, const Axiom& ax, const Interpretation& interp,
                const Binding& binding) {
    if (binding.size() < ax.vars.size()) throw CspError("binding does not cover axiom " + ax.name);
    if (!eval_guard(spec, ax, binding)) return true;
    for (const auto& c : ax.body)
        if (!eval_comparison(spec, c, interp, binding)) return false;
    return true;
}

std::vector<Violation> check(const CspSpec& spec, const Interpretation& interp) {
    if (interp.tables.size() != spec.funcs.size())
        throw CspError("interpretation has " + std::to_string(interp.tables.size()) +
                       " tables, expected " + std::to_string(spec.funcs.size()));
    for (FuncId f = 0; f < spec.funcs.size(); ++f) {
        const auto& fs = spec.funcs[f];
        const auto& table = interp.tables[f];
        if (table.size() != static_cast<std::size_t>(spec.sorts.at(fs.arg_sorts.at(0)).size))
            throw CspError("table for " + fs.name + " is not total");
        const int range = spec.sorts.at(fs.result_sort).size;
        for (int y : table)
            if (y < 0 || y >= range) throw CspError("table for " + fs.name + " leaves its range");
    }
    std::vector<Violation> out;
    for (std::size_t a = 0; a < spec.axioms.size(); ++a) {
        for_each_binding(spec, spec.axioms[a], [&](const Binding& b) {
            if (!eval_axiom(spec, spec.axioms[a], interp, b)) out.push_back({a, b});
        });
    }
    return out;
}

std::string format_interpretation(const CspSpec& spec, const Interpretation& interp) {
    std::ostringstream os;
    for (FuncId f = 0; f < spec.funcs.size() && f < interp.tables.size(); ++f) {
        const auto& fs = spec.funcs[f];
        const auto& dom = spec.sorts.at(fs.arg_sorts.at(0));
        const auto& rng = spec.sorts.at(fs.result_sort);
        for (std::size_t x = 0; x < interp.tables[f].size(); ++x) {
            if (x) os << ' ';
            os << fs.name << '(' << dom.element_name(static_cast<int>(x))
               << ")=" << rng.element_name(interp.tables[f][x]);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace cspkit
