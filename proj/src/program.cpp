#include "cspkit/program.hpp"

#include <sstream>

namespace cspkit {

const PredicateDecl* NormalProgram::find_pred(const std::string& name) const {
    for (const auto& d : preds)
        if (d.name == name) return &d;
    return nullptr;
}

void NormalProgram::declare(PredicateDecl decl) {
    for (const auto& d : preds) {
        if (d.name != decl.name) continue;
        if (d.arg_sorts != decl.arg_sorts)
            throw CspError("conflicting declarations for predicate " + decl.name);
        return;
    }
    preds.push_back(std::move(decl));
}

std::string complement_name(const std::string& pred) { return pred + "_bar"; }

namespace {

void print_expr(std::ostream& os, const Expr& e, const std::vector<std::string>& vars,
                const CspSpec& sig) {
    switch (e.kind) {
    case Expr::Kind::Var:
        if (e.value >= 0 && static_cast<std::size_t>(e.value) < vars.size())
            os << vars[e.value];
        else
            os << "_V" << e.value;
        break;
    case Expr::Kind::Const: os << e.value; break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
        print_expr(os, e.args[0], vars, sig);
        os << (e.kind == Expr::Kind::Add ? " + " : " - ");
        if (e.args[1].kind == Expr::Kind::Add || e.args[1].kind == Expr::Kind::Sub) {
            os << '(';
            print_expr(os, e.args[1], vars, sig);
            os << ')';
        } else {
            print_expr(os, e.args[1], vars, sig);
        }
        break;
    case Expr::Kind::Abs:
        os << "abs(";
        print_expr(os, e.args[0], vars, sig);
        os << ')';
        break;
    case Expr::Kind::Apply:
        os << (static_cast<std::size_t>(e.value) < sig.funcs.size() ? sig.funcs[e.value].name
                                                                     : std::string("f?"))
           << '(';
        print_expr(os, e.args[0], vars, sig);
        os << ')';
        break;
    }
}

void print_atom(std::ostream& os, const AtomLit& a, const std::vector<std::string>& vars) {
    if (a.negated) os << "not ";
    os << a.pred;
    if (a.args.empty()) return;
    os << '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) os << ',';
        const auto& t = a.args[i];
        if (t.kind == Term::Kind::Const)
            os << t.value;
        else if (t.value >= 0 && static_cast<std::size_t>(t.value) < vars.size())
            os << vars[t.value];
        else
            os << "_V" << t.value;
    }
    os << ')';
}

void print_comparison(std::ostream& os, const Comparison& c, const std::vector<std::string>& vars,
                      const CspSpec& sig) {
    print_expr(os, c.lhs, vars, sig);
    os << ' ' << to_string(c.op) << ' ';
    print_expr(os, c.rhs, vars, sig);
}

}  // namespace

void print_rule(std::ostream& os, const Rule& r, const CspSpec& sig) {
    if (r.head) print_atom(os, *r.head, r.var_names);
    if (!r.body.empty()) os << (r.head ? " :- " : ":- ");
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) os << ", ";
        std::visit(
            [&](const auto& lit) {
                using T = std::decay_t<decltype(lit)>;
                if constexpr (std::is_same_v<T, AtomLit>) {
                    print_atom(os, lit, r.var_names);
                } else if constexpr (std::is_same_v<T, SortLit>) {
                    if (lit.negated) os << "not ";
                    os << "d_"
                       << (lit.sort < sig.sorts.size() ? sig.sorts[lit.sort].name
                                                       : std::to_string(lit.sort))
                       << '(' << r.var_names.at(lit.var) << ')';
                } else {
                    if (lit.negated) os << "not [";
                    for (std::size_t j = 0; j < lit.conj.size(); ++j) {
                        if (j) os << ", ";
                        print_comparison(os, lit.conj[j], r.var_names, sig);
                    }
                    if (lit.negated) os << ']';
                }
            },
            r.body[i]);
    }
    if (!r.head && r.body.empty()) os << ":-";
    os << '.';
}

std::string to_string(const NormalProgram& p, const CspSpec& sig) {
    std::ostringstream os;
    for (const auto& r : p.rules) {
        print_rule(os, r, sig);
        os << '\n';
    }
    return os.str();
}

std::string ground_atom_name(const std::string& pred, const std::vector<int>& args) {
    if (args.empty()) return pred;
    std::string s = pred + '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(args[i]);
    }
    s += ')';
    return s;
}

AtomId GroundProgram::intern(const std::string& pred, const std::vector<int>& args) {
    auto name = ground_atom_name(pred, args);
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    const auto id = static_cast<AtomId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    atoms_.push_back({pred, args});
    return id;
}

std::optional<AtomId> GroundProgram::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

void dump_body(std::ostream& os, const GroundProgram& g, const std::vector<AtomId>& pos,
               const std::vector<AtomId>& neg) {
    bool first = true;
    for (auto a : pos) {
        os << (first ? "" : ", ") << g.name(a);
        first = false;
    }
    for (auto a : neg) {
        os << (first ? "" : ", ") << "not " << g.name(a);
        first = false;
    }
}

}  // namespace

std::string dump(const GroundProgram& g) {
    std::ostringstream os;
    for (const auto& r : g.rules) {
        os << g.name(r.head);
        if (!r.pos.empty() || !r.neg.empty()) {
            os << " :- ";
            dump_body(os, g, r.pos, r.neg);
        }
        os << ".\n";
    }
    for (const auto& d : g.denials) {
        os << ":- ";
        dump_body(os, g, d.pos, d.neg);
        os << ".\n";
    }
    return os.str();
}

std::vector<std::string> atom_names(const GroundProgram& g, const AtomSet& m) {
    std::vector<std::string> out;
    out.reserve(m.size());
    for (auto a : m) out.push_back(g.name(a));
    return out;
}

}  // namespace cspkit
