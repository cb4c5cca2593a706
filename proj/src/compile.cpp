#include "cspkit/compile.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace cspkit {

namespace {

const char* const kHasPrefix = "has_";

std::string expr_key(const Expr& e) {
    std::string k = std::to_string(static_cast<int>(e.kind)) + ':' + std::to_string(e.value);
    if (!e.args.empty()) {
        k += '(';
        for (const auto& a : e.args) k += expr_key(a) + ',';
        k += ')';
    }
    return k;
}

// Rewrites one axiom into a denial: every f(t) becomes a fresh variable V
// with f(t,V) added to the body.
class AxiomRewriter {
public:
    AxiomRewriter(const CspSpec& spec, const Axiom& ax) : spec_(spec), ax_(ax) {
        for (const auto& v : ax.vars) var_names_.push_back(v.name);
    }

    std::optional<Rule> run() {
        if (ax_.body.empty()) return std::nullopt;

        std::vector<BodyLit> guard;
        for (const auto& g : ax_.guard) {
            if (const auto* c = std::get_if<Comparison>(&g)) {
                guard.push_back(BuiltinLit{{*c}, false});
            } else {
                const auto& ra = std::get<RelAtom>(g);
                AtomLit a{spec_.relations.at(ra.rel).name, {}, false};
                for (int v : ra.vars) a.args.push_back(Term::var(v));
                guard.push_back(std::move(a));
            }
        }

        std::vector<Comparison> body;
        for (const auto& c : ax_.body) body.push_back({c.op, rewrite(c.lhs), rewrite(c.rhs)});

        Rule r;
        r.origin = RuleOrigin::AxiomDenial;
        r.label = ax_.name;
        for (auto& g : guard)
            if (std::holds_alternative<AtomLit>(g)) r.body.push_back(std::move(g));
        for (auto& a : apps_) r.body.push_back(std::move(a));

        // Quantified variables not bound by any positive atom get a sort literal.
        std::set<int> bound;
        for (const auto& lit : r.body)
            for (const auto& t : std::get<AtomLit>(lit).args)
                if (t.kind == Term::Kind::Var) bound.insert(t.value);
        for (std::size_t i = 0; i < ax_.vars.size(); ++i)
            if (!bound.contains(static_cast<int>(i)))
                r.body.push_back(SortLit{*ax_.vars[i].sort, static_cast<int>(i), false});

        for (auto& g : guard)
            if (std::holds_alternative<BuiltinLit>(g)) r.body.push_back(std::move(g));
        for (auto& b : extra_builtins_) r.body.push_back(std::move(b));

        if (body.size() == 1) {
            body[0].op = negate(body[0].op);
            r.body.push_back(BuiltinLit{std::move(body), false});
        } else {
            r.body.push_back(BuiltinLit{std::move(body), true});
        }
        r.var_names = std::move(var_names_);
        return r;
    }

private:
    int fresh() {
        std::string name;
        do {
            name = "V_" + std::to_string(++counter_);
        } while (std::find(var_names_.begin(), var_names_.end(), name) != var_names_.end());
        var_names_.push_back(name);
        return static_cast<int>(var_names_.size() - 1);
    }

    Term as_term(const Expr& arg) {
        if (arg.kind == Expr::Kind::Var) return Term::var(arg.value);
        if (arg.kind == Expr::Kind::Const) return Term::constant(arg.value);
        const int w = fresh();
        extra_builtins_.push_back(BuiltinLit{{Comparison{CmpOp::Eq, Expr::var(w), arg}}, false});
        return Term::var(w);
    }

    Expr rewrite(const Expr& e) {
        if (e.kind != Expr::Kind::Apply) {
            Expr out = e;
            for (auto& a : out.args) a = rewrite(a);
            return out;
        }
        const auto key = expr_key(e);
        if (auto it = memo_.find(key); it != memo_.end()) return Expr::var(it->second);
        const auto& f = spec_.funcs.at(e.value);
        Expr arg = rewrite(e.args[0]);
        Term t = as_term(arg);
        const int v = fresh();
        apps_.push_back(AtomLit{f.name, {t, Term::var(v)}, false});
        memo_.emplace(key, v);
        return Expr::var(v);
    }

    const CspSpec& spec_;
    const Axiom& ax_;
    std::vector<std::string> var_names_;
    std::vector<BodyLit> apps_;
    std::vector<BodyLit> extra_builtins_;
    std::map<std::string, int> memo_;
    int counter_ = 0;
};

Rule make_rule(std::optional<AtomLit> head, std::vector<BodyLit> body,
               std::vector<std::string> vars, RuleOrigin origin, std::string label) {
    Rule r;
    r.head = std::move(head);
    r.body = std::move(body);
    r.var_names = std::move(vars);
    r.origin = origin;
    r.label = std::move(label);
    return r;
}

}  // namespace

TransformResult functions_to_predicates(const CspSpec& spec) {
    if (auto diags = validate(spec); !diags.empty())
        throw CspError("invalid spec: " + diags.front().message);

    TransformResult out;
    auto& prog = out.program;
    for (const auto& rel : spec.relations) prog.declare({rel.name, rel.arg_sorts, PredKind::Fact});

    for (FuncId fid = 0; fid < spec.funcs.size(); ++fid) {
        const auto& f = spec.funcs[fid];
        const SortId dom = f.arg_sorts.at(0);
        const SortId rng = f.result_sort;
        const std::string has = kHasPrefix + f.name;
        prog.declare({f.name, {dom, rng}, PredKind::Open});
        prog.declare({has, {dom}, PredKind::Defined});
        out.open_predicates.insert(f.name);
        out.decode_map.emplace(f.name, fid);

        const auto X = Term::var(0), Y = Term::var(1), Z = Term::var(2);
        // has_f(X) <- d(Y), f(X,Y).
        prog.rules.push_back(make_rule(AtomLit{has, {X}, false},
                                       {SortLit{rng, 1, false}, AtomLit{f.name, {X, Y}, false}},
                                       {"X", "Y"}, RuleOrigin::HasRule, f.name));
        // has_f(X) <= d_p(X).
        prog.rules.push_back(make_rule(std::nullopt,
                                       {SortLit{dom, 0, false}, AtomLit{has, {X}, true}}, {"X"},
                                       RuleOrigin::ExistenceDenial, f.name));
        // d_p(X) <= f(X,Y).
        prog.rules.push_back(make_rule(std::nullopt,
                                       {AtomLit{f.name, {X, Y}, false}, SortLit{dom, 0, true}},
                                       {"X", "Y"}, RuleOrigin::DomainDenial, f.name));
        // Y = Z <= f(X,Y), f(X,Z).
        prog.rules.push_back(make_rule(
            std::nullopt,
            {AtomLit{f.name, {X, Y}, false}, AtomLit{f.name, {X, Z}, false},
             BuiltinLit{{Comparison{CmpOp::Ne, Expr::var(1), Expr::var(2)}}, false}},
            {"X", "Y", "Z"}, RuleOrigin::UniquenessDenial, f.name));
    }

    for (const auto& ax : spec.axioms)
        if (auto r = AxiomRewriter(spec, ax).run()) prog.rules.push_back(std::move(*r));
    return out;
}

NormalProgram add_open_declarations(const TransformResult& t, bool compact) {
    NormalProgram prog = t.program;
    std::vector<Rule> extra;
    for (const auto& p : t.open_predicates) {
        const auto* decl = prog.find_pred(p);
        if (!decl) throw CspError("unknown open predicate " + p);
        const auto sorts = decl->arg_sorts;
        const auto bar = complement_name(p);
        prog.declare({bar, sorts, PredKind::Defined});

        std::vector<std::string> vars;
        std::vector<Term> args;
        std::vector<BodyLit> typing;
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            vars.push_back("X" + std::to_string(i + 1));
            args.push_back(Term::var(static_cast<int>(i)));
            typing.push_back(SortLit{sorts[i], static_cast<int>(i), false});
        }
        auto choice_body = typing;
        choice_body.push_back(AtomLit{bar, args, true});
        auto complement_body = typing;
        complement_body.push_back(AtomLit{p, args, true});
        extra.push_back(make_rule(AtomLit{p, args, false}, std::move(choice_body), vars,
                                  RuleOrigin::OpenChoice, p));
        extra.push_back(make_rule(AtomLit{bar, args, false}, std::move(complement_body), vars,
                                  RuleOrigin::OpenComplement, p));

        if (compact && t.decode_map.contains(p)) {
            std::erase_if(prog.rules, [&](const Rule& r) {
                return r.origin == RuleOrigin::DomainDenial && r.label == p;
            });
        }
    }
    prog.rules.insert(prog.rules.begin(), std::make_move_iterator(extra.begin()),
                      std::make_move_iterator(extra.end()));
    return prog;
}

namespace {

std::string rule_text(const Rule& r, const CspSpec& sig) {
    std::ostringstream os;
    print_rule(os, r, sig);
    return os.str();
}

class Grounder {
public:
    Grounder(const NormalProgram& p, const CspSpec& sig) : prog_(p), sig_(sig) {}

    GroundProgram run() {
        for (const auto& r : prog_.rules) ground_rule(r);
        return std::move(out_);
    }

private:
    struct Filter {
        std::size_t ready = 0;  // number of bound variables needed
        const BodyLit* lit = nullptr;
    };

    void ground_rule(const Rule& r) {
        const std::size_t nvars = r.var_names.size();
        std::vector<int> size(nvars, -1);
        auto restrict_to = [&](int v, int n) {
            if (v < 0 || static_cast<std::size_t>(v) >= nvars)
                throw CspError("variable index out of range in rule " + rule_text(r, sig_));
            size[v] = size[v] < 0 ? n : std::min(size[v], n);
        };
        auto pred_sorts = [&](const AtomLit& a) -> const PredicateDecl& {
            const auto* d = prog_.find_pred(a.pred);
            if (!d) throw CspError("undeclared predicate " + a.pred + " in rule " + rule_text(r, sig_));
            if (d->arg_sorts.size() != a.args.size())
                throw CspError("arity mismatch for " + a.pred + " in rule " + rule_text(r, sig_));
            return *d;
        };

        for (const auto& lit : r.body) {
            if (const auto* a = std::get_if<AtomLit>(&lit)) {
                const auto& d = pred_sorts(*a);
                if (a->negated) continue;
                for (std::size_t i = 0; i < a->args.size(); ++i)
                    if (a->args[i].kind == Term::Kind::Var)
                        restrict_to(a->args[i].value, sig_.sorts.at(d.arg_sorts[i]).size);
            } else if (const auto* s = std::get_if<SortLit>(&lit)) {
                if (!s->negated) restrict_to(s->var, sig_.sorts.at(s->sort).size);
            }
        }
        if (r.head) {
            const auto& d = pred_sorts(*r.head);
            if (d.kind == PredKind::Fact)
                throw CspError("fact relation " + r.head->pred + " used as a rule head");
        }
        for (std::size_t v = 0; v < nvars; ++v)
            if (size[v] < 0)
                throw CspError("rule " + rule_text(r, sig_) + " is not range-restricted: variable " +
                               r.var_names[v]);

        // A filter runs once all variables it mentions are bound.
        std::vector<Filter> filters;
        for (const auto& lit : r.body) {
            std::set<int> vars;
            bool is_filter = true;
            if (const auto* a = std::get_if<AtomLit>(&lit)) {
                is_filter = pred_sorts(*a).kind == PredKind::Fact;
                for (const auto& t : a->args)
                    if (t.kind == Term::Kind::Var) vars.insert(t.value);
            } else if (const auto* s = std::get_if<SortLit>(&lit)) {
                vars.insert(s->var);
            } else {
                for (const auto& c : std::get<BuiltinLit>(lit).conj) {
                    if (c.lhs.contains_apply() || c.rhs.contains_apply())
                        throw CspError("function application in program rule " + rule_text(r, sig_));
                    c.lhs.collect_vars(vars);
                    c.rhs.collect_vars(vars);
                }
            }
            if (is_filter)
                filters.push_back({vars.empty() ? 0 : static_cast<std::size_t>(*vars.rbegin()) + 1, &lit});
        }
        std::stable_sort(filters.begin(), filters.end(),
                         [](const Filter& a, const Filter& b) { return a.ready < b.ready; });

        Binding b(nvars, 0);
        std::size_t next_filter = 0;
        std::function<void(std::size_t)> descend = [&](std::size_t depth) {
            const std::size_t saved = next_filter;
            while (next_filter < filters.size() && filters[next_filter].ready <= depth) {
                if (!holds(*filters[next_filter].lit, b)) {
                    next_filter = saved;
                    return;
                }
                ++next_filter;
            }
            if (depth == nvars) {
                emit(r, b);
            } else {
                for (int e = 0; e < size[depth]; ++e) {
                    b[depth] = e;
                    descend(depth + 1);
                }
            }
            next_filter = saved;
        };
        descend(0);
    }

    std::vector<int> ground_args(const AtomLit& a, const Binding& b) const {
        std::vector<int> args;
        args.reserve(a.args.size());
        for (const auto& t : a.args) args.push_back(t.kind == Term::Kind::Var ? b[t.value] : t.value);
        return args;
    }

    bool holds(const BodyLit& lit, const Binding& b) const {
        static const Interpretation none;
        if (const auto* s = std::get_if<SortLit>(&lit)) {
            const bool in = b[s->var] >= 0 && b[s->var] < sig_.sorts.at(s->sort).size;
            return in != s->negated;
        }
        if (const auto* bl = std::get_if<BuiltinLit>(&lit)) {
            bool all = true;
            for (const auto& c : bl->conj)
                if (!eval_comparison(sig_, c, none, b)) {
                    all = false;
                    break;
                }
            return all != bl->negated;
        }
        const auto& a = std::get<AtomLit>(lit);
        const auto rel = sig_.find_relation(a.pred);
        if (!rel) throw CspError("no fact table for relation " + a.pred);
        const bool in = sig_.relations[*rel].tuples.contains(ground_args(a, b));
        return in != a.negated;
    }

    void emit(const Rule& r, const Binding& b) {
        std::vector<AtomId> pos, neg;
        for (const auto& lit : r.body) {
            const auto* a = std::get_if<AtomLit>(&lit);
            if (!a || prog_.find_pred(a->pred)->kind == PredKind::Fact) continue;
            const AtomId id = out_.intern(a->pred, ground_args(*a, b));
            (a->negated ? neg : pos).push_back(id);
        }
        std::sort(pos.begin(), pos.end());
        pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
        std::sort(neg.begin(), neg.end());
        neg.erase(std::unique(neg.begin(), neg.end()), neg.end());
        if (r.head) {
            const AtomId h = out_.intern(r.head->pred, ground_args(*r.head, b));
            std::vector<AtomId> key{h};
            key.push_back(static_cast<AtomId>(pos.size()));
            key.insert(key.end(), pos.begin(), pos.end());
            key.insert(key.end(), neg.begin(), neg.end());
            if (seen_rules_.insert(std::move(key)).second)
                out_.rules.push_back({h, std::move(pos), std::move(neg)});
        } else {
            std::vector<AtomId> key{static_cast<AtomId>(pos.size())};
            key.insert(key.end(), pos.begin(), pos.end());
            key.insert(key.end(), neg.begin(), neg.end());
            if (seen_denials_.insert(std::move(key)).second)
                out_.denials.push_back({std::move(pos), std::move(neg)});
        }
    }

    const NormalProgram& prog_;
    const CspSpec& sig_;
    GroundProgram out_;
    std::set<std::vector<AtomId>> seen_rules_;
    std::set<std::vector<AtomId>> seen_denials_;
};

}  // namespace

GroundProgram ground(const NormalProgram& p, const CspSpec& sig) { return Grounder(p, sig).run(); }

Interpretation decode_model(const CspSpec& spec, const TransformResult& t, const GroundProgram& g,
                            const AtomSet& model) {
    Interpretation interp;
    interp.tables.resize(spec.funcs.size());
    for (FuncId f = 0; f < spec.funcs.size(); ++f)
        interp.tables[f].assign(spec.sorts.at(spec.funcs[f].arg_sorts.at(0)).size, -1);
    for (AtomId a : model) {
        const auto& atom = g.atom(a);
        auto it = t.decode_map.find(atom.pred);
        if (it == t.decode_map.end()) continue;
        auto& table = interp.tables[it->second];
        const int x = atom.args.at(0), y = atom.args.at(1);
        if (table.at(x) != -1) throw CspError("model maps " + g.name(a) + " twice");
        table[x] = y;
    }
    for (FuncId f = 0; f < spec.funcs.size(); ++f)
        for (std::size_t x = 0; x < interp.tables[f].size(); ++x)
            if (interp.tables[f][x] < 0)
                throw CspError("model leaves " + spec.funcs[f].name + "(" + std::to_string(x) +
                               ") undefined");
    return interp;
}

}  // namespace cspkit
