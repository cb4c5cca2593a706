#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "cspkit/asp.hpp"

using namespace cspkit;

namespace oracle {

bool queens_ok(const std::vector<int>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (rows[i] == rows[j]) return false;
            if (std::abs(rows[i] - rows[j]) == static_cast<int>(j - i)) return false;
        }
    return true;
}

int queens_permutation_count(int n) {
    std::vector<int> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    int count = 0;
    do {
        if (queens_ok(rows)) ++count;
    } while (std::next_permutation(rows.begin(), rows.end()));
    return count;
}

void for_each_interpretation(const CspSpec& spec, const std::function<void(const Interpretation&)>& fn) {
    Interpretation interp;
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::vector<int> ranges;
    for (FuncId f = 0; f < spec.funcs.size(); ++f) {
        const int n = spec.sorts[spec.funcs[f].arg_sorts[0]].size;
        interp.tables.emplace_back(n, 0);
        for (int x = 0; x < n; ++x) {
            cells.emplace_back(f, x);
            ranges.push_back(spec.sorts[spec.funcs[f].result_sort].size);
        }
    }
    while (true) {
        fn(interp);
        std::size_t i = cells.size();
        bool done = true;
        while (i > 0) {
            --i;
            auto& v = interp.tables[cells[i].first][cells[i].second];
            if (++v < ranges[i]) {
                done = false;
                break;
            }
            v = 0;
        }
        if (done) return;
    }
}

std::set<Interpretation> all_models(const CspSpec& spec) {
    std::set<Interpretation> out;
    for_each_interpretation(spec, [&](const Interpretation& i) {
        if (check(spec, i).empty()) out.insert(i);
    });
    return out;
}

GroundProgram random_ground_program(std::mt19937_64& rng, int max_atoms, int max_rules) {
    GroundProgram g;
    const int atoms = std::uniform_int_distribution<int>(1, max_atoms)(rng);
    const int rules = std::uniform_int_distribution<int>(0, max_rules)(rng);
    for (int a = 0; a < atoms; ++a) g.intern("a" + std::to_string(a));
    std::uniform_int_distribution<int> atom(0, atoms - 1), len(0, 2), pct(0, 99);
    auto pick = [&](int k) {
        std::vector<AtomId> v;
        for (int i = 0; i < k; ++i) v.push_back(static_cast<AtomId>(atom(rng)));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    for (int r = 0; r < rules; ++r) {
        auto pos = pick(len(rng));
        auto neg = pick(len(rng));
        if (pct(rng) < 20) {
            if (pos.empty() && neg.empty()) pos = pick(1);
            g.denials.push_back({std::move(pos), std::move(neg)});
        } else {
            g.rules.push_back({static_cast<AtomId>(atom(rng)), std::move(pos), std::move(neg)});
        }
    }
    return g;
}

AbductiveFramework random_framework(std::mt19937_64& rng, int max_abducibles, int max_rules) {
    AbductiveFramework fw;
    fw.signature.sorts.push_back({"s", 2, {}});
    std::uniform_int_distribution<int> pct(0, 99);

    // Abducibles: arity 0 contributes one ground atom, arity 1 two.
    int budget = std::uniform_int_distribution<int>(1, max_abducibles)(rng);
    struct P {
        std::string name;
        bool unary;
    };
    std::vector<P> abd, defined;
    for (int i = 0; budget > 0; ++i) {
        const bool unary = budget >= 2 && pct(rng) < 40;
        abd.push_back({"ab" + std::to_string(i), unary});
        budget -= unary ? 2 : 1;
    }
    const int ndef = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < ndef; ++i) defined.push_back({"p" + std::to_string(i), pct(rng) < 40});
    for (const auto& a : abd) {
        fw.program.declare({a.name, a.unary ? std::vector<SortId>{0} : std::vector<SortId>{}, PredKind::Open});
        fw.abducibles.insert(a.name);
    }
    for (const auto& d : defined)
        fw.program.declare({d.name, d.unary ? std::vector<SortId>{0} : std::vector<SortId>{}, PredKind::Defined});

    std::vector<P> all = abd;
    all.insert(all.end(), defined.begin(), defined.end());
    std::uniform_int_distribution<std::size_t> any(0, all.size() - 1), anydef(0, defined.size() - 1);
    std::uniform_int_distribution<int> len(0, 2);

    auto lit = [&](const P& p, bool neg) {
        AtomLit a{p.name, {}, neg};
        if (p.unary) a.args.push_back(Term::var(0));
        return a;
    };
    auto make = [&](std::optional<P> head) {
        Rule r;
        r.var_names = {"X"};
        bool uses_x = head && head->unary;
        bool x_bound = false;
        if (head) r.head = lit(*head, false);
        const int npos = len(rng), nneg = len(rng);
        for (int i = 0; i < npos; ++i) {
            const auto& p = all[any(rng)];
            uses_x |= p.unary;
            x_bound |= p.unary;
            r.body.push_back(lit(p, false));
        }
        for (int i = 0; i < nneg; ++i) {
            const auto& p = all[any(rng)];
            uses_x |= p.unary;
            r.body.push_back(lit(p, true));
        }
        if (uses_x && !x_bound) r.body.push_back(SortLit{0, 0, false});
        if (!uses_x) r.var_names.clear();
        return r;
    };

    const int nrules = std::uniform_int_distribution<int>(0, max_rules)(rng);
    for (int i = 0; i < nrules; ++i) {
        if (pct(rng) < 25) {
            Rule d = make(std::nullopt);
            if (d.body.empty()) d = make(std::nullopt);
            if (!d.body.empty()) {
                d.origin = RuleOrigin::Integrity;
                fw.integrity.push_back(std::move(d));
            }
        } else {
            fw.program.rules.push_back(make(defined[anydef(rng)]));
        }
    }
    return fw;
}

FdStore BinaryCsp::store() const {
    FdStore s;
    for (const auto& d : domains) s.add_var(d);
    return s;
}

BinaryCsp random_binary_csp(std::mt19937_64& rng, int max_vars, int max_domain) {
    BinaryCsp csp;
    std::uniform_int_distribution<int> pct(0, 99);
    const int nvars = std::uniform_int_distribution<int>(2, max_vars)(rng);
    for (int v = 0; v < nvars; ++v) {
        const int size = std::uniform_int_distribution<int>(1, max_domain)(rng);
        std::vector<int> vals;
        for (int x = 0; x < max_domain; ++x) vals.push_back(x);
        std::shuffle(vals.begin(), vals.end(), rng);
        vals.resize(size);
        Domain d(0, max_domain - 1);
        for (int x = 0; x < max_domain; ++x)
            if (std::find(vals.begin(), vals.end(), x) == vals.end()) d.remove(x);
        csp.domains.push_back(d);
    }
    const int ncons = std::uniform_int_distribution<int>(1, nvars * 2)(rng);
    std::uniform_int_distribution<int> var(0, nvars - 1), small(-2, 3);
    for (int i = 0; i < ncons; ++i) {
        FdVarId x = var(rng), y = var(rng);
        if (x == y) continue;
        switch (pct(rng) % 4) {
        case 0: csp.constraints.push_back(NotEqual{x, y}); break;
        case 1: csp.constraints.push_back(AbsDiffNotEqual{x, y, std::abs(small(rng))}); break;
        case 2: csp.constraints.push_back(NotEqualOffset{x, y, small(rng)}); break;
        default: {
            BinaryTable t{x, y, {}};
            for (int a : csp.domains[x].values())
                for (int b : csp.domains[y].values())
                    if (pct(rng) < 55) t.allowed.insert({a, b});
            csp.constraints.push_back(std::move(t));
        }
        }
    }
    return csp;
}

std::vector<std::vector<int>> brute_force_solutions(const BinaryCsp& csp) {
    std::vector<std::vector<int>> doms;
    for (const auto& d : csp.domains) doms.push_back(d.values());
    std::vector<std::vector<int>> out;
    std::vector<int> cur(doms.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == doms.size()) {
            for (const auto& c : csp.constraints) {
                const auto [x, y] = scope(c);
                if (!allows(c, cur[x], cur[y])) return;
            }
            out.push_back(cur);
            return;
        }
        for (int v : doms[i]) {
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

std::set<std::set<std::string>> named_models(const GroundProgram& g, const std::vector<AtomSet>& models) {
    std::set<std::set<std::string>> out;
    for (const auto& m : models) {
        std::set<std::string> s;
        for (auto a : m) s.insert(g.name(a));
        out.insert(std::move(s));
    }
    return out;
}

GroundProgram naive_ground(const NormalProgram& p, const CspSpec& sig) {
    GroundProgram g;
    int universe = 1;
    for (const auto& s : sig.sorts) universe = std::max(universe, s.size);
    static const Interpretation none;

    for (const auto& r : p.rules) {
        const std::size_t nvars = r.var_names.size();
        std::vector<int> b(nvars, 0);
        while (true) {
            bool keep = true;
            std::vector<AtomId> pos, neg;
            auto in_sorts = [&](const AtomLit& a, std::vector<int>& args) {
                const auto* d = p.find_pred(a.pred);
                for (std::size_t i = 0; i < a.args.size(); ++i) {
                    const int v = a.args[i].kind == Term::Kind::Var ? b[a.args[i].value] : a.args[i].value;
                    args.push_back(v);
                    if (v >= sig.sorts[d->arg_sorts[i]].size) return false;
                }
                return true;
            };
            std::optional<AtomId> head;
            if (r.head) {
                std::vector<int> args;
                if (!in_sorts(*r.head, args)) keep = false;
                else head = g.intern(r.head->pred, args);
            }
            for (const auto& lit : r.body) {
                if (!keep) break;
                if (const auto* a = std::get_if<AtomLit>(&lit)) {
                    std::vector<int> args;
                    const bool typed = in_sorts(*a, args);
                    const auto* d = p.find_pred(a->pred);
                    if (d->kind == PredKind::Fact) {
                        bool holds = false;
                        if (typed)
                            for (const auto& rel : sig.relations)
                                if (rel.name == a->pred) holds = rel.tuples.contains(args);
                        if (holds == a->negated) keep = false;
                    } else if (!typed) {
                        if (!a->negated) keep = false;
                    } else {
                        (a->negated ? neg : pos).push_back(g.intern(a->pred, args));
                    }
                } else if (const auto* s = std::get_if<SortLit>(&lit)) {
                    const bool in = b[s->var] < sig.sorts[s->sort].size;
                    if (in == s->negated) keep = false;
                } else {
                    const auto& bl = std::get<BuiltinLit>(lit);
                    bool all = true;
                    for (const auto& c : bl.conj) all = all && eval_comparison(sig, c, none, b);
                    if (all == bl.negated) keep = false;
                }
            }
            if (keep) {
                if (head)
                    g.rules.push_back({*head, pos, neg});
                else if (!r.head)
                    g.denials.push_back({pos, neg});
            }
            std::size_t i = nvars;
            bool done = true;
            while (i > 0) {
                --i;
                if (++b[i] < universe) {
                    done = false;
                    break;
                }
                b[i] = 0;
            }
            if (done) break;
        }
    }
    return g;
}

}  // namespace oracle
