#include <doctest.h>

#include "cspkit/abduction.hpp"
#include "cspkit/model_finder.hpp"
#include "cspkit/problems.hpp"
#include "oracles.hpp"

using namespace cspkit;

namespace {

AtomLit atom(const std::string& p, bool neg = false) { return AtomLit{p, {}, neg}; }

Rule rule(std::optional<AtomLit> head, std::vector<BodyLit> body) {
    Rule r;
    r.head = std::move(head);
    r.body = std::move(body);
    r.origin = r.head ? RuleOrigin::User : RuleOrigin::Integrity;
    return r;
}

AbductiveFramework q_from_a() {
    AbductiveFramework fw;
    fw.program.declare({"a", {}, PredKind::Open});
    fw.program.declare({"q", {}, PredKind::Defined});
    fw.abducibles = {"a"};
    fw.program.rules.push_back(rule(atom("q"), {atom("a")}));
    fw.integrity.push_back(rule(std::nullopt, {atom("q", true)}));
    return fw;
}

std::set<Interpretation> as_set(const std::vector<Interpretation>& v) { return {v.begin(), v.end()}; }

std::set<Interpretation> via_fd(const CspSpec& spec) {
    auto red = reduce_to_fd(spec);
    if (red.inconsistent) return {};
    LabelOptions o;
    o.limits.mode = SearchMode::All;
    std::set<Interpretation> out;
    for (const auto& s : label(red.store, o).solutions) out.insert(red.decode(s));
    return out;
}

}  // namespace

TEST_CASE("integrity forces the explanation") {
    const auto sols = gsm_bruteforce(q_from_a());
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].delta == NamedAtomSet{"a"});
    CHECK(sols[0].model == NamedAtomSet{"a", "q"});
}

TEST_CASE("an empty framework admits every abducible subset") {
    AbductiveFramework fw;
    fw.program.declare({"a", {}, PredKind::Open});
    fw.abducibles = {"a"};
    const auto sols = gsm_bruteforce(fw);
    REQUIRE(sols.size() == 2);
    CHECK(sols[0] == GsmSolution{{}, {}});
    CHECK(sols[1] == GsmSolution{{"a"}, {"a"}});
    CHECK(stable_models_of_translation(fw) == std::vector<NamedAtomSet>{{"a"}, {"a_bar"}});
}

TEST_CASE("no abducibles reduces to ordinary stable models") {
    AbductiveFramework fw;
    fw.program.declare({"a", {}, PredKind::Defined});
    fw.program.declare({"b", {}, PredKind::Defined});
    fw.program.rules.push_back(rule(atom("a"), {atom("b", true)}));
    fw.program.rules.push_back(rule(atom("b"), {atom("a", true)}));
    fw.integrity.push_back(rule(std::nullopt, {atom("b")}));
    const auto sols = gsm_bruteforce(fw);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0] == GsmSolution{{}, {"a"}});
    CHECK(stable_models_of_translation(fw) == std::vector<NamedAtomSet>{{"a"}});
}

TEST_CASE("framework validation") {
    auto fw = q_from_a();
    fw.program.rules.push_back(rule(atom("a"), {}));
    CHECK_THROWS_AS(gsm_bruteforce(fw), CspError);
    auto fw2 = q_from_a();
    fw2.abducibles.insert("ghost");
    CHECK_THROWS_AS(validate_framework(fw2), CspError);
    auto fw3 = q_from_a();
    fw3.integrity.push_back(rule(atom("q"), {}));
    CHECK_THROWS_AS(validate_framework(fw3), CspError);
}

TEST_CASE("too many ground abducibles are refused") {
    AbductiveFramework fw;
    fw.signature.sorts.push_back({"s", 17, {}});
    fw.program.declare({"a", {0}, PredKind::Open});
    fw.abducibles = {"a"};
    CHECK(ground_abducibles(fw).size() == 17);
    CHECK_THROWS_AS(gsm_bruteforce(fw), CspError);
}

TEST_CASE("to_stable adds the choice pair per abducible") {
    const auto p = to_stable(q_from_a());
    int choice = 0, complement = 0;
    for (const auto& r : p.rules) {
        choice += r.origin == RuleOrigin::OpenChoice;
        complement += r.origin == RuleOrigin::OpenComplement;
    }
    CHECK(choice == 1);
    CHECK(complement == 1);
    CHECK(p.find_pred("a_bar") != nullptr);
    CHECK(stable_models_of_translation(q_from_a()) == std::vector<NamedAtomSet>{{"a", "q"}});
}

TEST_CASE("decode_stable splits the complement atoms off") {
    AbductiveFramework fw;
    fw.signature.sorts.push_back({"s", 2, {}});
    fw.program.declare({"a", {0}, PredKind::Open});
    fw.program.declare({"q", {}, PredKind::Defined});
    fw.abducibles = {"a"};
    const auto d = decode_stable(fw, {"a(0)", "a_bar(1)", "q"});
    CHECK(d.delta == NamedAtomSet{"a(0)"});
    CHECK(d.complement == NamedAtomSet{"a_bar(1)"});
    CHECK(d.rest == NamedAtomSet{"a(0)", "q"});
}

TEST_CASE("queens as an abductive framework") {
    const auto spec = queens_spec(4);
    const auto fw = framework_from_spec(spec);
    CHECK(fw.abducibles == std::set<std::string>{"pos"});
    CHECK(fw.program.rules.size() == 1);  // has_pos
    CHECK(fw.integrity.size() == 4);
    CHECK(ground_abducibles(fw).size() == 16);
    const auto sols = gsm_bruteforce(fw);
    REQUIRE(sols.size() == 2);
    std::set<NamedAtomSet> deltas;
    for (const auto& s : sols) deltas.insert(s.delta);
    CHECK(deltas == std::set<NamedAtomSet>{{"pos(0,1)", "pos(1,3)", "pos(2,0)", "pos(3,2)"},
                                           {"pos(0,2)", "pos(1,0)", "pos(2,3)", "pos(3,1)"}});
}

TEST_CASE("reduction to FD") {
    const auto q = reduce_to_fd(queens_spec(4));
    CHECK(q.store.var_count() == 4);
    CHECK(q.store.constraints().size() == 12);
    CHECK_FALSE(q.inconsistent);
    const auto t = reduce_to_fd(coloring_spec(triangle(), 3));
    REQUIRE(t.store.constraints().size() == 3);
    for (const auto& c : t.store.constraints()) CHECK(std::holds_alternative<NotEqual>(c));
    CHECK(via_fd(coloring_spec(triangle(), 3)).size() == 6);
}

TEST_CASE("reduction handles unary and non-linear comparisons") {
    CspSpec s;
    s.sorts.push_back({"d", 4, {}});
    s.funcs.push_back({"f", {0}, 0});
    // f(X) != X: one cell per instance, pruned in the domain.
    s.axioms.push_back({"nofix", {{"X", 0}}, {}, {{CmpOp::Ne, Expr::apply(0, Expr::var(0)), Expr::var(0)}}});
    // f(X) < f(Y) for X < Y: falls back to a table.
    s.axioms.push_back({"inc", {{"X", 0}, {"Y", 0}}, {Comparison{CmpOp::Lt, Expr::var(0), Expr::var(1)}},
                        {{CmpOp::Lt, Expr::apply(0, Expr::var(0)), Expr::apply(0, Expr::var(1))}}});
    CHECK(via_fd(s) == oracle::all_models(s));
    s.axioms[1].body[0].op = CmpOp::Le;
    CHECK(via_fd(s) == oracle::all_models(s));
}

TEST_CASE("property: every backend yields the same models") {
    std::vector<CspSpec> specs;
    for (int n = 1; n <= 5; ++n) specs.push_back(queens_spec(n));
    for (std::uint64_t seed = 1; seed <= 4; ++seed) specs.push_back(coloring_spec(gen_graph({5, 0.6, seed, 3}), 3));
    ModelFinderOptions mf;
    mf.limits.mode = SearchMode::All;
    for (const auto& spec : specs) {
        const auto expected = oracle::all_models(spec);
        CHECK(via_fd(spec) == expected);
        CHECK(as_set(find_models(spec, mf).models) == expected);
    }
}

TEST_CASE("property: translated stable models are the generalized stable models plus complements") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 120; ++trial) {
        const auto fw = oracle::random_framework(rng, 5, 6);
        const auto gsms = gsm_bruteforce(fw);
        const auto all_abd = ground_abducibles(fw);
        std::set<NamedAtomSet> expected;
        for (const auto& s : gsms) {
            NamedAtomSet m = s.model;
            for (const auto& a : all_abd)
                if (!s.delta.contains(a)) m.insert(complement_name(a.substr(0, a.find('('))) + a.substr(std::min(a.size(), a.find('('))));
            expected.insert(m);
        }
        const auto got = stable_models_of_translation(fw);
        CHECK(std::set<NamedAtomSet>(got.begin(), got.end()) == expected);
        CHECK(got.size() == gsms.size());
    }
}
