#pragma once

// Normal logic programs over a many-sorted signature, and their ground form.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "cspkit/ir.hpp"

namespace cspkit {

struct Term {
    enum class Kind { Var, Const };
    Kind kind = Kind::Const;
    int value = 0;

    static Term var(int index) { return {Kind::Var, index}; }
    static Term constant(int v) { return {Kind::Const, v}; }
};

enum class PredKind {
    Defined,  // ordinary predicate, may occur in heads
    Open,     // abducible / open; never in a head of P
    Fact,     // resolved against a CspSpec fact relation during grounding
};

struct PredicateDecl {
    std::string name;
    std::vector<SortId> arg_sorts;
    PredKind kind = PredKind::Defined;
};

struct AtomLit {
    std::string pred;
    std::vector<Term> args;
    bool negated = false;
};

// Sort membership `d_s(X)`. Never materialized as a ground atom.
struct SortLit {
    SortId sort = 0;
    int var = 0;
    bool negated = false;
};

// Conjunction of builtin comparisons, optionally negated as a whole.
// Expressions use Expr::Var indices into the rule's variables and never
// contain function applications.
struct BuiltinLit {
    std::vector<Comparison> conj;
    bool negated = false;
};

using BodyLit = std::variant<AtomLit, SortLit, BuiltinLit>;

// Where a rule came from in the translation chain.
enum class RuleOrigin {
    User,
    HasRule,           // has_f(X) <- d(Y), f(X,Y)
    ExistenceDenial,   // has_f(X) <= d_p(X)
    DomainDenial,      // d_p(X) <= f(X,Y)
    UniquenessDenial,  // Y = Z <= f(X,Y), f(X,Z)
    AxiomDenial,
    OpenChoice,        // p <- not p_bar
    OpenComplement,    // p_bar <- not p
    Integrity,
};

struct Rule {
    std::optional<AtomLit> head;  // nullopt: denial
    std::vector<BodyLit> body;
    std::vector<std::string> var_names;
    RuleOrigin origin = RuleOrigin::User;
    std::string label;

    bool is_denial() const { return !head.has_value(); }
};

struct NormalProgram {
    std::vector<PredicateDecl> preds;
    std::vector<Rule> rules;  // rules and denials, in emission order

    const PredicateDecl* find_pred(const std::string& name) const;
    void declare(PredicateDecl decl);
};

std::string complement_name(const std::string& pred);

void print_rule(std::ostream& os, const Rule& r, const CspSpec& sig);
std::string to_string(const NormalProgram& p, const CspSpec& sig);

using AtomId = std::uint32_t;

struct GroundRule {
    AtomId head = 0;
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;
};

struct GroundDenial {
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;
};

struct GroundAtom {
    std::string pred;
    std::vector<int> args;
};

class GroundProgram {
public:
    AtomId intern(const std::string& pred, const std::vector<int>& args = {});
    std::optional<AtomId> find(const std::string& name) const;
    const std::string& name(AtomId a) const { return names_.at(a); }
    std::size_t atom_count() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const GroundAtom& atom(AtomId a) const { return atoms_.at(a); }

    std::vector<GroundRule> rules;
    std::vector<GroundDenial> denials;

private:
    std::vector<std::string> names_;
    std::vector<GroundAtom> atoms_;
    std::map<std::string, AtomId> index_;
};

// `h :- a, b, not c.` / `h.` / `:- a, not b.`, one per line, rules first.
std::string dump(const GroundProgram& g);

// Sorted atom set; the representation of (stable) models.
using AtomSet = std::vector<AtomId>;

std::vector<std::string> atom_names(const GroundProgram& g, const AtomSet& m);

std::string ground_atom_name(const std::string& pred, const std::vector<int>& args);

}  // namespace cspkit
