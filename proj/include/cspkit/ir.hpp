#pragma once

// Many-sorted, function-based CSP representation.
//
// A problem is a signature (sorts, unary function symbols, fact relations)
// plus universally quantified axioms of the form
//
//     forall X1:s1 ... Xk:sk .  guard(X)  ->  body(X)
//
// where the guard is a conjunction of builtin comparisons and fact atoms
// over the quantified variables, and the body is a conjunction of builtin
// comparisons over expressions that may apply function symbols. A solution
// is an Interpretation (one total table per function symbol) under which
// every ground instance of every axiom holds.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cspkit {

class CspError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using SortId = std::size_t;
using FuncId = std::size_t;
using RelId = std::size_t;

struct Sort {
    std::string name;
    int size = 1;
    std::vector<std::string> element_names;  // optional, display only

    std::string element_name(int e) const;
};

struct FuncSymbol {
    std::string name;
    std::vector<SortId> arg_sorts;
    SortId result_sort = 0;
};

struct FactRelation {
    std::string name;
    std::vector<SortId> arg_sorts;
    std::set<std::vector<int>> tuples;
};

// Expression tree. Variables index into the enclosing axiom's (or rule's)
// variable list.
struct Expr {
    enum class Kind { Var, Const, Apply, Add, Sub, Abs };

    Kind kind = Kind::Const;
    int value = 0;  // variable index, constant value, or FuncId for Apply
    std::vector<Expr> args;

    static Expr var(int index);
    static Expr constant(int v);
    static Expr apply(FuncId f, Expr arg);
    static Expr abs(Expr e);

    bool contains_apply() const;
    void collect_vars(std::set<int>& out) const;
};

Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

CmpOp negate(CmpOp op);
const char* to_string(CmpOp op);
bool compare(CmpOp op, long long lhs, long long rhs);

struct Comparison {
    CmpOp op = CmpOp::Eq;
    Expr lhs;
    Expr rhs;
};

struct RelAtom {
    RelId rel = 0;
    std::vector<int> vars;
};

using GuardLiteral = std::variant<Comparison, RelAtom>;

struct QuantVar {
    std::string name;
    std::optional<SortId> sort;
};

struct Axiom {
    std::string name;
    std::vector<QuantVar> vars;
    std::vector<GuardLiteral> guard;
    std::vector<Comparison> body;
};

struct CspSpec {
    std::vector<Sort> sorts;
    std::vector<FuncSymbol> funcs;
    std::vector<FactRelation> relations;
    std::vector<Axiom> axioms;

    std::optional<SortId> find_sort(const std::string& name) const;
    std::optional<FuncId> find_func(const std::string& name) const;
    std::optional<RelId> find_relation(const std::string& name) const;
};

// One total table per function symbol: tables[f][x] = f(x).
struct Interpretation {
    std::vector<std::vector<int>> tables;

    friend bool operator==(const Interpretation&, const Interpretation&) = default;
    friend auto operator<=>(const Interpretation&, const Interpretation&) = default;
};

using Binding = std::vector<int>;

struct Diagnostic {
    std::string message;
};

struct Violation {
    std::size_t axiom = 0;
    Binding binding;
};

std::vector<Diagnostic> validate(const CspSpec& spec);

// Integer value of `e` under `interp` and `binding`. Function arguments
// outside the domain sort raise CspError.
long long eval_expr(const CspSpec& spec, const Expr& e, const Interpretation& interp,
                    const Binding& binding);

bool eval_comparison(const CspSpec& spec, const Comparison& c, const Interpretation& interp,
                     const Binding& binding);

// Guard only; never reads the interpretation.
bool eval_guard(const CspSpec& spec, const Axiom& ax, const Binding& binding);

bool eval_axiom(const CspSpec& spec, const Axiom& ax, const Interpretation& interp,
                const Binding& binding);

std::vector<Violation> check(const CspSpec& spec, const Interpretation& interp);

// Calls `fn(binding)` for every assignment of the axiom's variables to
// elements of their sorts, in lexicographic order. Variables must be sorted.
template <typename Fn>
void for_each_binding(const CspSpec& spec, const Axiom& ax, Fn&& fn) {
    Binding b(ax.vars.size(), 0);
    std::vector<int> sizes;
    sizes.reserve(ax.vars.size());
    for (const auto& v : ax.vars) {
        if (!v.sort) throw CspError("unquantified variable " + v.name + " in axiom " + ax.name);
        sizes.push_back(spec.sorts.at(*v.sort).size);
    }
    while (true) {
        fn(static_cast<const Binding&>(b));
        std::size_t i = b.size();
        while (i > 0) {
            --i;
            if (++b[i] < sizes[i]) break;
            b[i] = 0;
            if (i == 0) return;
        }
        if (b.empty()) return;
    }
}

std::string format_interpretation(const CspSpec& spec, const Interpretation& interp);

}  // namespace cspkit
