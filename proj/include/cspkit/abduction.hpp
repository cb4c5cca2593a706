#pragma once

// Abductive frameworks <P, A, I> under the generalized stable model
// reading, their translation to P + T(A) + I, and the reduction of a
// function-based CspSpec to a finite-domain store.

#include <set>
#include <string>
#include <vector>

#include "cspkit/asp.hpp"
#include "cspkit/compile.hpp"
#include "cspkit/fd.hpp"
#include "cspkit/ir.hpp"
#include "cspkit/program.hpp"

namespace cspkit {

struct AbductiveFramework {
    CspSpec signature;  // sorts and fact relations used by the program
    NormalProgram program;
    std::set<std::string> abducibles;
    std::vector<Rule> integrity;  // denials
};

// Atom sets are compared by printable name so that solutions from
// differently grounded programs line up.
using NamedAtomSet = std::set<std::string>;

struct GsmSolution {
    NamedAtomSet delta;
    NamedAtomSet model;

    friend auto operator<=>(const GsmSolution&, const GsmSolution&) = default;
};

// Throws CspError if an abducible is used in a rule head or undeclared.
void validate_framework(const AbductiveFramework& fw);

// Ground instances of the abducible predicates, in sort order.
std::vector<std::string> ground_abducibles(const AbductiveFramework& fw);

inline constexpr std::size_t kAbducibleAtomLimit = 16;

// Every subset Delta of the ground abducibles, stable models of P + Delta
// filtered by I. Refuses above kAbducibleAtomLimit ground abducibles.
std::vector<GsmSolution> gsm_bruteforce(const AbductiveFramework& fw);

// P + T(A) + I as denials.
NormalProgram to_stable(const AbductiveFramework& fw);

struct StableDecoding {
    NamedAtomSet delta;       // abducible atoms true in M'
    NamedAtomSet complement;  // p_bar atoms true in M'
    NamedAtomSet rest;        // M' minus the complement atoms: M(Delta)
};

StableDecoding decode_stable(const AbductiveFramework& fw, const NamedAtomSet& m_prime);

// Stable models of to_stable(fw), grounded and solved, as named sets.
std::vector<NamedAtomSet> stable_models_of_translation(const AbductiveFramework& fw);

struct FdReduction {
    FdStore store;
    std::vector<std::vector<FdVarId>> cells;  // cells[f][x]
    bool inconsistent = false;                // some posting wiped out a domain

    Interpretation decode(const std::vector<int>& solution) const;
};

FdReduction reduce_to_fd(const CspSpec& spec);

// The framework obtained from a spec: the compiled program, its function
// predicates as abducibles, and its denials as integrity constraints.
AbductiveFramework framework_from_spec(const CspSpec& spec);

}  // namespace cspkit
