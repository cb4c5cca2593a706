#pragma once

// Translation chain from a function-based CspSpec to a ground normal
// program:
//
//   functions_to_predicates   f/1 becomes an open predicate f/2 plus the
//                             rule/constraints that force it to be a
//                             function; axioms become denials
//   add_open_declarations     open predicates get the p <- not p_bar,
//                             p_bar <- not p pair (or the compact variant)
//   ground                    naive instantiation over the sorts

#include <map>
#include <set>
#include <string>

#include "cspkit/ir.hpp"
#include "cspkit/program.hpp"

namespace cspkit {

struct TransformResult {
    NormalProgram program;
    std::set<std::string> open_predicates;
    std::map<std::string, FuncId> decode_map;
};

TransformResult functions_to_predicates(const CspSpec& spec);

// compact=false: p(x) <- not p_bar(x) and p_bar(x) <- not p(x) per open
// predicate, every integrity-constraint family kept.
// compact=true: for function predicates, f(X,Y) <- d_p(X), not f_bar(X,Y)
// and the domain denial is dropped.
NormalProgram add_open_declarations(const TransformResult& t, bool compact);

GroundProgram ground(const NormalProgram& p, const CspSpec& sig);

// Interpretation read off the function atoms of a model. Throws if some
// function is not total or not single-valued in `model`.
Interpretation decode_model(const CspSpec& spec, const TransformResult& t, const GroundProgram& g,
                            const AtomSet& model);

}  // namespace cspkit
