#pragma once

#include <map>
#include <set>
#include <string>

#include "porta/expr.hpp"
#include "porta/multiset.hpp"
#include "porta/pa.hpp"

namespace porta {

// Sequential derivative: the expressions reachable from e by reading one
// letter a at the start.
std::set<Expr> delta_derivative(const Expr& e, const Letter& a);

// Parallel derivative: for each fork multiset of subexpressions, the
// continuations after reading their parallel composition. Only non-empty
// result sets are stored.
std::map<Multiset<Expr>, std::set<Expr>> gamma_derivative(const Expr& e);

// Support closure of {e} under derivative successors, results, and fork
// members; finite for every series-rational expression.
std::set<Expr> expr_support(const Expr& e);

struct CompileResult {
  Pa pa;
  std::map<Expr, StateId> state_of;
};

// The syntactic automaton restricted to the joint support of the given
// expressions; state(e) accepts exactly the language of e. States are named
// by their printed expression.
CompileResult compile(const std::set<Expr>& exprs);
CompileResult compile(const Expr& e);

// State-elimination extraction: an expression denoting L_A(q).
// Requires a finite fork-acyclic automaton.
Expr extract(const Pa& a, const StateId& q);

// The full decision procedure: compile both, well-structure with the two
// states tracked, compare atom membership.
bool expr_equiv(const Expr& e, const Expr& f);

}  // namespace porta
