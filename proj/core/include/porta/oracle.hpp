#pragma once

#include <random>
#include <set>
#include <vector>

#include "porta/expr.hpp"
#include "porta/pa.hpp"
#include "porta/pomset.hpp"

namespace porta {

// All canonical sp-terms with at most n events over the alphabet.
std::set<SpTerm> enumerate_sp(const std::vector<Letter>& alphabet, int n);

// Bounded slice of L_A(q), by filtering the enumeration through membership.
std::set<SpTerm> pa_lang_up_to(const Pa& a, const StateId& q, int n);
std::set<SpTerm> pa_lang_up_to(MembershipOracle& oracle,
                               const std::vector<Letter>& alphabet,
                               const StateId& q, int n);

// Bounded language equality; ground truth for the decision procedure.
bool oracle_equiv(const Expr& e, const Expr& f, int n);

// Seeded corpus generators (fixed operator weights for reproducibility).
Expr random_expr(std::mt19937& rng, int max_depth,
                 const std::vector<Letter>& alphabet);

// A variant of `e` sharing most subterms: a random subtree is replaced or
// wrapped. Used to bias equivalence-test pairs toward near-misses.
Expr mutate_expr(std::mt19937& rng, const Expr& e,
                 const std::vector<Letter>& alphabet);

// Random finite fork-acyclic automaton with at most max_states states.
// States are layered; forks only descend, so fork-acyclicity is structural.
Pa random_fork_acyclic_pa(std::mt19937& rng, int max_states,
                          const std::vector<Letter>& alphabet);

}  // namespace porta
