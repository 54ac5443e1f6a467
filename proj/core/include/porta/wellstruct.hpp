#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "porta/pa.hpp"

namespace porta {

// Weak implementation map: each listed original state's language equals the
// union of the languages of its image states in the new automaton.
using WeakMap = std::map<StateId, std::set<StateId>>;

// Turns a weak implementation into an implementation: re-adds each state q of
// dom(m) with delta/gamma rows equal to the union of its images' rows, and
// accepting iff q accepts Empty in a_old. New-automaton states whose names
// collide with re-added ones are renamed with a deterministic "#k" suffix.
Pa strengthen(const Pa& a_old, const Pa& a_new, const WeakMap& m);

// A0: adds a fresh always-accepting sink TOP (the only accepting state) and
// splits forks past Empty-accepting members. Result is parsimonious and
// weakly implements the input via q ↦ {q} ∪ ({TOP} iff q accepts Empty).
std::pair<Pa, WeakMap> parsimonize(const Pa& a);

// A1: closes delta/gamma under ⤳ on both sides and drops nullary forks.
// Requires parsimonious input; result is 1-forking and parsimonious and
// weakly implements via q ↦ {r : q ⤳ r}.
std::pair<Pa, WeakMap> remove_nullary_forks(const Pa& a);

// A2: replaces unary forks by stack states (words over Q of length ≤ D_A,
// generated lazily from the length-1 seeds). The result implements the input
// directly: original q is the length-1 stack, which keeps its name.
Pa remove_unary_forks(const Pa& a);

// A3: splits each state into a sequential-finish variant q^r and a
// fork-finish variant q^f, with a fresh TOP as the only accepting state;
// fork multisets are saturated through accepting nested forks (the ◀
// expansion). Result is flat-branching and weakly implements via
// q ↦ {q^r, q^f} ∪ ({TOP} iff q accepting).
std::pair<Pa, WeakMap> flatten_forks(const Pa& a);

// Full pipeline: parsimonize → strengthen → remove_nullary_forks →
// strengthen → remove_unary_forks → flatten_forks → strengthen, keeping the
// tracked states (by their original names) language-equal throughout.
// The returned map sends each tracked name to its state in the output.
std::pair<Pa, std::map<StateId, StateId>> well_structure(
    const Pa& a, const std::set<StateId>& tracked);

}  // namespace porta
