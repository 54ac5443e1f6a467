#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "porta/multiset.hpp"
#include "porta/pa.hpp"

namespace porta {

// An atom is a set of states jointly accepting some pomset that every state
// outside the set rejects. Atoms are represented by their member-name sets.
using Atom = std::set<StateId>;

// NFA over the extended alphabet: the automaton's letters plus multisets of
// atoms of the depth-restricted sub-automaton.
struct AtomNfa {
  struct Symbol {
    bool is_letter = true;
    Letter letter;
    Multiset<Atom> atoms;

    bool operator<(const Symbol& o) const {
      if (is_letter != o.is_letter) return is_letter;  // letters first
      if (is_letter) return letter < o.letter;
      return atoms < o.atoms;
    }
  };

  std::vector<StateId> states;  // sorted (same as the source automaton)
  std::vector<bool> accepting;
  std::vector<Symbol> symbols;  // sorted, unique
  // transitions[state][symbol index] = sorted target ids
  std::vector<std::vector<std::vector<int>>> transitions;
};

// δ' over Σ is δ; each stored fork contributes its continuation states under
// every multiset of atoms that covers the fork members member-wise.
AtomNfa build_atom_nfa(const Pa& a, const std::set<Atom>& atoms_below);

// Word-acceptance classes of the NFA: reachable subsets of the reverse
// determinization started from the accepting set. Includes the empty set
// when some word is rejected by every state.
std::set<Atom> nfa_atoms(const AtomNfa& n);

// Atoms of a finite, fork-acyclic, well-structured automaton, by induction
// on the support depth.
std::set<Atom> pa_atoms(const Pa& a);

// L(q1) = L(q2), decided via atoms. Requires a well-structured automaton.
bool state_equiv(const Pa& a, const StateId& q1, const StateId& q2);

}  // namespace porta
