#include "porta/equiv.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace porta {

namespace {

void require_ws(const Pa& a, const char* who) {
  ForkAcyclicity fa = is_fork_acyclic(a);
  if (!fa.ok)
    throw std::invalid_argument(std::string(who) +
                                " requires a fork-acyclic automaton");
  if (!check_structure(a).well_structured)
    throw std::invalid_argument(std::string(who) +
                                " requires a well-structured automaton");
}

}  // namespace

AtomNfa build_atom_nfa(const Pa& a, const std::set<Atom>& atoms_below) {
  require_ws(a, "build_atom_nfa");
  AtomNfa nfa;
  nfa.states = a.states;
  nfa.accepting = std::vector<bool>(a.accepting.begin(), a.accepting.end());

  // Which atoms contain a given state (by name).
  std::map<StateId, std::vector<const Atom*>> containing;
  for (const Atom& atom : atoms_below)
    for (const StateId& q : atom) containing[q].push_back(&atom);

  std::map<AtomNfa::Symbol, std::map<int, std::set<int>>> trans;
  for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
    AtomNfa::Symbol sym;
    sym.letter = a.alphabet[l];
    auto& row = trans[sym];
    for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
      for (int t : a.delta[q][l]) row[q].insert(t);
  }
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q) {
    for (const Fork& fork : a.gamma[q]) {
      // Every member-wise choice of a containing atom yields one symbol.
      std::vector<int> members = fork.members.expand();
      std::vector<const std::vector<const Atom*>*> choices;
      bool feasible = true;
      for (int m : members) {
        auto it = containing.find(a.states[m]);
        if (it == containing.end()) {
          feasible = false;  // member has empty language: fork can never fire
          break;
        }
        choices.push_back(&it->second);
      }
      if (!feasible) continue;
      std::vector<std::size_t> pick(members.size(), 0);
      while (true) {
        AtomNfa::Symbol sym;
        sym.is_letter = false;
        for (std::size_t i = 0; i < members.size(); ++i)
          sym.atoms.add(*(*choices[i])[pick[i]]);
        auto& row = trans[sym];
        for (int t : fork.targets) row[q].insert(t);
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < choices[i]->size()) break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
      }
    }
  }

  for (const auto& [sym, row] : trans) nfa.symbols.push_back(sym);
  nfa.transitions.assign(a.states.size(),
                         std::vector<std::vector<int>>(nfa.symbols.size()));
  int sym_id = 0;
  for (const auto& [sym, row] : trans) {
    for (const auto& [q, targets] : row)
      nfa.transitions[q][sym_id].assign(targets.begin(), targets.end());
    ++sym_id;
  }
  return nfa;
}

std::set<Atom> nfa_atoms(const AtomNfa& n) {
  int ns = static_cast<int>(n.states.size());
  // Reverse determinization: start from the acceptance class of the empty
  // word (the accepting set); step S -> {q : transitions(q,sym) ∩ S ≠ ∅}.
  std::set<std::vector<bool>> seen;
  std::queue<std::vector<bool>> work;
  std::vector<bool> start(n.accepting.begin(), n.accepting.end());
  seen.insert(start);
  work.push(start);
  while (!work.empty()) {
    std::vector<bool> s = work.front();
    work.pop();
    for (std::size_t sym = 0; sym < n.symbols.size(); ++sym) {
      std::vector<bool> next(ns, false);
      for (int q = 0; q < ns; ++q) {
        for (int t : n.transitions[q][sym])
          if (s[t]) {
            next[q] = true;
            break;
          }
      }
      if (seen.insert(next).second) work.push(next);
    }
  }
  std::set<Atom> atoms;
  for (const std::vector<bool>& s : seen) {
    Atom atom;
    for (int q = 0; q < ns; ++q)
      if (s[q]) atom.insert(n.states[q]);
    atoms.insert(std::move(atom));
  }
  return atoms;
}

std::set<Atom> pa_atoms(const Pa& a) {
  require_ws(a, "pa_atoms");
  if (a.states.empty()) return {Atom{}};
  SupportAnalysis supp = support_analysis(a);
  std::set<StateId> lower;
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    if (supp.depth_of(q) < supp.depth) lower.insert(a.states[q]);
  // The depth-restricted state set is support-closed: support never ascends.
  Pa sub = restrict(a, lower);
  std::set<Atom> below = pa_atoms(sub);
  return nfa_atoms(build_atom_nfa(a, below));
}

bool state_equiv(const Pa& a, const StateId& q1, const StateId& q2) {
  a.require_state(q1);
  a.require_state(q2);
  if (q1 == q2) return true;
  for (const Atom& atom : pa_atoms(a))
    if (atom.count(q1) != atom.count(q2)) return false;
  return true;
}

}  // namespace porta
