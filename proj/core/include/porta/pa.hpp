#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "porta/multiset.hpp"
#include "porta/pomset.hpp"

namespace porta {

// States are addressed by unique name; internally algorithms index into
// Pa::states (sorted), so ids are stable per automaton value.
using StateId = std::string;

struct Fork {
  Multiset<int> members;    // thread-start states (by index)
  std::vector<int> targets; // continuation states, sorted, non-empty

  bool operator<(const Fork& o) const {
    if (members != o.members) return members < o.members;
    return targets < o.targets;
  }
};

// Pomset automaton <Q, F, delta, gamma>. gamma holds only entries with a
// non-empty result set, so every state has finitely many forks.
struct Pa {
  std::vector<Letter> alphabet;  // sorted, unique
  std::vector<StateId> states;   // sorted, unique; index = state id
  std::vector<bool> accepting;
  // delta[q][letter-index] = sorted target ids (possibly empty)
  std::vector<std::vector<std::vector<int>>> delta;
  // gamma[q] = fork entries sorted by (members, targets)
  std::vector<std::vector<Fork>> gamma;

  int state_id(const StateId& name) const;       // -1 if absent
  int require_state(const StateId& name) const;  // throws if absent
  int letter_id(const Letter& a) const;          // -1 if absent
  std::size_t num_states() const { return states.size(); }
};

// Incremental construction by name; build() sorts, dedupes, and validates.
class PaBuilder {
 public:
  void add_letter(const Letter& a);
  void add_state(const StateId& name, bool accepting);
  void add_delta(const StateId& from, const Letter& label, const StateId& to);
  void add_fork(const StateId& from, const std::vector<StateId>& members,
                const StateId& to);
  void add_fork(const StateId& from, const Multiset<StateId>& members,
                const StateId& to);
  bool has_state(const StateId& name) const;
  Pa build() const;  // throws std::invalid_argument on dangling references

 private:
  std::set<Letter> letters_;
  std::map<StateId, bool> states_;
  std::set<std::tuple<StateId, Letter, StateId>> deltas_;
  std::set<std::tuple<StateId, Multiset<StateId>, StateId>> forks_;
};

// Structural diagnostics; empty iff the Pa invariants hold. Pa values made by
// PaBuilder/load always pass; this re-checks hand-assembled values.
std::vector<std::string> validate(const Pa& a);

// Support preorder q' ⪯ q ("q' may take part in runs from q"), its strict
// part, and the depth measure, all computed on the SCC condensation.
struct SupportAnalysis {
  int num_states = 0;
  std::vector<int> scc_index;            // state -> component
  int num_components = 0;
  std::vector<std::vector<int>> comp_members;
  std::vector<std::vector<std::uint64_t>> comp_reach;  // bitset over comps
  std::vector<int> comp_depth;
  int depth = 0;  // D_A (0 for the empty automaton)

  bool leq(int a, int b) const;     // a ⪯ b
  bool strict(int a, int b) const;  // a ≺ b
  int depth_of(int q) const { return comp_depth[scc_index[q]]; }
};

SupportAnalysis support_analysis(const Pa& a);

// Fork-acyclicity: every fork member r of every fork of q satisfies q ⋠ r.
// On failure returns the offending (forking state, member) pair.
struct ForkAcyclicity {
  bool ok = true;
  std::optional<std::pair<StateId, StateId>> witness;
};
ForkAcyclicity is_fork_acyclic(const Pa& a);
ForkAcyclicity is_fork_acyclic(const Pa& a, const SupportAnalysis& supp);

std::set<StateId> support_closure(const Pa& a, const std::set<StateId>& seed);
// Keeps exactly the states in keep (must be support-closed) and the
// transitions among them; throws with the violating pair otherwise.
Pa restrict(const Pa& a, const std::set<StateId>& keep);

// q ⤳ r: the least reflexive-transitive relation closed under the fork rule
// (q ⤳ s when s ∈ γ(q,φ) and every member of φ reads Empty to an accepting
// state). Equals "q reads the empty pomset to r".
struct Leadsto {
  int num_states = 0;
  std::vector<std::vector<std::uint64_t>> rel;  // rel[p] bitset over q
  bool get(int p, int q) const {
    return (rel[p][static_cast<std::size_t>(q) / 64] >>
            (static_cast<std::size_t>(q) % 64)) & 1u;
  }
  std::vector<int> successors(int p) const;
};

Leadsto leadsto(const Pa& a);

bool accepts_empty(const Pa& a, const Leadsto& l, int q);
bool accepts_empty(const Pa& a, const StateId& q);

// Membership for finite fork-acyclic automata. One oracle per automaton;
// results are memoized across queries on (state, pomset).
class MembershipOracle {
 public:
  explicit MembershipOracle(const Pa& a);  // throws if not fork-acyclic

  bool accepts(int q, const SpTerm& u);
  bool accepts(const StateId& q, const SpTerm& u);

  const SupportAnalysis& support() const { return supp_; }
  const Leadsto& empty_runs() const { return lead_; }

 private:
  bool unit_then_rest(int q, const std::vector<SpTerm>& factors);
  bool fork_matches(const Fork& fork, const Multiset<SpTerm>& primes);

  const Pa& pa_;
  SupportAnalysis supp_;
  Leadsto lead_;
  bool well_structured_;
  std::map<std::pair<int, SpTerm>, bool> memo_;
};

bool membership(const Pa& a, const StateId& q, const SpTerm& u);

// n-forking / parsimony / flat-branching report.
struct StructureReport {
  std::optional<int> n_forking_min;  // empty when there are no forks
  bool parsimonious = true;
  bool flat_branching = true;
  bool well_structured = true;
};

StructureReport check_structure(const Pa& a);

}  // namespace porta
