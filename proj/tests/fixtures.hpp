#pragma once

// Shared hand-built automata exercising each structural corner: nested and
// nullary/unary forks, acceptance inside fork members, fork cycles, and
// pairs of automata with equal languages but different fork shapes.

#include <algorithm>
#include <string>
#include <vector>

#include "porta/pa.hpp"

namespace fixtures {

using porta::Multiset;
using porta::Pa;
using porta::PaBuilder;
using porta::StateId;

// L(q0) = { a.(b||c).a }: fork into two single-letter threads, then join.
inline Pa handshake() {
  PaBuilder b;
  for (const char* l : {"a", "b", "c"}) b.add_letter(l);
  for (const char* q : {"q0", "q1", "q2", "q3", "q4", "q5"})
    b.add_state(q, std::string(q) == "q5");
  b.add_delta("q0", "a", "q1");
  b.add_delta("q2", "a", "q5");
  b.add_delta("q3", "b", "q5");
  b.add_delta("q4", "c", "q5");
  b.add_fork("q1", {"q3", "q4"}, "q2");
  return b.build();
}

// A fork whose members can already accept: q1 accepts "a" only because q4
// accepts the empty pomset inside the fork. Fork-acyclic, not parsimonious.
inline Pa run_confusion() {
  PaBuilder b;
  b.add_letter("a");
  for (const char* q : {"q1", "q2", "q3", "q4", "q5"}) {
    std::string name(q);
    b.add_state(name, name == "q2" || name == "q4" || name == "q5");
  }
  b.add_delta("q3", "a", "q5");
  b.add_fork("q1", {"q3", "q4"}, "q2");
  return b.build();
}

// A fork member that can run back into the forking state: not fork-acyclic.
inline Pa fork_cycle() {
  PaBuilder b;
  b.add_letter("a");
  b.add_letter("b");
  for (const char* q : {"q1", "q2", "q3", "q4", "q5"}) {
    std::string name(q);
    b.add_state(name, name != "q3");
  }
  b.add_delta("q3", "a", "q1");
  b.add_delta("q4", "b", "q5");
  b.add_fork("q1", {"q3", "q4"}, "q2");
  return b.build();
}

// A fork member that itself forks into an accepting state. Not
// flat-branching; L(q1) = { a || b || c }.
inline Pa nested_fork() {
  PaBuilder b;
  for (const char* l : {"a", "b", "c"}) b.add_letter(l);
  for (const char* q : {"q1", "q2", "q3", "q4", "q5", "q6"})
    b.add_state(q, std::string(q) == "q2");
  b.add_fork("q1", {"q3", "q4"}, "q2");
  b.add_fork("q3", {"q5", "q6"}, "q2");
  b.add_delta("q5", "a", "q2");
  b.add_delta("q6", "b", "q2");
  b.add_delta("q4", "c", "q2");
  return b.build();
}

// Two copies of the same ternary-parallel language with the nesting
// associated differently; q1 and q1' are language-equal.
inline Pa nested_fork_pair() {
  PaBuilder b;
  for (const char* l : {"a", "b", "c"}) b.add_letter(l);
  for (const char* q : {"q1", "q2", "q3", "q4", "q5", "q6"})
    b.add_state(q, std::string(q) == "q2");
  b.add_fork("q1", {"q3", "q4"}, "q2");
  b.add_fork("q3", {"q5", "q6"}, "q2");
  b.add_delta("q5", "a", "q2");
  b.add_delta("q6", "b", "q2");
  b.add_delta("q4", "c", "q2");
  for (const char* q : {"q1'", "q2'", "q3'", "q4'", "q5'", "q6'"})
    b.add_state(q, std::string(q) == "q2'");
  b.add_fork("q1'", {"q3'", "q4'"}, "q2'");
  b.add_fork("q3'", {"q5'", "q6'"}, "q2'");
  b.add_delta("q6'", "b", "q2'");
  b.add_delta("q4'", "a", "q2'");
  b.add_delta("q5'", "c", "q2'");
  return b.build();
}

// { a||b, a||c } once as two separate forks, once as a single fork whose
// second thread chooses between b and c; q1 and q1' are language-equal.
// Both halves are already well-structured.
inline Pa fork_choice_pair() {
  PaBuilder b;
  for (const char* l : {"a", "b", "c"}) b.add_letter(l);
  for (const char* q : {"q1", "q2", "q3", "q4", "q5", "q6", "q7"}) {
    std::string name(q);
    b.add_state(name, name == "q6" || name == "q7");
  }
  b.add_delta("q2", "a", "q6");
  b.add_delta("q3", "b", "q6");
  b.add_delta("q4", "a", "q7");
  b.add_delta("q5", "c", "q7");
  b.add_fork("q1", {"q2", "q3"}, "q6");
  b.add_fork("q1", {"q4", "q5"}, "q7");
  for (const char* q : {"q1'", "q2'", "q3'", "q4'"}) {
    std::string name(q);
    b.add_state(name, name == "q4'");
  }
  b.add_delta("q2'", "a", "q4'");
  b.add_delta("q3'", "b", "q4'");
  b.add_delta("q3'", "c", "q4'");
  b.add_fork("q1'", {"q2'", "q3'"}, "q4'");
  return b.build();
}

// { (a||b).a, (a||b).b } with the continuation chosen by picking one of two
// forks, versus a single fork whose continuation branches; q1 and q1' are
// language-equal. Both halves are already well-structured.
inline Pa fork_continuation_pair() {
  PaBuilder b;
  b.add_letter("a");
  b.add_letter("b");
  for (const char* q : {"q1", "q2", "q3", "q4", "q5", "q6", "q7"}) {
    std::string name(q);
    b.add_state(name, name == "q6" || name == "q7");
  }
  b.add_delta("q2", "b", "q7");
  b.add_delta("q3", "a", "q7");
  b.add_delta("q4", "b", "q6");
  b.add_delta("q5", "a", "q6");
  b.add_fork("q1", {"q2", "q3"}, "q4");
  b.add_fork("q1", {"q4", "q5"}, "q3");
  for (const char* q : {"q1'", "q2'", "q3'", "q4'", "q5'"}) {
    std::string name(q);
    b.add_state(name, name == "q5'");
  }
  b.add_delta("q2'", "a", "q5'");
  b.add_delta("q3'", "b", "q5'");
  b.add_delta("q4'", "a", "q5'");
  b.add_delta("q4'", "b", "q5'");
  b.add_fork("q1'", {"q2'", "q3'"}, "q4'");
  return b.build();
}

// Nullary forks standing in for silent moves: q3 ~> q5 and q2 ~> q6.
inline Pa nullary_fork_chain() {
  PaBuilder b;
  b.add_letter("a");
  b.add_letter("b");
  for (const char* q : {"q1", "q2", "q3", "q4", "q5", "q6"})
    b.add_state(q, std::string(q) == "q6");
  b.add_fork("q1", {"q3", "q4"}, "q2");
  b.add_fork("q2", std::vector<StateId>{}, "q6");
  b.add_fork("q3", std::vector<StateId>{}, "q5");
  b.add_delta("q5", "a", "q6");
  b.add_delta("q4", "b", "q2");
  return b.build();
}

// A chain of unary forks: q1 wraps q3, which wraps q6.
inline Pa unary_fork_chain() {
  PaBuilder b;
  for (const char* l : {"a", "b", "c"}) b.add_letter(l);
  for (const char* q : {"q1", "q2", "q3", "q4", "q5", "q6"}) {
    std::string name(q);
    b.add_state(name, name == "q2" || name == "q5");
  }
  b.add_fork("q1", {"q3"}, "q2");
  b.add_fork("q3", {"q6"}, "q4");
  b.add_delta("q3", "a", "q2");
  b.add_delta("q4", "c", "q5");
  b.add_delta("q6", "b", "q5");
  return b.build();
}

// True iff to is a delta target of (from, letter).
inline bool has_delta(const Pa& a, const StateId& from, const std::string& letter,
                      const StateId& to) {
  int q = a.state_id(from), l = a.letter_id(letter), t = a.state_id(to);
  if (q < 0 || l < 0 || t < 0) return false;
  const auto& row = a.delta[q][l];
  return std::find(row.begin(), row.end(), t) != row.end();
}

// True iff to is a target of the fork of from with exactly these members.
inline bool has_fork(const Pa& a, const StateId& from,
                     const std::vector<StateId>& members, const StateId& to) {
  int q = a.state_id(from), t = a.state_id(to);
  if (q < 0 || t < 0) return false;
  Multiset<int> want;
  for (const StateId& m : members) {
    int id = a.state_id(m);
    if (id < 0) return false;
    want.add(id);
  }
  for (const porta::Fork& fork : a.gamma[q])
    if (fork.members == want)
      return std::find(fork.targets.begin(), fork.targets.end(), t) !=
             fork.targets.end();
  return false;
}

}  // namespace fixtures
