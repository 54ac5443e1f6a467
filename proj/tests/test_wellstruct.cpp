#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "porta/oracle.hpp"
#include "porta/wellstruct.hpp"

using namespace porta;
using namespace fixtures;

namespace {
SpTerm sp(const std::string& text) { return parse_pomset(text); }

std::set<StateId> all_states(const Pa& a) {
  return std::set<StateId>(a.states.begin(), a.states.end());
}
}  // namespace

TEST_CASE("parsimonize routes acceptance through the fresh sink") {
  auto [out, m] = parsimonize(run_confusion());
  // q5 was accepting, so reading "a" from q3 may now finish in the sink.
  CHECK(has_delta(out, "q3", "a", "TOP"));
  CHECK(has_delta(out, "q3", "a", "q5"));
  CHECK(out.accepting[out.require_state("TOP")]);
  for (const StateId& q : {"q1", "q2", "q3", "q4", "q5"})
    CHECK(!out.accepting[out.require_state(q)]);
  CHECK(check_structure(out).parsimonious);

  // Weak map: TOP joins the images of exactly the Empty-accepting states.
  CHECK(m.at("q2") == std::set<StateId>{"q2", "TOP"});
  CHECK(m.at("q3") == std::set<StateId>{"q3"});
}

TEST_CASE("parsimonize splits forks past Empty-accepting members") {
  // q4 accepts Empty, so the fork {q3, q4} also appears as {q3} alone.
  auto [out, m] = parsimonize(run_confusion());
  CHECK(has_fork(out, "q1", {"q3", "q4"}, "q2"));
  CHECK(has_fork(out, "q1", {"q3"}, "q2"));
  CHECK(!has_fork(out, "q1", {"q4"}, "q2"));
}

TEST_CASE("parsimonize preserves the bounded language of every state") {
  std::mt19937 rng(41);
  for (int i = 0; i < 25; ++i) {
    Pa a = random_fork_acyclic_pa(rng, 6, {"a", "b"});
    auto [out, m] = parsimonize(a);
    CHECK(check_structure(out).parsimonious);
    for (const StateId& q : a.states) {
      std::set<SpTerm> before = pa_lang_up_to(a, q, 4);
      std::set<SpTerm> after;
      for (const StateId& image : m.at(q)) {
        std::set<SpTerm> part = pa_lang_up_to(out, image, 4);
        after.insert(part.begin(), part.end());
      }
      CHECK(after == before);
    }
  }
}

TEST_CASE("nullary fork removal saturates moves along empty runs") {
  auto [out, m] = remove_nullary_forks(nullary_fork_chain());
  // q3 silently becomes q5, which reads "a" into q6.
  CHECK(has_delta(out, "q3", "a", "q6"));
  // The fork out of q1 lands in q2, which silently becomes the accepting q6.
  CHECK(has_fork(out, "q1", {"q3", "q4"}, "q6"));
  StructureReport report = check_structure(out);
  CHECK(report.n_forking_min == 2);
  CHECK(m.at("q3") == std::set<StateId>{"q3", "q5"});
  CHECK(m.at("q2") == std::set<StateId>{"q2", "q6"});
}

TEST_CASE("nullary fork removal preserves the bounded language") {
  std::mt19937 rng(43);
  int tried = 0;
  for (int i = 0; i < 60 && tried < 25; ++i) {
    Pa a = random_fork_acyclic_pa(rng, 6, {"a", "b"});
    auto [p, pm] = parsimonize(a);
    ++tried;
    auto [out, m] = remove_nullary_forks(p);
    StructureReport report = check_structure(out);
    CHECK((!report.n_forking_min || *report.n_forking_min >= 1));
    for (const StateId& q : p.states) {
      std::set<SpTerm> before = pa_lang_up_to(p, q, 4);
      std::set<SpTerm> after;
      for (const StateId& image : m.at(q)) {
        std::set<SpTerm> part = pa_lang_up_to(out, image, 4);
        after.insert(part.begin(), part.end());
      }
      CHECK(after == before);
    }
  }
}

TEST_CASE("unary fork removal builds bounded stacks") {
  Pa out = remove_unary_forks(unary_fork_chain());
  // Entering the unary fork of q1 and reading "a" inside leaves the
  // continuation q2 stacked behind the inner result q2.
  CHECK(has_delta(out, "q1", "a", "q2|q2"));
  // Descending two unary forks and reading "b" stacks both continuations.
  CHECK(has_delta(out, "q1", "b", "q5|q4|q2"));
  // Original states survive as their length-1 stacks.
  for (const StateId& q : unary_fork_chain().states)
    CHECK(out.state_id(q) >= 0);
  StructureReport report = check_structure(out);
  CHECK((!report.n_forking_min || *report.n_forking_min >= 2));
}

TEST_CASE("unary fork removal pops accepting stack tops") {
  Pa out = remove_unary_forks(unary_fork_chain());
  // q2 accepts; a stack q2|... therefore also moves like its tail.
  // After a . c the run is done: q1 -a-> q2|q2 -c-> ? q2 pops twice.
  CHECK(membership(out, "q1", sp("a")));
  CHECK(membership(out, "q1", sp("b . c")));
  CHECK(!membership(out, "q1", sp("c")));
}

TEST_CASE("unary fork removal preserves the bounded language of originals") {
  Pa in = unary_fork_chain();
  Pa out = remove_unary_forks(in);
  for (const StateId& q : in.states)
    CHECK(pa_lang_up_to(out, q, 4) == pa_lang_up_to(in, q, 4));
}

TEST_CASE("fork flattening saturates nested accepting forks") {
  auto [out, m] = flatten_forks(nested_fork());
  // The member q3 of the outer fork may itself fork into acceptance, so the
  // outer fork also appears expanded to three threads; the fork-finish
  // variant of q1 closes it into the accepting sink.
  CHECK(has_fork(out, "q1^f", {"q4^r", "q5^r", "q6^r"}, "TOP"));
  CHECK(has_fork(out, "q1^r", {"q3^r", "q4^r"}, "q2^r"));
  CHECK(check_structure(out).flat_branching);
  CHECK(m.at("q1") == std::set<StateId>{"q1^r", "q1^f"});
  CHECK(m.at("q2") == std::set<StateId>{"q2^r", "q2^f", "TOP"});
}

TEST_CASE("fork flattening preserves the bounded language") {
  Pa in = nested_fork();
  auto [out, m] = flatten_forks(in);
  for (const StateId& q : in.states) {
    std::set<SpTerm> before = pa_lang_up_to(in, q, 4);
    std::set<SpTerm> after;
    for (const StateId& image : m.at(q)) {
      std::set<SpTerm> part = pa_lang_up_to(out, image, 4);
      after.insert(part.begin(), part.end());
    }
    CHECK(after == before);
  }
}

TEST_CASE("strengthen renames colliding new states, not the originals") {
  PaBuilder old_b;
  old_b.add_letter("a");
  old_b.add_state("q", false);
  old_b.add_delta("q", "a", "q");
  Pa a_old = old_b.build();

  // New automaton reuses the name "q" for a different state.
  PaBuilder new_b;
  new_b.add_letter("a");
  new_b.add_state("q", false);
  new_b.add_state("r", true);
  new_b.add_delta("q", "a", "r");
  Pa a_new = new_b.build();

  Pa out = strengthen(a_old, a_new, {{"q", {"q"}}});
  CHECK(out.state_id("q") >= 0);
  CHECK(out.state_id("q#0") >= 0);
  // The re-added original unions its images' rows.
  CHECK(has_delta(out, "q", "a", "r"));
  CHECK(has_delta(out, "q#0", "a", "r"));
  CHECK(!out.accepting[out.require_state("q")]);  // q never accepted Empty
}

TEST_CASE("full pipeline yields a well-structured fork-acyclic automaton") {
  for (const Pa& a : {handshake(), run_confusion(), nested_fork(),
                      nullary_fork_chain(), unary_fork_chain()}) {
    auto [out, emb] = well_structure(a, all_states(a));
    CHECK(check_structure(out).well_structured);
    CHECK(is_fork_acyclic(out).ok);
    for (const StateId& q : a.states) CHECK(emb.at(q) == q);
  }
}

TEST_CASE("full pipeline preserves tracked languages on the fixtures") {
  for (const Pa& a : {handshake(), run_confusion(), nested_fork(),
                      nullary_fork_chain(), unary_fork_chain()}) {
    auto [out, emb] = well_structure(a, all_states(a));
    for (const StateId& q : a.states)
      CHECK(pa_lang_up_to(out, emb.at(q), 5) == pa_lang_up_to(a, q, 5));
  }
}

TEST_CASE("pipeline rejects automata with fork cycles") {
  CHECK_THROWS_AS(well_structure(fork_cycle(), {"q1"}), std::invalid_argument);
}

TEST_CASE("stage preconditions are enforced") {
  // Not parsimonious: nullary/unary removal and flattening refuse to run.
  CHECK_THROWS_AS(remove_nullary_forks(run_confusion()), std::invalid_argument);
  // Nullary fork present: unary removal and flattening refuse to run.
  CHECK_THROWS_AS(remove_unary_forks(nullary_fork_chain()), std::invalid_argument);
  CHECK_THROWS_AS(flatten_forks(unary_fork_chain()), std::invalid_argument);
}
