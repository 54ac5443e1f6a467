#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "porta/kleene.hpp"
#include "porta/oracle.hpp"

using namespace porta;

namespace {
Expr ex(const std::string& text) { return parse_expr(text); }
SpTerm sp(const std::string& text) { return parse_pomset(text); }

std::set<std::string> support_texts(const Expr& e) {
  std::set<std::string> out;
  for (const Expr& s : expr_support(e)) out.insert(expr_text(s));
  return out;
}
}  // namespace

TEST_CASE("letter derivatives follow the expression structure") {
  CHECK(delta_derivative(ex("a"), "a") == std::set<Expr>{ex("1")});
  CHECK(delta_derivative(ex("a"), "b").empty());
  CHECK(delta_derivative(ex("a . b"), "a") == std::set<Expr>{ex("1 . b")});
  CHECK(delta_derivative(ex("a* . b"), "b") == std::set<Expr>{ex("1")});
  CHECK(delta_derivative(ex("a* . b"), "a") == std::set<Expr>{ex("1 . a* . b")});
  CHECK(delta_derivative(ex("a + b"), "a") == std::set<Expr>{ex("1")});
  // Parallel products never take letter steps directly.
  CHECK(delta_derivative(ex("a || b"), "a").empty());
}

TEST_CASE("fork derivatives split parallel products on exact subterms") {
  auto forks = gamma_derivative(ex("a || b"));
  REQUIRE(forks.size() == 1);
  Multiset<Expr> expected(std::vector<Expr>{ex("a"), ex("b")});
  CHECK(forks.begin()->first == expected);
  CHECK(forks.begin()->second == std::set<Expr>{ex("1")});

  // Sequential context postfixes the continuation.
  auto seq = gamma_derivative(ex("(a || b) . c"));
  REQUIRE(seq.size() == 1);
  CHECK(seq.begin()->second == std::set<Expr>{ex("1 . c")});

  // A parallel product under a star forks and then resumes the star.
  auto star = gamma_derivative(ex("(a || b)*"));
  REQUIRE(star.size() == 1);
  CHECK(star.begin()->second == std::set<Expr>{ex("1 . (a || b)*")});

  CHECK(gamma_derivative(ex("a . b")).empty());
  CHECK(gamma_derivative(ex("a")).empty());
}

TEST_CASE("repeated parallel subterms fork with multiplicity") {
  auto forks = gamma_derivative(ex("a || a"));
  REQUIRE(forks.size() == 1);
  CHECK(forks.begin()->first.count(ex("a")) == 2);
}

TEST_CASE("derivative support of hand-checked expressions") {
  CHECK(support_texts(ex("a")) == std::set<std::string>{"a", "1"});
  CHECK(support_texts(ex("a . b* || c")) ==
        std::set<std::string>{"a . b* || c", "a . b*", "1 . b*", "c", "1"});
}

TEST_CASE("compilation marks nullable states accepting") {
  CompileResult c = compile(ex("a . b* || c"));
  for (const auto& [e, name] : c.state_of)
    CHECK(c.pa.accepting[c.pa.require_state(name)] == nullable(e));
  CHECK(c.pa.accepting[c.pa.require_state("1 . b*")]);
  CHECK(c.pa.accepting[c.pa.require_state("1")]);
  CHECK(!c.pa.accepting[c.pa.require_state("c")]);
}

TEST_CASE("compiled automata are fork-acyclic and language-correct") {
  std::mt19937 rng(53);
  for (int i = 0; i < 60; ++i) {
    Expr e = random_expr(rng, 3, {"a", "b"});
    CompileResult c = compile(e);
    CHECK(is_fork_acyclic(c.pa).ok);
    CHECK(pa_lang_up_to(c.pa, c.state_of.at(e), 4) == lang_up_to(e, 4));
  }
}

TEST_CASE("joint compilation shares the support of both expressions") {
  Expr e = ex("a . b"), f = ex("b . a");
  CompileResult c = compile(std::set<Expr>{e, f});
  CHECK(c.state_of.count(e) == 1);
  CHECK(c.state_of.count(f) == 1);
  CHECK(membership(c.pa, c.state_of.at(e), sp("a . b")));
  CHECK(membership(c.pa, c.state_of.at(f), sp("b . a")));
}

TEST_CASE("extraction recovers the language of fixture states") {
  Pa a = fixtures::handshake();
  Expr e = extract(a, "q0");
  CHECK(lang_up_to(e, 6) == std::set<SpTerm>{sp("a . (b || c) . a")});
  CHECK(lang_up_to(extract(a, "q5"), 3) == std::set<SpTerm>{sp("1")});
  CHECK(lang_up_to(extract(a, "q3"), 3) == std::set<SpTerm>{sp("b")});
}

TEST_CASE("extraction handles loops through non-trivial components") {
  PaBuilder b;
  b.add_letter("a");
  b.add_letter("b");
  b.add_state("p", true);
  b.add_state("q", false);
  b.add_delta("p", "a", "q");
  b.add_delta("q", "b", "p");
  Expr e = extract(b.build(), "p");
  CHECK(lang_up_to(e, 4) ==
        std::set<SpTerm>{sp("1"), sp("a . b"), sp("a . b . a . b")});
}

TEST_CASE("extraction round-trips compilation on random expressions") {
  std::mt19937 rng(59);
  for (int i = 0; i < 40; ++i) {
    Expr e = random_expr(rng, 3, {"a", "b"});
    CompileResult c = compile(e);
    Expr back = extract(c.pa, c.state_of.at(e));
    CHECK(oracle_equiv(e, back, 4));
  }
}

TEST_CASE("extraction refuses automata with fork cycles") {
  CHECK_THROWS_AS(extract(fixtures::fork_cycle(), "q1"), std::invalid_argument);
}

TEST_CASE("equivalence decision on simple pairs") {
  CHECK(expr_equiv(ex("a || b"), ex("b || a")));
  CHECK(expr_equiv(ex("a . (b + c)"), ex("a . b + a . c")));
  CHECK(!expr_equiv(ex("a || b"), ex("a . b")));
  CHECK(!expr_equiv(ex("a*"), ex("a . a*")));
  CHECK(expr_equiv(ex("(a || b)*"), ex("1 + (a || b) . (a || b)*")));
}
