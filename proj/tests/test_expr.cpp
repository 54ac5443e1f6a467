#include <doctest.h>

#include <random>
#include <set>

#include "porta/expr.hpp"
#include "porta/oracle.hpp"

using namespace porta;

namespace {
Expr ex(const std::string& text) { return parse_expr(text); }
SpTerm sp(const std::string& text) { return parse_pomset(text); }
const std::vector<Letter> kAbc{"a", "b", "c"};
}  // namespace

TEST_CASE("expression equality is structural, not algebraic") {
  CHECK(ex("a + b") != ex("b + a"));
  CHECK(ex("a || b") != ex("b || a"));
  CHECK(ex("(a + b) + c") != ex("a + (b + c)"));
  CHECK(ex("a + b") == ex("a + b"));
}

TEST_CASE("parsing honours precedence * > . > || > +") {
  CHECK(ex("a + b || c . d*") ==
        Expr::plus(ex("a"), Expr::par(ex("b"), Expr::dot(ex("c"), Expr::star(ex("d"))))));
  CHECK(ex("a . b || c") == Expr::par(Expr::dot(ex("a"), ex("b")), ex("c")));
  CHECK(ex("(a + b)*") == Expr::star(Expr::plus(ex("a"), ex("b"))));
  CHECK(ex("a**") == Expr::star(Expr::star(ex("a"))));
  CHECK(ex("a . b . c") == Expr::dot(Expr::dot(ex("a"), ex("b")), ex("c")));
}

TEST_CASE("parse after print is the identity on random expressions") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Expr e = random_expr(rng, 4, kAbc);
    CHECK(parse_expr(expr_text(e)) == e);
  }
}

TEST_CASE("expression parse errors carry the offending position") {
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("a +"), ParseError);
  CHECK_THROWS_AS(parse_expr("*a"), ParseError);
  CHECK_THROWS_AS(parse_expr("(a . b"), ParseError);
  CHECK_THROWS_AS(parse_expr("a | b"), ParseError);
}

TEST_CASE("nullable follows the expression structure") {
  CHECK(!nullable(ex("0")));
  CHECK(nullable(ex("1")));
  CHECK(!nullable(ex("a")));
  CHECK(nullable(ex("a*")));
  CHECK(nullable(ex("a* . b*")));
  CHECK(!nullable(ex("a* . b")));
  CHECK(nullable(ex("a + 1")));
  CHECK(nullable(ex("a* || b*")));
  CHECK(!nullable(ex("a || b*")));
}

TEST_CASE("nullable agrees with the empty slice of the bounded language") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    Expr e = random_expr(rng, 4, kAbc);
    CHECK(nullable(e) == (lang_up_to(e, 0).count(SpTerm::empty()) > 0));
  }
}

TEST_CASE("bounded language of hand-checked expressions") {
  CHECK(lang_up_to(ex("(a || b) . c"), 3) == std::set<SpTerm>{sp("(a || b) . c")});
  CHECK(lang_up_to(ex("(a || b) . c"), 2).empty());
  CHECK(lang_up_to(ex("a*"), 3) ==
        std::set<SpTerm>{sp("1"), sp("a"), sp("a . a"), sp("a . a . a")});
  CHECK(lang_up_to(ex("(a || a)*"), 5) ==
        std::set<SpTerm>{sp("1"), sp("a || a"), sp("(a || a) . (a || a)")});
  CHECK(lang_up_to(ex("0 . a + 0*"), 4) == std::set<SpTerm>{sp("1")});
  CHECK(lang_up_to(ex("a + a + a"), 1) == std::set<SpTerm>{sp("a")});
}

TEST_CASE("every bounded-language member respects the event bound") {
  std::mt19937 rng(13);
  for (int i = 0; i < 100; ++i) {
    Expr e = random_expr(rng, 3, kAbc);
    for (const SpTerm& u : lang_up_to(e, 4)) CHECK(u.events() <= 4);
  }
}

TEST_CASE("simplify preserves the bounded language") {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    Expr e = random_expr(rng, 4, kAbc);
    CHECK(lang_up_to(simplify(e), 4) == lang_up_to(e, 4));
  }
}

TEST_CASE("simplify applies unit, annihilator and idempotence laws") {
  CHECK(simplify(ex("a + 0")) == ex("a"));
  CHECK(simplify(ex("0 + a")) == ex("a"));
  CHECK(simplify(ex("a . 1")) == ex("a"));
  CHECK(simplify(ex("1 . a")) == ex("a"));
  CHECK(simplify(ex("a . 0")) == ex("0"));
  CHECK(simplify(ex("a || 1")) == ex("a"));
  CHECK(simplify(ex("a || 0")) == ex("0"));
  CHECK(simplify(ex("0*")) == ex("1"));
  CHECK(simplify(ex("1*")) == ex("1"));
  CHECK(simplify(ex("a + b + a")) == ex("a + b"));
  CHECK(simplify(ex("(a + b) + (c + a)")) == ex("a + b + c"));
}

TEST_CASE("expr_letters collects exactly the occurring letters") {
  CHECK(expr_letters(ex("a . (b + a)* || d")) ==
        std::set<Letter>{"a", "b", "d"});
  CHECK(expr_letters(ex("0 + 1")).empty());
}
