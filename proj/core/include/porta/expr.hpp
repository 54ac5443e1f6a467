#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "porta/pomset.hpp"

namespace porta {

enum class ExprOp { Zero, One, Prim, Plus, Dot, Par, Star };

// Series-rational expression AST. Constructors are binary/unary exactly as in
// the grammar; equality is structural with no ACI identification, because the
// derivative construction forks on the exact subterms of a parallel product.
class Expr {
 public:
  Expr();  // Zero

  static Expr zero();
  static Expr one();
  static Expr prim(const Letter& letter);
  static Expr plus(const Expr& e, const Expr& f);
  static Expr dot(const Expr& e, const Expr& f);
  static Expr par(const Expr& e, const Expr& f);
  static Expr star(const Expr& e);

  ExprOp op() const;
  const Letter& letter() const;             // Prim only
  const Expr& left() const;                 // Plus/Dot/Par, also Star body
  const Expr& right() const;                // Plus/Dot/Par
  std::size_t hash() const;

  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }
  bool operator<(const Expr& o) const;

  struct Node;  // implementation detail, defined in expr.cpp

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend int compare(const Expr& e, const Expr& f);
};

int compare(const Expr& e, const Expr& f);

// True iff the empty pomset belongs to the language of e.
bool nullable(const Expr& e);

// Exactly the members of ⟦e⟧ with at most n events; the star case is a
// fixpoint of bounded concatenation.
std::set<SpTerm> lang_up_to(const Expr& e, int n);

// Letters occurring in e, in order.
std::set<Letter> expr_letters(const Expr& e);

// Semantics-preserving cleanup: unit/annihilator laws, Plus flattening and
// duplicate-summand removal. Never applied to automaton states.
Expr simplify(const Expr& e);

// Text form. Grammar: alt := par ("+" par)* ; par := seq ("||" seq)* ;
// seq := star ("." star)* ; star := atom "*"* ;
// atom := "0" | "1" | letter | "(" alt ")". Precedence: * > . > || > +.
Expr parse_expr(const std::string& text);
std::string expr_text(const Expr& e);

}  // namespace porta
