#pragma once

#include <memory>
#include <string>
#include <vector>

#include "porta/multiset.hpp"

namespace porta {

// A letter is a token matching [a-z][a-zA-Z0-9_]*; alphabets are sets of them.
using Letter = std::string;

enum class SpKind { Empty, Primitive, Sequential, Parallel };

// Canonical series-parallel pomset: one term per isomorphism class.
//   Empty | Prim(letter) | Seq(children, >= 2, no Seq/Empty children)
//         | Par(children, >= 2, no Par/Empty children, sorted)
// Values are immutable and share structure; equality is structural and
// coincides with pomset isomorphism thanks to the canonical shape.
class SpTerm {
 public:
  SpTerm();  // the empty pomset

  static SpTerm empty();
  static SpTerm prim(const Letter& letter);

  SpKind kind() const;
  int events() const;  // number of events (cached)
  const Letter& letter() const;                 // Primitive only
  const std::vector<SpTerm>& children() const;  // Sequential/Parallel

  std::size_t hash() const;

  bool operator==(const SpTerm& o) const;
  bool operator!=(const SpTerm& o) const { return !(*this == o); }
  bool operator<(const SpTerm& o) const;

  struct Node;  // implementation detail, defined in pomset.cpp

 private:
  explicit SpTerm(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend int compare(const SpTerm& u, const SpTerm& v);
  friend SpTerm seq_of(const std::vector<SpTerm>& factors);
  friend SpTerm par_of(const std::vector<SpTerm>& factors);
};

// Total order: Empty < Prim < Seq < Par by constructor, then lexicographic
// on letter / child list. Returns <0, 0, >0.
int compare(const SpTerm& u, const SpTerm& v);

SpTerm seq_compose(const SpTerm& u, const SpTerm& v);
SpTerm par_compose(const SpTerm& u, const SpTerm& v);

// n-ary compositions of arbitrary (possibly non-prime, possibly empty) parts.
SpTerm seq_of(const std::vector<SpTerm>& factors);
SpTerm par_of(const std::vector<SpTerm>& factors);
SpTerm par_of(const Multiset<SpTerm>& factors);

// Unique factorization into sequential primes (empty list iff u is empty).
std::vector<SpTerm> factorize_seq(const SpTerm& u);
// Unique factorization into parallel primes (empty multiset iff u is empty).
Multiset<SpTerm> factorize_par(const SpTerm& u);

// Text form. Grammar: ppar := pseq ("||" pseq)* ; pseq := patom ("." patom)* ;
// patom := "1" | letter | "(" ppar ")". "." binds tighter than "||".
SpTerm parse_pomset(const std::string& text);
std::string pomset_text(const SpTerm& u);

// Thrown by parse_pomset / parse_expr with a 0-based input position.
class ParseError : public std::exception {
 public:
  ParseError(std::size_t pos, std::string message);
  std::size_t position() const { return pos_; }
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  std::size_t pos_;
  std::string what_;
};

}  // namespace porta
