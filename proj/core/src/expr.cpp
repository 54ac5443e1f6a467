#include "porta/expr.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace porta {

struct Expr::Node {
  ExprOp op;
  Letter letter;
  std::vector<Expr> kids;  // 2 for Plus/Dot/Par, 1 for Star, else 0
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::shared_ptr<const Expr::Node> make_node(ExprOp op, Letter letter,
                                            std::vector<Expr> kids) {
  auto node = std::make_shared<Expr::Node>();
  node->op = op;
  node->letter = std::move(letter);
  node->kids = std::move(kids);
  std::size_t h = static_cast<std::size_t>(op) * 1000003u;
  if (op == ExprOp::Prim) h = mix(h, std::hash<std::string>{}(node->letter));
  for (const Expr& k : node->kids) h = mix(h, k.hash());
  node->hash = h;
  return node;
}

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const std::shared_ptr<const Expr::Node> n =
      make_node(ExprOp::Zero, "", {});
  return n;
}
const std::shared_ptr<const Expr::Node>& one_node() {
  static const std::shared_ptr<const Expr::Node> n =
      make_node(ExprOp::One, "", {});
  return n;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::zero() { return Expr(zero_node()); }
Expr Expr::one() { return Expr(one_node()); }
Expr Expr::prim(const Letter& letter) {
  if (letter.empty()) throw std::invalid_argument("empty letter");
  return Expr(make_node(ExprOp::Prim, letter, {}));
}
Expr Expr::plus(const Expr& e, const Expr& f) {
  return Expr(make_node(ExprOp::Plus, "", {e, f}));
}
Expr Expr::dot(const Expr& e, const Expr& f) {
  return Expr(make_node(ExprOp::Dot, "", {e, f}));
}
Expr Expr::par(const Expr& e, const Expr& f) {
  return Expr(make_node(ExprOp::Par, "", {e, f}));
}
Expr Expr::star(const Expr& e) {
  return Expr(make_node(ExprOp::Star, "", {e}));
}

ExprOp Expr::op() const { return node_->op; }
const Letter& Expr::letter() const { return node_->letter; }
const Expr& Expr::left() const { return node_->kids[0]; }
const Expr& Expr::right() const { return node_->kids[1]; }
std::size_t Expr::hash() const { return node_->hash; }

int compare(const Expr& e, const Expr& f) {
  if (e.node_ == f.node_) return 0;
  int oe = static_cast<int>(e.op()), of = static_cast<int>(f.op());
  if (oe != of) return oe < of ? -1 : 1;
  if (e.op() == ExprOp::Prim) return e.letter().compare(f.letter());
  const auto& a = e.node_->kids;
  const auto& b = f.node_->kids;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool Expr::operator==(const Expr& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return compare(*this, o) == 0;
}
bool Expr::operator<(const Expr& o) const { return compare(*this, o) < 0; }

bool nullable(const Expr& e) {
  switch (e.op()) {
    case ExprOp::Zero:
    case ExprOp::Prim:
      return false;
    case ExprOp::One:
    case ExprOp::Star:
      return true;
    case ExprOp::Plus:
      return nullable(e.left()) || nullable(e.right());
    case ExprOp::Dot:
    case ExprOp::Par:
      return nullable(e.left()) && nullable(e.right());
  }
  return false;
}

namespace {

std::set<SpTerm> bounded_product(const std::set<SpTerm>& xs,
                                 const std::set<SpTerm>& ys, int n,
                                 bool parallel) {
  std::set<SpTerm> out;
  for (const SpTerm& u : xs) {
    if (u.events() > n) continue;
    for (const SpTerm& v : ys) {
      if (u.events() + v.events() > n) continue;
      out.insert(parallel ? par_compose(u, v) : seq_compose(u, v));
    }
  }
  return out;
}

}  // namespace

std::set<SpTerm> lang_up_to(const Expr& e, int n) {
  switch (e.op()) {
    case ExprOp::Zero:
      return {};
    case ExprOp::One:
      return {SpTerm::empty()};
    case ExprOp::Prim:
      if (n >= 1) return {SpTerm::prim(e.letter())};
      return {};
    case ExprOp::Plus: {
      std::set<SpTerm> out = lang_up_to(e.left(), n);
      std::set<SpTerm> r = lang_up_to(e.right(), n);
      out.insert(r.begin(), r.end());
      return out;
    }
    case ExprOp::Dot:
      return bounded_product(lang_up_to(e.left(), n), lang_up_to(e.right(), n),
                             n, /*parallel=*/false);
    case ExprOp::Par:
      return bounded_product(lang_up_to(e.left(), n), lang_up_to(e.right(), n),
                             n, /*parallel=*/true);
    case ExprOp::Star: {
      std::set<SpTerm> body = lang_up_to(e.left(), n);
      std::set<SpTerm> out = {SpTerm::empty()};
      // Iterate U -> {1} ∪ body·U at bound n until fixpoint; terminates
      // because the set only grows within a finite universe.
      while (true) {
        std::set<SpTerm> next = bounded_product(body, out, n, false);
        std::size_t before = out.size();
        out.insert(next.begin(), next.end());
        if (out.size() == before) break;
      }
      return out;
    }
  }
  return {};
}

std::set<Letter> expr_letters(const Expr& e) {
  std::set<Letter> out;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    switch (x.op()) {
      case ExprOp::Prim:
        out.insert(x.letter());
        break;
      case ExprOp::Plus:
      case ExprOp::Dot:
      case ExprOp::Par:
        walk(x.left());
        walk(x.right());
        break;
      case ExprOp::Star:
        walk(x.left());
        break;
      default:
        break;
    }
  };
  walk(e);
  return out;
}

namespace {

void collect_summands(const Expr& e, std::vector<Expr>& out) {
  if (e.op() == ExprOp::Plus) {
    collect_summands(e.left(), out);
    collect_summands(e.right(), out);
  } else {
    out.push_back(e);
  }
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e.op()) {
    case ExprOp::Zero:
    case ExprOp::One:
    case ExprOp::Prim:
      return e;
    case ExprOp::Plus: {
      std::vector<Expr> summands;
      collect_summands(Expr::plus(simplify(e.left()), simplify(e.right())),
                       summands);
      std::vector<Expr> kept;
      std::set<Expr> seen;
      for (const Expr& s : summands) {
        if (s.op() == ExprOp::Zero) continue;
        if (seen.insert(s).second) kept.push_back(s);
      }
      if (kept.empty()) return Expr::zero();
      Expr out = kept[0];
      for (std::size_t i = 1; i < kept.size(); ++i) out = Expr::plus(out, kept[i]);
      return out;
    }
    case ExprOp::Dot: {
      Expr l = simplify(e.left()), r = simplify(e.right());
      if (l.op() == ExprOp::Zero || r.op() == ExprOp::Zero) return Expr::zero();
      if (l.op() == ExprOp::One) return r;
      if (r.op() == ExprOp::One) return l;
      return Expr::dot(l, r);
    }
    case ExprOp::Par: {
      Expr l = simplify(e.left()), r = simplify(e.right());
      if (l.op() == ExprOp::Zero || r.op() == ExprOp::Zero) return Expr::zero();
      if (l.op() == ExprOp::One) return r;
      if (r.op() == ExprOp::One) return l;
      return Expr::par(l, r);
    }
    case ExprOp::Star: {
      Expr body = simplify(e.left());
      if (body.op() == ExprOp::Zero || body.op() == ExprOp::One)
        return Expr::one();
      return Expr::star(body);
    }
  }
  return e;
}

namespace {

struct ExprParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  Expr parse_alt() {
    Expr out = parse_par();
    while (eat("+")) out = Expr::plus(out, parse_par());
    return out;
  }

  Expr parse_par() {
    Expr out = parse_seq();
    while (eat("||")) out = Expr::par(out, parse_seq());
    return out;
  }

  Expr parse_seq() {
    Expr out = parse_star();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        out = Expr::dot(out, parse_star());
      } else {
        break;
      }
    }
    return out;
  }

  Expr parse_star() {
    Expr out = parse_atom();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        out = Expr::star(out);
      } else {
        break;
      }
    }
    return out;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= text.size()) throw ParseError(pos, "unexpected end of input");
    char c = text[pos];
    if (c == '0') {
      ++pos;
      return Expr::zero();
    }
    if (c == '1') {
      ++pos;
      return Expr::one();
    }
    if (c == '(') {
      ++pos;
      Expr inner = parse_alt();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')')
        throw ParseError(pos, "expected ')'");
      ++pos;
      return inner;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos;
      ++pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      return Expr::prim(text.substr(start, pos - start));
    }
    throw ParseError(pos, "expected '0', '1', letter, or '('");
  }
};

// Precedence levels for printing: Plus=0, Par=1, Dot=2, Star=3, atoms=4.
int level(const Expr& e) {
  switch (e.op()) {
    case ExprOp::Plus:
      return 0;
    case ExprOp::Par:
      return 1;
    case ExprOp::Dot:
      return 2;
    case ExprOp::Star:
      return 3;
    default:
      return 4;
  }
}

void print_expr(const Expr& e, std::ostream& os, int min_level) {
  bool parens = level(e) < min_level;
  if (parens) os << "(";
  switch (e.op()) {
    case ExprOp::Zero:
      os << "0";
      break;
    case ExprOp::One:
      os << "1";
      break;
    case ExprOp::Prim:
      os << e.letter();
      break;
    case ExprOp::Plus:
      print_expr(e.left(), os, 0);
      os << " + ";
      print_expr(e.right(), os, 1);
      break;
    case ExprOp::Par:
      print_expr(e.left(), os, 1);
      os << " || ";
      print_expr(e.right(), os, 2);
      break;
    case ExprOp::Dot:
      print_expr(e.left(), os, 2);
      os << " . ";
      print_expr(e.right(), os, 3);
      break;
    case ExprOp::Star:
      print_expr(e.left(), os, 4);
      os << "*";
      break;
  }
  if (parens) os << ")";
}

}  // namespace

Expr parse_expr(const std::string& text) {
  ExprParser p{text};
  Expr out = p.parse_alt();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError(p.pos, "trailing input");
  return out;
}

std::string expr_text(const Expr& e) {
  std::ostringstream os;
  print_expr(e, os, 0);
  return os.str();
}

}  // namespace porta
