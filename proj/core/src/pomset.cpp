#include "porta/pomset.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace porta {

struct SpTerm::Node {
  SpKind kind;
  Letter letter;                 // Primitive
  std::vector<SpTerm> children;  // Sequential/Parallel (Parallel sorted)
  int events = 0;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  // boost::hash_combine-style mixing
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::shared_ptr<const SpTerm::Node> make_node(SpKind kind, Letter letter,
                                              std::vector<SpTerm> children) {
  auto node = std::make_shared<SpTerm::Node>();
  node->kind = kind;
  node->letter = std::move(letter);
  node->children = std::move(children);
  std::size_t h = static_cast<std::size_t>(kind) * 1000003u;
  switch (kind) {
    case SpKind::Empty:
      node->events = 0;
      break;
    case SpKind::Primitive:
      node->events = 1;
      h = mix(h, std::hash<std::string>{}(node->letter));
      break;
    case SpKind::Sequential:
    case SpKind::Parallel:
      for (const SpTerm& c : node->children) {
        node->events += c.events();
        h = mix(h, c.hash());
      }
      break;
  }
  node->hash = h;
  return node;
}

const std::shared_ptr<const SpTerm::Node>& empty_node() {
  static const std::shared_ptr<const SpTerm::Node> n =
      make_node(SpKind::Empty, "", {});
  return n;
}

}  // namespace

SpTerm::SpTerm() : node_(empty_node()) {}
SpTerm::SpTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

SpTerm SpTerm::empty() { return SpTerm(); }

SpTerm SpTerm::prim(const Letter& letter) {
  if (letter.empty()) throw std::invalid_argument("empty letter");
  return SpTerm(make_node(SpKind::Primitive, letter, {}));
}

SpKind SpTerm::kind() const { return node_->kind; }
int SpTerm::events() const { return node_->events; }
const Letter& SpTerm::letter() const { return node_->letter; }
const std::vector<SpTerm>& SpTerm::children() const { return node_->children; }
std::size_t SpTerm::hash() const { return node_->hash; }

int compare(const SpTerm& u, const SpTerm& v) {
  if (u.node_ == v.node_) return 0;
  int ku = static_cast<int>(u.kind()), kv = static_cast<int>(v.kind());
  if (ku != kv) return ku < kv ? -1 : 1;
  switch (u.kind()) {
    case SpKind::Empty:
      return 0;
    case SpKind::Primitive:
      return u.letter().compare(v.letter());
    case SpKind::Sequential:
    case SpKind::Parallel: {
      const auto& cu = u.node_->children;
      const auto& cv = v.node_->children;
      std::size_t n = std::min(cu.size(), cv.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(cu[i], cv[i]);
        if (c != 0) return c;
      }
      if (cu.size() != cv.size()) return cu.size() < cv.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

bool SpTerm::operator==(const SpTerm& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash) return false;
  return compare(*this, o) == 0;
}

bool SpTerm::operator<(const SpTerm& o) const { return compare(*this, o) < 0; }

SpTerm seq_of(const std::vector<SpTerm>& factors) {
  // Flatten one level of Seq and drop Empty; invariants then hold by
  // induction since the inputs are canonical.
  std::vector<SpTerm> flat;
  for (const SpTerm& f : factors) {
    switch (f.kind()) {
      case SpKind::Empty:
        break;
      case SpKind::Sequential:
        for (const SpTerm& c : f.children()) flat.push_back(c);
        break;
      default:
        flat.push_back(f);
        break;
    }
  }
  if (flat.empty()) return SpTerm::empty();
  if (flat.size() == 1) return flat[0];
  return SpTerm(make_node(SpKind::Sequential, "", std::move(flat)));
}

SpTerm par_of(const std::vector<SpTerm>& factors) {
  std::vector<SpTerm> flat;
  for (const SpTerm& f : factors) {
    switch (f.kind()) {
      case SpKind::Empty:
        break;
      case SpKind::Parallel:
        for (const SpTerm& c : f.children()) flat.push_back(c);
        break;
      default:
        flat.push_back(f);
        break;
    }
  }
  if (flat.empty()) return SpTerm::empty();
  if (flat.size() == 1) return flat[0];
  std::sort(flat.begin(), flat.end());
  return SpTerm(make_node(SpKind::Parallel, "", std::move(flat)));
}

SpTerm par_of(const Multiset<SpTerm>& factors) { return par_of(factors.expand()); }

SpTerm seq_compose(const SpTerm& u, const SpTerm& v) { return seq_of({u, v}); }
SpTerm par_compose(const SpTerm& u, const SpTerm& v) { return par_of({u, v}); }

std::vector<SpTerm> factorize_seq(const SpTerm& u) {
  switch (u.kind()) {
    case SpKind::Empty:
      return {};
    case SpKind::Sequential:
      return u.children();
    default:
      return {u};
  }
}

Multiset<SpTerm> factorize_par(const SpTerm& u) {
  Multiset<SpTerm> out;
  switch (u.kind()) {
    case SpKind::Empty:
      break;
    case SpKind::Parallel:
      for (const SpTerm& c : u.children()) out.add(c);
      break;
    default:
      out.add(u);
      break;
  }
  return out;
}

ParseError::ParseError(std::size_t pos, std::string message) : pos_(pos) {
  std::ostringstream os;
  os << "parse error at position " << pos << ": " << message;
  what_ = os.str();
}

namespace {

// Shared lexical helpers for the pomset grammar.
struct PomsetParser {
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

  bool peek_letter_start() {
    skip_ws();
    return pos < text.size() && text[pos] >= 'a' && text[pos] <= 'z';
  }

  Letter lex_letter() {
    skip_ws();
    std::size_t start = pos;
    if (!(pos < text.size() && text[pos] >= 'a' && text[pos] <= 'z'))
      throw ParseError(pos, "expected letter");
    ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  SpTerm parse_ppar() {
    SpTerm out = parse_pseq();
    while (eat("||")) out = par_compose(out, parse_pseq());
    return out;
  }

  SpTerm parse_pseq() {
    SpTerm out = parse_patom();
    while (true) {
      skip_ws();
      // "." starts a factor only if not part of "||" lookahead confusion;
      // '.' is unambiguous here.
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        out = seq_compose(out, parse_patom());
      } else {
        break;
      }
    }
    return out;
  }

  SpTerm parse_patom() {
    skip_ws();
    if (pos >= text.size()) throw ParseError(pos, "unexpected end of input");
    if (text[pos] == '1') {
      ++pos;
      return SpTerm::empty();
    }
    if (text[pos] == '(') {
      ++pos;
      SpTerm inner = parse_ppar();
      skip_ws();
      if (pos >= text.size() || text[pos] != ')')
        throw ParseError(pos, "expected ')'");
      ++pos;
      return inner;
    }
    if (peek_letter_start()) return SpTerm::prim(lex_letter());
    throw ParseError(pos, "expected '1', letter, or '('");
  }
};

void print_pomset(const SpTerm& u, std::ostream& os) {
  switch (u.kind()) {
    case SpKind::Empty:
      os << "1";
      break;
    case SpKind::Primitive:
      os << u.letter();
      break;
    case SpKind::Sequential: {
      bool first = true;
      for (const SpTerm& c : u.children()) {
        if (!first) os << " . ";
        first = false;
        if (c.kind() == SpKind::Parallel) {
          os << "(";
          print_pomset(c, os);
          os << ")";
        } else {
          print_pomset(c, os);
        }
      }
      break;
    }
    case SpKind::Parallel: {
      bool first = true;
      for (const SpTerm& c : u.children()) {
        if (!first) os << " || ";
        first = false;
        if (c.kind() == SpKind::Sequential) {
          os << "(";
          print_pomset(c, os);
          os << ")";
        } else {
          print_pomset(c, os);
        }
      }
      break;
    }
  }
}

}  // namespace

SpTerm parse_pomset(const std::string& text) {
  PomsetParser p{text};
  SpTerm out = p.parse_ppar();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError(p.pos, "trailing input");
  return out;
}

std::string pomset_text(const SpTerm& u) {
  std::ostringstream os;
  print_pomset(u, os);
  return os.str();
}

}  // namespace porta
