#include "porta/kleene.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "porta/equiv.hpp"
#include "porta/wellstruct.hpp"

namespace porta {

namespace {

// T ⨟ f = { g·f : g ∈ T }
std::set<Expr> postfix_dot(const std::set<Expr>& set, const Expr& f) {
  std::set<Expr> out;
  for (const Expr& g : set) out.insert(Expr::dot(g, f));
  return out;
}

void merge_into(std::map<Multiset<Expr>, std::set<Expr>>& into,
                const std::map<Multiset<Expr>, std::set<Expr>>& from) {
  for (const auto& [fork, results] : from)
    into[fork].insert(results.begin(), results.end());
}

}  // namespace

std::set<Expr> delta_derivative(const Expr& e, const Letter& a) {
  switch (e.op()) {
    case ExprOp::Zero:
    case ExprOp::One:
    case ExprOp::Par:
      return {};
    case ExprOp::Prim:
      if (e.letter() == a) return {Expr::one()};
      return {};
    case ExprOp::Plus: {
      std::set<Expr> out = delta_derivative(e.left(), a);
      std::set<Expr> r = delta_derivative(e.right(), a);
      out.insert(r.begin(), r.end());
      return out;
    }
    case ExprOp::Dot: {
      std::set<Expr> out = postfix_dot(delta_derivative(e.left(), a), e.right());
      if (nullable(e.left())) {
        std::set<Expr> r = delta_derivative(e.right(), a);
        out.insert(r.begin(), r.end());
      }
      return out;
    }
    case ExprOp::Star:
      return postfix_dot(delta_derivative(e.left(), a), e);
  }
  return {};
}

std::map<Multiset<Expr>, std::set<Expr>> gamma_derivative(const Expr& e) {
  switch (e.op()) {
    case ExprOp::Zero:
    case ExprOp::One:
    case ExprOp::Prim:
      return {};
    case ExprOp::Par: {
      Multiset<Expr> fork;
      fork.add(e.left());
      fork.add(e.right());
      return {{std::move(fork), {Expr::one()}}};
    }
    case ExprOp::Plus: {
      auto out = gamma_derivative(e.left());
      merge_into(out, gamma_derivative(e.right()));
      return out;
    }
    case ExprOp::Dot: {
      std::map<Multiset<Expr>, std::set<Expr>> out;
      for (const auto& [fork, results] : gamma_derivative(e.left()))
        out[fork] = postfix_dot(results, e.right());
      if (nullable(e.left())) merge_into(out, gamma_derivative(e.right()));
      return out;
    }
    case ExprOp::Star: {
      std::map<Multiset<Expr>, std::set<Expr>> out;
      for (const auto& [fork, results] : gamma_derivative(e.left()))
        out[fork] = postfix_dot(results, e);
      return out;
    }
  }
  return {};
}

std::set<Expr> expr_support(const Expr& e) {
  // Worklist closure; finite by the boundedness of the syntactic automaton.
  // The cap only guards against implementation bugs.
  constexpr std::size_t kCap = 200000;
  std::set<Letter> letters = expr_letters(e);
  std::set<Expr> support{e};
  std::deque<Expr> work{e};
  while (!work.empty()) {
    if (support.size() > kCap)
      throw std::logic_error("expr_support exceeded the safety cap");
    Expr cur = work.front();
    work.pop_front();
    auto visit = [&](const Expr& next) {
      if (support.insert(next).second) work.push_back(next);
    };
    for (const Letter& a : letters)
      for (const Expr& next : delta_derivative(cur, a)) visit(next);
    for (const auto& [fork, results] : gamma_derivative(cur)) {
      for (const auto& [member, count] : fork.entries()) visit(member);
      for (const Expr& next : results) visit(next);
    }
  }
  return support;
}

CompileResult compile(const std::set<Expr>& exprs) {
  std::set<Expr> support;
  std::set<Letter> letters;
  for (const Expr& e : exprs) {
    std::set<Expr> s = expr_support(e);
    support.insert(s.begin(), s.end());
    std::set<Letter> l = expr_letters(e);
    letters.insert(l.begin(), l.end());
  }

  CompileResult out;
  PaBuilder b;
  for (const Letter& a : letters) b.add_letter(a);
  for (const Expr& e : support) {
    StateId name = expr_text(e);
    if (b.has_state(name))
      throw std::logic_error("compile: duplicate state name " + name);
    b.add_state(name, nullable(e));
    out.state_of[e] = name;
  }
  for (const Expr& e : support) {
    const StateId& from = out.state_of.at(e);
    for (const Letter& a : letters)
      for (const Expr& next : delta_derivative(e, a))
        b.add_delta(from, a, out.state_of.at(next));
    for (const auto& [fork, results] : gamma_derivative(e)) {
      Multiset<StateId> members;
      for (const auto& [member, count] : fork.entries())
        members.add(out.state_of.at(member), count);
      for (const Expr& next : results)
        b.add_fork(from, members, out.state_of.at(next));
    }
  }
  out.pa = b.build();
  return out;
}

CompileResult compile(const Expr& e) { return compile(std::set<Expr>{e}); }

namespace {

// Blowup-controlling constructors for extraction intermediates; full
// simplify runs after each elimination round.
Expr splus(const Expr& a, const Expr& b) {
  if (a.op() == ExprOp::Zero) return b;
  if (b.op() == ExprOp::Zero) return a;
  return Expr::plus(a, b);
}
Expr sdot(const Expr& a, const Expr& b) {
  if (a.op() == ExprOp::Zero || b.op() == ExprOp::Zero) return Expr::zero();
  if (a.op() == ExprOp::One) return b;
  if (b.op() == ExprOp::One) return a;
  return Expr::dot(a, b);
}
Expr sstar(const Expr& a) {
  if (a.op() == ExprOp::Zero || a.op() == ExprOp::One) return Expr::one();
  return Expr::star(a);
}
Expr spar(const Expr& a, const Expr& b) { return Expr::par(a, b); }

class Extractor {
 public:
  explicit Extractor(const Pa& a) : a_(a), supp_(support_analysis(a)) {}

  Expr state_expr(int p) {
    auto it = memo_.find(p);
    if (it != memo_.end()) return it->second;
    solve_component(supp_.scc_index[p]);
    return memo_.at(p);
  }

 private:
  // Single-step expression: ways to go from p to r in one unit run.
  Expr unit_expr(int p, int r) {
    Expr out = Expr::zero();
    for (std::size_t l = 0; l < a_.alphabet.size(); ++l)
      if (std::binary_search(a_.delta[p][l].begin(), a_.delta[p][l].end(), r))
        out = splus(out, Expr::prim(a_.alphabet[l]));
    for (const Fork& fork : a_.gamma[p]) {
      if (!std::binary_search(fork.targets.begin(), fork.targets.end(), r))
        continue;
      // Fork members sit strictly below p, so their expressions are ready.
      std::vector<int> members = fork.members.expand();
      Expr par = state_expr(members[0]);
      for (std::size_t i = 1; i < members.size(); ++i)
        par = spar(par, state_expr(members[i]));
      out = splus(out, par);
    }
    return out;
  }

  void solve_component(int comp) {
    std::vector<int> inside = supp_.comp_members[comp];
    std::sort(inside.begin(), inside.end());  // id order = name order

    // Column set: the component plus every unit-step target outside it.
    std::set<int> columns(inside.begin(), inside.end());
    for (int p : inside) {
      for (const auto& targets : a_.delta[p])
        for (int t : targets) columns.insert(t);
      for (const Fork& fork : a_.gamma[p])
        for (int t : fork.targets) columns.insert(t);
    }

    std::map<std::pair<int, int>, Expr> e;
    for (int p : inside)
      for (int r : columns) e[{p, r}] = unit_expr(p, r);

    // Eliminate each component state in turn (any order is sound; name order
    // keeps the output deterministic).
    for (int s : inside) {
      std::map<std::pair<int, int>, Expr> next;
      Expr loop = sstar(e.at({s, s}));
      for (int p : inside)
        for (int r : columns) {
          Expr via = sdot(e.at({p, s}), sdot(loop, e.at({s, r})));
          next[{p, r}] = simplify(splus(e.at({p, r}), via));
        }
      e = std::move(next);
    }

    std::set<int> inside_set(inside.begin(), inside.end());
    for (int p : inside) {
      Expr out = a_.accepting[p] ? Expr::one() : Expr::zero();
      for (int r : columns) {
        if (inside_set.count(r)) {
          if (a_.accepting[r]) out = splus(out, e.at({p, r}));
        } else {
          // Leave the component by a unit step into r, then continue there.
          out = splus(out, sdot(e.at({p, r}), state_expr(r)));
        }
      }
      memo_[p] = simplify(out);
    }
  }

  const Pa& a_;
  SupportAnalysis supp_;
  std::map<int, Expr> memo_;
};

}  // namespace

Expr extract(const Pa& a, const StateId& q) {
  ForkAcyclicity fa = is_fork_acyclic(a);
  if (!fa.ok)
    throw std::invalid_argument("extract requires a fork-acyclic automaton");
  Extractor ex(a);
  return ex.state_expr(a.require_state(q));
}

bool expr_equiv(const Expr& e, const Expr& f) {
  if (e == f) return true;
  CompileResult c = compile(std::set<Expr>{e, f});
  StateId qe = c.state_of.at(e), qf = c.state_of.at(f);
  auto [ws, embedding] = well_structure(c.pa, {qe, qf});
  return state_equiv(ws, embedding.at(qe), embedding.at(qf));
}

}  // namespace porta
