#include "porta/oracle.hpp"

#include <functional>

namespace porta {

std::set<SpTerm> enumerate_sp(const std::vector<Letter>& alphabet, int n) {
  // terms[k]: all canonical terms with exactly k events; a sequential term is
  // a list (>= 2) of sequential primes (Prim or Par), a parallel term a
  // non-decreasing list (>= 2) of parallel primes (Prim or Seq).
  std::vector<std::vector<SpTerm>> seq_primes(n + 1), par_primes(n + 1);
  std::set<SpTerm> out{SpTerm::empty()};

  std::vector<SpTerm> prims;
  for (const Letter& a : alphabet) prims.push_back(SpTerm::prim(a));
  std::sort(prims.begin(), prims.end());

  for (int k = 1; k <= n; ++k) {
    if (k == 1) {
      seq_primes[1] = prims;
      par_primes[1] = prims;
      for (const SpTerm& p : prims) out.insert(p);
      continue;
    }

    // Sequential terms of size k: factor lists over seq_primes[<k].
    std::vector<SpTerm> seqs;
    std::vector<SpTerm> current;
    std::function<void(int)> gen_seq = [&](int remaining) {
      if (remaining == 0) {
        if (current.size() >= 2) seqs.push_back(seq_of(current));
        return;
      }
      for (int i = 1; i <= remaining; ++i) {
        if (i == remaining && current.empty()) continue;  // single factor
        for (const SpTerm& p : seq_primes[i]) {
          current.push_back(p);
          gen_seq(remaining - i);
          current.pop_back();
        }
      }
    };
    gen_seq(k);

    // Parallel terms of size k: non-decreasing prime lists over par_primes[<k].
    std::vector<SpTerm> pars;
    std::function<void(int, const SpTerm*, bool)> gen_par =
        [&](int remaining, const SpTerm* min_prime, bool any) {
          if (remaining == 0) {
            if (current.size() >= 2) pars.push_back(par_of(current));
            return;
          }
          for (int i = 1; i <= remaining; ++i) {
            if (i == remaining && current.empty()) continue;
            for (const SpTerm& p : par_primes[i]) {
              if (any && compare(p, *min_prime) < 0) continue;
              current.push_back(p);
              gen_par(remaining - i, &p, true);
              current.pop_back();
            }
          }
        };
    gen_par(k, nullptr, false);

    seq_primes[k] = pars;  // parallel terms are sequential primes
    par_primes[k] = seqs;  // and vice versa
    out.insert(seqs.begin(), seqs.end());
    out.insert(pars.begin(), pars.end());
  }
  return out;
}

std::set<SpTerm> pa_lang_up_to(MembershipOracle& oracle,
                               const std::vector<Letter>& alphabet,
                               const StateId& q, int n) {
  std::set<SpTerm> out;
  for (const SpTerm& u : enumerate_sp(alphabet, n))
    if (oracle.accepts(q, u)) out.insert(u);
  return out;
}

std::set<SpTerm> pa_lang_up_to(const Pa& a, const StateId& q, int n) {
  MembershipOracle oracle(a);
  return pa_lang_up_to(oracle, a.alphabet, q, n);
}

bool oracle_equiv(const Expr& e, const Expr& f, int n) {
  return lang_up_to(e, n) == lang_up_to(f, n);
}

Expr random_expr(std::mt19937& rng, int max_depth,
                 const std::vector<Letter>& alphabet) {
  auto pick_letter = [&]() {
    std::uniform_int_distribution<std::size_t> d(0, alphabet.size() - 1);
    return Expr::prim(alphabet[d(rng)]);
  };
  if (max_depth <= 0) {
    // Leaves: letters dominate; 0 and 1 appear but rarely.
    std::uniform_int_distribution<int> d(0, 9);
    int r = d(rng);
    if (r < 7) return pick_letter();
    if (r < 9) return Expr::one();
    return Expr::zero();
  }
  // Weighted operator choice: letter 6, one 1, zero 1, + 4, . 5, || 3, * 2.
  std::uniform_int_distribution<int> d(0, 21);
  int r = d(rng);
  if (r < 6) return pick_letter();
  if (r < 7) return Expr::one();
  if (r < 8) return Expr::zero();
  if (r < 12)
    return Expr::plus(random_expr(rng, max_depth - 1, alphabet),
                      random_expr(rng, max_depth - 1, alphabet));
  if (r < 17)
    return Expr::dot(random_expr(rng, max_depth - 1, alphabet),
                     random_expr(rng, max_depth - 1, alphabet));
  if (r < 20)
    return Expr::par(random_expr(rng, max_depth - 1, alphabet),
                     random_expr(rng, max_depth - 1, alphabet));
  return Expr::star(random_expr(rng, max_depth - 1, alphabet));
}

namespace {

int subterm_count(const Expr& e) {
  switch (e.op()) {
    case ExprOp::Plus:
    case ExprOp::Dot:
    case ExprOp::Par:
      return 1 + subterm_count(e.left()) + subterm_count(e.right());
    case ExprOp::Star:
      return 1 + subterm_count(e.left());
    default:
      return 1;
  }
}

// Replaces the subterm at preorder position `target` (counting down in
// place) by `repl`; otherwise rebuilds the tree sharing untouched parts.
Expr replace_at(const Expr& e, int& target, const Expr& repl) {
  if (target-- == 0) return repl;
  switch (e.op()) {
    case ExprOp::Plus:
    case ExprOp::Dot:
    case ExprOp::Par: {
      Expr l = replace_at(e.left(), target, repl);
      Expr r = target >= 0 ? replace_at(e.right(), target, repl) : e.right();
      if (e.op() == ExprOp::Plus) return Expr::plus(l, r);
      if (e.op() == ExprOp::Dot) return Expr::dot(l, r);
      return Expr::par(l, r);
    }
    case ExprOp::Star:
      return Expr::star(replace_at(e.left(), target, repl));
    default:
      return e;
  }
}

}  // namespace

Expr mutate_expr(std::mt19937& rng, const Expr& e,
                 const std::vector<Letter>& alphabet) {
  int count = subterm_count(e);
  std::uniform_int_distribution<int> pos(0, count - 1);
  int target = pos(rng);
  Expr repl = random_expr(rng, 2, alphabet);
  return replace_at(e, target, repl);
}

Pa random_fork_acyclic_pa(std::mt19937& rng, int max_states,
                          const std::vector<Letter>& alphabet) {
  std::uniform_int_distribution<int> size_d(2, max_states);
  int n = size_d(rng);
  auto rand_int = [&](int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
  };
  auto chance = [&](int percent) { return rand_int(1, 100) <= percent; };

  // Layering makes fork-acyclicity structural: sequential moves stay at the
  // same layer or below, fork members descend strictly.
  std::vector<int> layer(n);
  for (int i = 0; i < n; ++i) layer[i] = i / 2;
  auto name = [](int i) { return "q" + std::to_string(i); };

  PaBuilder b;
  for (const Letter& a : alphabet) b.add_letter(a);
  for (int i = 0; i < n; ++i) b.add_state(name(i), chance(40));

  auto pick_at_most_layer = [&](int l) {
    std::vector<int> candidates;
    for (int j = 0; j < n; ++j)
      if (layer[j] <= l) candidates.push_back(j);
    return candidates[rand_int(0, static_cast<int>(candidates.size()) - 1)];
  };

  for (int i = 0; i < n; ++i) {
    int edges = rand_int(0, 3);
    for (int k = 0; k < edges; ++k) {
      const Letter& a = alphabet[rand_int(0, static_cast<int>(alphabet.size()) - 1)];
      b.add_delta(name(i), a, name(pick_at_most_layer(layer[i])));
    }
    if (layer[i] >= 1 && chance(60)) {
      int forks = chance(30) ? 2 : 1;
      for (int f = 0; f < forks; ++f) {
        // Sizes 0..3, biased toward the interesting 1-2 range so the
        // normalization pipeline gets exercised end to end.
        int size = rand_int(0, 9);
        size = size == 0 ? 0 : size <= 4 ? 1 : size <= 8 ? 2 : 3;
        std::vector<StateId> members;
        std::vector<int> below;
        for (int j = 0; j < n; ++j)
          if (layer[j] < layer[i]) below.push_back(j);
        for (int k = 0; k < size; ++k)
          members.push_back(name(below[rand_int(0, static_cast<int>(below.size()) - 1)]));
        int targets = chance(25) ? 2 : 1;
        for (int k = 0; k < targets; ++k)
          b.add_fork(name(i), members, name(pick_at_most_layer(layer[i])));
      }
    }
  }
  return b.build();
}

}  // namespace porta
