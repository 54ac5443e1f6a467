#include "porta/wellstruct.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>

namespace porta {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

void require_fork_acyclic(const Pa& a, const std::string& who) {
  ForkAcyclicity fa = is_fork_acyclic(a);
  if (!fa.ok)
    throw std::invalid_argument(who + " requires a fork-acyclic automaton (" +
                                fa.witness->first + " supported by fork member " +
                                fa.witness->second + ")");
}

std::string fresh_name(std::string base,
                       const std::function<bool(const std::string&)>& taken) {
  if (!taken(base)) return base;
  for (int k = 0;; ++k) {
    std::string candidate = base + "#" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

}  // namespace

Pa strengthen(const Pa& a_old, const Pa& a_new, const WeakMap& m) {
  // Disjointness: new-automaton states shadowed by a re-added original get a
  // deterministic fresh suffix; the originals keep their names so tracked
  // states stay addressable across pipeline rounds.
  std::map<StateId, StateId> rename;
  for (const StateId& name : a_new.states) rename[name] = name;
  for (const StateId& name : a_new.states) {
    if (!m.count(name)) continue;
    rename[name] = fresh_name(name, [&](const std::string& c) {
      if (m.count(c)) return true;
      if (a_new.state_id(c) >= 0) return true;
      for (const auto& [from, to] : rename)
        if (from != name && to == c) return true;
      return false;
    });
  }

  PaBuilder b;
  for (const Letter& l : a_new.alphabet) b.add_letter(l);
  for (const Letter& l : a_old.alphabet) b.add_letter(l);
  for (std::size_t q = 0; q < a_new.states.size(); ++q)
    b.add_state(rename.at(a_new.states[q]), a_new.accepting[q]);

  auto copy_rows = [&](int src, const StateId& as) {
    for (std::size_t l = 0; l < a_new.alphabet.size(); ++l)
      for (int t : a_new.delta[src][l])
        b.add_delta(as, a_new.alphabet[l], rename.at(a_new.states[t]));
    for (const Fork& fork : a_new.gamma[src]) {
      Multiset<StateId> members;
      for (const auto& [mem, count] : fork.members.entries())
        members.add(rename.at(a_new.states[mem]), count);
      for (int t : fork.targets)
        b.add_fork(as, members, rename.at(a_new.states[t]));
    }
  };

  for (std::size_t q = 0; q < a_new.states.size(); ++q)
    copy_rows(static_cast<int>(q), rename.at(a_new.states[q]));

  Leadsto lead_old = leadsto(a_old);
  for (const auto& [orig, images] : m) {
    int orig_id = a_old.require_state(orig);
    b.add_state(orig, accepts_empty(a_old, lead_old, orig_id));
    for (const StateId& image : images) {
      int src = a_new.state_id(image);
      require(src >= 0, "strengthen: weak map references unknown state " + image);
      copy_rows(src, orig);
    }
  }
  return b.build();
}

std::pair<Pa, WeakMap> parsimonize(const Pa& a) {
  require_fork_acyclic(a, "parsimonize");
  Leadsto lead = leadsto(a);
  int n = static_cast<int>(a.states.size());
  std::vector<bool> empties(n);
  for (int q = 0; q < n; ++q) empties[q] = accepts_empty(a, lead, q);

  StateId top = fresh_name("TOP", [&](const std::string& c) {
    return a.state_id(c) >= 0;
  });

  PaBuilder b;
  for (const Letter& l : a.alphabet) b.add_letter(l);
  for (int q = 0; q < n; ++q) b.add_state(a.states[q], false);
  b.add_state(top, true);

  for (int q = 0; q < n; ++q) {
    for (std::size_t l = 0; l < a.alphabet.size(); ++l)
      for (int t : a.delta[q][l]) {
        b.add_delta(a.states[q], a.alphabet[l], a.states[t]);
        if (empties[t]) b.add_delta(a.states[q], a.alphabet[l], top);
      }
    for (const Fork& fork : a.gamma[q]) {
      // Split off any sub-multiset of Empty-accepting members.
      std::vector<std::pair<int, int>> splittable;  // (member, max copies)
      for (const auto& [mem, count] : fork.members.entries())
        if (empties[mem]) splittable.push_back({mem, count});
      std::function<void(std::size_t, Multiset<int>)> split =
          [&](std::size_t i, Multiset<int> removed) {
            if (i == splittable.size()) {
              Multiset<int> remaining = fork.members - removed;
              Multiset<StateId> phi;
              for (const auto& [mem, count] : remaining.entries())
                phi.add(a.states[mem], count);
              for (int t : fork.targets) {
                b.add_fork(a.states[q], phi, a.states[t]);
                if (empties[t] && !phi.empty())
                  b.add_fork(a.states[q], phi, top);
              }
              return;
            }
            for (int take = 0; take <= splittable[i].second; ++take) {
              Multiset<int> next = removed;
              next.add(splittable[i].first, take);
              split(i + 1, next);
            }
          };
      split(0, {});
    }
  }

  WeakMap m;
  for (int q = 0; q < n; ++q) {
    std::set<StateId> images{a.states[q]};
    if (empties[q]) images.insert(top);
    m[a.states[q]] = std::move(images);
  }
  return {b.build(), std::move(m)};
}

std::pair<Pa, WeakMap> remove_nullary_forks(const Pa& a) {
  require_fork_acyclic(a, "remove_nullary_forks");
  StructureReport report = check_structure(a);
  require(report.parsimonious, "remove_nullary_forks requires a parsimonious automaton");
  Leadsto lead = leadsto(a);
  int n = static_cast<int>(a.states.size());

  PaBuilder b;
  for (const Letter& l : a.alphabet) b.add_letter(l);
  for (int q = 0; q < n; ++q) b.add_state(a.states[q], a.accepting[q]);

  // Pre-compute ⤳ predecessors: p ⤳ q.
  std::vector<std::vector<int>> pred(n);
  for (int p = 0; p < n; ++p)
    for (int q : lead.successors(p)) pred[q].push_back(p);

  for (int q = 0; q < n; ++q) {
    for (int p : pred[q]) {
      for (std::size_t l = 0; l < a.alphabet.size(); ++l)
        for (int r : a.delta[q][l])
          for (int s : lead.successors(r))
            b.add_delta(a.states[p], a.alphabet[l], a.states[s]);
      for (const Fork& fork : a.gamma[q]) {
        if (fork.members.empty()) continue;  // nullary forks disappear
        Multiset<StateId> members;
        for (const auto& [mem, count] : fork.members.entries())
          members.add(a.states[mem], count);
        for (int r : fork.targets)
          for (int s : lead.successors(r))
            b.add_fork(a.states[p], members, a.states[s]);
      }
    }
  }

  WeakMap m;
  for (int q = 0; q < n; ++q) {
    std::set<StateId> images;
    for (int r : lead.successors(q)) images.insert(a.states[r]);
    m[a.states[q]] = std::move(images);
  }
  return {b.build(), std::move(m)};
}

Pa remove_unary_forks(const Pa& a) {
  require_fork_acyclic(a, "remove_unary_forks");
  StructureReport report = check_structure(a);
  require(report.parsimonious, "remove_unary_forks requires a parsimonious automaton");
  require(!report.n_forking_min || *report.n_forking_min >= 1,
          "remove_unary_forks requires a 1-forking automaton");
  SupportAnalysis supp = support_analysis(a);
  int n = static_cast<int>(a.states.size());
  std::size_t max_len = static_cast<std::size_t>(supp.depth);

  // q ↑ w: the stack words reachable by descending through unary forks,
  // innermost thread first, continuations behind it.
  std::vector<std::vector<std::vector<int>>> up(n);
  std::vector<bool> up_done(n, false);
  std::function<const std::vector<std::vector<int>>&(int)> up_of =
      [&](int q) -> const std::vector<std::vector<int>>& {
    if (up_done[q]) return up[q];
    up_done[q] = true;  // safe: recursion only descends in support depth
    up[q].push_back({q});
    for (const Fork& fork : a.gamma[q]) {
      if (fork.members.size() != 1) continue;
      int r = fork.members.entries()[0].first;
      for (int cont : fork.targets)
        for (const std::vector<int>& w : up_of(r)) {
          std::vector<int> word = w;
          word.push_back(cont);
          up[q].push_back(std::move(word));
        }
    }
    return up[q];
  };

  auto stack_name = [&](const std::vector<int>& s) {
    std::string name = a.states[s[0]];
    for (std::size_t i = 1; i < s.size(); ++i) name += "|" + a.states[s[i]];
    return name;
  };
  auto stack_accepting = [&](const std::vector<int>& s) {
    for (int q : s)
      if (!a.accepting[q]) return false;
    return true;
  };

  struct Edges {
    std::vector<std::pair<int, std::vector<int>>> delta;      // (letter, stack)
    std::vector<std::pair<Multiset<int>, std::vector<int>>> gamma;
  };
  std::map<std::vector<int>, Edges> edge_memo;
  std::function<const Edges&(const std::vector<int>&)> edges_of =
      [&](const std::vector<int>& s) -> const Edges& {
    auto it = edge_memo.find(s);
    if (it != edge_memo.end()) return it->second;
    Edges e;
    int q = s[0];
    std::vector<int> rest(s.begin() + 1, s.end());
    for (const std::vector<int>& u : up_of(q)) {
      int r = u[0];
      std::vector<int> tail(u.begin() + 1, u.end());
      tail.insert(tail.end(), rest.begin(), rest.end());
      for (std::size_t l = 0; l < a.alphabet.size(); ++l)
        for (int t : a.delta[r][l]) {
          std::vector<int> ns{t};
          ns.insert(ns.end(), tail.begin(), tail.end());
          if (ns.size() <= max_len) e.delta.push_back({static_cast<int>(l), ns});
        }
      for (const Fork& fork : a.gamma[r]) {
        if (fork.members.size() < 2) continue;
        for (int t : fork.targets) {
          std::vector<int> ns{t};
          ns.insert(ns.end(), tail.begin(), tail.end());
          if (ns.size() <= max_len) e.gamma.push_back({fork.members, ns});
        }
      }
    }
    if (a.accepting[q] && !rest.empty()) {
      // An accepting top of stack may be popped: inherit the tail's moves.
      const Edges& inner = edges_of(rest);
      e.delta.insert(e.delta.end(), inner.delta.begin(), inner.delta.end());
      e.gamma.insert(e.gamma.end(), inner.gamma.begin(), inner.gamma.end());
    }
    return edge_memo.emplace(std::move(s), std::move(e)).first->second;
  };

  // Forward reachability from all length-1 seeds.
  PaBuilder b;
  for (const Letter& l : a.alphabet) b.add_letter(l);
  std::set<std::vector<int>> known;
  std::queue<std::vector<int>> work;
  auto discover = [&](const std::vector<int>& s) {
    if (known.insert(s).second) {
      b.add_state(stack_name(s), stack_accepting(s));
      work.push(s);
    }
  };
  for (int q = 0; q < n; ++q)
    if (max_len >= 1) discover({q});
  while (!work.empty()) {
    std::vector<int> s = work.front();
    work.pop();
    const Edges e = edges_of(s);  // copy: edge_memo may rehash during discovery
    for (const auto& [letter, target] : e.delta) {
      discover(target);
      b.add_delta(stack_name(s), a.alphabet[letter], stack_name(target));
    }
    for (const auto& [members, target] : e.gamma) {
      discover(target);
      Multiset<StateId> named;
      for (const auto& [mem, count] : members.entries()) {
        discover({mem});
        named.add(stack_name({mem}), count);
      }
      b.add_fork(stack_name(s), named, stack_name(target));
    }
  }
  return b.build();
}

std::pair<Pa, WeakMap> flatten_forks(const Pa& a) {
  require_fork_acyclic(a, "flatten_forks");
  StructureReport report = check_structure(a);
  require(report.parsimonious, "flatten_forks requires a parsimonious automaton");
  require(!report.n_forking_min || *report.n_forking_min >= 2,
          "flatten_forks requires a 2-forking automaton");
  int n = static_cast<int>(a.states.size());

  // ◀ expansion: replace a member p by the member multiset of any of p's
  // forks that can reach acceptance, transitively. Terminates because fork
  // members sit strictly lower in the support order.
  auto expansions = [&](const Multiset<int>& psi) {
    std::set<Multiset<int>> seen{psi};
    std::queue<Multiset<int>> work;
    work.push(psi);
    while (!work.empty()) {
      Multiset<int> phi = work.front();
      work.pop();
      for (const auto& [p, count] : phi.entries()) {
        for (const Fork& fork : a.gamma[p]) {
          bool accepting_fork = false;
          for (int t : fork.targets) accepting_fork |= a.accepting[t];
          if (!accepting_fork) continue;
          Multiset<int> next = phi;
          next.remove(p);
          next = next + fork.members;
          if (seen.insert(next).second) work.push(next);
        }
      }
    }
    return seen;
  };

  StateId top = fresh_name("TOP", [&](const std::string& c) {
    return a.state_id(c) >= 0;
  });
  auto run_variant = [&](int q) { return a.states[q] + "^r"; };
  auto fork_variant = [&](int q) { return a.states[q] + "^f"; };

  PaBuilder b;
  for (const Letter& l : a.alphabet) b.add_letter(l);
  for (int q = 0; q < n; ++q) {
    b.add_state(run_variant(q), false);
    b.add_state(fork_variant(q), false);
  }
  b.add_state(top, true);

  for (int p = 0; p < n; ++p) {
    for (std::size_t l = 0; l < a.alphabet.size(); ++l)
      for (int q : a.delta[p][l]) {
        b.add_delta(run_variant(p), a.alphabet[l], run_variant(q));
        b.add_delta(run_variant(p), a.alphabet[l], fork_variant(q));
        if (a.accepting[q]) b.add_delta(run_variant(p), a.alphabet[l], top);
      }
    for (const Fork& fork : a.gamma[p]) {
      bool accepting_fork = false;
      for (int t : fork.targets) accepting_fork |= a.accepting[t];
      for (const Multiset<int>& phi : expansions(fork.members)) {
        Multiset<StateId> members;
        for (const auto& [mem, count] : phi.entries())
          members.add(run_variant(mem), count);
        for (int q : fork.targets) {
          b.add_fork(run_variant(p), members, run_variant(q));
          b.add_fork(run_variant(p), members, fork_variant(q));
        }
        if (accepting_fork) b.add_fork(fork_variant(p), members, top);
      }
    }
  }

  WeakMap m;
  for (int q = 0; q < n; ++q) {
    std::set<StateId> images{run_variant(q), fork_variant(q)};
    if (a.accepting[q]) images.insert(top);
    m[a.states[q]] = std::move(images);
  }
  return {b.build(), std::move(m)};
}

std::pair<Pa, std::map<StateId, StateId>> well_structure(
    const Pa& a, const std::set<StateId>& tracked) {
  for (const StateId& q : tracked) a.require_state(q);
  auto restrict_map = [&](const WeakMap& m) {
    WeakMap out;
    for (const StateId& q : tracked) out[q] = m.at(q);
    return out;
  };

  auto [a0, m0] = parsimonize(a);
  Pa b0 = strengthen(a, a0, restrict_map(m0));
  auto [a1, m1] = remove_nullary_forks(b0);
  Pa b1 = strengthen(b0, a1, restrict_map(m1));
  Pa a2 = remove_unary_forks(b1);
  auto [a3, m3] = flatten_forks(a2);
  Pa b3 = strengthen(a2, a3, restrict_map(m3));

  StructureReport report = check_structure(b3);
  if (!report.well_structured || !is_fork_acyclic(b3).ok)
    throw std::logic_error("well_structure postcondition failed");
  std::map<StateId, StateId> embedding;
  for (const StateId& q : tracked) {
    b3.require_state(q);
    embedding[q] = q;
  }
  return {std::move(b3), std::move(embedding)};
}

}  // namespace porta
