#include "porta/pa.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace porta {

namespace {

std::size_t words_for(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }

void set_bit(std::vector<std::uint64_t>& row, int i) {
  row[static_cast<std::size_t>(i) / 64] |= 1ULL << (static_cast<std::size_t>(i) % 64);
}

bool get_bit(const std::vector<std::uint64_t>& row, int i) {
  return (row[static_cast<std::size_t>(i) / 64] >> (static_cast<std::size_t>(i) % 64)) & 1u;
}

// a |= b; returns true if a changed.
bool or_into(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  bool changed = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t v = a[i] | b[i];
    if (v != a[i]) {
      a[i] = v;
      changed = true;
    }
  }
  return changed;
}

bool intersects(const std::vector<std::uint64_t>& a,
                const std::vector<std::uint64_t>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

}  // namespace

int Pa::state_id(const StateId& name) const {
  auto it = std::lower_bound(states.begin(), states.end(), name);
  if (it != states.end() && *it == name)
    return static_cast<int>(it - states.begin());
  return -1;
}

int Pa::require_state(const StateId& name) const {
  int id = state_id(name);
  if (id < 0) throw std::invalid_argument("unknown state: " + name);
  return id;
}

int Pa::letter_id(const Letter& a) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), a);
  if (it != alphabet.end() && *it == a)
    return static_cast<int>(it - alphabet.begin());
  return -1;
}

void PaBuilder::add_letter(const Letter& a) { letters_.insert(a); }

void PaBuilder::add_state(const StateId& name, bool accepting) {
  auto [it, fresh] = states_.emplace(name, accepting);
  if (!fresh && it->second != accepting)
    throw std::invalid_argument("state added twice with conflicting acceptance: " + name);
}

bool PaBuilder::has_state(const StateId& name) const {
  return states_.count(name) > 0;
}

void PaBuilder::add_delta(const StateId& from, const Letter& label,
                          const StateId& to) {
  letters_.insert(label);
  deltas_.insert({from, label, to});
}

void PaBuilder::add_fork(const StateId& from, const std::vector<StateId>& members,
                         const StateId& to) {
  Multiset<StateId> m(members);
  forks_.insert({from, std::move(m), to});
}

void PaBuilder::add_fork(const StateId& from, const Multiset<StateId>& members,
                         const StateId& to) {
  forks_.insert({from, members, to});
}

Pa PaBuilder::build() const {
  Pa pa;
  pa.alphabet.assign(letters_.begin(), letters_.end());
  for (const auto& [name, acc] : states_) {
    pa.states.push_back(name);
    pa.accepting.push_back(acc);
  }
  // states_ is an ordered map, so pa.states is sorted already.
  pa.delta.assign(pa.states.size(),
                  std::vector<std::vector<int>>(pa.alphabet.size()));
  pa.gamma.assign(pa.states.size(), {});

  auto sid = [&](const StateId& name) {
    int id = pa.state_id(name);
    if (id < 0)
      throw std::invalid_argument("transition references unknown state: " + name);
    return id;
  };

  for (const auto& [from, label, to] : deltas_) {
    pa.delta[sid(from)][pa.letter_id(label)].push_back(sid(to));
  }
  // Group fork rows by (from, members); forks_ iterates in that order.
  for (const auto& [from, members, to] : forks_) {
    int f = sid(from);
    Multiset<int> m;
    for (const auto& [name, count] : members.entries()) m.add(sid(name), count);
    int t = sid(to);
    auto& row = pa.gamma[f];
    if (!row.empty() && row.back().members == m) {
      row.back().targets.push_back(t);
    } else {
      row.push_back(Fork{m, {t}});
    }
  }
  for (auto& per_state : pa.delta)
    for (auto& targets : per_state) {
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    }
  for (auto& row : pa.gamma) {
    for (auto& fork : row) {
      std::sort(fork.targets.begin(), fork.targets.end());
      fork.targets.erase(std::unique(fork.targets.begin(), fork.targets.end()),
                         fork.targets.end());
    }
    std::sort(row.begin(), row.end());
  }
  return pa;
}

std::vector<std::string> validate(const Pa& a) {
  std::vector<std::string> diags;
  int n = static_cast<int>(a.states.size());
  if (!std::is_sorted(a.states.begin(), a.states.end()))
    diags.push_back("states not sorted");
  if (std::adjacent_find(a.states.begin(), a.states.end()) != a.states.end())
    diags.push_back("duplicate state names");
  if (a.accepting.size() != a.states.size())
    diags.push_back("accepting flags out of sync with states");
  if (a.delta.size() != a.states.size()) diags.push_back("delta rows out of sync");
  if (a.gamma.size() != a.states.size()) diags.push_back("gamma rows out of sync");
  auto check_id = [&](int q, const std::string& what) {
    if (q < 0 || q >= n) diags.push_back("out-of-range state id in " + what);
  };
  for (std::size_t q = 0; q < a.delta.size(); ++q) {
    if (a.delta[q].size() != a.alphabet.size())
      diags.push_back("delta row with wrong alphabet width at state " + a.states[q]);
    for (const auto& targets : a.delta[q])
      for (int t : targets) check_id(t, "delta");
  }
  for (std::size_t q = 0; q < a.gamma.size(); ++q) {
    for (const Fork& fork : a.gamma[q]) {
      if (fork.targets.empty())
        diags.push_back("fork with empty result set at state " + a.states[q]);
      for (int t : fork.targets) check_id(t, "gamma targets");
      for (const auto& [m, count] : fork.members.entries()) {
        check_id(m, "gamma members");
        if (count <= 0) diags.push_back("non-positive fork multiplicity");
      }
    }
  }
  return diags;
}

SupportAnalysis support_analysis(const Pa& a) {
  int n = static_cast<int>(a.states.size());
  SupportAnalysis out;
  out.num_states = n;
  out.scc_index.assign(n, -1);
  if (n == 0) return out;

  // Support edges leave q toward every state that may take part in its runs.
  std::vector<std::vector<int>> succ(n);
  for (int q = 0; q < n; ++q) {
    for (const auto& targets : a.delta[q])
      for (int t : targets) succ[q].push_back(t);
    for (const Fork& fork : a.gamma[q]) {
      for (int t : fork.targets) succ[q].push_back(t);
      for (const auto& [m, count] : fork.members.entries()) succ[q].push_back(m);
    }
    std::sort(succ[q].begin(), succ[q].end());
    succ[q].erase(std::unique(succ[q].begin(), succ[q].end()), succ[q].end());
  }

  // Iterative Tarjan; components are numbered in completion order, so every
  // inter-component edge points to a smaller component index.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < succ[f.v].size()) {
        int w = succ[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          int comp = out.num_components++;
          out.comp_members.push_back({});
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            out.scc_index[w] = comp;
            out.comp_members[comp].push_back(w);
            if (w == f.v) break;
          }
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }

  // Component DAG edges, reachability closure, and depth.
  int nc = out.num_components;
  std::vector<std::set<int>> comp_succ(nc);
  for (int q = 0; q < n; ++q)
    for (int w : succ[q])
      if (out.scc_index[w] != out.scc_index[q])
        comp_succ[out.scc_index[q]].insert(out.scc_index[w]);

  out.comp_reach.assign(nc, std::vector<std::uint64_t>(words_for(nc), 0));
  out.comp_depth.assign(nc, 1);
  for (int c = 0; c < nc; ++c) {  // successors have smaller indices
    set_bit(out.comp_reach[c], c);
    for (int d : comp_succ[c]) {
      or_into(out.comp_reach[c], out.comp_reach[d]);
      out.comp_depth[c] = std::max(out.comp_depth[c], out.comp_depth[d] + 1);
    }
  }
  out.depth = *std::max_element(out.comp_depth.begin(), out.comp_depth.end());
  return out;
}

bool SupportAnalysis::leq(int a, int b) const {
  return get_bit(comp_reach[scc_index[b]], scc_index[a]);
}

bool SupportAnalysis::strict(int a, int b) const {
  return leq(a, b) && !leq(b, a);
}

ForkAcyclicity is_fork_acyclic(const Pa& a, const SupportAnalysis& supp) {
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q)
    for (const Fork& fork : a.gamma[q])
      for (const auto& [m, count] : fork.members.entries())
        if (supp.leq(q, m))  // q ⪯ member, i.e. not member ≺ q
          return {false, std::make_pair(a.states[q], a.states[m])};
  return {true, std::nullopt};
}

ForkAcyclicity is_fork_acyclic(const Pa& a) {
  return is_fork_acyclic(a, support_analysis(a));
}

std::set<StateId> support_closure(const Pa& a, const std::set<StateId>& seed) {
  std::vector<int> work;
  std::vector<bool> seen(a.states.size(), false);
  for (const StateId& s : seed) {
    int id = a.require_state(s);
    if (!seen[id]) {
      seen[id] = true;
      work.push_back(id);
    }
  }
  while (!work.empty()) {
    int q = work.back();
    work.pop_back();
    auto visit = [&](int t) {
      if (!seen[t]) {
        seen[t] = true;
        work.push_back(t);
      }
    };
    for (const auto& targets : a.delta[q])
      for (int t : targets) visit(t);
    for (const Fork& fork : a.gamma[q]) {
      for (int t : fork.targets) visit(t);
      for (const auto& [m, count] : fork.members.entries()) visit(m);
    }
  }
  std::set<StateId> out;
  for (std::size_t q = 0; q < a.states.size(); ++q)
    if (seen[q]) out.insert(a.states[q]);
  return out;
}

Pa restrict(const Pa& a, const std::set<StateId>& keep) {
  std::vector<bool> in(a.states.size(), false);
  for (const StateId& s : keep) in[a.require_state(s)] = true;
  // Support-closedness check: transitions from kept states must stay inside.
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    if (!in[q]) continue;
    auto check = [&](int t) {
      if (!in[t])
        throw std::invalid_argument("restriction set not support-closed: " +
                                    a.states[q] + " supports " + a.states[t]);
    };
    for (const auto& targets : a.delta[q])
      for (int t : targets) check(t);
    for (const Fork& fork : a.gamma[q]) {
      for (int t : fork.targets) check(t);
      for (const auto& [m, count] : fork.members.entries()) check(m);
    }
  }
  PaBuilder b;
  for (const Letter& l : a.alphabet) b.add_letter(l);
  for (std::size_t q = 0; q < a.states.size(); ++q)
    if (in[q]) b.add_state(a.states[q], a.accepting[q]);
  for (std::size_t q = 0; q < a.states.size(); ++q) {
    if (!in[q]) continue;
    for (std::size_t l = 0; l < a.alphabet.size(); ++l)
      for (int t : a.delta[q][l])
        b.add_delta(a.states[q], a.alphabet[l], a.states[t]);
    for (const Fork& fork : a.gamma[q]) {
      Multiset<StateId> members;
      for (const auto& [m, count] : fork.members.entries())
        members.add(a.states[m], count);
      for (int t : fork.targets) b.add_fork(a.states[q], members, a.states[t]);
    }
  }
  return b.build();
}

Leadsto leadsto(const Pa& a) {
  int n = static_cast<int>(a.states.size());
  Leadsto out;
  out.num_states = n;
  out.rel.assign(n, std::vector<std::uint64_t>(words_for(std::max(n, 1)), 0));
  if (n == 0) return out;
  std::vector<std::uint64_t> acc_mask(words_for(n), 0);
  for (int q = 0; q < n; ++q)
    if (a.accepting[q]) set_bit(acc_mask, q);
  for (int q = 0; q < n; ++q) set_bit(out.rel[q], q);

  // Saturate: apply the fork rule, then re-close transitively, to fixpoint.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < n; ++q) {
      for (const Fork& fork : a.gamma[q]) {
        bool all_members_ok = true;
        for (const auto& [m, count] : fork.members.entries()) {
          if (!intersects(out.rel[m], acc_mask)) {
            all_members_ok = false;
            break;
          }
        }
        if (!all_members_ok) continue;
        for (int s : fork.targets)
          if (!out.get(q, s)) {
            set_bit(out.rel[q], s);
            changed = true;
          }
      }
    }
    // Transitive closure (Warshall with bitset rows).
    bool closed_changed = true;
    while (closed_changed) {
      closed_changed = false;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          if (p != q && out.get(p, q))
            if (or_into(out.rel[p], out.rel[q])) closed_changed = true;
    }
  }
  return out;
}

std::vector<int> Leadsto::successors(int p) const {
  std::vector<int> out;
  for (int q = 0; q < num_states; ++q)
    if (get(p, q)) out.push_back(q);
  return out;
}

bool accepts_empty(const Pa& a, const Leadsto& l, int q) {
  for (int f = 0; f < static_cast<int>(a.states.size()); ++f)
    if (a.accepting[f] && l.get(q, f)) return true;
  return false;
}

bool accepts_empty(const Pa& a, const StateId& q) {
  return accepts_empty(a, leadsto(a), a.require_state(q));
}

MembershipOracle::MembershipOracle(const Pa& a)
    : pa_(a), supp_(support_analysis(a)), lead_(leadsto(a)) {
  ForkAcyclicity fa = is_fork_acyclic(a, supp_);
  if (!fa.ok)
    throw std::invalid_argument(
        "membership requires a fork-acyclic automaton (state " +
        fa.witness->first + " supported by its fork member " +
        fa.witness->second + ")");
  well_structured_ = check_structure(a).well_structured;
}

bool MembershipOracle::accepts(const StateId& q, const SpTerm& u) {
  return accepts(pa_.require_state(q), u);
}

bool MembershipOracle::accepts(int q, const SpTerm& u) {
  auto key = std::make_pair(q, u);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  bool result = false;
  std::vector<SpTerm> factors = factorize_seq(u);
  for (int p : lead_.successors(q)) {
    if (factors.empty()) {
      if (pa_.accepting[p]) {
        result = true;
        break;
      }
      continue;
    }
    if (unit_then_rest(p, factors)) {
      result = true;
      break;
    }
  }
  memo_[key] = result;
  return result;
}

// Try every split: a unit step consuming the (non-empty) prefix V1..Vj,
// then a run accepting the remaining suffix.
bool MembershipOracle::unit_then_rest(int q, const std::vector<SpTerm>& factors) {
  std::size_t max_prefix = factors.size();
  // In a well-structured automaton every unit run reads a single sequential
  // prime, so longer prefixes cannot be consumed in one step.
  if (well_structured_) max_prefix = 1;
  for (std::size_t j = 1; j <= max_prefix; ++j) {
    SpTerm prefix = (j == 1) ? factors[0]
                             : seq_of(std::vector<SpTerm>(factors.begin(),
                                                          factors.begin() + j));
    SpTerm suffix = seq_of(std::vector<SpTerm>(factors.begin() + j, factors.end()));
    if (prefix.kind() == SpKind::Primitive) {
      int l = pa_.letter_id(prefix.letter());
      if (l >= 0)
        for (int t : pa_.delta[q][l])
          if (accepts(t, suffix)) return true;
    }
    Multiset<SpTerm> primes = factorize_par(prefix);
    for (const Fork& fork : pa_.gamma[q]) {
      if (fork.members.empty()) continue;  // nullary forks are Empty steps,
                                           // already inside the ⤳ closure
      if (!fork_matches(fork, primes)) continue;
      for (int t : fork.targets)
        if (accepts(t, suffix)) return true;
    }
  }
  return false;
}

namespace {

// All sub-multisets of `of`, as (subset, complement) pairs.
void enumerate_submultisets(
    const Multiset<SpTerm>& of,
    const std::function<void(const Multiset<SpTerm>&)>& visit) {
  const auto& entries = of.entries();
  Multiset<SpTerm> current;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == entries.size()) {
      visit(current);
      return;
    }
    for (int take = 0; take <= entries[i].second; ++take) {
      if (take > 0) current.add(entries[i].first, take);
      go(i + 1);
      if (take > 0) current.remove(entries[i].first, take);
    }
  };
  go(0);
}

}  // namespace

// Can the fork's members jointly read `primes`? Each member is assigned a
// sub-multiset (possibly empty) of the parallel primes and must accept the
// parallel composition of its share. Fork members sit strictly below the
// forking state, so the recursion terminates.
bool MembershipOracle::fork_matches(const Fork& fork,
                                    const Multiset<SpTerm>& primes) {
  std::vector<int> members = fork.members.expand();
  std::function<bool(std::size_t, const Multiset<SpTerm>&)> go =
      [&](std::size_t i, const Multiset<SpTerm>& rem) -> bool {
    if (i == members.size()) return rem.empty();
    if (well_structured_) {
      // Parsimony + flat branching: each member reads exactly one prime.
      if (rem.size() < members.size() - i) return false;
      for (const auto& [prime, count] : rem.entries()) {
        if (!accepts(members[i], prime)) continue;
        Multiset<SpTerm> rest = rem;
        rest.remove(prime);
        if (go(i + 1, rest)) return true;
      }
      return false;
    }
    bool found = false;
    enumerate_submultisets(rem, [&](const Multiset<SpTerm>& share) {
      if (found) return;
      if (!accepts(members[i], par_of(share))) return;
      if (go(i + 1, rem - share)) found = true;
    });
    return found;
  };
  return go(0, primes);
}

bool membership(const Pa& a, const StateId& q, const SpTerm& u) {
  MembershipOracle oracle(a);
  return oracle.accepts(q, u);
}

StructureReport check_structure(const Pa& a) {
  StructureReport report;
  Leadsto lead = leadsto(a);
  std::set<int> fork_members;
  for (int q = 0; q < static_cast<int>(a.states.size()); ++q) {
    for (const Fork& fork : a.gamma[q]) {
      int size = static_cast<int>(fork.members.size());
      if (!report.n_forking_min || size < *report.n_forking_min)
        report.n_forking_min = size;
      for (const auto& [m, count] : fork.members.entries())
        fork_members.insert(m);
    }
  }
  for (int m : fork_members) {
    if (accepts_empty(a, lead, m)) report.parsimonious = false;
    for (const Fork& fork : a.gamma[m])
      for (int t : fork.targets)
        if (a.accepting[t]) report.flat_branching = false;
  }
  report.well_structured = (!report.n_forking_min || *report.n_forking_min >= 2) &&
                           report.parsimonious && report.flat_branching;
  return report;
}

}  // namespace porta
