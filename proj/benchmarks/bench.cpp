#include <benchmark/benchmark.h>

#include <random>

#include "porta/equiv.hpp"
#include "porta/kleene.hpp"
#include "porta/oracle.hpp"
#include "porta/wellstruct.hpp"

using namespace porta;

namespace {

static void BM_parse_print(benchmark::State& state) {
  std::mt19937 rng(1);
  std::vector<Expr> exprs;
  for (int i = 0; i < 64; ++i) exprs.push_back(random_expr(rng, 5, {"a", "b", "c"}));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_expr(expr_text(exprs[i++ % exprs.size()])));
  }
}
BENCHMARK(BM_parse_print);

static void BM_compile(benchmark::State& state) {
  std::mt19937 rng(2);
  std::vector<Expr> exprs;
  for (int i = 0; i < 64; ++i)
    exprs.push_back(random_expr(rng, static_cast<int>(state.range(0)), {"a", "b", "c"}));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compile(exprs[i++ % exprs.size()]).pa.states.size());
  }
}
BENCHMARK(BM_compile)->Arg(3)->Arg(4)->Arg(5);

static void BM_membership(benchmark::State& state) {
  Expr e = parse_expr("(a . (b || c))* . (a + b)");
  CompileResult c = compile(e);
  MembershipOracle oracle(c.pa);
  std::set<SpTerm> probes = enumerate_sp({"a", "b", "c"}, 4);
  StateId q = c.state_of.at(e);
  for (auto _ : state) {
    int hits = 0;
    for (const SpTerm& u : probes) hits += oracle.accepts(q, u);
    benchmark::DoNotOptimize(hits);
  }
}
BENCHMARK(BM_membership);

static void BM_well_structure(benchmark::State& state) {
  std::mt19937 rng(3);
  std::vector<Pa> corpus;
  for (int i = 0; i < 32; ++i)
    corpus.push_back(random_fork_acyclic_pa(rng, static_cast<int>(state.range(0)),
                                            {"a", "b"}));
  std::size_t i = 0;
  for (auto _ : state) {
    const Pa& a = corpus[i++ % corpus.size()];
    std::set<StateId> tracked(a.states.begin(), a.states.end());
    benchmark::DoNotOptimize(well_structure(a, tracked).first.states.size());
  }
}
BENCHMARK(BM_well_structure)->Arg(6)->Arg(8);

static void BM_expr_equiv(benchmark::State& state) {
  std::mt19937 rng(4);
  std::vector<std::pair<Expr, Expr>> pairs;
  for (int i = 0; i < 32; ++i) {
    Expr e = random_expr(rng, 3, {"a", "b"});
    pairs.emplace_back(e, mutate_expr(rng, e, {"a", "b"}));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [e, f] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(expr_equiv(e, f));
  }
}
BENCHMARK(BM_expr_equiv);

}  // namespace

BENCHMARK_MAIN();
