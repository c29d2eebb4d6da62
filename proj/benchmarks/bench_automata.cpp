#include <benchmark/benchmark.h>

#include "deepregex/automata.hpp"
#include "deepregex/corpus.hpp"

using namespace deepregex;

namespace {

std::vector<std::string> sample_regexes(std::size_t n) {
  GeneratorConfig g;
  g.target_size = n;
  g.seed = 11;
  std::vector<std::string> out;
  for (const auto& ex : generate_corpus(g)) out.push_back(ex.regex);
  return out;
}

void BM_DfaEqualSelf(benchmark::State& state) {
  auto regexes = sample_regexes(64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& r = regexes[i++ % regexes.size()];
    benchmark::DoNotOptimize(dfa_equal(r, "(" + r + ")|(" + r + ")"));
  }
}
BENCHMARK(BM_DfaEqualSelf);

void BM_DfaEqualSwappedUnion(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dfa_equal("(a|b)", "(b|a)"));
}
BENCHMARK(BM_DfaEqualSwappedUnion);

void BM_CompileDfa(benchmark::State& state) {
  Regex ast = parse(".*((floor)|([AEIOUaeiou])|([0-9])).*(~([AEIOUaeiou]))");
  auto classes = mentioned_classes(ast);
  Alphabet alphabet = minterm_alphabet(classes);
  for (auto _ : state) benchmark::DoNotOptimize(compile_dfa(ast, alphabet));
}
BENCHMARK(BM_CompileDfa);

void BM_Minimize(benchmark::State& state) {
  // (a|b)*a(a|b){n}: the subset construction is exponential in n, minimal DFA too.
  const int n = static_cast<int>(state.range(0));
  std::string pattern = "(a|b)*a";
  for (int k = 0; k < n; ++k) pattern += "(a|b)";
  Regex ast = parse(pattern);
  auto classes = mentioned_classes(ast);
  Alphabet alphabet = minterm_alphabet(classes);
  Dfa dfa = compile_dfa(ast, alphabet);
  // Duplicate every state so minimization has work to do.
  Dfa doubled = dfa;
  doubled.state_count = 2 * dfa.state_count;
  doubled.accepting.insert(doubled.accepting.end(), dfa.accepting.begin(), dfa.accepting.end());
  doubled.transitions.clear();
  for (int copy = 0; copy < 2; ++copy)
    for (int s = 0; s < dfa.state_count; ++s)
      for (int a = 0; a < dfa.symbol_count; ++a)
        doubled.transitions.push_back(dfa.next(s, a) + ((s + a) % 2 ? dfa.state_count : 0));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_dfa(doubled));
  state.counters["states"] = doubled.state_count;
}
BENCHMARK(BM_Minimize)->Arg(4)->Arg(8)->Arg(10);

}  // namespace
