// Microbenchmarks for the hot paths: parsing, cost-instrumented execution
// and verification-condition generation, each driven by a corpus program.

#include <fstream>
#include <sstream>
#include <string>

#include <benchmark/benchmark.h>

#include "timebound/interp.hpp"
#include "timebound/parser.hpp"
#include "timebound/vcg.hpp"

using namespace timebound;

namespace {

std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(TIMEBOUND_CORPUS_DIR) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void bench_parse_binary_counter(benchmark::State& state) {
  const std::string source = read_corpus("binary_counter.imp");
  for (auto _ : state) {
    AnnotatedProgram p = parse_program(source);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(bench_parse_binary_counter);

void bench_exec_binary_counter(benchmark::State& state) {
  AnnotatedProgram p = parse_program(read_corpus("binary_counter.imp"));
  CostModel model;
  ProgramState initial;
  initial.set_scalar("n", state.range(0));
  initial.set_scalar("c", 2);
  initial.set_scalar("size", 6);
  for (auto _ : state) {
    ExecOutcome outcome = exec(p.body, initial, model);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(bench_exec_binary_counter)->Arg(16)->Arg(64);

void bench_exec_insertion_sort(benchmark::State& state) {
  AnnotatedProgram p = parse_program(read_corpus("insertion_sort.imp"));
  CostModel model;
  ProgramState initial;
  const long long n = state.range(0);
  initial.set_scalar("n", n);
  for (long long i = 0; i < n; ++i) initial.set_cell("x", i, n - i);
  for (auto _ : state) {
    ExecOutcome outcome = exec(p.body, initial, model);
    benchmark::DoNotOptimize(outcome);
  }
}
BENCHMARK(bench_exec_insertion_sort)->Arg(8)->Arg(16);

void bench_vcg_insertion_sort(benchmark::State& state) {
  AnnotatedProgram p = parse_program(read_corpus("insertion_sort.imp"));
  CostModel model;
  for (auto _ : state) {
    std::vector<VerificationCondition> vcs = vcg(p, model);
    benchmark::DoNotOptimize(vcs);
  }
}
BENCHMARK(bench_vcg_insertion_sort);

void bench_vcg_binary_counter(benchmark::State& state) {
  AnnotatedProgram p = parse_program(read_corpus("binary_counter.imp"));
  CostModel model;
  for (auto _ : state) {
    std::vector<VerificationCondition> vcs = vcg(p, model);
    benchmark::DoNotOptimize(vcs);
  }
}
BENCHMARK(bench_vcg_binary_counter);

}  // namespace

BENCHMARK_MAIN();
