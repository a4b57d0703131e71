#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "luset/generator.hpp"
#include "luset/interp.hpp"
#include "luset/normalize.hpp"
#include "luset/parser.hpp"
#include "luset/secinfer.hpp"

using namespace luset;

namespace {

std::string source(const char* name) {
  std::ifstream in(std::string(LUSET_BENCH_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Program> corpus(std::size_t n) {
  Rng rng(1);
  std::vector<Program> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_program(rng));
  return out;
}

void BM_Parse(benchmark::State& st) {
  std::string text = source("re_trig.lus") + source("ctr.lus");
  for (auto _ : st) benchmark::DoNotOptimize(parse_program(text));
}
BENCHMARK(BM_Parse);

void BM_Signatures(benchmark::State& st) {
  auto progs = corpus(32);
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(infer_signatures(progs[i++ % progs.size()]));
}
BENCHMARK(BM_Signatures);

void BM_Normalize(benchmark::State& st) {
  auto progs = corpus(32);
  std::size_t i = 0;
  for (auto _ : st) benchmark::DoNotOptimize(normalize_program(progs[i++ % progs.size()]));
}
BENCHMARK(BM_Normalize);

void BM_RunCtr(benchmark::State& st) {
  Program p = load_program(source("ctr.lus"));
  Interpreter interp(p);
  const std::size_t ticks = static_cast<std::size_t>(st.range(0));
  Rng rng(3);
  BStream base(ticks, true);
  auto ins = random_inputs(rng, *p.find("SpdMtr"), base);
  for (auto _ : st) benchmark::DoNotOptimize(interp.run("SpdMtr", ins, ticks));
  st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * ticks));
}
BENCHMARK(BM_RunCtr)->Arg(64)->Arg(1024)->Arg(16384);

void BM_CheckProgram(benchmark::State& st) {
  Program p = load_program(source("ctr.lus"));
  Lattice L = Lattice::powerset(3);
  for (auto _ : st) benchmark::DoNotOptimize(check_program(p, L, {}));
}
BENCHMARK(BM_CheckProgram);

}  // namespace

BENCHMARK_MAIN();
