// Serial vs OpenMP confusion counting on synthetic extraction and
// classification batches.

#include <benchmark/benchmark.h>

#include <set>
#include <string>
#include <vector>

#include "unitext/codec.hpp"
#include "unitext/eval.hpp"
#include "unitext/rng.hpp"

namespace {

using namespace unitext;

struct ExtractionBatch {
  std::vector<ExtractionSet> gold;
  std::vector<ParseOutcome> pred;
};

ExtractionBatch make_extraction(std::size_t n) {
  Rng rng(42);
  ExtractionBatch b;
  b.gold.reserve(n);
  b.pred.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ExtractionSet g;
    const auto m = rng.below(6);
    for (std::size_t j = 0; j < m; ++j)
      g.items.push_back({"span " + std::to_string(rng.below(50)), "T" + std::to_string(rng.below(12))});
    ExtractionSet p = g;
    if (!p.items.empty() && rng.unit() < 0.3) p.items.pop_back();
    if (rng.unit() < 0.3) p.items.push_back({"extra " + std::to_string(rng.below(50)), "T0"});
    b.gold.push_back(std::move(g));
    b.pred.push_back(ParseOutcome{std::move(p), false, {}});
  }
  return b;
}

void BM_CountExtraction(benchmark::State& state, Exec exec) {
  const auto b = make_extraction(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_extraction(b.gold, b.pred, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CountClassification(benchmark::State& state, Exec exec) {
  const std::set<std::string> inventory{"A", "B", "C", "D", "E"};
  const std::vector<std::string> labels(inventory.begin(), inventory.end());
  Rng rng(7);
  std::vector<ClassLabel> gold;
  std::vector<ParseOutcome> pred;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    gold.push_back({labels[rng.below(labels.size())]});
    pred.push_back(ParseOutcome{ClassLabel{labels[rng.below(labels.size())]}, false, {}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(count_classification(gold, pred, inventory, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_CountExtraction, serial, unitext::Exec::Serial)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_CountExtraction, parallel, unitext::Exec::Parallel)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_CountClassification, serial, unitext::Exec::Serial)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_CountClassification, parallel, unitext::Exec::Parallel)->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();
