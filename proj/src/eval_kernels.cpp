// Confusion-count kernels. Each example contributes independently, so the
// parallel path gives every thread a private Tally and merges them at the end;
// counts are integers, so the merge order cannot change the result.

#include <unordered_map>
#include <unordered_set>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "unitext/eval.hpp"

namespace unitext {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept {
    const std::size_t h = std::hash<std::string>{}(p.first);
    return h ^ (std::hash<std::string>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

using PairSet = std::unordered_set<std::pair<std::string, std::string>, PairHash>;

template <class Body>
Tally reduce(std::size_t n, Exec exec, Tally seed, const Body& body) {
#ifdef _OPENMP
  if (exec == Exec::Parallel && n > 1) {
    std::vector<Tally> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
      Tally& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) body(local, static_cast<std::size_t>(i));
    }
    for (const auto& p : partial) seed.merge(p);
    return seed;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(seed, i);
  return seed;
}

PairSet pair_set(const ExtractionSet& set) {
  PairSet out;
  for (const auto& item : set.items) out.emplace(normalize_surface(item.surface), item.type);
  return out;
}

}  // namespace

void Tally::merge(const Tally& other) {
  for (const auto& [label, counts] : other.labels) labels[label] += counts;
  n += other.n;
  exact += other.exact;
  malformed += other.malformed;
}

Tally count_classification(std::span<const ClassLabel> gold, std::span<const ParseOutcome> pred,
                           const std::set<std::string>& inventory, Exec exec) {
  // normalized spelling -> inventory label
  std::unordered_map<std::string, std::string> known;
  Tally seed;
  for (const auto& label : inventory) {
    known.emplace(normalize_surface(label), label);
    seed.labels[label];
  }
  return reduce(gold.size(), exec, std::move(seed), [&](Tally& t, std::size_t i) {
    ++t.n;
    const auto g = normalize_surface(gold[i].label);
    const auto git = known.find(g);
    const std::string& gold_row = git != known.end() ? git->second : gold[i].label;
    const auto* label = std::get_if<ClassLabel>(&pred[i].target);
    const auto pit = (label != nullptr && !pred[i].malformed) ? known.find(normalize_surface(label->label))
                                                               : known.end();
    if (pit == known.end()) {
      ++t.labels[gold_row].fn;
      ++t.malformed;
    } else if (pit->first == g) {
      ++t.labels[gold_row].tp;
      ++t.exact;
    } else {
      ++t.labels[pit->second].fp;
      ++t.labels[gold_row].fn;
    }
  });
}

Tally count_extraction(std::span<const ExtractionSet> gold, std::span<const ParseOutcome> pred, Exec exec) {
  static const ExtractionSet kEmpty;
  return reduce(gold.size(), exec, Tally{}, [&](Tally& t, std::size_t i) {
    ++t.n;
    const auto* set = std::get_if<ExtractionSet>(&pred[i].target);
    if (pred[i].malformed || set == nullptr) ++t.malformed;
    const auto g = pair_set(gold[i]);
    const auto p = pair_set(set != nullptr ? *set : kEmpty);
    for (const auto& pair : g) {
      auto& row = t.labels[pair.second];
      if (p.count(pair)) ++row.tp;
      else ++row.fn;
    }
    for (const auto& pair : p) {
      if (!g.count(pair)) ++t.labels[pair.second].fp;
    }
    if (g == p) ++t.exact;
  });
}

Tally count_regression(std::span<const Score> gold, std::span<const ParseOutcome> pred, Exec exec) {
  return reduce(gold.size(), exec, Tally{}, [&](Tally& t, std::size_t i) {
    ++t.n;
    const auto g = gold[i].render();
    const auto* score = std::get_if<Score>(&pred[i].target);
    if (score == nullptr || !score->valid()) {
      ++t.labels[g].fn;
      ++t.malformed;
    } else if (score->matches(gold[i])) {
      ++t.labels[g].tp;
      ++t.exact;
    } else {
      ++t.labels[score->render()].fp;
      ++t.labels[g].fn;
    }
  });
}

std::vector<ParseOutcome> parse_all(std::span<const std::string> outputs, std::span<const TaskKind> kinds,
                                    const Registry* registry, Exec exec) {
  std::vector<ParseOutcome> out(outputs.size());
  const auto n = static_cast<std::ptrdiff_t>(outputs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel && n > 1)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = parse_output(outputs[k], kinds[k], registry);
  }
  (void)exec;
  return out;
}

}  // namespace unitext
