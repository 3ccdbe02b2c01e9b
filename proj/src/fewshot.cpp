#include "unitext/fewshot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "unitext/error.hpp"
#include "unitext/rng.hpp"

namespace unitext {

namespace {

const ExtractionSet& typed_source(const UnifiedExample& ex) {
  const auto* set = std::get_if<ExtractionSet>(&ex.target);
  if (set == nullptr || !is_typed_extraction(ex.task)) {
    throw ValidationError("example '" + ex.id + "' (" + std::string(prefix_for(ex.task)) +
                          ") has no typed extraction target to derive from");
  }
  return *set;
}

UnifiedExample derived(const UnifiedExample& src, std::string id, TaskKind kind, std::string_view text,
                       StructuredTarget target) {
  auto ex = UnifiedExample::make(std::move(id), src.dataset, kind, text, std::move(target), src.doc);
  ex.meta = src.meta;
  return ex;
}

}  // namespace

std::string_view to_string(FewshotPolicy p) noexcept {
  return p == FewshotPolicy::BinaryBalance ? "binary-balance" : "per-type-coverage";
}

std::optional<FewshotPolicy> fewshot_policy_from_string(std::string_view s) noexcept {
  if (s == "per-type-coverage") return FewshotPolicy::PerTypeCoverage;
  if (s == "binary-balance") return FewshotPolicy::BinaryBalance;
  return std::nullopt;
}

std::string_view unprefixed_text(const UnifiedExample& ex) {
  std::string_view in = ex.input_text;
  const auto prefix = std::string(prefix_for(ex.task)) + " : ";
  if (in.rfind(prefix, 0) == 0) in.remove_prefix(prefix.size());
  return in;
}

std::vector<UnifiedExample> derive_extraction(const std::vector<UnifiedExample>& examples, TaskKind kind) {
  if (kind != TaskKind::EE && kind != TaskKind::EAE) {
    throw ValidationError("derive_extraction produces EE or EAE, not " + std::string(prefix_for(kind)));
  }
  std::vector<UnifiedExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    ExtractionSet surfaces;
    for (const auto& item : typed_source(ex).items) surfaces.items.push_back({item.surface, std::string(kUntyped)});
    out.push_back(derived(ex, ex.id + "-" + std::string(prefix_for(kind)), kind, unprefixed_text(ex),
                          std::move(surfaces)));
  }
  return out;
}

std::vector<UnifiedExample> derive_typing(const std::vector<UnifiedExample>& examples, TaskKind kind) {
  if (kind != TaskKind::ET && kind != TaskKind::EAT) {
    throw ValidationError("derive_typing produces ET or EAT, not " + std::string(prefix_for(kind)));
  }
  std::vector<UnifiedExample> out;
  for (const auto& ex : examples) {
    const auto& items = typed_source(ex).items;
    const auto text = unprefixed_text(ex);
    for (std::size_t j = 0; j < items.size(); ++j) {
      std::string question(text);
      question += kTypingSeparator;
      question += items[j].surface;
      out.push_back(derived(ex, ex.id + "-" + std::string(prefix_for(kind)) + std::to_string(j + 1), kind, question,
                            ClassLabel{items[j].type}));
    }
  }
  return out;
}

std::string balance_class(const UnifiedExample& ex) {
  if (const auto* label = std::get_if<ClassLabel>(&ex.target)) return label->label;
  if (const auto* set = std::get_if<ExtractionSet>(&ex.target)) return set->items.empty() ? "negative" : "positive";
  throw ValidationError("example '" + ex.id + "': regression targets have no balance class");
}

std::vector<std::string> covered_types(const UnifiedExample& ex) {
  std::set<std::string> types;
  if (const auto* label = std::get_if<ClassLabel>(&ex.target)) types.insert(label->label);
  if (const auto* set = std::get_if<ExtractionSet>(&ex.target)) {
    for (const auto& item : set->items) {
      if (!item.untyped()) types.insert(item.type);
    }
  }
  return {types.begin(), types.end()};
}

FewshotResult sample_fewshot(const std::vector<UnifiedExample>& train, const FewshotSpec& spec) {
  if (train.empty()) throw ValidationError("few-shot pool is empty");
  if (spec.k == 0) throw ValidationError("few-shot k must be at least 1");
  {
    std::unordered_set<std::string_view> ids;
    for (const auto& ex : train) {
      if (!ids.insert(ex.id).second) throw ValidationError("duplicate id '" + ex.id + "' in few-shot pool");
    }
  }

  FewshotResult result;
  const std::size_t n = train.size();
  Rng rng(spec.seed);
  std::vector<bool> taken(n, false);
  std::size_t count = 0;
  const auto take = [&](std::size_t i) {
    taken[i] = true;
    ++count;
  };
  // uniform pick among untaken members of `candidates`; n when none left
  const auto pick_from = [&](const std::vector<std::size_t>& candidates) -> std::size_t {
    std::vector<std::size_t> open;
    for (auto i : candidates) {
      if (!taken[i]) open.push_back(i);
    }
    return open.empty() ? n : open[rng.below(open.size())];
  };

  if (spec.policy == FewshotPolicy::BinaryBalance) {
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (const auto& c : spec.classes) by_class[c];
    for (std::size_t i = 0; i < n; ++i) {
      auto cls = balance_class(train[i]);
      if (!spec.classes.empty() && !by_class.count(cls)) {
        throw ValidationError("example '" + train[i].id + "' has class '" + cls + "' outside the declared classes");
      }
      by_class[cls].push_back(i);
    }
    for (const auto& [cls, members] : by_class) {
      if (members.empty()) throw ValidationError("binary-balance: class '" + cls + "' has no examples");
    }
    const std::size_t classes = by_class.size();
    const std::size_t target = std::min(spec.k, n);
    std::size_t c = 0;
    std::vector<std::size_t> spill;
    for (auto& [cls, members] : by_class) {
      // the first k mod c classes (in label order) take the extra example
      const std::size_t quota = spec.k / classes + (c < spec.k % classes ? 1 : 0);
      ++c;
      rng.shuffle(std::span<std::size_t>(members));
      const std::size_t got = std::min(quota, members.size());
      for (std::size_t j = 0; j < got; ++j) take(members[j]);
      if (got < quota) {
        result.notes.push_back("class '" + cls + "' has only " + std::to_string(members.size()) + " examples");
      }
      spill.insert(spill.end(), members.begin() + static_cast<std::ptrdiff_t>(got), members.end());
    }
    rng.shuffle(std::span<std::size_t>(spill));
    for (std::size_t j = 0; j < spill.size() && count < target; ++j) take(spill[j]);
  } else {
    std::map<std::string, std::vector<std::size_t>> by_type;
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& t : covered_types(train[i])) by_type[t].push_back(i);
    }
    std::vector<std::string> types;
    for (const auto& [t, _] : by_type) types.push_back(t);
    rng.shuffle(std::span<std::string>(types));
    if (spec.k >= types.size()) {
      std::set<std::string> covered;
      for (const auto& t : types) {
        if (covered.count(t)) continue;
        const auto i = pick_from(by_type[t]);
        if (i == n) continue;
        take(i);
        for (auto& u : covered_types(train[i])) covered.insert(std::move(u));
      }
    } else {
      for (std::size_t j = 0; j < spec.k; ++j) {
        const auto i = pick_from(by_type[types[j]]);
        if (i != n) take(i);
      }
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(rest));
    for (std::size_t j = 0; j < rest.size() && count < std::min(spec.k, n); ++j) take(rest[j]);
  }

  if (spec.k > n) {
    result.shortfall = spec.k - n;
    result.notes.push_back("pool holds " + std::to_string(n) + " examples, fewer than k=" + std::to_string(spec.k));
  }
  const FewshotMeta meta{spec.category, spec.k, spec.seed};
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) continue;
    result.examples.push_back(train[i]);
    result.examples.back().meta = meta;
  }
  return result;
}

}  // namespace unitext
