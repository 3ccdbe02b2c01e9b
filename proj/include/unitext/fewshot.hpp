#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unitext/records.hpp"

namespace unitext {

inline constexpr std::string_view kTypingSeparator = " [SEP] ";

enum class FewshotPolicy { PerTypeCoverage, BinaryBalance };

std::string_view to_string(FewshotPolicy p) noexcept;
std::optional<FewshotPolicy> fewshot_policy_from_string(std::string_view s) noexcept;

struct FewshotSpec {
  std::size_t k = 20;
  std::uint64_t seed = 0;
  FewshotPolicy policy = FewshotPolicy::PerTypeCoverage;
  /// Classes that must be represented under binary-balance; empty means the
  /// classes present in the pool.
  std::vector<std::string> classes;
  std::optional<TransferCategory> category;
};

struct FewshotResult {
  std::vector<UnifiedExample> examples;
  std::size_t shortfall = 0;  // k minus what could be drawn
  std::vector<std::string> notes;
};

/// Surface-only copy of typed extraction examples (EE from NER, EAE from
/// event arguments). Ids gain a "-EE"/"-EAE" suffix.
std::vector<UnifiedExample> derive_extraction(const std::vector<UnifiedExample>& examples, TaskKind kind);

/// One typing question per extraction item: "<prefix> : <text> [SEP] <surface>"
/// with the item's type as a class label. Ids gain "-ET<j>"/"-EAT<j>".
std::vector<UnifiedExample> derive_typing(const std::vector<UnifiedExample>& examples, TaskKind kind);

/// Text of an example with its prompt prefix removed.
std::string_view unprefixed_text(const UnifiedExample& ex);

/// Class used by binary-balance: the label for label tasks, "positive" or
/// "negative" (empty target) for extraction tasks.
std::string balance_class(const UnifiedExample& ex);

/// Types an example covers under per-type-coverage.
std::vector<std::string> covered_types(const UnifiedExample& ex);

/// Draws a k-example training set. Output keeps pool order and carries meta
/// {category, k, seed}. Throws ValidationError when a required class is absent.
FewshotResult sample_fewshot(const std::vector<UnifiedExample>& train, const FewshotSpec& spec);

}  // namespace unitext
