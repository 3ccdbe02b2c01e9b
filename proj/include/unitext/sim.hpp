#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unitext/records.hpp"

namespace unitext {

class Registry;

enum class NoiseOp { DropItem, SplitItem, SwapType, StripChar, Truncate, Garbage };

std::string_view to_string(NoiseOp op) noexcept;
std::optional<NoiseOp> noise_op_from_string(std::string_view s) noexcept;

struct NoiseSpec {
  double p = 0.0;
  std::vector<NoiseOp> ops;
  std::uint64_t seed = 0;

  /// p in [0,1]; ops non-empty when p > 0.
  void validate() const;
};

/// Emits every gold target verbatim.
std::vector<PredictionRecord> generate_identity(const std::vector<UnifiedExample>& examples);

/// Applies at most one perturbation per example, with probability p, using an
/// op drawn uniformly from the enabled ops that apply to that example. Example
/// i draws from its own stream of the seed, so the outcome for one example does
/// not depend on the others; an example perturbed at some p is perturbed the
/// same way at every larger p. swap-type needs the registry for inventories.
std::vector<PredictionRecord> corrupt(const std::vector<UnifiedExample>& examples, const NoiseSpec& spec,
                                      const Registry* registry = nullptr);

/// Whether `op` can change this example's output.
bool noise_applicable(NoiseOp op, const UnifiedExample& ex, const Registry* registry);

}  // namespace unitext
