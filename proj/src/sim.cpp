#include "unitext/sim.hpp"

#include <algorithm>
#include <cctype>

#include "unitext/error.hpp"
#include "unitext/registry.hpp"
#include "unitext/rng.hpp"

namespace unitext {

namespace {

// Joins items without validation; noise may produce strings no gold target could.
std::string render_loose(const ExtractionSet& set) {
  if (set.items.empty()) return std::string(kEmptyTarget);
  std::string out;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    if (i > 0) out += kListSeparator;
    out += set.items[i].surface;
    if (!set.items[i].untyped()) {
      out += kItemSeparator;
      out += set.items[i].type;
    }
  }
  return out;
}

std::vector<std::string> swap_inventory(const UnifiedExample& ex, const Registry* registry) {
  if (registry == nullptr) return {};
  const auto* d = registry->find(ex.dataset);
  if (d == nullptr) return {};
  if (ex.task == TaskKind::CLS) return d->labels;
  return registry->global_types_of(ex.dataset);
}

std::vector<std::size_t> splittable_items(const ExtractionSet& set) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    if (set.items[i].surface.find(' ') != std::string::npos) out.push_back(i);
  }
  return out;
}

bool strippable(char c) { return !std::isalnum(static_cast<unsigned char>(c)) && c != ' '; }

// (item, byte offset) of every character strip-char may delete
std::vector<std::pair<std::size_t, std::size_t>> strip_sites(const ExtractionSet& set) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    const auto& s = set.items[i].surface;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (strippable(s[j])) out.emplace_back(i, j);
    }
  }
  return out;
}

std::string garbage(Rng& rng) {
  static constexpr std::string_view kPieces[] = {"*", "|", " * ", " | ", "None", "||", "**", " ", "None * None"};
  static constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string out;
  const auto pieces = 1 + rng.below(8);
  for (std::uint64_t i = 0; i < pieces; ++i) {
    if (rng.below(3) == 0) {
      const auto len = 1 + rng.below(6);
      for (std::uint64_t j = 0; j < len; ++j) out.push_back(kLetters[rng.below(kLetters.size())]);
    } else {
      out += kPieces[rng.below(std::size(kPieces))];
    }
  }
  return out;
}

std::string apply(NoiseOp op, const UnifiedExample& ex, const Registry* registry, Rng& rng) {
  switch (op) {
    case NoiseOp::Truncate:
      return ex.target_text.substr(0, rng.below(ex.target_text.size()));
    case NoiseOp::Garbage:
      return garbage(rng);
    default:
      break;
  }
  if (const auto* set = std::get_if<ExtractionSet>(&ex.target)) {
    ExtractionSet out = *set;
    switch (op) {
      case NoiseOp::DropItem:
        out.items.erase(out.items.begin() + static_cast<std::ptrdiff_t>(rng.below(out.items.size())));
        break;
      case NoiseOp::SplitItem: {
        const auto candidates = splittable_items(out);
        const auto idx = candidates[rng.below(candidates.size())];
        const auto surface = out.items[idx].surface;
        std::vector<std::size_t> spaces;
        for (std::size_t j = 0; j < surface.size(); ++j) {
          if (surface[j] == ' ') spaces.push_back(j);
        }
        const auto cut = spaces[rng.below(spaces.size())];
        ExtractionItem tail{surface.substr(cut + 1), out.items[idx].type};
        out.items[idx].surface = surface.substr(0, cut);
        out.items.insert(out.items.begin() + static_cast<std::ptrdiff_t>(idx) + 1, std::move(tail));
        break;
      }
      case NoiseOp::SwapType: {
        auto& item = out.items[rng.below(out.items.size())];
        auto inventory = swap_inventory(ex, registry);
        std::erase(inventory, item.type);
        item.type = inventory[rng.below(inventory.size())];
        break;
      }
      case NoiseOp::StripChar: {
        const auto sites = strip_sites(out);
        const auto [i, j] = sites[rng.below(sites.size())];
        out.items[i].surface.erase(j, 1);
        break;
      }
      default:
        break;
    }
    return render_loose(out);
  }
  if (op == NoiseOp::DropItem) return {};
  if (op == NoiseOp::SwapType) {
    auto inventory = swap_inventory(ex, registry);
    std::erase(inventory, std::get<ClassLabel>(ex.target).label);
    return inventory[rng.below(inventory.size())];
  }
  return ex.target_text;
}

}  // namespace

std::string_view to_string(NoiseOp op) noexcept {
  switch (op) {
    case NoiseOp::DropItem: return "drop-item";
    case NoiseOp::SplitItem: return "split-item";
    case NoiseOp::SwapType: return "swap-type";
    case NoiseOp::StripChar: return "strip-char";
    case NoiseOp::Truncate: return "truncate";
    case NoiseOp::Garbage: return "garbage";
  }
  return "garbage";
}

std::optional<NoiseOp> noise_op_from_string(std::string_view s) noexcept {
  for (auto op : {NoiseOp::DropItem, NoiseOp::SplitItem, NoiseOp::SwapType, NoiseOp::StripChar, NoiseOp::Truncate,
                  NoiseOp::Garbage}) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

void NoiseSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("noise probability must lie in [0,1]");
  if (p > 0.0 && ops.empty()) throw ValidationError("noise probability > 0 needs at least one op");
}

bool noise_applicable(NoiseOp op, const UnifiedExample& ex, const Registry* registry) {
  const auto* set = std::get_if<ExtractionSet>(&ex.target);
  switch (op) {
    case NoiseOp::Garbage:
      return true;
    case NoiseOp::Truncate:
      return !ex.target_text.empty();
    case NoiseOp::DropItem:
      return set == nullptr || !set->items.empty();
    case NoiseOp::SplitItem:
      return set != nullptr && !splittable_items(*set).empty();
    case NoiseOp::StripChar:
      return set != nullptr && !strip_sites(*set).empty();
    case NoiseOp::SwapType: {
      if (ex.task == TaskKind::REG) return false;
      if (set != nullptr && (set->items.empty() || set->items.front().untyped())) return false;
      return swap_inventory(ex, registry).size() >= 2;
    }
  }
  return false;
}

std::vector<PredictionRecord> generate_identity(const std::vector<UnifiedExample>& examples) {
  std::vector<PredictionRecord> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back({ex.id, ex.target_text});
  return out;
}

std::vector<PredictionRecord> corrupt(const std::vector<UnifiedExample>& examples, const NoiseSpec& spec,
                                      const Registry* registry) {
  spec.validate();
  auto out = generate_identity(examples);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    Rng rng(spec.seed, i);
    if (!(rng.unit() < spec.p)) continue;
    std::vector<NoiseOp> enabled;
    for (auto op : spec.ops) {
      if (noise_applicable(op, examples[i], registry)) enabled.push_back(op);
    }
    if (enabled.empty()) continue;
    out[i].output_text = apply(enabled[rng.below(enabled.size())], examples[i], registry, rng);
  }
  return out;
}

}  // namespace unitext
