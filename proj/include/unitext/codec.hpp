#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unitext/task.hpp"

namespace unitext {

class Registry;

inline constexpr std::string_view kItemSeparator = " * ";
inline constexpr std::string_view kListSeparator = " | ";
inline constexpr std::string_view kEmptyTarget = "None * None";

/// Type placeholder carried by surface-only (EE/EAE) items. Never rendered.
inline constexpr std::string_view kUntyped = "<untyped>";

struct ExtractionItem {
  std::string surface;
  std::string type;

  bool untyped() const noexcept { return type == kUntyped; }
  friend bool operator==(const ExtractionItem&, const ExtractionItem&) = default;
};

struct ExtractionSet {
  std::vector<ExtractionItem> items;
  friend bool operator==(const ExtractionSet&, const ExtractionSet&) = default;
};

struct ClassLabel {
  std::string label;
  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

/// CVSS-style score held as an integer count of tenths in [0, 100].
/// An empty value is the unparseable state; it never matches anything.
class Score {
 public:
  Score() = default;
  static Score from_tenths(int tenths);
  /// Rounds to the nearest tenth. Throws ValidationError outside [0, 10].
  static Score from_value(double value);
  static Score unparseable() { return Score{}; }
  /// Strict decimal parse ("5.9", "4", "07.25"); anything else is unparseable.
  static Score parse(std::string_view text);

  bool valid() const noexcept { return tenths_.has_value(); }
  int tenths() const { return tenths_.value(); }
  double value() const { return tenths_.value() / 10.0; }
  /// One fractional digit, e.g. "5.9". Throws SerializationError when unparseable.
  std::string render() const;
  /// Exact match at one fractional digit; unparseable never matches.
  bool matches(const Score& other) const noexcept {
    return tenths_ && other.tenths_ && *tenths_ == *other.tenths_;
  }

  friend bool operator==(const Score&, const Score&) = default;

 private:
  std::optional<int> tenths_;
};

using StructuredTarget = std::variant<ClassLabel, ExtractionSet, Score>;

struct ParseOutcome {
  StructuredTarget target;
  bool malformed = false;
  std::vector<std::string> diagnostics;
};

/// "<prefix> : <text>". Throws ValidationError when text is blank.
std::string format_input(TaskKind kind, std::string_view text);

/// Flat target string. Throws SerializationError naming the offending field.
std::string serialize_target(const StructuredTarget& target);

/// Never throws on any input string; anomalies are reported in the outcome.
/// With a registry, item types it does not know are kept but flagged.
ParseOutcome parse_output(std::string_view text, TaskKind kind, const Registry* registry = nullptr);

/// Trims and collapses internal whitespace runs to one space.
std::string normalize_surface(std::string_view s);

std::string_view trim(std::string_view s) noexcept;

/// Whether a surface or type string can be rendered and parsed back unchanged.
bool is_valid_field(std::string_view field) noexcept;

}  // namespace unitext
