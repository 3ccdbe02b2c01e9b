#include "unitext/codec.hpp"

#include <cctype>
#include <cmath>

#include "unitext/error.hpp"
#include "unitext/registry.hpp"

namespace unitext {

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool starts_with(std::string_view s, std::string_view p) noexcept { return s.substr(0, p.size()) == p; }

bool ends_with(std::string_view s, std::string_view p) noexcept {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

std::vector<std::string_view> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
}

void check_field(std::string_view field, const char* name) {
  if (!is_valid_field(field)) {
    throw SerializationError(std::string(name) + " '" + std::string(field) +
                             "' cannot be rendered: empty, padded, or carries a reserved delimiter");
  }
}

std::string render_extraction(const ExtractionSet& set) {
  if (set.items.empty()) return std::string(kEmptyTarget);
  const bool untyped = set.items.front().untyped();
  std::string out;
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    const auto& item = set.items[i];
    if (item.untyped() != untyped) {
      throw SerializationError("type: extraction set mixes typed and surface-only items");
    }
    check_field(item.surface, "surface");
    if (i > 0) out += kListSeparator;
    out += item.surface;
    if (!untyped) {
      check_field(item.type, "type");
      if (item.surface == "None" && item.type == "None") {
        throw SerializationError("surface: item 'None * None' collides with the empty-set marker");
      }
      out += kItemSeparator;
      out += item.type;
    }
  }
  if (untyped && out == kEmptyTarget) {
    throw SerializationError("surface: 'None * None' collides with the empty-set marker");
  }
  return out;
}

ParseOutcome parse_extraction(std::string_view text, bool typed, const Registry* registry) {
  ParseOutcome out;
  ExtractionSet set;
  const auto body = trim(text);
  if (body.empty() || body == kEmptyTarget) {
    out.target = std::move(set);
    return out;
  }
  const auto note = [&](std::string msg) {
    out.malformed = true;
    out.diagnostics.push_back(std::move(msg));
  };
  const auto segments = split_on(body, kListSeparator);
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto seg = trim(segments[i]);
    const auto where = "segment " + std::to_string(i + 1);
    if (seg.empty()) {
      note(where + ": empty");
      continue;
    }
    if (!typed) {
      if (seg.find(kItemSeparator) != std::string_view::npos || !is_valid_field(seg)) {
        note(where + ": not a bare surface: '" + std::string(seg) + "'");
        continue;
      }
      set.items.push_back({std::string(seg), std::string(kUntyped)});
      continue;
    }
    const auto pos = seg.rfind(kItemSeparator);
    if (pos == std::string_view::npos) {
      note(where + ": missing ' * ' separator: '" + std::string(seg) + "'");
      continue;
    }
    const auto surface = trim(seg.substr(0, pos));
    const auto type = trim(seg.substr(pos + kItemSeparator.size()));
    if (!is_valid_field(surface) || !is_valid_field(type)) {
      note(where + ": empty or delimiter-only side: '" + std::string(seg) + "'");
      continue;
    }
    if (surface == "None" && type == "None") {
      note(where + ": empty-set marker inside a non-empty list");
      continue;
    }
    if (registry != nullptr && !registry->is_global_type(type)) {
      note(where + ": unknown type '" + std::string(type) + "'");
    }
    set.items.push_back({std::string(surface), std::string(type)});
  }
  out.target = std::move(set);
  return out;
}

}  // namespace

std::string_view trim(std::string_view s) noexcept {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool is_valid_field(std::string_view field) noexcept {
  if (field.empty() || trim(field).size() != field.size()) return false;
  if (field.find('\n') != std::string_view::npos || field.find('\r') != std::string_view::npos) return false;
  if (field.find(kItemSeparator) != std::string_view::npos ||
      field.find(kListSeparator) != std::string_view::npos) {
    return false;
  }
  // A field must not complete a delimiter together with the separator next to it.
  if (starts_with(field, "* ") || starts_with(field, "| ") || ends_with(field, " *") ||
      ends_with(field, " |")) {
    return false;
  }
  for (char c : field) {
    if (c != '*' && c != '|' && !is_space(c)) return true;
  }
  return false;
}

std::string normalize_surface(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

Score Score::from_tenths(int tenths) {
  if (tenths < 0 || tenths > 100) throw ValidationError("score out of range [0.0, 10.0]");
  Score s;
  s.tenths_ = tenths;
  return s;
}

Score Score::from_value(double value) {
  if (!std::isfinite(value) || value < 0.0 || value > 10.0) {
    throw ValidationError("score out of range [0.0, 10.0]");
  }
  return from_tenths(static_cast<int>(std::lround(value * 10.0)));
}

Score Score::parse(std::string_view text) {
  // digits [ '.' digits ] | '.' digits, rounded half-up to tenths in integers
  std::size_t i = 0;
  long whole = 0;
  bool any_digit = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    whole = whole * 10 + (text[i] - '0');
    if (whole > 1000) return unparseable();
    any_digit = true;
    ++i;
  }
  int first = 0;
  int second = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::size_t frac_digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (frac_digits == 0) first = text[i] - '0';
      else if (frac_digits == 1) second = text[i] - '0';
      ++frac_digits;
      ++i;
    }
    if (frac_digits == 0) return unparseable();
    any_digit = true;
  }
  if (!any_digit || i != text.size()) return unparseable();
  const long tenths = whole * 10 + first + (second >= 5 ? 1 : 0);
  if (tenths > 100) return unparseable();
  Score s;
  s.tenths_ = static_cast<int>(tenths);
  return s;
}

std::string Score::render() const {
  if (!tenths_) throw SerializationError("value: unparseable score has no rendering");
  return std::to_string(*tenths_ / 10) + "." + std::to_string(*tenths_ % 10);
}

std::string format_input(TaskKind kind, std::string_view text) {
  const auto body = trim(text);
  if (body.empty()) throw ValidationError("input text is empty");
  std::string out(prefix_for(kind));
  out += " : ";
  out += body;
  return out;
}

std::string serialize_target(const StructuredTarget& target) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ClassLabel>) {
          if (t.label.empty() || trim(t.label).size() != t.label.size() ||
              t.label.find('\n') != std::string::npos) {
            throw SerializationError("label '" + t.label + "' is empty, padded, or multi-line");
          }
          return t.label;
        } else if constexpr (std::is_same_v<T, Score>) {
          return t.render();
        } else {
          return render_extraction(t);
        }
      },
      target);
}

ParseOutcome parse_output(std::string_view text, TaskKind kind, const Registry* registry) {
  if (is_extraction(kind)) return parse_extraction(text, is_typed_extraction(kind), registry);
  ParseOutcome out;
  const auto body = trim(text);
  if (kind == TaskKind::REG) {
    auto score = Score::parse(body);
    if (!score.valid()) {
      out.malformed = true;
      out.diagnostics.push_back("unparseable score '" + std::string(body) + "'");
    }
    out.target = score;
    return out;
  }
  if (body.empty()) {
    out.malformed = true;
    out.diagnostics.push_back("empty label");
  } else if (body.find('\n') != std::string_view::npos) {
    out.malformed = true;
    out.diagnostics.push_back("label spans several lines");
  }
  out.target = ClassLabel{std::string(body)};
  return out;
}

}  // namespace unitext
