#pragma once

// Shared helpers for the unit and acceptance suites: fixture paths, scratch
// directories and generators of random valid targets.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "unitext/codec.hpp"
#include "unitext/registry.hpp"
#include "unitext/rng.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(UNITEXT_DATA_DIR); }
inline fs::path catalog_path() { return data_dir() / "catalog.json"; }
inline fs::path raw_fixture(const std::string& name) { return data_dir() / "fixtures" / "raw" / name; }
inline fs::path unified_fixture(const std::string& kind) {
  return data_dir() / "fixtures" / "unified" / (kind + ".jsonl");
}

inline const unitext::Registry& table1_registry() {
  static const auto r = unitext::Registry::load_catalog(catalog_path());
  return r;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static unsigned counter = 0;
    unitext::Rng rng(std::hash<std::string>{}(tag), ++counter);
    path_ = fs::temp_directory_path() / ("unitext-" + tag + "-" + std::to_string(rng.next() % 1000000007ULL));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Random string over an alphabet heavy in delimiter characters; not
/// necessarily a valid field.
inline std::string random_text(unitext::Rng& rng, std::size_t max_len) {
  static constexpr std::string_view kAlphabet = "ab Z9*|*| \t-_.:\\/()'\"\xc3\xa9N";
  std::string s;
  const auto len = rng.below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i) s.push_back(kAlphabet[rng.below(kAlphabet.size())]);
  return s;
}

/// Random string satisfying unitext::is_valid_field.
inline std::string random_field(unitext::Rng& rng) {
  for (;;) {
    auto s = random_text(rng, 12);
    if (unitext::is_valid_field(s)) return s;
  }
}

inline unitext::ExtractionSet random_extraction(unitext::Rng& rng, bool typed, std::size_t max_items = 6) {
  unitext::ExtractionSet set;
  const auto n = rng.below(max_items + 1);
  for (std::size_t i = 0; i < n; ++i) {
    unitext::ExtractionItem item{random_field(rng), typed ? random_field(rng) : std::string(unitext::kUntyped)};
    if (item.surface == "None" && (!typed || item.type == "None")) continue;
    set.items.push_back(std::move(item));
  }
  return set;
}

inline unitext::ClassLabel random_label(unitext::Rng& rng) {
  for (;;) {
    auto s = random_text(rng, 16);
    if (!s.empty() && unitext::trim(s).size() == s.size() && s.find('\n') == std::string::npos) return {s};
  }
}

/// Random valid target for `kind`.
inline unitext::StructuredTarget random_target(unitext::Rng& rng, unitext::TaskKind kind) {
  using unitext::TaskKind;
  if (kind == TaskKind::REG) return unitext::Score::from_tenths(static_cast<int>(rng.below(101)));
  if (unitext::is_extraction(kind)) return random_extraction(rng, unitext::is_typed_extraction(kind));
  return random_label(rng);
}

}  // namespace testsupport
