#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "unitext/codec.hpp"
#include "unitext/task.hpp"

namespace unitext {

enum class TransferCategory { DKTR, DKTU, DUTR };

std::string_view to_string(TransferCategory c) noexcept;
std::optional<TransferCategory> transfer_category_from_string(std::string_view s) noexcept;

/// Bookkeeping attached to few-shot files.
struct FewshotMeta {
  std::optional<TransferCategory> transfer_category;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const FewshotMeta&, const FewshotMeta&) = default;
};

/// One prompt-prefixed input/target pair.
struct UnifiedExample {
  std::string id;
  std::string dataset;
  TaskKind task = TaskKind::CLS;
  std::string input_text;
  StructuredTarget target;
  std::string target_text;
  std::string doc;  // source document id, empty when unknown
  std::optional<FewshotMeta> meta;

  /// Builds the prefixed input and serialized target. Throws on invalid fields.
  static UnifiedExample make(std::string id, std::string dataset, TaskKind task, std::string_view text,
                             StructuredTarget target, std::string doc = {});
};

struct PredictionRecord {
  std::string id;
  std::string output_text;
  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// Line-delimited JSON. Field names and order are fixed by docs/FORMATS.md.
std::string to_json_line(const UnifiedExample& ex);
std::string to_json_line(const PredictionRecord& rec);

/// Throws ValidationError naming the line on schema violations or a target
/// that does not parse cleanly for its task.
UnifiedExample unified_from_json_line(std::string_view line, std::size_t line_no = 0);
PredictionRecord prediction_from_json_line(std::string_view line, std::size_t line_no = 0);

void write_unified(std::ostream& out, const std::vector<UnifiedExample>& examples);
void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& records);
std::vector<UnifiedExample> read_unified(std::istream& in);
std::vector<PredictionRecord> read_predictions(std::istream& in);

std::vector<UnifiedExample> read_unified_file(const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions_file(const std::filesystem::path& path);
void write_unified_file(const std::filesystem::path& path, const std::vector<UnifiedExample>& examples);
void write_predictions_file(const std::filesystem::path& path, const std::vector<PredictionRecord>& records);

}  // namespace unitext
