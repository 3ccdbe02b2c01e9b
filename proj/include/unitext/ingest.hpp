#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unitext/codec.hpp"
#include "unitext/records.hpp"
#include "unitext/registry.hpp"

namespace unitext {

struct TaggedToken {
  std::string token;
  std::string tag;
};

/// Counters and notes gathered while loading or converting one dataset.
struct LoadReport {
  std::size_t repaired_orphan_tags = 0;
  std::size_t folded_labels = 0;
  std::size_t skipped_records = 0;
  std::vector<std::string> notes;
};

/// One validated source record. Which fields are filled depends on the
/// dataset's task: label (CLS), items with local types (NER/EVNT), score (REG).
struct RawRecord {
  std::size_t line = 0;
  std::string text;
  std::string doc;
  std::string label;
  std::string e1;
  std::string e2;
  std::vector<ExtractionItem> items;
  Score score;
};

struct LoadResult {
  std::vector<RawRecord> records;
  LoadReport report;
};

/// Turns a tagged token sequence into extraction items with local types.
/// BIO decoding applies when any tag carries a B-/I- prefix; otherwise maximal
/// runs of one bare type become one item. An I- tag that does not continue an
/// item of the same type opens a new one and is counted in the report.
ExtractionSet decode_tagged_tokens(std::span<const TaggedToken> tokens, LoadReport* report = nullptr,
                                   std::string_view outside_tag = "O");

/// Reads a raw corpus in the descriptor's source format and validates every
/// label or type against the declared inventory. Throws ValidationError with
/// the file line on malformed rows and unknown labels.
LoadResult load_dataset(const DatasetDescriptor& descriptor, const std::filesystem::path& path);
LoadResult load_dataset_text(const DatasetDescriptor& descriptor, std::string_view content);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Index-level partition. `docs` is consulted only by the document-level
/// policy and must then hold one document id per record. Both sides come back
/// in ascending index order.
SplitIndices split_indices(std::size_t n, std::span<const std::string> docs, const SplitSpec& spec);

template <class Record>
std::pair<std::vector<Record>, std::vector<Record>> split_dataset(const std::vector<Record>& records,
                                                                  const SplitSpec& spec) {
  std::vector<std::string> docs;
  if (spec.policy == SplitPolicy::DocumentLevel) {
    docs.reserve(records.size());
    for (const auto& r : records) docs.push_back(r.doc);
  }
  const auto idx = split_indices(records.size(), docs, spec);
  std::pair<std::vector<Record>, std::vector<Record>> out;
  out.first.reserve(idx.train.size());
  out.second.reserve(idx.test.size());
  for (auto i : idx.train) out.first.push_back(records[i]);
  for (auto i : idx.test) out.second.push_back(records[i]);
  return out;
}

/// Example ids are "<dataset>-<ordinal>", ordinals 1-based in load order and
/// zero-padded to six digits. Records that cannot be rendered are skipped and
/// noted in the report; their ordinals are not reused.
std::vector<UnifiedExample> to_unified(const std::vector<RawRecord>& records, const DatasetDescriptor& descriptor,
                                       const Registry& registry, LoadReport* report = nullptr);

std::string example_id(std::string_view dataset, std::size_t ordinal);

}  // namespace unitext
