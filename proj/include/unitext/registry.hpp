#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unitext/task.hpp"

namespace unitext {

enum class SplitPolicy { RandomFraction, DocumentLevel, HalfHalf };

struct SplitSpec {
  SplitPolicy policy = SplitPolicy::RandomFraction;
  double test_fraction = 0.2;
  std::size_t train_docs = 0;
  std::size_t test_docs = 0;
  std::uint64_t seed = 0;

  /// Throws ValidationError when the parameters of the chosen policy are out of range.
  void validate() const;
};

std::string_view to_string(SplitPolicy p) noexcept;
std::optional<SplitPolicy> split_policy_from_string(std::string_view s) noexcept;

enum class SourceFormat { TokenTagged, LabeledTable, EventAnnotated, ScoredDescription };

std::string_view to_string(SourceFormat f) noexcept;
std::optional<SourceFormat> source_format_from_string(std::string_view s) noexcept;

/// Which annotation layer of an event-annotated corpus a dataset reads.
enum class EventView { Nuggets, Arguments, Roles };

/// How a raw file maps onto records. Only the fields relevant to the
/// dataset's source format are consulted.
struct LoaderOptions {
  char delimiter = '\t';
  std::string text_column = "text";
  std::string label_column = "label";
  std::string doc_column;  // empty: no document ids
  std::string e1_column;   // both set: relation input "e1 | e2 | text"
  std::string e2_column;
  EventView event_view = EventView::Nuggets;
  std::map<std::string, std::string> label_folding;  // raw label -> inventory label
};

struct DatasetDescriptor {
  std::string id;
  TaskKind task = TaskKind::CLS;
  std::string sub_task;
  std::vector<std::string> labels;
  SplitSpec split;
  SourceFormat source_format = SourceFormat::LabeledTable;
  LoaderOptions loader;
  std::optional<std::string> positive_label;
  bool unified = true;  // member of the joint multi-task pool
};

/// Declares that several (dataset, local type) pairs denote the same entity
/// type and share one global name.
struct TypeAlias {
  std::string global;
  std::vector<std::pair<std::string, std::string>> members;
};

/// Immutable catalog of datasets plus the cross-dataset type mapping.
///
/// A local type keeps its name when no other dataset declares the same string;
/// otherwise it becomes "<dataset>:<local>". Alias groups map every member to
/// the declared global name and do not collide with each other.
class Registry {
 public:
  Registry() = default;

  static Registry build(std::vector<DatasetDescriptor> descriptors,
                        std::vector<TypeAlias> aliases = {});

  /// Reads a JSON catalog (see docs/FORMATS.md).
  static Registry load_catalog(const std::filesystem::path& path);
  static Registry from_catalog_text(std::string_view json_text);

  std::size_t size() const noexcept { return descriptors_.size(); }
  bool empty() const noexcept { return descriptors_.empty(); }
  const std::vector<DatasetDescriptor>& descriptors() const noexcept { return descriptors_; }

  const DatasetDescriptor* find(std::string_view id) const noexcept;
  /// Throws LookupError on a miss.
  const DatasetDescriptor& at(std::string_view id) const;
  std::vector<const DatasetDescriptor*> by_task(TaskKind kind) const;

  /// Throws LookupError when the pair is not registered.
  const std::string& resolve_type(std::string_view dataset, std::string_view local_type) const;

  /// Global names of a dataset's inventory, in inventory order.
  std::vector<std::string> global_types_of(std::string_view dataset) const;

  /// True if any registered pair maps to this global name.
  bool is_global_type(std::string_view global) const;

 private:
  std::vector<DatasetDescriptor> descriptors_;
  std::unordered_map<std::string, std::size_t> index_;
  // key: dataset + '\x1f' + local
  std::unordered_map<std::string, std::string> type_map_;
  std::unordered_map<std::string, std::size_t> global_types_;
};

}  // namespace unitext
