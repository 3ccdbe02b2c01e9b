#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unitext/codec.hpp"
#include "unitext/records.hpp"

namespace unitext {

class Registry;

/// Serial is the reference path; Parallel reduces per-thread counts with OpenMP
/// and must agree with it exactly.
enum class Exec { Serial, Parallel };

struct LabelCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t support() const noexcept { return tp + fn; }
  LabelCounts& operator+=(const LabelCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

/// Raw tallies for one dataset+task. Associative under merge().
struct Tally {
  std::map<std::string, LabelCounts> labels;
  std::size_t n = 0;
  std::size_t exact = 0;      // examples whose prediction equals gold
  std::size_t malformed = 0;  // unparseable or out-of-inventory predictions

  void merge(const Tally& other);
  friend bool operator==(const Tally&, const Tally&) = default;
};

struct LabelStats {
  LabelCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::string dataset;
  TaskKind task = TaskKind::CLS;
  std::string run;
  std::map<std::string, LabelStats> per_label;
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  double exact_match_accuracy = 0.0;
  std::optional<double> positive_recall;
  double malformed_rate = 0.0;
  std::size_t n = 0;
};

// Counting kernels. Inputs are aligned by position.
Tally count_classification(std::span<const ClassLabel> gold, std::span<const ParseOutcome> pred,
                           const std::set<std::string>& inventory, Exec exec = Exec::Parallel);
Tally count_extraction(std::span<const ExtractionSet> gold, std::span<const ParseOutcome> pred,
                       Exec exec = Exec::Parallel);
Tally count_regression(std::span<const Score> gold, std::span<const ParseOutcome> pred, Exec exec = Exec::Parallel);

/// Per-label P/R/F1 (0/0 taken as 0) and the support-weighted and macro means.
/// With no gold support at all, both means are 1 when nothing was predicted and 0 otherwise.
EvalReport finalize(const Tally& tally, std::string dataset, TaskKind task,
                    const std::optional<std::string>& positive_label = std::nullopt);

/// Exact, case-sensitive match after whitespace normalization. Out-of-inventory
/// predictions count only as a false negative for the gold label.
EvalReport score_classification(std::span<const ClassLabel> gold, std::span<const ParseOutcome> pred,
                                const std::set<std::string>& inventory, Exec exec = Exec::Parallel);
/// Set semantics over (normalized surface, type) pairs per example.
EvalReport score_extraction(std::span<const ExtractionSet> gold, std::span<const ParseOutcome> pred,
                            Exec exec = Exec::Parallel);
/// Match iff both scores render identically at one fractional digit.
EvalReport score_regression(std::span<const Score> gold, std::span<const ParseOutcome> pred,
                            Exec exec = Exec::Parallel);

/// Parses every prediction for its task; order preserved.
std::vector<ParseOutcome> parse_all(std::span<const std::string> outputs, std::span<const TaskKind> kinds,
                                    const Registry* registry, Exec exec = Exec::Parallel);

/// Aligns predictions with gold by id, then scores each (dataset, task) group
/// in first-appearance order. Throws ValidationError listing missing, extra,
/// or duplicate ids.
std::vector<EvalReport> evaluate(const std::vector<UnifiedExample>& gold, const std::vector<PredictionRecord>& pred,
                                 const Registry& registry, const std::string& run = {}, Exec exec = Exec::Parallel);

/// Headline metric: exact-match accuracy for REG, weighted F1 otherwise.
std::string_view headline_metric(TaskKind task) noexcept;
double headline_score(const EvalReport& report) noexcept;

struct AggregateReport {
  nlohmann::ordered_json document;
  std::string summary_table;
};

/// Per-run documents plus a (dataset, metric, score) summary. Reports sharing
/// a dataset are all kept; unlabeled ones get "#1", "#2", ... run labels.
AggregateReport build_report(std::vector<EvalReport> reports);

nlohmann::ordered_json to_json(const EvalReport& report);

}  // namespace unitext
