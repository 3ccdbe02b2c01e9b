#include "unitext/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "unitext/error.hpp"
#include "unitext/registry.hpp"

namespace unitext {

namespace {

using ojson = nlohmann::ordered_json;

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string id_list(const std::vector<std::string>& ids) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

}  // namespace

EvalReport finalize(const Tally& tally, std::string dataset, TaskKind task,
                    const std::optional<std::string>& positive_label) {
  EvalReport r;
  r.dataset = std::move(dataset);
  r.task = task;
  r.n = tally.n;
  std::size_t total_support = 0;
  std::size_t total_fp = 0;
  std::size_t labels_with_support = 0;
  double weighted = 0.0;
  double macro = 0.0;
  for (const auto& [label, c] : tally.labels) {
    LabelStats s;
    s.counts = c;
    s.precision = ratio(c.tp, c.tp + c.fp);
    s.recall = ratio(c.tp, c.tp + c.fn);
    s.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    total_support += c.support();
    total_fp += c.fp;
    if (c.support() > 0) {
      weighted += static_cast<double>(c.support()) * s.f1;
      macro += s.f1;
      ++labels_with_support;
    }
    r.per_label.emplace(label, s);
  }
  if (total_support == 0) {
    r.weighted_f1 = r.macro_f1 = total_fp == 0 ? 1.0 : 0.0;
  } else {
    r.weighted_f1 = weighted / static_cast<double>(total_support);
    r.macro_f1 = macro / static_cast<double>(labels_with_support);
  }
  r.exact_match_accuracy = ratio(tally.exact, tally.n);
  r.malformed_rate = ratio(tally.malformed, tally.n);
  if (positive_label) {
    auto it = r.per_label.find(*positive_label);
    r.positive_recall = it == r.per_label.end() ? 0.0 : it->second.recall;
  }
  return r;
}

EvalReport score_classification(std::span<const ClassLabel> gold, std::span<const ParseOutcome> pred,
                                const std::set<std::string>& inventory, Exec exec) {
  if (gold.size() != pred.size()) throw ValidationError("gold and prediction counts differ");
  return finalize(count_classification(gold, pred, inventory, exec), {}, TaskKind::CLS);
}

EvalReport score_extraction(std::span<const ExtractionSet> gold, std::span<const ParseOutcome> pred, Exec exec) {
  if (gold.size() != pred.size()) throw ValidationError("gold and prediction counts differ");
  return finalize(count_extraction(gold, pred, exec), {}, TaskKind::NER);
}

EvalReport score_regression(std::span<const Score> gold, std::span<const ParseOutcome> pred, Exec exec) {
  if (gold.size() != pred.size()) throw ValidationError("gold and prediction counts differ");
  return finalize(count_regression(gold, pred, exec), {}, TaskKind::REG);
}

std::vector<EvalReport> evaluate(const std::vector<UnifiedExample>& gold, const std::vector<PredictionRecord>& pred,
                                 const Registry& registry, const std::string& run, Exec exec) {
  std::unordered_map<std::string_view, std::size_t> pred_index;
  std::vector<std::string> duplicates;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred_index.emplace(pred[i].id, i).second) duplicates.push_back(pred[i].id);
  }
  std::unordered_set<std::string_view> gold_ids;
  std::vector<std::string> missing;
  for (const auto& ex : gold) {
    if (!gold_ids.insert(ex.id).second) duplicates.push_back(ex.id);
    if (!pred_index.count(ex.id)) missing.push_back(ex.id);
  }
  std::vector<std::string> extra;
  for (const auto& p : pred) {
    if (!gold_ids.count(p.id)) extra.push_back(p.id);
  }
  if (!missing.empty() || !extra.empty() || !duplicates.empty()) {
    std::string msg = "predictions do not align with gold:";
    if (!missing.empty()) msg += " missing ids [" + id_list(missing) + "]";
    if (!extra.empty()) msg += " extra ids [" + id_list(extra) + "]";
    if (!duplicates.empty()) msg += " duplicate ids [" + id_list(duplicates) + "]";
    throw ValidationError(msg);
  }

  std::vector<std::string> outputs;
  std::vector<TaskKind> kinds;
  outputs.reserve(gold.size());
  kinds.reserve(gold.size());
  for (const auto& ex : gold) {
    outputs.push_back(pred[pred_index.at(ex.id)].output_text);
    kinds.push_back(ex.task);
  }
  const auto parsed = parse_all(outputs, kinds, &registry, exec);

  // (dataset, task) groups in first-appearance order
  std::vector<std::pair<std::string, TaskKind>> groups;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto key = std::make_pair(gold[i].dataset, gold[i].task);
    auto it = std::find(groups.begin(), groups.end(), key);
    if (it == groups.end()) {
      groups.push_back(key);
      members.emplace_back();
      it = groups.end() - 1;
    }
    members[static_cast<std::size_t>(it - groups.begin())].push_back(i);
  }

  std::vector<EvalReport> reports;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [dataset, task] = groups[g];
    const auto& descriptor = registry.at(dataset);
    std::vector<ParseOutcome> preds;
    for (auto i : members[g]) preds.push_back(parsed[i]);
    Tally tally;
    std::optional<std::string> positive;
    if (is_label_task(task)) {
      std::set<std::string> inventory;
      if (task == TaskKind::CLS) {
        inventory.insert(descriptor.labels.begin(), descriptor.labels.end());
        positive = descriptor.positive_label;
      } else {
        for (auto& t : registry.global_types_of(dataset)) inventory.insert(std::move(t));
      }
      std::vector<ClassLabel> labels;
      for (auto i : members[g]) {
        const auto& label = std::get<ClassLabel>(gold[i].target);
        if (!inventory.count(label.label)) {
          throw ValidationError("gold example '" + gold[i].id + "' has label '" + label.label +
                                "' outside the inventory of " + dataset);
        }
        labels.push_back(label);
      }
      tally = count_classification(labels, preds, inventory, exec);
    } else if (task == TaskKind::REG) {
      std::vector<Score> scores;
      for (auto i : members[g]) scores.push_back(std::get<Score>(gold[i].target));
      tally = count_regression(scores, preds, exec);
    } else {
      std::vector<ExtractionSet> sets;
      for (auto i : members[g]) sets.push_back(std::get<ExtractionSet>(gold[i].target));
      tally = count_extraction(sets, preds, exec);
    }
    auto report = finalize(tally, dataset, task, positive);
    report.run = run;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string_view headline_metric(TaskKind task) noexcept {
  return task == TaskKind::REG ? "exact_match_accuracy" : "weighted_f1";
}

double headline_score(const EvalReport& report) noexcept {
  return report.task == TaskKind::REG ? report.exact_match_accuracy : report.weighted_f1;
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  ojson j;
  j["dataset"] = r.dataset;
  j["task"] = std::string(prefix_for(r.task));
  j["run"] = r.run;
  j["n"] = r.n;
  j["weighted_f1"] = r.weighted_f1;
  j["macro_f1"] = r.macro_f1;
  j["exact_match_accuracy"] = r.exact_match_accuracy;
  j["positive_recall"] = r.positive_recall ? ojson(*r.positive_recall) : ojson(nullptr);
  j["malformed_rate"] = r.malformed_rate;
  ojson labels = ojson::object();
  for (const auto& [label, s] : r.per_label) {
    ojson row;
    row["tp"] = s.counts.tp;
    row["fp"] = s.counts.fp;
    row["fn"] = s.counts.fn;
    row["support"] = s.counts.support();
    row["precision"] = s.precision;
    row["recall"] = s.recall;
    row["f1"] = s.f1;
    labels[label] = std::move(row);
  }
  j["per_label"] = std::move(labels);
  return j;
}

AggregateReport build_report(std::vector<EvalReport> reports) {
  std::unordered_map<std::string, std::size_t> per_dataset;
  for (const auto& r : reports) ++per_dataset[r.dataset];
  std::unordered_map<std::string, std::size_t> seen;
  for (auto& r : reports) {
    const auto ordinal = ++seen[r.dataset];
    if (r.run.empty() && per_dataset[r.dataset] > 1) r.run = "#" + std::to_string(ordinal);
  }

  AggregateReport out;
  out.document["reports"] = ojson::array();
  out.document["summary"] = ojson::array();
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-5s %-12s %-22s %8s %8s\n", "Dataset", "Task", "Run", "Metric", "Score",
                "n");
  table << line;
  for (const auto& r : reports) {
    out.document["reports"].push_back(to_json(r));
    ojson row;
    row["dataset"] = r.dataset;
    row["task"] = std::string(prefix_for(r.task));
    row["run"] = r.run;
    row["metric"] = std::string(headline_metric(r.task));
    row["score"] = headline_score(r);
    out.document["summary"].push_back(std::move(row));
    std::snprintf(line, sizeof line, "%-20s %-5s %-12s %-22s %8s %8zu\n", r.dataset.c_str(),
                  std::string(prefix_for(r.task)).c_str(), r.run.empty() ? "-" : r.run.c_str(),
                  std::string(headline_metric(r.task)).c_str(), percent(headline_score(r)).c_str(), r.n);
    table << line;
  }
  out.summary_table = reports.empty() ? std::string{} : table.str();
  return out;
}

}  // namespace unitext
