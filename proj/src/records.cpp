#include "unitext/records.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "unitext/error.hpp"

namespace unitext {

namespace {

using ojson = nlohmann::ordered_json;

std::string at_line(std::size_t line_no) {
  return line_no == 0 ? std::string{} : "line " + std::to_string(line_no) + ": ";
}

std::string required_string(const ojson& j, const char* key, std::size_t line_no) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ValidationError(at_line(line_no) + "missing or non-string field '" + key + "'");
  }
  return it->get<std::string>();
}

ojson parse_object(std::string_view line, std::size_t line_no) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const ojson::parse_error&) {
    throw ValidationError(at_line(line_no) + "not a JSON object");
  }
  if (!j.is_object()) throw ValidationError(at_line(line_no) + "not a JSON object");
  return j;
}

template <class F>
void for_each_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    f(line, line_no);
  }
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string_view to_string(TransferCategory c) noexcept {
  switch (c) {
    case TransferCategory::DKTR: return "DKTR";
    case TransferCategory::DKTU: return "DKTU";
    case TransferCategory::DUTR: return "DUTR";
  }
  return "DKTR";
}

std::optional<TransferCategory> transfer_category_from_string(std::string_view s) noexcept {
  if (s == "DKTR") return TransferCategory::DKTR;
  if (s == "DKTU") return TransferCategory::DKTU;
  if (s == "DUTR") return TransferCategory::DUTR;
  return std::nullopt;
}

UnifiedExample UnifiedExample::make(std::string id, std::string dataset, TaskKind task, std::string_view text,
                                    StructuredTarget target, std::string doc) {
  UnifiedExample ex;
  ex.id = std::move(id);
  ex.dataset = std::move(dataset);
  ex.task = task;
  ex.input_text = format_input(task, text);
  ex.target_text = serialize_target(target);
  ex.target = std::move(target);
  ex.doc = std::move(doc);
  return ex;
}

std::string to_json_line(const UnifiedExample& ex) {
  ojson j;
  j["id"] = ex.id;
  j["dataset"] = ex.dataset;
  j["task"] = std::string(prefix_for(ex.task));
  j["input"] = ex.input_text;
  j["target"] = ex.target_text;
  if (!ex.doc.empty()) j["doc"] = ex.doc;
  if (ex.meta) {
    ojson m;
    m["transfer_category"] =
        ex.meta->transfer_category ? ojson(std::string(to_string(*ex.meta->transfer_category))) : ojson(nullptr);
    m["k"] = ex.meta->k;
    m["seed"] = ex.meta->seed;
    j["meta"] = std::move(m);
  }
  return j.dump();
}

std::string to_json_line(const PredictionRecord& rec) {
  ojson j;
  j["id"] = rec.id;
  j["output"] = rec.output_text;
  return j.dump();
}

UnifiedExample unified_from_json_line(std::string_view line, std::size_t line_no) {
  const auto j = parse_object(line, line_no);
  UnifiedExample ex;
  ex.id = required_string(j, "id", line_no);
  ex.dataset = required_string(j, "dataset", line_no);
  const auto task = required_string(j, "task", line_no);
  auto kind = task_kind_from_string(task);
  if (!kind) throw ValidationError(at_line(line_no) + "unknown task '" + task + "'");
  ex.task = *kind;
  ex.input_text = required_string(j, "input", line_no);
  ex.target_text = required_string(j, "target", line_no);
  if (ex.id.empty()) throw ValidationError(at_line(line_no) + "empty id");
  const auto prefix = std::string(prefix_for(ex.task)) + " : ";
  if (ex.input_text.rfind(prefix, 0) != 0) {
    throw ValidationError(at_line(line_no) + "input does not start with '" + prefix + "'");
  }
  auto parsed = parse_output(ex.target_text, ex.task);
  if (parsed.malformed) {
    throw ValidationError(at_line(line_no) + "target does not parse for task " + task + ": " +
                          parsed.diagnostics.front());
  }
  ex.target = std::move(parsed.target);
  if (auto it = j.find("doc"); it != j.end() && it->is_string()) ex.doc = it->get<std::string>();
  if (auto it = j.find("meta"); it != j.end() && it->is_object()) {
    FewshotMeta meta;
    try {
      if (auto c = it->find("transfer_category"); c != it->end() && c->is_string()) {
        meta.transfer_category = transfer_category_from_string(c->get<std::string>());
        if (!meta.transfer_category) throw ValidationError(at_line(line_no) + "unknown transfer_category");
      }
      meta.k = it->value("k", std::size_t{0});
      meta.seed = it->value("seed", std::uint64_t{0});
    } catch (const ojson::exception&) {
      throw ValidationError(at_line(line_no) + "malformed meta field");
    }
    ex.meta = meta;
  }
  return ex;
}

PredictionRecord prediction_from_json_line(std::string_view line, std::size_t line_no) {
  const auto j = parse_object(line, line_no);
  PredictionRecord rec;
  rec.id = required_string(j, "id", line_no);
  rec.output_text = required_string(j, "output", line_no);
  if (rec.id.empty()) throw ValidationError(at_line(line_no) + "empty id");
  return rec;
}

void write_unified(std::ostream& out, const std::vector<UnifiedExample>& examples) {
  for (const auto& ex : examples) out << to_json_line(ex) << '\n';
}

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& records) {
  for (const auto& r : records) out << to_json_line(r) << '\n';
}

std::vector<UnifiedExample> read_unified(std::istream& in) {
  std::vector<UnifiedExample> out;
  for_each_line(in, [&](const std::string& line, std::size_t n) { out.push_back(unified_from_json_line(line, n)); });
  return out;
}

std::vector<PredictionRecord> read_predictions(std::istream& in) {
  std::vector<PredictionRecord> out;
  for_each_line(in, [&](const std::string& line, std::size_t n) {
    out.push_back(prediction_from_json_line(line, n));
  });
  return out;
}

std::vector<UnifiedExample> read_unified_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_unified(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<PredictionRecord> read_predictions_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_predictions(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_unified_file(const std::filesystem::path& path, const std::vector<UnifiedExample>& examples) {
  auto out = open_out(path);
  write_unified(out, examples);
}

void write_predictions_file(const std::filesystem::path& path, const std::vector<PredictionRecord>& records) {
  auto out = open_out(path);
  write_predictions(out, records);
}

}  // namespace unitext
