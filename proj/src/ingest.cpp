#include "unitext/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "unitext/error.hpp"
#include "unitext/rng.hpp"

namespace unitext {

namespace {

using nlohmann::json;

std::string line_ref(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string join_inventory(const std::vector<std::string>& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += ", ";
    out += labels[i];
  }
  return out + "}";
}

class InventoryCheck {
 public:
  explicit InventoryCheck(const DatasetDescriptor& d) : d_(d), known_(d.labels.begin(), d.labels.end()) {}

  void require(const std::string& label, std::size_t line) const {
    if (!known_.count(label)) {
      throw ValidationError(line_ref(line) + "label '" + label + "' is not in the inventory of " + d_.id + " " +
                            join_inventory(d_.labels));
    }
  }

  std::string fold(const std::string& raw, LoadReport& report) const {
    auto it = d_.loader.label_folding.find(raw);
    if (it == d_.loader.label_folding.end()) return raw;
    ++report.folded_labels;
    return it->second;
  }

 private:
  const DatasetDescriptor& d_;
  std::unordered_set<std::string> known_;
};

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto pos = content.find('\n', start);
    if (pos == std::string_view::npos) {
      if (start < content.size()) lines.push_back(content.substr(start));
      break;
    }
    auto line = content.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = pos + 1;
  }
  return lines;
}

// Delimiter-separated fields with optional double-quote quoting ("" escapes a quote).
std::vector<std::string> split_row(std::string_view row, char delim, std::size_t line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool at_start = true;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const char c = row[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < row.size() && row[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
      continue;
    }
    if (c == '"' && at_start) {
      quoted = true;
      at_start = false;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
      at_start = true;
    } else {
      cur.push_back(c);
      at_start = false;
    }
  }
  if (quoted) throw ValidationError(line_ref(line) + "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

void check_task(const DatasetDescriptor& d, std::initializer_list<TaskKind> allowed) {
  if (std::find(allowed.begin(), allowed.end(), d.task) == allowed.end()) {
    throw ValidationError("dataset '" + d.id + "': source format " + std::string(to_string(d.source_format)) +
                          " cannot feed task " + std::string(prefix_for(d.task)));
  }
}

LoadResult load_token_tagged(const DatasetDescriptor& d, std::string_view content) {
  check_task(d, {TaskKind::NER, TaskKind::EVNT});
  LoadResult result;
  InventoryCheck inventory(d);
  std::vector<TaggedToken> sentence;
  std::size_t first_line = 0;
  std::string doc;

  const auto flush = [&] {
    if (sentence.empty()) return;
    RawRecord rec;
    rec.line = first_line;
    rec.doc = doc;
    for (const auto& t : sentence) {
      if (!rec.text.empty()) rec.text.push_back(' ');
      rec.text += t.token;
    }
    rec.items = decode_tagged_tokens(sentence, &result.report).items;
    for (const auto& item : rec.items) inventory.require(item.type, first_line);
    result.records.push_back(std::move(rec));
    sentence.clear();
  };

  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto line = trim(lines[i]);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.rfind("-DOCSTART-", 0) == 0) {
      flush();
      doc = std::string(trim(line.substr(10)));
      continue;
    }
    const auto cut = line.find_last_of(" \t");
    if (cut == std::string_view::npos) {
      throw ValidationError(line_ref(line_no) + "expected '<token> <tag>'");
    }
    TaggedToken tok{std::string(trim(line.substr(0, cut))), std::string(line.substr(cut + 1))};
    if (tok.token.find_first_of(" \t") != std::string::npos) {
      throw ValidationError(line_ref(line_no) + "expected exactly two fields");
    }
    if (sentence.empty()) first_line = line_no;
    sentence.push_back(std::move(tok));
  }
  flush();
  return result;
}

LoadResult load_labeled_table(const DatasetDescriptor& d, std::string_view content) {
  check_task(d, {TaskKind::CLS});
  LoadResult result;
  InventoryCheck inventory(d);
  const auto& opt = d.loader;
  const auto lines = split_lines(content);
  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw ValidationError("table has no header row");
  const auto header = split_row(lines[header_line], opt.delimiter, header_line + 1);

  const auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
    if (name.empty()) return -1;
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) throw ValidationError(line_ref(header_line + 1) + "missing column '" + name + "'");
      return -1;
    }
    return it - header.begin();
  };
  const auto text_col = column(opt.text_column, true);
  const auto label_col = column(opt.label_column, true);
  const auto doc_col = column(opt.doc_column, true);
  const auto e1_col = column(opt.e1_column, true);
  const auto e2_col = column(opt.e2_column, true);
  if ((e1_col < 0) != (e2_col < 0)) {
    throw ValidationError("dataset '" + d.id + "': e1_column and e2_column must be declared together");
  }

  for (std::size_t i = header_line + 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    auto fields = split_row(lines[i], opt.delimiter, line_no);
    if (fields.size() != header.size()) {
      throw ValidationError(line_ref(line_no) + "expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()));
    }
    RawRecord rec;
    rec.line = line_no;
    rec.text = std::move(fields[text_col]);
    rec.label = inventory.fold(std::string(trim(fields[label_col])), result.report);
    inventory.require(rec.label, line_no);
    if (doc_col >= 0) rec.doc = std::move(fields[doc_col]);
    if (e1_col >= 0) {
      rec.e1 = std::move(fields[e1_col]);
      rec.e2 = std::move(fields[e2_col]);
    }
    if (trim(rec.text).empty()) throw ValidationError(line_ref(line_no) + "empty text field");
    result.records.push_back(std::move(rec));
  }
  return result;
}

template <class F>
void for_each_json_line(std::string_view content, F&& f) {
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error&) {
      throw ValidationError(line_ref(i + 1) + "not a JSON object");
    }
    if (!j.is_object()) throw ValidationError(line_ref(i + 1) + "not a JSON object");
    try {
      f(j, i + 1);
    } catch (const json::exception& e) {
      throw ValidationError(line_ref(i + 1) + "malformed record: " + e.what());
    }
  }
}

std::string doc_of(const json& j) {
  auto it = j.find("doc");
  if (it == j.end() || it->is_null()) return {};
  return it->is_string() ? it->get<std::string>() : it->dump();
}

LoadResult load_event_annotated(const DatasetDescriptor& d, std::string_view content) {
  const auto view = d.loader.event_view;
  if (view == EventView::Roles) check_task(d, {TaskKind::CLS});
  else check_task(d, {TaskKind::EVNT, TaskKind::NER});
  LoadResult result;
  InventoryCheck inventory(d);
  for_each_json_line(content, [&](const json& j, std::size_t line_no) {
    const auto text = j.at("text").get<std::string>();
    if (trim(text).empty()) throw ValidationError(line_ref(line_no) + "empty text field");
    const auto doc = doc_of(j);
    if (view == EventView::Roles) {
      for (const auto& role : j.value("roles", json::array())) {
        RawRecord rec;
        rec.line = line_no;
        rec.text = text;
        rec.doc = doc;
        rec.e1 = role.at("nugget").get<std::string>();
        rec.e2 = role.at("argument").get<std::string>();
        rec.label = inventory.fold(role.at("role").get<std::string>(), result.report);
        inventory.require(rec.label, line_no);
        result.records.push_back(std::move(rec));
      }
      return;
    }
    RawRecord rec;
    rec.line = line_no;
    rec.text = text;
    rec.doc = doc;
    const char* layer = view == EventView::Nuggets ? "nuggets" : "arguments";
    for (const auto& a : j.value(layer, json::array())) {
      ExtractionItem item{a.at("surface").get<std::string>(), a.at("type").get<std::string>()};
      inventory.require(item.type, line_no);
      if (trim(item.surface).empty()) throw ValidationError(line_ref(line_no) + "empty surface");
      rec.items.push_back(std::move(item));
    }
    result.records.push_back(std::move(rec));
  });
  return result;
}

LoadResult load_scored(const DatasetDescriptor& d, std::string_view content) {
  check_task(d, {TaskKind::REG});
  LoadResult result;
  for_each_json_line(content, [&](const json& j, std::size_t line_no) {
    RawRecord rec;
    rec.line = line_no;
    rec.text = j.at("text").get<std::string>();
    if (trim(rec.text).empty()) throw ValidationError(line_ref(line_no) + "empty text field");
    rec.doc = doc_of(j);
    const auto& s = j.at("score");
    if (!s.is_number()) throw ValidationError(line_ref(line_no) + "score is not a number");
    try {
      rec.score = Score::from_value(s.get<double>());
    } catch (const ValidationError& e) {
      throw ValidationError(line_ref(line_no) + e.what());
    }
    result.records.push_back(std::move(rec));
  });
  return result;
}

}  // namespace

ExtractionSet decode_tagged_tokens(std::span<const TaggedToken> tokens, LoadReport* report,
                                   std::string_view outside_tag) {
  const bool bio = std::any_of(tokens.begin(), tokens.end(), [](const TaggedToken& t) {
    return t.tag.rfind("B-", 0) == 0 || t.tag.rfind("I-", 0) == 0;
  });
  ExtractionSet out;
  bool open = false;
  for (const auto& t : tokens) {
    if (t.tag == outside_tag) {
      open = false;
      continue;
    }
    std::string_view type = t.tag;
    bool begins = false;
    if (bio && (type.rfind("B-", 0) == 0 || type.rfind("I-", 0) == 0)) {
      begins = type[0] == 'B';
      type.remove_prefix(2);
      if (!begins && !(open && out.items.back().type == type)) {
        begins = true;
        if (report != nullptr) ++report->repaired_orphan_tags;
      }
    } else {
      begins = !(open && out.items.back().type == type);
    }
    if (begins) {
      out.items.push_back({t.token, std::string(type)});
      open = true;
    } else {
      out.items.back().surface += ' ';
      out.items.back().surface += t.token;
    }
  }
  return out;
}

LoadResult load_dataset_text(const DatasetDescriptor& descriptor, std::string_view content) {
  switch (descriptor.source_format) {
    case SourceFormat::TokenTagged: return load_token_tagged(descriptor, content);
    case SourceFormat::LabeledTable: return load_labeled_table(descriptor, content);
    case SourceFormat::EventAnnotated: return load_event_annotated(descriptor, content);
    case SourceFormat::ScoredDescription: return load_scored(descriptor, content);
  }
  throw ValidationError("unsupported source format");
}

LoadResult load_dataset(const DatasetDescriptor& descriptor, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return load_dataset_text(descriptor, buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

SplitIndices split_indices(std::size_t n, std::span<const std::string> docs, const SplitSpec& spec) {
  spec.validate();
  if (n == 0) throw ValidationError("cannot split an empty dataset");
  Rng rng(spec.seed);
  SplitIndices out;

  if (spec.policy == SplitPolicy::DocumentLevel) {
    if (docs.size() != n) throw ValidationError("document-level split needs one document id per record");
    std::vector<std::string> order;
    std::unordered_map<std::string, bool> is_test;
    for (const auto& doc : docs) {
      if (doc.empty()) throw ValidationError("document-level split: record without a document id");
      if (is_test.emplace(doc, false).second) order.push_back(doc);
    }
    if (order.size() != spec.train_docs + spec.test_docs) {
      throw ValidationError("document-level split wants " + std::to_string(spec.train_docs) + "+" +
                            std::to_string(spec.test_docs) + " documents, found " + std::to_string(order.size()));
    }
    rng.shuffle(std::span<std::string>(order));
    for (std::size_t i = 0; i < spec.test_docs; ++i) is_test[order[i]] = true;
    for (std::size_t i = 0; i < n; ++i) (is_test[docs[i]] ? out.test : out.train).push_back(i);
    return out;
  }

  std::size_t n_test = 0;
  if (spec.policy == SplitPolicy::RandomFraction) {
    // ceil, with slack for products such as 100 * 0.2 = 20.000000000000004
    n_test = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * spec.test_fraction - 1e-9));
    n_test = std::min(n_test, n);
  } else {
    n_test = n / 2;
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(std::span<std::size_t>(perm));
  out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

std::string example_id(std::string_view dataset, std::size_t ordinal) {
  auto digits = std::to_string(ordinal);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  std::string id(dataset);
  id.push_back('-');
  return id + digits;
}

std::vector<UnifiedExample> to_unified(const std::vector<RawRecord>& records, const DatasetDescriptor& descriptor,
                                       const Registry& registry, LoadReport* report) {
  if (!is_label_task(descriptor.task) && !is_typed_extraction(descriptor.task) && descriptor.task != TaskKind::REG) {
    throw ValidationError("dataset '" + descriptor.id + "': task " + std::string(prefix_for(descriptor.task)) +
                          " is derived, not converted from raw data");
  }
  std::vector<UnifiedExample> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    try {
      std::string text = rec.text;
      StructuredTarget target;
      switch (descriptor.task) {
        case TaskKind::REG:
          target = rec.score;
          break;
        case TaskKind::NER:
        case TaskKind::EVNT: {
          ExtractionSet set;
          for (const auto& item : rec.items) {
            set.items.push_back({item.surface, registry.resolve_type(descriptor.id, item.type)});
          }
          target = std::move(set);
          break;
        }
        default:
          if (!rec.e1.empty() || !rec.e2.empty()) {
            text = std::string(trim(rec.e1)) + " | " + std::string(trim(rec.e2)) + " | " + std::string(trim(text));
          }
          target = ClassLabel{rec.label};
          break;
      }
      out.push_back(UnifiedExample::make(example_id(descriptor.id, i + 1), descriptor.id, descriptor.task, text,
                                         std::move(target), rec.doc));
    } catch (const Error& e) {
      if (report == nullptr) continue;
      ++report->skipped_records;
      report->notes.push_back(line_ref(rec.line) + "skipped: " + e.what());
    }
  }
  return out;
}

}  // namespace unitext
