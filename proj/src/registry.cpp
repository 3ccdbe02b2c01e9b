#include "unitext/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "unitext/error.hpp"

namespace unitext {

namespace {

using nlohmann::json;

std::string pair_key(std::string_view dataset, std::string_view local) {
  std::string key;
  key.reserve(dataset.size() + local.size() + 1);
  key.append(dataset).push_back('\x1f');
  key.append(local);
  return key;
}

bool has_reserved_delimiter(std::string_view s) {
  return s.find(" * ") != std::string_view::npos || s.find(" | ") != std::string_view::npos;
}

void validate_descriptor(const DatasetDescriptor& d) {
  if (d.id.empty()) throw ValidationError("dataset descriptor with empty id");
  if (d.task == TaskKind::REG) {
    if (!d.labels.empty()) {
      throw ValidationError("dataset '" + d.id + "': regression datasets take no label inventory");
    }
  } else if (d.labels.empty()) {
    throw ValidationError("dataset '" + d.id + "': empty label inventory for a labeled task");
  }
  std::set<std::string_view> seen;
  for (const auto& label : d.labels) {
    if (label.empty()) throw ValidationError("dataset '" + d.id + "': empty label in inventory");
    if (label.find('\n') != std::string::npos) {
      throw ValidationError("dataset '" + d.id + "': label contains a newline");
    }
    if (is_extraction(d.task) && has_reserved_delimiter(label)) {
      throw ValidationError("dataset '" + d.id + "': type '" + label + "' contains a reserved delimiter");
    }
    if (!seen.insert(label).second) {
      throw ValidationError("dataset '" + d.id + "': duplicate label '" + label + "'");
    }
  }
  if (d.positive_label &&
      std::find(d.labels.begin(), d.labels.end(), *d.positive_label) == d.labels.end()) {
    throw ValidationError("dataset '" + d.id + "': positive label '" + *d.positive_label +
                          "' is not in the inventory");
  }
  d.split.validate();
}

SplitSpec split_from_json(const json& j) {
  SplitSpec s;
  const auto name = j.value("policy", std::string{"random-fraction"});
  auto policy = split_policy_from_string(name);
  if (!policy) throw ValidationError("unknown split policy '" + name + "'");
  s.policy = *policy;
  s.test_fraction = j.value("test_fraction", 0.2);
  s.train_docs = j.value("train_docs", std::size_t{0});
  s.test_docs = j.value("test_docs", std::size_t{0});
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

LoaderOptions loader_from_json(const json& j) {
  LoaderOptions o;
  if (auto it = j.find("delimiter"); it != j.end()) {
    const auto d = it->get<std::string>();
    if (d.size() != 1) throw ValidationError("loader delimiter must be a single character");
    o.delimiter = d[0];
  }
  o.text_column = j.value("text_column", o.text_column);
  o.label_column = j.value("label_column", o.label_column);
  o.doc_column = j.value("doc_column", std::string{});
  o.e1_column = j.value("e1_column", std::string{});
  o.e2_column = j.value("e2_column", std::string{});
  const auto view = j.value("event_view", std::string{"nuggets"});
  if (view == "nuggets") o.event_view = EventView::Nuggets;
  else if (view == "arguments") o.event_view = EventView::Arguments;
  else if (view == "roles") o.event_view = EventView::Roles;
  else throw ValidationError("unknown event_view '" + view + "'");
  if (auto it = j.find("label_folding"); it != j.end()) {
    o.label_folding = it->get<std::map<std::string, std::string>>();
  }
  return o;
}

DatasetDescriptor descriptor_from_json(const json& j) {
  DatasetDescriptor d;
  d.id = j.at("id").get<std::string>();
  const auto task = j.at("task").get<std::string>();
  auto kind = task_kind_from_string(task);
  if (!kind) throw ValidationError("dataset '" + d.id + "': unknown task '" + task + "'");
  d.task = *kind;
  d.sub_task = j.value("sub_task", std::string{});
  d.labels = j.value("labels", std::vector<std::string>{});
  if (auto it = j.find("split"); it != j.end()) d.split = split_from_json(*it);
  const auto fmt = j.at("source_format").get<std::string>();
  auto source = source_format_from_string(fmt);
  if (!source) throw ValidationError("dataset '" + d.id + "': unknown source_format '" + fmt + "'");
  d.source_format = *source;
  if (auto it = j.find("loader"); it != j.end()) d.loader = loader_from_json(*it);
  if (auto it = j.find("positive_label"); it != j.end() && !it->is_null()) {
    d.positive_label = it->get<std::string>();
  }
  d.unified = j.value("unified", true);
  return d;
}

}  // namespace

void SplitSpec::validate() const {
  switch (policy) {
    case SplitPolicy::RandomFraction:
      if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ValidationError("random-fraction split needs test_fraction in (0,1)");
      }
      break;
    case SplitPolicy::DocumentLevel:
      if (train_docs == 0 || test_docs == 0) {
        throw ValidationError("document-level split needs positive train_docs and test_docs");
      }
      break;
    case SplitPolicy::HalfHalf:
      break;
  }
}

std::string_view to_string(SplitPolicy p) noexcept {
  switch (p) {
    case SplitPolicy::RandomFraction: return "random-fraction";
    case SplitPolicy::DocumentLevel: return "document-level";
    case SplitPolicy::HalfHalf: return "half-half";
  }
  return "random-fraction";
}

std::optional<SplitPolicy> split_policy_from_string(std::string_view s) noexcept {
  if (s == "random-fraction") return SplitPolicy::RandomFraction;
  if (s == "document-level") return SplitPolicy::DocumentLevel;
  if (s == "half-half") return SplitPolicy::HalfHalf;
  return std::nullopt;
}

std::string_view to_string(SourceFormat f) noexcept {
  switch (f) {
    case SourceFormat::TokenTagged: return "token-tagged";
    case SourceFormat::LabeledTable: return "labeled-table";
    case SourceFormat::EventAnnotated: return "event-annotated";
    case SourceFormat::ScoredDescription: return "scored-description";
  }
  return "labeled-table";
}

std::optional<SourceFormat> source_format_from_string(std::string_view s) noexcept {
  if (s == "token-tagged") return SourceFormat::TokenTagged;
  if (s == "labeled-table") return SourceFormat::LabeledTable;
  if (s == "event-annotated") return SourceFormat::EventAnnotated;
  if (s == "scored-description") return SourceFormat::ScoredDescription;
  return std::nullopt;
}

Registry Registry::build(std::vector<DatasetDescriptor> descriptors, std::vector<TypeAlias> aliases) {
  Registry r;
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    validate_descriptor(descriptors[i]);
    if (!r.index_.emplace(descriptors[i].id, i).second) {
      throw ValidationError("duplicate dataset id '" + descriptors[i].id + "'");
    }
  }
  r.descriptors_ = std::move(descriptors);

  // alias membership: pair key -> alias group index
  std::unordered_map<std::string, std::size_t> alias_of;
  for (std::size_t g = 0; g < aliases.size(); ++g) {
    const auto& group = aliases[g];
    if (group.global.empty() || has_reserved_delimiter(group.global)) {
      throw ValidationError("type alias with an empty or delimiter-bearing global name");
    }
    for (const auto& [dataset, local] : group.members) {
      const auto* d = r.find(dataset);
      if (d == nullptr || std::find(d->labels.begin(), d->labels.end(), local) == d->labels.end()) {
        throw ValidationError("type alias '" + group.global + "' names unregistered pair (" +
                              dataset + ", " + local + ")");
      }
      if (!alias_of.emplace(pair_key(dataset, local), g).second) {
        throw ValidationError("pair (" + dataset + ", " + local + ") belongs to two alias groups");
      }
    }
  }

  // Owners of a local string: each alias group counts once, each other dataset once.
  std::unordered_map<std::string, std::set<std::string>> owners;
  for (const auto& d : r.descriptors_) {
    for (const auto& local : d.labels) {
      auto it = alias_of.find(pair_key(d.id, local));
      owners[local].insert(it != alias_of.end() ? "\x1e" + std::to_string(it->second) : d.id);
    }
  }

  // global name -> owning identity, for the no-duplicate check
  std::unordered_map<std::string, std::string> claimed;
  for (const auto& d : r.descriptors_) {
    for (const auto& local : d.labels) {
      const auto key = pair_key(d.id, local);
      std::string global;
      std::string owner;
      if (auto it = alias_of.find(key); it != alias_of.end()) {
        global = aliases[it->second].global;
        owner = "\x1e" + std::to_string(it->second);
      } else {
        global = owners[local].size() == 1 ? local : d.id + ":" + local;
        owner = key;
      }
      auto [pos, inserted] = claimed.emplace(global, owner);
      if (!inserted && pos->second != owner) {
        throw ValidationError("global type '" + global + "' is produced by two distinct pairs");
      }
      ++r.global_types_[global];
      r.type_map_.emplace(key, std::move(global));
    }
  }
  return r;
}

Registry Registry::load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open catalog '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_catalog_text(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

Registry Registry::from_catalog_text(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("catalog is not valid JSON: ") + e.what());
  }
  try {
    std::vector<DatasetDescriptor> descriptors;
    for (const auto& entry : doc.at("datasets")) descriptors.push_back(descriptor_from_json(entry));
    std::vector<TypeAlias> aliases;
    if (auto it = doc.find("type_aliases"); it != doc.end()) {
      for (const auto& a : *it) {
        TypeAlias alias;
        alias.global = a.at("global").get<std::string>();
        for (const auto& m : a.at("members")) {
          alias.members.emplace_back(m.at("dataset").get<std::string>(), m.at("type").get<std::string>());
        }
        aliases.push_back(std::move(alias));
      }
    }
    return build(std::move(descriptors), std::move(aliases));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed catalog: ") + e.what());
  }
}

const DatasetDescriptor* Registry::find(std::string_view id) const noexcept {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &descriptors_[it->second];
}

const DatasetDescriptor& Registry::at(std::string_view id) const {
  if (const auto* d = find(id)) return *d;
  throw LookupError("unknown dataset '" + std::string(id) + "'");
}

std::vector<const DatasetDescriptor*> Registry::by_task(TaskKind kind) const {
  std::vector<const DatasetDescriptor*> out;
  for (const auto& d : descriptors_) {
    if (d.task == kind) out.push_back(&d);
  }
  return out;
}

const std::string& Registry::resolve_type(std::string_view dataset, std::string_view local_type) const {
  auto it = type_map_.find(pair_key(dataset, local_type));
  if (it == type_map_.end()) {
    throw LookupError("type '" + std::string(local_type) + "' is not registered for dataset '" +
                      std::string(dataset) + "'");
  }
  return it->second;
}

std::vector<std::string> Registry::global_types_of(std::string_view dataset) const {
  const auto& d = at(dataset);
  std::vector<std::string> out;
  out.reserve(d.labels.size());
  for (const auto& local : d.labels) out.push_back(resolve_type(d.id, local));
  return out;
}

bool Registry::is_global_type(std::string_view global) const {
  return global_types_.find(std::string(global)) != global_types_.end();
}

}  // namespace unitext
