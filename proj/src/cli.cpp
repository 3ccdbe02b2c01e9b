#include "unitext/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "unitext/error.hpp"
#include "unitext/eval.hpp"
#include "unitext/fewshot.hpp"
#include "unitext/ingest.hpp"
#include "unitext/records.hpp"
#include "unitext/registry.hpp"
#include "unitext/sim.hpp"

namespace unitext::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string catalog;
  std::string dataset;
  std::string in;
  std::string out;
  std::string gold;
  std::string pred;
  std::string run_label;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::string policy;
  std::optional<double> test_fraction;
  std::optional<std::size_t> train_docs;
  std::optional<std::size_t> test_docs;
  std::optional<double> noise_p;
  std::string noise_ops;
  bool identity = false;
  std::optional<std::size_t> limit;
  std::string derive;
  std::string category;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path manifest_path(const std::string& out) { return fs::path(out + ".manifest.json"); }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  f << text;
}

void write_manifest(const std::string& command, const std::vector<std::string>& args, const Options& o,
                    const std::vector<std::string>& outputs) {
  ojson m;
  m["command"] = command;
  ojson arguments = ojson::object();
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) != 0) continue;
    const bool has_value = i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0;
    arguments[args[i].substr(2)] = has_value ? ojson(args[i + 1]) : ojson(true);
  }
  m["arguments"] = std::move(arguments);
  m["argv"] = args;
  m["catalog"] = o.catalog.empty() ? ojson(nullptr) : ojson(o.catalog);
  m["seed"] = o.seed ? ojson(*o.seed) : ojson(nullptr);
  m["timestamp"] = utc_now();
  m["outputs"] = outputs;
  write_text(manifest_path(o.out), m.dump(2) + "\n");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

void forbid_overwrite(const Options& o, std::initializer_list<const std::string*> inputs) {
  if (o.out.empty()) return;
  const auto out = fs::weakly_canonical(o.out);
  for (const auto* in : inputs) {
    if (!in->empty() && fs::weakly_canonical(*in) == out) {
      throw UsageError("--out would overwrite input '" + *in + "'");
    }
  }
}

std::optional<Registry> load_registry(const Options& o, bool required) {
  if (o.catalog.empty()) {
    require(!required, "--catalog is required");
    return std::nullopt;
  }
  return Registry::load_catalog(o.catalog);
}

void apply_limit(std::vector<UnifiedExample>& v, const Options& o) {
  if (o.limit && v.size() > *o.limit) v.resize(*o.limit);
}

int cmd_convert(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require(!o.dataset.empty() && !o.in.empty() && !o.out.empty(), "convert needs --catalog --dataset --in --out");
  forbid_overwrite(o, {&o.in, &o.catalog});
  const auto registry = *load_registry(o, true);
  const auto& descriptor = registry.at(o.dataset);
  auto loaded = load_dataset(descriptor, o.in);
  auto examples = to_unified(loaded.records, descriptor, registry, &loaded.report);
  apply_limit(examples, o);
  write_unified_file(o.out, examples);
  write_manifest("convert", args, o, {o.out});
  for (const auto& note : loaded.report.notes) err << "note: " << note << '\n';
  out << o.dataset << ": " << loaded.records.size() << " records, " << examples.size() << " examples written, "
      << loaded.report.skipped_records << " skipped, " << loaded.report.repaired_orphan_tags
      << " orphan tags repaired, " << loaded.report.folded_labels << " labels folded\n";
  return kOk;
}

int cmd_split(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream&) {
  require(!o.in.empty() && !o.out.empty(), "split needs --in --out");
  require(o.seed.has_value(), "split needs --seed");
  require(!o.policy.empty(), "split needs --policy");
  SplitSpec spec;
  auto policy = split_policy_from_string(o.policy);
  require(policy.has_value(), "unknown split policy '" + o.policy + "'");
  spec.policy = *policy;
  spec.seed = *o.seed;
  if (o.test_fraction) spec.test_fraction = *o.test_fraction;
  if (o.train_docs) spec.train_docs = *o.train_docs;
  if (o.test_docs) spec.test_docs = *o.test_docs;
  forbid_overwrite(o, {&o.in});
  const auto examples = read_unified_file(o.in);
  const auto [train, test] = split_dataset(examples, spec);
  const auto dir = fs::path(o.out);
  write_unified_file(dir / "train.jsonl", train);
  write_unified_file(dir / "test.jsonl", test);
  write_manifest("split", args, o, {(dir / "train.jsonl").string(), (dir / "test.jsonl").string()});
  out << "train " << train.size() << ", test " << test.size() << '\n';
  return kOk;
}

int cmd_fewshot(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require(!o.in.empty() && !o.out.empty(), "fewshot needs --in --out");
  forbid_overwrite(o, {&o.in, &o.catalog});
  const auto registry = load_registry(o, false);
  auto pool = read_unified_file(o.in);
  if (!o.dataset.empty()) {
    std::erase_if(pool, [&](const UnifiedExample& ex) { return ex.dataset != o.dataset; });
  }
  std::optional<TaskKind> derive;
  if (!o.derive.empty()) {
    derive = task_kind_from_string(o.derive);
    require(derive && (is_untyped_extraction(*derive) || *derive == TaskKind::ET || *derive == TaskKind::EAT),
            "--derive takes EE, ET, EAE or EAT");
  }
  // Typing questions are sampled after derivation (their label is the type);
  // surface-only sets are sampled on the typed source so coverage sees types.
  if (derive && !is_untyped_extraction(*derive)) pool = derive_typing(pool, *derive);

  std::vector<UnifiedExample> result;
  if (o.k) {
    require(o.seed.has_value(), "fewshot needs --seed");
    FewshotSpec spec;
    spec.k = *o.k;
    spec.seed = *o.seed;
    if (!o.policy.empty()) {
      auto policy = fewshot_policy_from_string(o.policy);
      require(policy.has_value(), "unknown few-shot policy '" + o.policy + "'");
      spec.policy = *policy;
    }
    if (!o.category.empty()) {
      spec.category = transfer_category_from_string(o.category);
      require(spec.category.has_value(), "--category takes DKTR, DKTU or DUTR");
    }
    if (spec.policy == FewshotPolicy::BinaryBalance && registry && !o.dataset.empty()) {
      const auto& d = registry->at(o.dataset);
      if (d.task == TaskKind::CLS) spec.classes = d.labels;
    }
    auto sampled = sample_fewshot(pool, spec);
    for (const auto& note : sampled.notes) err << "note: " << note << '\n';
    result = std::move(sampled.examples);
  } else {
    require(derive.has_value(), "fewshot needs --k (or --derive to emit the full derived set)");
    result = std::move(pool);
  }
  if (derive && is_untyped_extraction(*derive)) result = derive_extraction(result, *derive);
  apply_limit(result, o);
  write_unified_file(o.out, result);
  write_manifest("fewshot", args, o, {o.out});
  out << result.size() << " examples written\n";
  return kOk;
}

std::vector<NoiseOp> parse_ops(const std::string& list) {
  std::vector<NoiseOp> ops;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto op = noise_op_from_string(item);
    require(op.has_value(), "unknown noise op '" + item + "'");
    ops.push_back(*op);
  }
  return ops;
}

int cmd_simulate(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream&) {
  require(!o.in.empty() && !o.out.empty(), "simulate needs --in --out");
  require(o.identity != o.noise_p.has_value(), "simulate needs exactly one of --identity or --noise-p");
  forbid_overwrite(o, {&o.in, &o.catalog});
  const auto registry = load_registry(o, false);
  auto gold = read_unified_file(o.in);
  apply_limit(gold, o);
  std::vector<PredictionRecord> preds;
  if (o.identity) {
    preds = generate_identity(gold);
  } else {
    require(o.seed.has_value(), "simulate with noise needs --seed");
    NoiseSpec spec{*o.noise_p, parse_ops(o.noise_ops), *o.seed};
    preds = corrupt(gold, spec, registry ? &*registry : nullptr);
  }
  write_predictions_file(o.out, preds);
  write_manifest("simulate", args, o, {o.out});
  out << preds.size() << " predictions written\n";
  return kOk;
}

int cmd_evaluate(const Options& o, const std::vector<std::string>& args, std::ostream& out, std::ostream&) {
  require(!o.gold.empty() && !o.pred.empty(), "evaluate needs --gold --pred");
  forbid_overwrite(o, {&o.gold, &o.pred, &o.catalog});
  const auto registry = *load_registry(o, true);
  const auto gold = read_unified_file(o.gold);
  const auto preds = read_predictions_file(o.pred);
  auto report = build_report(evaluate(gold, preds, registry, o.run_label));
  out << report.summary_table;
  if (!o.out.empty()) {
    write_text(o.out, report.document.dump(2) + "\n");
    write_text(o.out + ".txt", report.summary_table);
    write_manifest("evaluate", args, o, {o.out, o.out + ".txt"});
  }
  return kOk;
}

std::string describe(const StructuredTarget& t) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ClassLabel>) {
          return "label '" + v.label + "'";
        } else if constexpr (std::is_same_v<T, Score>) {
          return v.valid() ? "score " + v.render() : std::string("score <unparseable>");
        } else {
          if (v.items.empty()) return "empty set";
          std::string s = std::to_string(v.items.size()) + " item(s):";
          for (const auto& item : v.items) {
            s += "\n      [" + item.surface + "]";
            if (!item.untyped()) s += " : " + item.type;
          }
          return s;
        }
      },
      t);
}

int cmd_inspect(const Options& o, std::ostream& out) {
  require(!o.in.empty(), "inspect needs --in");
  const auto registry = load_registry(o, false);
  auto examples = read_unified_file(o.in);
  const std::size_t limit = o.limit.value_or(5);
  for (std::size_t i = 0; i < examples.size() && i < limit; ++i) {
    const auto& ex = examples[i];
    const auto parsed = parse_output(ex.target_text, ex.task, registry ? &*registry : nullptr);
    out << ex.id << "  [" << ex.dataset << " / " << prefix_for(ex.task) << "]\n"
        << "  input : " << ex.input_text << "\n"
        << "  target: " << ex.target_text << "\n"
        << "  parsed: " << describe(parsed.target) << "\n";
    for (const auto& d : parsed.diagnostics) out << "  note  : " << d << "\n";
  }
  out << std::min(limit, examples.size()) << " of " << examples.size() << " examples shown\n";
  return kOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
  require(!o.in.empty(), "replay needs --in <manifest>");
  std::ifstream f(o.in);
  if (!f) throw ValidationError("cannot open manifest '" + o.in + "'");
  ojson m;
  try {
    m = ojson::parse(f);
  } catch (const ojson::parse_error&) {
    throw ValidationError("manifest '" + o.in + "' is not valid JSON");
  }
  const auto argv = m.at("argv").get<std::vector<std::string>>();
  if (argv.empty() || argv.front() == "replay") throw ValidationError("manifest holds no replayable command");
  return dispatch(argv, out, err);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unified text-to-text dataset and evaluation harness", "unitext"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--catalog", o.catalog, "dataset catalog (JSON)");
    sub->add_option("--dataset", o.dataset, "dataset id");
    sub->add_option("--in", o.in, "input file");
    sub->add_option("--out", o.out, "output file or directory");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--limit", o.limit, "maximum number of examples");
  };
  auto* convert = app.add_subcommand("convert", "raw corpus -> unified line format");
  common(convert);
  auto* split = app.add_subcommand("split", "unified file -> train/test files");
  common(split);
  split->add_option("--policy", o.policy, "random-fraction | document-level | half-half");
  split->add_option("--test", o.test_fraction, "test fraction for random-fraction");
  split->add_option("--train-docs", o.train_docs, "training documents for document-level");
  split->add_option("--test-docs", o.test_docs, "test documents for document-level");
  auto* fewshot = app.add_subcommand("fewshot", "derive transfer tasks and draw FS-k sets");
  common(fewshot);
  fewshot->add_option("--k", o.k, "few-shot size");
  fewshot->add_option("--policy", o.policy, "per-type-coverage | binary-balance");
  fewshot->add_option("--derive", o.derive, "EE | ET | EAE | EAT");
  fewshot->add_option("--category", o.category, "DKTR | DKTU | DUTR");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score predictions against gold");
  common(evaluate_cmd);
  evaluate_cmd->add_option("--gold", o.gold, "gold unified file");
  evaluate_cmd->add_option("--pred", o.pred, "predictions file");
  evaluate_cmd->add_option("--run", o.run_label, "run label for the report");
  auto* simulate = app.add_subcommand("simulate", "emit oracle predictions");
  common(simulate);
  simulate->add_flag("--identity", o.identity, "emit gold targets verbatim");
  simulate->add_option("--noise-p", o.noise_p, "perturbation probability");
  simulate->add_option("--noise-ops", o.noise_ops,
                       "comma list of drop-item,split-item,swap-type,strip-char,truncate,garbage");
  auto* inspect = app.add_subcommand("inspect", "print examples with parsed targets");
  common(inspect);
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  common(replay);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  if (convert->parsed()) return cmd_convert(o, args, out, err);
  if (split->parsed()) return cmd_split(o, args, out, err);
  if (fewshot->parsed()) return cmd_fewshot(o, args, out, err);
  if (evaluate_cmd->parsed()) return cmd_evaluate(o, args, out, err);
  if (simulate->parsed()) return cmd_simulate(o, args, out, err);
  if (inspect->parsed()) return cmd_inspect(o, out);
  if (replay->parsed()) return cmd_replay(o, out, err);
  return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const SerializationError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace unitext::cli
