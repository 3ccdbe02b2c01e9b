#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "support.hpp"
#include "unitext/cli.hpp"
#include "unitext/records.hpp"

using namespace unitext;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

const std::string kCatalog = testsupport::catalog_path().string();

std::string fixture(const char* kind) { return testsupport::unified_fixture(kind).string(); }

}  // namespace

TEST_CASE("identity simulation evaluates to 1.0") {
  testsupport::ScratchDir dir("cli-identity");
  const auto pred = (dir / "pred.jsonl").string();
  const auto report = (dir / "report.json").string();
  REQUIRE(run({"simulate", "--in", fixture("ner"), "--out", pred, "--identity"}).status == 0);
  const auto r = run({"evaluate", "--catalog", kCatalog, "--gold", fixture("ner"), "--pred", pred, "--out", report});
  REQUIRE(r.status == 0);
  CHECK(r.out.find("100.00") != std::string::npos);
  const auto doc = nlohmann::json::parse(testsupport::slurp(report));
  CHECK(doc["reports"][0]["weighted_f1"] == 1.0);
  CHECK(doc["summary"][0]["dataset"] == "SAL");
  CHECK(testsupport::slurp(report + ".txt") == r.out);
  CHECK(fs::exists(report + ".manifest.json"));
}

TEST_CASE("convert writes the unified file") {
  testsupport::ScratchDir dir("cli-convert");
  const auto out = (dir / "sms.jsonl").string();
  const auto r = run({"convert", "--catalog", kCatalog, "--dataset", "SMS-SPAM", "--in",
                      testsupport::raw_fixture("sms_spam.tsv").string(), "--out", out, "--limit", "10"});
  REQUIRE(r.status == 0);
  const auto examples = read_unified_file(out);
  REQUIRE(examples.size() == 10);
  CHECK(examples[0].input_text == "CLS : win a prize now");
  CHECK(examples[0].target_text == "spam");
}

TEST_CASE("split writes an 80/20 partition") {
  testsupport::ScratchDir dir("cli-split");
  const auto r = run({"split", "--in", fixture("cls"), "--out", dir.path().string(), "--policy", "random-fraction",
                      "--test", "0.2", "--seed", "7"});
  REQUIRE(r.status == 0);
  CHECK(read_unified_file(dir / "train.jsonl").size() == 80);
  CHECK(read_unified_file(dir / "test.jsonl").size() == 20);
  CHECK(run({"split", "--in", fixture("cls"), "--out", dir.path().string(), "--policy", "random-fraction"}).status ==
        cli::kUsage);
}

TEST_CASE("few-shot sampling is byte-identical across runs") {
  testsupport::ScratchDir dir("cli-fewshot");
  std::vector<std::string> outputs;
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    const auto out = (dir / name).string();
    REQUIRE(run({"fewshot", "--catalog", kCatalog, "--dataset", "SMS-SPAM", "--in", fixture("cls"), "--out", out,
                 "--k", "20", "--policy", "binary-balance", "--seed", "1", "--category", "DKTR"})
                .status == 0);
    outputs.push_back(testsupport::slurp(out));
  }
  CHECK(outputs[0] == outputs[1]);
  const auto examples = read_unified_file(dir / "a.jsonl");
  CHECK(examples.size() == 20);
  CHECK(examples[0].meta->transfer_category == TransferCategory::DKTR);
}

TEST_CASE("few-shot derivation emits transfer tasks") {
  testsupport::ScratchDir dir("cli-derive");
  const auto out = (dir / "ee.jsonl").string();
  REQUIRE(run({"fewshot", "--in", fixture("ner"), "--out", out, "--derive", "EE", "--k", "20", "--seed", "3"})
              .status == 0);
  const auto ee = read_unified_file(out);
  CHECK(ee.size() == 20);
  for (const auto& ex : ee) CHECK(ex.task == TaskKind::EE);
}

TEST_CASE("replaying a manifest reproduces the artifact byte for byte") {
  testsupport::ScratchDir dir("cli-replay");
  const auto out = (dir / "noisy.jsonl").string();
  REQUIRE(run({"simulate", "--catalog", kCatalog, "--in", fixture("ner"), "--out", out, "--noise-p", "0.5",
               "--noise-ops", "drop-item,swap-type,garbage", "--seed", "4"})
              .status == 0);
  const auto original = testsupport::slurp(out);
  const auto manifest = nlohmann::json::parse(testsupport::slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["seed"] == 4);
  CHECK(manifest["catalog"] == kCatalog);
  CHECK(manifest["arguments"]["noise-p"] == "0.5");
  fs::copy_file(out + ".manifest.json", dir / "saved.manifest.json");
  fs::remove(out);
  REQUIRE(run({"replay", "--in", (dir / "saved.manifest.json").string()}).status == 0);
  CHECK(testsupport::slurp(out) == original);
}

TEST_CASE("commands leave their inputs untouched") {
  testsupport::ScratchDir dir("cli-inputs");
  const auto gold = (dir / "gold.jsonl").string();
  fs::copy_file(fixture("eat"), gold);
  const auto before = testsupport::slurp(gold);
  const auto catalog_before = testsupport::slurp(kCatalog);
  const auto pred = (dir / "pred.jsonl").string();
  REQUIRE(run({"simulate", "--catalog", kCatalog, "--in", gold, "--out", pred, "--noise-p", "1", "--noise-ops",
               "swap-type", "--seed", "2"})
              .status == 0);
  REQUIRE(run({"evaluate", "--catalog", kCatalog, "--gold", gold, "--pred", pred}).status == 0);
  REQUIRE(run({"split", "--in", gold, "--out", (dir / "split").string(), "--policy", "half-half", "--seed", "1"})
              .status == 0);
  REQUIRE(run({"fewshot", "--in", gold, "--out", (dir / "fs.jsonl").string(), "--k", "20", "--seed", "1"}).status ==
          0);
  REQUIRE(run({"inspect", "--in", gold, "--limit", "2"}).status == 0);
  CHECK(testsupport::slurp(gold) == before);
  CHECK(testsupport::slurp(kCatalog) == catalog_before);
  CHECK(run({"simulate", "--in", gold, "--out", gold, "--identity"}).status == cli::kUsage);
  CHECK(testsupport::slurp(gold) == before);
}

TEST_CASE("exit statuses") {
  testsupport::ScratchDir dir("cli-status");
  CHECK(run({}).status == cli::kUsage);
  CHECK(run({"frobnicate"}).status == cli::kUsage);
  CHECK(run({"evaluate", "--bogus-flag"}).status == cli::kUsage);
  CHECK(run({"--help"}).status == cli::kOk);
  const auto missing = run({"inspect", "--in", (dir / "nope.jsonl").string()});
  CHECK(missing.status == cli::kInvalidInput);
  CHECK(missing.err.find("nope.jsonl") != std::string::npos);

  testsupport::spit(dir / "bad_catalog.json", R"({"datasets":[{"id":"A","task":"NER","labels":[]}]})");
  CHECK(run({"evaluate", "--catalog", (dir / "bad_catalog.json").string(), "--gold", fixture("ner"), "--pred",
             fixture("ner")})
            .status == cli::kInvalidInput);

  testsupport::spit(dir / "short.jsonl", "{\"id\":\"SAL-000001\",\"output\":\"None * None\"}\n");
  const auto misaligned =
      run({"evaluate", "--catalog", kCatalog, "--gold", fixture("ner"), "--pred", (dir / "short.jsonl").string()});
  CHECK(misaligned.status == cli::kInvalidInput);
  CHECK(misaligned.err.find("missing ids") != std::string::npos);
  CHECK(run({"convert", "--catalog", kCatalog, "--dataset", "NOPE", "--in", fixture("ner"), "--out",
             (dir / "x.jsonl").string()})
            .status == cli::kInvalidInput);
}

TEST_CASE("runner-style prediction files evaluate without diagnostics") {
  // what an external model runner writes: one {id, output} line per test record
  testsupport::ScratchDir dir("cli-runner");
  const auto gold = read_unified_file(testsupport::unified_fixture("cls"));
  std::ostringstream lines;
  for (const auto& ex : gold) lines << R"({"id": ")" << ex.id << R"(", "output": "ham"})" << "\n";
  testsupport::spit(dir / "runner.jsonl", lines.str());
  const auto report = (dir / "r.json").string();
  const auto r = run({"evaluate", "--catalog", kCatalog, "--gold", fixture("cls"), "--pred",
                      (dir / "runner.jsonl").string(), "--out", report});
  REQUIRE(r.status == 0);
  CHECK(r.err.empty());
  const auto doc = nlohmann::json::parse(testsupport::slurp(report));
  CHECK(doc["reports"][0]["malformed_rate"] == 0.0);
}
