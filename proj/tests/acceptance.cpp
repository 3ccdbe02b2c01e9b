// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "support.hpp"
#include "unitext/cli.hpp"
#include "unitext/eval.hpp"
#include "unitext/fewshot.hpp"
#include "unitext/ingest.hpp"
#include "unitext/records.hpp"
#include "unitext/sim.hpp"

using namespace unitext;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kRoundTripTargets = 10'000;
constexpr double kRoundTripSeconds = 30.0;
constexpr std::size_t kMetricInstances = 1'000;
constexpr double kMetricTolerance = 1e-9;
constexpr std::size_t kFuzzStrings = 100'000;
constexpr std::uint64_t kNoiseSeeds = 50;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

Outcome round_trip() {
  Outcome o;
  Rng rng(20221);
  const auto start = std::chrono::steady_clock::now();
  std::size_t done = 0;
  for (; done < kRoundTripTargets; ++done) {
    const auto kind = kAllTaskKinds[done % kAllTaskKinds.size()];
    const auto t = testsupport::random_target(rng, kind);
    const auto text = serialize_target(t);
    const auto back = parse_output(text, kind);
    if (back.malformed || !(back.target == t)) {
      o.require(false, "mismatch on '" + text + "'");
      break;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < kRoundTripSeconds, "too slow");
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu targets in %.2f s", done, secs);
    o.detail = buf;
  }
  return o;
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome identity_oracle() {
  Outcome o;
  testsupport::ScratchDir dir("acceptance-identity");
  const auto catalog = testsupport::catalog_path().string();
  for (const char* kind : {"cls", "ner", "evnt", "reg", "ee", "et", "eae", "eat"}) {
    const auto gold = testsupport::unified_fixture(kind).string();
    const auto pred = (dir / (std::string(kind) + ".pred.jsonl")).string();
    const auto report = (dir / (std::string(kind) + ".report.json")).string();
    o.require(read_unified_file(gold).size() == 100, std::string(kind) + " fixture is not 100 examples");
    o.require(cli({"simulate", "--in", gold, "--out", pred, "--identity"}) == 0, std::string(kind) + ": simulate");
    o.require(cli({"evaluate", "--catalog", catalog, "--gold", gold, "--pred", pred, "--out", report}) == 0,
              std::string(kind) + ": evaluate");
    if (!o.pass) return o;
    const auto doc = nlohmann::json::parse(testsupport::slurp(report));
    for (const auto& r : doc["reports"]) {
      const bool exact = r["weighted_f1"].get<double>() == 1.0 && r["macro_f1"].get<double>() == 1.0 &&
                         r["exact_match_accuracy"].get<double>() == 1.0;
      o.require(exact, std::string(kind) + ": metrics below 1.0");
    }
  }
  if (o.pass) o.detail = "8 fixtures x 100 examples, all metrics exactly 1.0";
  return o;
}

Outcome metric_oracle() {
  Outcome o;
  Rng rng(777);
  double worst = 0.0;
  for (std::size_t round = 0; round < kMetricInstances; ++round) {
    const auto n = 1 + rng.below(20);
    const auto L = 1 + rng.below(5);
    std::vector<std::string> inventory;
    for (std::size_t l = 0; l < L; ++l) inventory.push_back("T" + std::to_string(l));

    // classification
    std::vector<std::string> g, p;
    std::vector<ClassLabel> gl;
    std::vector<ParseOutcome> pl;
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(inventory[rng.below(L)]);
      p.push_back(rng.below(10) == 0 ? std::string("other") : inventory[rng.below(L)]);
      gl.push_back({g.back()});
      pl.push_back(parse_output(p.back(), TaskKind::CLS));
    }
    const auto want_c = oracle::classification(g, p, inventory);
    const auto got_c =
        score_classification(gl, pl, std::set<std::string>(inventory.begin(), inventory.end()), Exec::Parallel);
    worst = std::max({worst, std::abs(got_c.weighted_f1 - want_c.weighted_f1),
                      std::abs(got_c.macro_f1 - want_c.macro_f1)});

    // extraction
    std::vector<ExtractionSet> ge;
    std::vector<ParseOutcome> pe;
    std::vector<std::vector<oracle::Pair>> gp, pp;
    for (std::size_t i = 0; i < n; ++i) {
      ExtractionSet gs, ps;
      for (auto* s : {&gs, &ps}) {
        const auto m = rng.below(4);
        for (std::size_t j = 0; j < m; ++j)
          s->items.push_back({"e" + std::to_string(rng.below(4)), inventory[rng.below(L)]});
      }
      std::vector<oracle::Pair> a, b;
      for (const auto& it : gs.items) a.emplace_back(it.surface, it.type);
      for (const auto& it : ps.items) b.emplace_back(it.surface, it.type);
      gp.push_back(a);
      pp.push_back(b);
      pe.push_back(parse_output(serialize_target(ps), TaskKind::NER));
      ge.push_back(std::move(gs));
    }
    const auto want_e = oracle::extraction(gp, pp);
    const auto got_e = score_extraction(ge, pe, Exec::Parallel);
    worst = std::max({worst, std::abs(got_e.weighted_f1 - want_e.weighted_f1),
                      std::abs(got_e.macro_f1 - want_e.macro_f1)});
  }
  o.require(worst <= kMetricTolerance, "deviation above tolerance");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu instances x 2 task shapes, max |delta| = %.3g", kMetricInstances, worst);
  o.detail = o.pass ? buf : o.detail + " (" + buf + ")";
  return o;
}

EvalReport score_one(const std::string& dataset, TaskKind task, const std::string& gold_text,
                     const std::string& pred_text) {
  const auto& r = testsupport::table1_registry();
  const auto gold = UnifiedExample::make(dataset + "-000001", dataset, task, "worked example",
                                         parse_output(gold_text, task).target);
  return evaluate({gold}, {{gold.id, pred_text}}, r).at(0);
}

Outcome worked_examples() {
  Outcome o;
  const auto sal = score_one(
      "SAL", TaskKind::NER,
      "Lexmark * N | X94x * F | W840 * F | T656 * F | N4000 * F | E462 * F | C935dn * F | 25xxN * F | allows * L | "
      "remote attackers * L | denial of service * L | Authorization * L",
      "Lexmark * N | inkjet * O | MarkNet * A | X94x * O | W840 * O | T656 * O | N4000 * O | E462 * O | C935dn * O | "
      "25xxN * O | allows * L | remote attackers * L | denial of service * L | Authorization * L");
  std::size_t fp = 0;
  for (const auto& [type, s] : sal.per_label) fp += s.counts.fp;
  o.require(sal.weighted_f1 < 1.0, "SAL weighted_f1 not below 1");
  o.require(sal.per_label.count("N") && sal.per_label.at("N").counts.tp == 1, "SAL TP(N) != 1");
  o.require(fp >= 1, "SAL has no false positive");

  const auto casie = score_one("CASIE-EVTDET", TaskKind::EVNT, "a demand was made * Ransom",
                               "a demand was made * Ransom | was hacked * Databreach");
  std::size_t casie_fp = 0;
  for (const auto& [type, s] : casie.per_label) casie_fp += s.counts.fp;
  o.require(casie.per_label.count("Databreach") && casie.per_label.at("Databreach").counts.fp == 1 && casie_fp == 1,
            "CASIE does not count exactly one FP(Databreach)");

  const auto cve = score_one("CVE-IMPACT", TaskKind::REG, "5.9", "3.6");
  o.require(cve.exact_match_accuracy == 0.0, "regression 5.9 vs 3.6 not scored 0");

  const auto none = parse_output("None * None", TaskKind::EVNT);
  o.require(!none.malformed && std::get<ExtractionSet>(none.target).items.empty(), "'None * None' is not empty");
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "SAL wF1 = %.4f with %zu FP; CASIE FP(Databreach) = 1; 5.9 vs 3.6 -> 0",
                  sal.weighted_f1, fp);
    o.detail = buf;
  }
  return o;
}

std::vector<UnifiedExample> numbered(std::size_t n) {
  std::vector<UnifiedExample> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(UnifiedExample::make(example_id("D", i + 1), "D", TaskKind::CLS, "x", ClassLabel{"y"}));
  return out;
}

std::set<std::string> ids_of(const std::vector<UnifiedExample>& v) {
  std::set<std::string> s;
  for (const auto& ex : v) s.insert(ex.id);
  return s;
}

Outcome split_contracts() {
  Outcome o;
  const auto hundred = numbered(100);
  const SplitSpec random{SplitPolicy::RandomFraction, 0.2, 0, 0, 7};
  const auto [train, test] = split_dataset(hundred, random);
  o.require(train.size() == 80 && test.size() == 20, "random-fraction sizes");
  const auto tr = ids_of(train), te = ids_of(test);
  std::set<std::string> both = tr;
  both.insert(te.begin(), te.end());
  o.require(both.size() == 100 && tr.size() + te.size() == 100, "random-fraction not a partition");
  const auto again = split_dataset(hundred, random);
  o.require(ids_of(again.second) == te, "random-fraction not reproducible");

  const auto half = split_dataset(numbered(101), SplitSpec{SplitPolicy::HalfHalf, 0, 0, 0, 2002});
  o.require(std::abs(static_cast<long>(half.first.size()) - static_cast<long>(half.second.size())) == 1 &&
                half.first.size() + half.second.size() == 101,
            "half-half sizes");

  const auto& r = testsupport::table1_registry();
  const auto& mdb = r.at("MDB-SENTCLS");
  auto loaded = load_dataset(mdb, testsupport::raw_fixture("mdb_sentences.tsv"));
  const auto sentences = to_unified(loaded.records, mdb, r, &loaded.report);
  std::set<std::string> docs;
  for (const auto& ex : sentences) docs.insert(ex.doc);
  o.require(docs.size() == 83, "MDB fixture does not have 83 documents");
  const auto [dtrain, dtest] = split_dataset(sentences, mdb.split);
  std::set<std::string> train_docs, test_docs;
  for (const auto& ex : dtrain) train_docs.insert(ex.doc);
  for (const auto& ex : dtest) test_docs.insert(ex.doc);
  bool overlap = false;
  for (const auto& d : test_docs) overlap |= train_docs.count(d) > 0;
  o.require(train_docs.size() == 68 && test_docs.size() == 15 && !overlap, "document-level doc counts");
  o.require(dtrain.size() + dtest.size() == sentences.size() &&
                ids_of(dtrain).size() + ids_of(dtest).size() == sentences.size(),
            "document-level sentence assignment");
  if (o.pass) {
    o.detail = "80/20, 50/51, 68+15 docs over " + std::to_string(sentences.size()) + " sentences";
  }
  return o;
}

std::vector<UnifiedExample> converted(const std::string& dataset, const std::string& file) {
  const auto& r = testsupport::table1_registry();
  const auto& d = r.at(dataset);
  auto loaded = load_dataset(d, testsupport::raw_fixture(file));
  return to_unified(loaded.records, d, r, &loaded.report);
}

Outcome fewshot_contracts() {
  Outcome o;
  const auto sms = converted("SMS-SPAM", "sms_spam.tsv");
  const auto args = converted("CASIE-ARGDET", "casie.jsonl");
  const auto sal = converted("SAL", "sal.conll");
  const auto eat = derive_typing(args, TaskKind::EAT);
  const auto types_of = [](const std::vector<UnifiedExample>& v) {
    std::set<std::string> s;
    for (const auto& ex : v)
      for (const auto& t : covered_types(ex)) s.insert(t);
    return s;
  };
  for (std::size_t k : {20u, 50u, 100u}) {
    const auto ks = std::to_string(k);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const FewshotSpec bb{k, seed, FewshotPolicy::BinaryBalance, {"spam", "ham"}, TransferCategory::DUTR};
      const auto b = sample_fewshot(sms, bb);
      std::map<std::string, long> counts;
      for (const auto& ex : b.examples) ++counts[balance_class(ex)];
      o.require(b.examples.size() == std::min(k, sms.size()), "binary-balance size at k=" + ks);
      o.require(std::abs(counts["spam"] - counts["ham"]) <= 1, "binary-balance counts at k=" + ks);
      o.require(ids_of(sample_fewshot(sms, bb).examples) == ids_of(b.examples), "binary-balance seed at k=" + ks);

      for (const auto* pool : {&args, &sal, &eat}) {
        const FewshotSpec pt{k, seed, FewshotPolicy::PerTypeCoverage, {}, TransferCategory::DKTU};
        const auto s = sample_fewshot(*pool, pt);
        o.require(s.examples.size() == std::min(k, pool->size()), "per-type size at k=" + ks);
        o.require(ids_of(s.examples).size() == s.examples.size(), "duplicate ids at k=" + ks);
        if (k >= types_of(*pool).size())
          o.require(types_of(s.examples) == types_of(*pool), "per-type coverage at k=" + ks);
        const auto again = sample_fewshot(*pool, pt);
        bool same = again.examples.size() == s.examples.size();
        for (std::size_t i = 0; same && i < s.examples.size(); ++i) same = again.examples[i].id == s.examples[i].id;
        o.require(same, "per-type seed reproducibility at k=" + ks);
      }
    }
  }
  if (o.pass) {
    o.detail = "k in {20,50,100} x 3 seeds; SMS-SPAM balance, CASIE-ARGDET (" +
               std::to_string(types_of(args).size()) + " types), SAL, EAT coverage";
  }
  return o;
}

Outcome robustness() {
  Outcome o;
  const auto& r = testsupport::table1_registry();
  Rng rng(31337);
  std::size_t parsed = 0;
  try {
    for (std::size_t i = 0; i < kFuzzStrings; ++i) {
      const auto s = testsupport::random_text(rng, 64);
      (void)parse_output(s, kAllTaskKinds[i % kAllTaskKinds.size()], i % 2 ? &r : nullptr);
      ++parsed;
    }
  } catch (const std::exception& e) {
    o.require(false, std::string("parse_output raised: ") + e.what());
  }

  const auto gold = read_unified_file(testsupport::unified_fixture("ner"));
  const std::vector<NoiseOp> ops{NoiseOp::DropItem, NoiseOp::SwapType, NoiseOp::Garbage};
  std::vector<double> means;
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    double sum = 0;
    for (std::uint64_t seed = 0; seed < kNoiseSeeds; ++seed)
      sum += evaluate(gold, corrupt(gold, NoiseSpec{p, ops, seed}, &r), r).at(0).weighted_f1;
    means.push_back(sum / static_cast<double>(kNoiseSeeds));
  }
  for (std::size_t i = 1; i < means.size(); ++i) o.require(means[i] <= means[i - 1], "mean weighted_f1 increased");
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu fuzz strings parsed; mean wF1 at p=0/.25/.5/1: %.4f %.4f %.4f %.4f", parsed,
                means[0], means[1], means[2], means[3]);
  o.detail = o.pass ? buf : o.detail + " (" + buf + ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"round-trip", round_trip},           {"identity-oracle", identity_oracle},
      {"metric-oracle", metric_oracle},     {"worked-examples", worked_examples},
      {"split-contracts", split_contracts}, {"fewshot-contracts", fewshot_contracts},
      {"robustness", robustness}};
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %-18s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
