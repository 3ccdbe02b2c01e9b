#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "unitext/error.hpp"
#include "unitext/registry.hpp"

using namespace unitext;

namespace {

DatasetDescriptor extraction_ds(std::string id, std::vector<std::string> labels) {
  DatasetDescriptor d;
  d.id = std::move(id);
  d.task = TaskKind::NER;
  d.sub_task = "NER";
  d.labels = std::move(labels);
  d.source_format = SourceFormat::TokenTagged;
  return d;
}

}  // namespace

TEST_CASE("empty registry misses every lookup") {
  const auto r = Registry::build({});
  CHECK(r.empty());
  CHECK(r.find("SAL") == nullptr);
  CHECK_THROWS_AS(r.at("SAL"), LookupError);
  CHECK_THROWS_AS(r.resolve_type("SAL", "N"), LookupError);
  CHECK(r.by_task(TaskKind::NER).empty());
}

TEST_CASE("bundled catalog holds 13 datasets over 8 fine-grained tasks") {
  const auto& r = testsupport::table1_registry();
  CHECK(r.size() == 13);
  std::set<std::string> sub_tasks;
  for (const auto& d : r.descriptors()) sub_tasks.insert(d.sub_task);
  CHECK(sub_tasks.size() == 8);
  CHECK(r.by_task(TaskKind::CLS).size() == 7);
  CHECK(r.by_task(TaskKind::NER).size() == 3);
  CHECK(r.by_task(TaskKind::EVNT).size() == 2);
  CHECK(r.by_task(TaskKind::REG).size() == 1);
}

TEST_CASE("duplicate dataset ids are rejected by name") {
  auto a = extraction_ds("SAL", {"N"});
  auto b = extraction_ds("SAL", {"F"});
  try {
    (void)Registry::build({a, b});
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("SAL") != std::string::npos);
  }
}

TEST_CASE("descriptor validation") {
  auto bad_label = extraction_ds("X", {"a * b"});
  CHECK_THROWS_AS(Registry::build({bad_label}), ValidationError);
  auto dup = extraction_ds("X", {"A", "A"});
  CHECK_THROWS_AS(Registry::build({dup}), ValidationError);
  auto empty = extraction_ds("X", {});
  CHECK_THROWS_AS(Registry::build({empty}), ValidationError);
  DatasetDescriptor reg;
  reg.id = "R";
  reg.task = TaskKind::REG;
  reg.sub_task = "REG";
  reg.labels = {"x"};
  reg.source_format = SourceFormat::ScoredDescription;
  CHECK_THROWS_AS(Registry::build({reg}), ValidationError);
  auto cls = extraction_ds("C", {"spam", "ham"});
  cls.task = TaskKind::CLS;
  cls.source_format = SourceFormat::LabeledTable;
  cls.positive_label = "eggs";
  CHECK_THROWS_AS(Registry::build({cls}), ValidationError);
  CHECK_THROWS_AS(Registry::from_catalog_text("{not json"), ValidationError);
}

TEST_CASE("resolve_type on the bundled catalog") {
  const auto& r = testsupport::table1_registry();
  CHECK(r.resolve_type("SAL", "N") == "N");
  CHECK(r.resolve_type("CASIE-ARGDET", "Time") == "CASIE-ARGDET:Time");
  CHECK(r.resolve_type("SOFTNER", "Organization") == "Organization");
  CHECK(r.resolve_type("CASIE-ARGDET", "Organization") == "Organization");
  CHECK_THROWS_AS(r.resolve_type("SAL", "ZZZ"), LookupError);
  CHECK_THROWS_AS(r.resolve_type("NOPE", "N"), LookupError);
}

TEST_CASE("catalog qualification agrees with enumerated collisions") {
  const auto& r = testsupport::table1_registry();
  std::map<std::string, std::set<std::string>> owners;
  for (const auto& d : r.descriptors())
    for (const auto& l : d.labels) owners[l].insert(d.id);
  const std::set<std::pair<std::string, std::string>> aliased{{"SOFTNER", "Organization"},
                                                              {"CASIE-ARGDET", "Organization"}};
  for (const auto& d : r.descriptors()) {
    if (!is_extraction(d.task)) continue;
    for (const auto& l : d.labels) {
      if (aliased.count({d.id, l})) continue;
      const auto expected = owners[l].size() > 1 ? d.id + ":" + l : l;
      CHECK_MESSAGE(r.resolve_type(d.id, l) == expected, d.id << "/" << l);
    }
  }
  // "Time" is both an argument type and a role label
  CHECK(owners["Time"] == std::set<std::string>{"CASIE-ARGDET", "CASIE-ARGROLE"});
}

TEST_CASE("resolve_type is injective over random inventories with forced collisions") {
  Rng rng(11);
  for (int round = 0; round < 300; ++round) {
    const auto n = 1 + rng.below(5);
    std::vector<DatasetDescriptor> ds;
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::string> labels;
      const auto m = 1 + rng.below(6);
      // tiny alphabet so collisions (including with "<id>:<local>" shapes) are common
      for (std::size_t j = 0; j < m; ++j) labels.insert(std::string(1, "ABCDE"[rng.below(5)]));
      if (rng.below(4) == 0 && i > 0) labels.insert("D" + std::to_string(i - 1) + ":A");
      ds.push_back(extraction_ds("D" + std::to_string(i), {labels.begin(), labels.end()}));
    }
    Registry r;
    try {
      r = Registry::build(ds);
    } catch (const ValidationError&) {
      continue;  // a qualified name clashed with a declared one; rejection is the contract
    }
    std::map<std::string, std::pair<std::string, std::string>> seen;
    for (const auto& d : ds) {
      for (const auto& l : d.labels) {
        const auto& g = r.resolve_type(d.id, l);
        const auto [it, fresh] = seen.emplace(g, std::make_pair(d.id, l));
        CHECK_MESSAGE(fresh, g << " from " << d.id << "/" << l << " and " << it->second.first << "/"
                                << it->second.second);
        CHECK(r.is_global_type(g));
      }
    }
  }
}

TEST_CASE("type aliases share a global name and reject conflicting globals") {
  auto a = extraction_ds("A", {"Org", "X"});
  auto b = extraction_ds("B", {"Organization", "X"});
  const auto r = Registry::build({a, b}, {TypeAlias{"Organization", {{"A", "Org"}, {"B", "Organization"}}}});
  CHECK(r.resolve_type("A", "Org") == "Organization");
  CHECK(r.resolve_type("B", "Organization") == "Organization");
  CHECK(r.resolve_type("A", "X") == "A:X");
  CHECK(r.global_types_of("A") == std::vector<std::string>{"Organization", "A:X"});
  // the alias would claim the name the colliding "X" of A qualifies to
  CHECK_THROWS_AS(Registry::build({a, b}, {TypeAlias{"A:X", {{"A", "Org"}}}}), ValidationError);
  CHECK_THROWS_AS(Registry::build({a, b}, {TypeAlias{"G", {{"A", "Nope"}}}}), ValidationError);
}

TEST_CASE("prefix_for is total and injective") {
  std::set<std::string_view> prefixes;
  for (auto k : kAllTaskKinds) {
    prefixes.insert(prefix_for(k));
    CHECK(task_kind_from_string(prefix_for(k)) == k);
  }
  CHECK(prefixes.size() == kAllTaskKinds.size());
  CHECK(prefix_for(TaskKind::EVNT) == "EVNT");
  CHECK(prefix_for(TaskKind::CLS) == "CLS");
  CHECK(prefix_for(TaskKind::EE) == "EE");
  CHECK_FALSE(task_kind_from_string("cls").has_value());
}
