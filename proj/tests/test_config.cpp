#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "tensional/config.hpp"
#include "tensional/engine.hpp"

using namespace tensional;

namespace {

json euclidean_manifold(int dim) {
  json m;
  m["dim"] = dim;
  json coords = json::array();
  json metric = json::array();
  for (int i = 0; i < dim; ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    json row = json::array();
    for (int j = i; j < dim; ++j) row.push_back(i == j ? "1" : "0");
    metric.push_back(row);
  }
  m["coords"] = coords;
  m["metric"] = metric;
  json box = json::object();
  for (int i = 0; i < dim; ++i) box["x" + std::to_string(i + 1)] = json::array({-2.0, 2.0});
  m["sample_box"] = box;
  return m;
}

json identity_config() {
  json doc;
  doc["schema_version"] = 1;
  doc["manifolds"]["E2"] = euclidean_manifold(2);
  doc["maps"]["id"] = {{"source", "E2"}, {"target", "E2"}, {"components", {"x1", "x2"}}};
  doc["tasks"] = json::array(
      {{{"task", "classify_map"}, {"map", "id"}, {"expect", {{"harmonic", true}, {"hs", true}}}}});
  doc["sampling"] = {{"seed", 42}, {"n_points", 6}, {"jet_order", 2}};
  return doc;
}

}  // namespace

TEST_CASE("a well-formed document parses with defaults filled in") {
  RunConfig cfg = parse_config(identity_config());
  REQUIRE(cfg.manifolds.count("E2") == 1);
  CHECK(cfg.manifolds.at("E2").dim == 2);
  CHECK(cfg.manifolds.at("E2").metric.size() == 2);
  REQUIRE(cfg.maps.count("id") == 1);
  CHECK(cfg.maps.at("id").components.size() == 2);
  REQUIRE(cfg.tasks.size() == 1);
  CHECK(cfg.tasks[0].task == "classify_map");
  CHECK(cfg.tasks[0].mode == "both");
  CHECK(cfg.sampling.seed == 42);
  CHECK(cfg.sampling.n_points == 6);
  CHECK(cfg.tolerances.verdict == doctest::Approx(1e-7));
  CHECK(cfg.tolerances.comparison == doctest::Approx(1e-8));
  CHECK(cfg.output.format == "json");
  CHECK(cfg.digest.rfind("fnv1a:", 0) == 0);
}

TEST_CASE("validation reports every problem at once, with pointer paths") {
  json doc = identity_config();
  // wrong metric shape: three rows on a two-dimensional chart
  doc["manifolds"]["E2"]["metric"] = json::array({json::array({"1", "0"}),
                                                  json::array({"1"}),
                                                  json::array({"1"})});
  // task referencing a map that does not exist, plus an unknown task name
  doc["tasks"].push_back({{"task", "classify_map"}, {"map", "ghost"}});
  doc["tasks"].push_back({{"task", "summon"}, {"map", "id"}});
  doc["typo_section"] = 1;

  try {
    parse_config(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    REQUIRE(e.issues.size() >= 4);
    auto has = [&](const std::string& frag) {
      for (const std::string& it : e.issues)
        if (it.find(frag) != std::string::npos) return true;
      return false;
    };
    CHECK(has("/manifolds/E2/metric"));
    CHECK(has("expected 2 rows, got 3"));
    CHECK(has("/tasks/1/map"));
    CHECK(has("ghost"));
    CHECK(has("/tasks/2/task"));
    CHECK(has("typo_section"));
  }
}

TEST_CASE("expression and reference errors carry their location") {
  json doc = identity_config();
  doc["manifolds"]["E2"]["metric"][0][0] = "1 +";
  doc["fields"]["v"] = {{"chart", "E2"}, {"components", {"x1", "x1*x9"}}};
  try {
    parse_config(doc);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    bool metric_entry = false, field_entry = false;
    for (const std::string& it : e.issues) {
      metric_entry = metric_entry || it.find("/manifolds/E2/metric") != std::string::npos;
      field_entry = field_entry || it.find("/fields/v/components/1") != std::string::npos;
    }
    CHECK(metric_entry);
    CHECK(field_entry);
  }
}

TEST_CASE("file loading distinguishes missing files from broken JSON") {
  CHECK_THROWS_WITH_AS(load_config("/nonexistent/nowhere.json"),
                       doctest::Contains("cannot open"), const ParseError&);
  std::string path = "/tmp/tensional_broken_config.json";
  {
    std::ofstream out(path);
    out << "{ \"manifolds\": ";
  }
  CHECK_THROWS_AS(load_config(path), const ParseError&);
  std::remove(path.c_str());
}

TEST_CASE("the runner produces a stable report and exit code zero on success") {
  RunConfig cfg = parse_config(identity_config());
  json rep = run(cfg);
  CHECK(rep["schema_version"] == 1);
  CHECK(rep["tool"]["name"] == "tensional");
  CHECK(rep["config_digest"] == cfg.digest);
  REQUIRE(rep["tasks"].size() == 1);
  const json& t = rep["tasks"][0];
  CHECK(t["status"] == "ok");
  CHECK(t["result"]["harmonic"] == true);
  CHECK(t["result"]["hs"] == true);
  CHECK(t["expect_match"] == true);
  CHECK(rep["summary"]["ok"] == true);
  CHECK(rep["summary"]["errors"] == 0);
  CHECK(report_exit_code(rep) == 0);

  std::string text = render_text(rep);
  CHECK(text.find("classify_map") != std::string::npos);
  CHECK(text.find("summary") != std::string::npos);
}

TEST_CASE("a failed expectation flips the exit code without killing the run") {
  json doc = identity_config();
  doc["tasks"][0]["expect"]["harmonic"] = false;
  json rep = run(parse_config(doc));
  CHECK(rep["tasks"][0]["status"] == "ok");
  CHECK(rep["tasks"][0]["expect_match"] == false);
  CHECK(rep["summary"]["expect_mismatches"] == 1);
  CHECK(rep["summary"]["ok"] == false);
  CHECK(report_exit_code(rep) == 1);
}

TEST_CASE("a task that throws is captured per task and reported as exit three") {
  json doc = identity_config();
  doc["maps"]["fast"] = {{"source", "E2"}, {"target", "E2"}, {"components", {"2*x1", "x2"}}};
  doc["tasks"].push_back({{"task", "classify_curve"}, {"map", "fast"}});
  json rep = run(parse_config(doc));
  REQUIRE(rep["tasks"].size() == 2);
  CHECK(rep["tasks"][0]["status"] == "ok");
  CHECK(rep["tasks"][1]["status"] == "error");
  std::string msg = rep["tasks"][1]["error"];
  CHECK(msg.find("1-dimensional source") != std::string::npos);
  CHECK(rep["summary"]["errors"] == 1);
  CHECK(report_exit_code(rep) == 3);
}

TEST_CASE("reports are deterministic, in serial and in parallel") {
  json doc = identity_config();
  doc["fields"]["pos"] = {{"chart", "E2"}, {"components", {"x1", "x2"}}};
  doc["scalars"]["r2"] = {{"chart", "E2"}, {"expression", "x1^2+x2^2"}};
  doc["tasks"].push_back({{"task", "check_rough_type"}, {"field", "pos"}, {"mode", "both"}});
  doc["tasks"].push_back({{"task", "check_convex"}, {"scalar", "r2"}});
  doc["tasks"].push_back({{"task", "energy"}, {"map", "id"}, {"subdivisions", 8}});
  RunConfig cfg = parse_config(doc);

  json a = run(cfg);
  json b = run(cfg);
  json c = run(cfg, true);
  a.erase("timings");
  b.erase("timings");
  c.erase("timings");
  CHECK(a.dump() == b.dump());
  CHECK(a.dump() == c.dump());
}

TEST_CASE("the digest tracks the effective settings") {
  json doc = identity_config();
  RunConfig base = parse_config(doc);
  doc["sampling"]["seed"] = 7;
  RunConfig reseeded = parse_config(doc);
  CHECK(base.digest != reseeded.digest);
  CHECK(run(reseeded)["sampling"]["seed"] == 7);
}

TEST_CASE("expectation matching compares numbers with tolerance and the rest exactly") {
  json doc = identity_config();
  doc["scalars"]["r2"] = {{"chart", "E2"}, {"expression", "x1^2+x2^2"}};
  doc["tasks"] = json::array({{{"task", "check_convex"},
                               {"scalar", "r2"},
                               {"expect", {{"strongly_convex", true},
                                           {"min_eigenvalue", 2.0000000001}}}}});
  json rep = run(parse_config(doc));
  CHECK(rep["tasks"][0]["expect_match"] == true);

  doc["tasks"][0]["expect"]["min_eigenvalue"] = 2.5;
  json rep2 = run(parse_config(doc));
  CHECK(rep2["tasks"][0]["expect_match"] == false);
}
