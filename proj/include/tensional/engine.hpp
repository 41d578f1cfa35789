#ifndef TENSIONAL_ENGINE_HPP
#define TENSIONAL_ENGINE_HPP

// Executes a RunConfig: builds the declared charts and maps, runs each task,
// and assembles a versioned JSON report. The serialized report is identical
// across identical runs; wall-clock measurements live in their own top-level
// "timings" block so byte comparison can drop them in one step.

#include <chrono>
#include <future>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tensional/casebook.hpp"
#include "tensional/config.hpp"

namespace tensional {

inline constexpr const char* kToolName = "tensional";
inline constexpr const char* kToolVersion = "0.1.0";

inline ChartPtr build_chart(const std::string& name, const ManifoldSpec& spec) {
  auto chart = std::make_shared<RiemannianChart>(name, spec.coords, spec.parameters);
  for (int i = 0; i < spec.dim; ++i)
    for (int j = i; j < spec.dim; ++j)
      chart->set_metric_entry(i, j, spec.metric[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(j - i)]);
  auto coord_index = [&](const std::string& c) {
    for (int i = 0; i < spec.dim; ++i)
      if (spec.coords[static_cast<std::size_t>(i)] == c) return i;
    return -1;
  };
  for (const auto& [coord, box] : spec.domain) chart->set_domain(coord_index(coord), box.first, box.second);
  for (const auto& [coord, box] : spec.sample_box)
    chart->set_sample_box(coord_index(coord), box.first, box.second);
  if (!spec.guard.empty()) chart->set_guard(spec.guard);
  return chart;
}

namespace detail_engine {

inline json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline json points_json(const std::vector<Point>& pts) {
  json out = json::array();
  for (const Point& p : pts) out.push_back(p);
  return out;
}

// expectation matching: booleans and strings exactly, numbers to a relative
// tolerance with floor one, containers elementwise
inline bool expect_matches(const json& want, const json& got, double tol) {
  if (want.is_number() && got.is_number()) {
    double a = want.get<double>(), b = got.get<double>();
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  if (want.is_object()) {
    if (!got.is_object()) return false;
    for (auto it = want.begin(); it != want.end(); ++it) {
      if (!got.contains(it.key())) return false;
      if (!expect_matches(it.value(), got[it.key()], tol)) return false;
    }
    return true;
  }
  if (want.is_array()) {
    if (!got.is_array() || want.size() != got.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
      if (!expect_matches(want[i], got[i], tol)) return false;
    return true;
  }
  return want == got;
}

inline json case_check_json(const CaseCheck& c) {
  json out;
  out["quantity"] = c.quantity;
  out["origin"] = c.origin;
  out["value"] = c.value;
  out["expected"] = c.expected;
  out["tolerance"] = c.tolerance;
  out["pass"] = c.pass;
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

inline json case_report_json(const CaseReport& r) {
  json out;
  out["id"] = r.id;
  out["family"] = r.family;
  out["pass"] = r.pass;
  out["checks"] = json::array();
  for (const auto& c : r.checks) out["checks"].push_back(case_check_json(c));
  out["notes"] = r.notes;
  return out;
}

inline SmoothMap build_map(const RunConfig& cfg, const std::string& name,
                           const std::map<std::string, ChartPtr>& charts) {
  const MapSpec& spec = cfg.maps.at(name);
  ChartPtr src = charts.at(spec.source);
  ChartPtr tgt = charts.at(spec.target);
  std::vector<ExprAst> comps;
  for (const std::string& c : spec.components) comps.push_back(src->parse_member(c));
  return SmoothMap(name, std::move(src), std::move(tgt), std::move(comps));
}

inline json run_classify_map(const RunConfig& cfg, const TaskSpec& t,
                             const std::map<std::string, ChartPtr>& charts) {
  SmoothMap map = build_map(cfg, t.map, charts);
  std::vector<Point> pts = sample_points(map.source(), cfg.sampling.n_points, cfg.sampling.seed);
  MapClassification rep = classify_map(map, pts, cfg.tolerances.verdict);
  json out;
  out["harmonic"] = rep.harmonic;
  out["hs"] = rep.hs;
  out["hm"] = rep.hm;
  out["tau_residual"] = rep.tau_residual;
  out["laplacian_residual"] = rep.laplacian_residual;
  out["pairing_residual"] = rep.pairing_residual;
  out["tau_per_point"] = rep.tau_per_point;
  out["laplacian_per_point"] = rep.laplacian_per_point;
  out["pairing_per_point"] = rep.pairing_per_point;
  out["points"] = points_json(pts);
  return out;
}

inline json run_classify_submanifold(const RunConfig& cfg, const TaskSpec& t,
                                     const std::map<std::string, ChartPtr>& charts) {
  SmoothMap map = build_map(cfg, t.map, charts);
  std::vector<Point> pts = sample_points(map.source(), cfg.sampling.n_points, cfg.sampling.seed);
  Immersion im = Immersion::create(map, pts, cfg.tolerances.isometry);
  SubmanifoldClassification rep = classify_submanifold(im, pts, cfg.tolerances.verdict);
  UmbilicalReport um = pseudo_umbilical_check(im, pts, cfg.tolerances.comparison);
  json out;
  out["verdict"] = to_string(rep.verdict);
  out["hm"] = rep.hm;
  out["mean_residual"] = rep.mean_residual;
  out["normal_residual"] = rep.normal_residual;
  out["tangential_residual"] = rep.tangential_residual;
  out["hm_residual"] = rep.hm_residual;
  out["split_residual"] = rep.split_residual;
  out["normal_per_point"] = rep.normal_per_point;
  out["tangential_per_point"] = rep.tangential_per_point;
  out["umbilical"] = {{"verdict", to_string(um.verdict)}, {"max_residual", um.max_residual}};
  out["points"] = points_json(pts);
  return out;
}

inline json run_classify_curve(const RunConfig& cfg, const TaskSpec& t,
                               const std::map<std::string, ChartPtr>& charts) {
  SmoothMap map = build_map(cfg, t.map, charts);
  std::vector<Point> pts = sample_points(map.source(), cfg.sampling.n_points, cfg.sampling.seed);
  ArclengthReport arc = verify_arclength(map, pts, cfg.tolerances.arclength);
  Curve curve = Curve::create(map, pts, cfg.tolerances.arclength);
  CurveClassification rep = classify_curve(curve, pts, cfg.tolerances.verdict);
  json out;
  out["verdict"] = to_string(rep.verdict);
  out["hs"] = rep.hs;
  out["hm"] = rep.hm;
  out["max_chi1"] = rep.max_chi1;
  out["system_residual"] = rep.system_residual;
  out["frenet_residual"] = rep.frenet_residual;
  out["hm_pairing"] = rep.hm_pairing;
  out["system_per_point"] = rep.system_per_point;
  out["curvature_max"] = rep.curvature_max;
  out["speed_residual"] = arc.max_speed_residual;
  out["points"] = points_json(pts);
  return out;
}

inline json rough_report_json(const RoughTypeReport& rep) {
  json out;
  out["passes"] = rep.passes;
  out["max_residual"] = rep.max_residual;
  out["per_point"] = rep.per_point;
  return out;
}

inline json run_check_rough_type(const RunConfig& cfg, const TaskSpec& t,
                                 const std::map<std::string, ChartPtr>& charts) {
  const FieldSpec& spec = cfg.fields.at(t.field);
  ChartPtr chart = charts.at(spec.chart);
  std::vector<ExprAst> field;
  for (const std::string& c : spec.components) field.push_back(chart->parse_member(c));
  std::vector<Point> pts = sample_points(*chart, cfg.sampling.n_points, cfg.sampling.seed);
  json out;
  out["field"] = t.field;
  out["mode"] = t.mode;
  if (t.mode == "tensorial" || t.mode == "both")
    out["tensorial"] = rough_report_json(
        rough_type_check(*chart, field, pts, RoughMode::Tensorial, cfg.tolerances.comparison));
  if (t.mode == "coordinate" || t.mode == "both") {
    if (t.mode == "coordinate") {
      // the caller asked for this mode specifically, so let ModeUnsupported escape
      out["coordinate"] = rough_report_json(
          rough_type_check(*chart, field, pts, RoughMode::Coordinate, cfg.tolerances.comparison));
    } else {
      try {
        out["coordinate"] = rough_report_json(
            rough_type_check(*chart, field, pts, RoughMode::Coordinate, cfg.tolerances.comparison));
      } catch (const ModeUnsupported& e) {
        out["coordinate"] = {{"supported", false}, {"reason", e.what()}};
      }
    }
  }
  bool passes = true;
  if (out.contains("tensorial")) passes = passes && out["tensorial"]["passes"].get<bool>();
  if (out.contains("coordinate") && out["coordinate"].contains("passes"))
    passes = passes && out["coordinate"]["passes"].get<bool>();
  out["passes"] = passes;
  out["points"] = points_json(pts);
  return out;
}

inline json run_check_convex(const RunConfig& cfg, const TaskSpec& t,
                             const std::map<std::string, ChartPtr>& charts) {
  const ScalarSpec& spec = cfg.scalars.at(t.scalar);
  ChartPtr chart = charts.at(spec.chart);
  ExprAst f = chart->parse_member(spec.expression);
  std::vector<Point> pts = sample_points(*chart, cfg.sampling.n_points, cfg.sampling.seed);
  bool convex = true;
  double min_eig = std::numeric_limits<double>::infinity();
  std::vector<double> per_point;
  for (const Point& p : pts) {
    ConvexityReport rep = is_strongly_convex_at(*chart, f, p);
    convex = convex && rep.strongly_convex;
    min_eig = std::min(min_eig, rep.min_eigenvalue);
    per_point.push_back(rep.min_eigenvalue);
  }
  json out;
  out["scalar"] = t.scalar;
  out["strongly_convex"] = convex;
  out["min_eigenvalue"] = min_eig;
  out["per_point"] = per_point;
  out["points"] = points_json(pts);
  return out;
}

inline json run_energy(const RunConfig& cfg, const TaskSpec& t,
                       const std::map<std::string, ChartPtr>& charts) {
  SmoothMap map = build_map(cfg, t.map, charts);
  json out;
  out["value"] = energy(map, t.subdivisions);
  out["subdivisions"] = t.subdivisions;
  return out;
}

inline json run_casebook(const RunConfig& cfg, const TaskSpec& t) {
  json out;
  if (t.case_id == "all") {
    SuiteSummary s = run_all(static_cast<unsigned>(cfg.sampling.seed),
                                           cfg.tolerances.comparison);
    out["total"] = s.total;
    out["passed"] = s.passed;
    out["pass"] = s.pass;
    out["cases"] = json::array();
    for (const auto& r : s.reports) out["cases"].push_back(case_report_json(r));
  } else {
    CaseReport r = run_case(t.case_id, static_cast<unsigned>(cfg.sampling.seed),
                                          cfg.tolerances.comparison);
    out = case_report_json(r);
  }
  return out;
}

struct TaskRun {
  json record;
  bool error = false;
  bool mismatch = false;
  double ms = 0.0;
};

inline TaskRun run_one(const RunConfig& cfg, std::size_t idx,
                       const std::map<std::string, ChartPtr>& charts) {
  const TaskSpec& t = cfg.tasks[idx];
  TaskRun out;
  json rec;
  rec["index"] = idx;
  rec["task"] = t.task;
  if (!t.map.empty()) rec["map"] = t.map;
  if (!t.field.empty()) rec["field"] = t.field;
  if (!t.scalar.empty()) rec["scalar"] = t.scalar;
  if (!t.case_id.empty()) rec["case"] = t.case_id;
  auto start = std::chrono::steady_clock::now();
  try {
    json result;
    if (t.task == "classify_map")
      result = run_classify_map(cfg, t, charts);
    else if (t.task == "classify_submanifold")
      result = run_classify_submanifold(cfg, t, charts);
    else if (t.task == "classify_curve")
      result = run_classify_curve(cfg, t, charts);
    else if (t.task == "check_rough_type")
      result = run_check_rough_type(cfg, t, charts);
    else if (t.task == "check_convex")
      result = run_check_convex(cfg, t, charts);
    else if (t.task == "energy")
      result = run_energy(cfg, t, charts);
    else
      result = run_casebook(cfg, t);
    rec["status"] = "ok";
    rec["result"] = std::move(result);
    if (!t.expect.is_null() && !t.expect.empty()) {
      rec["expect"] = t.expect;
      bool m = expect_matches(t.expect, rec["result"], cfg.tolerances.comparison);
      rec["expect_match"] = m;
      out.mismatch = !m;
    }
  } catch (const Error& e) {
    rec["status"] = "error";
    rec["error"] = e.what();
    out.error = true;
  }
  out.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
               .count();
  out.record = std::move(rec);
  return out;
}

}  // namespace detail_engine

inline json run(const RunConfig& cfg, bool parallel = false) {
  using namespace detail_engine;
  auto total_start = std::chrono::steady_clock::now();
  std::map<std::string, ChartPtr> charts;
  for (const auto& [name, spec] : cfg.manifolds) charts[name] = build_chart(name, spec);

  std::vector<TaskRun> runs(cfg.tasks.size());
  if (parallel && cfg.tasks.size() > 1) {
    std::vector<std::future<TaskRun>> futs;
    futs.reserve(cfg.tasks.size());
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i)
      futs.push_back(std::async(std::launch::async,
                                [&cfg, &charts, i] { return run_one(cfg, i, charts); }));
    for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i) runs[i] = run_one(cfg, i, charts);
  }

  json rep;
  rep["schema_version"] = 1;
  rep["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rep["config_digest"] = cfg.digest;
  rep["sampling"] = {{"seed", cfg.sampling.seed},
                     {"n_points", cfg.sampling.n_points},
                     {"jet_order", cfg.sampling.jet_order}};
  rep["tolerances"] = {{"verdict", cfg.tolerances.verdict},
                       {"comparison", cfg.tolerances.comparison},
                       {"isometry", cfg.tolerances.isometry},
                       {"arclength", cfg.tolerances.arclength}};
  rep["tasks"] = json::array();
  int errors = 0, mismatches = 0;
  json per_task_ms = json::array();
  for (const TaskRun& r : runs) {
    rep["tasks"].push_back(r.record);
    errors += r.error ? 1 : 0;
    mismatches += r.mismatch ? 1 : 0;
    per_task_ms.push_back(r.ms);
  }
  rep["summary"] = {{"tasks", cfg.tasks.size()},
                    {"errors", errors},
                    {"expect_mismatches", mismatches},
                    {"ok", errors == 0 && mismatches == 0}};
  rep["timings"] = {
      {"total_ms",
       std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - total_start)
           .count()},
      {"per_task_ms", per_task_ms}};
  return rep;
}

// exit code the CLI should use for a finished report
inline int report_exit_code(const json& rep) {
  const json& s = rep["summary"];
  if (s["errors"].get<int>() > 0) return 3;
  if (s["expect_mismatches"].get<int>() > 0) return 1;
  return 0;
}

inline std::string render_text(const json& rep) {
  std::ostringstream os;
  os << rep["tool"]["name"].get<std::string>() << " " << rep["tool"]["version"].get<std::string>()
     << "  digest " << rep["config_digest"].get<std::string>() << "\n";
  for (const json& t : rep["tasks"]) {
    os << "task " << t["index"] << " " << t["task"].get<std::string>();
    for (const char* key : {"map", "field", "scalar", "case"})
      if (t.contains(key)) os << " " << key << "=" << t[key].get<std::string>();
    os << ": " << t["status"].get<std::string>();
    if (t["status"] == "error") {
      os << "\n  " << t["error"].get<std::string>() << "\n";
      continue;
    }
    const json& r = t["result"];
    for (const char* key : {"verdict", "harmonic", "hs", "hm", "passes", "strongly_convex"})
      if (r.contains(key)) os << " " << key << "=" << r[key].dump();
    if (r.contains("value")) os << " value=" << r["value"].dump();
    if (r.contains("pass")) os << " pass=" << r["pass"].dump();
    if (r.contains("total")) os << " cases=" << r["passed"].dump() << "/" << r["total"].dump();
    if (t.contains("expect_match"))
      os << " expect=" << (t["expect_match"].get<bool>() ? "match" : "MISMATCH");
    os << "\n";
    if (r.contains("checks"))
      for (const json& c : r["checks"])
        if (!c["pass"].get<bool>())
          os << "  FAIL " << c["quantity"].get<std::string>() << " value=" << c["value"].dump()
             << " expected=" << c["expected"].dump() << "\n";
    if (r.contains("cases"))
      for (const json& cr : r["cases"])
        os << "  " << (cr["pass"].get<bool>() ? "pass" : "FAIL") << " "
           << cr["id"].get<std::string>() << "\n";
  }
  const json& s = rep["summary"];
  os << "summary: " << s["tasks"] << " tasks, " << s["errors"] << " errors, "
     << s["expect_mismatches"] << " expectation mismatches -> "
     << (s["ok"].get<bool>() ? "ok" : "failing") << "\n";
  return os.str();
}

}  // namespace tensional

#endif
