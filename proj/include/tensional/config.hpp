#ifndef TENSIONAL_CONFIG_HPP
#define TENSIONAL_CONFIG_HPP

// Run configuration: one JSON document declaring charts, maps, vector fields,
// scalar functions, and an ordered task list. Loading validates the whole
// tree and reports every problem at once, each tagged with a JSON-pointer
// path. Numeric values may be written as expression strings ("2+sqrt(2)") so
// irrational parameters stay exact in the file.

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tensional/chart.hpp"
#include "tensional/errors.hpp"
#include "tensional/expr.hpp"

namespace tensional {

using json = nlohmann::ordered_json;

struct ManifoldSpec {
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<std::vector<std::string>> metric;  // upper-triangle rows: row i has dim-i entries
  std::map<std::string, std::pair<double, double>> domain;      // by coordinate name
  std::map<std::string, std::pair<double, double>> sample_box;  // by coordinate name
  std::string guard;  // optional positivity guard expression
  Params parameters;
};

struct MapSpec {
  std::string source;
  std::string target;
  std::vector<std::string> components;
};

struct FieldSpec {
  std::string chart;
  std::vector<std::string> components;
};

struct ScalarSpec {
  std::string chart;
  std::string expression;
};

struct TaskSpec {
  std::string task;
  std::string map;            // classify_map / classify_submanifold / classify_curve / energy
  std::string field;          // check_rough_type
  std::string scalar;         // check_convex
  std::string mode = "both";  // check_rough_type: tensorial | coordinate | both
  std::string case_id;        // casebook: a case id, or "all"
  int subdivisions = 16;      // energy quadrature
  json expect;                // optional expected outcomes, matched after the task runs
};

struct SamplingSpec {
  std::uint64_t seed = 42;
  int n_points = 10;
  int jet_order = 2;
};

struct ToleranceSpec {
  double verdict = 1e-7;
  double comparison = 1e-8;
  double isometry = 1e-9;
  double arclength = 1e-8;
};

struct OutputSpec {
  std::string format = "json";  // json | text
  std::string path;             // empty: stdout
};

struct RunConfig {
  std::map<std::string, ManifoldSpec> manifolds;
  std::map<std::string, MapSpec> maps;
  std::map<std::string, FieldSpec> fields;
  std::map<std::string, ScalarSpec> scalars;
  std::vector<TaskSpec> tasks;
  SamplingSpec sampling;
  ToleranceSpec tolerances;
  OutputSpec output;
  std::string digest;  // stable hash of the canonical serialized form
};

namespace detail_config {

struct Problems {
  std::vector<std::string> items;
  void add(const std::string& path, const std::string& msg) { items.push_back(path + ": " + msg); }
  bool empty() const { return items.empty(); }
};

// FNV-1a over the canonical dump; stable across runs and platforms.
inline std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return "fnv1a:" + os.str();
}

// numbers may be JSON numbers or constant expression strings
inline bool read_number(const json& v, double& out, std::string& err) {
  if (v.is_number()) {
    out = v.get<double>();
    return true;
  }
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") {
      out = std::numeric_limits<double>::infinity();
      return true;
    }
    if (s == "-inf") {
      out = -std::numeric_limits<double>::infinity();
      return true;
    }
    try {
      ExprAst ast = parse(s, {"t"}, {});
      out = eval_jet(ast, Point{0.0}, 0).value();
      return true;
    } catch (const Error& e) {
      err = std::string("cannot evaluate '") + s + "' as a number: " + e.what();
      return false;
    }
  }
  err = "expected a number or a constant expression string";
  return false;
}

inline bool read_string(const json& v, std::string& out, std::string& err) {
  if (!v.is_string()) {
    err = "expected a string";
    return false;
  }
  out = v.get<std::string>();
  return true;
}

inline void check_keys(const json& obj, const std::string& path,
                       const std::vector<std::string>& allowed, Problems& pr) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const std::string& k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) pr.add(path + "/" + it.key(), "unknown key");
  }
}

inline void parse_interval_map(const json& v, const std::string& path,
                               const std::vector<std::string>& coords,
                               std::map<std::string, std::pair<double, double>>& out, Problems& pr) {
  if (!v.is_object()) {
    pr.add(path, "expected an object keyed by coordinate name");
    return;
  }
  for (auto it = v.begin(); it != v.end(); ++it) {
    const std::string& name = it.key();
    bool known = false;
    for (const std::string& c : coords) known = known || c == name;
    if (!known) {
      pr.add(path + "/" + name, "not a coordinate of this manifold");
      continue;
    }
    if (!it.value().is_array() || it.value().size() != 2) {
      pr.add(path + "/" + name, "expected [lo, hi]");
      continue;
    }
    double lo = 0, hi = 0;
    std::string err;
    if (!read_number(it.value()[0], lo, err)) {
      pr.add(path + "/" + name + "/0", err);
      continue;
    }
    if (!read_number(it.value()[1], hi, err)) {
      pr.add(path + "/" + name + "/1", err);
      continue;
    }
    if (!(lo < hi)) {
      pr.add(path + "/" + name, "lower bound must be below the upper bound");
      continue;
    }
    out[name] = {lo, hi};
  }
}

inline ManifoldSpec parse_manifold(const json& v, const std::string& path, Problems& pr) {
  ManifoldSpec spec;
  if (!v.is_object()) {
    pr.add(path, "expected an object");
    return spec;
  }
  check_keys(v, path, {"dim", "coords", "metric", "domain", "sample_box", "guard", "parameters"}, pr);
  if (!v.contains("dim") || !v["dim"].is_number_integer() || v["dim"].get<int>() < 1)
    pr.add(path + "/dim", "expected a positive integer");
  else
    spec.dim = v["dim"].get<int>();
  if (!v.contains("coords") || !v["coords"].is_array())
    pr.add(path + "/coords", "expected an array of coordinate names");
  else {
    for (std::size_t i = 0; i < v["coords"].size(); ++i) {
      std::string c, err;
      if (!read_string(v["coords"][i], c, err) || c.empty())
        pr.add(path + "/coords/" + std::to_string(i), "expected a nonempty string");
      else
        spec.coords.push_back(c);
    }
    for (std::size_t i = 0; i < spec.coords.size(); ++i)
      for (std::size_t j = i + 1; j < spec.coords.size(); ++j)
        if (spec.coords[i] == spec.coords[j])
          pr.add(path + "/coords", "duplicate coordinate name '" + spec.coords[i] + "'");
    if (spec.dim > 0 && static_cast<int>(spec.coords.size()) != spec.dim)
      pr.add(path + "/coords", "expected " + std::to_string(spec.dim) + " names, got " +
                                   std::to_string(spec.coords.size()));
  }
  if (v.contains("parameters")) {
    if (!v["parameters"].is_object())
      pr.add(path + "/parameters", "expected an object of name -> number");
    else
      for (auto it = v["parameters"].begin(); it != v["parameters"].end(); ++it) {
        double val = 0;
        std::string err;
        if (!read_number(it.value(), val, err))
          pr.add(path + "/parameters/" + it.key(), err);
        else
          spec.parameters[it.key()] = val;
      }
  }
  // expressions are validated by parsing against coords + parameters
  auto try_parse = [&](const std::string& text, const std::string& at) {
    try {
      parse(text, spec.coords, spec.parameters);
    } catch (const Error& e) {
      pr.add(at, e.what());
    }
  };
  if (!v.contains("metric") || !v["metric"].is_array())
    pr.add(path + "/metric", "expected an array of upper-triangle rows");
  else if (spec.dim > 0 && static_cast<int>(spec.coords.size()) == spec.dim) {
    const json& rows = v["metric"];
    if (static_cast<int>(rows.size()) != spec.dim)
      pr.add(path + "/metric", "expected " + std::to_string(spec.dim) + " rows, got " +
                                   std::to_string(rows.size()));
    else
      for (int i = 0; i < spec.dim; ++i) {
        if (!rows[static_cast<std::size_t>(i)].is_array() ||
            static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != spec.dim - i) {
          pr.add(path + "/metric/" + std::to_string(i),
                 "row " + std::to_string(i) + " must list the " + std::to_string(spec.dim - i) +
                     " upper-triangle entries g(" + std::to_string(i) + ",j), j >= " +
                     std::to_string(i));
          continue;
        }
        std::vector<std::string> row;
        for (int j = 0; j < spec.dim - i; ++j) {
          std::string e, err;
          const json& cell = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          std::string at = path + "/metric/" + std::to_string(i) + "/" + std::to_string(j);
          if (cell.is_number()) {
            e = detail::format_double(cell.get<double>());
          } else if (!read_string(cell, e, err)) {
            pr.add(at, err);
            continue;
          }
          try_parse(e, at);
          row.push_back(e);
        }
        spec.metric.push_back(std::move(row));
      }
  }
  if (v.contains("guard")) {
    std::string err;
    if (!read_string(v["guard"], spec.guard, err))
      pr.add(path + "/guard", err);
    else
      try_parse(spec.guard, path + "/guard");
  }
  if (!spec.coords.empty()) {
    if (v.contains("domain")) parse_interval_map(v["domain"], path + "/domain", spec.coords, spec.domain, pr);
    if (v.contains("sample_box"))
      parse_interval_map(v["sample_box"], path + "/sample_box", spec.coords, spec.sample_box, pr);
  }
  return spec;
}

inline void parse_components(const json& v, const std::string& path, std::vector<std::string>& out,
                             Problems& pr) {
  if (!v.is_array() || v.empty()) {
    pr.add(path, "expected a nonempty array of expression strings");
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string s, err;
    if (!read_string(v[i], s, err))
      pr.add(path + "/" + std::to_string(i), err);
    else
      out.push_back(s);
  }
}

}  // namespace detail_config

inline RunConfig parse_config(const json& doc) {
  using namespace detail_config;
  Problems pr;
  RunConfig cfg;
  if (!doc.is_object()) throw ValidationError({std::string("/: expected a JSON object")});
  check_keys(doc, "", {"schema_version", "manifolds", "maps", "fields", "scalars", "tasks",
                       "sampling", "tolerances", "output"},
             pr);
  if (doc.contains("schema_version") &&
      !(doc["schema_version"].is_number_integer() && doc["schema_version"].get<int>() == 1))
    pr.add("/schema_version", "this tool reads schema version 1");

  if (doc.contains("manifolds")) {
    if (!doc["manifolds"].is_object())
      pr.add("/manifolds", "expected an object keyed by manifold name");
    else
      for (auto it = doc["manifolds"].begin(); it != doc["manifolds"].end(); ++it)
        cfg.manifolds[it.key()] = parse_manifold(it.value(), "/manifolds/" + it.key(), pr);
  }

  auto chart_exists = [&](const std::string& n) { return cfg.manifolds.count(n) > 0; };
  auto chart_dim = [&](const std::string& n) { return cfg.manifolds.at(n).dim; };

  if (doc.contains("maps")) {
    if (!doc["maps"].is_object())
      pr.add("/maps", "expected an object keyed by map name");
    else
      for (auto it = doc["maps"].begin(); it != doc["maps"].end(); ++it) {
        const std::string path = "/maps/" + it.key();
        const json& v = it.value();
        MapSpec spec;
        if (!v.is_object()) {
          pr.add(path, "expected an object");
          continue;
        }
        check_keys(v, path, {"source", "target", "components"}, pr);
        std::string err;
        if (!v.contains("source") || !read_string(v["source"], spec.source, err))
          pr.add(path + "/source", "expected the name of a declared manifold");
        else if (!chart_exists(spec.source))
          pr.add(path + "/source", "unknown manifold '" + spec.source + "'");
        if (!v.contains("target") || !read_string(v["target"], spec.target, err))
          pr.add(path + "/target", "expected the name of a declared manifold");
        else if (!chart_exists(spec.target))
          pr.add(path + "/target", "unknown manifold '" + spec.target + "'");
        if (!v.contains("components"))
          pr.add(path + "/components", "expected an array of expression strings");
        else
          parse_components(v["components"], path + "/components", spec.components, pr);
        if (chart_exists(spec.source) && chart_exists(spec.target) && !spec.components.empty()) {
          if (static_cast<int>(spec.components.size()) != chart_dim(spec.target))
            pr.add(path + "/components", "expected " + std::to_string(chart_dim(spec.target)) +
                                             " components (target dimension), got " +
                                             std::to_string(spec.components.size()));
          const ManifoldSpec& src = cfg.manifolds.at(spec.source);
          for (std::size_t i = 0; i < spec.components.size(); ++i)
            try {
              parse(spec.components[i], src.coords, src.parameters);
            } catch (const Error& e) {
              pr.add(path + "/components/" + std::to_string(i), e.what());
            }
        }
        cfg.maps[it.key()] = std::move(spec);
      }
  }

  if (doc.contains("fields")) {
    if (!doc["fields"].is_object())
      pr.add("/fields", "expected an object keyed by field name");
    else
      for (auto it = doc["fields"].begin(); it != doc["fields"].end(); ++it) {
        const std::string path = "/fields/" + it.key();
        const json& v = it.value();
        FieldSpec spec;
        if (!v.is_object()) {
          pr.add(path, "expected an object");
          continue;
        }
        check_keys(v, path, {"chart", "components"}, pr);
        std::string err;
        if (!v.contains("chart") || !read_string(v["chart"], spec.chart, err))
          pr.add(path + "/chart", "expected the name of a declared manifold");
        else if (!chart_exists(spec.chart))
          pr.add(path + "/chart", "unknown manifold '" + spec.chart + "'");
        if (!v.contains("components"))
          pr.add(path + "/components", "expected an array of expression strings");
        else
          parse_components(v["components"], path + "/components", spec.components, pr);
        if (chart_exists(spec.chart) && !spec.components.empty()) {
          if (static_cast<int>(spec.components.size()) != chart_dim(spec.chart))
            pr.add(path + "/components",
                   "expected " + std::to_string(chart_dim(spec.chart)) + " components, got " +
                       std::to_string(spec.components.size()));
          const ManifoldSpec& ch = cfg.manifolds.at(spec.chart);
          for (std::size_t i = 0; i < spec.components.size(); ++i)
            try {
              parse(spec.components[i], ch.coords, ch.parameters);
            } catch (const Error& e) {
              pr.add(path + "/components/" + std::to_string(i), e.what());
            }
        }
        cfg.fields[it.key()] = std::move(spec);
      }
  }

  if (doc.contains("scalars")) {
    if (!doc["scalars"].is_object())
      pr.add("/scalars", "expected an object keyed by scalar name");
    else
      for (auto it = doc["scalars"].begin(); it != doc["scalars"].end(); ++it) {
        const std::string path = "/scalars/" + it.key();
        const json& v = it.value();
        ScalarSpec spec;
        if (!v.is_object()) {
          pr.add(path, "expected an object");
          continue;
        }
        check_keys(v, path, {"chart", "expression"}, pr);
        std::string err;
        if (!v.contains("chart") || !read_string(v["chart"], spec.chart, err))
          pr.add(path + "/chart", "expected the name of a declared manifold");
        else if (!chart_exists(spec.chart))
          pr.add(path + "/chart", "unknown manifold '" + spec.chart + "'");
        if (!v.contains("expression") || !read_string(v["expression"], spec.expression, err))
          pr.add(path + "/expression", "expected an expression string");
        else if (chart_exists(spec.chart)) {
          const ManifoldSpec& ch = cfg.manifolds.at(spec.chart);
          try {
            parse(spec.expression, ch.coords, ch.parameters);
          } catch (const Error& e) {
            pr.add(path + "/expression", e.what());
          }
        }
        cfg.scalars[it.key()] = std::move(spec);
      }
  }

  static const std::vector<std::string> kTasks = {
      "classify_map", "classify_submanifold", "classify_curve", "check_rough_type",
      "check_convex", "energy",               "casebook"};
  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array())
      pr.add("/tasks", "expected an array of task records");
    else
      for (std::size_t i = 0; i < doc["tasks"].size(); ++i) {
        const std::string path = "/tasks/" + std::to_string(i);
        const json& v = doc["tasks"][i];
        TaskSpec spec;
        if (!v.is_object()) {
          pr.add(path, "expected an object");
          continue;
        }
        check_keys(v, path, {"task", "map", "field", "scalar", "mode", "case", "subdivisions",
                             "expect"},
                   pr);
        std::string err;
        if (!v.contains("task") || !read_string(v["task"], spec.task, err)) {
          pr.add(path + "/task", "expected one of: classify_map, classify_submanifold, "
                                 "classify_curve, check_rough_type, check_convex, energy, casebook");
          continue;
        }
        bool known = false;
        for (const std::string& t : kTasks) known = known || t == spec.task;
        if (!known) {
          pr.add(path + "/task", "unknown task '" + spec.task + "'");
          continue;
        }
        bool needs_map = spec.task == "classify_map" || spec.task == "classify_submanifold" ||
                         spec.task == "classify_curve" || spec.task == "energy";
        if (needs_map) {
          if (!v.contains("map") || !read_string(v["map"], spec.map, err))
            pr.add(path + "/map", "task '" + spec.task + "' needs a map name");
          else if (cfg.maps.count(spec.map) == 0)
            pr.add(path + "/map", "unknown map '" + spec.map + "'");
        }
        if (spec.task == "check_rough_type") {
          if (!v.contains("field") || !read_string(v["field"], spec.field, err))
            pr.add(path + "/field", "task 'check_rough_type' needs a field name");
          else if (cfg.fields.count(spec.field) == 0)
            pr.add(path + "/field", "unknown field '" + spec.field + "'");
          if (v.contains("mode")) {
            if (!read_string(v["mode"], spec.mode, err) ||
                (spec.mode != "tensorial" && spec.mode != "coordinate" && spec.mode != "both"))
              pr.add(path + "/mode", "expected tensorial, coordinate, or both");
          }
        }
        if (spec.task == "check_convex") {
          if (!v.contains("scalar") || !read_string(v["scalar"], spec.scalar, err))
            pr.add(path + "/scalar", "task 'check_convex' needs a scalar name");
          else if (cfg.scalars.count(spec.scalar) == 0)
            pr.add(path + "/scalar", "unknown scalar '" + spec.scalar + "'");
        }
        if (spec.task == "energy" && v.contains("subdivisions")) {
          if (!v["subdivisions"].is_number_integer() || v["subdivisions"].get<int>() < 1)
            pr.add(path + "/subdivisions", "expected a positive integer");
          else
            spec.subdivisions = v["subdivisions"].get<int>();
        }
        if (spec.task == "casebook") {
          if (!v.contains("case") || !read_string(v["case"], spec.case_id, err) ||
              spec.case_id.empty())
            pr.add(path + "/case", "task 'casebook' needs a case id or \"all\"");
        }
        if (v.contains("expect")) {
          if (!v["expect"].is_object())
            pr.add(path + "/expect", "expected an object");
          else
            spec.expect = v["expect"];
        }
        cfg.tasks.push_back(std::move(spec));
      }
  }

  if (doc.contains("sampling")) {
    const json& v = doc["sampling"];
    if (!v.is_object())
      pr.add("/sampling", "expected an object");
    else {
      check_keys(v, "/sampling", {"seed", "n_points", "jet_order"}, pr);
      if (v.contains("seed")) {
        if (!v["seed"].is_number_integer() || v["seed"].get<std::int64_t>() < 0)
          pr.add("/sampling/seed", "expected a non-negative integer");
        else
          cfg.sampling.seed = v["seed"].get<std::uint64_t>();
      }
      if (v.contains("n_points")) {
        if (!v["n_points"].is_number_integer() || v["n_points"].get<int>() < 1)
          pr.add("/sampling/n_points", "expected a positive integer");
        else
          cfg.sampling.n_points = v["n_points"].get<int>();
      }
      if (v.contains("jet_order")) {
        if (!v["jet_order"].is_number_integer() || v["jet_order"].get<int>() < 2 ||
            v["jet_order"].get<int>() > 6)
          pr.add("/sampling/jet_order", "expected an integer between 2 and 6");
        else
          cfg.sampling.jet_order = v["jet_order"].get<int>();
      }
    }
  }

  if (doc.contains("tolerances")) {
    const json& v = doc["tolerances"];
    if (!v.is_object())
      pr.add("/tolerances", "expected an object");
    else {
      check_keys(v, "/tolerances", {"verdict", "comparison", "isometry", "arclength"}, pr);
      auto grab = [&](const char* key, double& slot) {
        if (!v.contains(key)) return;
        double val = 0;
        std::string err;
        if (!read_number(v[key], val, err) || !(val > 0))
          pr.add(std::string("/tolerances/") + key, "expected a positive number");
        else
          slot = val;
      };
      grab("verdict", cfg.tolerances.verdict);
      grab("comparison", cfg.tolerances.comparison);
      grab("isometry", cfg.tolerances.isometry);
      grab("arclength", cfg.tolerances.arclength);
    }
  }

  if (doc.contains("output")) {
    const json& v = doc["output"];
    if (!v.is_object())
      pr.add("/output", "expected an object");
    else {
      check_keys(v, "/output", {"format", "path"}, pr);
      std::string err;
      if (v.contains("format")) {
        if (!read_string(v["format"], cfg.output.format, err) ||
            (cfg.output.format != "json" && cfg.output.format != "text"))
          pr.add("/output/format", "expected \"json\" or \"text\"");
      }
      if (v.contains("path") && !read_string(v["path"], cfg.output.path, err))
        pr.add("/output/path", err);
    }
  }

  if (!pr.empty()) throw ValidationError(std::move(pr.items));
  cfg.digest = detail_config::fnv1a_digest(doc.dump());
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(ParseErrorKind::Syntax, 0, "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::Syntax, static_cast<std::size_t>(e.byte),
                     "config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace tensional

#endif
