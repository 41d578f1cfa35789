#ifndef TENSIONAL_CASEBOOK_HPP
#define TENSIONAL_CASEBOOK_HPP

// A registry of worked examples with pinned expected values: conformal maps
// with closed-form tension data, round spheres and minimal patches, classical
// curves, and the rough-type and convexity checks. Each case builds its
// fixture from scratch, runs the engine, and compares against the recorded
// values, so one command re-verifies everything the library claims.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "tensional/chart.hpp"
#include "tensional/curve.hpp"
#include "tensional/errors.hpp"
#include "tensional/expr.hpp"
#include "tensional/maps.hpp"
#include "tensional/riemann.hpp"
#include "tensional/submanifold.hpp"

namespace tensional {

// ---- fixture builders -------------------------------------------------------------------
// Exposed so tests can drive the same geometry directly.

namespace cases {

// R^m minus a ball, restricted to the shell 0.5 <= |x| <= 2 where the
// inversion-type maps are regular.
inline ChartPtr euclidean_shell(int m) {
  auto c = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(m, "shell"));
  std::string n = "norm(x1";
  for (int i = 2; i <= m; ++i) n += ",x" + std::to_string(i);
  n += ")";
  c->set_guard("(" + n + "-0.5)*(2-" + n + ")");
  return c;
}

// x -> x / |x|^l between Euclidean spaces.
inline SmoothMap kelvin_map(int m, double l) {
  ChartPtr src = euclidean_shell(m);
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(m, "target"));
  std::string n = "norm(x1";
  for (int i = 2; i <= m; ++i) n += ",x" + std::to_string(i);
  n += ")";
  std::vector<ExprAst> comps;
  for (int i = 1; i <= m; ++i)
    comps.push_back(parse("x" + std::to_string(i) + "/" + n + "^l", src->coords(), Params{{"l", l}}));
  return SmoothMap("kelvin", src, ChartPtr(std::move(tgt)), std::move(comps));
}

// tau(psi) = l(l-m) |x|^{-2-l} x, and its rough Laplacian carries the extra
// factor -(-2-l)(-2+m-l) |x|^{-2}; both vanish iff the coefficient does.
inline double kelvin_tension_coefficient(int m, double l) { return l * (l - m); }
inline double kelvin_laplacian_coefficient(int m, double l) {
  return -l * (l - m) * (-2.0 - l) * (-2.0 + m - l);
}

// Upper half-space {z > 0} with the conformal metric z^{-2p} (dx^2+dy^2+dz^2);
// p = 1 is the hyperbolic metric of curvature -1.
inline ChartPtr conformal_upper_half_space(double p, const std::string& name, const char* c1,
                                           const char* c2, const char* c3) {
  auto c = std::make_shared<RiemannianChart>(name, std::vector<std::string>{c1, c2, c3},
                                             Params{{"p", p}});
  std::string e = std::string(c3) + "^(-2*p)";
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) c->set_metric_entry(i, j, i == j ? e : std::string("0"));
  c->set_domain(2, 1e-9, std::numeric_limits<double>::infinity());
  c->set_sample_box(0, -2, 2);
  c->set_sample_box(1, -2, 2);
  c->set_sample_box(2, 0.5, 2);
  return c;
}

// The identity of the upper half-space, viewed from the z^{-2p} metric into
// the hyperbolic one.
inline SmoothMap hyperbolic_identity(double p) {
  ChartPtr src = conformal_upper_half_space(p, "half_space_p", "x", "y", "z");
  ChartPtr tgt = conformal_upper_half_space(1.0, "half_space", "u", "v", "w");
  std::vector<ExprAst> comps;
  comps.push_back(src->parse_member("x"));
  comps.push_back(src->parse_member("y"));
  comps.push_back(src->parse_member("z"));
  return SmoothMap("half_space_identity", src, tgt, std::move(comps));
}

// Round sphere of radius r and dimension m in angular coordinates. The
// coordinate order is chosen so the orientation-completed unit normal points
// inward, which fixes the sign of the mean curvature pairing.
inline ChartPtr sphere_chart(double r, int m) {
  if (m < 2 || m > 4) throw ValidationError("sphere case supports dimensions 2 through 4");
  if (!(r > 0)) throw ValidationError("sphere case needs a positive radius");
  std::vector<int> order;  // chart position -> angle index (1-based)
  for (int k = 1; k <= m; ++k) order.push_back(k);
  if (m % 2 == 0) std::swap(order[0], order[1]);
  std::vector<std::string> coords;
  for (int i = 0; i < m; ++i) coords.push_back("t" + std::to_string(order[static_cast<std::size_t>(i)]));
  auto c = std::make_shared<RiemannianChart>("sphere", coords, Params{{"r", r}});
  for (int i = 0; i < m; ++i) {
    int k = order[static_cast<std::size_t>(i)];
    std::string e = "r^2";
    for (int j = 1; j < k; ++j) e += "*sin(t" + std::to_string(j) + ")^2";
    c->set_metric_entry(i, i, e);
    for (int j = i + 1; j < m; ++j) c->set_metric_entry(i, j, "0");
    if (k < m) {
      c->set_domain(i, 0.05, 3.09);
      c->set_sample_box(i, 0.6, 2.2);
    } else {
      c->set_domain(i, -3.1, 3.1);
      c->set_sample_box(i, -1.0, 1.0);
    }
  }
  return c;
}

inline SmoothMap sphere_immersion(double r, int m) {
  ChartPtr src = sphere_chart(r, m);
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(m + 1, "ambient"));
  std::vector<ExprAst> comps;
  std::string sines;
  for (int a = 1; a <= m; ++a) {
    comps.push_back(src->parse_member("r*" + sines + "cos(t" + std::to_string(a) + ")"));
    sines += "sin(t" + std::to_string(a) + ")*";
  }
  comps.push_back(src->parse_member("r*" + sines.substr(0, sines.size() - 1)));
  return SmoothMap("sphere", src, ChartPtr(std::move(tgt)), std::move(comps));
}

inline SmoothMap plane_immersion() {
  auto src = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2, "patch"));
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3, "ambient"));
  std::vector<ExprAst> comps;
  comps.push_back(src->parse_member("x1"));
  comps.push_back(src->parse_member("x2"));
  comps.push_back(src->parse_member("0"));
  return SmoothMap("plane", ChartPtr(std::move(src)), ChartPtr(std::move(tgt)), std::move(comps));
}

inline SmoothMap helicoid_immersion() {
  auto src = std::make_shared<RiemannianChart>("helicoid_patch", std::vector<std::string>{"u", "v"});
  src->set_metric_entry(0, 0, "1");
  src->set_metric_entry(0, 1, "0");
  src->set_metric_entry(1, 1, "u^2+1");
  src->set_domain(0, 0.2, 2.0);
  src->set_sample_box(0, 0.3, 1.8);
  src->set_sample_box(1, -1.5, 1.5);
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3, "ambient"));
  std::vector<ExprAst> comps;
  comps.push_back(src->parse_member("u*cos(v)"));
  comps.push_back(src->parse_member("u*sin(v)"));
  comps.push_back(src->parse_member("v"));
  return SmoothMap("helicoid", ChartPtr(std::move(src)), ChartPtr(std::move(tgt)), std::move(comps));
}

// Unit-metric interval chart for arclength curves.
inline ChartPtr arclength_interval(double lo, double hi, Params params = {}) {
  auto c = std::make_shared<RiemannianChart>("interval", std::vector<std::string>{"s"},
                                             std::move(params));
  c->set_metric_entry(0, 0, "1");
  c->set_domain(0, lo, hi);
  c->set_sample_box(0, lo + 0.05, hi - 0.05);
  return c;
}

inline SmoothMap circle_curve(double r) {
  if (!(r > 0)) throw ValidationError("circle case needs a positive radius");
  ChartPtr src = arclength_interval(-3.0, 3.0, Params{{"r", r}});
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2, "plane"));
  std::vector<ExprAst> comps;
  comps.push_back(src->parse_member("r*cos(s/r)"));
  comps.push_back(src->parse_member("r*sin(s/r)"));
  return SmoothMap("circle", src, ChartPtr(std::move(tgt)), std::move(comps));
}

inline SmoothMap helix_curve(double a, double b) {
  if (!(a > 0) || !(b != 0))
    throw ValidationError("helix case needs a positive radius and a nonzero pitch");
  ChartPtr src = arclength_interval(-3.0, 3.0, Params{{"a", a}, {"b", b}});
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3, "space"));
  std::vector<ExprAst> comps;
  comps.push_back(src->parse_member("a*cos(s/sqrt(a^2+b^2))"));
  comps.push_back(src->parse_member("a*sin(s/sqrt(a^2+b^2))"));
  comps.push_back(src->parse_member("b*s/sqrt(a^2+b^2)"));
  return SmoothMap("helix", src, ChartPtr(std::move(tgt)), std::move(comps));
}

}  // namespace cases

// ---- reports ----------------------------------------------------------------------------

struct CaseCheck {
  std::string quantity;
  std::string origin;  // where the expected value comes from
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct CaseReport {
  std::string id;
  std::string family;
  bool pass = true;
  std::vector<CaseCheck> checks;
  std::vector<std::string> notes;
};

struct SuiteSummary {
  int total = 0;
  int passed = 0;
  bool pass = false;
  std::vector<CaseReport> reports;
};

namespace detail_casebook {

// relative comparison with an absolute floor of 1
inline bool close(double a, double b, double tol) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

inline void add_check(CaseReport& rep, std::string quantity, std::string origin, double value,
                      double expected, double tol, std::string note = "") {
  CaseCheck c;
  c.quantity = std::move(quantity);
  c.origin = std::move(origin);
  c.value = value;
  c.expected = expected;
  c.tolerance = tol;
  c.pass = close(value, expected, tol);
  c.note = std::move(note);
  rep.pass = rep.pass && c.pass;
  rep.checks.push_back(std::move(c));
}

inline void add_flag(CaseReport& rep, std::string quantity, std::string origin, bool got, bool want,
                     std::string note = "") {
  add_check(rep, std::move(quantity), std::move(origin), got ? 1.0 : 0.0, want ? 1.0 : 0.0, 0.5,
            std::move(note));
}

inline double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  try {
    ExprAst ast = parse(text, {"t"}, {});
    return eval_jet(ast, Point{0.0}, 0).value();
  } catch (const Error& e) {
    throw ValidationError(where + ": cannot read '" + text + "' as a number: " + e.what());
  }
}

inline int parse_int(const std::string& text, const std::string& where) {
  double v = parse_number(text, where);
  double r = std::round(v);
  if (std::abs(v - r) > 1e-9)
    throw ValidationError(where + ": expected an integer, got '" + text + "'");
  return static_cast<int>(r);
}

struct ParsedId {
  std::string family;
  std::vector<std::string> args;
};

inline ParsedId parse_case_id(const std::string& id) {
  ParsedId out;
  std::size_t open = id.find('(');
  if (open == std::string::npos) {
    out.family = id;
    return out;
  }
  if (id.back() != ')') throw ValidationError("case id '" + id + "' is missing the closing ')'");
  out.family = id.substr(0, open);
  std::string body = id.substr(open + 1, id.size() - open - 2);
  if (body.empty()) return out;
  int depth = 0;
  std::string cur;
  for (char ch : body) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.args.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.args.push_back(cur);
  for (std::string& a : out.args) {
    std::size_t b = a.find_first_not_of(" \t");
    std::size_t e = a.find_last_not_of(" \t");
    a = b == std::string::npos ? std::string() : a.substr(b, e - b + 1);
    if (a.empty()) throw ValidationError("case id '" + id + "' has an empty argument");
  }
  return out;
}

inline void expect_args(const ParsedId& p, std::size_t n) {
  if (p.args.size() != n)
    throw ValidationError("case '" + p.family + "' expects " + std::to_string(n) + " argument" +
                          (n == 1 ? "" : "s") + ", got " + std::to_string(p.args.size()));
}

// ---- individual runners ---------------------------------------------------------------

inline CaseReport run_kelvin(int m, double l, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "kelvin";
  if (m < 2) throw ValidationError("kelvin case needs source dimension at least 2");
  SmoothMap map = cases::kelvin_map(m, l);
  std::vector<Point> pts = sample_points(map.source(), 10, seed);
  double ct = cases::kelvin_tension_coefficient(m, l);
  double cl = cases::kelvin_laplacian_coefficient(m, l);
  double dev_t = 0.0, dev_l = 0.0;
  for (const Point& p : pts) {
    double r2 = 0.0;
    for (double x : p) r2 += x * x;
    double r = std::sqrt(r2);
    VectorXd tau = tension_field(map, p);
    PullbackContext ctx = make_context(map, p, 2);
    VectorXd lap = rough_laplacian(ctx, tension_field_jets(ctx));
    for (int a = 0; a < m; ++a) {
      double want_t = ct * std::pow(r, -2.0 - l) * p[static_cast<std::size_t>(a)];
      double want_l = cl * std::pow(r, -4.0 - l) * p[static_cast<std::size_t>(a)];
      double st = std::max({1.0, std::abs(tau(a)), std::abs(want_t)});
      double sl = std::max({1.0, std::abs(lap(a)), std::abs(want_l)});
      dev_t = std::max(dev_t, std::abs(tau(a) - want_t) / st);
      dev_l = std::max(dev_l, std::abs(lap(a) - want_l) / sl);
    }
  }
  add_check(rep, "tension field deviation from l(l-m)|x|^(-2-l) x", "closed form", dev_t, 0.0, tol);
  add_check(rep, "tension Laplacian deviation from the closed form", "closed form", dev_l, 0.0, tol);

  MapClassification cls = classify_map(map, pts, 1e-6);
  bool harmonic_expected = std::abs(l) < 1e-12 || std::abs(l - m) < 1e-12;
  if (harmonic_expected) {
    add_flag(rep, "harmonic", "tension coefficient vanishes", cls.harmonic, true);
    add_flag(rep, "tension is a harmonic section", "harmonic maps qualify trivially", cls.hs, true);
    add_flag(rep, "tension is a harmonic map to the tangent space", "harmonic maps qualify trivially",
             cls.hm, true);
    rep.notes.push_back("the exponent makes this map harmonic, so both conditions hold trivially");
  } else {
    bool hs_expected = std::abs(m - (l + 2.0)) < 1e-9 || std::abs(l + 2.0) < 1e-9;
    add_flag(rep, "harmonic", "tension coefficient is nonzero", cls.harmonic, false);
    add_flag(rep, "tension is a harmonic section", "Laplacian coefficient vanishes iff m=l+2 or l=-2",
             cls.hs, hs_expected);
    add_flag(rep, "harmonic-map condition matches the section condition",
             "flat target kills the curvature pairing", cls.hm, hs_expected);
  }
  return rep;
}

inline CaseReport run_hyperbolic_identity(double p, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "hyperbolic_identity";
  SmoothMap map = cases::hyperbolic_identity(p);
  std::vector<Point> pts = sample_points(map.source(), 10, seed);

  // connection table in the orthonormal frame e_i = z^p d_i:
  // the only nonzero derivatives are nabla_{e1}e1 = nabla_{e2}e2 = p z^(p-1) e3
  // and nabla_{e1}e3, nabla_{e2}e3 = -p z^(p-1) e1, e2.
  double dev_conn = 0.0;
  for (const Point& q : pts) {
    double z = q[2];
    Tensor3 gamma = christoffel(map.source(), q);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double omega = std::pow(z, p) * gamma.at(k, i, j) +
                         (i == 2 && j == k ? p * std::pow(z, p - 1.0) : 0.0);
          double want = 0.0;
          if (k == 2 && i == j && i < 2) want = p * std::pow(z, p - 1.0);
          if (j == 2 && k == i && i < 2) want = -p * std::pow(z, p - 1.0);
          double s = std::max({1.0, std::abs(omega), std::abs(want)});
          dev_conn = std::max(dev_conn, std::abs(omega - want) / s);
        }
  }
  add_check(rep, "orthonormal-frame connection table", "closed form", dev_conn, 0.0, tol / 10.0);

  double dev_tau = 0.0, dev_lap = 0.0, dev_s = 0.0;
  for (const Point& q : pts) {
    double z = q[2];
    PullbackContext ctx = make_context(map, q, 2);
    std::vector<Jet> tj = tension_field_jets(ctx);
    VectorXd tau = jet_values(tj);
    VectorXd lap = rough_laplacian(ctx, tj);
    VectorXd S = curvature_term(ctx, tj);
    // frame component along e3-bar = w d/dw: coordinate component carries one
    // extra factor of z
    VectorXd want_tau(3), want_lap(3), want_s(3);
    want_tau << 0, 0, (1.0 - p) * std::pow(z, 2.0 * p - 1.0);
    want_lap << 0, 0, 2.0 * (p - 1.0) * (p * p - 4.0 * p + 2.0) * std::pow(z, 4.0 * p - 3.0);
    want_s << 0, 0, -2.0 * (p - 1.0) * (p - 1.0) * std::pow(z, 6.0 * p - 5.0);
    for (int a = 0; a < 3; ++a) {
      dev_tau = std::max(dev_tau, std::abs(tau(a) - want_tau(a)) /
                                      std::max({1.0, std::abs(tau(a)), std::abs(want_tau(a))}));
      dev_lap = std::max(dev_lap, std::abs(lap(a) - want_lap(a)) /
                                      std::max({1.0, std::abs(lap(a)), std::abs(want_lap(a))}));
      dev_s = std::max(dev_s, std::abs(S(a) - want_s(a)) /
                                  std::max({1.0, std::abs(S(a)), std::abs(want_s(a))}));
    }
  }
  add_check(rep, "tension field (1-p) z^(2p-2) e3-bar", "closed form", dev_tau, 0.0, tol);
  add_check(rep, "tension Laplacian 2(p-1)(p^2-4p+2) z^(4p-4) e3-bar", "closed form", dev_lap, 0.0,
            tol);
  add_check(rep, "curvature term -2(p-1)^2 z^(6p-6) e3-bar", "closed form", dev_s, 0.0, tol);

  MapClassification cls = classify_map(map, pts, 1e-6);
  bool harmonic_expected = std::abs(p - 1.0) < 1e-12;
  bool hs_expected = harmonic_expected || std::abs(p * p - 4.0 * p + 2.0) < 1e-9;
  add_flag(rep, "harmonic", "tension vanishes only at p=1", cls.harmonic, harmonic_expected);
  add_flag(rep, "tension is a harmonic section", "Laplacian vanishes iff p=1 or p^2-4p+2=0", cls.hs,
           hs_expected);
  add_flag(rep, "tension is a harmonic map to the tangent space",
           "curvature pairing survives unless p=1", cls.hm, harmonic_expected);
  if (hs_expected && !harmonic_expected)
    rep.notes.push_back("nonharmonic map whose tension is a harmonic section but not a harmonic map");
  return rep;
}

inline CaseReport run_euclidean_identity(int m, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "euclidean_identity";
  if (m < 1) throw ValidationError("euclidean_identity needs dimension at least 1");
  auto chart = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(m, "flat"));
  for (int i = 0; i < m; ++i) chart->set_sample_box(i, 0.0, 1.0);
  SmoothMap id = SmoothMap::identity(chart);
  std::vector<Point> pts = sample_points(*chart, 10, seed);
  double dev_tau = 0.0, dev_density = 0.0;
  for (const Point& q : pts) {
    dev_tau = std::max(dev_tau, tension_field(id, q).cwiseAbs().maxCoeff());
    dev_density = std::max(dev_density, std::abs(energy_density(id, q) - 0.5 * m));
  }
  add_check(rep, "tension field", "identity is harmonic", dev_tau, 0.0, 1e-12);
  add_check(rep, "energy density m/2", "closed form", dev_density, 0.0, 1e-12);
  add_check(rep, "energy over the unit box", "closed form", energy(id, 8), 0.5 * m, 1e-10);
  MapClassification cls = classify_map(id, pts, tol);
  add_flag(rep, "harmonic", "tension vanishes", cls.harmonic, true);
  add_flag(rep, "tension is a harmonic section", "trivially, from harmonicity", cls.hs, true);
  add_flag(rep, "tension is a harmonic map to the tangent space", "trivially, from harmonicity",
           cls.hm, true);
  return rep;
}

inline CaseReport run_position_field(int m, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "position_field";
  if (m < 1) throw ValidationError("position_field needs dimension at least 1");
  auto chart = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(m, "flat"));
  std::vector<ExprAst> field;
  for (int i = 1; i <= m; ++i) field.push_back(chart->parse_member("x" + std::to_string(i)));
  std::vector<Point> pts = sample_points(*chart, 10, seed);
  RoughTypeReport t = rough_type_check(*chart, field, pts, RoughMode::Tensorial, tol);
  RoughTypeReport c = rough_type_check(*chart, field, pts, RoughMode::Coordinate, tol);
  add_check(rep, "frame-invariant residual", "linear fields are rough-type", t.max_residual, 0.0,
            1e-10);
  add_check(rep, "pure-second-partial residual", "linear fields are rough-type", c.max_residual, 0.0,
            1e-12);
  add_flag(rep, "passes the frame-invariant criterion", "linear fields are rough-type", t.passes,
           true);
  add_flag(rep, "passes the pure-second-partial criterion", "linear fields are rough-type", c.passes,
           true);
  return rep;
}

inline CaseReport run_multilinear_field(const std::string& expr_text, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "multilinear_field";
  auto chart = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2, "flat"));
  ExprAst f;
  try {
    f = chart->parse_member(expr_text);
  } catch (const Error& e) {
    throw ValidationError("multilinear_field: cannot parse '" + expr_text + "': " + e.what());
  }
  std::vector<ExprAst> field;
  field.push_back(f);
  field.push_back(chart->parse_member("0"));
  std::vector<Point> pts = sample_points(*chart, 10, seed);
  RoughTypeReport t = rough_type_check(*chart, field, pts, RoughMode::Tensorial, tol);
  RoughTypeReport c = rough_type_check(*chart, field, pts, RoughMode::Coordinate, tol);

  // independent finite-difference reading of the pure second partials
  double fd = 0.0;
  double h = 1e-4;
  for (const Point& q : pts) {
    for (int k = 0; k < 2; ++k) {
      Point lo = q, hi = q;
      lo[static_cast<std::size_t>(k)] -= h;
      hi[static_cast<std::size_t>(k)] += h;
      double second = (eval_jet(f, hi, 0).value() - 2.0 * eval_jet(f, q, 0).value() +
                       eval_jet(f, lo, 0).value()) /
                      (h * h);
      fd = std::max(fd, std::abs(second));
    }
  }
  add_check(rep, "pure-second-partial residual vs finite differences", "central differences",
            c.max_residual, fd, 1e-4);
  add_flag(rep, "frame-invariant acceptance implies pure-second-partial acceptance",
           "the frame-invariant condition is strictly stronger", t.passes && !c.passes, false);
  rep.notes.push_back("frame-invariant residual " + detail::format_double(t.max_residual) +
                      (t.passes ? " (accepts)" : " (rejects)") + ", pure-second-partial residual " +
                      detail::format_double(c.max_residual) + (c.passes ? " (accepts)" : " (rejects)"));
  if (c.passes && !t.passes)
    rep.notes.push_back(
        "the pure-second-partial criterion accepts this field while the frame-invariant condition "
        "rejects it: mixed second partials survive symmetrization over all directions; recorded as "
        "expected behavior, not a failure");
  return rep;
}

inline void immersion_common_checks(CaseReport& rep, const Immersion& im,
                                    const std::vector<Point>& pts, SubmanifoldVerdict want,
                                    double tol) {
  add_check(rep, "isometry residual", "pullback of the ambient metric", im.isometry().max_residual,
            0.0, 1e-9);
  SubmanifoldClassification cls = classify_submanifold(im, pts, 1e-7);
  add_flag(rep, std::string("verdict ") + to_string(want), "mean curvature analysis",
           cls.verdict == want, true,
           std::string("reported ") + to_string(cls.verdict));
  add_check(rep, "rough-Laplacian split reassembly residual", "independent recomputation",
            cls.split_residual, 0.0, 1e-8);
  add_check(rep, "tangential pairing of the curvature term", "flat or constant-curvature ambient",
            cls.hm_residual, 0.0, 1e-9);
  double wb = 0.0;
  for (const Point& q : pts) {
    SubmanifoldPoint sp(im.map(), q);
    wb = std::max(wb, std::abs(weitzenbock_residual(sp)));
  }
  add_check(rep, "mean-curvature Weitzenbock residual", "independent recomputation", wb, 0.0, 1e-7);
  (void)tol;
}

inline CaseReport run_sphere(double r, int m, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "sphere";
  SmoothMap map = cases::sphere_immersion(r, m);
  std::vector<Point> pts = sample_points(map.source(), 6, seed);
  Immersion im = Immersion::create(map, pts);
  immersion_common_checks(rep, im, pts, SubmanifoldVerdict::NotHS, tol);

  double dev_alpha = 0.0, dev_a2 = 0.0, dev_scalar = 0.0, dev_scalar2 = 0.0, tang = 0.0;
  for (const Point& q : pts) {
    SubmanifoldPoint sp(map, q);
    HypersurfaceReport h = hypersurface_residuals(sp);
    dev_alpha = std::max(dev_alpha, std::abs(h.alpha - 1.0 / r));
    dev_a2 = std::max(dev_a2, std::abs(h.shape_norm2 - m / (r * r)));
    double want = m / (r * r * r);
    dev_scalar = std::max(dev_scalar, std::abs(h.scalar - want) / std::max(1.0, want));
    dev_scalar2 =
        std::max(dev_scalar2, std::abs(h.scalar_from_normal_line - want) / std::max(1.0, want));
    tang = std::max(tang, h.tangential_norm);
  }
  add_check(rep, "support pairing of the mean curvature 1/r", "closed form", dev_alpha, 0.0, tol);
  add_check(rep, "squared shape-operator norm m/r^2", "closed form", dev_a2, 0.0, tol);
  add_check(rep, "scalar line m/r^3", "closed form", dev_scalar, 0.0, 1e-7);
  add_check(rep, "scalar line via the normal-line pairing", "independent recomputation", dev_scalar2,
            0.0, 1e-7);
  add_check(rep, "tangential line", "closed form", tang, 0.0, 1e-8);

  SubmanifoldClassification cls = classify_submanifold(im, pts, 1e-7);
  add_check(rep, "normal line norm m/r^3", "constant mean curvature norm forces minimality",
            cls.normal_residual, m / (r * r * r), 1e-7,
            "nonminimal constant-|H| immersion cannot satisfy the normal line");
  UmbilicalReport ur = pseudo_umbilical_check(im, pts);
  add_flag(rep, "pseudo-umbilical", "shape operator of H is |H|^2 id",
           ur.verdict == UmbilicalVerdict::PseudoUmbilical, true,
           std::string("reported ") + to_string(ur.verdict));
  return rep;
}

inline CaseReport run_plane(unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "plane";
  SmoothMap map = cases::plane_immersion();
  std::vector<Point> pts = sample_points(map.source(), 6, seed);
  Immersion im = Immersion::create(map, pts);
  immersion_common_checks(rep, im, pts, SubmanifoldVerdict::Minimal, tol);
  SubmanifoldClassification cls = classify_submanifold(im, pts, 1e-7);
  add_check(rep, "mean curvature", "totally geodesic", cls.mean_residual, 0.0, 1e-12);
  add_flag(rep, "harmonic-map condition", "minimal immersions qualify", cls.hm, true);
  return rep;
}

inline CaseReport run_helicoid(unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "helicoid_patch";
  SmoothMap map = cases::helicoid_immersion();
  std::vector<Point> pts = sample_points(map.source(), 6, seed);
  Immersion im = Immersion::create(map, pts);
  immersion_common_checks(rep, im, pts, SubmanifoldVerdict::Minimal, tol);
  SubmanifoldClassification cls = classify_submanifold(im, pts, 1e-7);
  add_check(rep, "mean curvature", "classical minimal surface", cls.mean_residual, 0.0, 1e-9);
  add_flag(rep, "harmonic-map condition", "minimal immersions qualify", cls.hm, true);
  return rep;
}

inline CaseReport run_circle(double r, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "circle";
  SmoothMap map = cases::circle_curve(r);
  std::vector<Point> pts = sample_points(map.source(), 10, seed);
  Curve curve = Curve::create(map, pts);
  add_check(rep, "arclength residual", "unit-speed parametrization",
            curve.arclength().max_speed_residual, 0.0, 1e-9);
  CurveClassification cls = classify_curve(curve, pts);
  add_check(rep, "first curvature 1/r", "classical value", cls.curvature_max[0], 1.0 / r, tol);
  add_check(rep, "frame structure residual", "independent recomputation", cls.frenet_residual, 0.0,
            1e-8);
  add_check(rep, "curvature system residual 1/r^3", "closed form", cls.system_residual,
            1.0 / (r * r * r), tol);
  add_flag(rep, "verdict NotHS", "nonzero constant curvature", cls.verdict == CurveVerdict::NotHS,
           true, std::string("reported ") + to_string(cls.verdict));
  return rep;
}

inline CaseReport run_helix(double a, double b, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "helix";
  SmoothMap map = cases::helix_curve(a, b);
  std::vector<Point> pts = sample_points(map.source(), 10, seed);
  Curve curve = Curve::create(map, pts);
  add_check(rep, "arclength residual", "unit-speed parametrization",
            curve.arclength().max_speed_residual, 0.0, 1e-9);
  CurveClassification cls = classify_curve(curve, pts);
  double c2 = a * a + b * b;
  add_check(rep, "first curvature a/(a^2+b^2)", "classical value", cls.curvature_max[0], a / c2, tol);
  add_check(rep, "second curvature b/(a^2+b^2)", "classical value", cls.curvature_max[1],
            std::abs(b) / c2, tol);
  add_check(rep, "frame structure residual", "independent recomputation", cls.frenet_residual, 0.0,
            1e-8);
  add_check(rep, "curvature system residual", "closed form", cls.system_residual,
            (a / c2) * (a * a + b * b) / (c2 * c2), tol);
  add_check(rep, "pairing obstruction along the curve", "vanishes identically for curves",
            cls.hm_pairing, 0.0, 1e-9);
  add_flag(rep, "verdict NotHS", "nonzero constant curvature", cls.verdict == CurveVerdict::NotHS,
           true, std::string("reported ") + to_string(cls.verdict));
  return rep;
}

inline CaseReport run_convex_norm_square(int n, unsigned seed, double tol) {
  CaseReport rep;
  rep.family = "convex_norm_square";
  if (n < 1) throw ValidationError("convex_norm_square needs dimension at least 1");
  auto chart = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(n, "flat"));
  std::string e = "x1^2";
  for (int i = 2; i <= n; ++i) e += "+x" + std::to_string(i) + "^2";
  ExprAst f = chart->parse_member(e);
  std::vector<Point> pts = sample_points(*chart, 10, seed);
  double dev_eig = 0.0, dev_lap = 0.0;
  bool convex = true;
  for (const Point& q : pts) {
    ConvexityReport cr = is_strongly_convex_at(*chart, f, q);
    convex = convex && cr.strongly_convex;
    dev_eig = std::max(dev_eig, std::abs(cr.min_eigenvalue - 2.0));
    dev_lap = std::max(dev_lap, std::abs(laplacian(*chart, f, q) - (-2.0 * n)));
  }
  add_check(rep, "smallest Hessian eigenvalue 2", "closed form", dev_eig, 0.0, 1e-10);
  add_check(rep, "Laplacian -2n", "closed form", dev_lap, 0.0, 1e-10);
  add_flag(rep, "strongly convex", "Hessian is 2 id", convex, true);
  (void)tol;
  return rep;
}

}  // namespace detail_casebook

// ---- dispatch ---------------------------------------------------------------------------

inline CaseReport run_case(const std::string& id, unsigned seed = 42, double tol = 1e-8) {
  using namespace detail_casebook;
  ParsedId p = parse_case_id(id);
  CaseReport rep;
  if (p.family == "kelvin") {
    expect_args(p, 2);
    rep = run_kelvin(parse_int(p.args[0], id), parse_number(p.args[1], id), seed, tol);
  } else if (p.family == "hyperbolic_identity") {
    expect_args(p, 1);
    rep = run_hyperbolic_identity(parse_number(p.args[0], id), seed, tol);
  } else if (p.family == "euclidean_identity") {
    expect_args(p, 1);
    rep = run_euclidean_identity(parse_int(p.args[0], id), seed, tol);
  } else if (p.family == "position_field") {
    expect_args(p, 1);
    rep = run_position_field(parse_int(p.args[0], id), seed, tol);
  } else if (p.family == "multilinear_field") {
    expect_args(p, 1);
    rep = run_multilinear_field(p.args[0], seed, tol);
  } else if (p.family == "sphere") {
    expect_args(p, 2);
    rep = run_sphere(parse_number(p.args[0], id), parse_int(p.args[1], id), seed, tol);
  } else if (p.family == "plane") {
    expect_args(p, 0);
    rep = run_plane(seed, tol);
  } else if (p.family == "circle") {
    expect_args(p, 1);
    rep = run_circle(parse_number(p.args[0], id), seed, tol);
  } else if (p.family == "helix") {
    expect_args(p, 2);
    rep = run_helix(parse_number(p.args[0], id), parse_number(p.args[1], id), seed, tol);
  } else if (p.family == "helicoid_patch") {
    expect_args(p, 0);
    rep = run_helicoid(seed, tol);
  } else if (p.family == "convex_norm_square") {
    expect_args(p, 1);
    rep = run_convex_norm_square(parse_int(p.args[0], id), seed, tol);
  } else {
    throw UnknownCase("unknown case family '" + p.family +
                      "'; known families: kelvin, hyperbolic_identity, euclidean_identity, "
                      "position_field, multilinear_field, sphere, plane, circle, helix, "
                      "helicoid_patch, convex_norm_square");
  }
  rep.id = id;
  return rep;
}

// The canonical suite: one or more pinned instantiations of every family.
inline std::vector<std::string> registry_ids() {
  return {
      "circle(1)",
      "convex_norm_square(3)",
      "euclidean_identity(3)",
      "helicoid_patch",
      "helix(1,0.5)",
      "hyperbolic_identity(1)",
      "hyperbolic_identity(2+sqrt(2))",
      "hyperbolic_identity(3)",
      "kelvin(3,1)",
      "kelvin(3,2)",
      "multilinear_field(x1*x2)",
      "plane",
      "position_field(3)",
      "sphere(0.5,2)",
      "sphere(1,2)",
      "sphere(1,3)",
  };
}

inline SuiteSummary run_all(unsigned seed = 42, double tol = 1e-8) {
  SuiteSummary out;
  for (const std::string& id : registry_ids()) {
    CaseReport rep = run_case(id, seed, tol);
    out.total += 1;
    out.passed += rep.pass ? 1 : 0;
    out.reports.push_back(std::move(rep));
  }
  std::sort(out.reports.begin(), out.reports.end(),
            [](const CaseReport& a, const CaseReport& b) { return a.id < b.id; });
  out.pass = out.passed == out.total;
  return out;
}

}  // namespace tensional

#endif
