#ifndef TENSIONAL_CHART_HPP
#define TENSIONAL_CHART_HPP

// Charts: a named coordinate box with a symbolic Riemannian metric.
// MetricSource is the narrow interface the calculus layers actually consume:
// "give me jets of the metric components at a point". Charts implement it by
// evaluating expression trees; the vector-bundle metric implements it by
// assembling jets numerically. Everything downstream is generic in it.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tensional/errors.hpp"
#include "tensional/expr.hpp"
#include "tensional/jet.hpp"
#include "tensional/rng.hpp"

namespace tensional {

using Point = std::vector<double>;

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

class MetricSource {
 public:
  virtual ~MetricSource() = default;
  virtual int dim() const = 0;
  // order-K jets of the metric components g_ij at `at`; symmetric, dim x dim
  virtual JetMatrix metric_jets(const Point& at, int order) const = 0;
  virtual bool contains(const Point& p) const = 0;
  virtual std::string describe() const = 0;
};

class RiemannianChart : public MetricSource {
 public:
  RiemannianChart(std::string name, std::vector<std::string> coords, Params params = {})
      : name_(std::move(name)),
        coords_(std::move(coords)),
        params_(std::move(params)),
        domain_(coords_.size()),
        metric_(coords_.size() * coords_.size()) {
    if (coords_.empty()) throw Error("chart '" + name_ + "' needs at least one coordinate");
  }

  static RiemannianChart euclidean(int m, std::string name = "euclidean") {
    std::vector<std::string> coords;
    for (int i = 1; i <= m; ++i) coords.push_back("x" + std::to_string(i));
    RiemannianChart c(std::move(name), std::move(coords));
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) c.set_metric_entry(i, j, ExprAst::make_constant(i == j ? 1 : 0));
    return c;
  }

  const std::string& name() const { return name_; }
  const std::vector<std::string>& coords() const { return coords_; }
  const Params& params() const { return params_; }
  double param(const std::string& k) const {
    auto it = params_.find(k);
    if (it == params_.end()) throw Error("chart '" + name_ + "' has no parameter '" + k + "'");
    return it->second;
  }

  int dim() const override { return static_cast<int>(coords_.size()); }

  // parse an expression in this chart's coordinates and parameters
  ExprAst parse_member(std::string_view src) const { return parse(src, coords_, params_); }

  // symmetry is structural: setting (i,j) sets (j,i)
  void set_metric_entry(int i, int j, ExprAst e) {
    metric_[idx(i, j)] = e;
    metric_[idx(j, i)] = std::move(e);
  }
  void set_metric_entry(int i, int j, std::string_view src) {
    set_metric_entry(i, j, parse_member(src));
  }

  const ExprAst& metric_entry(int i, int j) const {
    const auto& e = metric_[idx(i, j)];
    if (!e) throw Error("chart '" + name_ + "' metric entry (" + std::to_string(i) + "," +
                        std::to_string(j) + ") was never set");
    return *e;
  }

  void set_domain(int i, double lo, double hi) { domain_[static_cast<std::size_t>(i)] = {lo, hi}; }
  const std::vector<Interval>& domain() const { return domain_; }

  void set_guard(std::string_view src) { guard_ = parse_member(src); }
  const std::optional<ExprAst>& guard() const { return guard_; }

  void set_sample_box(int i, double lo, double hi) {
    if (sample_box_.empty()) sample_box_.resize(coords_.size());
    sample_box_[static_cast<std::size_t>(i)] = Interval{lo, hi};
  }

  bool contains(const Point& p) const override {
    if (static_cast<int>(p.size()) != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (!(p[i] >= domain_[i].lo && p[i] <= domain_[i].hi)) return false;
    }
    if (guard_) {
      try {
        if (evaluate_guard(p) <= 0.0) return false;
      } catch (const DomainError&) {
        return false;
      }
    }
    return true;
  }

  double evaluate_guard(const Point& p) const {
    return eval_jet(*guard_, p, 0).value();
  }

  void require_point(const Point& p, const char* what) const {
    if (static_cast<int>(p.size()) != dim())
      throw DomainError(std::string(what) + ": point has dimension " + std::to_string(p.size()) +
                        " but chart '" + name_ + "' has dimension " + std::to_string(dim()));
    if (!contains(p)) {
      std::string s = "(";
      for (std::size_t i = 0; i < p.size(); ++i)
        s += (i ? ", " : "") + detail::format_double(p[i]);
      s += ")";
      throw DomainError(std::string(what) + ": point " + s + " lies outside chart '" + name_ + "'");
    }
  }

  JetMatrix metric_jets(const Point& at, int order) const override {
    auto sp = JetSpace::get(dim(), order);
    std::vector<Jet> env;
    env.reserve(p_size());
    for (int v = 0; v < dim(); ++v) env.push_back(Jet::variable(sp, at, v));
    JetMatrix g(dim(), dim(), Jet::constant(sp, at, 0.0));
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) {
        Jet e = eval_jet(metric_entry(i, j), env, sp, at);
        g.at(i, j) = e;
        g.at(j, i) = e;
      }
    return g;
  }

  std::string describe() const override { return "chart '" + name_ + "'"; }

  // The window points are drawn from: the domain box shrunk by the margin,
  // with unbounded sides capped at +/-2, further clipped by the sample box.
  std::pair<double, double> sample_window(int i, double margin = 1e-3) const {
    const Interval& d = domain_[static_cast<std::size_t>(i)];
    double lo = std::isfinite(d.lo) ? d.lo + margin : -2.0;
    double hi = std::isfinite(d.hi) ? d.hi - margin : 2.0;
    if (!sample_box_.empty() && sample_box_[static_cast<std::size_t>(i)]) {
      const Interval& s = *sample_box_[static_cast<std::size_t>(i)];
      lo = std::max(lo, s.lo);
      hi = std::min(hi, s.hi);
    }
    if (!(lo < hi))
      throw Error("chart '" + name_ + "': empty sampling window for coordinate " +
                  coords_[static_cast<std::size_t>(i)]);
    return {lo, hi};
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim() || j >= dim())
      throw Error("metric index out of range on chart '" + name_ + "'");
    return static_cast<std::size_t>(i) * coords_.size() + static_cast<std::size_t>(j);
  }
  std::size_t p_size() const { return coords_.size(); }

  std::string name_;
  std::vector<std::string> coords_;
  Params params_;
  std::vector<Interval> domain_;
  std::optional<ExprAst> guard_;
  std::vector<std::optional<Interval>> sample_box_;
  std::vector<std::optional<ExprAst>> metric_;
};

using ChartPtr = std::shared_ptr<const RiemannianChart>;

// Deterministic rejection sampling: uniform draws in the window, accepted when
// the point passes the domain box and (strictly positive) guard.
inline std::vector<Point> sample_points(const RiemannianChart& chart, int n,
                                        std::uint64_t seed = 42) {
  Rng rng(seed);
  std::vector<std::pair<double, double>> win;
  for (int i = 0; i < chart.dim(); ++i) win.push_back(chart.sample_window(i));
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n));
  int guard_misses = 0;
  while (static_cast<int>(out.size()) < n) {
    Point p(static_cast<std::size_t>(chart.dim()));
    for (int i = 0; i < chart.dim(); ++i) p[i] = rng.uniform(win[i].first, win[i].second);
    if (chart.contains(p)) {
      out.push_back(std::move(p));
    } else if (++guard_misses > 200000) {
      throw Error("chart '" + chart.name() + "': rejection sampling failed to find " +
                  std::to_string(n) + " admissible points");
    }
  }
  return out;
}

}  // namespace tensional

#endif
