#ifndef TENSIONAL_SASAKI_HPP
#define TENSIONAL_SASAKI_HPP

// The pulled-back tangent bundle as a Riemannian manifold.
//
// A section xi of psi^{-1}TN is a map from M into the total space F, which
// carries the bundle metric: base block g, fiber block h(psi(x)), cross terms
// through the pullback connection. Assembling that metric numerically and
// running the ordinary tension machinery on the section gives a second,
// structurally independent route to the harmonic-section and harmonic-map
// conditions; the closed-form route goes through the rough Laplacian and the
// curvature pairing. The two must agree to tight tolerance, which is what the
// tests exercise.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tensional/chart.hpp"
#include "tensional/errors.hpp"
#include "tensional/expr.hpp"
#include "tensional/jet.hpp"
#include "tensional/maps.hpp"
#include "tensional/riemann.hpp"

namespace tensional {

// Metric of the total space of psi^{-1}TN over the source chart of psi, in
// coordinates (x^1..x^m, u^1..u^n). With the connection coefficients
//   mu^a_{bi}(x) = Gamma^a_{bc}(psi(x)) d_i psi^c(x)
// the blocks are
//   G_qq[i][j]     = g_ij(x) + hhat_{ac} (mu^a_{bi} u^b)(mu^c_{dj} u^d)
//   G_qu[i][m+a]   = hhat_{ac} mu^c_{bi} u^b
//   G_uu[m+a][m+b] = hhat_{ab},          hhat = h(psi(x)).
// Every ingredient is an exact jet in (x, u), so the assembled metric jets are
// exact to the requested order.
class BundleMetricSource : public MetricSource {
 public:
  explicit BundleMetricSource(SmoothMap map) : map_(std::move(map)) {
    m_ = map_.source().dim();
    n_ = map_.target().dim();
  }

  int dim() const override { return m_ + n_; }

  bool contains(const Point& P) const override {
    if (static_cast<int>(P.size()) != m_ + n_) return false;
    Point x(P.begin(), P.begin() + m_);
    return map_.source().contains(x);
  }

  std::string describe() const override {
    return "bundle metric over map '" + map_.name() + "'";
  }

  JetMatrix metric_jets(const Point& P, int order) const override {
    if (static_cast<int>(P.size()) != m_ + n_)
      throw Error("bundle metric: point has wrong dimension");
    Point x(P.begin(), P.begin() + m_);
    auto big = JetSpace::get(m_ + n_, order);

    // base metric, embedded
    JetMatrix gx = map_.source().metric_jets(x, order);
    // map jets: order+1 for d_i psi, order for composition
    std::vector<Jet> psi = map_.jets(x, order + 1);
    Point y(static_cast<std::size_t>(n_));
    for (int a = 0; a < n_; ++a) y[static_cast<std::size_t>(a)] = psi[static_cast<std::size_t>(a)].value();
    std::vector<Jet> psi_r;
    for (int a = 0; a < n_; ++a) psi_r.push_back(psi[static_cast<std::size_t>(a)].truncated(order));

    // fiber metric along the map, embedded
    JetMatrix hy = map_.target().metric_jets(y, order);
    auto emb = [&](const Jet& small) { return small.embedded(big, P, 0); };
    JetMatrix hhat(n_, n_, emb(Jet::compose(hy.at(0, 0), psi_r)));
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) hhat.at(a, b) = emb(Jet::compose(hy.at(a, b), psi_r));

    // connection coefficients along the map, embedded: mu[a][b][i]
    ChristoffelJets gn = christoffel_jets(map_.target(), y, order);
    std::vector<Jet> mu;
    mu.reserve(static_cast<std::size_t>(n_) * n_ * m_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int i = 0; i < m_; ++i) {
          Jet s = Jet::compose(gn.at(a, b, 0), psi_r) * psi[0].derivative(i).truncated(order);
          for (int c = 1; c < n_; ++c)
            s = s + Jet::compose(gn.at(a, b, c), psi_r) * psi[static_cast<std::size_t>(c)].derivative(i).truncated(order);
          mu.push_back(emb(s));
        }
    auto mu_at = [&](int a, int b, int i) -> const Jet& {
      return mu[(static_cast<std::size_t>(a) * n_ + b) * m_ + i];
    };

    // fiber coordinates as jets in the big space
    std::vector<Jet> u;
    for (int b = 0; b < n_; ++b) u.push_back(Jet::variable(big, P, m_ + b));

    // A[a][i] = mu^a_{bi} u^b
    std::vector<Jet> A;
    A.reserve(static_cast<std::size_t>(n_) * m_);
    for (int a = 0; a < n_; ++a)
      for (int i = 0; i < m_; ++i) {
        Jet s = mu_at(a, 0, i) * u[0];
        for (int b = 1; b < n_; ++b) s = s + mu_at(a, b, i) * u[static_cast<std::size_t>(b)];
        A.push_back(std::move(s));
      }
    auto A_at = [&](int a, int i) -> const Jet& { return A[static_cast<std::size_t>(a) * m_ + i]; };

    Jet zero = Jet::constant(big, P, 0.0);
    JetMatrix G(m_ + n_, m_ + n_, zero);
    for (int i = 0; i < m_; ++i)
      for (int j = i; j < m_; ++j) {
        Jet s = emb(gx.at(i, j));
        for (int a = 0; a < n_; ++a)
          for (int c = 0; c < n_; ++c) s = s + hhat.at(a, c) * A_at(a, i) * A_at(c, j);
        G.at(i, j) = s;
        G.at(j, i) = s;
      }
    for (int i = 0; i < m_; ++i)
      for (int a = 0; a < n_; ++a) {
        Jet s = hhat.at(a, 0) * A_at(0, i);
        for (int c = 1; c < n_; ++c) s = s + hhat.at(a, c) * A_at(c, i);
        G.at(i, m_ + a) = s;
        G.at(m_ + a, i) = s;
      }
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) G.at(m_ + a, m_ + b) = hhat.at(a, b);
    return G;
  }

  const SmoothMap& map() const { return map_; }

 private:
  SmoothMap map_;
  int m_ = 0;
  int n_ = 0;
};

struct SectionTension {
  VectorXd horizontal;  // source-chart coordinate components, dim m
  VectorXd vertical;    // fiber components, dim n
};

namespace detail {

inline std::vector<Jet> section_jets(const SmoothMap& map, const std::vector<ExprAst>& xi,
                                     const Point& x, int order) {
  const RiemannianChart& src = map.source();
  if (static_cast<int>(xi.size()) != map.target().dim())
    throw Error("section needs one component per target coordinate");
  src.require_point(x, "section evaluation");
  auto sp = JetSpace::get(src.dim(), order);
  std::vector<Jet> out;
  for (int i = 0; i < src.dim(); ++i) out.push_back(Jet::variable(sp, x, i));
  for (const auto& c : xi) out.push_back(eval_jet(c, x, order));
  return out;
}

}  // namespace detail

// Tension of the section as a plain map into the assembled bundle metric,
// split into its horizontal part (a source tangent vector) and vertical part
// (a fiber vector). The splitting subtracts the connection drift:
// horizontal components are tau_q, vertical are tau_u^a + tau_q^i mu^a_{bi} u^b.
inline SectionTension section_tension_via_bundle(const SmoothMap& map,
                                                 const std::vector<ExprAst>& xi, const Point& x) {
  int m = map.source().dim(), n = map.target().dim();
  BundleMetricSource bundle(map);
  std::vector<Jet> sigma = detail::section_jets(map, xi, x, 2);
  PullbackContext ctx(map.source(), bundle, sigma, x, 0);
  VectorXd tau = jet_values(tension_field_jets(ctx));

  // connection coefficients at x, values only
  std::vector<Jet> psi = map.jets(x, 1);
  Point y = map.value(x);
  ChristoffelJets gn = christoffel_jets(map.target(), y, 0);
  SectionTension out;
  out.horizontal = tau.head(m);
  out.vertical = VectorXd(n);
  for (int a = 0; a < n; ++a) {
    double v = tau(m + a);
    for (int i = 0; i < m; ++i)
      for (int b = 0; b < n; ++b) {
        double mu = 0;
        for (int c = 0; c < n; ++c)
          mu += gn.at(a, b, c).value() * psi[static_cast<std::size_t>(c)].derivative(i).value();
        v += tau(i) * mu * sigma[static_cast<std::size_t>(m + b)].value();
      }
    out.vertical(a) = v;
  }
  return out;
}

// The closed-form counterpart: horizontal part -sum_j h(S(xi), dpsi(e_j)) e_j,
// vertical part -Delta^psi xi.
inline SectionTension section_tension_via_formula(const SmoothMap& map,
                                                  const std::vector<ExprAst>& xi, const Point& x) {
  int m = map.source().dim(), n = map.target().dim();
  if (static_cast<int>(xi.size()) != n)
    throw Error("section needs one component per target coordinate");
  PullbackContext ctx = make_context(map, x, 2);
  std::vector<Jet> xij;
  for (const auto& c : xi) xij.push_back(eval_jet(c, x, 2));
  VectorXd pairing = curvature_pairing(ctx, xij);
  SectionTension out;
  out.horizontal = VectorXd::Zero(m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) out.horizontal(k) -= pairing(j) * ctx.frame().at(k, j).value();
  out.vertical = -rough_laplacian(ctx, xij);
  return out;
}

// Energy density of the section as a map into the bundle metric.
inline double section_energy_density_via_bundle(const SmoothMap& map,
                                                const std::vector<ExprAst>& xi, const Point& x) {
  int m = map.source().dim(), n = map.target().dim();
  BundleMetricSource bundle(map);
  std::vector<Jet> sigma = detail::section_jets(map, xi, x, 2);
  PullbackContext ctx(map.source(), bundle, sigma, x, 0);
  MetricValue g = metric_at(map.source(), x);
  double e = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0;
      for (int A = 0; A < m + n; ++A)
        for (int B = 0; B < m + n; ++B)
          s += ctx.target_metric()(A, B) * ctx.psi(A).derivative(i).value() *
               ctx.psi(B).derivative(j).value();
      e += g.g_inv(i, j) * s;
    }
  return 0.5 * e;
}

// Closed form: e(sigma) = m/2 + (1/2) sum_i |D_{e_i} xi|^2.
inline double section_energy_density_via_formula(const SmoothMap& map,
                                                 const std::vector<ExprAst>& xi, const Point& x) {
  int m = map.source().dim(), n = map.target().dim();
  PullbackContext ctx = make_context(map, x, 1);
  std::vector<Jet> xij;
  for (const auto& c : xi) xij.push_back(eval_jet(c, x, 1));
  double total = 0.5 * m;
  for (int i = 0; i < m; ++i) {
    VectorXd d = jet_values(ctx.covariant_along(ctx.frame_column(i, 1), xij));
    total += 0.5 * d.dot(ctx.target_metric() * d);
  }
  return total;
}

}  // namespace tensional

#endif
