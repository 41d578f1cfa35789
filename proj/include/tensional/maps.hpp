#ifndef TENSIONAL_MAPS_HPP
#define TENSIONAL_MAPS_HPP

// Smooth maps between charts and the pullback-bundle calculus built on them:
// tension fields, the rough Laplacian on sections of the pulled-back tangent
// bundle, the curvature pairing that obstructs harmonicity of tangent-bundle
// sections, map energy, and classification.
//
// The machinery is generic over MetricSource targets so the same code paths
// serve chart targets and the assembled tangent-bundle metric alike.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tensional/chart.hpp"
#include "tensional/errors.hpp"
#include "tensional/expr.hpp"
#include "tensional/jet.hpp"
#include "tensional/riemann.hpp"

namespace tensional {

class SmoothMap {
 public:
  SmoothMap(std::string name, ChartPtr source, ChartPtr target, std::vector<ExprAst> components)
      : name_(std::move(name)),
        source_(std::move(source)),
        target_(std::move(target)),
        comps_(std::move(components)) {
    if (!source_ || !target_) throw Error("map '" + name_ + "' needs both charts");
    if (static_cast<int>(comps_.size()) != target_->dim())
      throw Error("map '" + name_ + "' needs one component per target coordinate, got " +
                  std::to_string(comps_.size()) + " for a " + std::to_string(target_->dim()) +
                  "-dimensional target");
  }

  static SmoothMap identity(ChartPtr chart, std::string name = "identity") {
    std::vector<ExprAst> comps;
    for (int i = 0; i < chart->dim(); ++i)
      comps.push_back(ExprAst::make_variable(i, chart->coords()[static_cast<std::size_t>(i)]));
    ChartPtr tgt = chart;
    return SmoothMap(std::move(name), std::move(chart), std::move(tgt), std::move(comps));
  }

  const std::string& name() const { return name_; }
  const RiemannianChart& source() const { return *source_; }
  const RiemannianChart& target() const { return *target_; }
  ChartPtr source_ptr() const { return source_; }
  ChartPtr target_ptr() const { return target_; }
  const std::vector<ExprAst>& components() const { return comps_; }

  // component jets at p, with the domain and image membership checks
  std::vector<Jet> jets(const Point& p, int order) const {
    source_->require_point(p, ("evaluation of map '" + name_ + "'").c_str());
    std::vector<Jet> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) out.push_back(eval_jet(c, p, order));
    Point y(out.size());
    for (std::size_t a = 0; a < out.size(); ++a) y[a] = out[a].value();
    if (!target_->contains(y)) {
      std::string s;
      for (std::size_t a = 0; a < y.size(); ++a) s += (a ? ", " : "") + detail::format_double(y[a]);
      throw ImageOutOfChart("map '" + name_ + "' leaves chart '" + target_->name() +
                            "' at image point (" + s + ")");
    }
    return out;
  }

  Point value(const Point& p) const {
    auto js = jets(p, 0);
    Point y(js.size());
    for (std::size_t a = 0; a < js.size(); ++a) y[a] = js[a].value();
    return y;
  }

  MatrixXd differential(const Point& p) const {
    auto js = jets(p, 1);
    MatrixXd d(target_->dim(), source_->dim());
    for (int a = 0; a < target_->dim(); ++a)
      for (int i = 0; i < source_->dim(); ++i) d(a, i) = js[static_cast<std::size_t>(a)].derivative(i).value();
    return d;
  }

 private:
  std::string name_;
  ChartPtr source_;
  ChartPtr target_;
  std::vector<ExprAst> comps_;
};

// ---- pullback context -----------------------------------------------------------
//
// Everything the bundle calculus needs at one base point, precomputed once:
// source inverse metric and Christoffel jets, map jets, target Christoffel
// jets composed with the map, an orthonormal source frame (optionally mixed by
// a constant orthogonal matrix, which must not change any invariant output),
// and the target metric at the image point.

class PullbackContext {
 public:
  // psi_jets: target_dim jets in source variables, order `order`+2
  PullbackContext(const MetricSource& src, const MetricSource& tgt, std::vector<Jet> psi_jets,
                  const Point& p, int order, const MatrixXd* frame_rotation = nullptr)
      : src_(src), tgt_(tgt), base_(p), order_(order), psi_(std::move(psi_jets)) {
    m_ = src.dim();
    n_ = tgt.dim();
    if (static_cast<int>(psi_.size()) != n_)
      throw Error("pullback context: map jet count does not match target dimension");
    if (psi_[0].order() < order + 2)
      throw Error("pullback context: map jets need order " + std::to_string(order + 2));
    image_.resize(static_cast<std::size_t>(n_));
    for (int a = 0; a < n_; ++a) image_[static_cast<std::size_t>(a)] = psi_[static_cast<std::size_t>(a)].value();

    JetMatrix g = src.metric_jets(p, order + 1);
    ginv_ = jet_matrix_inverse(truncate_matrix(g, order));
    gM_ = christoffel_jets(src, p, order);
    frame_ = orthonormal_frame_jets(src, p, order);
    if (frame_rotation) {
      if (frame_rotation->rows() != m_ || frame_rotation->cols() != m_)
        throw Error("frame rotation must be a square matrix of the source dimension");
      JetMatrix mixed(m_, m_, frame_.at(0, 0) * 0.0);
      for (int x = 0; x < m_; ++x)
        for (int i = 0; i < m_; ++i) {
          Jet s = frame_.at(0, 0) * 0.0;
          for (int k = 0; k < m_; ++k) s = s + frame_.at(x, k) * (*frame_rotation)(k, i);
          mixed.at(x, i) = s;
        }
      frame_ = mixed;
    }

    // target Christoffel symbols along the map
    ChristoffelJets gn = christoffel_jets(tgt, image_, order);
    std::vector<Jet> psi_r;
    psi_r.reserve(static_cast<std::size_t>(n_));
    for (int a = 0; a < n_; ++a) psi_r.push_back(psi_[static_cast<std::size_t>(a)].truncated(order));
    std::vector<Jet> gn_full;
    gn_full.reserve(static_cast<std::size_t>(n_) * n_ * n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c) gn_full.push_back(Jet::compose(gn.at(a, b, c), psi_r));

    // truncation caches for the accessors the inner loops hit
    std::vector<Jet> d1;
    d1.reserve(static_cast<std::size_t>(n_) * m_);
    for (int a = 0; a < n_; ++a)
      for (int i = 0; i < m_; ++i) d1.push_back(psi_[static_cast<std::size_t>(a)].derivative(i));
    dpsi_.reserve(static_cast<std::size_t>(order + 1) * n_ * m_);
    for (int ord = 0; ord <= order; ++ord)
      for (std::size_t t = 0; t < d1.size(); ++t) dpsi_.push_back(d1[t].truncated(ord));
    d2psi_.reserve(static_cast<std::size_t>(n_) * m_ * m_);
    for (int a = 0; a < n_; ++a)
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
          d2psi_.push_back(d1[static_cast<std::size_t>(a) * m_ + i].derivative(j).truncated(order));
    gNpsi_.reserve(static_cast<std::size_t>(order + 1) * n_ * n_ * n_);
    for (int ord = 0; ord <= order; ++ord)
      for (std::size_t t = 0; t < gn_full.size(); ++t) gNpsi_.push_back(gn_full[t].truncated(ord));

    JetMatrix h = tgt.metric_jets(image_, 0);
    h_at_image_ = MatrixXd(n_, n_);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) h_at_image_(a, b) = h.at(a, b).value();
  }

  int source_dim() const { return m_; }
  int target_dim() const { return n_; }
  int order() const { return order_; }
  const Point& base() const { return base_; }
  const Point& image() const { return image_; }
  const MetricSource& src() const { return src_; }
  const MetricSource& tgt() const { return tgt_; }
  const JetMatrix& ginv() const { return ginv_; }
  const ChristoffelJets& gammaM() const { return gM_; }
  const JetMatrix& frame() const { return frame_; }
  const MatrixXd& target_metric() const { return h_at_image_; }
  const Jet& psi(int a) const { return psi_[static_cast<std::size_t>(a)]; }
  const Jet& gammaN(int a, int b, int c, int ord) const {
    return gNpsi_[static_cast<std::size_t>(ord) * n_ * n_ * n_ +
                  (static_cast<std::size_t>(a) * n_ + b) * n_ + c];
  }
  const Jet& gammaN(int a, int b, int c) const { return gammaN(a, b, c, order_); }
  const Jet& dpsi(int a, int i, int ord) const {
    return dpsi_[(static_cast<std::size_t>(ord) * n_ + a) * m_ + i];
  }
  const Jet& d2psi(int a, int i, int j) const {
    return d2psi_[(static_cast<std::size_t>(a) * m_ + i) * m_ + j];
  }

  // Covariant derivative of a pullback-bundle section along coordinate
  // direction j: (D_j zeta)^a = d_j zeta^a + Gamma^a_{bc}(psi) d_j psi^b zeta^c.
  // Drops the jet order by one.
  std::vector<Jet> covariant_dir(int j, const std::vector<Jet>& zeta) const {
    int s = zeta.at(0).order();
    if (s < 1) throw Error("covariant derivative needs jets of order at least 1");
    if (s - 1 > order_) throw Error("covariant derivative exceeds the context order");
    std::vector<Jet> zt;
    zt.reserve(zeta.size());
    for (int c = 0; c < n_; ++c) zt.push_back(zeta[static_cast<std::size_t>(c)].truncated(s - 1));
    std::vector<Jet> out;
    out.reserve(zeta.size());
    for (int a = 0; a < n_; ++a) {
      Jet d = zeta[static_cast<std::size_t>(a)].derivative(j);
      for (int b = 0; b < n_; ++b) {
        const Jet& db = dpsi(b, j, s - 1);
        for (int c = 0; c < n_; ++c)
          d = d + gammaN(a, b, c, s - 1) * db * zt[static_cast<std::size_t>(c)];
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  // Covariant derivative along a jet vector field X on the source.
  std::vector<Jet> covariant_along(const std::vector<Jet>& X, const std::vector<Jet>& zeta) const {
    int s = zeta.at(0).order();
    std::vector<Jet> out;
    Jet zero = zeta[0].truncated(s - 1) * 0.0;
    out.assign(static_cast<std::size_t>(n_), zero);
    for (int j = 0; j < m_; ++j) {
      std::vector<Jet> dj = covariant_dir(j, zeta);
      for (int a = 0; a < n_; ++a)
        out[static_cast<std::size_t>(a)] =
            out[static_cast<std::size_t>(a)] + X[static_cast<std::size_t>(j)].truncated(s - 1) * dj[static_cast<std::size_t>(a)];
    }
    return out;
  }

  std::vector<Jet> frame_column(int i, int ord) const {
    std::vector<Jet> e;
    e.reserve(static_cast<std::size_t>(m_));
    for (int x = 0; x < m_; ++x) e.push_back(frame_.at(x, i).truncated(ord));
    return e;
  }

  // w = nabla_{e_i} e_i on the source, as order-0 jets
  std::vector<Jet> frame_acceleration(int i) const {
    std::vector<Jet> e1 = frame_column(i, 1);
    Jet zero0 = e1[0].truncated(0) * 0.0;
    std::vector<Jet> w(static_cast<std::size_t>(m_), zero0);
    for (int k = 0; k < m_; ++k) {
      Jet s = zero0;
      for (int j = 0; j < m_; ++j) {
        s = s + e1[static_cast<std::size_t>(j)].truncated(0) * e1[static_cast<std::size_t>(k)].derivative(j);
        for (int l = 0; l < m_; ++l)
          s = s + e1[static_cast<std::size_t>(j)].truncated(0) * gM_.at(k, j, l).truncated(0) *
                      e1[static_cast<std::size_t>(l)].truncated(0);
      }
      w[static_cast<std::size_t>(k)] = s;
    }
    return w;
  }

 private:
  const MetricSource& src_;
  const MetricSource& tgt_;
  Point base_;
  Point image_;
  int order_ = 0;
  int m_ = 0;
  int n_ = 0;
  std::vector<Jet> psi_;
  JetMatrix ginv_{0, 0, Jet()};
  ChristoffelJets gM_;
  JetMatrix frame_{0, 0, Jet()};
  std::vector<Jet> gNpsi_;   // target Christoffels along the map, per truncation order
  std::vector<Jet> dpsi_;    // first map derivatives, per truncation order
  std::vector<Jet> d2psi_;   // second map derivatives at the context order
  MatrixXd h_at_image_;
};

inline PullbackContext make_context(const SmoothMap& map, const Point& p, int order,
                                    const MatrixXd* frame_rotation = nullptr) {
  return PullbackContext(map.source(), map.target(), map.jets(p, order + 2), p, order,
                         frame_rotation);
}

// ---- tension field ---------------------------------------------------------------
//
//   tau^a = g^{ij} ( d_i d_j psi^a - Gamma^k_{ij} d_k psi^a
//                    + Gamma^a_{bc}(psi) d_i psi^b d_j psi^c )

inline std::vector<Jet> tension_field_jets(const PullbackContext& ctx) {
  int m = ctx.source_dim(), n = ctx.target_dim(), r = ctx.order();
  Jet zero = ctx.ginv().at(0, 0) * 0.0;
  // hoisted contractions: C^k = g^{ij} Gamma^k_{ij} and P^{bc} = g^{ij} d_i psi^b d_j psi^c
  std::vector<Jet> C(static_cast<std::size_t>(m), zero);
  for (int k = 0; k < m; ++k) {
    Jet s = zero;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s = s + ctx.ginv().at(i, j) * ctx.gammaM().at(k, i, j);
    C[static_cast<std::size_t>(k)] = std::move(s);
  }
  std::vector<Jet> Q(static_cast<std::size_t>(n) * m, zero);
  for (int b = 0; b < n; ++b)
    for (int j = 0; j < m; ++j) {
      Jet s = zero;
      for (int i = 0; i < m; ++i) s = s + ctx.ginv().at(i, j) * ctx.dpsi(b, i, r);
      Q[static_cast<std::size_t>(b) * m + j] = std::move(s);
    }
  std::vector<Jet> P(static_cast<std::size_t>(n) * n, zero);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      Jet s = zero;
      for (int j = 0; j < m; ++j)
        s = s + Q[static_cast<std::size_t>(b) * m + j] * ctx.dpsi(c, j, r);
      P[static_cast<std::size_t>(b) * n + c] = std::move(s);
    }
  std::vector<Jet> tau;
  tau.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    Jet s = zero;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s = s + ctx.ginv().at(i, j) * ctx.d2psi(a, i, j);
    for (int k = 0; k < m; ++k) s = s - C[static_cast<std::size_t>(k)] * ctx.dpsi(a, k, r);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        s = s + ctx.gammaN(a, b, c) * P[static_cast<std::size_t>(b) * n + c];
    tau.push_back(std::move(s));
  }
  return tau;
}

inline VectorXd jet_values(const std::vector<Jet>& v) {
  VectorXd out(static_cast<int>(v.size()));
  for (std::size_t a = 0; a < v.size(); ++a) out(static_cast<int>(a)) = v[a].value();
  return out;
}

inline std::vector<Jet> tension_field_jets(const SmoothMap& map, const Point& p, int order) {
  return tension_field_jets(make_context(map, p, order));
}

inline VectorXd tension_field(const SmoothMap& map, const Point& p) {
  return jet_values(tension_field_jets(map, p, 0));
}

// ---- rough Laplacian --------------------------------------------------------------
//
//   Delta^psi xi = - sum_i ( D_{e_i} D_{e_i} xi - D_{w_i} xi ),   w_i = nabla_{e_i} e_i,
// over the orthonormal source frame. Positive-spectrum sign, matching the
// scalar convention.

inline VectorXd rough_laplacian(const PullbackContext& ctx, const std::vector<Jet>& xi) {
  if (xi.at(0).order() < 2) throw Error("rough Laplacian needs section jets of order 2");
  if (ctx.order() < 2) throw Error("rough Laplacian needs a context of order 2");
  int m = ctx.source_dim(), n = ctx.target_dim();
  // the coordinate-direction passes do not depend on the frame vector; hoist them
  std::vector<std::vector<Jet>> Dxi, Dxi1;
  Dxi.reserve(static_cast<std::size_t>(m));
  Dxi1.reserve(static_cast<std::size_t>(m));
  std::vector<Jet> xi1;
  xi1.reserve(static_cast<std::size_t>(n));
  for (int a2 = 0; a2 < n; ++a2) xi1.push_back(xi[static_cast<std::size_t>(a2)].truncated(1));
  for (int j = 0; j < m; ++j) {
    Dxi.push_back(ctx.covariant_dir(j, xi));    // order 1
    Dxi1.push_back(ctx.covariant_dir(j, xi1));  // order 0
  }
  VectorXd out = VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    std::vector<Jet> e1 = ctx.frame_column(i, 1);
    Jet zero1 = e1[0] * 0.0;
    std::vector<Jet> eta(static_cast<std::size_t>(n), zero1);  // D_{e_i} xi, order 1
    for (int a2 = 0; a2 < n; ++a2) {
      Jet s = zero1;
      for (int j = 0; j < m; ++j)
        s = s + e1[static_cast<std::size_t>(j)] * Dxi[static_cast<std::size_t>(j)][static_cast<std::size_t>(a2)];
      eta[static_cast<std::size_t>(a2)] = std::move(s);
    }
    std::vector<Jet> a = ctx.covariant_along(e1, eta);  // D_{e_i} D_{e_i} xi, order 0
    std::vector<Jet> w = ctx.frame_acceleration(i);
    for (int a2 = 0; a2 < n; ++a2) {
      Jet b = w[0] * 0.0;  // D_{w_i} xi, order 0
      for (int j = 0; j < m; ++j)
        b = b + w[static_cast<std::size_t>(j)] * Dxi1[static_cast<std::size_t>(j)][static_cast<std::size_t>(a2)];
      out(a2) -= a[static_cast<std::size_t>(a2)].value() - b.value();
    }
  }
  return out;
}

// ---- curvature term and pairing ----------------------------------------------------
//
//   S(xi) = sum_i R^N( D_{e_i} xi , xi ) dpsi(e_i)
// evaluated at the image point; the pairing against dpsi(e_j) in the target
// metric is what must vanish for the section to be harmonic as a map.

inline VectorXd curvature_term(const PullbackContext& ctx, const std::vector<Jet>& xi) {
  if (xi.at(0).order() < 1) throw Error("curvature term needs section jets of order 1");
  int m = ctx.source_dim(), n = ctx.target_dim();
  CurvatureData rn = riemann_curvature(ctx.tgt(), ctx.image());
  MatrixXd E(m, m);
  for (int x = 0; x < m; ++x)
    for (int i = 0; i < m; ++i) E(x, i) = ctx.frame().at(x, i).value();
  MatrixXd dpsi0(n, m);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) dpsi0(a, j) = ctx.psi(a).derivative(j).value();
  VectorXd xival(n);
  for (int a = 0; a < n; ++a) xival(a) = xi[static_cast<std::size_t>(a)].value();
  VectorXd out = VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    std::vector<Jet> e1 = ctx.frame_column(i, 1);
    std::vector<Jet> xi1;
    for (int a = 0; a < n; ++a) xi1.push_back(xi[static_cast<std::size_t>(a)].truncated(1));
    VectorXd dxi = jet_values(ctx.covariant_along(e1, xi1));
    VectorXd v = dpsi0 * E.col(i);
    for (int l = 0; l < n; ++l) {
      double s = 0;
      for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += rn.up.at(l, c, a, b) * dxi(a) * xival(b) * v(c);
      out(l) += s;
    }
  }
  return out;
}

// pairing_j = h( S(xi), dpsi(e_j) ), one entry per frame vector
inline VectorXd curvature_pairing(const PullbackContext& ctx, const std::vector<Jet>& xi) {
  int m = ctx.source_dim(), n = ctx.target_dim();
  VectorXd S = curvature_term(ctx, xi);
  MatrixXd E(m, m);
  for (int x = 0; x < m; ++x)
    for (int i = 0; i < m; ++i) E(x, i) = ctx.frame().at(x, i).value();
  MatrixXd dpsi0(n, m);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < m; ++j) dpsi0(a, j) = ctx.psi(a).derivative(j).value();
  VectorXd out(m);
  for (int j = 0; j < m; ++j) out(j) = S.dot(ctx.target_metric() * (dpsi0 * E.col(j)));
  return out;
}

// ---- energy -----------------------------------------------------------------------

inline double energy_density(const SmoothMap& map, const Point& p) {
  PullbackContext ctx = make_context(map, p, 0);
  int m = ctx.source_dim(), n = ctx.target_dim();
  MetricValue g = metric_at(map.source(), p);
  double e = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          s += ctx.target_metric()(a, b) * ctx.psi(a).derivative(i).value() *
               ctx.psi(b).derivative(j).value();
      e += g.g_inv(i, j) * s;
    }
  return 0.5 * e;
}

// Midpoint-rule energy over the source sampling window. Adequate for the
// smooth integrands here; subdivisions are per axis.
inline double energy(const SmoothMap& map, int subdivisions = 16) {
  const RiemannianChart& src = map.source();
  int m = src.dim();
  std::vector<std::pair<double, double>> win;
  double cell = 1.0;
  for (int i = 0; i < m; ++i) {
    win.push_back(src.sample_window(i, 0.0));
    cell *= (win.back().second - win.back().first) / subdivisions;
  }
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  double total = 0;
  while (true) {
    Point p(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      p[static_cast<std::size_t>(i)] =
          win[static_cast<std::size_t>(i)].first +
          (idx[static_cast<std::size_t>(i)] + 0.5) *
              (win[static_cast<std::size_t>(i)].second - win[static_cast<std::size_t>(i)].first) / subdivisions;
    if (src.contains(p)) {
      MetricValue g = metric_at(src, p);
      total += energy_density(map, p) * std::sqrt(g.g.determinant()) * cell;
    }
    int i = 0;
    for (; i < m; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < subdivisions) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i == m) break;
  }
  return total;
}

// ---- classification -----------------------------------------------------------------

struct MapClassification {
  double tau_residual = 0.0;       // max |tau(psi)|
  double laplacian_residual = 0.0; // max |Delta^psi tau|
  double pairing_residual = 0.0;   // max |h(S(tau), dpsi e_j)|
  bool harmonic = false;
  bool hs = false;  // tau is a harmonic section of the pullback bundle
  bool hm = false;  // the tau-section is moreover a harmonic map to the tangent bundle
  std::vector<double> tau_per_point;
  std::vector<double> laplacian_per_point;
  std::vector<double> pairing_per_point;
};

inline MapClassification classify_map(const SmoothMap& map, const std::vector<Point>& points,
                                      double tol = 1e-7) {
  MapClassification rep;
  for (const Point& p : points) {
    PullbackContext ctx = make_context(map, p, 2);
    std::vector<Jet> tau = tension_field_jets(ctx);
    double tr = jet_values(tau).cwiseAbs().maxCoeff();
    double lr = rough_laplacian(ctx, tau).cwiseAbs().maxCoeff();
    double pr = curvature_pairing(ctx, tau).cwiseAbs().maxCoeff();
    rep.tau_per_point.push_back(tr);
    rep.laplacian_per_point.push_back(lr);
    rep.pairing_per_point.push_back(pr);
    rep.tau_residual = std::max(rep.tau_residual, tr);
    rep.laplacian_residual = std::max(rep.laplacian_residual, lr);
    rep.pairing_residual = std::max(rep.pairing_residual, pr);
  }
  rep.harmonic = rep.tau_residual <= tol;
  rep.hs = rep.laplacian_residual <= tol;
  rep.hm = rep.hs && rep.pairing_residual <= tol;
  return rep;
}

}  // namespace tensional

#endif
