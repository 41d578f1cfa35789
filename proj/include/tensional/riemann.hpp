#ifndef TENSIONAL_RIEMANN_HPP
#define TENSIONAL_RIEMANN_HPP

// Chart-level Riemannian calculus.
//
// Conventions (used consistently across the whole library):
//   * Curvature:  R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
//     In coordinates R(d_i, d_j) d_k = R^l_{kij} d_l, so
//       R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//                 + Gamma^l_{ia} Gamma^a_{jk} - Gamma^l_{ja} Gamma^a_{ik}.
//     With this sign the round sphere has sectional curvature +1.
//   * Ricci: Ric(Y,Z) = sum_i <R(e_i, Y)Z, e_i>.
//   * Laplacians carry the positive-spectrum sign:
//       Delta f = sum_i [ (nabla_{e_i} e_i) f - e_i(e_i f) ] = -trace_g Hess f,
//     so Delta(x1^2 + x2^2) = -4 on the Euclidean plane.
//   * Orthonormal frames come from Gram-Schmidt over the coordinate basis in
//     declared coordinate order, which makes them deterministic.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "tensional/chart.hpp"
#include "tensional/errors.hpp"
#include "tensional/expr.hpp"
#include "tensional/jet.hpp"

namespace tensional {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Tensor3 {
  int n = 0;
  std::vector<double> v;
  explicit Tensor3(int n_) : n(n_), v(static_cast<std::size_t>(n_) * n_ * n_, 0.0) {}
  double& at(int a, int b, int c) { return v[(static_cast<std::size_t>(a) * n + b) * n + c]; }
  double at(int a, int b, int c) const { return v[(static_cast<std::size_t>(a) * n + b) * n + c]; }
};

struct Tensor4 {
  int n = 0;
  std::vector<double> v;
  explicit Tensor4(int n_) : n(n_), v(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0) {}
  double& at(int a, int b, int c, int d) {
    return v[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
  double at(int a, int b, int c, int d) const {
    return v[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d];
  }
};

// ---- metric values ----------------------------------------------------------

struct MetricValue {
  MatrixXd g;
  MatrixXd g_inv;
  double min_eigenvalue = 0.0;
};

inline constexpr double kSpdThreshold = 1e-10;

// Positive-definiteness is established by a symmetric eigendecomposition so a
// failure can report the offending eigenvalue.
inline MetricValue metric_at(const MetricSource& ms, const Point& p) {
  int n = ms.dim();
  JetMatrix gj = ms.metric_jets(p, 0);
  MetricValue out;
  out.g = MatrixXd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.g(i, j) = gj.at(i, j).value();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(out.g);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (!(out.min_eigenvalue > kSpdThreshold))
    throw NotPositiveDefinite("metric of " + ms.describe() +
                                  " is not positive definite at a sample point (eigenvalue " +
                                  detail::format_double(out.min_eigenvalue) + ")",
                              out.min_eigenvalue);
  out.g_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
              es.eigenvectors().transpose();
  double resid = (out.g * out.g_inv - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (resid > 1e-10)
    throw Error("metric inversion drifted beyond tolerance (" + detail::format_double(resid) + ")");
  return out;
}

// ---- Christoffel symbols ------------------------------------------------------

struct ChristoffelJets {
  int n = 0;
  std::vector<Jet> v;  // [k][i][j]
  const Jet& at(int k, int i, int j) const {
    return v[(static_cast<std::size_t>(k) * n + i) * n + j];
  }
  Jet& at(int k, int i, int j) { return v[(static_cast<std::size_t>(k) * n + i) * n + j]; }
};

inline JetMatrix truncate_matrix(const JetMatrix& a, int order) {
  JetMatrix r(a.rows, a.cols, a.at(0, 0).truncated(order));
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j).truncated(order);
  return r;
}

// Koszul coordinate formula evaluated in jet arithmetic:
//   Gamma^k_{ij} = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
inline ChristoffelJets christoffel_jets(const MetricSource& ms, const Point& p, int order) {
  int n = ms.dim();
  JetMatrix gj = ms.metric_jets(p, order + 1);
  JetMatrix ginv = jet_matrix_inverse(truncate_matrix(gj, order));
  // dg[l](i,j) = d_l g_{ij} at the requested order
  std::vector<JetMatrix> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    JetMatrix d(n, n, gj.at(0, 0).derivative(l));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d.at(i, j) = gj.at(i, j).derivative(l);
    dg.push_back(std::move(d));
  }
  ChristoffelJets out;
  out.n = n;
  Jet zero = ginv.at(0, 0) * 0.0;
  out.v.assign(static_cast<std::size_t>(n) * n * n, zero);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = zero;
        for (int l = 0; l < n; ++l)
          s = s + ginv.at(k, l) * (dg[static_cast<std::size_t>(i)].at(j, l) +
                                   dg[static_cast<std::size_t>(j)].at(i, l) -
                                   dg[static_cast<std::size_t>(l)].at(i, j));
        s = s * 0.5;
        out.at(k, i, j) = s;
        out.at(k, j, i) = s;
      }
  return out;
}

inline Tensor3 christoffel(const MetricSource& ms, const Point& p) {
  ChristoffelJets cj = christoffel_jets(ms, p, 0);
  Tensor3 t(ms.dim());
  for (int k = 0; k < t.n; ++k)
    for (int i = 0; i < t.n; ++i)
      for (int j = 0; j < t.n; ++j) t.at(k, i, j) = cj.at(k, i, j).value();
  return t;
}

// ---- curvature ----------------------------------------------------------------

struct CurvatureData {
  int n = 0;
  Tensor4 up;   // up(l,k,i,j) = component along d_l of R(d_i,d_j) d_k
  Tensor4 low;  // low(l,k,i,j) = g(R(d_i,d_j) d_k, d_l)
  MatrixXd ricci;      // Ric(d_j, d_k)
  MatrixXd ricci_op;   // index-raised: g^{ia} Ric(d_a, d_j)
  double scalar = 0.0;
  CurvatureData(int n_) : n(n_), up(n_), low(n_), ricci(n_, n_), ricci_op(n_, n_) {}
};

inline CurvatureData riemann_curvature(const MetricSource& ms, const Point& p) {
  int n = ms.dim();
  ChristoffelJets cj = christoffel_jets(ms, p, 1);
  MetricValue mv = metric_at(ms, p);
  Tensor3 gamma(n);
  Tensor4 dgamma(n);  // dgamma(l, j, k, i) = d_i Gamma^l_{jk}
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        gamma.at(l, j, k) = cj.at(l, j, k).value();
        for (int i = 0; i < n; ++i) dgamma.at(l, j, k, i) = cj.at(l, j, k).derivative(i).value();
      }
  CurvatureData out(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double r = dgamma.at(l, j, k, i) - dgamma.at(l, i, k, j);
          for (int a = 0; a < n; ++a)
            r += gamma.at(l, i, a) * gamma.at(a, j, k) - gamma.at(l, j, a) * gamma.at(a, i, k);
          out.up.at(l, k, i, j) = r;
        }
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double r = 0;
          for (int a = 0; a < n; ++a) r += mv.g(l, a) * out.up.at(a, k, i, j);
          out.low.at(l, k, i, j) = r;
        }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double r = 0;
      for (int i = 0; i < n; ++i) r += out.up.at(i, k, i, j);
      out.ricci(j, k) = r;
    }
  out.ricci_op = mv.g_inv * out.ricci;
  out.scalar = out.ricci_op.trace();
  return out;
}

inline double sectional_curvature(const MetricSource& ms, const Point& p, const VectorXd& X,
                                  const VectorXd& Y) {
  int n = ms.dim();
  CurvatureData cd = riemann_curvature(ms, p);
  MetricValue mv = metric_at(ms, p);
  VectorXd RXYY = VectorXd::Zero(n);
  for (int l = 0; l < n; ++l) {
    double s = 0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += cd.up.at(l, k, i, j) * X(i) * Y(j) * Y(k);
    RXYY(l) = s;
  }
  double num = RXYY.dot(mv.g * X);
  double den = (X.dot(mv.g * X)) * (Y.dot(mv.g * Y)) - std::pow(X.dot(mv.g * Y), 2);
  if (std::abs(den) < 1e-14) throw Error("sectional curvature of a degenerate plane");
  return num / den;
}

struct ConstantCurvatureReport {
  bool holds = false;
  double max_abs_residual = 0.0;
  double scale = 1.0;
};

// Does R(U,V)W = c ( g(V,W) U - g(U,W) V ) hold at the given points?
// Checked on the full coordinate basis, residual scaled by the largest term.
inline ConstantCurvatureReport check_constant_curvature(const MetricSource& ms, double c,
                                                        const std::vector<Point>& points,
                                                        double tol = 1e-8) {
  ConstantCurvatureReport rep;
  for (const Point& p : points) {
    CurvatureData cd = riemann_curvature(ms, p);
    MetricValue mv = metric_at(ms, p);
    for (int l = 0; l < cd.n; ++l)
      for (int k = 0; k < cd.n; ++k)
        for (int i = 0; i < cd.n; ++i)
          for (int j = 0; j < cd.n; ++j) {
            double lhs = cd.up.at(l, k, i, j);
            double rhs = c * (mv.g(j, k) * (l == i ? 1.0 : 0.0) - mv.g(i, k) * (l == j ? 1.0 : 0.0));
            rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(lhs - rhs));
            rep.scale = std::max({rep.scale, std::abs(lhs), std::abs(rhs)});
          }
  }
  rep.holds = rep.max_abs_residual <= tol * rep.scale;
  return rep;
}

// ---- orthonormal frames ---------------------------------------------------------

// Gram-Schmidt over the coordinate basis, in coordinate order, in jet
// arithmetic. Column i of the result holds the components of e_i.
inline JetMatrix orthonormal_frame_jets(const MetricSource& ms, const Point& p, int order) {
  int n = ms.dim();
  JetMatrix g = ms.metric_jets(p, order);
  Jet zero = g.at(0, 0) * 0.0;
  JetMatrix E(n, n, zero);
  auto inner = [&](const std::vector<Jet>& a, const std::vector<Jet>& b) {
    Jet s = zero;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) s = s + a[static_cast<std::size_t>(x)] * g.at(x, y) * b[static_cast<std::size_t>(y)];
    return s;
  };
  std::vector<std::vector<Jet>> cols;
  for (int i = 0; i < n; ++i) {
    std::vector<Jet> v(static_cast<std::size_t>(n), zero);
    v[static_cast<std::size_t>(i)] = zero + 1.0;
    for (int k = 0; k < i; ++k) {
      Jet c = inner(v, cols[static_cast<std::size_t>(k)]);
      for (int x = 0; x < n; ++x)
        v[static_cast<std::size_t>(x)] =
            v[static_cast<std::size_t>(x)] - c * cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(x)];
    }
    Jet nrm2 = inner(v, v);
    if (!(nrm2.value() > 0))
      throw NotPositiveDefinite("Gram-Schmidt hit a non-positive norm; metric of " + ms.describe() +
                                    " is degenerate at the point",
                                nrm2.value());
    Jet inv_n = Jet::reciprocal(sqrt(nrm2));
    for (int x = 0; x < n; ++x)
      v[static_cast<std::size_t>(x)] = v[static_cast<std::size_t>(x)] * inv_n;
    cols.push_back(std::move(v));
  }
  for (int i = 0; i < n; ++i)
    for (int x = 0; x < n; ++x) E.at(x, i) = cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
  return E;
}

inline MatrixXd orthonormal_frame(const MetricSource& ms, const Point& p) {
  JetMatrix E = orthonormal_frame_jets(ms, p, 0);
  MatrixXd out(ms.dim(), ms.dim());
  for (int i = 0; i < ms.dim(); ++i)
    for (int j = 0; j < ms.dim(); ++j) out(i, j) = E.at(i, j).value();
  return out;
}

// ---- scalar calculus ---------------------------------------------------------

inline VectorXd gradient(const MetricSource& ms, const Point& p, const Jet& f) {
  int n = ms.dim();
  MetricValue mv = metric_at(ms, p);
  VectorXd df(n);
  for (int j = 0; j < n; ++j) df(j) = f.derivative(j).value();
  return mv.g_inv * df;
}

inline MatrixXd hessian(const MetricSource& ms, const Point& p, const Jet& f) {
  int n = ms.dim();
  Tensor3 gamma = christoffel(ms, p);
  MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = f.derivative(i).derivative(j).value();
      for (int k = 0; k < n; ++k) v -= gamma.at(k, i, j) * f.derivative(k).value();
      h(i, j) = v;
    }
  return h;
}

// positive-spectrum sign: Delta f = -trace_g Hess f
inline double laplacian(const MetricSource& ms, const Point& p, const Jet& f) {
  MetricValue mv = metric_at(ms, p);
  MatrixXd h = hessian(ms, p, f);
  return -(mv.g_inv * h).trace();
}

inline Jet scalar_field_jet(const RiemannianChart& chart, const ExprAst& f, const Point& p,
                            int order) {
  chart.require_point(p, "scalar field evaluation");
  return eval_jet(f, p, order);
}

inline VectorXd gradient(const RiemannianChart& chart, const ExprAst& f, const Point& p) {
  return gradient(chart, p, scalar_field_jet(chart, f, p, 1));
}

inline MatrixXd hessian(const RiemannianChart& chart, const ExprAst& f, const Point& p) {
  return hessian(chart, p, scalar_field_jet(chart, f, p, 2));
}

inline double laplacian(const RiemannianChart& chart, const ExprAst& f, const Point& p) {
  return laplacian(chart, p, scalar_field_jet(chart, f, p, 2));
}

struct ConvexityReport {
  bool strongly_convex = false;
  double min_eigenvalue = 0.0;
};

inline ConvexityReport is_strongly_convex_at(const RiemannianChart& chart, const ExprAst& f,
                                             const Point& p, double threshold = 1e-10) {
  MatrixXd h = hessian(chart, f, p);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  ConvexityReport rep;
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  rep.strongly_convex = rep.min_eigenvalue > threshold;
  return rep;
}

// ---- rough-type vector fields -------------------------------------------------

enum class RoughMode { Tensorial, Coordinate };

struct RoughTypeReport {
  bool passes = false;
  double max_residual = 0.0;
  std::vector<double> per_point;
};

// Tensorial residual: the symmetrized second covariant derivative of the field,
//   sym_ij ( nabla_i nabla_j xi - Gamma^a_{ij} nabla_a xi ),
// which vanishes iff nabla_X nabla_X xi = nabla_{nabla_X X} xi for every X.
inline double rough_type_residual_tensorial(const RiemannianChart& chart,
                                            const std::vector<ExprAst>& field, const Point& p) {
  int n = chart.dim();
  if (static_cast<int>(field.size()) != n)
    throw Error("vector field needs one component per chart coordinate");
  ChristoffelJets cj = christoffel_jets(chart, p, 1);
  auto sp1 = JetSpace::get(n, 1);
  std::vector<Jet> env1;
  for (int v = 0; v < n; ++v) env1.push_back(Jet::variable(sp1, p, v));
  // first covariant derivative as an order-1 jet field: D(j,k) = (nabla_j xi)^k
  std::vector<Jet> xi2;
  for (const auto& comp : field) xi2.push_back(eval_jet(comp, p, 2));
  JetMatrix D(n, n, xi2[0].truncated(1) * 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Jet d = xi2[static_cast<std::size_t>(k)].derivative(j);
      for (int a = 0; a < n; ++a)
        d = d + cj.at(k, j, a) * xi2[static_cast<std::size_t>(a)].truncated(1);
      D.at(j, k) = d;
    }
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        auto second = [&](int ii, int jj) {
          double t = D.at(jj, k).derivative(ii).value();
          for (int a = 0; a < n; ++a) {
            t += cj.at(k, ii, a).value() * D.at(jj, a).value();
            t -= cj.at(a, ii, jj).value() * D.at(a, k).value();
          }
          return t;
        };
        double s = 0.5 * (second(i, j) + second(j, i));
        worst = std::max(worst, std::abs(s));
      }
  return worst;
}

// Coordinate residual: max_k,j |d^2 xi^j / d x_k^2|. Only meaningful on the
// flat chart with the identity metric; anything else is rejected.
inline double rough_type_residual_coordinate(const RiemannianChart& chart,
                                             const std::vector<ExprAst>& field, const Point& p) {
  int n = chart.dim();
  JetMatrix g = chart.metric_jets(p, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(g.at(i, j).value() - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw ModeUnsupported("the coordinate criterion applies only to the Euclidean chart");
  Tensor3 gamma = christoffel(chart, p);
  for (double v : gamma.v)
    if (std::abs(v) > 1e-12)
      throw ModeUnsupported("the coordinate criterion applies only to the Euclidean chart");
  double worst = 0.0;
  for (const auto& comp : field) {
    Jet j2 = eval_jet(comp, p, 2);
    for (int k = 0; k < n; ++k) {
      MultiIndex mi(static_cast<std::size_t>(n), 0);
      mi[static_cast<std::size_t>(k)] = 2;
      worst = std::max(worst, std::abs(j2.partial(mi)));
    }
  }
  return worst;
}

inline RoughTypeReport rough_type_check(const RiemannianChart& chart,
                                        const std::vector<ExprAst>& field,
                                        const std::vector<Point>& points, RoughMode mode,
                                        double tol = 1e-8) {
  RoughTypeReport rep;
  for (const Point& p : points) {
    chart.require_point(p, "rough-type check");
    double r = mode == RoughMode::Tensorial ? rough_type_residual_tensorial(chart, field, p)
                                            : rough_type_residual_coordinate(chart, field, p);
    rep.per_point.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  rep.passes = rep.max_residual <= tol;
  return rep;
}

}  // namespace tensional

#endif
