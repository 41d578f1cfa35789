#ifndef TENSIONAL_CURVE_HPP
#define TENSIONAL_CURVE_HPP

// Arclength curves: the Frenet apparatus built from iterated covariant
// derivatives of the velocity field, and the curvature system that decides
// whether the tension field along the curve is a harmonic section. For curves
// that condition collapses onto being a geodesic, which is what the
// classifier reports.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tensional/chart.hpp"
#include "tensional/errors.hpp"
#include "tensional/jet.hpp"
#include "tensional/maps.hpp"
#include "tensional/riemann.hpp"

namespace tensional {

// curvatures below this are treated as identically zero and the Frenet frame
// is truncated there
inline constexpr double kFrenetThreshold = 1e-6;

// ---- arclength gate -------------------------------------------------------------------

struct ArclengthReport {
  double max_speed_residual = 0.0;   // max |h(gamma', gamma') - 1|
  double max_source_residual = 0.0;  // max |g_ss - 1|
  bool arclength = false;
  std::vector<double> per_point;
};

// A curve is taken at face value: the engine verifies the unit-speed property
// and the unit source metric but never reparametrizes.
inline ArclengthReport verify_arclength(const SmoothMap& map, const std::vector<Point>& points,
                                        double tol = 1e-8) {
  if (map.source().dim() != 1)
    throw Error("curve '" + map.name() + "' needs a 1-dimensional source, got dimension " +
                std::to_string(map.source().dim()));
  ArclengthReport rep;
  for (const Point& p : points) {
    MatrixXd d = map.differential(p);
    MetricValue h = metric_at(map.target(), map.value(p));
    double speed = d.col(0).dot(h.g * d.col(0));
    double gss = metric_at(map.source(), p).g(0, 0);
    double r = std::max(std::abs(speed - 1.0), std::abs(gss - 1.0));
    rep.per_point.push_back(r);
    rep.max_speed_residual = std::max(rep.max_speed_residual, std::abs(speed - 1.0));
    rep.max_source_residual = std::max(rep.max_source_residual, std::abs(gss - 1.0));
  }
  rep.arclength = std::max(rep.max_speed_residual, rep.max_source_residual) <= tol;
  return rep;
}

class Curve {
 public:
  static Curve create(SmoothMap map, const std::vector<Point>& points, double tol = 1e-8) {
    ArclengthReport rep = verify_arclength(map, points, tol);
    if (!rep.arclength)
      throw NotArclength("curve '" + map.name() + "' is not parametrized by arc length: speed "
                         "residual " +
                         detail::format_double(rep.max_speed_residual) + ", source metric residual " +
                         detail::format_double(rep.max_source_residual));
    return Curve(std::move(map), std::move(rep));
  }

  const SmoothMap& map() const { return map_; }
  const ArclengthReport& arclength() const { return report_; }

 private:
  Curve(SmoothMap map, ArclengthReport rep) : map_(std::move(map)), report_(std::move(rep)) {}

  SmoothMap map_;
  ArclengthReport report_;
};

// ---- Frenet apparatus -----------------------------------------------------------------

// Frame fields F_1 = gamma', F_{i+1} = unit part of D F_i + chi_{i-1} F_{i-1},
// and curvatures chi_i = |D F_i + chi_{i-1} F_{i-1}|, via the pullback
// connection D along the parameter. The ladder stops at the first curvature
// below kFrenetThreshold; later curvatures are reported as zero with the
// degenerate flag set, and truncation_defect records the size of the dropped
// step.
struct FrenetData {
  std::vector<VectorXd> frame;      // F_1 .. F_rank, target coordinates
  std::vector<double> curvatures;   // chi_1 .. chi_{n-1}, zero past truncation
  std::vector<Jet> curvature_jets;  // jets of the curvatures that were built
  int rank = 0;
  bool degenerate = false;
  double truncation_defect = 0.0;
  double max_residual = 0.0;  // structure-equation residual over well-defined relations
};

inline FrenetData frenet(const Curve& curve, const Point& p) {
  const SmoothMap& map = curve.map();
  PullbackContext ctx = make_context(map, p, 3);
  int n = ctx.target_dim();

  JetMatrix h = ctx.tgt().metric_jets(ctx.image(), 3);
  std::vector<Jet> psi3;
  psi3.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) psi3.push_back(ctx.psi(a).truncated(3));
  JetMatrix hj(n, n, psi3[0] * 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) hj.at(a, b) = Jet::compose(h.at(a, b), psi3);

  auto pair_jets = [&](const std::vector<Jet>& x, const std::vector<Jet>& y, int s) {
    Jet out = psi3[0].truncated(s) * 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out = out + hj.at(a, b).truncated(s) * x[static_cast<std::size_t>(a)].truncated(s) *
                        y[static_cast<std::size_t>(b)].truncated(s);
    return out;
  };

  std::vector<std::vector<Jet>> frames;
  std::vector<Jet> F1;
  F1.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) F1.push_back(ctx.psi(a).derivative(0).truncated(4));
  if (std::sqrt(std::max(0.0, pair_jets(F1, F1, 0).value())) < kFrenetThreshold)
    throw DegenerateFrame("curve '" + map.name() + "' is not regular at the sample parameter");
  frames.push_back(std::move(F1));

  FrenetData out;
  if (n > 1) out.curvatures.assign(static_cast<std::size_t>(n - 1), 0.0);
  for (int i = 1; i < n; ++i) {
    const std::vector<Jet>& prev = frames.back();
    if (prev[0].order() < 1)
      throw OrderTooLarge("Frenet ladder needs more jet depth than the context carries for " +
                          std::to_string(n) + " frame fields");
    std::vector<Jet> N = ctx.covariant_dir(0, prev);
    int s = N[0].order();
    if (i >= 2) {
      const Jet& chi_prev = out.curvature_jets[static_cast<std::size_t>(i - 2)];
      const std::vector<Jet>& back = frames[frames.size() - 2];
      for (int a = 0; a < n; ++a)
        N[static_cast<std::size_t>(a)] =
            N[static_cast<std::size_t>(a)] +
            chi_prev.truncated(s) * back[static_cast<std::size_t>(a)].truncated(s);
    }
    Jet n2 = pair_jets(N, N, s);
    double nval = std::sqrt(std::max(0.0, n2.value()));
    if (nval < kFrenetThreshold) {
      out.degenerate = true;
      out.truncation_defect = nval;
      break;
    }
    Jet chi = sqrt(n2);
    std::vector<Jet> next;
    next.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) next.push_back(N[static_cast<std::size_t>(a)] / chi);
    out.curvatures[static_cast<std::size_t>(i - 1)] = chi.value();
    out.curvature_jets.push_back(std::move(chi));
    frames.push_back(std::move(next));
  }
  out.rank = static_cast<int>(frames.size());
  if (out.rank < n) out.degenerate = true;

  for (const auto& f : frames) out.frame.push_back(jet_values(f));

  // structure-equation residuals: D F_i = -chi_{i-1} F_{i-1} + chi_i F_{i+1},
  // checked for every relation whose terms are all represented
  const MatrixXd& h0 = ctx.target_metric();
  for (int i = 1; i <= out.rank; ++i) {
    const std::vector<Jet>& fi = frames[static_cast<std::size_t>(i - 1)];
    if (fi[0].order() < 1) continue;
    if (i == out.rank && out.rank < n) continue;  // dropped step, sized by truncation_defect
    VectorXd lhs = jet_values(ctx.covariant_dir(0, fi));
    VectorXd rhs = VectorXd::Zero(n);
    if (i >= 2)
      rhs -= out.curvatures[static_cast<std::size_t>(i - 2)] * out.frame[static_cast<std::size_t>(i - 2)];
    if (i < out.rank)
      rhs += out.curvatures[static_cast<std::size_t>(i - 1)] * out.frame[static_cast<std::size_t>(i)];
    VectorXd diff = lhs - rhs;
    out.max_residual = std::max(out.max_residual, std::sqrt(diff.dot(h0 * diff)));
  }
  return out;
}

// ---- classification -------------------------------------------------------------------

enum class CurveVerdict { Geodesic, HS, NotHS };

inline const char* to_string(CurveVerdict v) {
  switch (v) {
    case CurveVerdict::Geodesic: return "Geodesic";
    case CurveVerdict::HS: return "HS";
    default: return "NotHS";
  }
}

// The four curvature equations whose simultaneous vanishing makes the tension
// field along the curve a harmonic section:
//
//   chi_1 chi_1' = 0
//   chi_1'' - chi_1^3 - chi_1 chi_2^2 = 0
//   2 chi_1' chi_2 + chi_1 chi_2' = 0
//   chi_1 chi_2 chi_3 = 0
//
// Their only joint solution is chi_1 = 0, so the verdict coincides with the
// geodesic check; both are computed and reported. The pairing obstruction
// between harmonic sections and harmonic maps vanishes identically along
// curves, so the two classifications agree by construction.
struct CurveClassification {
  CurveVerdict verdict = CurveVerdict::NotHS;
  bool hs = false;
  bool hm = false;
  double max_chi1 = 0.0;
  double system_residual = 0.0;
  double frenet_residual = 0.0;
  double hm_pairing = 0.0;
  std::vector<double> system_per_point;
  std::vector<double> curvature_max;  // per curvature index, over the sample
};

inline CurveClassification classify_curve(const Curve& curve, const std::vector<Point>& points,
                                          double tol = 1e-7) {
  CurveClassification rep;
  int n = curve.map().target().dim();
  if (n > 1) rep.curvature_max.assign(static_cast<std::size_t>(n - 1), 0.0);
  for (const Point& p : points) {
    FrenetData f = frenet(curve, p);
    double c1 = 0, c1p = 0, c1pp = 0, c2 = 0, c2p = 0, c3 = 0;
    if (f.curvature_jets.size() >= 1) {
      const Jet& chi1 = f.curvature_jets[0];
      c1 = chi1.value();
      c1p = chi1.derivative(0).value();
      c1pp = chi1.derivative(0).derivative(0).value();
    }
    if (f.curvature_jets.size() >= 2) {
      const Jet& chi2 = f.curvature_jets[1];
      c2 = chi2.value();
      c2p = chi2.derivative(0).value();
    }
    if (f.curvature_jets.size() >= 3) c3 = f.curvature_jets[2].value();

    double r1 = c1 * c1p;
    double r2 = c1pp - c1 * c1 * c1 - c1 * c2 * c2;
    double r3 = 2.0 * c1p * c2 + c1 * c2p;
    double r4 = c1 * c2 * c3;
    double sys = std::max({std::abs(r1), std::abs(r2), std::abs(r3), std::abs(r4)});
    rep.system_per_point.push_back(sys);
    rep.system_residual = std::max(rep.system_residual, sys);
    rep.max_chi1 = std::max(rep.max_chi1, c1);
    rep.frenet_residual = std::max(rep.frenet_residual, f.max_residual);
    for (std::size_t k = 0; k < f.curvatures.size(); ++k)
      rep.curvature_max[k] = std::max(rep.curvature_max[k], std::abs(f.curvatures[k]));

    PullbackContext ctx = make_context(curve.map(), p, 2);
    std::vector<Jet> tau = tension_field_jets(ctx);
    rep.hm_pairing = std::max(rep.hm_pairing, curvature_pairing(ctx, tau).cwiseAbs().maxCoeff());
  }
  if (rep.max_chi1 <= tol)
    rep.verdict = CurveVerdict::Geodesic;
  else if (rep.system_residual <= tol)
    rep.verdict = CurveVerdict::HS;
  else
    rep.verdict = CurveVerdict::NotHS;
  rep.hs = rep.verdict != CurveVerdict::NotHS;
  rep.hm = rep.hs && rep.hm_pairing <= tol;
  return rep;
}

}  // namespace tensional

#endif
