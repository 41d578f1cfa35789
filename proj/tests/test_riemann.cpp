#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "tensional/casebook.hpp"
#include "tensional/chart.hpp"
#include "tensional/riemann.hpp"

using namespace tensional;

namespace {

// diagonally dominant polynomial metric, positive definite on [-1,1]^3
ChartPtr polynomial_metric_chart(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> small(-0.15, 0.15);
  auto c = std::make_shared<RiemannianChart>("poly3",
                                             std::vector<std::string>{"x1", "x2", "x3"});
  const char* vars[] = {"x1", "x2", "x3"};
  auto lin = [&](double a, double b, double d) {
    return std::to_string(a) + "*x1 + " + std::to_string(b) + "*x2 + " + std::to_string(d) +
           "*x3";
  };
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      if (i == j) {
        c->set_metric_entry(i, j, "2 + 0.2*" + std::string(vars[i]) + "^2 + (" +
                                      lin(small(gen), small(gen), small(gen)) + ")");
      } else {
        c->set_metric_entry(i, j, lin(small(gen), small(gen), small(gen)));
      }
    }
    c->set_domain(i, -1.0, 1.0);
    c->set_sample_box(i, -0.9, 0.9);
  }
  return c;
}

double tensor_identity_residuals(const RiemannianChart& chart, const std::vector<Point>& pts) {
  int n = chart.dim();
  double worst = 0.0;
  for (const Point& p : pts) {
    JetMatrix gj = chart.metric_jets(p, 1);
    MetricValue mv = metric_at(chart, p);
    Tensor3 gm = christoffel(chart, p);
    CurvatureData cd = riemann_curvature(chart, p);
    double scale = 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            scale = std::max(scale, std::abs(cd.low.at(l, k, i, j)));

    auto keep = [&](double r) { worst = std::max(worst, std::abs(r)); };

    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          // nabla g = 0: d_k g_ij = Gamma^a_{ki} g_aj + Gamma^a_{kj} g_ia
          MultiIndex dk(static_cast<std::size_t>(n), 0);
          dk[static_cast<std::size_t>(k)] = 1;
          double lhs = gj.at(i, j).partial(dk);
          double rhs = 0.0;
          for (int a = 0; a < n; ++a)
            rhs += gm.at(a, k, i) * mv.g(a, j) + gm.at(a, k, j) * mv.g(i, a);
          keep(lhs - rhs);
          keep(gm.at(k, i, j) - gm.at(k, j, i));
        }

    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double r = cd.low.at(l, k, i, j);
            keep((r + cd.low.at(l, k, j, i)) / scale);   // antisymmetry in the plane
            keep((r + cd.low.at(k, l, i, j)) / scale);   // antisymmetry in the values
            keep((r - cd.low.at(j, i, k, l)) / scale);   // pair exchange
            keep((cd.up.at(l, k, i, j) + cd.up.at(l, i, j, k) + cd.up.at(l, j, k, i)) /
                 scale);                                  // first Bianchi
          }

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) keep(cd.ricci(i, j) - cd.ricci(j, i));
  }
  return worst;
}

}  // namespace

TEST_CASE("tensor identities hold on flat, conformal, and polynomial metrics") {
  auto euclid = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3));
  ChartPtr hyp1 = cases::conformal_upper_half_space(1.0, "h1", "x", "y", "z");
  ChartPtr hyp3 = cases::conformal_upper_half_space(3.0, "h3", "x", "y", "z");
  ChartPtr poly = polynomial_metric_chart(1234);

  CHECK(tensor_identity_residuals(*euclid, sample_points(*euclid, 20, 5)) <= 1e-8);
  CHECK(tensor_identity_residuals(*hyp1, sample_points(*hyp1, 20, 6)) <= 1e-8);
  CHECK(tensor_identity_residuals(*hyp3, sample_points(*hyp3, 20, 7)) <= 1e-8);
  CHECK(tensor_identity_residuals(*poly, sample_points(*poly, 20, 8)) <= 1e-8);
}

TEST_CASE("hyperbolic upper half-space has the known local invariants") {
  ChartPtr h1 = cases::conformal_upper_half_space(1.0, "h1", "x1", "x2", "z");
  Point q{0.3, -0.7, 2.0};

  MetricValue mv = metric_at(*h1, q);
  CHECK(mv.g(0, 0) == doctest::Approx(0.25));
  CHECK(mv.g_inv(2, 2) == doctest::Approx(4.0));

  Tensor3 gm = christoffel(*h1, q);
  CHECK(gm.at(2, 0, 0) == doctest::Approx(0.5));    // Gamma^z_{xx} = p/z
  CHECK(gm.at(0, 0, 2) == doctest::Approx(-0.5));   // Gamma^x_{xz} = -p/z
  CHECK(gm.at(2, 2, 2) == doctest::Approx(-0.5));

  Eigen::VectorXd X(3), Y(3);
  X << 1, 0, 0;
  Y << 0, 0, 1;
  CHECK(sectional_curvature(*h1, q, X, Y) == doctest::Approx(-1.0));
  Y << 0, 1, 0;
  CHECK(sectional_curvature(*h1, q, X, Y) == doctest::Approx(-1.0));

  CurvatureData cd = riemann_curvature(*h1, q);
  CHECK(cd.ricci_op(0, 0) == doctest::Approx(-2.0));
  CHECK(cd.ricci_op(0, 1) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(cd.scalar == doctest::Approx(-6.0));

  auto pts = sample_points(*h1, 5);
  CHECK(check_constant_curvature(*h1, -1.0, pts).holds);
  CHECK_FALSE(check_constant_curvature(*h1, 0.0, pts).holds);
}

TEST_CASE("orthonormal frames are orthonormal and deterministic") {
  ChartPtr h1 = cases::conformal_upper_half_space(1.0, "h1", "x1", "x2", "z");
  Point q{0.3, -0.7, 2.0};

  JetMatrix E = orthonormal_frame_jets(*h1, q, 1);
  CHECK(E.at(0, 0).value() == doctest::Approx(2.0));  // e_1 = z d_x
  CHECK(E.at(2, 2).value() == doctest::Approx(2.0));
  CHECK(E.at(1, 0).value() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(E.at(0, 0).derivative(2).value() == doctest::Approx(1.0));

  ChartPtr poly = polynomial_metric_chart(77);
  for (const Point& p : sample_points(*poly, 5, 9)) {
    MatrixXd frame = orthonormal_frame(*poly, p);
    MetricValue mv = metric_at(*poly, p);
    MatrixXd gram = frame.transpose() * mv.g * frame;
    CHECK((gram - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scalar calculus: gradient, Laplacian, convexity") {
  RiemannianChart e2 = RiemannianChart::euclidean(2, "E2");
  Point o{0.4, 1.1};
  ExprAst f = parse("x1^2 + x2^2", e2.coords());

  CHECK(laplacian(e2, f, o) == doctest::Approx(-4.0));  // positive-spectrum sign
  CHECK(gradient(e2, f, o)(0) == doctest::Approx(0.8));

  ConvexityReport conv = is_strongly_convex_at(e2, f, o);
  CHECK(conv.strongly_convex);
  CHECK(conv.min_eigenvalue == doctest::Approx(2.0));

  ExprAst saddle = parse("x1^2 - x2^2", e2.coords());
  CHECK_FALSE(is_strongly_convex_at(e2, saddle, o).strongly_convex);

  // conformal factor pushes the Laplacian of the height coordinate: on the
  // p=1 half-space, Delta z = z (positive-spectrum) at z=2 gives 2
  ChartPtr h1 = cases::conformal_upper_half_space(1.0, "h1", "x1", "x2", "z");
  Point q{0.3, -0.7, 2.0};
  CHECK(laplacian(*h1, h1->parse_member("z"), q) == doctest::Approx(2.0));
}

TEST_CASE("rough-type checks separate linear, bilinear, and square fields") {
  RiemannianChart e2 = RiemannianChart::euclidean(2, "E2");
  std::vector<Point> pts{{0.3, 0.5}, {-1.0, 0.25}, {0.8, -0.6}};

  auto field = [&](const char* a, const char* b) {
    std::vector<ExprAst> v;
    v.push_back(parse(a, e2.coords()));
    v.push_back(parse(b, e2.coords()));
    return v;
  };

  auto pos = field("x1", "x2");
  auto bil = field("x1*x2", "0");
  auto sq = field("x1^2", "0");

  CHECK(rough_type_check(e2, pos, pts, RoughMode::Tensorial).passes);
  CHECK(rough_type_check(e2, pos, pts, RoughMode::Coordinate).passes);

  RoughTypeReport bt = rough_type_check(e2, bil, pts, RoughMode::Tensorial);
  CHECK_FALSE(bt.passes);
  CHECK(bt.max_residual == doctest::Approx(1.0));
  CHECK(rough_type_check(e2, bil, pts, RoughMode::Coordinate).passes);

  CHECK_FALSE(rough_type_check(e2, sq, pts, RoughMode::Tensorial).passes);
  CHECK_FALSE(rough_type_check(e2, sq, pts, RoughMode::Coordinate).passes);

  // the componentwise reading only makes sense on a flat identity chart
  ChartPtr h1 = cases::conformal_upper_half_space(1.0, "h1", "x1", "x2", "z");
  std::vector<ExprAst> hpos;
  for (const char* c : {"x1", "x2", "z"}) hpos.push_back(h1->parse_member(c));
  Point q{0.3, -0.7, 2.0};
  CHECK_THROWS_AS(rough_type_check(*h1, hpos, {q}, RoughMode::Coordinate),
                  const ModeUnsupported&);
  CHECK_FALSE(rough_type_check(*h1, hpos, {q}, RoughMode::Tensorial).passes);
}
