#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "tensional/casebook.hpp"
#include "tensional/curve.hpp"

using namespace tensional;

namespace {

ChartPtr hyperbolic_plane() {
  auto hyp = std::make_shared<RiemannianChart>("hyp2", std::vector<std::string>{"x", "z"});
  hyp->set_metric_entry(0, 0, "z^(-2)");
  hyp->set_metric_entry(0, 1, "0");
  hyp->set_metric_entry(1, 1, "z^(-2)");
  hyp->set_domain(1, 0.05, 100.0);
  return hyp;
}

}  // namespace

TEST_CASE("straight line: geodesic with a rank-one degenerate frame") {
  ChartPtr src = cases::arclength_interval(-2.0, 2.0);
  auto e3 = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3));
  SmoothMap m("line", src, ChartPtr(std::move(e3)),
              {src->parse_member("s/sqrt(3)"), src->parse_member("s/sqrt(3)"),
               src->parse_member("s/sqrt(3)")});
  auto pts = sample_points(*src, 10, 11);
  Curve c = Curve::create(m, pts);
  CurveClassification rep = classify_curve(c, pts);
  CHECK(rep.verdict == CurveVerdict::Geodesic);
  CHECK(rep.hs);
  CHECK(rep.hm);
  CHECK(rep.max_chi1 <= 1e-9);
  CHECK(rep.frenet_residual <= 1e-8);
  FrenetData f = frenet(c, pts[0]);
  CHECK(f.rank == 1);
  CHECK(f.degenerate);
}

TEST_CASE("circles: curvature 1/r, system residual 1/r^3, never a harmonic section") {
  for (double r : {0.5, 1.0, 2.0}) {
    SmoothMap m = cases::circle_curve(r);
    auto pts = sample_points(m.source(), 10, 7);
    Curve c = Curve::create(m, pts);
    CurveClassification rep = classify_curve(c, pts);
    INFO("r = " << r);
    CHECK(rep.verdict == CurveVerdict::NotHS);
    CHECK_FALSE(rep.hs);
    CHECK_FALSE(rep.hm);
    CHECK(rep.curvature_max[0] == doctest::Approx(1.0 / r).epsilon(1e-8));
    CHECK(rep.frenet_residual <= 1e-8);
    CHECK(rep.system_residual == doctest::Approx(1.0 / (r * r * r)).epsilon(1e-8).scale(1.0));

    // two routes to the rough Laplacian of the tension field: the generic
    // pullback machinery and the frame expansion chi_1^3 F_2
    FrenetData f = frenet(c, pts[0]);
    PullbackContext ctx = make_context(m, pts[0], 2);
    VectorXd lap = rough_laplacian(ctx, tension_field_jets(ctx));
    VectorXd want = (1.0 / (r * r * r)) * f.frame[1];
    CHECK((lap - want).norm() <= 1e-8);
  }
}

TEST_CASE("helix: constant curvature and torsion, full-rank frame") {
  double a = 1.3, b = 0.7, c2 = a * a + b * b;
  SmoothMap m = cases::helix_curve(a, b);
  auto pts = sample_points(m.source(), 10, 19);
  Curve c = Curve::create(m, pts);
  CurveClassification rep = classify_curve(c, pts);
  CHECK(rep.verdict == CurveVerdict::NotHS);
  CHECK(rep.curvature_max[0] == doctest::Approx(a / c2).epsilon(1e-8));
  CHECK(rep.curvature_max[1] == doctest::Approx(b / c2).epsilon(1e-8));
  CHECK(rep.frenet_residual <= 1e-8);
  CHECK(rep.hm_pairing <= 1e-10);

  FrenetData f = frenet(c, pts[3]);
  CHECK(f.rank == 3);
  CHECK_FALSE(f.degenerate);

  PullbackContext ctx = make_context(m, pts[3], 2);
  VectorXd lap = rough_laplacian(ctx, tension_field_jets(ctx));
  double c1 = a / c2, ch2 = b / c2;
  VectorXd want = c1 * (c1 * c1 + ch2 * ch2) * f.frame[1];
  CHECK((lap - want).norm() <= 1e-8);
  CHECK(rep.system_residual ==
        doctest::Approx(c1 * (c1 * c1 + ch2 * ch2)).epsilon(1e-8).scale(1.0));
}

TEST_CASE("vertical ray in the hyperbolic plane is a geodesic") {
  ChartPtr src = cases::arclength_interval(-1.5, 1.5);
  SmoothMap m("vray", src, hyperbolic_plane(),
              {src->parse_member("0"), src->parse_member("exp(s)")});
  auto pts = sample_points(*src, 10, 23);
  Curve c = Curve::create(m, pts);
  CurveClassification rep = classify_curve(c, pts);
  CHECK(rep.verdict == CurveVerdict::Geodesic);
  CHECK(rep.max_chi1 <= 1e-9);
}

TEST_CASE("horocycle has curvature exactly one") {
  ChartPtr src = cases::arclength_interval(-2.0, 2.0, {{"c", 0.8}});
  SmoothMap m("horocycle", src, hyperbolic_plane(),
              {src->parse_member("c*s"), src->parse_member("c")});
  auto pts = sample_points(*src, 10, 29);
  Curve c = Curve::create(m, pts);
  CurveClassification rep = classify_curve(c, pts);
  CHECK(rep.verdict == CurveVerdict::NotHS);
  CHECK(rep.curvature_max[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.system_residual == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.frenet_residual <= 1e-8);
}

TEST_CASE("parametrization and dimension gates") {
  ChartPtr src = cases::arclength_interval(-2.0, 2.0);
  auto e2 = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2));
  SmoothMap fast("fast", src, ChartPtr(e2), {src->parse_member("2*s"), src->parse_member("0")});
  auto pts = sample_points(*src, 5, 31);
  CHECK_THROWS_AS(Curve::create(fast, pts), const NotArclength&);

  auto plane = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2, "p2"));
  auto e3 = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3));
  SmoothMap notacurve("notacurve", plane, ChartPtr(std::move(e3)),
                      {plane->parse_member("x1"), plane->parse_member("x2"),
                       plane->parse_member("0")});
  CHECK_THROWS_AS(verify_arclength(notacurve, sample_points(*plane, 3, 5)), const Error&);
}
