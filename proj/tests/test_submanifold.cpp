#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "tensional/casebook.hpp"
#include "tensional/submanifold.hpp"

using namespace tensional;

TEST_CASE("round spheres, all radii: curvature data and residual lines") {
  for (double r : {0.5, 1.0, 2.0}) {
    SmoothMap map = cases::sphere_immersion(r, 2);
    auto pts = sample_points(map.source(), 6, 11);
    Immersion im = Immersion::create(map, pts, 1e-9);
    CHECK(im.isometry().max_residual < 1e-12);

    for (const Point& p : pts) {
      SubmanifoldPoint sp(map, p);
      INFO("r = " << r);

      // the tension field of the immersion is m H
      VectorXd tau = tension_field(map, p);
      CHECK((tau - sp.tension()).norm() <= 1e-10);
      CHECK(sp.target_norm(sp.mean_curvature()) == doctest::Approx(1.0 / r));

      HypersurfaceReport hr = hypersurface_residuals(sp);
      CHECK(hr.alpha == doctest::Approx(1.0 / r).epsilon(1e-9));
      CHECK(hr.shape_norm2 == doctest::Approx(2.0 / (r * r)).epsilon(1e-9));
      CHECK(hr.scalar == doctest::Approx(2.0 / (r * r * r)).epsilon(1e-7));
      CHECK(hr.scalar_from_normal_line == doctest::Approx(2.0 / (r * r * r)).epsilon(1e-7));
      CHECK(hr.tangential_norm <= 1e-9);

      SubmanifoldResiduals rr = hs_submanifold_residuals(sp);
      CHECK(rr.normal_norm == doctest::Approx(2.0 / (r * r * r)).epsilon(1e-8));
      CHECK(rr.tangential_norm <= 1e-9);

      BitensionSplit bs = bitension_split(sp);
      CHECK(bs.normal_residual <= 1e-9);
      CHECK(bs.tangential_residual <= 1e-9);
      CHECK(weitzenbock_residual(sp) <= 1e-9);
    }

    CHECK(pseudo_umbilical_check(im, pts).verdict == UmbilicalVerdict::PseudoUmbilical);
    SubmanifoldClassification cls = classify_submanifold(im, pts);
    CHECK(cls.verdict == SubmanifoldVerdict::NotHS);
    CHECK_FALSE(cls.hm);
    CHECK(cls.normal_residual == doctest::Approx(2.0 / (r * r * r)).epsilon(1e-8));
    CHECK(cls.split_residual < 1e-9);
  }
}

TEST_CASE("sphere normals point inward so the support pairing is positive") {
  SmoothMap map = cases::sphere_immersion(1.0, 2);
  for (const Point& p : sample_points(map.source(), 4, 11)) {
    SubmanifoldPoint sp(map, p);
    HypersurfaceData hd = hypersurface_data(sp);
    Point image = map.value(p);
    VectorXd pos = Eigen::Map<const VectorXd>(image.data(), static_cast<int>(image.size()));
    CHECK((hd.nu + pos).norm() <= 1e-10);
  }
  // the same parity choice holds one dimension up
  SmoothMap map3 = cases::sphere_immersion(1.0, 3);
  auto pts3 = sample_points(map3.source(), 4, 13);
  for (const Point& p : pts3) {
    SubmanifoldPoint sp(map3, p);
    HypersurfaceReport hr = hypersurface_residuals(sp);
    CHECK(hr.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(hr.shape_norm2 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(hr.scalar == doctest::Approx(3.0).epsilon(1e-7));
  }
}

TEST_CASE("plane: minimal, HS, with verdict Minimal from the umbilical check too") {
  SmoothMap map = cases::plane_immersion();
  auto pts = sample_points(map.source(), 5, 3);
  Immersion im = Immersion::create(map, pts);
  SubmanifoldClassification cls = classify_submanifold(im, pts);
  CHECK(cls.verdict == SubmanifoldVerdict::Minimal);
  CHECK(cls.hm);
  SubmanifoldPoint sp(map, pts[0]);
  HypersurfaceData hd = hypersurface_data(sp);
  CHECK(hd.nu(2) == doctest::Approx(1.0));
  CHECK(hd.alpha == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pseudo_umbilical_check(im, pts).verdict == UmbilicalVerdict::Minimal);
}

TEST_CASE("helicoid: classical minimal surface") {
  SmoothMap map = cases::helicoid_immersion();
  auto pts = sample_points(map.source(), 6, 23);
  Immersion im = Immersion::create(map, pts);
  SubmanifoldClassification cls = classify_submanifold(im, pts);
  CHECK(cls.verdict == SubmanifoldVerdict::Minimal);
  CHECK(cls.hm);
  CHECK(cls.split_residual < 1e-8);
}

TEST_CASE("plane circles as one-dimensional submanifolds") {
  for (double r : {0.7, 1.3}) {
    SmoothMap map = cases::circle_curve(r);
    auto pts = sample_points(map.source(), 5, 7);
    Immersion im = Immersion::create(map, pts);
    for (const Point& p : pts) {
      SubmanifoldPoint sp(map, p);
      CHECK(sp.target_norm(sp.second_fundamental_frame(0, 0)) ==
            doctest::Approx(1.0 / r).epsilon(1e-10));
      HypersurfaceReport hr = hypersurface_residuals(sp);
      CHECK(hr.alpha == doctest::Approx(1.0 / r).epsilon(1e-9));
      CHECK(hr.scalar == doctest::Approx(1.0 / (r * r * r)).epsilon(1e-9));
      BitensionSplit bs = bitension_split(sp);
      CHECK(std::max(bs.normal_residual, bs.tangential_residual) <= 1e-9);
    }
    CHECK(classify_submanifold(im, pts).verdict == SubmanifoldVerdict::NotHS);
  }
}

TEST_CASE("horosphere in hyperbolic 3-space: flat, |A|^2 = 2, scalar 2") {
  auto hyp3 = std::make_shared<RiemannianChart>("hyp3", std::vector<std::string>{"x", "y", "z"});
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) hyp3->set_metric_entry(i, j, i == j ? "z^(-2)" : "0");
  hyp3->set_domain(2, 0.05, 100.0);
  double c = 0.8;
  auto flat2 = std::make_shared<RiemannianChart>("horoplane", std::vector<std::string>{"x", "y"},
                                                 Params{{"c", c}});
  flat2->set_metric_entry(0, 0, "c^(-2)");
  flat2->set_metric_entry(0, 1, "0");
  flat2->set_metric_entry(1, 1, "c^(-2)");
  SmoothMap map("horosphere", flat2, ChartPtr(std::move(hyp3)),
                {flat2->parse_member("x"), flat2->parse_member("y"), flat2->parse_member("c")});
  auto pts = sample_points(*flat2, 6, 5);
  Immersion im = Immersion::create(map, pts);
  for (const Point& p : pts) {
    SubmanifoldPoint sp(map, p);
    HypersurfaceReport hr = hypersurface_residuals(sp);
    CHECK(hr.alpha == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hr.shape_norm2 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(hr.scalar == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(hr.scalar_from_normal_line == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(hr.tangential_norm <= 1e-9);
    BitensionSplit bs = bitension_split(sp);
    CHECK(bs.normal_residual <= 1e-9);
    CHECK(bs.tangential_residual <= 1e-9);
    CHECK(weitzenbock_residual(sp) <= 1e-9);
  }
  CHECK(pseudo_umbilical_check(im, pts).verdict == UmbilicalVerdict::PseudoUmbilical);
  CHECK(classify_submanifold(im, pts).verdict == SubmanifoldVerdict::NotHS);
}

TEST_CASE("graph in a warped target: nontrivial tangential line, both paths agree") {
  auto tgt = std::make_shared<RiemannianChart>("warped3", std::vector<std::string>{"x", "y", "z"});
  tgt->set_metric_entry(0, 0, "1");
  tgt->set_metric_entry(0, 1, "0");
  tgt->set_metric_entry(0, 2, "0");
  tgt->set_metric_entry(1, 1, "1");
  tgt->set_metric_entry(1, 2, "0");
  tgt->set_metric_entry(2, 2, "1+x^2");
  auto src = std::make_shared<RiemannianChart>("graph_src", std::vector<std::string>{"u", "v"});
  src->set_metric_entry(0, 0, "1+(1+u^2)*v^2");
  src->set_metric_entry(0, 1, "(1+u^2)*u*v");
  src->set_metric_entry(1, 1, "1+(1+u^2)*u^2");
  src->set_domain(0, -0.7, 0.7);
  src->set_domain(1, -0.7, 0.7);
  src->set_sample_box(0, -0.6, 0.6);
  src->set_sample_box(1, -0.6, 0.6);
  SmoothMap map("graph", src, ChartPtr(std::move(tgt)),
                {src->parse_member("u"), src->parse_member("v"), src->parse_member("u*v")});
  auto pts = sample_points(*src, 8, 19);
  Immersion im = Immersion::create(map, pts);
  CHECK(im.isometry().max_residual < 1e-12);
  double max_tang = 0.0;
  for (const Point& p : pts) {
    SubmanifoldPoint sp(map, p);
    BitensionSplit bs = bitension_split(sp);
    CHECK(bs.normal_residual <= 1e-8);
    CHECK(bs.tangential_residual <= 1e-8);
    SubmanifoldResiduals rr = hs_submanifold_residuals(sp);
    HypersurfaceReport hr = hypersurface_residuals(sp);
    CHECK((rr.tangential_line - hr.tangential).norm() <= 1e-9);
    CHECK(hr.scalar == doctest::Approx(hr.scalar_from_normal_line).epsilon(1e-8));
    CHECK(weitzenbock_residual(sp) <= 1e-8);
    max_tang = std::max(max_tang, hr.tangential_norm);
  }
  CHECK(max_tang > 1e-3);
}

TEST_CASE("immersions into constant-curvature targets have zero hm pairing") {
  // flat targets
  for (SmoothMap map : {cases::sphere_immersion(1.0, 2), cases::plane_immersion(),
                        cases::helicoid_immersion(), cases::circle_curve(1.3)}) {
    auto pts = sample_points(map.source(), 5, 41);
    Immersion im = Immersion::create(map, pts);
    SubmanifoldClassification cls = classify_submanifold(im, pts);
    INFO(map.name());
    CHECK(cls.hm_residual <= 1e-9);
  }
  // hyperbolic target
  {
    auto hyp3 = std::make_shared<RiemannianChart>("hyp3", std::vector<std::string>{"x", "y", "z"});
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) hyp3->set_metric_entry(i, j, i == j ? "z^(-2)" : "0");
    hyp3->set_domain(2, 0.05, 100.0);
    auto flat2 = std::make_shared<RiemannianChart>("horoplane", std::vector<std::string>{"x", "y"},
                                                   Params{{"c", 0.8}});
    flat2->set_metric_entry(0, 0, "c^(-2)");
    flat2->set_metric_entry(0, 1, "0");
    flat2->set_metric_entry(1, 1, "c^(-2)");
    SmoothMap map("horosphere", flat2, ChartPtr(std::move(hyp3)),
                  {flat2->parse_member("x"), flat2->parse_member("y"), flat2->parse_member("c")});
    auto pts = sample_points(*flat2, 5, 43);
    Immersion im = Immersion::create(map, pts);
    CHECK(classify_submanifold(im, pts).hm_residual <= 1e-9);
  }
}

TEST_CASE("degenerate and invalid immersions are rejected with precise errors") {
  auto line = std::make_shared<RiemannianChart>("interval", std::vector<std::string>{"s"});
  line->set_metric_entry(0, 0, "1");
  line->set_domain(0, -2.0, 2.0);
  auto e3 = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(3));
  auto e2 = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2));

  SmoothMap curve3("diag_line", line, ChartPtr(e3),
                   {line->parse_member("s*0.577350269189626"),
                    line->parse_member("s*0.577350269189626"),
                    line->parse_member("s*0.577350269189626")});
  Point p{0.3};
  SubmanifoldPoint sp(curve3, p);
  CHECK_THROWS_AS(hypersurface_data(sp), const NotHypersurface&);

  // codimension-two normal frame is still available and orthonormal
  std::vector<VectorXd> nf = normal_frame(sp);
  REQUIRE(nf.size() == 2);
  const MatrixXd& h = sp.target_metric_values();
  CHECK(nf[0].dot(h * nf[0]) == doctest::Approx(1.0));
  CHECK(nf[1].dot(h * nf[1]) == doctest::Approx(1.0));
  CHECK(nf[0].dot(h * nf[1]) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(nf[0].dot(h * sp.tangent_values().col(0)) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(sp.shape_operator(sp.tangent_values().col(0)), const NotNormal&);

  SmoothMap stretch("stretch", line, ChartPtr(e2),
                    {line->parse_member("2*s"), line->parse_member("0")});
  CHECK_THROWS_AS(Immersion::create(stretch, {p}), const NotIsometric&);

  SmoothMap pinch("pinch", line, ChartPtr(std::move(e2)),
                  {line->parse_member("s^2"), line->parse_member("0")});
  CHECK_THROWS_AS(verify_isometric(pinch, {Point{0.0}}), const RankDeficient&);
}
