#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <vector>

#include "tensional/casebook.hpp"
#include "tensional/sasaki.hpp"

using namespace tensional;

// Two independent routes to the tension of a section of the pullback bundle:
// through the tangent-bundle metric on the total space, and through the
// split horizontal/vertical formula. They must agree on everything.

TEST_CASE("tau-section of the conformal identity: both routes and closed forms") {
  double p = 3.0, z = 2.0;
  SmoothMap I = cases::hyperbolic_identity(p);
  Point q{0.3, -0.7, z};

  std::vector<ExprAst> xi;
  xi.push_back(I.source().parse_member("0"));
  xi.push_back(I.source().parse_member("0"));
  xi.push_back(I.source().parse_member("(1-p)*z^(2*p-1)"));

  SectionTension a = section_tension_via_bundle(I, xi, q);
  SectionTension b = section_tension_via_formula(I, xi, q);
  for (int i = 0; i < 3; ++i) {
    CHECK(a.horizontal(i) == doctest::Approx(b.horizontal(i)).epsilon(1e-10).scale(1.0));
    CHECK(a.vertical(i) == doctest::Approx(b.vertical(i)).epsilon(1e-10).scale(1.0));
  }

  double lap = 2 * (p - 1) * (p * p - 4 * p + 2) * std::pow(z, 4 * p - 3);
  CHECK(a.vertical(2) == doctest::Approx(-lap).epsilon(1e-10));

  double pairing = -2 * (p - 1) * (p - 1) * std::pow(z, 6 * p - 5) * std::pow(z, -2.0) *
                   std::pow(z, p);
  CHECK(a.horizontal(2) == doctest::Approx(-pairing * std::pow(z, p)).epsilon(1e-10));
  CHECK(a.horizontal(0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("generic section over a curved target: routes agree at sampled points") {
  SmoothMap I = cases::hyperbolic_identity(3.0);
  std::vector<ExprAst> xi;
  xi.push_back(I.source().parse_member("x*y"));
  xi.push_back(I.source().parse_member("z"));
  xi.push_back(I.source().parse_member("x+z^2"));

  for (const Point& pt : sample_points(I.source(), 10, 3)) {
    SectionTension a = section_tension_via_bundle(I, xi, pt);
    SectionTension b = section_tension_via_formula(I, xi, pt);
    for (int i = 0; i < 3; ++i) {
      CHECK(a.horizontal(i) == doctest::Approx(b.horizontal(i)).epsilon(1e-6).scale(1.0));
      CHECK(a.vertical(i) == doctest::Approx(b.vertical(i)).epsilon(1e-6).scale(1.0));
    }
    CHECK(section_energy_density_via_bundle(I, xi, pt) ==
          doctest::Approx(section_energy_density_via_formula(I, xi, pt)).epsilon(1e-10));
  }
}

TEST_CASE("zero section: energy density m/2, tension vanishes for harmonic base map") {
  SmoothMap I = cases::hyperbolic_identity(1.0);
  Point q{0.3, -0.7, 2.0};
  std::vector<ExprAst> xi;
  for (int i = 0; i < 3; ++i) xi.push_back(I.source().parse_member("0"));

  CHECK(section_energy_density_via_bundle(I, xi, q) == doctest::Approx(1.5));
  SectionTension a = section_tension_via_bundle(I, xi, q);
  CHECK(a.vertical.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(a.horizontal.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("flat target: horizontal part vanishes and vertical is the plain Laplacian") {
  auto src = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2, "E2s"));
  src->set_sample_box(0, -1, 1);
  src->set_sample_box(1, -1, 1);
  auto tgt = std::make_shared<RiemannianChart>(RiemannianChart::euclidean(2, "E2t"));
  std::vector<ExprAst> comps;
  comps.push_back(src->parse_member("x1+x2"));
  comps.push_back(src->parse_member("x1*x2"));
  SmoothMap f("f", ChartPtr(src), ChartPtr(std::move(tgt)), std::move(comps));

  std::vector<ExprAst> xi;
  xi.push_back(src->parse_member("x1^3"));
  xi.push_back(src->parse_member("sin(x2)"));

  for (const Point& pt : sample_points(f.source(), 10, 8)) {
    SectionTension a = section_tension_via_bundle(f, xi, pt);
    SectionTension b = section_tension_via_formula(f, xi, pt);
    CHECK(a.horizontal.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a.vertical - b.vertical).cwiseAbs().maxCoeff() <= 1e-10);
    // vertical part is minus the positive-spectrum Laplacian of each component
    CHECK(a.vertical(0) ==
          doctest::Approx(6 * pt[0]).epsilon(1e-10).scale(1.0));
    CHECK(a.vertical(1) ==
          doctest::Approx(-std::sin(pt[1])).epsilon(1e-10).scale(1.0));
  }
}
