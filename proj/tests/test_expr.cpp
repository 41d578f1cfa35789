#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tensional/expr.hpp"

using Point = std::vector<double>;

using namespace tensional;

TEST_CASE("parse and evaluate basic arithmetic") {
  ExprAst a = parse("x1^2", {"x1"});
  Jet j = eval_jet(a, Point{3.0}, 2);
  CHECK(j.value() == doctest::Approx(9.0));
  CHECK(j.partial({1}) == doctest::Approx(6.0));
  CHECK(j.partial({2}) == doctest::Approx(2.0));

  ExprAst b = parse("x1*x2", {"x1", "x2"});
  Jet k = eval_jet(b, Point{2.0, 5.0}, 2);
  CHECK(k.value() == doctest::Approx(10.0));
  CHECK(k.partial({1, 1}) == doctest::Approx(1.0));

  ExprAst c = parse("2*x1 - 5 + x1/4", {"x1"});
  CHECK(eval_jet(c, Point{4.0}, 0).value() == doctest::Approx(4.0));
}

TEST_CASE("parameters are fixed numbers baked in at parse time") {
  ExprAst c = parse("z^p", {"z"}, {{"p", 3.0}});
  Jet m = eval_jet(c, Point{2.0}, 2);
  CHECK(m.value() == doctest::Approx(8.0));
  CHECK(m.partial({1}) == doctest::Approx(12.0));
  CHECK(m.partial({2}) == doctest::Approx(12.0));

  // irrational exponent
  double p = 2.0 + std::sqrt(2.0);
  ExprAst d = parse("z^(-2*p)", {"z"}, {{"p", p}});
  CHECK(eval_jet(d, Point{1.7}, 0).value() == doctest::Approx(std::pow(1.7, -2 * p)));
}

TEST_CASE("functions: sin cos exp log sqrt and variadic norm") {
  ExprAst a = parse("sin(x1)*cos(x2) + exp(x1/3) - log(x2) + sqrt(x1+2)", {"x1", "x2"});
  double x = 0.7, y = 1.9;
  double want = std::sin(x) * std::cos(y) + std::exp(x / 3) - std::log(y) + std::sqrt(x + 2);
  CHECK(eval_jet(a, Point{x, y}, 0).value() == doctest::Approx(want).epsilon(1e-14));

  ExprAst n = parse("norm(x1,x2,x3)", {"x1", "x2", "x3"});
  Jet nj = eval_jet(n, Point{1.0, 2.0, 2.0}, 1);
  CHECK(nj.value() == doctest::Approx(3.0));
  CHECK(nj.partial({1, 0, 0}) == doctest::Approx(1.0 / 3.0));

  // the inversion-type component x1 |x|^{-l}
  ExprAst k = parse("x1*norm(x1,x2,x3)^(-l)", {"x1", "x2", "x3"}, {{"l", 1.0}});
  Jet kj = eval_jet(k, Point{1.0, 0.0, 0.0}, 2);
  CHECK(kj.value() == doctest::Approx(1.0));
  CHECK(kj.partial({1, 0, 0}) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("print produces a form that parses back to the same tree") {
  const char* samples[] = {
      "x1*x2*x3 + 2*x1 - 5",
      "sin(x1)^2 + cos(x2)^2",
      "x1/(1+x2^2) - sqrt(x3+4)",
      "norm(x1,x2,x3)^(-3)*x2",
      "-x1 + (-(x2*x3))^3",
  };
  for (const char* s : samples) {
    ExprAst a = parse(s, {"x1", "x2", "x3"});
    ExprAst b = parse(print(a), {"x1", "x2", "x3"});
    CHECK(a == b);
  }
}

TEST_CASE("parse errors carry a byte offset and a kind") {
  try {
    parse("x1 +", {"x1", "x2"});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
    CHECK(e.kind == ParseErrorKind::Syntax);
  }
  try {
    parse("x1 + bogus", {"x1"});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseErrorKind::UnknownVariable);
  }
  try {
    parse("frob(x1)", {"x1"});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseErrorKind::UnknownFunction);
  }
}

TEST_CASE("multilinear polynomial detection") {
  ExprAst a = parse("x1*x2*x3 + 2*x1 - 5", {"x1", "x2", "x3"});
  MultilinearResult r = is_multilinear_polynomial(a, 3);
  CHECK(r.verdict == PolyVerdict::Multilinear);
  CHECK(r.coefficients.at({0, 1, 2}) == doctest::Approx(1.0));
  CHECK(r.coefficients.at({0}) == doctest::Approx(2.0));
  CHECK(r.coefficients.at({}) == doctest::Approx(-5.0));

  ExprAst sq = parse("x1^2", {"x1", "x2"});
  CHECK(is_multilinear_polynomial(sq, 2).verdict == PolyVerdict::NotMultilinear);

  ExprAst tr = parse("sin(x1)", {"x1"});
  CHECK(is_multilinear_polynomial(tr, 1).verdict == PolyVerdict::NotPolynomial);

  // (x1+x2)^2 - x1^2 - x2^2 expands to 2 x1 x2, multilinear after cancellation
  ExprAst c = parse("(x1+x2)^2 - x1^2 - x2^2", {"x1", "x2"});
  MultilinearResult rc = is_multilinear_polynomial(c, 2);
  CHECK(rc.verdict == PolyVerdict::Multilinear);
  CHECK(rc.coefficients.at({0, 1}) == doctest::Approx(2.0));
}

TEST_CASE("derivatives of a composition match the chain rule") {
  // F(u) = u^2 with u = x1^2 gives x1^4
  Jet F = eval_jet(parse("u^2", {"u"}), Point{4.0}, 3);
  Jet u = eval_jet(parse("x1^2", {"x1"}), Point{2.0}, 3);
  Jet comp = Jet::compose(F, {u});
  CHECK(comp.value() == doctest::Approx(16.0));
  CHECK(comp.partial({1}) == doctest::Approx(32.0));  // 4 x^3
  CHECK(comp.partial({3}) == doctest::Approx(48.0));  // 24 x
}
