#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tensional/expr.hpp"

using Point = std::vector<double>;

using namespace tensional;

namespace {

const std::vector<std::string> kVars = {"x1", "x2", "x3"};

// random smooth expression, kept bounded near the sample point: arguments of
// exp are scaled down and every denominator is strictly positive
std::string random_expression(std::mt19937_64& gen, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  std::uniform_int_distribution<int> var(1, 3);
  std::uniform_int_distribution<int> coef(1, 3);
  switch (pick(gen)) {
    case 0: return "x" + std::to_string(var(gen));
    case 1: return std::to_string(coef(gen));
    case 2: return "(" + random_expression(gen, depth - 1) + "+" + random_expression(gen, depth - 1) + ")";
    case 3: return "(" + random_expression(gen, depth - 1) + "-" + random_expression(gen, depth - 1) + ")";
    case 4: return "(" + random_expression(gen, depth - 1) + ")*(" + random_expression(gen, depth - 1) + ")";
    case 5: return "sin(" + random_expression(gen, depth - 1) + ")";
    case 6: return "cos(" + random_expression(gen, depth - 1) + ")";
    default: return "exp((" + random_expression(gen, depth - 1) + ")/8)";
  }
}

double jet_partial(const ExprAst& a, const Point& p, const MultiIndex& idx, int order) {
  return eval_jet(a, p, order).partial(idx);
}

}  // namespace

TEST_CASE("jet partials of orders 1 through 4 agree with central differences") {
  // Each rung of the ladder is checked separately: the order-k partial is
  // compared against a first central difference of the order-(k-1) partial,
  // so the finite-difference error stays O(h^2) at every order.
  std::mt19937_64 gen(20240817);
  const double h = 1e-4;
  const Point base{0.3, -0.4, 0.7};
  std::vector<MultiIndex> indices;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k)
        for (int l = k; l < 3; ++l) {
          MultiIndex idx(3, 0);
          idx[i]++; idx[j]++; idx[k]++; idx[l]++;
          indices.push_back(idx);
        }

  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::string text = random_expression(gen, 3);
    ExprAst a = parse(text, kVars);
    for (const MultiIndex& idx : indices) {
      // walk down one derivative in the first active direction
      int dir = 0;
      while (idx[dir] == 0) ++dir;
      MultiIndex lower = idx;
      lower[dir] -= 1;
      int low_order = lower[0] + lower[1] + lower[2];

      Point up = base, dn = base;
      up[dir] += h;
      dn[dir] -= h;
      double fd = (jet_partial(a, up, lower, low_order) - jet_partial(a, dn, lower, low_order)) /
                  (2 * h);
      double exact = jet_partial(a, base, idx, low_order + 1);
      double scale = std::max({1.0, std::abs(fd), std::abs(exact)});
      INFO("expr = " << text << ", index = (" << idx[0] << "," << idx[1] << "," << idx[2] << ")");
      CHECK(std::abs(fd - exact) <= 1e-4 * scale);
      ++checked;
    }
  }
  CHECK(checked == 50 * static_cast<int>(indices.size()));
}

TEST_CASE("polynomial jets are exact") {
  // random polynomials with per-variable degree <= 2; the reference partial
  // derivative is computed directly from the monomial coefficients
  std::mt19937_64 gen(97);
  std::uniform_int_distribution<int> coef(-3, 3);
  const Point p{1.3, -0.8, 0.6};

  for (int trial = 0; trial < 20; ++trial) {
    // coefficients c[e1][e2][e3] of x1^e1 x2^e2 x3^e3
    double c[3][3][3];
    std::string text;
    for (int e1 = 0; e1 < 3; ++e1)
      for (int e2 = 0; e2 < 3; ++e2)
        for (int e3 = 0; e3 < 3; ++e3) {
          c[e1][e2][e3] = coef(gen);
          if (c[e1][e2][e3] == 0) continue;
          text += (text.empty() ? "" : " + ") + std::to_string(static_cast<int>(c[e1][e2][e3]));
          if (e1) text += "*x1^" + std::to_string(e1);
          if (e2) text += "*x2^" + std::to_string(e2);
          if (e3) text += "*x3^" + std::to_string(e3);
        }
    if (text.empty()) continue;
    ExprAst a = parse(text, kVars);
    Jet j = eval_jet(a, p, 4);

    for (int d1 = 0; d1 <= 2; ++d1)
      for (int d2 = 0; d2 <= 2; ++d2)
        for (int d3 = 0; d3 <= 2; ++d3) {
          if (d1 + d2 + d3 > 4) continue;
          double want = 0.0;
          for (int e1 = d1; e1 < 3; ++e1)
            for (int e2 = d2; e2 < 3; ++e2)
              for (int e3 = d3; e3 < 3; ++e3) {
                double term = c[e1][e2][e3];
                for (int k = 0; k < d1; ++k) term *= e1 - k;
                for (int k = 0; k < d2; ++k) term *= e2 - k;
                for (int k = 0; k < d3; ++k) term *= e3 - k;
                want += term * std::pow(p[0], e1 - d1) * std::pow(p[1], e2 - d2) *
                        std::pow(p[2], e3 - d3);
              }
          double got = j.partial(MultiIndex{static_cast<std::uint8_t>(d1), static_cast<std::uint8_t>(d2),
                                            static_cast<std::uint8_t>(d3)});
          double scale = std::max(1.0, std::abs(want));
          INFO("partial (" << d1 << "," << d2 << "," << d3 << ") of " << text);
          CHECK(std::abs(got - want) <= 1e-12 * scale);
        }
  }
}

TEST_CASE("jets past the truncation order are rejected") {
  ExprAst a = parse("x1^5", {"x1"});
  Jet j = eval_jet(a, Point{1.0}, 2);
  CHECK(j.order() == 2);
  CHECK_THROWS_AS(j.partial({3}), const IndexTooDeep&);
  CHECK(j.truncated(1).order() == 1);
}

TEST_CASE("square roots of jets track the analytic derivative") {
  // sqrt(1+x^2) at x=0.75: value 1.25, first derivative x/sqrt(1+x^2) = 0.6
  ExprAst a = parse("sqrt(1+x1^2)", {"x1"});
  Jet j = eval_jet(a, Point{0.75}, 3);
  CHECK(j.value() == doctest::Approx(1.25));
  CHECK(j.partial({1}) == doctest::Approx(0.6));
  // second derivative: 1/(1+x^2)^{3/2}
  CHECK(j.partial({2}) == doctest::Approx(std::pow(1.0 + 0.5625, -1.5)));
}
