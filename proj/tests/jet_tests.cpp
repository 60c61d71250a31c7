#include "akmass/jet.hpp"

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"

using namespace akmass;

namespace {

// Brute-force polynomial oracle: coefficient maps keyed by exponent tuples.
using Poly = std::map<std::array<int, 4>, double>;

Poly poly_mul(const Poly& a, const Poly& b, int dim, int order) {
  Poly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::array<int, 4> e{};
      int deg = 0;
      for (int i = 0; i < dim; ++i) {
        e[i] = ea[i] + eb[i];
        deg += e[i];
      }
      if (deg > order) continue;
      r[e] += ca * cb;
    }
  return r;
}

// Taylor coefficients of a polynomial at a base point = coefficients of the
// shifted polynomial, expanded monomial by monomial.
Poly poly_shift(const Poly& p, const std::vector<double>& x0, int dim, int order) {
  Poly r;
  for (const auto& [e, c] : p) {
    // expand prod_i (x0_i + t_i)^{e_i}
    Poly term;
    term[{}] = c;
    for (int i = 0; i < dim; ++i) {
      Poly axis;
      for (int k = 0; k <= e[i]; ++k) {
        double binom = 1.0;
        for (int j = 0; j < k; ++j) binom = binom * (e[i] - j) / (j + 1);
        std::array<int, 4> mono{};
        mono[i] = k;
        axis[mono] += binom * std::pow(x0[i], e[i] - k);
      }
      term = poly_mul(term, axis, dim, order);
    }
    for (const auto& [em, cm] : term) r[em] += cm;
  }
  return r;
}

Jet poly_to_jet(const Poly& p, const std::vector<double>& x0, int dim, int order) {
  JetContext ctx(dim, order, x0);
  Jet acc = lift_constant(ctx, 0.0);
  for (const auto& [e, c] : p) {
    Jet term = lift_constant(ctx, c);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < e[i]; ++k) term = term * lift_coordinate(ctx, i);
    acc += term;
  }
  return acc;
}

Poly random_poly(std::mt19937& rng, int dim, int maxdeg) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_int_distribution<int> deg(0, maxdeg);
  Poly p;
  for (int t = 0; t < 8; ++t) {
    std::array<int, 4> e{};
    int budget = deg(rng);
    for (int i = 0; i < dim && budget > 0; ++i) {
      std::uniform_int_distribution<int> pick(0, budget);
      e[i] = pick(rng);
      budget -= e[i];
    }
    p[e] += coef(rng);
  }
  return p;
}

}  // namespace

TEST_CASE("lift_coordinate basics") {
  JetContext ctx(2, 2, {3.0, 4.0});
  Jet x = lift_coordinate(ctx, 0);
  CHECK(x.value() == 3.0);
  CHECK(x.partial(0) == 1.0);
  CHECK(x.partial(1) == 0.0);
  CHECK(x.deriv({0, 0}) == 0.0);
  CHECK(x.deriv({0, 1}) == 0.0);

  JetContext c4(4, 1, {0, 0, 0, 0});
  Jet w = lift_coordinate(c4, 3);
  CHECK(w.value() == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(w.partial(i) == (i == 3 ? 1.0 : 0.0));

  CHECK_THROWS_AS(lift_coordinate(ctx, 2), UsageError);
}

TEST_CASE("multi-index count matches enumeration oracle") {
  // dim 2, order 3: enumerate tuples with e0+e1 <= 3 by brute force.
  int count = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      if (a + b <= 3) ++count;
  CHECK(count == 10);
  JetContext ctx(2, 3, {1.0, 1.0});
  Jet y = lift_coordinate(ctx, 1);
  CHECK(y.size() == count);
  CHECK(y.value() == 1.0);
}

TEST_CASE("product and quotient basics") {
  JetContext ctx(2, 1, {2.0, 3.0});
  Jet x = lift_coordinate(ctx, 0), y = lift_coordinate(ctx, 1);
  Jet xy = x * y;
  CHECK(xy.value() == 6.0);
  CHECK(xy.partial(0) == 3.0);
  CHECK(xy.partial(1) == 2.0);

  Jet c4 = Jet::constant(2, 2, 4.0);
  Jet r = sqrt(c4);
  CHECK(r.value() == 2.0);
  for (int i = 1; i < r.size(); ++i) CHECK(r.coeff(i) == 0.0);

  CHECK_THROWS_AS(x / (y - 3.0), ArithmeticDomainError);
  CHECK_THROWS_AS(sqrt(x - 2.0), ArithmeticDomainError);
  CHECK_THROWS_AS(log(x - 5.0), ArithmeticDomainError);
}

TEST_CASE("1/(1+x^2) at 0.5 against central differences") {
  auto field = [](const JetContext& c) {
    Jet x = lift_coordinate(c, 0);
    return 1.0 / (1.0 + x * x);
  };
  std::vector<double> p{0.5};
  auto table = finite_difference_check(field, p, 3, 1e-3);
  CHECK(table.max_abs[1] < 1e-6);
  CHECK(table.max_abs[2] < 1e-6);
  CHECK(table.max_abs[3] < 1e-6);

  // Frozen closed form: f''' = 24x(1-x^2)/(1+x^2)^4, so f'''(0.5) = 9/1.25^4.
  Jet j = field(JetContext(1, 3, p));
  CHECK(j.deriv({0, 0, 0}) == doctest::Approx(9.0 / std::pow(1.25, 4)).epsilon(1e-12));
}

TEST_CASE("finite differences on polynomials are exact to rounding") {
  auto field = [](const JetContext& c) {
    Jet x = lift_coordinate(c, 0), y = lift_coordinate(c, 1);
    return x * x * y - 3.0 * y * y + x;
  };
  std::vector<double> p{1.25, -0.5};
  auto table = finite_difference_check(field, p, 3, 1e-2);
  for (int o = 0; o <= 3; ++o) CHECK(table.max_abs[o] < 1e-7);
}

TEST_CASE("exp(x+y) finite-difference residuals at origin") {
  auto field = [](const JetContext& c) {
    return exp(lift_coordinate(c, 0) + lift_coordinate(c, 1));
  };
  std::vector<double> p{0.0, 0.0};
  auto table = finite_difference_check(field, p, 2, 1e-3);
  CHECK(table.max_abs[1] < 1e-6);
  CHECK(table.max_abs[2] < 1e-6);
}

TEST_CASE("jet arithmetic reproduces exact polynomial coefficients") {
  std::mt19937 rng(12345);
  for (int dim = 1; dim <= 4; ++dim) {
    for (int rep = 0; rep < 20; ++rep) {
      int order = 3;
      Poly a = random_poly(rng, dim, order);
      Poly b = random_poly(rng, dim, order);
      std::uniform_real_distribution<double> pt(-1.5, 1.5);
      std::vector<double> x0(dim);
      for (double& v : x0) v = pt(rng);

      Jet ja = poly_to_jet(a, x0, dim, order);
      Jet jb = poly_to_jet(b, x0, dim, order);
      Jet jprod = ja * jb;

      // Full product first (degree up to 6); truncation happens in the
      // shifted variables, matching what the jet ring does.
      Poly prod = poly_mul(a, b, dim, 6);
      Poly shifted = poly_shift(prod, x0, dim, order);
      const JetSpace& sp = JetSpace::get(dim, order);
      for (int idx = 0; idx < sp.size(); ++idx) {
        std::array<int, 4> key{};
        for (int v = 0; v < dim; ++v) key[v] = sp.exponent(idx)[v];
        double expect = shifted.count(key) ? shifted.at(key) : 0.0;
        CHECK(jprod.coeff(idx) == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("transcendental chain rule against finite differences") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> pt(0.2, 1.4);
  auto field = [](const JetContext& c) {
    Jet x = lift_coordinate(c, 0), y = lift_coordinate(c, 1);
    Jet g = x * y + 0.5 * sin(x) + exp(0.3 * y);
    return sqrt(g * g + 1.0) + log(g * g + 2.0) * cos(x * 0.7) + atan(y * x);
  };
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> p{pt(rng), pt(rng)};
    auto table = finite_difference_check(field, p, 2, 0.0);
    CHECK(table.max_abs[1] < 1e-8);
    CHECK(table.max_abs[2] < 5e-7);
  }
}

TEST_CASE("atan2 covers all quadrants and matches std") {
  for (double xv : {1.2, -1.2}) {
    for (double yv : {0.8, -0.8, 2.5, -2.5}) {
      JetContext ctx(2, 2, {xv, yv});
      Jet x = lift_coordinate(ctx, 0), y = lift_coordinate(ctx, 1);
      Jet t = atan2(y, x);
      CHECK(t.value() == doctest::Approx(std::atan2(yv, xv)).epsilon(1e-14));
      // d/dx atan2 = -y/(x^2+y^2), d/dy = x/(x^2+y^2)
      double r2 = xv * xv + yv * yv;
      CHECK(t.partial(0) == doctest::Approx(-yv / r2).epsilon(1e-12));
      CHECK(t.partial(1) == doctest::Approx(xv / r2).epsilon(1e-12));
    }
  }
  JetContext ctx(2, 1, {0.0, 0.0});
  CHECK_THROWS_AS(atan2(lift_coordinate(ctx, 1), lift_coordinate(ctx, 0)),
                  ArithmeticDomainError);
}

TEST_CASE("jet_arith dispatcher") {
  JetContext ctx(1, 2, {0.7});
  Jet x = lift_coordinate(ctx, 0);
  CHECK(jet_arith(x, x, JetOp::mul).value() == doctest::Approx(0.49));
  CHECK(jet_arith(x, Jet::constant(1, 2, 2.0), JetOp::pow).value() == doctest::Approx(0.49));
  CHECK(jet_arith(x, x, JetOp::sub).value() == 0.0);
}

TEST_CASE("mixed-order arithmetic truncates to the lower order") {
  JetContext c3(2, 3, {1.0, 2.0});
  JetContext c1(2, 1, {1.0, 2.0});
  Jet a = lift_coordinate(c3, 0) * lift_coordinate(c3, 1);
  Jet b = lift_coordinate(c1, 0);
  Jet s = a * b;
  CHECK(s.order() == 1);
  CHECK(s.value() == 2.0);
  CHECK(s.partial(0) == doctest::Approx(4.0));
}
