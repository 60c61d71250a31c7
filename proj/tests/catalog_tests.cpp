#include "akmass/catalog.hpp"

#include <cmath>
#include <random>

#include "akmass/almost_kahler.hpp"
#include "doctest.h"

using namespace akmass;

TEST_CASE("Eguchi-Hanson profile satisfies the Monge-Ampere equation") {
  // Ricci-flatness of the radial profile is det h = K1^{m-1}(K1 + rho K2) = 1.
  double a = 1.3;
  double a4 = a * a * a * a;
  for (double rho : {0.2, 1.0, 3.7, 25.0}) {
    double u = std::sqrt(rho * rho + a4);
    double k1 = u / rho;
    double k2 = -a4 / (u * rho * rho);
    CHECK(k1 * (k1 + rho * k2) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("Eguchi-Hanson is Ricci-flat at random points") {
  CatalogEntry e = make_entry("eguchi_hanson", {{"a", 1.0}});
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 100; ++rep) {
    Vec p = e.sample_point(rng);
    CurvaturePacket pk = curvature_packet(e.chart, p);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(pk.ricci(i, j)));
    CHECK(worst < 1e-8);
    CHECK(std::abs(pk.scalar) < 1e-8);
  }
}

TEST_CASE("Eguchi-Hanson has W- != 0 and W+ = 0 in the J-orientation") {
  CatalogEntry e = make_entry("eguchi_hanson", {});
  std::mt19937_64 rng(5);
  Vec p = e.sample_point(rng);
  CurvaturePacket pk = curvature_packet(e.chart, p);
  double wp = 0.0, wm = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      wp = std::max(wp, std::abs(pk.w_plus[a][b]));
      wm = std::max(wm, std::abs(pk.w_minus[a][b]));
    }
  CHECK(wm > 1e-4);
  CHECK(wp < 1e-9);
}

TEST_CASE("Eguchi-Hanson metric jets agree with finite differences") {
  CatalogEntry e = make_entry("eguchi_hanson", {{"a", 1.0}});
  AlmostHermitianChart chart = *e.ak;
  Vec p{3.0, 0.0, 0.0, 0.0};  // r = 3a on the axis
  // radial-radial component as a scalar field
  JetField grr = [chart](const JetContext& ctx) {
    TensorJ g(4, 2);
    chart.base.components(ctx, g);
    Jet r2 = lift_constant(ctx, 0.0);
    std::vector<Jet> x(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = lift_coordinate(ctx, i);
      r2 += x[i] * x[i];
    }
    Jet s = lift_constant(ctx, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += g(i, j) * x[i] * x[j];
    return s / r2;
  };
  auto table = finite_difference_check(grr, p, 2, 1e-4);
  CHECK(table.max_abs[1] < 1e-5);
  CHECK(table.max_abs[2] < 1e-5);
  // third order needs the tuned step (the 1e-4 stencil is roundoff-bound)
  auto table3 = finite_difference_check(grr, p, 3, 0.0);
  CHECK(table3.max_abs[3] < 1e-5);
}

TEST_CASE("Burns metric is scalar-flat Kahler") {
  CatalogEntry e = make_entry("burns", {{"c", 1.0}});
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    Vec p = e.sample_point(rng);
    CurvaturePacket pk = curvature_packet(e.chart, p);
    CHECK(std::abs(pk.scalar) < 1e-8);
    NablaStructure ns = nabla_structure(*e.ak, p);
    double worst = 0.0;
    for (std::size_t i = 0; i < ns.nabla_j.size(); ++i)
      worst = std::max(worst, std::abs(ns.nabla_j[i]));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("Burns is not Ricci-flat (scalar-flat only)") {
  CatalogEntry e = make_entry("burns", {{"c", 1.0}});
  CurvaturePacket pk = curvature_packet(e.chart, {1.0, 0.4, -0.2, 0.8});
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(pk.ricci(i, j)));
  CHECK(worst > 1e-4);
}

TEST_CASE("Fubini-Study has constant scalar curvature and is Einstein") {
  for (int m : {1, 2}) {
    CatalogEntry e = make_entry("fubini_study", {{"m", double(m)}});
    std::mt19937_64 rng(23 + m);
    Vec p0 = e.sample_point(rng);
    double s0 = curvature_packet(e.chart, p0).scalar;
    CHECK(s0 > 0.0);
    for (int rep = 0; rep < 100; ++rep) {
      Vec p = e.sample_point(rng);
      CurvaturePacket pk = curvature_packet(e.chart, p);
      CHECK(pk.scalar == doctest::Approx(s0).epsilon(1e-9));
      double worst = 0.0;
      for (int i = 0; i < e.n; ++i)
        for (int j = 0; j < e.n; ++j)
          worst = std::max(worst,
                           std::abs(pk.ricci(i, j) - pk.scalar / e.n * pk.g(i, j)));
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("Fubini-Study omega at the origin is the standard form") {
  CatalogEntry e = make_entry("fubini_study", {{"m", 2.0}});
  TensorD om = fundamental_form(*e.ak, {0.0, 0.0, 0.0, 0.0});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double want = 0.0;
      if (i == 0 && j == 1) want = 1.0;
      if (i == 1 && j == 0) want = -1.0;
      if (i == 2 && j == 3) want = 1.0;
      if (i == 3 && j == 2) want = -1.0;
      CHECK(om(i, j) == doctest::Approx(want).epsilon(1e-14));
    }
}

TEST_CASE("polar compatible structure: identity case") {
  JetContext ctx(4, 2, {0.3, -0.4, 1.0, 0.2});
  TensorJ h(4, 2, lift_constant(ctx, 0.0));
  for (int i = 0; i < 4; ++i) h(i, i) = lift_constant(ctx, 1.0);
  TensorJ g(4, 2), j(4, 2);
  polar_compatible_structure(h, g, j);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CHECK(g(a, b).value() == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
      double want = 0.0;
      if (a == 1 && b == 0) want = 1.0;
      if (a == 0 && b == 1) want = -1.0;
      if (a == 3 && b == 2) want = 1.0;
      if (a == 2 && b == 3) want = -1.0;
      CHECK(j(a, b).value() == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("random compatible structures satisfy the defining invariants") {
  std::mt19937_64 rng(999);
  for (std::uint64_t seed : {1ull, 7ull, 42ull}) {
    CatalogEntry e = make_entry("random_ak", {{"seed", double(seed)}});
    for (int rep = 0; rep < 30; ++rep) {
      Vec p = e.sample_point(rng);
      StructureResiduals res = structure_residuals(*e.ak, p);
      CHECK(res.j_squared < 1e-10);
      CHECK(res.compatibility < 1e-10);
      CHECK(res.omega_antisymmetry < 1e-10);
      CHECK(res.d_omega < 1e-9);
      // omega should be exactly the standard constant form
      TensorD om = fundamental_form(*e.ak, p);
      for (int a = 0; a < 2; ++a) {
        CHECK(om(2 * a, 2 * a + 1) == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("random structures are genuinely non-Kahler") {
  CatalogEntry e = make_entry("random_ak", {{"seed", 3.0}});
  std::mt19937_64 rng(31);
  double biggest = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    Vec p = e.sample_point(rng);
    NablaStructure ns = nabla_structure(*e.ak, p);
    biggest = std::max(biggest, ns.norm2_j_full);
  }
  CHECK(biggest > 1e-6);
}

TEST_CASE("generator determinism: identical seeds give identical structures") {
  CatalogEntry e1 = make_entry("random_ak", {{"seed", 12.0}});
  CatalogEntry e2 = make_entry("random_ak", {{"seed", 12.0}});
  Vec p{0.7, -0.3, 0.2, 1.1};
  TensorJ g1 = e1.ak->base.metric_jets(p, 2);
  TensorJ g2 = e2.ak->base.metric_jets(p, 2);
  for (std::size_t f = 0; f < g1.size(); ++f)
    for (int k = 0; k < g1[f].size(); ++k) CHECK(g1[f].coeff(k) == g2[f].coeff(k));
}

TEST_CASE("decaying perturbation produces decaying |nabla J|") {
  double tau = 1.5;
  CatalogEntry e = make_entry("random_ak", {{"seed", 4.0}, {"tau", tau}});
  // fit |nabla J| ~ r^{-q} along a ray; expect q comfortably above 2
  std::vector<double> radii = {4.0, 8.0, 16.0, 32.0};
  std::vector<double> vals;
  for (double r : radii) {
    Vec p{r * 0.6, r * 0.64, r * 0.36, r * 0.30};
    NablaStructure ns = nabla_structure(*e.ak, p);
    vals.push_back(std::sqrt(ns.norm2_j_full));
  }
  double q = std::log(vals[0] / vals.back()) / std::log(radii.back() / radii[0]);
  CHECK(q > 2.0);
}

TEST_CASE("flags in the catalog are re-verified, not trusted") {
  std::mt19937_64 rng(77);
  for (const CatalogEntry& e : builtin_entries()) {
    if (e.structure == StructureFlag::kahler && e.ak) {
      for (int rep = 0; rep < 10; ++rep) {
        Vec p = e.sample_point(rng);
        if (!e.chart.domain(p)) continue;
        NablaStructure ns = nabla_structure(*e.ak, p);
        CAPTURE(e.name);
        CHECK(std::sqrt(std::max(0.0, ns.norm2_j_full)) < 1e-8);
      }
    }
    if (e.known.einstein) {
      Vec p = e.sample_point(rng);
      if (!e.chart.domain(p)) continue;
      CurvaturePacket pk = curvature_packet(e.chart, p);
      double worst = 0.0;
      for (int i = 0; i < e.n; ++i)
        for (int j = 0; j < e.n; ++j)
          worst =
              std::max(worst, std::abs(pk.ricci(i, j) - pk.scalar / e.n * pk.g(i, j)));
      CAPTURE(e.name);
      CHECK(worst < 1e-8);
    }
    if (e.known.scalar_flat) {
      Vec p = e.sample_point(rng);
      if (!e.chart.domain(p)) continue;
      CHECK(std::abs(curvature_packet(e.chart, p).scalar) < 1e-8);
    }
  }
}

TEST_CASE("Burns exceptional-curve area oracle") {
  for (double c : {0.5, 1.0, 2.0}) {
    CHECK(burns_exceptional_area_oracle(c) == doctest::Approx(M_PI * c).epsilon(1e-10));
  }
}

TEST_CASE("unknown metric names are rejected") {
  CHECK_THROWS_AS(make_entry("nope", {}), UsageError);
}
