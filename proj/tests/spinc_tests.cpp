#include "akmass/spinc.hpp"

#include <cmath>
#include <random>

#include "akmass/catalog.hpp"
#include "doctest.h"

using namespace akmass;

namespace {

// Dense matrix of cl(basis coframe element a) on the 2^m Fock space.
std::vector<std::vector<Cx>> clifford_matrix(int m, int a) {
  int dim = 1 << m;
  std::vector<std::vector<Cx>> mat(dim, std::vector<Cx>(dim, Cx{0, 0}));
  for (int col = 0; col < dim; ++col) {
    FockSpinor basis = FockSpinor::zero(m);
    basis.c[col] = 1.0;
    std::vector<double> comps(2 * m, 0.0);
    comps[a] = 1.0;
    FockSpinor out = clifford_one_form(std::span<const double>(comps), basis);
    for (int row = 0; row < dim; ++row) mat[row][col] = out.c[row];
  }
  return mat;
}

TensorD standard_omega(int m) {
  TensorD omega(2 * m, 2, 0.0);
  for (int a = 0; a < m; ++a) {
    omega(2 * a, 2 * a + 1) = 1.0;
    omega(2 * a + 1, 2 * a) = -1.0;
  }
  return omega;
}

Vec unit_direction(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Vec d(n);
    double nn = 0.0;
    for (double& v : d) {
      v = u(rng);
      nn += v * v;
    }
    if (nn < 1e-3) continue;
    for (double& v : d) v /= std::sqrt(nn);
    return d;
  }
}

}  // namespace

TEST_CASE("Clifford relation {cl(a), cl(b)} = -2<a,b> exhaustively for m <= 4") {
  for (int m = 1; m <= 4; ++m) {
    int n = 2 * m, dim = 1 << m;
    std::vector<std::vector<std::vector<Cx>>> mats;
    for (int a = 0; a < n; ++a) mats.push_back(clifford_matrix(m, a));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double worst = 0.0;
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c) {
            Cx anti{0, 0};
            for (int k = 0; k < dim; ++k)
              anti += mats[a][r][k] * mats[b][k][c] + mats[b][r][k] * mats[a][k][c];
            Cx want = (a == b && r == c) ? Cx{-2.0, 0.0} : Cx{0.0, 0.0};
            worst = std::max(worst, std::abs(anti - want));
          }
        CHECK(worst < 1e-12);
      }
  }
}

TEST_CASE("m=1 basics: cl(e^1) psi0 and its square") {
  // cl(e^1) psi0 is sqrt2 times the (0,1)-wedge of psi0, which lands on the
  // unit ebar^1 component; squaring gives -psi0.
  FockSpinor psi0 = FockSpinor::vacuum(1);
  std::vector<double> e1{1.0, 0.0};
  FockSpinor c = clifford_one_form(std::span<const double>(e1), psi0);
  CHECK(std::abs(c.c[1] - Cx{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(c.c[0]) < 1e-15);
  FockSpinor cc = clifford_one_form(std::span<const double>(e1), c);
  CHECK(std::abs(cc.c[0] - Cx{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("Clifford action of a unit 1-form preserves the spinor norm") {
  std::mt19937_64 rng(3);
  for (int m = 1; m <= 4; ++m) {
    for (int rep = 0; rep < 10; ++rep) {
      Vec comps = unit_direction(rng, 2 * m);
      FockSpinor psi0 = FockSpinor::vacuum(m);
      FockSpinor out = clifford_one_form(std::span<const double>(comps), psi0);
      CHECK(out.norm2() == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("parity: 1-forms map even to odd") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int m = 3;
  FockSpinor s = FockSpinor::zero(m);
  for (unsigned mask = 0; mask < s.c.size(); ++mask)
    if (__builtin_popcount(mask) % 2 == 0) s.c[mask] = Cx{u(rng), u(rng)};
  std::vector<double> comps(2 * m);
  for (double& v : comps) v = u(rng);
  FockSpinor out = clifford_one_form(std::span<const double>(comps), s);
  for (unsigned mask = 0; mask < out.c.size(); ++mask)
    if (__builtin_popcount(mask) % 2 == 0) CHECK(std::abs(out.c[mask]) < 1e-15);
}

TEST_CASE("cl(omega) spectrum is i(2p - m) on Lambda^{0,p}, brute force m <= 4") {
  for (int m = 1; m <= 4; ++m) {
    TensorD omega = standard_omega(m);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      FockSpinor basis = FockSpinor::zero(m);
      basis.c[mask] = 1.0;
      FockSpinor out = clifford_two_form(omega, basis);
      int p = __builtin_popcount(mask);
      for (unsigned k = 0; k < out.c.size(); ++k) {
        Cx expect = (k == mask) ? Cx{0.0, double(2 * p - m)} : Cx{0, 0};
        CHECK(std::abs(out.c[k] - expect) < 1e-13);
      }
    }
  }
}

TEST_CASE("cl(omega) eigenvalues: -mi on the vacuum, (2,1,0)i on Lambda^{0,2}") {
  for (int m : {2, 3, 4}) {
    TensorD omega = standard_omega(m);
    FockSpinor psi0 = FockSpinor::vacuum(m);
    FockSpinor v = clifford_two_form(omega, psi0);
    CHECK(std::abs(v.c[0] - Cx{0.0, -double(m)}) < 1e-13);
    FockSpinor two = FockSpinor::zero(m);
    two.c[0b11] = 1.0;
    FockSpinor w = clifford_two_form(omega, two);
    CHECK(std::abs(w.c[0b11] - Cx{0.0, 4.0 - m}) < 1e-13);
  }
}

TEST_CASE("cl(omega) is skew-Hermitian") {
  int m = 3, dim = 1 << m;
  TensorD omega = standard_omega(m);
  for (int col = 0; col < dim; ++col)
    for (int row = 0; row < dim; ++row) {
      FockSpinor bc = FockSpinor::zero(m), br = FockSpinor::zero(m);
      bc.c[col] = 1.0;
      br.c[row] = 1.0;
      Cx m_rc = spinor_inner(br, clifford_two_form(omega, bc));
      Cx m_cr = spinor_inner(bc, clifford_two_form(omega, br));
      CHECK(std::abs(m_rc + std::conj(m_cr)) < 1e-13);
    }
}

TEST_CASE("adapted frames are orthonormal and J-adapted") {
  std::mt19937_64 rng(21);
  for (const char* name : {"random_ak", "eguchi_hanson", "fubini_study"}) {
    CatalogEntry e = make_entry(name, {});
    for (int rep = 0; rep < 10; ++rep) {
      Vec p = e.sample_point(rng);
      UnitaryFrame f = adapted_frame(*e.ak, p);
      TensorD g = tensor_values(e.ak->base.metric_jets(p, 0));
      TensorD jm = tensor_values(e.ak->j_jets(p, 0));
      int n = e.n;
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double dot = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dot += g(i, j) * f.values(a, i) * f.values(b, j);
          worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
      CHECK(worst < 1e-10);
      for (int a = 0; a < n / 2; ++a)
        for (int i = 0; i < n; ++i) {
          double je = 0.0;
          for (int k = 0; k < n; ++k) je += jm(i, k) * f.values(2 * a, k);
          CHECK(std::abs(je - f.values(2 * a + 1, i)) < 1e-10);
        }
    }
  }
}

TEST_CASE("Euclidean: coordinate frame, zero spin connection, zero Dirac residual") {
  CatalogEntry e = make_entry("euclidean", {{"n", 4.0}});
  Vec p{0.4, -0.1, 0.9, 0.2};
  UnitaryFrame f = adapted_frame(*e.ak, p);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      CHECK(f.values(a, i) == doctest::Approx(a == i ? 1.0 : 0.0));
  CHECK(dirac_constant_spinor_residual(*e.ak, p) < 1e-14);
  SpinConnectionData sc = spin_connection_data(*e.ak, p);
  for (int q = 0; q < 4; ++q)
    CHECK(std::sqrt(spinor_covariant_derivative_psi0(sc, q).norm2()) < 1e-14);
}

TEST_CASE("Kahler points: psi0 is parallel for the canonical connection") {
  std::mt19937_64 rng(33);
  for (const char* name : {"fubini_study", "eguchi_hanson", "burns"}) {
    CatalogEntry e = make_entry(name, {});
    for (int rep = 0; rep < 8; ++rep) {
      Vec p = e.sample_point(rng);
      SpinConnectionData sc = spin_connection_data(*e.ak, p);
      double worst = 0.0;
      for (int q = 0; q < e.n; ++q)
        worst = std::max(worst, std::sqrt(spinor_covariant_derivative_psi0(sc, q).norm2()));
      CAPTURE(name);
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("frame connection forms are antisymmetric") {
  CatalogEntry e = make_entry("random_ak", {{"seed", 2.0}});
  std::mt19937_64 rng(35);
  Vec p = e.sample_point(rng);
  SpinConnectionData sc = spin_connection_data(*e.ak, p);
  double worst = 0.0;
  for (int q = 0; q < 4; ++q)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l)
        worst = std::max(worst, std::abs(sc.w(q, k, l).value() + sc.w(q, l, k).value()));
  CHECK(worst < 1e-10);
}

TEST_CASE("Dirac residual of the constant spinor vanishes") {
  std::mt19937_64 rng(37);
  SUBCASE("Eguchi-Hanson") {
    CatalogEntry e = make_entry("eguchi_hanson", {});
    for (int rep = 0; rep < 10; ++rep) {
      Vec p = e.sample_point(rng);
      CHECK(dirac_constant_spinor_residual(*e.ak, p) < 1e-7);
    }
  }
  SUBCASE("random almost-Kahler structures") {
    for (std::uint64_t seed : {1ull, 4ull, 9ull}) {
      CatalogEntry e = make_entry("random_ak", {{"seed", double(seed)}});
      for (int rep = 0; rep < 15; ++rep) {
        Vec p = e.sample_point(rng);
        CHECK(dirac_constant_spinor_residual(*e.ak, p) < 1e-6);
      }
    }
  }
}

TEST_CASE("norm equality |nabla psi0|^2 = (1/8)|nabla omega|^2") {
  std::mt19937_64 rng(39);
  for (std::uint64_t seed : {3ull, 8ull}) {
    CatalogEntry e = make_entry("random_ak", {{"seed", double(seed)}});
    for (int rep = 0; rep < 50; ++rep) {
      Vec p = e.sample_point(rng);
      CHECK(norm_equality_gap(*e.ak, p) < 1e-7);
    }
  }
}

TEST_CASE("Witten integrand: both sides vanish on Euclidean space") {
  CatalogEntry e = make_entry("euclidean", {{"n", 4.0}});
  WittenIntegrand w = witten_integrand_sides(*e.ak, {1.0, 0.5, -0.3, 2.0});
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(w.spinor_side[i]) < 1e-14);
    CHECK(std::abs(w.metric_side[i]) < 1e-14);
  }
}

TEST_CASE("Witten integrand identity at large radius on two distinct metrics") {
  std::mt19937_64 rng(41);
  SUBCASE("Burns at r = 50") {
    CatalogEntry e = make_entry("burns", {{"c", 1.0}});
    for (int rep = 0; rep < 25; ++rep) {
      Vec normal = unit_direction(rng, 4);
      Vec p(4);
      for (int i = 0; i < 4; ++i) p[i] = 50.0 * normal[i];
      CHECK(witten_integrand_identity_residual(*e.ak, p, normal) < 1e-7);
    }
  }
  SUBCASE("Eguchi-Hanson at r = 20a") {
    CatalogEntry e = make_entry("eguchi_hanson", {{"a", 1.0}});
    for (int rep = 0; rep < 25; ++rep) {
      Vec normal = unit_direction(rng, 4);
      Vec p(4);
      for (int i = 0; i < 4; ++i) p[i] = 20.0 * normal[i];
      CHECK(witten_integrand_identity_residual(*e.ak, p, normal) < 1e-7);
    }
  }
  SUBCASE("random almost-Kahler structures at generic points") {
    CatalogEntry e = make_entry("random_ak", {{"seed", 5.0}});
    for (int rep = 0; rep < 20; ++rep) {
      Vec p = e.sample_point(rng);
      Vec normal{1.0, 0.0, 0.0, 0.0};
      CHECK(witten_integrand_identity_residual(*e.ak, p, normal) < 1e-7);
    }
  }
}

TEST_CASE("Witten spinor side vanishes pointwise (sharp form of the identity)") {
  CatalogEntry e = make_entry("random_ak", {{"seed", 7.0}});
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    Vec p = e.sample_point(rng);
    WittenIntegrand w = witten_integrand_sides(*e.ak, p);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(w.spinor_side[i]) < 1e-10 * std::max(1.0, w.scale));
      CHECK(std::abs(w.metric_side[i]) < 1e-10 * std::max(1.0, w.scale));
    }
  }
}TEST_CASE("scalar residuals are frame-choice independent") {
  // Rotating the Gram-Schmidt seed axes changes the adapted frame; the
  // exported residuals are norms and must not move.
  std::mt19937_64 rng(49);
  for (const char* name : {"random_ak", "burns"}) {
    CatalogEntry e = make_entry(name, {});
    for (int rep = 0; rep < 6; ++rep) {
      Vec p = e.sample_point(rng);
      double d0 = dirac_constant_spinor_residual(*e.ak, p, 0);
      double d2 = dirac_constant_spinor_residual(*e.ak, p, 2);
      CHECK(std::abs(d0 - d2) < 1e-10);
      double g0 = norm_equality_gap(*e.ak, p, 0);
      double g2 = norm_equality_gap(*e.ak, p, 2);
      CHECK(std::abs(g0 - g2) < 1e-10);
    }
  }
}

TEST_CASE("Witten integrand: both sides vanish on Euclidean space") {
  CatalogEntry e = make_entry("euclidean", {{"n", 4.0}});
  WittenIntegrand w = witten_integrand_sides(*e.ak, {1.0, 0.5, -0.3, 2.0});
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(w.spinor_side[i]) < 1e-14);
    CHECK(std::abs(w.metric_side[i]) < 1e-14);
  }
}

TEST_CASE("Witten integrand identity at large radius on two distinct metrics") {
  std::mt19937_64 rng(41);
  SUBCASE("Burns at r = 50") {
    CatalogEntry e = make_entry("burns", {{"c", 1.0}});
    for (int rep = 0; rep < 25; ++rep) {
      Vec normal = unit_direction(rng, 4);
      Vec p(4);
      for (int i = 0; i < 4; ++i) p[i] = 50.0 * normal[i];
      CHECK(witten_integrand_identity_residual(*e.ak, p, normal) < 1e-7);
    }
  }
  SUBCASE("Eguchi-Hanson at r = 20a") {
    CatalogEntry e = make_entry("eguchi_hanson", {{"a", 1.0}});
    for (int rep = 0; rep < 25; ++rep) {
      Vec normal = unit_direction(rng, 4);
      Vec p(4);
      for (int i = 0; i < 4; ++i) p[i] = 20.0 * normal[i];
      CHECK(witten_integrand_identity_residual(*e.ak, p, normal) < 1e-7);
    }
  }
  SUBCASE("random almost-Kahler structures at generic points") {
    CatalogEntry e = make_entry("random_ak", {{"seed", 5.0}});
    for (int rep = 0; rep < 20; ++rep) {
      Vec p = e.sample_point(rng);
      Vec normal{1.0, 0.0, 0.0, 0.0};
      CHECK(witten_integrand_identity_residual(*e.ak, p, normal) < 1e-7);
    }
  }
}

TEST_CASE("Witten spinor side vanishes pointwise (sharp form of the identity)") {
  CatalogEntry e = make_entry("random_ak", {{"seed", 7.0}});
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 10; ++rep) {
    Vec p = e.sample_point(rng);
    WittenIntegrand w = witten_integrand_sides(*e.ak, p);
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(w.spinor_side[i]) < 1e-10 * std::max(1.0, w.scale));
      CHECK(std::abs(w.metric_side[i]) < 1e-10 * std::max(1.0, w.scale));
    }
  }
}
