#include "akmass/ale_mass.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "akmass/catalog.hpp"

namespace akmass {

namespace {

// Exterior algebra on R^n via bitmask-graded components: c[mask] is the
// coefficient of dx^{i1} ^ ... ^ dx^{ik} with i1 < ... < ik the bits of mask.
struct AltForm {
  int n = 0;
  std::vector<double> c;
  explicit AltForm(int nn) : n(nn), c(std::size_t{1} << nn, 0.0) {}
};

int merge_sign(unsigned a, unsigned b) {
  int inv = 0;
  for (unsigned bits = a; bits; bits &= bits - 1) {
    int i = std::countr_zero(bits);
    inv += std::popcount(b & ((1u << i) - 1u));
  }
  return (inv & 1) ? -1 : 1;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  AltForm r(a.n);
  for (unsigned ma = 0; ma < a.c.size(); ++ma) {
    if (a.c[ma] == 0.0) continue;
    for (unsigned mb = 0; mb < b.c.size(); ++mb) {
      if (b.c[mb] == 0.0 || (ma & mb)) continue;
      r.c[ma | mb] += merge_sign(ma, mb) * a.c[ma] * b.c[mb];
    }
  }
  return r;
}

AltForm one_form(const TensorD& theta) {
  AltForm f(theta.n());
  for (int i = 0; i < theta.n(); ++i) f.c[1u << i] = theta(i);
  return f;
}

AltForm two_form(const TensorD& beta) {
  AltForm f(beta.n());
  for (int i = 0; i < beta.n(); ++i)
    for (int j = i + 1; j < beta.n(); ++j) f.c[(1u << i) | (1u << j)] = beta(i, j);
  return f;
}

AltForm omega_power(const TensorD& omega, int k) {
  AltForm acc(omega.n());
  acc.c[0] = 1.0;
  AltForm w = two_form(omega);
  for (int i = 0; i < k; ++i) acc = wedge(acc, w);
  return acc;
}

double entry_gamma_order(const CatalogEntry& e) {
  return e.end ? double(e.end->gamma_order) : 1.0;
}

TensorD fundamental_form_values(const CatalogEntry& e, const Vec& x) {
  const AlmostHermitianChart& c = e.ak_chart();
  TensorJ g = c.base.metric_jets(x, 0);
  TensorJ j = c.j_jets(x, 0);
  int n = e.n;
  TensorD om(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += j(k, i).value() * g(k, jj).value();
      om(i, jj) = s;
    }
  return om;
}

double hermitian_scalar_density(const CatalogEntry& e, const Vec& x) {
  const AlmostHermitianChart& c = e.ak_chart();
  CurvaturePacket pk = curvature_packet(c.base, x);
  TensorD omega = fundamental_form_values(e, x);
  TensorD rom = curvature_operator_apply(pk.riemann, omega, pk.ginv);
  double s_star = 2.0 * form2_inner(rom, omega, pk.ginv);
  double det = jet_matrix_determinant(c.base.metric_jets(x, 0)).value();
  return 0.5 * (pk.scalar + s_star) * std::sqrt(std::max(det, 0.0));
}

// eta = x1 dx2 - x2 dx1 + x3 dx4 - x4 dx3 (interleaved complex pairs).
TensorD contact_one_form(const Vec& x) {
  int n = static_cast<int>(x.size());
  TensorD theta(n, 1, 0.0);
  for (int a = 0; a < n / 2; ++a) {
    theta(2 * a) = -x[2 * a + 1];
    theta(2 * a + 1) = x[2 * a];
  }
  return theta;
}

}  // namespace

double adm_normalization(int n) {
  return std::tgamma(n / 2.0) / (4.0 * (n - 1) * std::pow(M_PI, n / 2.0));
}

double adm_flux_integrand(const ALEEnd& end, const Vec& x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  r = std::sqrt(r);
  if (r <= end.r0) throw UsageError("adm_flux_integrand: point inside the asymptotic radius");
  int n = end.n;
  TensorJ g = end.chart.metric_jets(x, 1);
  double flux = 0.0;
  for (int j = 0; j < n; ++j) {
    double bj = 0.0;
    for (int i = 0; i < n; ++i) bj += g(i, j).partial(i) - g(i, i).partial(j);
    flux += bj * x[j] / r;
  }
  return flux;
}

ALEEndResiduals ale_end_residuals(const ALEEnd& end, int samples) {
  ALEEndResiduals out;
  int n = end.n;
  std::mt19937_64 rng(350125);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> radii = {2.0 * end.r0, 4.0 * end.r0, 8.0 * end.r0, 16.0 * end.r0};
  double sup_first = 0.0, sup_last = 0.0;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    double r = radii[ri];
    double sup = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vec d(n);
      double nn = 0.0;
      for (double& v : d) {
        v = u(rng);
        nn += v * v;
      }
      if (nn < 1e-4) continue;
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = r * d[i] / std::sqrt(nn);
      TensorJ g = end.chart.metric_jets(x, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          sup = std::max(sup, std::abs(g(i, j).value() - (i == j ? 1.0 : 0.0)) *
                                  std::pow(r, end.tau));
      if (end.gamma_generator) {
        Vec gx(n, 0.0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) gx[i] += (*end.gamma_generator)(i, j) * x[j];
        out.gamma_invariance =
            std::max(out.gamma_invariance,
                     std::abs(adm_flux_integrand(end, x) - adm_flux_integrand(end, gx)));
      }
    }
    out.decay_sup = std::max(out.decay_sup, sup);
    if (ri == 0) sup_first = sup;
    if (ri + 1 == radii.size()) sup_last = sup;
  }
  out.decay_growth = sup_first > 0.0 ? sup_last / sup_first : 0.0;
  return out;
}

MassEstimate extrapolate_radial(const std::vector<double>& radii,
                                const std::vector<double>& values, double q0) {
  if (radii.size() < 3 || radii.size() != values.size())
    throw UsageError("extrapolate_radial: need at least 3 radii");
  MassEstimate est;
  est.radii = radii;
  est.values = values;
  std::size_t n = radii.size();

  double vmax = 0.0, spread = 0.0, mean = 0.0;
  for (double v : values) mean += v;
  mean /= double(n);
  for (double v : values) {
    vmax = std::max(vmax, std::abs(v));
    spread = std::max(spread, std::abs(v - mean));
  }
  if (spread < 1e-12 * (1.0 + vmax)) {
    est.extrapolated = mean;
    est.fit_exponent = q0;
    est.error_bar = spread;
    return est;
  }

  auto sse_for = [&](double q, double* a_out, double* b_out) {
    // linear LS for v = a + b r^{-q}
    double sw = double(n), sx = 0, sxx = 0, sy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::pow(radii[i], -q);
      sx += x;
      sxx += x * x;
      sy += values[i];
      sxy += x * values[i];
    }
    double det = sw * sxx - sx * sx;
    double a = (sxx * sy - sx * sxy) / det;
    double b = (sw * sxy - sx * sy) / det;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = values[i] - a - b * std::pow(radii[i], -q);
      sse += r * r;
    }
    if (a_out) *a_out = a;
    if (b_out) *b_out = b;
    return sse;
  };

  // Golden-section bracket around the best exponent on a log grid.
  double best_q = std::max(0.25, q0), best_sse = sse_for(best_q, nullptr, nullptr);
  for (double q = 0.25; q <= 12.0; q *= 1.18) {
    double s = sse_for(q, nullptr, nullptr);
    if (s < best_sse) {
      best_sse = s;
      best_q = q;
    }
  }
  double lo = best_q / 1.4, hi = best_q * 1.4;
  const double gr = 0.61803398874989485;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = sse_for(c, nullptr, nullptr), fd = sse_for(d, nullptr, nullptr);
  for (int it = 0; it < 60; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = sse_for(c, nullptr, nullptr);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = sse_for(d, nullptr, nullptr);
    }
  }
  double q = 0.5 * (lo + hi), a = 0.0, b = 0.0;
  double sse = sse_for(q, &a, &b);
  est.extrapolated = a;
  est.fit_exponent = q;
  est.error_bar = std::sqrt(sse / double(n)) + 0.25 * std::abs(values.back() - a);
  est.monotone_ok =
      std::abs(values.back() - a) <= std::abs(values.front() - a) + 1e-12 * (1.0 + vmax);
  return est;
}

MassEstimate adm_mass(const ALEEnd& end, const std::vector<double>& radii, int degree,
                      int threads) {
  if (radii.size() < 3) throw UsageError("adm_mass: need at least 3 increasing radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw UsageError("adm_mass: radii must increase");
  if (radii.front() <= end.r0)
    throw UsageError("adm_mass: radii must exceed the asymptotic radius");
  if (end.gamma_order > 1 && end.gamma_generator) {
    // Quotient integration divides the full-sphere integral by |Gamma|; spot
    // check that the integrand actually descends.
    double inv = ale_end_residuals(end, 8).gamma_invariance;
    if (inv > 1e-9)
      throw UsageError("adm_mass: integrand is not invariant under the deck group (residual " +
                       std::to_string(inv) + ")");
  }
  int n = end.n;
  SphereQuadrature quad = sphere_quadrature(n, degree);
  double norm = adm_normalization(n);
  std::vector<double> values;
  for (double r : radii) {
    std::size_t count = quad.nodes.size();
    std::size_t n_chunks = (count + 255) / 256;
    std::vector<double> partial(n_chunks, 0.0);
    parallel_chunks(
        count, threads,
        [&](std::size_t b, std::size_t e2, std::size_t chunk) {
          KahanSum s;
          for (std::size_t k = b; k < e2; ++k) {
            Vec x(n);
            for (int i = 0; i < n; ++i) x[i] = r * quad.nodes[k][i];
            s.add(quad.weights[k] * adm_flux_integrand(end, x));
          }
          partial[chunk] = s.value();
        },
        256);
    KahanSum total;
    for (double p : partial) total.add(p);
    values.push_back(norm * std::pow(r, n - 1) * total.value() / end.gamma_order);
  }
  return extrapolate_radial(radii, values, end.tau);
}

double sphere_flux_integral(int n, double r, const SphereQuadrature& quad,
                            const std::function<void(const Vec&, Vec&)>& flux, int gamma_order,
                            int threads) {
  std::size_t count = quad.nodes.size();
  std::size_t n_chunks = (count + 255) / 256;
  std::vector<double> partial(n_chunks, 0.0);
  parallel_chunks(
      count, threads,
      [&](std::size_t b, std::size_t e, std::size_t chunk) {
        KahanSum s;
        Vec x(n), f(n);
        for (std::size_t k = b; k < e; ++k) {
          for (int i = 0; i < n; ++i) x[i] = r * quad.nodes[k][i];
          flux(x, f);
          double dot = 0.0;
          for (int i = 0; i < n; ++i) dot += f[i] * quad.nodes[k][i];
          s.add(quad.weights[k] * dot);
        }
        partial[chunk] = s.value();
      },
      256);
  KahanSum total;
  for (double p : partial) total.add(p);
  return std::pow(r, n - 1) * total.value() / gamma_order;
}

void wedge_theta_omega_flux(const TensorD& theta, const TensorD& omega, Vec& flux_out) {
  int n = theta.n();
  AltForm lam = wedge(one_form(theta), omega_power(omega, n / 2 - 1));
  unsigned full = (1u << n) - 1u;
  flux_out.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    flux_out[j] = sign * lam.c[full & ~(1u << j)];
  }
}

double wedge_two_omega_top(const TensorD& beta, const TensorD& omega) {
  int n = beta.n();
  AltForm top = wedge(two_form(beta), omega_power(omega, n / 2 - 1));
  return top.c[(1u << n) - 1u];
}

ThetaProfile theta_potential(const CatalogEntry& entry, double r_check) {
  if (!entry.ak || entry.hint.kind != IntegrationHint::Kind::cohomogeneity_one)
    throw UsageError("theta_potential: entry '" + entry.name +
                     "' is not cohomogeneity-one; supply theta analytically");
  const AlmostHermitianChart chart = *entry.ak;

  auto i_f = [chart](double r) {
    Vec x = {r, 0.0, 0.0, 0.0};
    return chern_ricci_form(chart, x);
  };
  // Invariant profile: on the axis ray the tangential pair of iF reads off
  // q(r) directly; the radial pair is the consistency condition checked by
  // the d theta residual below. Evaluating pointwise avoids the error
  // accumulation of integrating q' from a base radius, which the r^{n}-sized
  // wedge integrals would amplify.
  auto q_fun = [i_f](double r) { return i_f(r)(2, 3) / 2.0; };

  ThetaProfile prof;
  prof.q = q_fun;

  // d theta vs iF on a few off-axis points of the check sphere.
  double h = 1e-4 * std::max(1.0, r_check);
  double q_r = q_fun(r_check);
  double dq = (q_fun(r_check + h) - q_fun(r_check - h)) / (2.0 * h);
  const Vec dirs[] = {{0.6, 0.48, 0.4, 0.5}, {-0.3, 0.8, 0.36, -0.37}, {0.1, -0.5, 0.74, 0.43}};
  double worst = 0.0;
  for (const Vec& d : dirs) {
    double nn = 0.0;
    for (double v : d) nn += v * v;
    Vec x(4);
    for (int i = 0; i < 4; ++i) x[i] = r_check * d[i] / std::sqrt(nn);
    TensorD f = chern_ricci_form(chart, x);
    // d theta = q'(r) dr ^ eta + q d eta, dr = x_i dx^i / r, d eta = 2 omega0
    TensorD eta = contact_one_form(x);
    TensorD dtheta(4, 2, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = dq * (x[i] * eta(j) - x[j] * eta(i)) / r_check;
        dtheta(i, j) = v;
      }
    for (int a = 0; a < 2; ++a) {
      dtheta(2 * a, 2 * a + 1) += 2.0 * q_r;
      dtheta(2 * a + 1, 2 * a) -= 2.0 * q_r;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(dtheta(i, j) - f(i, j)));
  }
  prof.dtheta_residual = worst;
  return prof;
}

MassEstimate mass_via_theta(const CatalogEntry& entry, const std::vector<double>& radii,
                            int degree) {
  if (!entry.end) throw UsageError("mass_via_theta: entry has no ALE end");
  int n = entry.n;
  int m = n / 2;
  ThetaProfile prof = theta_potential(entry, radii.front());
  SphereQuadrature quad = sphere_quadrature(n, degree);
  double norm = 1.0 / (2.0 * (2.0 * m - 1.0) * std::pow(M_PI, m));
  std::vector<double> values;
  for (double r : radii) {
    double q_r = prof.q(r);
    auto flux = [&](const Vec& x, Vec& out) {
      TensorD theta = contact_one_form(x);
      for (int i = 0; i < n; ++i) theta(i) *= q_r;
      TensorD omega = fundamental_form_values(entry, x);
      wedge_theta_omega_flux(theta, omega, out);
    };
    values.push_back(norm *
                     sphere_flux_integral(n, r, quad, flux, entry.end->gamma_order, 1));
  }
  return extrapolate_radial(radii, values, entry.end->tau);
}

BulkIntegral bulk_hermitian_integral(const CatalogEntry& entry, double r_max, int degree,
                                     int radial_nodes) {
  BulkIntegral out;
  int n = entry.n;
  if (entry.hint.kind == IntegrationHint::Kind::product_box) {
    Quadrature1D gl = gauss_legendre(8);
    double lo = entry.hint.box_lo, hi = entry.hint.box_hi;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    KahanSum s;
    std::vector<int> idx(n, 0);
    while (true) {
      Vec x(n);
      double w = 1.0;
      for (int i = 0; i < n; ++i) {
        x[i] = mid + half * gl.nodes[idx[i]];
        w *= half * gl.weights[idx[i]];
      }
      s.add(w * hermitian_scalar_density(entry, x));
      int k = n - 1;
      while (k >= 0 && ++idx[k] == static_cast<int>(gl.nodes.size())) idx[k--] = 0;
      if (k < 0) break;
    }
    out.value = out.raw = s.value();
    return out;
  }

  SphereQuadrature quad = sphere_quadrature(n, degree);
  auto shell = [&](double r) {
    KahanSum s;
    Vec x(n);
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
      for (int i = 0; i < n; ++i) x[i] = r * quad.nodes[k][i];
      s.add(quad.weights[k] * hermitian_scalar_density(entry, x));
    }
    double gamma = entry_gamma_order(entry);
    return s.value() * std::pow(r, n - 1) / gamma;
  };

  if (entry.hint.kind == IntegrationHint::Kind::full_chart_rn) {
    // r = tan t maps (0, pi/2) to (0, inf).
    Quadrature1D gl = gauss_legendre(radial_nodes);
    KahanSum s;
    double half = M_PI / 4.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      double t = half * (1.0 + gl.nodes[k]);
      double r = std::tan(t);
      double sec2 = 1.0 + r * r;
      s.add(gl.weights[k] * half * shell(r) * sec2);
    }
    out.value = out.raw = s.value();
    return out;
  }

  // cohomogeneity_one: radial Gauss-Legendre plus a power-law tail fit.
  double r_in = entry.hint.r_inner;
  Quadrature1D gl = gauss_legendre(radial_nodes);
  KahanSum s;
  double mid = 0.5 * (r_in + r_max), half = 0.5 * (r_max - r_in);
  for (std::size_t k = 0; k < gl.nodes.size(); ++k)
    s.add(gl.weights[k] * half * shell(mid + half * gl.nodes[k]));
  out.raw = s.value();

  double f1 = shell(0.8 * r_max), f2 = shell(r_max);
  double fscale = std::max(std::abs(f1), std::abs(f2));
  if (fscale < 1e-12) {
    out.tail = 0.0;
    out.fit_exponent = entry.end ? entry.end->tau + 2.0 : 0.0;
  } else {
    double p = std::log(std::abs(f1) / std::abs(f2)) / std::log(r_max / (0.8 * r_max));
    out.fit_exponent = p;
    if (p > 1.05) {
      out.tail = f2 * r_max / (p - 1.0);
    } else {
      out.tail = 0.0;
      out.convergent = false;
    }
  }
  out.value = out.raw + out.tail;
  return out;
}

PairingResult topological_pairing(const CatalogEntry& entry, bool force_numeric, int degree) {
  PairingResult out;
  if (!force_numeric && entry.known.c1_pairing) {
    out.value = *entry.known.c1_pairing;
    out.strategy = "known: " + entry.known.pairing_provenance;
    return out;
  }
  if (!entry.ak) throw UsageError("topological_pairing: no almost-Hermitian structure");
  int n = entry.n;
  const AlmostHermitianChart& chart = *entry.ak;

  auto if_top_density = [&](const Vec& x) {
    TensorD f = chern_ricci_form(chart, x);
    TensorD omega = fundamental_form_values(entry, x);
    return wedge_two_omega_top(f, omega);
  };

  if (entry.compact) {
    // closed manifold: pairing = (1/2pi) \int iF ^ omega^{m-1}
    KahanSum s;
    SphereQuadrature quad = sphere_quadrature(n, degree);
    if (entry.hint.kind == IntegrationHint::Kind::full_chart_rn) {
      Quadrature1D gl = gauss_legendre(96);
      double half = M_PI / 4.0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        double t = half * (1.0 + gl.nodes[k]);
        double r = std::tan(t);
        KahanSum shell;
        Vec x(n);
        for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
          for (int i = 0; i < n; ++i) x[i] = r * quad.nodes[q][i];
          shell.add(quad.weights[q] * if_top_density(x));
        }
        s.add(gl.weights[k] * half * shell.value() * std::pow(r, n - 1) * (1.0 + r * r));
      }
    } else if (entry.hint.kind == IntegrationHint::Kind::product_box) {
      Quadrature1D gl = gauss_legendre(6);
      double lo = entry.hint.box_lo, hi = entry.hint.box_hi;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      std::vector<int> idx(n, 0);
      while (true) {
        Vec x(n);
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
          x[i] = mid + half * gl.nodes[idx[i]];
          w *= half * gl.weights[idx[i]];
        }
        s.add(w * if_top_density(x));
        int k = n - 1;
        while (k >= 0 && ++idx[k] == static_cast<int>(gl.nodes.size())) idx[k--] = 0;
        if (k < 0) break;
      }
    }
    out.value = s.value() / (2.0 * M_PI);
    out.strategy = "cutoff: closed-manifold integral of iF ^ omega^{m-1} / 2pi";
    return out;
  }

  if (!entry.end || entry.hint.kind != IntegrationHint::Kind::cohomogeneity_one)
    throw UsageError("topological_pairing: no strategy available for '" + entry.name + "'");

  double big_r = std::max(4.0 * entry.end->r0, 12.0 * entry.hint.r_inner);
  ThetaProfile prof = theta_potential(entry, big_r);
  double gamma = entry_gamma_order(entry);

  // interior integral of iF ^ omega^{m-1} up to big_r
  SphereQuadrature quad = sphere_quadrature(n, degree);
  Quadrature1D gl = gauss_legendre(64);
  KahanSum interior;
  double mid = 0.5 * (entry.hint.r_inner + big_r), half = 0.5 * (big_r - entry.hint.r_inner);
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
    double r = mid + half * gl.nodes[k];
    KahanSum shell;
    Vec x(n);
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
      for (int i = 0; i < n; ++i) x[i] = r * quad.nodes[q][i];
      shell.add(quad.weights[q] * if_top_density(x));
    }
    interior.add(gl.weights[k] * half * shell.value() * std::pow(r, n - 1) / gamma);
  }

  double q_r = prof.q(big_r);
  auto flux = [&](const Vec& x, Vec& outf) {
    TensorD theta = contact_one_form(x);
    for (int i = 0; i < n; ++i) theta(i) *= q_r;
    TensorD omega = fundamental_form_values(entry, x);
    wedge_theta_omega_flux(theta, omega, outf);
  };
  double boundary =
      sphere_flux_integral(n, big_r, quad, flux, entry.end->gamma_order, 1);

  out.value = (interior.value() - boundary) / (2.0 * M_PI);
  out.strategy = "cutoff: interior iF-wedge minus boundary theta-wedge at r=" +
                 std::to_string(big_r);
  return out;
}

MassFormulaReport mass_formula_check(const CatalogEntry& entry, const std::vector<double>& radii,
                                     double r_max, int degree) {
  if (!entry.end) throw UsageError("mass_formula_check: entry has no ALE end");
  int m = entry.n / 2;
  MassFormulaReport rep;
  rep.lhs = adm_mass(*entry.end, radii, std::max(degree, 16));
  rep.bulk = bulk_hermitian_integral(entry, r_max, degree);
  rep.pairing = topological_pairing(entry, /*force_numeric=*/true, degree);
  double mfact = std::tgamma(m);  // (m-1)!
  rep.rhs_bulk_term = mfact / (4.0 * (2.0 * m - 1.0) * std::pow(M_PI, m)) * rep.bulk.value;
  rep.rhs_topological_term = -rep.pairing.value / ((2.0 * m - 1.0) * std::pow(M_PI, m - 1));
  rep.rhs = rep.rhs_bulk_term + rep.rhs_topological_term;
  rep.discrepancy = std::abs(rep.lhs.extrapolated - rep.rhs);
  rep.combined_error = rep.lhs.error_bar + std::abs(rep.bulk.tail) + 1e-10;
  return rep;
}

BlairReport blair_check(const CatalogEntry& entry, int degree, int radial_nodes) {
  if (!entry.compact) throw UsageError("blair_check: entry '" + entry.name + "' is not compact");
  int m = entry.n / 2;
  BlairReport rep;
  rep.lhs = bulk_hermitian_integral(entry, 0.0, degree, radial_nodes).value;
  rep.pairing = topological_pairing(entry, /*force_numeric=*/true, degree).value;
  rep.rhs = 4.0 * M_PI / std::tgamma(m) * rep.pairing;
  if (std::abs(rep.rhs) > 1e-9)
    rep.ratio = rep.lhs / rep.rhs;
  else
    rep.ratio = (std::abs(rep.lhs) < 1e-9) ? 1.0 : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace akmass
