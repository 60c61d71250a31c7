#include "akmass/almost_kahler.hpp"

#include <cmath>

namespace akmass {

namespace {

TensorJ omega_jets_from(const TensorJ& g, const TensorJ& j) {
  // omega(u,v) = g(Ju, v): omega_ij = J^k_i g_kj.
  int n = g.n();
  int order = std::min(g(0, 0).order(), j(0, 0).order());
  TensorJ om(n, 2, Jet::constant(g(0, 0).dim(), order, 0.0));
  TensorJ gt = tensor_truncated(g, order);
  TensorJ jt = tensor_truncated(j, order);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      Jet s = Jet::constant(g(0, 0).dim(), order, 0.0);
      for (int k = 0; k < n; ++k) s += jt(k, i) * gt(k, jj);
      om(i, jj) = s;
    }
  return om;
}

// Apply J (values) to selected lower slots of a (0,4) tensor.
TensorD apply_j_slots(const TensorD& t, const TensorD& jm, bool s0, bool s1, bool s2, bool s3) {
  int n = t.n();
  TensorD r(n, 4, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a) {
            double ja = s0 ? jm(a, i) : (a == i ? 1.0 : 0.0);
            if (ja == 0.0) continue;
            for (int b = 0; b < n; ++b) {
              double jb = s1 ? jm(b, j) : (b == j ? 1.0 : 0.0);
              if (jb == 0.0) continue;
              for (int c = 0; c < n; ++c) {
                double jc = s2 ? jm(c, k) : (c == k ? 1.0 : 0.0);
                if (jc == 0.0) continue;
                for (int d = 0; d < n; ++d) {
                  double jd = s3 ? jm(d, l) : (d == l ? 1.0 : 0.0);
                  if (jd == 0.0) continue;
                  acc += ja * jb * jc * jd * t(a, b, c, d);
                }
              }
            }
          }
          r(i, j, k, l) = acc;
        }
  return r;
}

double quad_form_inner(const TensorD& a, const TensorD& b, const TensorD& ginv) {
  int n = a.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double braise = 0.0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              for (int r = 0; r < n; ++r)
                for (int t = 0; t < n; ++t)
                  braise += ginv(i, p) * ginv(j, q) * ginv(k, r) * ginv(l, t) * b(p, q, r, t);
          s += a(i, j, k, l) * braise;
        }
  return 0.25 * s;
}

struct Lambda2Data {
  std::array<TensorD, 3> eta_plus, eta_minus;
  std::array<double, 3> omega_plus;  // components of omega in the eta+ basis
  std::array<std::array<double, 3>, 3> wp;
  double omega_asd_norm = 0.0;  // size of the anti-self-dual part of omega
};

Lambda2Data lambda2_data(const CurvaturePacket& pk, const TensorD& omega) {
  Lambda2Data d;
  lambda2_bases(pk.coframe, d.eta_plus, d.eta_minus);
  d.wp = pk.w_plus;
  for (int a = 0; a < 3; ++a) d.omega_plus[a] = form2_inner(omega, d.eta_plus[a], pk.ginv);
  double asd2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    double c = form2_inner(omega, d.eta_minus[a], pk.ginv);
    asd2 += c * c;
  }
  d.omega_asd_norm = std::sqrt(asd2);
  return d;
}

}  // namespace

StructureResiduals structure_residuals(const AlmostHermitianChart& chart, const Vec& p) {
  int n = chart.n();
  TensorJ g = chart.base.metric_jets(p, 1);
  TensorJ j = chart.j_jets(p, 1);
  StructureResiduals r;
  TensorD gv = tensor_values(g), jv = tensor_values(j);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double jj = 0.0, comp = 0.0;
      for (int k = 0; k < n; ++k) {
        jj += jv(a, k) * jv(k, b);
        for (int l = 0; l < n; ++l) comp += gv(k, l) * jv(k, a) * jv(l, b);
      }
      r.j_squared = std::max(r.j_squared, std::abs(jj + (a == b ? 1.0 : 0.0)));
      r.compatibility = std::max(r.compatibility, std::abs(comp - gv(a, b)));
    }
  TensorJ om = omega_jets_from(g, j);
  TensorD ov = tensor_values(om);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      r.omega_antisymmetry = std::max(r.omega_antisymmetry, std::abs(ov(a, b) + ov(b, a)));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        double d = om(b, c).partial(a) - om(a, c).partial(b) + om(a, b).partial(c);
        r.d_omega = std::max(r.d_omega, std::abs(d));
      }
  return r;
}

double StructureResiduals::worst() const {
  return std::max(std::max(j_squared, compatibility), std::max(omega_antisymmetry, d_omega));
}

TensorJ fundamental_form_jets(const TensorJ& g, const TensorJ& j) { return omega_jets_from(g, j); }

TensorD fundamental_form(const AlmostHermitianChart& chart, const Vec& p) {
  StructureResiduals res = structure_residuals(chart, p);
  if (res.j_squared > 1e-8 || res.compatibility > 1e-8)
    throw StructureError(res.j_squared > 1e-8 ? "fundamental_form: J*J != -Id"
                                              : "fundamental_form: g(J.,J.) != g");
  return tensor_values(omega_jets_from(chart.base.metric_jets(p, 0), chart.j_jets(p, 0)));
}

NablaStructure nabla_structure(const AlmostHermitianChart& chart, const Vec& p) {
  int n = chart.n();
  TensorJ g = chart.base.metric_jets(p, 2);
  TensorJ j = chart.j_jets(p, 2);
  TensorJ gamma = christoffel_jets(g);
  NablaStructure out;
  out.nabla_omega = tensor_values(covariant_derivative_jets(omega_jets_from(g, j), 0, 2, gamma));
  out.nabla_j = tensor_values(covariant_derivative_jets(j, 1, 1, gamma));
  TensorD gv = tensor_values(g);
  TensorD ginv = matrix_inverse(gv);
  double so = 0.0;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b)
          for (int jj = 0; jj < n; ++jj)
            for (int c = 0; c < n; ++c)
              so += ginv(k, a) * ginv(i, b) * ginv(jj, c) * out.nabla_omega(k, i, jj) *
                    out.nabla_omega(a, b, c);
  out.norm2_omega_form = 0.5 * so;
  double sj = 0.0;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b)
          for (int jj = 0; jj < n; ++jj)
            for (int c = 0; c < n; ++c)
              sj += ginv(k, a) * gv(i, b) * ginv(jj, c) * out.nabla_j(k, i, jj) *
                    out.nabla_j(a, b, c);
  out.norm2_j_full = sj;
  return out;
}

double star_scalar(const AlmostHermitianChart& chart, const Vec& p) {
  CurvaturePacket pk = curvature_packet(chart.base, p);
  TensorD omega = fundamental_form(chart, p);
  TensorD r_omega = curvature_operator_apply(pk.riemann, omega, pk.ginv);
  return 2.0 * form2_inner(r_omega, omega, pk.ginv);
}

double hermitian_scalar(const AlmostHermitianChart& chart, const Vec& p) {
  CurvaturePacket pk = curvature_packet(chart.base, p);
  TensorD omega = fundamental_form(chart, p);
  TensorD r_omega = curvature_operator_apply(pk.riemann, omega, pk.ginv);
  double s_star = 2.0 * form2_inner(r_omega, omega, pk.ginv);
  return 0.5 * (pk.scalar + s_star);
}

TensorJ chern_connection_jets(const TensorJ& g, const TensorJ& j, const TensorJ& gamma) {
  int n = g.n();
  int go = gamma(0, 0, 0).order();
  TensorJ nj = covariant_derivative_jets(tensor_truncated(j, go + 1), 1, 1, gamma);
  TensorJ jt = tensor_truncated(j, go);
  TensorJ c(n, 3, Jet::constant(g(0, 0).dim(), go, 0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) {
        Jet corr = Jet::constant(g(0, 0).dim(), go, 0.0);
        for (int a = 0; a < n; ++a) corr += jt(k, a) * nj(i, a, jj);
        c(k, i, jj) = gamma(k, i, jj) - corr * 0.5;
      }
  return c;
}

ChernConnection chern_connection(const AlmostHermitianChart& chart, const Vec& p, int order) {
  int n = chart.n();
  TensorJ g = chart.base.metric_jets(p, order);
  TensorJ j = chart.j_jets(p, order);
  ChernConnection out;
  out.coeffs = chern_connection_jets(g, j, christoffel_jets(g));
  TensorD cv = tensor_values(out.coeffs);
  TensorD gv = tensor_values(g), jv = tensor_values(j);
  TensorD dg(n, 3), dj(n, 3);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        dg(i, a, b) = g(a, b).partial(i);
        dj(i, a, b) = j(a, b).partial(i);
      }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double rg = dg(i, a, b), rj = dj(i, a, b);
        for (int l = 0; l < n; ++l) {
          rg -= cv(l, i, a) * gv(l, b) + cv(l, i, b) * gv(a, l);
          rj += cv(a, i, l) * jv(l, b) - cv(l, i, b) * jv(a, l);
        }
        out.metric_residual = std::max(out.metric_residual, std::abs(rg));
        out.j_residual = std::max(out.j_residual, std::abs(rj));
      }
  return out;
}

TensorJ adapted_frame_jets(const TensorJ& g, const TensorJ& j, int first_axis) {
  int n = g.n();
  if (n % 2 != 0) throw UsageError("adapted_frame_jets: odd dimension");
  int m = n / 2;
  int dim = g(0, 0).dim();
  int order = std::min(g(0, 0).order(), j(0, 0).order());
  TensorJ gt = tensor_truncated(g, order);
  TensorJ jt = tensor_truncated(j, order);
  TensorJ frame(n, 2, Jet::constant(dim, order, 0.0));

  auto metric_dot = [&](const std::vector<Jet>& u, const std::vector<Jet>& v) {
    Jet s = Jet::constant(dim, order, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += gt(a, b) * u[a] * v[b];
    return s;
  };
  auto apply_j = [&](const std::vector<Jet>& u) {
    std::vector<Jet> r(n, Jet::constant(dim, order, 0.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) r[a] += jt(a, b) * u[b];
    return r;
  };

  double gscale = 0.0;
  for (int i = 0; i < n; ++i) gscale = std::max(gscale, std::abs(gt(i, i).value()));

  int axis = 0;
  for (int alpha = 0; alpha < m; ++alpha) {
    std::vector<Jet> v;
    while (true) {
      if (axis >= n) throw StructureError("adapted_frame_jets: ran out of seed axes");
      v.assign(n, Jet::constant(dim, order, 0.0));
      v[(axis + first_axis) % n] = Jet::constant(dim, order, 1.0);
      ++axis;
      for (int b = 0; b < 2 * alpha; ++b) {
        std::vector<Jet> e(n);
        for (int i = 0; i < n; ++i) e[i] = frame(b, i);
        Jet dot = metric_dot(v, e);
        for (int i = 0; i < n; ++i) v[i] -= dot * e[i];
      }
      if (metric_dot(v, v).value() > 1e-10 * gscale) break;  // degenerate seed: next axis
    }
    Jet inv = 1.0 / sqrt(metric_dot(v, v));
    for (int i = 0; i < n; ++i) frame(2 * alpha, i) = v[i] * inv;
    std::vector<Jet> e(n);
    for (int i = 0; i < n; ++i) e[i] = frame(2 * alpha, i);
    std::vector<Jet> je = apply_j(e);
    for (int i = 0; i < n; ++i) frame(2 * alpha + 1, i) = je[i];
  }
  return frame;
}

SpinConnectionData spin_connection_data(const AlmostHermitianChart& chart, const Vec& p,
                                        int order, int first_axis) {
  int n = chart.n();
  TensorJ g = chart.base.metric_jets(p, order);
  TensorJ j = chart.j_jets(p, order);
  TensorJ gamma = christoffel_jets(g);
  int go = order - 1;
  SpinConnectionData out;
  out.frame = adapted_frame_jets(g, j, first_axis);

  // nabla_{d_q} e_k as jets: (q, k, i).
  TensorJ nabla_e(n, 3, Jet::constant(g(0, 0).dim(), go, 0.0));
  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) {
        Jet s = out.frame(k, i).derivative(q);
        for (int c = 0; c < n; ++c) s += gamma(i, q, c) * out.frame(k, c).truncated(go);
        nabla_e(q, k, i) = s;
      }
  TensorJ gt = tensor_truncated(g, go);
  TensorJ jt = tensor_truncated(j, go);
  TensorJ njets = covariant_derivative_jets(j, 1, 1, gamma);  // (q, a, b) = (nabla_q J)^a_b

  out.w = TensorJ(n, 3, Jet::constant(g(0, 0).dim(), go, 0.0));
  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        Jet s = Jet::constant(g(0, 0).dim(), go, 0.0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += gt(a, b) * nabla_e(q, k, a) * out.frame(l, b).truncated(go);
        out.w(q, k, l) = s;
      }

  // a_q = sign * (1/2) sum_k g(nabla'_{d_q} e_k, J e_k).
  out.a.assign(n, Jet::constant(g(0, 0).dim(), go, 0.0));
  for (int q = 0; q < n; ++q) {
    Jet acc = Jet::constant(g(0, 0).dim(), go, 0.0);
    for (int k = 0; k < n; ++k) {
      // nabla'_q e_k = nabla_q e_k - (1/2) J (nabla_q J) e_k
      std::vector<Jet> npr(n, Jet::constant(g(0, 0).dim(), go, 0.0));
      for (int i = 0; i < n; ++i) {
        Jet corr = Jet::constant(g(0, 0).dim(), go, 0.0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            corr += jt(i, a) * njets(q, a, b) * out.frame(k, b).truncated(go);
        npr[i] = nabla_e(q, k, i) - corr * 0.5;
      }
      std::vector<Jet> je(n, Jet::constant(g(0, 0).dim(), go, 0.0));
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b) je[i] += jt(i, b) * out.frame(k, b).truncated(go);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) acc += gt(a, b) * npr[a] * je[b];
    }
    out.a[q] = acc * (0.5 * kAnticanonicalSign);
  }
  return out;
}

TensorJ chern_ricci_form_jets(const AlmostHermitianChart& chart, const Vec& p, int order) {
  SpinConnectionData sc = spin_connection_data(chart, p, order);
  int n = chart.n();
  int fo = order - 2;
  TensorJ f(n, 2, Jet::constant(n, fo, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      // iF = i dA_s = -d(Im A_s)
      f(a, b) = -(sc.a[b].derivative(a) - sc.a[a].derivative(b)).truncated(fo);
    }
  return f;
}

TensorD chern_ricci_form(const AlmostHermitianChart& chart, const Vec& p) {
  return tensor_values(chern_ricci_form_jets(chart, p, 2));
}

double chern_ricci_wedge_residual(const AlmostHermitianChart& chart, const Vec& p) {
  CurvaturePacket pk = curvature_packet(chart.base, p);
  TensorD omega = fundamental_form(chart, p);
  TensorD r_omega = curvature_operator_apply(pk.riemann, omega, pk.ginv);
  double s_star = 2.0 * form2_inner(r_omega, omega, pk.ginv);
  TensorD f = chern_ricci_form(chart, p);
  return std::abs(form2_inner(f, omega, pk.ginv) - 0.25 * (pk.scalar + s_star));
}

TensorD j_invariant_part(const TensorD& beta, const TensorD& jmat) {
  int n = beta.n();
  TensorD r(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double t = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t += beta(a, b) * jmat(a, i) * jmat(b, j);
      r(i, j) = 0.5 * (beta(i, j) + t);
    }
  return r;
}

TensorD j_anti_invariant_part(const TensorD& beta, const TensorD& jmat) {
  int n = beta.n();
  TensorD inv = j_invariant_part(beta, jmat);
  TensorD r(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = beta(i, j) - inv(i, j);
  return r;
}

Section4Components section4_components(const AlmostHermitianChart& chart, const Vec& p) {
  int n = chart.n();
  CurvaturePacket pk = curvature_packet(chart.base, p);
  TensorD jm = tensor_values(chart.j_jets(p, 0));
  TensorD omega = fundamental_form(chart, p);
  Section4Components out;

  // W'' = (1/8)(1 - J_X J_Y)(1 - J_Z J_T)(1 - J_Y J_T) R: all six two-J terms
  // enter with a minus sign. The displayed formula's last term carries a plus;
  // that combination fails to vanish in the Kahler case, so the projection
  // form is used (see the eight-term expansion below).
  const TensorD& R = pk.riemann;
  TensorD acc(n, 4, 0.0);
  struct Pattern {
    bool s0, s1, s2, s3;
    double sign;
  };
  const Pattern pats[] = {
      {false, false, false, false, +1.0}, {true, true, false, false, -1.0},
      {false, false, true, true, -1.0},   {true, true, true, true, +1.0},
      {false, true, false, true, -1.0},   {true, false, false, true, -1.0},
      {false, true, true, false, -1.0},   {true, false, true, false, -1.0},
  };
  for (const auto& pat : pats) {
    TensorD t = apply_j_slots(R, jm, pat.s0, pat.s1, pat.s2, pat.s3);
    for (std::size_t f = 0; f < acc.size(); ++f) acc[f] += pat.sign * t[f];
  }
  for (std::size_t f = 0; f < acc.size(); ++f) acc[f] /= 8.0;
  out.w_anti = acc;
  out.norm2_w_anti = quad_form_inner(acc, acc, pk.ginv);

  out.rho_star = curvature_operator_apply(pk.riemann, omega, pk.ginv);
  out.rho_star_anti = j_anti_invariant_part(out.rho_star, jm);

  NablaStructure ns = nabla_structure(chart, p);
  TensorD pair(n, 2, 0.0);  // pair(k,j) = <nabla_k omega, nabla_j omega>
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      TensorD a(n, 2, 0.0), b(n, 2, 0.0);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          a(x, y) = ns.nabla_omega(k, x, y);
          b(x, y) = ns.nabla_omega(j, x, y);
        }
      pair(k, j) = form2_inner(a, b, pk.ginv);
    }
  out.phi = TensorD(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += jm(k, i) * pair(k, j);
      out.phi(i, j) = s;
    }
  return out;
}

namespace {

// W+ block reassembled as a (0,4) tensor from the operator matrix.
TensorD wplus_tensor_from_blocks(const std::array<std::array<double, 3>, 3>& wp,
                                 const std::array<TensorD, 3>& eta_plus, int n) {
  TensorD t(n, 4, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (wp[a][b] == 0.0) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              t(i, j, k, l) -= wp[a][b] * eta_plus[a](i, j) * eta_plus[b](k, l);
    }
  return t;
}

}  // namespace

LebrunResiduals lebrunidentity_impl(const AlmostHermitianChart& chart, const Vec& p,
                                    bool want_eq402);

LebrunResiduals lebrun_identity_residuals(const AlmostHermitianChart& chart, const Vec& p,
                                          bool want_eq402) {
  if (chart.n() != 4) throw UsageError("lebrun_identity_residuals: dimension must be 4");
  return lebrunidentity_impl(chart, p, want_eq402);
}

LebrunResiduals lebrunidentity_impl(const AlmostHermitianChart& chart, const Vec& p,
                                    bool want_eq402) {
  int n = 4;
  CurvaturePacket pk = curvature_packet(chart.base, p);
  TensorD omega = fundamental_form(chart, p);
  NablaStructure ns = nabla_structure(chart, p);
  Lambda2Data l2 = lambda2_data(pk, omega);
  if (l2.omega_asd_norm > 1e-6)
    throw StructureError(
        "lebrun_identity_residuals: omega is not self-dual; coordinate orientation is "
        "incompatible with J");

  double w_oo = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) w_oo += l2.omega_plus[a] * l2.wp[a][b] * l2.omega_plus[b];
  LebrunResiduals out;
  out.eq400 = std::abs(0.5 * ns.norm2_omega_form - w_oo + pk.scalar / 3.0);

  double wp_f2 = 0.0;
  std::array<double, 3> w_omega{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      wp_f2 += l2.wp[a][b] * l2.wp[a][b];
      w_omega[a] += l2.wp[a][b] * l2.omega_plus[b];
    }
  double w_omega2 = w_omega[0] * w_omega[0] + w_omega[1] * w_omega[1] + w_omega[2] * w_omega[2];
  out.eq500 = 4.0 * wp_f2 - 4.0 * w_omega2 + 0.5 * w_oo * w_oo;

  // eq401, pointwise-scalar reading:
  // <W+, n*n(omega x omega)> = W+(o,o)^2 + 4|W+(o)|^2 - s W+(o,o).
  {
    TensorJ g = chart.base.metric_jets(p, 2);
    TensorJ j = chart.j_jets(p, 2);
    TensorJ gamma = christoffel_jets(g);
    TensorJ om = omega_jets_from(g, j);
    TensorJ oo(n, 4, Jet::constant(n, om(0, 0).order(), 0.0));
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) oo(i, jj, k, l) = om(i, jj) * om(k, l);
    TensorJ d1 = covariant_derivative_jets(oo, 0, 4, gamma);
    TensorJ d2 = covariant_derivative_jets(d1, 0, 5, gamma);
    TensorD d2v = tensor_values(d2);
    TensorD rough(n, 4, 0.0);
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) s += pk.ginv(a, b) * d2v(a, b, i, jj, k, l);
            rough(i, jj, k, l) = -s;
          }
    TensorD wp_t = wplus_tensor_from_blocks(l2.wp, l2.eta_plus, n);
    double lhs = quad_form_inner(wp_t, rough, pk.ginv);
    double rhs = w_oo * w_oo + 4.0 * w_omega2 - pk.scalar * w_oo;
    out.eq401 = std::abs(lhs - rhs);
  }

  if (want_eq402) {
    // n*n W+ needs fourth metric derivatives; differentiate the jet-valued
    // (nabla W+) field with a five-point stencil instead.
    auto nabla_wplus = [&chart](const Vec& x) {
      TensorJ g = chart.base.metric_jets(x, 3);
      TensorJ gamma = christoffel_jets(g);
      TensorJ riem = riemann_lowered_jets(g);  // order 1
      int nn = 4;
      TensorJ ginv_j = tensor_truncated(jet_matrix_inverse(g), 1);
      // Weyl jets
      TensorJ ric(nn, 2, Jet::constant(nn, 1, 0.0));
      Jet scal = Jet::constant(nn, 1, 0.0);
      for (int jj = 0; jj < nn; ++jj)
        for (int k = 0; k < nn; ++k) {
          Jet s = Jet::constant(nn, 1, 0.0);
          for (int i = 0; i < nn; ++i)
            for (int l = 0; l < nn; ++l) s += ginv_j(i, l) * riem(i, jj, k, l);
          ric(jj, k) = s;
        }
      for (int jj = 0; jj < nn; ++jj)
        for (int k = 0; k < nn; ++k) scal += ginv_j(jj, k) * ric(jj, k);
      TensorJ gt = tensor_truncated(g, 1);
      TensorJ sch(nn, 2, Jet::constant(nn, 1, 0.0));
      for (int i = 0; i < nn; ++i)
        for (int jj = 0; jj < nn; ++jj)
          sch(i, jj) = (ric(i, jj) - scal * gt(i, jj) * (1.0 / 6.0)) * 0.5;
      TensorJ weyl(nn, 4, Jet::constant(nn, 1, 0.0));
      for (int i = 0; i < nn; ++i)
        for (int jj = 0; jj < nn; ++jj)
          for (int k = 0; k < nn; ++k)
            for (int l = 0; l < nn; ++l)
              weyl(i, jj, k, l) = riem(i, jj, k, l) + sch(i, k) * gt(jj, l) +
                                  sch(jj, l) * gt(i, k) - sch(i, l) * gt(jj, k) -
                                  sch(jj, k) * gt(i, l);
      // self-dual projection via jets of the frame
      TensorJ frame = orthonormal_frame_jets(g);
      TensorJ fm(nn, 2, Jet::constant(nn, 1, 0.0));
      for (int a = 0; a < nn; ++a)
        for (int i = 0; i < nn; ++i) fm(i, a) = frame(a, i).truncated(1);
      TensorJ cof = jet_matrix_inverse(fm);
      auto wedge = [&](int a, int b) {
        TensorJ w(nn, 2, Jet::constant(nn, 1, 0.0));
        for (int i = 0; i < nn; ++i)
          for (int jj = 0; jj < nn; ++jj)
            w(i, jj) = cof(a, i) * cof(b, jj) - cof(a, jj) * cof(b, i);
        return w;
      };
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
      std::array<TensorJ, 3> etap;
      for (int a = 0; a < 3; ++a) {
        TensorJ w1 = wedge(pairs[a][0], pairs[a][1]);
        TensorJ w2 = wedge(pairs[a][2], pairs[a][3]);
        etap[a] = TensorJ(nn, 2, Jet::constant(nn, 1, 0.0));
        for (std::size_t f = 0; f < etap[a].size(); ++f)
          etap[a][f] = (w1[f] + w2[f]) * inv_sqrt2;
      }
      // operator matrix entries as jets, then W+ tensor
      auto op_entry = [&](const TensorJ& ea, const TensorJ& eb) {
        // -(1/4) W_{ijkl} ea^{ij} eb^{kl} with indices raised by ginv jets
        Jet s = Jet::constant(nn, 1, 0.0);
        for (int i = 0; i < nn; ++i)
          for (int jj = 0; jj < nn; ++jj)
            for (int k = 0; k < nn; ++k)
              for (int l = 0; l < nn; ++l) {
                Jet araise = Jet::constant(nn, 1, 0.0);
                for (int a2 = 0; a2 < nn; ++a2)
                  for (int b2 = 0; b2 < nn; ++b2)
                    for (int c2 = 0; c2 < nn; ++c2)
                      for (int d2 = 0; d2 < nn; ++d2)
                        araise += ginv_j(i, a2) * ginv_j(jj, b2) * ginv_j(k, c2) *
                                  ginv_j(l, d2) * ea(a2, b2) * eb(c2, d2);
                s += weyl(i, jj, k, l) * araise;
              }
        return s * -0.25;
      };
      TensorJ wp_t(nn, 4, Jet::constant(nn, 1, 0.0));
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          Jet e = op_entry(etap[a], etap[b]);
          for (int i = 0; i < nn; ++i)
            for (int jj = 0; jj < nn; ++jj)
              for (int k = 0; k < nn; ++k)
                for (int l = 0; l < nn; ++l)
                  wp_t(i, jj, k, l) -= e * etap[a](i, jj) * etap[b](k, l);
        }
      return tensor_values(covariant_derivative_jets(wp_t, 0, 4, gamma));  // (q,i,j,k,l)
    };

    double h = 5e-3;
    TensorD d2sum(n, 4, 0.0);  // g^{qc} nabla_q (nabla W+)_c...
    TensorJ g3 = chart.base.metric_jets(p, 2);
    TensorD gamma_v = tensor_values(christoffel_jets(g3));
    TensorD u0 = nabla_wplus(p);
    for (int q = 0; q < n; ++q) {
      std::array<TensorD, 4> u;  // +-h, +-2h
      for (int s = 0; s < 4; ++s) {
        Vec x = p;
        double off[4] = {h, -h, 2 * h, -2 * h};
        x[q] += off[s];
        u[s] = nabla_wplus(x);
      }
      for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i)
          for (int jj = 0; jj < n; ++jj)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) {
                double du = (-u[2](c, i, jj, k, l) + 8 * u[0](c, i, jj, k, l) -
                             8 * u[1](c, i, jj, k, l) + u[3](c, i, jj, k, l)) /
                            (12 * h);
                // Christoffel corrections for the (0,5) field
                double corr = 0.0;
                for (int m2 = 0; m2 < n; ++m2) {
                  corr += gamma_v(m2, q, c) * u0(m2, i, jj, k, l);
                  corr += gamma_v(m2, q, i) * u0(c, m2, jj, k, l);
                  corr += gamma_v(m2, q, jj) * u0(c, i, m2, k, l);
                  corr += gamma_v(m2, q, k) * u0(c, i, jj, m2, l);
                  corr += gamma_v(m2, q, l) * u0(c, i, jj, k, m2);
                }
                double nabla2 = du - corr;
                d2sum(i, jj, k, l) += pk.ginv(q, c) * nabla2;
              }
    }
    TensorD rough(n, 4, 0.0);
    for (std::size_t f = 0; f < rough.size(); ++f) rough[f] = -d2sum[f];
    // project to the eta+ operator matrix
    std::array<std::array<double, 3>, 3> rough_op{};
    auto raise_inner = [&](const TensorD& t, const TensorD& ea, const TensorD& eb) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double araise = 0.0;
              for (int a2 = 0; a2 < n; ++a2)
                for (int b2 = 0; b2 < n; ++b2)
                  for (int c2 = 0; c2 < n; ++c2)
                    for (int d2 = 0; d2 < n; ++d2)
                      araise += pk.ginv(i, a2) * pk.ginv(jj, b2) * pk.ginv(k, c2) *
                                pk.ginv(l, d2) * ea(a2, b2) * eb(c2, d2);
              s += t(i, jj, k, l) * araise;
            }
      return -0.25 * s;
    };
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) rough_op[a][b] = raise_inner(rough, l2.eta_plus[a], l2.eta_plus[b]);

    double resid = 0.0;
    double wp_f2_local = wp_f2;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double ww = 0.0;
        for (int c = 0; c < 3; ++c) ww += l2.wp[a][c] * l2.wp[c][b];
        double e = rough_op[a][b] + 0.5 * pk.scalar * l2.wp[a][b] - 6.0 * ww +
                   2.0 * wp_f2_local * (a == b ? 1.0 : 0.0);
        resid = std::max(resid, std::abs(e));
      }
    out.eq402 = resid;
  }
  return out;
}

SekigawaResidual sekigawa_apostolov_residual(const AlmostHermitianChart& chart, const Vec& p,
                                             double einstein_tol) {
  int n = chart.n();
  if (n % 2 != 0) throw UsageError("sekigawa_apostolov_residual: dimension must be even");
  CurvaturePacket pk = curvature_packet(chart.base, p);

  SekigawaResidual out;
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.einstein_residual = std::max(
          out.einstein_residual, std::abs(pk.ricci(i, j) - pk.scalar / n * pk.g(i, j)));
      scale = std::max(scale, std::abs(pk.g(i, j)));
    }
  out.einstein_residual /= std::max(1.0, std::abs(pk.scalar) / n * scale);
  if (out.einstein_residual > einstein_tol)
    throw StructureError("sekigawa_apostolov_residual: chart is not Einstein at this point "
                         "(residual " +
                         std::to_string(out.einstein_residual) + ")");

  TensorJ g = chart.base.metric_jets(p, 3);
  TensorJ j = chart.j_jets(p, 3);
  TensorJ gamma = christoffel_jets(g);          // order 2
  TensorJ om = omega_jets_from(g, j);           // order 3
  TensorJ nom = covariant_derivative_jets(om, 0, 2, gamma);  // order 2
  TensorJ riem = riemann_lowered_jets(g);       // order 1
  TensorJ ginv_j = tensor_truncated(jet_matrix_inverse(g), 1);

  // rho* jets (order 1)
  TensorJ rho(n, 2, Jet::constant(n, 1, 0.0));
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      Jet s = Jet::constant(n, 1, 0.0);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Jet up = Jet::constant(n, 1, 0.0);
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) up += ginv_j(k, a) * ginv_j(l, b) * om(a, b).truncated(1);
          s += riem(i, jj, k, l) * up;
        }
      rho(i, jj) = s * (kCurvatureOperatorSign * 0.5);
    }

  // alpha_q = <rho*, nabla_q omega> (order 1), then delta alpha.
  std::vector<Jet> alpha(n, Jet::constant(n, 1, 0.0));
  for (int q = 0; q < n; ++q) {
    Jet s = Jet::constant(n, 1, 0.0);
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) {
        Jet up = Jet::constant(n, 1, 0.0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            up += ginv_j(i, a) * ginv_j(jj, b) * nom(q, a, b).truncated(1);
        s += rho(i, jj) * up;
      }
    alpha[q] = s * 0.5;
  }
  double delta_alpha = 0.0;
  {
    TensorD gamma_v = tensor_values(gamma);
    for (int q = 0; q < n; ++q)
      for (int c = 0; c < n; ++c) {
        double nab = alpha[c].partial(q);
        for (int m2 = 0; m2 < n; ++m2) nab -= gamma_v(m2, q, c) * alpha[m2].value();
        delta_alpha -= pk.ginv(q, c) * nab;
      }
  }

  // |nabla omega|^2 as a jet (order 2) and its geometer Laplacian.
  TensorJ ginv_j2 = tensor_truncated(jet_matrix_inverse(g), 2);
  Jet u2 = Jet::constant(n, 2, 0.0);
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b)
          for (int jj = 0; jj < n; ++jj)
            for (int c = 0; c < n; ++c)
              u2 += ginv_j2(k, a) * ginv_j2(i, b) * ginv_j2(jj, c) * nom(k, i, jj) *
                    nom(a, b, c) * 0.5;
  double lap_u = 0.0;
  {
    TensorD gamma_v = tensor_values(gamma);
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) {
        MultiIndex mi{};
        mi[i]++;
        mi[jj]++;
        double hess = u2.deriv(mi);
        for (int k = 0; k < n; ++k) {
          MultiIndex m1{};
          m1[k] = 1;
          hess -= gamma_v(k, i, jj) * u2.deriv(m1);
        }
        lap_u += pk.ginv(i, jj) * hess;
      }
    lap_u = -lap_u;
  }

  Section4Components s4 = section4_components(chart, p);
  NablaStructure ns = nabla_structure(chart, p);
  TensorD jm = tensor_values(chart.j_jets(p, 0));

  // rough Laplacian of omega and its J-invariant part
  TensorJ n2om = covariant_derivative_jets(nom, 0, 3, gamma);  // order 1
  TensorD n2v = tensor_values(n2om);
  TensorD rough_om(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += pk.ginv(a, b) * n2v(a, b, i, jj);
      rough_om(i, jj) = -s;
    }
  TensorD rough_inv = j_invariant_part(rough_om, jm);

  double t_rho_anti = form2_inner(s4.rho_star_anti, s4.rho_star_anti, pk.ginv);
  double t_rough = form2_inner(rough_inv, rough_inv, pk.ginv);
  double t_phi = form2_inner(s4.phi, s4.phi, pk.ginv);

  out.lhs = 8.0 * delta_alpha - lap_u;
  out.rhs = 8.0 * s4.norm2_w_anti + 4.0 * t_rho_anti + t_rough + t_phi +
            (pk.scalar / n) * ns.norm2_omega_form;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace akmass
