#include "akmass/geometry.hpp"

#include <cmath>

namespace akmass {

TensorJ MetricChart::metric_jets(const Vec& p, int order) const {
  JetContext ctx(n, order, p);
  TensorJ g(n, 2);
  components(ctx, g);
  return g;
}

TensorJ AlmostHermitianChart::j_jets(const Vec& p, int order) const {
  JetContext ctx(base.n, order, p);
  TensorJ j(base.n, 2);
  complex_structure(ctx, j);
  return j;
}

TensorJ christoffel_jets(const TensorJ& g) {
  int n = g.n();
  int order = g(0, 0).order();
  if (order < 1) throw UsageError("christoffel_jets: metric jets of order >= 1 required");
  TensorJ dg(n, 3);  // dg(l,i,j) = d_l g_ij
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg(l, i, j) = g(i, j).derivative(l);
  TensorJ ginv = tensor_truncated(jet_matrix_inverse(g), order - 1);
  TensorJ gamma(n, 3, Jet::constant(g(0, 0).dim(), order - 1, 0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet sum = Jet::constant(g(0, 0).dim(), order - 1, 0.0);
        for (int l = 0; l < n; ++l)
          sum += ginv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gamma(k, i, j) = sum * 0.5;
        gamma(k, j, i) = gamma(k, i, j);
      }
  return gamma;
}

TensorD christoffel(const MetricChart& chart, const Vec& p) {
  if (!chart.domain(p)) throw UsageError("christoffel: point outside chart domain");
  return tensor_values(christoffel_jets(chart.metric_jets(p, 1)));
}

TensorJ riemann_lowered_jets(const TensorJ& g) {
  int n = g.n();
  int order = g(0, 0).order();
  if (order < 2) throw UsageError("riemann_lowered_jets: metric jets of order >= 2 required");
  TensorJ gamma = christoffel_jets(g);
  int go = order - 2;
  TensorJ dgamma(n, 4);  // d_i Gamma^l_jk, slots (i,l,j,k)
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) dgamma(i, l, j, k) = gamma(l, j, k).derivative(i);
  TensorJ gam = tensor_truncated(gamma, go);
  TensorJ glow = tensor_truncated(g, go);
  // R(e_i,e_j)e_k = (d_i G^m_jk - d_j G^m_ik + G^m_ip G^p_jk - G^m_jp G^p_ik) e_m
  TensorJ riem(n, 4, Jet::constant(g(0, 0).dim(), go, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
          Jet up = dgamma(i, m, j, k) - dgamma(j, m, i, k);
          for (int q = 0; q < n; ++q)
            up += gam(m, i, q) * gam(q, j, k) - gam(m, j, q) * gam(q, i, k);
          for (int l = 0; l < n; ++l) {
            riem(i, j, k, l) += glow(l, m) * up;
          }
        }
        for (int l = 0; l < n; ++l) riem(j, i, k, l) = -riem(i, j, k, l);
      }
  return riem;
}

void orthonormal_frame(const TensorD& g, TensorD& frame, TensorD& coframe) {
  int n = g.n();
  frame = TensorD(n, 2, 0.0);
  // Gram-Schmidt over coordinate vectors, in order.
  for (int a = 0; a < n; ++a) {
    Vec v(n, 0.0);
    v[a] = 1.0;
    for (int b = 0; b < a; ++b) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dot += g(i, j) * v[i] * frame(b, j);
      for (int i = 0; i < n; ++i) v[i] -= dot * frame(b, i);
    }
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) norm2 += g(i, j) * v[i] * v[j];
    if (norm2 <= 0.0) throw DegenerateMetricError("orthonormal_frame: metric not positive definite");
    double inv = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < n; ++i) frame(a, i) = v[i] * inv;
  }
  TensorD fm(n, 2);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) fm(i, a) = frame(a, i);  // columns = frame vectors
  TensorD fminv = matrix_inverse(fm);
  coframe = TensorD(n, 2);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) coframe(a, i) = fminv(a, i);
}

TensorJ orthonormal_frame_jets(const TensorJ& g) {
  int n = g.n();
  int dim = g(0, 0).dim();
  int order = g(0, 0).order();
  TensorJ frame(n, 2, Jet::constant(dim, order, 0.0));
  for (int a = 0; a < n; ++a) {
    std::vector<Jet> v(n, Jet::constant(dim, order, 0.0));
    v[a] = Jet::constant(dim, order, 1.0);
    for (int b = 0; b < a; ++b) {
      Jet dot = Jet::constant(dim, order, 0.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dot += g(i, j) * v[i] * frame(b, j);
      for (int i = 0; i < n; ++i) v[i] -= dot * frame(b, i);
    }
    Jet norm2 = Jet::constant(dim, order, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) norm2 += g(i, j) * v[i] * v[j];
    if (norm2.value() <= 0.0)
      throw DegenerateMetricError("orthonormal_frame_jets: metric not positive definite");
    Jet inv = 1.0 / sqrt(norm2);
    for (int i = 0; i < n; ++i) frame(a, i) = v[i] * inv;
  }
  return frame;
}

void lambda2_bases(const TensorD& coframe, std::array<TensorD, 3>& eta_plus,
                   std::array<TensorD, 3>& eta_minus) {
  int n = coframe.n();
  if (n != 4) throw UsageError("lambda2_bases: n must be 4");
  auto wedge = [&](int a, int b) {
    TensorD w(4, 2, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        w(i, j) = coframe(a, i) * coframe(b, j) - coframe(a, j) * coframe(b, i);
    return w;
  };
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  int pair[3][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  for (int a = 0; a < 3; ++a) {
    TensorD w1 = wedge(pair[a][0], pair[a][1]);
    TensorD w2 = wedge(pair[a][2], pair[a][3]);
    TensorD p(4, 2), m(4, 2);
    for (std::size_t f = 0; f < p.size(); ++f) {
      p[f] = (w1[f] + w2[f]) * inv_sqrt2;
      m[f] = (w1[f] - w2[f]) * inv_sqrt2;
    }
    eta_plus[a] = p;
    eta_minus[a] = m;
  }
}

double form2_inner(const TensorD& a, const TensorD& b, const TensorD& ginv) {
  int n = a.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += a(i, j) * b(k, l) * ginv(i, k) * ginv(j, l);
  return 0.5 * s;
}

TensorD curvature_operator_apply(const TensorD& riem_like, const TensorD& alpha,
                                 const TensorD& ginv) {
  int n = alpha.n();
  TensorD up(n, 2, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += ginv(k, a) * ginv(l, b) * alpha(a, b);
      up(k, l) = s;
    }
  TensorD out(n, 2, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += riem_like(i, j, k, l) * up(k, l);
      out(i, j) = kCurvatureOperatorSign * 0.5 * s;
    }
  return out;
}

CurvaturePacket curvature_packet(const MetricChart& chart, const Vec& p) {
  if (!chart.domain(p)) throw UsageError("curvature_packet: point outside chart domain");
  int n = chart.n;
  CurvaturePacket pk;
  pk.point = p;
  pk.n = n;
  TensorJ gj = chart.metric_jets(p, 2);
  pk.g = tensor_values(gj);
  pk.ginv = matrix_inverse(pk.g);
  pk.gamma = tensor_values(christoffel_jets(gj));
  pk.riemann = tensor_values(riemann_lowered_jets(gj));
  pk.ricci = TensorD(n, 2, 0.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) s += pk.ginv(i, l) * pk.riemann(i, j, k, l);
      pk.ricci(j, k) = s;
    }
  pk.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) pk.scalar += pk.ginv(j, k) * pk.ricci(j, k);

  pk.weyl = TensorD(n, 4, 0.0);
  if (n >= 4) {
    // Schouten S = (Ric - s g / (2(n-1))) / (n-2); W = R + S o g (Kulkarni-
    // Nomizu), signs fixed by our R convention (W = 0 on constant curvature).
    TensorD sch(n, 2, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sch(i, j) = (pk.ricci(i, j) - pk.scalar * pk.g(i, j) / (2.0 * (n - 1))) / (n - 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            pk.weyl(i, j, k, l) = pk.riemann(i, j, k, l) + sch(i, k) * pk.g(j, l) +
                                  sch(j, l) * pk.g(i, k) - sch(i, l) * pk.g(j, k) -
                                  sch(j, k) * pk.g(i, l);
  }
  if (n == 4) {
    orthonormal_frame(pk.g, pk.frame, pk.coframe);
    std::array<TensorD, 3> ep, em;
    lambda2_bases(pk.coframe, ep, em);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        TensorD wa = curvature_operator_apply(pk.weyl, ep[a], pk.ginv);
        pk.w_plus[a][b] = form2_inner(wa, ep[b], pk.ginv);
        TensorD wm = curvature_operator_apply(pk.weyl, em[a], pk.ginv);
        pk.w_minus[a][b] = form2_inner(wm, em[b], pk.ginv);
      }
  }
  return pk;
}

TensorJ covariant_derivative_jets(const TensorJ& field_jets, int ups, int downs,
                                  const TensorJ& gamma_jets) {
  int n = field_jets.n();
  int rank = ups + downs;
  if (field_jets.rank() != rank) throw UsageError("covariant_derivative_jets: valence mismatch");
  int order = field_jets(0, 0).order();
  if (order < 1) throw UsageError("covariant_derivative_jets: field jets of order >= 1 required");
  int go = order - 1;
  TensorJ gam = tensor_truncated(gamma_jets, std::min(go, gamma_jets[0].order()));
  TensorJ out(n, rank + 1, Jet::constant(field_jets[0].dim(), go, 0.0));

  std::vector<int> idx(rank, 0);
  std::size_t total = 1;
  for (int r = 0; r < rank; ++r) total *= n;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t f = flat;
    for (int r = rank - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(f % n);
      f /= n;
    }
    for (int k = 0; k < n; ++k) {
      Jet v = field_jets[flat].derivative(k).truncated(go);
      for (int slot = 0; slot < rank; ++slot) {
        for (int m = 0; m < n; ++m) {
          std::vector<int> jdx = idx;
          jdx[slot] = m;
          std::size_t jflat = 0;
          for (int r = 0; r < rank; ++r) jflat = jflat * n + jdx[r];
          if (slot < ups)
            v += gam(idx[slot], k, m) * field_jets[jflat];
          else
            v -= gam(m, k, idx[slot]) * field_jets[jflat];
        }
      }
      std::size_t oflat = static_cast<std::size_t>(k);
      for (int r = 0; r < rank; ++r) oflat = oflat * n + idx[r];
      out[oflat] = v;
    }
  }
  return out;
}

TensorD covariant_derivative(const MetricChart& chart, const TensorField& field, const Vec& p) {
  int order_needed = 1;
  TensorJ fj = field.eval(JetContext(chart.n, order_needed, p));
  TensorJ gj = chart.metric_jets(p, order_needed + 1);
  return tensor_values(covariant_derivative_jets(fj, field.ups, field.downs, christoffel_jets(gj)));
}

double divergence_one_form(const MetricChart& chart, const TensorField& one_form, const Vec& p) {
  TensorD nab = covariant_derivative(chart, one_form, p);
  TensorD g = tensor_values(chart.metric_jets(p, 0));
  TensorD ginv = matrix_inverse(g);
  double s = 0.0;
  for (int i = 0; i < chart.n; ++i)
    for (int j = 0; j < chart.n; ++j) s += ginv(i, j) * nab(i, j);
  return -s;
}

double laplacian_scalar(const MetricChart& chart, const JetField& f, const Vec& p) {
  int n = chart.n;
  Jet fj = f(JetContext(n, 2, p));
  TensorJ gj = chart.metric_jets(p, 1);
  TensorD gamma = tensor_values(christoffel_jets(gj));
  TensorD ginv = matrix_inverse(tensor_values(tensor_truncated(gj, 0)));
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MultiIndex mi{};
      mi[i]++;
      mi[j]++;
      double hess = fj.deriv(mi);
      for (int k = 0; k < n; ++k) {
        MultiIndex m1{};
        m1[k] = 1;
        hess -= gamma(k, i, j) * fj.deriv(m1);
      }
      s += ginv(i, j) * hess;
    }
  return -s;
}

double second_bianchi_residual(const MetricChart& chart, const Vec& p) {
  int n = chart.n;
  TensorJ gj = chart.metric_jets(p, 3);
  TensorJ riem = riemann_lowered_jets(gj);  // order 1
  TensorJ gamma = christoffel_jets(gj);
  TensorD nr = tensor_values(covariant_derivative_jets(riem, 0, 4, gamma));
  double worst = 0.0;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double r = nr(m, i, j, k, l) + nr(i, j, m, k, l) + nr(j, m, i, k, l);
            worst = std::max(worst, std::abs(r));
          }
  return worst;
}

}  // namespace akmass
