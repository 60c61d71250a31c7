#include "akmass/tensor.hpp"

#include <cmath>

namespace akmass {

TensorD tensor_values(const TensorJ& t) {
  TensorD r(t.n(), t.rank());
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].value();
  return r;
}

TensorJ tensor_truncated(const TensorJ& t, int order) {
  TensorJ r = t;
  for (std::size_t i = 0; i < t.size(); ++i) r[i] = t[i].truncated(order);
  return r;
}

TensorJ jet_matrix_inverse(const TensorJ& m) {
  int n = m.n();
  TensorJ a = m;
  int dim = m(0, 0).dim();
  int order = m(0, 0).order();
  TensorJ inv(n, 2, Jet::constant(dim, order, 0.0));
  for (int i = 0; i < n; ++i) inv(i, i) = Jet::constant(dim, order, 1.0);

  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(piv, col).value())) piv = r;
    if (a(piv, col).value() == 0.0) throw ArithmeticDomainError("matrix_inverse", 0.0);
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    Jet d = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) / d;
      inv(col, c) = inv(col, c) / d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Jet f = a(r, col);
      if (f.value() == 0.0) {
        bool zero = true;
        for (int k = 0; k < f.size(); ++k)
          if (f.coeff(k) != 0.0) zero = false;
        if (zero) continue;
      }
      for (int c = 0; c < n; ++c) {
        a(r, c) = a(r, c) - f * a(col, c);
        inv(r, c) = inv(r, c) - f * inv(col, c);
      }
    }
  }
  return inv;
}

TensorD matrix_inverse(const TensorD& m) {
  int n = m.n();
  TensorD a = m, inv(n, 2, 0.0);
  for (int i = 0; i < n; ++i) inv(i, i) = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (a(piv, col) == 0.0) throw ArithmeticDomainError("matrix_inverse", 0.0);
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    double d = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

Jet jet_matrix_determinant(const TensorJ& m) {
  int n = m.n();
  TensorJ a = m;
  Jet det = Jet::constant(m(0, 0).dim(), m(0, 0).order(), 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(piv, col).value())) piv = r;
    if (a(piv, col).value() == 0.0) return Jet::constant(m(0, 0).dim(), m(0, 0).order(), 0.0);
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      det = -det;
    }
    det = det * a(col, col);
    for (int r = col + 1; r < n; ++r) {
      Jet f = a(r, col) / a(col, col);
      for (int c = col; c < n; ++c) a(r, c) = a(r, c) - f * a(col, c);
    }
  }
  return det;
}

void jet_sqrt_and_inverse_sqrt(const TensorJ& s, TensorJ& sqrt_out, TensorJ& inv_sqrt_out) {
  int n = s.n();
  int dim = s(0, 0).dim();
  int order = s(0, 0).order();
  TensorJ y = s;
  TensorJ z(n, 2, Jet::constant(dim, order, 0.0));
  for (int i = 0; i < n; ++i) z(i, i) = Jet::constant(dim, order, 1.0);
  auto mul = [n](const TensorJ& a, const TensorJ& b) {
    TensorJ r(n, 2, Jet::constant(a(0, 0).dim(), a(0, 0).order(), 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) r(i, j) += a(i, k) * b(k, j);
    return r;
  };
  for (int it = 0; it < 60; ++it) {
    TensorJ yi = jet_matrix_inverse(y);
    TensorJ zi = jet_matrix_inverse(z);
    TensorJ yn(n, 2), zn(n, 2);
    double delta = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        yn(i, j) = (y(i, j) + zi(i, j)) * 0.5;
        zn(i, j) = (z(i, j) + yi(i, j)) * 0.5;
        for (int k = 0; k < yn(i, j).size(); ++k)
          delta = std::max(delta, std::abs(yn(i, j).coeff(k) - y(i, j).coeff(k)));
      }
    y = yn;
    z = zn;
    if (delta < 1e-15) {
      // One extra sweep so the polynomial part settles too.
      TensorJ yi2 = jet_matrix_inverse(y);
      TensorJ zi2 = jet_matrix_inverse(z);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          y(i, j) = (y(i, j) + zi2(i, j)) * 0.5;
          z(i, j) = (z(i, j) + yi2(i, j)) * 0.5;
        }
      break;
    }
    if (it == 59) throw ArithmeticDomainError("matrix_sqrt_no_convergence", delta);
  }
  // Sanity: y*y should reproduce s at the value level.
  TensorJ yy = mul(y, y);
  double resid = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) resid = std::max(resid, std::abs(yy(i, j).value() - s(i, j).value()));
  if (resid > 1e-9) throw ArithmeticDomainError("matrix_sqrt_condition", resid);
  sqrt_out = y;
  inv_sqrt_out = z;
}

}  // namespace akmass
