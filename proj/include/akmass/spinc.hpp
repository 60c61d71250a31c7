#pragma once

#include <complex>

#include "akmass/almost_kahler.hpp"

namespace akmass {

using Cx = std::complex<double>;

// Element of Lambda^{0,*} at a point, in an adapted unitary frame. The basis
// e-bar^S over increasing subsets S of {0..m-1} is declared orthonormal;
// coefficients are indexed by the subset bitmask.
struct FockSpinor {
  int m = 0;
  std::vector<Cx> c;

  static FockSpinor zero(int m) {
    FockSpinor s;
    s.m = m;
    s.c.assign(std::size_t{1} << m, Cx{0.0, 0.0});
    return s;
  }
  static FockSpinor vacuum(int m) {
    FockSpinor s = zero(m);
    s.c[0] = 1.0;
    return s;
  }
  double norm2() const {
    double t = 0.0;
    for (const Cx& z : c) t += std::norm(z);
    return t;
  }
  FockSpinor& operator+=(const FockSpinor& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  FockSpinor operator*(Cx s) const {
    FockSpinor r = *this;
    for (Cx& z : r.c) z *= s;
    return r;
  }
  FockSpinor operator-(const FockSpinor& o) const {
    FockSpinor r = *this;
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
    return r;
  }
};

// Hermitian inner product, conjugate-linear in the first slot.
Cx spinor_inner(const FockSpinor& a, const FockSpinor& b);

// Fermionic ladder operators on the subset basis.
FockSpinor creation(int alpha, const FockSpinor& s);
FockSpinor annihilation(int alpha, const FockSpinor& s);

// Clifford action of a real 1-form given by its components in the adapted
// orthonormal coframe (interleaved: comps[2a] along e^a, comps[2a+1] along
// Je^a): cl(alpha) = sqrt2(alpha^{0,1} wedge . - contraction), normalized so
// that {cl(a), cl(b)} = -2<a,b>.
FockSpinor clifford_one_form(std::span<const double> frame_comps, const FockSpinor& s);
FockSpinor clifford_one_form(std::span<const Cx> frame_comps, const FockSpinor& s);

// cl of a 2-form from cl(e^i ^ e^j) = cl(e^i) cl(e^j) for i != j, linearly
// over strict pairs; beta given by frame components beta(e_i, e_j).
FockSpinor clifford_two_form(const TensorD& beta_frame, const FockSpinor& s);

// Adapted unitary frame at p extended to a neighborhood: vectors interleaved
// (e_1, Je_1, ..., e_m, Je_m) as jets, plus values and covector values.
struct UnitaryFrame {
  Vec point;
  int m = 0;
  TensorJ vectors;    // (a, i) jets
  TensorD values;     // (a, i)
  TensorD covectors;  // (a, i): a-th coframe element
};
UnitaryFrame adapted_frame(const AlmostHermitianChart& chart, const Vec& p, int order = 2);

// Spinor covariant derivative along coordinate direction q, per
// nabla_A psi = d psi + (1/2) sum_{k<l} w_kl cl(e_k) cl(e_l) psi
//             + (1/2) A_s psi
// with A_s from the Chern connection on K^{-1}. The field version takes the
// spinor's frame coefficients as jets over the neighborhood; the psi0
// convenience drops the (vanishing) d psi term.
FockSpinor spinor_covariant_derivative(const SpinConnectionData& sc, int q,
                                       const std::vector<std::pair<Jet, Jet>>& psi_coeffs);
FockSpinor spinor_covariant_derivative_psi0(const SpinConnectionData& sc, int q);

// |D_{A^Ch} psi0| at p; then the norm gap | |nabla psi0|^2 - (1/8)|nabla omega|^2 |.
// first_axis rotates the Gram-Schmidt seed; these scalars must not move.
double dirac_constant_spinor_residual(const AlmostHermitianChart& chart, const Vec& p,
                                      int first_axis = 0);
double norm_equality_gap(const AlmostHermitianChart& chart, const Vec& p, int first_axis = 0);

// Witten boundary integrand: the spinor side <psi0, L_i psi0> per frame
// direction and the metric-derivative-plus-A_s side, both contracted with a
// chosen normal. scale is the natural magnitude of the constituent terms.
struct WittenIntegrand {
  std::vector<Cx> spinor_side;   // per frame index i
  std::vector<Cx> metric_side;   // -(1/4) S(Je_i) - (i/2) A_s(Je_i)
  double scale = 0.0;
};
WittenIntegrand witten_integrand_sides(const AlmostHermitianChart& chart, const Vec& p);
double witten_integrand_identity_residual(const AlmostHermitianChart& chart, const Vec& p,
                                          const Vec& normal);

}  // namespace akmass
