#pragma once

#include <functional>
#include <optional>
#include <string>

#include "akmass/tensor.hpp"

namespace akmass {

using Vec = std::vector<double>;

struct DegenerateMetricError : std::runtime_error {
  explicit DegenerateMetricError(const std::string& w) : std::runtime_error(w) {}
};

// Coordinate chart with jet-evaluable metric components g_ij (symmetric,
// positive definite on its domain).
struct MetricChart {
  int n = 0;
  std::string name;
  // Fills an (n,n) jet tensor with g_ij at ctx.seed, truncation ctx.order.
  std::function<void(const JetContext&, TensorJ&)> components;
  std::function<bool(const Vec&)> domain = [](const Vec&) { return true; };

  TensorJ metric_jets(const Vec& p, int order) const;
};

enum class StructureFlag { metric_only, kahler, almost_kahler_nonkahler, unknown };

// Metric chart plus a jet-evaluable almost complex structure J^i_j.
struct AlmostHermitianChart {
  MetricChart base;
  std::function<void(const JetContext&, TensorJ&)> complex_structure;
  StructureFlag flag = StructureFlag::unknown;

  int n() const { return base.n; }
  TensorJ j_jets(const Vec& p, int order) const;
};

// Everything pointwise built from g-jets: Christoffels, lowered Riemann,
// Ricci, scalar curvature, Weyl, and in n = 4 the self-dual split of Weyl in
// an oriented orthonormal frame (coordinate-order orientation).
struct CurvaturePacket {
  Vec point;
  int n = 0;
  TensorD g, ginv;       // values at the point
  TensorD gamma;         // Gamma^k_ij, slots (k,i,j)
  TensorD riemann;       // R_ijkl = g(R(ei,ej)ek, el)
  TensorD ricci;         // Ric_ij
  double scalar = 0.0;   // s
  TensorD weyl;          // W_ijkl (zero for n < 4)
  // n = 4 only: 3x3 blocks of the Weyl operator on Lambda2+/- and the frames
  // used to build them.
  std::array<std::array<double, 3>, 3> w_plus{}, w_minus{};
  TensorD frame;    // orthonormal frame vectors f_a^i, slots (a, i)
  TensorD coframe;  // eps^a_i, slots (a, i)
};

// Riemann sign convention: R(X,Y)Z = [nabla_X,nabla_Y]Z - nabla_[X,Y]Z with
// R_ijkl = g(R(ei,ej)ek,el); the unit sphere then has s > 0. The curvature
// operator acting on 2-forms carries the calibrated sign below so that
// s* = 2<R(omega),omega> equals s on Kahler anchors.
inline constexpr double kCurvatureOperatorSign = -1.0;

TensorD christoffel(const MetricChart& chart, const Vec& p);
TensorJ christoffel_jets(const TensorJ& g);            // order drops by 1
TensorJ riemann_lowered_jets(const TensorJ& g);        // order drops by 2
CurvaturePacket curvature_packet(const MetricChart& chart, const Vec& p);

// Gram-Schmidt of the coordinate frame, preserving coordinate orientation.
// Returns frame vectors as rows (a, i); `coframe` is its matrix inverse.
TensorJ orthonormal_frame_jets(const TensorJ& g);
void orthonormal_frame(const TensorD& g, TensorD& frame, TensorD& coframe);

// Tensor field with `ups` upper then `downs` lower slots, jet-evaluable.
struct TensorField {
  int ups = 0, downs = 0;
  std::function<TensorJ(const JetContext&)> eval;
};

// Levi-Civita covariant derivative at p; the new (derivative) slot comes
// first. Requires field jets of order >= 1.
TensorD covariant_derivative(const MetricChart& chart, const TensorField& field, const Vec& p);
// In-ring version: field jets + Christoffel jets -> nabla T jets (order - 1).
TensorJ covariant_derivative_jets(const TensorJ& field_jets, int ups, int downs,
                                  const TensorJ& gamma_jets);

// Geometer sign conventions: delta alpha = -g^{ij} nabla_i alpha_j and
// Delta f = -g^{ij} nabla_i nabla_j f (so Delta(x^2) = -2 on flat space).
double divergence_one_form(const MetricChart& chart, const TensorField& one_form, const Vec& p);
double laplacian_scalar(const MetricChart& chart, const JetField& f, const Vec& p);

// max |nabla_[m R_ij]kl| over index tuples; needs order-3 metric jets.
double second_bianchi_residual(const MetricChart& chart, const Vec& p);

// Lambda2 bases in a 4d orthonormal coframe:
// eta+_1 = (e0^e1 + e2^e3)/sqrt2 etc.; eta- with minus signs.
// Rows index the basis element a = 0,1,2; the matrix is (eta_a)_{ij} in
// coordinate indices built from the coframe.
void lambda2_bases(const TensorD& coframe, std::array<TensorD, 3>& eta_plus,
                   std::array<TensorD, 3>& eta_minus);

// <a,b> = (1/2) a_ij b_kl g^ik g^jl  (strict-pair convention).
double form2_inner(const TensorD& a, const TensorD& b, const TensorD& ginv);

// Curvature-type operator applied to a 2-form with the calibrated sign:
// (Op(alpha))_ij = kSign * (1/2) T_ij^{kl} alpha_kl.
TensorD curvature_operator_apply(const TensorD& riem_like, const TensorD& alpha,
                                 const TensorD& ginv);

}  // namespace akmass
