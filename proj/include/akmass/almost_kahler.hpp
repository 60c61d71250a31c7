#pragma once

#include <optional>

#include "akmass/geometry.hpp"

namespace akmass {

struct StructureError : std::runtime_error {
  explicit StructureError(const std::string& w) : std::runtime_error(w) {}
};

// Compatibility residuals of (g, J): J^2 + Id, g(J.,J.) - g, antisymmetry of
// omega, and d omega (exterior derivative from jets).
struct StructureResiduals {
  double j_squared = 0.0;
  double compatibility = 0.0;
  double omega_antisymmetry = 0.0;
  double d_omega = 0.0;
  double worst() const;
};
StructureResiduals structure_residuals(const AlmostHermitianChart& chart, const Vec& p);

// omega_ij = g_ik J^k_j, so that omega(u,v) = g(Ju,v).
TensorD fundamental_form(const AlmostHermitianChart& chart, const Vec& p);
TensorJ fundamental_form_jets(const TensorJ& g, const TensorJ& j);

struct NablaStructure {
  TensorD nabla_omega;          // (k,i,j) = (nabla_k omega)_ij
  TensorD nabla_j;              // (k,i,j) = (nabla_k J)^i_j
  double norm2_omega_form = 0;  // strict-pair norm on the form slots
  double norm2_j_full = 0;      // full endomorphism contraction
};
NablaStructure nabla_structure(const AlmostHermitianChart& chart, const Vec& p);

double star_scalar(const AlmostHermitianChart& chart, const Vec& p);
double hermitian_scalar(const AlmostHermitianChart& chart, const Vec& p);

// First canonical Hermitian connection nabla^LC - (1/2) J (nabla^LC J);
// coefficients C^k_ij as jets plus the nabla' g / nabla' J residuals at p.
struct ChernConnection {
  TensorJ coeffs;  // (k,i,j), jets of one order less than the inputs
  double metric_residual = 0.0;
  double j_residual = 0.0;
};
ChernConnection chern_connection(const AlmostHermitianChart& chart, const Vec& p, int order = 2);
TensorJ chern_connection_jets(const TensorJ& g, const TensorJ& j, const TensorJ& gamma);

// J-adapted orthonormal frame field, Gram-Schmidt seeded from coordinate
// axes, extended to a neighborhood through jets. Vectors are interleaved
// (e_1, Je_1, e_2, Je_2, ...), rows (a, i). first_axis rotates the seed
// order; exported residuals are scalars and must not depend on it.
TensorJ adapted_frame_jets(const TensorJ& g, const TensorJ& j, int first_axis = 0);

// Connection data entering the spinor covariant derivative: Levi-Civita
// frame 1-forms w_kl and the imaginary part `a` of the K^{-1} Chern
// connection form A_s = i a (A_s(X) = (i/2) sum_i g(nabla'_X e_i, J e_i)).
struct SpinConnectionData {
  TensorJ frame;       // adapted frame jets (a, i)
  TensorJ w;           // (j, k, l): w_kl(d_j) = g(nabla_{d_j} e_k, e_l)
  std::vector<Jet> a;  // a_j = Im A_s(d_j)
};
SpinConnectionData spin_connection_data(const AlmostHermitianChart& chart, const Vec& p,
                                        int order = 2, int first_axis = 0);

// Sign of the induced anti-canonical connection form, pinned by the Dirac
// residual and the Fubini-Study wedge-identity calibration tests.
inline constexpr double kAnticanonicalSign = 1.0;

// Chern-Ricci 2-form iF_{A^Ch} = -d(Im A_s); values at p (and jets of order
// input-2 via the jet variant). On Kahler points this is the Ricci form.
TensorD chern_ricci_form(const AlmostHermitianChart& chart, const Vec& p);
TensorJ chern_ricci_form_jets(const AlmostHermitianChart& chart, const Vec& p, int order = 3);

// Pointwise residual of the wedge identity
// iF ^ omega^{m-1} = ((s+s*)/4m) omega^m, reduced to <iF,omega> = (s+s*)/4.
double chern_ricci_wedge_residual(const AlmostHermitianChart& chart, const Vec& p);

// Section 4 curvature components.
struct Section4Components {
  TensorD w_anti;          // W'': doubly J-anti-invariant curvature block (0,4)
  double norm2_w_anti = 0; // |W''|^2 with the (1/4) double-form contraction
  TensorD rho_star;        // twisted Ricci form R(omega)
  TensorD rho_star_anti;   // (rho*)''
  TensorD phi;             // phi(X,Y) = <nabla_{JX} omega, nabla_Y omega>
};
Section4Components section4_components(const AlmostHermitianChart& chart, const Vec& p);

// J-(anti-)invariant projections of a 2-form.
TensorD j_invariant_part(const TensorD& beta, const TensorD& jmat);
TensorD j_anti_invariant_part(const TensorD& beta, const TensorD& jmat);

struct LebrunResiduals {
  double eq400 = 0.0;  // | (1/2)|n.omega|^2 - W+(omega,omega) + s/3 |
  double eq401 = 0.0;  // pointwise-scalar reading of the second identity
  double eq500 = 0.0;  // value of 4|W+|^2 - 4|W+(omega)|^2 + (1/2)W+(omega,omega)^2
  std::optional<double> eq402;
};
LebrunResiduals lebrun_identity_residuals(const AlmostHermitianChart& chart, const Vec& p,
                                          bool want_eq402 = false);

struct SekigawaResidual {
  double residual = 0.0;
  double einstein_residual = 0.0;
  double lhs = 0.0;  // 8 delta<rho*, n.omega> - Lap |n.omega|^2
  double rhs = 0.0;  // 8|W''|^2 + 4|(rho*)''|^2 + |(n*n omega)'|^2 + |phi|^2 + (s/n)|n.omega|^2
};
// Precondition: the chart is Einstein at p (residual below tol), else throws
// StructureError reporting the Einstein residual.
SekigawaResidual sekigawa_apostolov_residual(const AlmostHermitianChart& chart, const Vec& p,
                                             double einstein_tol = 1e-8);

}  // namespace akmass
