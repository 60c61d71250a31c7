#pragma once

#include "akmass/almost_kahler.hpp"
#include "akmass/quadrature.hpp"

namespace akmass {

struct CatalogEntry;  // catalog.hpp

// One ALE end in asymptotic coordinates: g_ij = delta_ij + a_ij with
// |d^p a_ij| = O(r^{-tau-p}), Gamma of order |Gamma| acting freely.
struct ALEEnd {
  MetricChart chart;  // asymptotic coordinate chart
  int n = 0;
  int gamma_order = 1;
  double tau = 1.0;
  double r0 = 1.0;  // coordinates valid for |x| > r0
  // Generator of the deck group as a matrix (empty when Gamma is trivial).
  std::optional<TensorD> gamma_generator;
};

struct ALEEndResiduals {
  double decay_sup = 0.0;          // sup over the sweep of |g_ij - delta_ij| r^tau
  double decay_growth = 0.0;       // largest-radius sup over smallest-radius sup
  double gamma_invariance = 0.0;   // max |integrand(x) - integrand(gamma x)|
};
// Empirical checks of the ALE invariants on a radius sweep.
ALEEndResiduals ale_end_residuals(const ALEEnd& end, int samples = 16);

// ADM normalization Gamma(n/2) / (4(n-1) pi^{n/2}); equals 1/(16 pi) at n=3,
// which is the calibration anchor (Schwarzschild slice integrates to m).
double adm_normalization(int n);

// Flux density at x: sum_j (d_i g_ij - d_j g_ii) nu_j against the Euclidean
// outward normal; integrated with the Euclidean area element.
double adm_flux_integrand(const ALEEnd& end, const Vec& x);

struct MassEstimate {
  std::vector<double> radii;
  std::vector<double> values;
  double extrapolated = 0.0;
  double fit_exponent = 0.0;
  double error_bar = 0.0;
  bool monotone_ok = true;  // fit-residual sanity flag
};

// Least-squares fit of a + b r^{-q} with free q (initialized at q0).
MassEstimate extrapolate_radial(const std::vector<double>& radii,
                                const std::vector<double>& values, double q0);

MassEstimate adm_mass(const ALEEnd& end, const std::vector<double>& radii, int degree = 20,
                      int threads = 1);

// Cohomogeneity-one potential theta with d theta = iF_{A^Ch} on the end:
// theta = q(r) eta with eta = x1 dx2 - x2 dx1 + x3 dx4 - x4 dx3, q from
// radial integration of the Chern-Ricci form along an axis ray.
struct ThetaProfile {
  std::function<double(double)> q;
  double dtheta_residual = 0.0;  // max |d theta - iF| over test simplices
};
ThetaProfile theta_potential(const CatalogEntry& entry, double r_check);

// Prop.-style boundary mass: lim (1/(2(2m-1) pi^m)) \int_{S_r/Gamma} theta ^ omega^{m-1}.
MassEstimate mass_via_theta(const CatalogEntry& entry, const std::vector<double>& radii,
                            int degree = 20);

struct BulkIntegral {
  double value = 0.0;  // tail-corrected
  double raw = 0.0;    // integral to r_max
  double tail = 0.0;
  double fit_exponent = 0.0;
  bool convergent = true;
};
BulkIntegral bulk_hermitian_integral(const CatalogEntry& entry, double r_max, int degree = 12,
                                     int radial_nodes = 64);

struct PairingResult {
  double value = 0.0;
  std::string strategy;  // "known" or "cutoff"
};
// <iota^{-1} c1, [omega]^{m-1}> via the known value or the cutoff
// representative: (1/2pi)[ \int_{r<=R} iF ^ omega^{m-1} - \oint_{S_R} theta ^ omega^{m-1} ].
PairingResult topological_pairing(const CatalogEntry& entry, bool force_numeric = false,
                                  int degree = 12);

struct MassFormulaReport {
  MassEstimate lhs;
  BulkIntegral bulk;
  PairingResult pairing;
  double rhs_bulk_term = 0.0;
  double rhs_topological_term = 0.0;
  double rhs = 0.0;
  double discrepancy = 0.0;
  double combined_error = 0.0;
};
MassFormulaReport mass_formula_check(const CatalogEntry& entry, const std::vector<double>& radii,
                                     double r_max, int degree = 12);

struct BlairReport {
  double lhs = 0.0;   // total Hermitian scalar curvature
  double rhs = 0.0;   // (4 pi/(m-1)!) <c1, [omega]^{m-1}>
  double ratio = 1.0;
  double pairing = 0.0;
};
BlairReport blair_check(const CatalogEntry& entry, int degree = 12, int radial_nodes = 96);

// Integral of an (n-1)-form lambda over the coordinate sphere of radius r,
// where lambda is produced pointwise as the array of flux components
// lambda^j = (-1)^{j-1} (component omitting dx^j).
double sphere_flux_integral(int n, double r, const SphereQuadrature& quad,
                            const std::function<void(const Vec&, Vec&)>& flux, int gamma_order,
                            int threads = 1);

// Flux components of theta ^ omega^{m-1} at a point (theta a 1-form, omega a
// 2-form, both in coordinates).
void wedge_theta_omega_flux(const TensorD& theta, const TensorD& omega, Vec& flux_out);
// Top component of beta ^ omega^{m-1} (an n-form) against dx^1...dx^n.
double wedge_two_omega_top(const TensorD& beta, const TensorD& omega);

}  // namespace akmass
