#pragma once

#include <map>
#include <memory>
#include <random>

#include "akmass/ale_mass.hpp"

namespace akmass {

struct KnownData {
  std::optional<double> expected_mass;
  std::string mass_provenance;
  std::optional<double> c1_pairing;
  std::string pairing_provenance;
  bool einstein = false;
  bool scalar_flat = false;
};

struct IntegrationHint {
  enum class Kind { none, cohomogeneity_one, product_box, full_chart_rn };
  Kind kind = Kind::none;
  double r_inner = 1e-2;   // cohomogeneity_one / full_chart_rn
  double box_lo = 0.0, box_hi = 1.0;  // product_box
};

struct CatalogEntry {
  std::string name;
  int n = 0;
  StructureFlag structure = StructureFlag::metric_only;
  MetricChart chart;
  std::optional<AlmostHermitianChart> ak;
  std::optional<ALEEnd> end;
  KnownData known;
  IntegrationHint hint;
  bool compact = false;
  std::map<std::string, double> params;
  std::function<Vec(std::mt19937_64&)> sample_point;

  const AlmostHermitianChart& ak_chart() const {
    if (!ak) throw UsageError("entry '" + name + "' carries no almost-Hermitian structure");
    return *ak;
  }
};

// Chart builders.
MetricChart euclidean_chart(int n);
AlmostHermitianChart euclidean_kahler_chart(int n);
MetricChart sphere_stereographic_chart(int n);  // unit round S^n
MetricChart schwarzschild_slice_chart(double mass_param);

// U(m)-invariant Kahler chart on R^{2m} from the radial potential profile:
// h_{ab} = K1(rho) delta + K2(rho) zbar^a z^b with rho = |z|^2 and K2 = K1'.
// Supplying both profiles in closed form keeps the jets at full order.
AlmostHermitianChart radial_kahler_chart(int m, const std::string& name,
                                         const std::function<Jet(const Jet&)>& k1,
                                         const std::function<Jet(const Jet&)>& k2,
                                         double rho_min = 1e-6);

AlmostHermitianChart fubini_study_chart(int m);
AlmostHermitianChart eguchi_hanson_chart(double a);
AlmostHermitianChart burns_chart(double c);

// Pointwise polar-decomposition compatible pair: given h positive definite
// and the standard omega0, A is defined by omega0(u,v) = h(Au,v); then
// J = A(-A^2)^{-1/2} and g = omega0(., J .). The fundamental form of (g,J)
// is omega0 itself, so d omega = 0 exactly.
void polar_compatible_structure(const TensorJ& h, TensorJ& g_out, TensorJ& j_out);

// Seeded non-Kahler almost-Kahler structure on R^4 (trigonometric metric
// perturbations squeezed through the polar construction). decay_tau < 0
// means no radial envelope.
AlmostHermitianChart random_ak_chart(std::uint64_t seed, double decay_tau = -1.0);

// Exceptional-curve symplectic area of the Burns metric from the potential
// parameter, as the 1d limit pi * lim_{rho->0} rho K1(rho).
double burns_exceptional_area_oracle(double c);

std::vector<CatalogEntry> builtin_entries();
// Parameterized lookup: params may carry n, m, a, c, seed, tau.
CatalogEntry make_entry(const std::string& name, const std::map<std::string, double>& params);
std::vector<std::string> catalog_names();

}  // namespace akmass
