#pragma once

#include <iosfwd>

#include "akmass/catalog.hpp"
#include "akmass/spinc.hpp"

namespace akmass {

// Anchor strings: the closed vocabulary tying every report record to the
// statement it verifies.
namespace anchor {
inline constexpr const char* identity_chain = "related by the following identity";
inline constexpr const char* fundamental_form = "whose fundamental two form";
inline constexpr const char* coordinates_at_infinity = "coordinates at infinity";
inline constexpr const char* mass_definition = "Euclidean coordinate sphere of radius";
inline constexpr const char* mass_formula = "has the mass given by";
inline constexpr const char* blair = "total Hermitian scalar curvature is";
inline constexpr const char* dirac_equals_dolbeault = "proved that on an almost";
inline constexpr const char* dirac_solves = "solves the Dirac equation";
inline constexpr const char* cl_omega_eigen = "is a -mi eigenspace";
inline constexpr const char* cl_omega_c2 = "c=2 when m=2";
inline constexpr const char* norm_equality = "pointwise equality of norms";
inline constexpr const char* lemma_boundary = "any bounded subset of";
inline constexpr const char* spinor_derivative = "computed according to the formula";
inline constexpr const char* clifford_action = "Clifford action of";
inline constexpr const char* witten_integrand = "eq 35";
inline constexpr const char* mass_via_theta = "the ADM mass is given by";
inline constexpr const char* wedge_identity = "Using the identity";
inline constexpr const char* compact_support = "closed 2-form with compact support";
inline constexpr const char* w_anti = "component of the curvature operator";
inline constexpr const char* twisted_ricci = "twisted Ricci form";
inline constexpr const char* phi_form = "a 2-form phi defined by";
inline constexpr const char* sekigawa = "The following relation holds";
inline constexpr const char* lebrun_identities = "the following identities";
inline constexpr const char* lebrun_dw = "Moreover if dW+=0";
inline constexpr const char* penrose = "the mass of the manifold then satisfies";
inline constexpr const char* coordinate_invariance = "independent of the choice of coordinates";
inline constexpr const char* star_scalar = "the star-scalar curvature";
inline constexpr const char* hermitian_scalar = "referred to in the almost Kahler literature as";
inline constexpr const char* compatible_metric = "symplectic manifold equipped with a compatible metric";
inline constexpr const char* chern_line = "distinguished a real affine line";
inline constexpr const char* adapted_basis = "One can infact choose";
}  // namespace anchor

struct CheckRecord {
  std::string check_id;
  std::string anchor;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  int samples = 0;
  long long ms = 0;
};

struct VerificationReport {
  std::vector<CheckRecord> records;
  bool overall_pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
  void add(std::string id, std::string anch, double residual, double tol, int samples,
           long long ms);
};

struct Tolerances {
  double pointwise = 1e-8;  // jet-exact pointwise identities
  double spinor = 1e-6;     // spinor / derived-connection identities
  double mass_rel = 0.01;   // integrated mass comparisons
};

struct RunConfig {
  std::string command;
  std::string metric = "euclidean";
  std::map<std::string, double> metric_params;
  std::uint64_t seed = 1;
  int samples = 20;
  std::vector<double> radii = {50, 100, 200, 400};
  int quadrature_degree = 20;
  double r_max = 40.0;
  Tolerances tol;
  std::string format = "csv";  // csv | json
  std::string output_path;    // empty = stdout
  bool timing = true;          // false zeroes the ms column for reproducible bytes
  int threads = 1;

  void validate() const;
};

// Minimal flat TOML reader: key = value with numbers, strings, booleans and
// arrays of numbers; '#' comments. Unknown keys are an error.
RunConfig load_config_toml(const std::string& path);

void emit_report_csv(const VerificationReport& rep, std::ostream& os);
void emit_report_json(const VerificationReport& rep, std::ostream& os);
void emit_mass_csv(const MassEstimate& est, std::ostream& os);
void emit_mass_json(const MassEstimate& est, std::ostream& os);
// path empty -> stdout; returns false on I/O failure.
bool emit_report(const VerificationReport& rep, const std::string& format,
                 const std::string& path);
bool emit_mass(const MassEstimate& est, const std::string& format, const std::string& path);

// Residual suites (the `verify identities` command): pointwise almost-Kahler
// and spin-c identities on `samples` seeded sample points.
VerificationReport identity_suite(const CatalogEntry& entry, int samples, std::uint64_t seed,
                                  const Tolerances& tol, bool timing);

}  // namespace akmass
