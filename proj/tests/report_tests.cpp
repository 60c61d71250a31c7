#include "akmass/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"

using namespace akmass;

TEST_CASE("CSV report schema") {
  VerificationReport rep;
  std::ostringstream os;
  emit_report_csv(rep, os);
  CHECK(os.str() == "check_id,anchor,max_residual,tolerance,pass,samples,ms\n");

  rep.add("demo", anchor::identity_chain, 2.0, 1.0, 7, 0);
  std::ostringstream os2;
  emit_report_csv(rep, os2);
  std::string line2 = os2.str().substr(os2.str().find('\n') + 1);
  CHECK(line2 == "demo,\"related by the following identity\",2,1,false,7,0\n");
  CHECK(!rep.overall_pass());
}

TEST_CASE("JSON report mirrors the CSV fields") {
  VerificationReport rep;
  rep.add("a", anchor::blair, 0.5, 1.0, 3, 2);
  std::ostringstream os;
  emit_report_json(rep, os);
  std::string s = os.str();
  CHECK(s.find("\"overall_pass\": true") != std::string::npos);
  CHECK(s.find("\"check_id\": \"a\"") != std::string::npos);
  CHECK(s.find("\"max_residual\": 0.5") != std::string::npos);
  CHECK(s.find("\"samples\": 3") != std::string::npos);
}

TEST_CASE("mass convergence table schema") {
  MassEstimate est;
  est.radii = {10, 20, 40, 80};
  est.values = {1.1, 1.05, 1.02, 1.01};
  est.extrapolated = 1.0;
  est.error_bar = 0.01;
  std::ostringstream os;
  emit_mass_csv(est, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "radius,value,fit_residual");
  int rows = 0;
  bool summary = false;
  while (std::getline(is, line)) {
    if (line.rfind("extrapolated,", 0) == 0) summary = true;
    else ++rows;
  }
  CHECK(rows == 4);
  CHECK(summary);
}

TEST_CASE("TOML subset config round trip") {
  const char* path = "report_tests_config.toml";
  {
    std::ofstream f(path);
    f << "# reproducibility artifact\n";
    f << "metric = \"burns\"\n";
    f << "seed = 9\n";
    f << "samples = 33\n";
    f << "radii = [10, 20, 40]\n";
    f << "quadrature_degree = 14\n";
    f << "tol_pointwise = 1e-9\n";
    f << "format = \"json\"\n";
    f << "timing = false\n";
    f << "param_c = 2.5\n";
  }
  RunConfig cfg = load_config_toml(path);
  CHECK(cfg.metric == "burns");
  CHECK(cfg.seed == 9);
  CHECK(cfg.samples == 33);
  CHECK(cfg.radii == std::vector<double>{10, 20, 40});
  CHECK(cfg.quadrature_degree == 14);
  CHECK(cfg.tol.pointwise == 1e-9);
  CHECK(cfg.format == "json");
  CHECK(cfg.timing == false);
  CHECK(cfg.metric_params.at("c") == 2.5);
  cfg.validate();
  std::remove(path);
}

TEST_CASE("config validation rejects bad input") {
  RunConfig cfg;
  cfg.radii = {10, 10};
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg.radii = {10, 20};
  cfg.tol.pointwise = -1;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  CHECK_THROWS_AS(load_config_toml("/nonexistent/path.toml"), UsageError);
}

TEST_CASE("identity suite passes on flat space and is byte-deterministic") {
  CatalogEntry e = make_entry("euclidean", {{"n", 4.0}});
  Tolerances tol;
  VerificationReport r1 = identity_suite(e, 5, 77, tol, false);
  VerificationReport r2 = identity_suite(e, 5, 77, tol, false);
  CHECK(r1.overall_pass());
  std::ostringstream o1, o2;
  emit_report_csv(r1, o1);
  emit_report_csv(r2, o2);
  CHECK(o1.str() == o2.str());
}

TEST_CASE("record anchors come from the closed vocabulary") {
  const std::vector<std::string> allowed = {
      anchor::identity_chain,     anchor::fundamental_form, anchor::coordinates_at_infinity,
      anchor::mass_definition,    anchor::mass_formula,     anchor::blair,
      anchor::dirac_equals_dolbeault, anchor::dirac_solves, anchor::cl_omega_eigen,
      anchor::cl_omega_c2,        anchor::norm_equality,    anchor::lemma_boundary,
      anchor::spinor_derivative,  anchor::clifford_action,  anchor::witten_integrand,
      anchor::mass_via_theta,     anchor::wedge_identity,   anchor::compact_support,
      anchor::w_anti,             anchor::twisted_ricci,    anchor::phi_form,
      anchor::sekigawa,           anchor::lebrun_identities, anchor::lebrun_dw,
      anchor::penrose,            anchor::coordinate_invariance, anchor::star_scalar,
      anchor::hermitian_scalar,   anchor::compatible_metric, anchor::chern_line,
      anchor::adapted_basis};
  CatalogEntry e = make_entry("eguchi_hanson", {});
  VerificationReport rep = identity_suite(e, 3, 5, Tolerances{}, false);
  for (const auto& rec : rep.records) {
    bool found = false;
    for (const auto& a : allowed)
      if (rec.anchor == a) found = true;
    CAPTURE(rec.anchor);
    CHECK(found);
  }
}

TEST_CASE("identity suite flags violated tolerances") {
  CatalogEntry e = make_entry("random_ak", {{"seed", 2.0}});
  Tolerances absurd;
  absurd.pointwise = 1e-30;
  VerificationReport rep = identity_suite(e, 2, 3, absurd, false);
  CHECK(!rep.overall_pass());
}
