#include <iostream>

#include "CLI11.hpp"
#include "akmass/report.hpp"

using namespace akmass;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::string metric = "euclidean";
  double param_n = 4, param_m = 2, param_a = 1, param_c = 1, param_tau = -1;
  std::uint64_t seed = 1;
  std::string config_path;
  std::string format = "csv";
  std::string output;
  bool timing = true;
};

void add_metric_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--metric", o.metric, "catalog metric name");
  cmd->add_option("--n", o.param_n, "dimension parameter (euclidean, sphere)");
  cmd->add_option("--m", o.param_m, "mass (schwarzschild) or complex dim (fubini_study)");
  cmd->add_option("--a", o.param_a, "Eguchi-Hanson scale");
  cmd->add_option("--c", o.param_c, "Burns potential parameter");
  cmd->add_option("--tau", o.param_tau, "random structure decay rate");
  cmd->add_option("--seed", o.seed, "random structure seed");
  cmd->add_option("--config", o.config_path, "TOML config file (flags override)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--output", o.output, "output path (default stdout)");
  cmd->add_flag("!--no-timing", o.timing, "zero the ms column for byte-reproducible output");
}

CatalogEntry entry_from(const CommonOpts& o) {
  std::map<std::string, double> params = {{"n", o.param_n}, {"m", o.param_m}, {"a", o.param_a},
                                          {"c", o.param_c}, {"tau", o.param_tau},
                                          {"seed", double(o.seed)}};
  return make_entry(o.metric, params);
}

RunConfig config_from(const CommonOpts& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = load_config_toml(o.config_path);
  cfg.metric = o.metric;
  cfg.format = o.format;
  cfg.output_path = o.output;
  cfg.timing = o.timing;
  cfg.seed = o.seed;
  return cfg;
}

std::vector<double> parse_radii(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise and asymptotic checks for almost-Kahler ALE mass identities"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string radii_csv = "50,100,200,400";
  int samples = 20;
  int degree = 20;
  double r_max = 40.0;
  std::string point_csv;
  std::string list_format = "csv";

  auto* cat = app.add_subcommand("catalog", "catalog operations");
  auto* cat_list = cat->add_subcommand("list", "list built-in metrics");
  cat_list->add_option("--format", list_format, "csv or json");

  auto* curv = app.add_subcommand("curvature", "curvature packet at a point");
  add_metric_opts(curv, o);
  curv->add_option("--point", point_csv, "comma-separated coordinates")->required();

  auto* verify = app.add_subcommand("verify", "verification suites");
  auto* verify_id = verify->add_subcommand("identities", "pointwise identity residual suite");
  add_metric_opts(verify_id, o);
  verify_id->add_option("--samples", samples, "sample points");

  auto* mass = app.add_subcommand("mass", "ADM boundary mass with radial extrapolation");
  add_metric_opts(mass, o);
  mass->add_option("--radii", radii_csv, "comma-separated radii");
  mass->add_option("--degree", degree, "sphere quadrature degree");

  auto* mf = app.add_subcommand("mass-formula", "two-sided mass formula check");
  add_metric_opts(mf, o);
  mf->add_option("--radii", radii_csv, "comma-separated radii");
  mf->add_option("--rmax", r_max, "bulk integration radius");
  mf->add_option("--degree", degree, "sphere quadrature degree");

  auto* blair = app.add_subcommand("blair", "compact total-Hermitian-scalar identity");
  add_metric_opts(blair, o);

  auto* penrose = app.add_subcommand("penrose", "Burns equality-case check");
  add_metric_opts(penrose, o);
  penrose->add_option("--radii", radii_csv, "comma-separated radii");
  penrose->add_option("--degree", degree, "sphere quadrature degree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*cat_list) {
      auto entries = builtin_entries();
      if (list_format == "json") {
        std::cout << "{\n  \"entries\": [\n";
        for (std::size_t i = 0; i < entries.size(); ++i) {
          const auto& e = entries[i];
          const char* st = e.structure == StructureFlag::kahler ? "kahler"
                           : e.structure == StructureFlag::almost_kahler_nonkahler
                               ? "almost_kahler_nonkahler"
                               : "metric_only";
          std::cout << "    {\"name\": \"" << e.name << "\", \"n\": " << e.n
                    << ", \"structure\": \"" << st << "\", \"compact\": "
                    << (e.compact ? "true" : "false") << "}"
                    << (i + 1 < entries.size() ? "," : "") << "\n";
        }
        std::cout << "  ]\n}\n";
      } else {
        std::cout << "name,n,structure,compact\n";
        for (const auto& e : entries) {
          const char* st = e.structure == StructureFlag::kahler ? "kahler"
                           : e.structure == StructureFlag::almost_kahler_nonkahler
                               ? "almost_kahler_nonkahler"
                               : "metric_only";
          std::cout << e.name << "," << e.n << "," << st << "," << (e.compact ? "true" : "false")
                    << "\n";
        }
      }
      return kExitPass;
    }

    if (*curv) {
      CatalogEntry e = entry_from(o);
      Vec p = parse_radii(point_csv);
      if (static_cast<int>(p.size()) != e.n)
        throw UsageError("curvature: point dimension does not match the metric");
      CurvaturePacket pk = curvature_packet(e.chart, p);
      std::cout << "{\n  \"scalar\": " << pk.scalar << ",\n  \"ricci\": [";
      for (int i = 0; i < e.n; ++i)
        for (int j = 0; j < e.n; ++j)
          std::cout << pk.ricci(i, j) << ((i == e.n - 1 && j == e.n - 1) ? "" : ", ");
      std::cout << "]\n}\n";
      return kExitPass;
    }

    if (*verify_id) {
      RunConfig cfg = config_from(o);
      cfg.validate();
      CatalogEntry e = entry_from(o);
      VerificationReport rep = identity_suite(e, samples, o.seed, cfg.tol, cfg.timing);
      if (!emit_report(rep, cfg.format, cfg.output_path)) return kExitNumerical;
      return rep.overall_pass() ? kExitPass : kExitCheckFailed;
    }

    if (*mass) {
      RunConfig cfg = config_from(o);
      cfg.validate();
      CatalogEntry e = entry_from(o);
      if (!e.end) throw UsageError("mass: metric '" + e.name + "' has no ALE end");
      MassEstimate est = adm_mass(*e.end, parse_radii(radii_csv), degree,
                                  thread_count_from_env());
      if (!emit_mass(est, cfg.format, cfg.output_path)) return kExitNumerical;
      if (e.known.expected_mass) {
        double want = *e.known.expected_mass;
        double scale = std::max(std::abs(want), 1e-3);
        return std::abs(est.extrapolated - want) <= cfg.tol.mass_rel * scale ? kExitPass
                                                                             : kExitCheckFailed;
      }
      return kExitPass;
    }

    if (*mf) {
      RunConfig cfg = config_from(o);
      cfg.validate();
      CatalogEntry e = entry_from(o);
      MassFormulaReport rep = mass_formula_check(e, parse_radii(radii_csv), r_max);
      std::cout << "{\n  \"lhs\": " << rep.lhs.extrapolated
                << ",\n  \"rhs_bulk\": " << rep.rhs_bulk_term
                << ",\n  \"rhs_topological\": " << rep.rhs_topological_term
                << ",\n  \"rhs\": " << rep.rhs << ",\n  \"discrepancy\": " << rep.discrepancy
                << ",\n  \"combined_error\": " << rep.combined_error << "\n}\n";
      double scale = std::max(std::abs(rep.lhs.extrapolated), 1e-3);
      return rep.discrepancy <= std::max(cfg.tol.mass_rel * scale, rep.combined_error)
                 ? kExitPass
                 : kExitCheckFailed;
    }

    if (*blair) {
      RunConfig cfg = config_from(o);
      CatalogEntry e = entry_from(o);
      BlairReport rep = blair_check(e);
      std::cout << "{\n  \"lhs\": " << rep.lhs << ",\n  \"rhs\": " << rep.rhs
                << ",\n  \"ratio\": " << rep.ratio << "\n}\n";
      bool pass = std::abs(rep.rhs) < 1e-9 ? std::abs(rep.lhs) < 1e-9
                                           : std::abs(rep.ratio - 1.0) < cfg.tol.mass_rel;
      return pass ? kExitPass : kExitCheckFailed;
    }

    if (*penrose) {
      RunConfig cfg = config_from(o);
      if (o.metric != "burns") throw UsageError("penrose: only the burns metric is supported");
      CatalogEntry e = entry_from(o);
      MassEstimate est = adm_mass(*e.end, parse_radii(radii_csv), degree);
      double area = burns_exceptional_area_oracle(o.param_c);
      double rhs = area / (3.0 * M_PI);
      std::cout << "{\n  \"mass\": " << est.extrapolated << ",\n  \"exceptional_area\": " << area
                << ",\n  \"area_over_3pi\": " << rhs << "\n}\n";
      return std::abs(est.extrapolated - rhs) <= cfg.tol.mass_rel * std::abs(rhs)
                 ? kExitPass
                 : kExitCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArithmeticDomainError& e) {
    std::cerr << "numerical domain error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const StructureError& e) {
    std::cerr << "structure error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
