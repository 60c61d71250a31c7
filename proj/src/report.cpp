#include "akmass/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace akmass {

void VerificationReport::add(std::string id, std::string anch, double residual, double tol,
                             int samples, long long ms) {
  CheckRecord r;
  r.check_id = std::move(id);
  r.anchor = std::move(anch);
  r.max_residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  r.samples = samples;
  r.ms = ms;
  records.push_back(std::move(r));
}

void RunConfig::validate() const {
  if (tol.pointwise <= 0 || tol.spinor <= 0 || tol.mass_rel <= 0)
    throw UsageError("config: tolerances must be positive");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw UsageError("config: radii must be strictly increasing");
  if (format != "csv" && format != "json") throw UsageError("config: format must be csv or json");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> parse_number_array(const std::string& v) {
  std::vector<double> out;
  std::string body = trim(v);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw UsageError("config: expected [a, b, ...] array: " + v);
  std::stringstream ss(body.substr(1, body.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

RunConfig load_config_toml(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config: line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto unquote = [&val]() {
      if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
        return val.substr(1, val.size() - 2);
      return val;
    };
    if (key == "command") cfg.command = unquote();
    else if (key == "metric") cfg.metric = unquote();
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
    else if (key == "samples") cfg.samples = std::stoi(val);
    else if (key == "radii") cfg.radii = parse_number_array(val);
    else if (key == "quadrature_degree") cfg.quadrature_degree = std::stoi(val);
    else if (key == "r_max") cfg.r_max = std::stod(val);
    else if (key == "tol_pointwise") cfg.tol.pointwise = std::stod(val);
    else if (key == "tol_spinor") cfg.tol.spinor = std::stod(val);
    else if (key == "tol_mass_rel") cfg.tol.mass_rel = std::stod(val);
    else if (key == "format") cfg.format = unquote();
    else if (key == "output") cfg.output_path = unquote();
    else if (key == "timing") cfg.timing = (val == "true");
    else if (key == "threads") cfg.threads = std::stoi(val);
    else if (key.rfind("param_", 0) == 0) cfg.metric_params[key.substr(6)] = std::stod(val);
    else throw UsageError("config: unknown key '" + key + "'");
  }
  return cfg;
}

void emit_report_csv(const VerificationReport& rep, std::ostream& os) {
  os << "check_id,anchor,max_residual,tolerance,pass,samples,ms\n";
  for (const auto& r : rep.records) {
    os << r.check_id << ",\"" << r.anchor << "\"," << format_double(r.max_residual) << ","
       << format_double(r.tolerance) << "," << (r.pass ? "true" : "false") << "," << r.samples
       << "," << r.ms << "\n";
  }
}

void emit_report_json(const VerificationReport& rep, std::ostream& os) {
  os << "{\n  \"overall_pass\": " << (rep.overall_pass() ? "true" : "false")
     << ",\n  \"records\": [\n";
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    const auto& r = rep.records[i];
    os << "    {\"check_id\": \"" << r.check_id << "\", \"anchor\": \"" << r.anchor
       << "\", \"max_residual\": " << format_double(r.max_residual)
       << ", \"tolerance\": " << format_double(r.tolerance)
       << ", \"pass\": " << (r.pass ? "true" : "false") << ", \"samples\": " << r.samples
       << ", \"ms\": " << r.ms << "}" << (i + 1 < rep.records.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
}

void emit_mass_csv(const MassEstimate& est, std::ostream& os) {
  os << "radius,value,fit_residual\n";
  for (std::size_t i = 0; i < est.radii.size(); ++i) {
    double residual = est.values[i] - est.extrapolated;
    os << format_double(est.radii[i]) << "," << format_double(est.values[i]) << ","
       << format_double(residual) << "\n";
  }
  os << "extrapolated," << format_double(est.extrapolated) << ","
     << format_double(est.error_bar) << "\n";
}

void emit_mass_json(const MassEstimate& est, std::ostream& os) {
  os << "{\n  \"radii\": [";
  for (std::size_t i = 0; i < est.radii.size(); ++i)
    os << format_double(est.radii[i]) << (i + 1 < est.radii.size() ? ", " : "");
  os << "],\n  \"values\": [";
  for (std::size_t i = 0; i < est.values.size(); ++i)
    os << format_double(est.values[i]) << (i + 1 < est.values.size() ? ", " : "");
  os << "],\n  \"extrapolated\": " << format_double(est.extrapolated)
     << ",\n  \"fit_exponent\": " << format_double(est.fit_exponent)
     << ",\n  \"error_bar\": " << format_double(est.error_bar)
     << ",\n  \"monotone_ok\": " << (est.monotone_ok ? "true" : "false") << "\n}\n";
}

namespace {
bool emit_to(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty()) {
    writer(std::cout);
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path);
  if (!out) return false;
  writer(out);
  return static_cast<bool>(out);
}
}  // namespace

bool emit_report(const VerificationReport& rep, const std::string& format,
                 const std::string& path) {
  return emit_to(path, [&](std::ostream& os) {
    format == "json" ? emit_report_json(rep, os) : emit_report_csv(rep, os);
  });
}

bool emit_mass(const MassEstimate& est, const std::string& format, const std::string& path) {
  return emit_to(path, [&](std::ostream& os) {
    format == "json" ? emit_mass_json(est, os) : emit_mass_csv(est, os);
  });
}

VerificationReport identity_suite(const CatalogEntry& entry, int samples, std::uint64_t seed,
                                  const Tolerances& tol, bool timing) {
  if (!entry.ak)
    throw UsageError("identity suite: entry '" + entry.name + "' has no (g, J) structure");
  const AlmostHermitianChart& chart = *entry.ak;
  std::mt19937_64 rng(seed);
  std::vector<Vec> pts;
  pts.reserve(samples);
  int guard = 0;
  while (static_cast<int>(pts.size()) < samples) {
    Vec p = entry.sample_point(rng);
    if (chart.base.domain(p)) pts.push_back(p);
    if (++guard > 100 * samples) throw UsageError("identity suite: sampler rejected too often");
  }

  VerificationReport rep;
  auto timed = [&](auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    double r = fn();
    auto t1 = std::chrono::steady_clock::now();
    long long ms =
        timing ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() : 0;
    return std::pair<double, long long>(r, ms);
  };

  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) worst = std::max(worst, structure_residuals(chart, p).worst());
      return worst;
    });
    rep.add("structure_compatibility", anchor::fundamental_form, r, tol.pointwise, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) {
        NablaStructure ns = nabla_structure(chart, p);
        CurvaturePacket pk = curvature_packet(chart.base, p);
        TensorD omega = fundamental_form(chart, p);
        TensorD rom = curvature_operator_apply(pk.riemann, omega, pk.ginv);
        double s_star = 2.0 * form2_inner(rom, omega, pk.ginv);
        worst = std::max(worst, std::abs(s_star - pk.scalar - ns.norm2_omega_form));
      }
      return worst;
    });
    rep.add("star_scalar_identity", anchor::identity_chain, r, tol.pointwise, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) {
        NablaStructure ns = nabla_structure(chart, p);
        if (ns.norm2_j_full > 1e-14)
          worst = std::max(worst,
                           std::abs(ns.norm2_omega_form / ns.norm2_j_full - 0.5));
      }
      return worst;
    });
    rep.add("norm_convention_half", anchor::identity_chain, r, 1e-10, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) {
        ChernConnection cc = chern_connection(chart, p);
        worst = std::max(worst, std::max(cc.metric_residual, cc.j_residual));
      }
      return worst;
    });
    rep.add("chern_hermitian", anchor::chern_line, r, 1e-10, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) worst = std::max(worst, chern_ricci_wedge_residual(chart, p));
      return worst;
    });
    rep.add("chern_ricci_wedge", anchor::wedge_identity, r, tol.pointwise * 10, samples, ms);
  }
  if (entry.n == 4) {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) {
        LebrunResiduals lr = lebrun_identity_residuals(chart, p);
        worst = std::max(worst, lr.eq400);
        if (lr.eq500 < -1e-9) worst = std::max(worst, -lr.eq500);
      }
      return worst;
    });
    rep.add("lebrun_eq12_eq14", anchor::lebrun_identities, r, 1e-7, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) worst = std::max(worst, dirac_constant_spinor_residual(chart, p));
      return worst;
    });
    rep.add("dirac_psi0", anchor::dirac_solves, r, tol.spinor, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) worst = std::max(worst, norm_equality_gap(chart, p));
      return worst;
    });
    rep.add("norm_equality", anchor::norm_equality, r, 1e-7, samples, ms);
  }
  {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts) {
        Vec normal(entry.n, 0.0);
        double rr = 0.0;
        for (int i = 0; i < entry.n; ++i) rr += p[i] * p[i];
        rr = std::sqrt(rr);
        for (int i = 0; i < entry.n; ++i) normal[i] = rr > 1e-9 ? p[i] / rr : (i == 0);
        worst = std::max(worst, witten_integrand_identity_residual(chart, p, normal));
      }
      return worst;
    });
    rep.add("witten_integrand", anchor::witten_integrand, r, tol.spinor, samples, ms);
  }
  if (entry.known.einstein) {
    auto [r, ms] = timed([&]() {
      double worst = 0.0;
      for (const Vec& p : pts)
        worst = std::max(worst, sekigawa_apostolov_residual(chart, p).residual);
      return worst;
    });
    rep.add("sekigawa_apostolov", anchor::sekigawa, r, 1e-7, samples, ms);
  }
  return rep;
}

}  // namespace akmass
