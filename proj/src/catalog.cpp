#include "akmass/catalog.hpp"

#include <cmath>

namespace akmass {

namespace {

Jet radius2_jet(const JetContext& ctx) {
  Jet r2 = lift_constant(ctx, 0.0);
  for (int i = 0; i < ctx.dim; ++i) {
    Jet x = lift_coordinate(ctx, i);
    r2 += x * x;
  }
  return r2;
}

double radius(const Vec& p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

Vec box_sampler(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec p(n);
  for (double& x : p) x = u(rng);
  return p;
}

Vec annulus_sampler(std::mt19937_64& rng, int n, double rlo, double rhi) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    Vec p(n);
    double r2 = 0.0;
    for (double& x : p) {
      x = u(rng);
      r2 += x * x;
    }
    double r = std::sqrt(r2);
    if (r < 1e-6) continue;
    std::uniform_real_distribution<double> ur(rlo, rhi);
    double want = ur(rng);
    for (double& x : p) x *= want / r;
    return p;
  }
}

}  // namespace

MetricChart euclidean_chart(int n) {
  MetricChart c;
  c.n = n;
  c.name = "euclidean";
  c.components = [n](const JetContext& ctx, TensorJ& g) {
    g = TensorJ(n, 2, lift_constant(ctx, 0.0));
    for (int i = 0; i < n; ++i) g(i, i) = lift_constant(ctx, 1.0);
  };
  return c;
}

AlmostHermitianChart euclidean_kahler_chart(int n) {
  if (n % 2 != 0) throw UsageError("euclidean_kahler_chart: n must be even");
  AlmostHermitianChart c;
  c.base = euclidean_chart(n);
  c.flag = StructureFlag::kahler;
  c.complex_structure = [n](const JetContext& ctx, TensorJ& j) {
    j = TensorJ(n, 2, lift_constant(ctx, 0.0));
    for (int a = 0; a < n / 2; ++a) {
      j(2 * a + 1, 2 * a) = lift_constant(ctx, 1.0);
      j(2 * a, 2 * a + 1) = lift_constant(ctx, -1.0);
    }
  };
  return c;
}

MetricChart sphere_stereographic_chart(int n) {
  MetricChart c;
  c.n = n;
  c.name = "sphere";
  c.components = [n](const JetContext& ctx, TensorJ& g) {
    Jet conf = 2.0 / (radius2_jet(ctx) + 1.0);
    Jet c2 = conf * conf;
    g = TensorJ(n, 2, lift_constant(ctx, 0.0));
    for (int i = 0; i < n; ++i) g(i, i) = c2;
  };
  return c;
}

MetricChart schwarzschild_slice_chart(double mass_param) {
  MetricChart c;
  c.n = 3;
  c.name = "schwarzschild";
  c.components = [mass_param](const JetContext& ctx, TensorJ& g) {
    Jet r = sqrt(radius2_jet(ctx));
    Jet u = 1.0 + (mass_param / 2.0) / r;
    Jet u2 = u * u;
    Jet u4 = u2 * u2;
    g = TensorJ(3, 2, lift_constant(ctx, 0.0));
    for (int i = 0; i < 3; ++i) g(i, i) = u4;
  };
  c.domain = [mass_param](const Vec& p) { return radius(p) > 0.05 * std::max(1.0, mass_param); };
  return c;
}

AlmostHermitianChart radial_kahler_chart(int m, const std::string& name,
                                         const std::function<Jet(const Jet&)>& k1,
                                         const std::function<Jet(const Jet&)>& k2,
                                         double rho_min) {
  int n = 2 * m;
  AlmostHermitianChart c;
  c.base.n = n;
  c.base.name = name;
  c.flag = StructureFlag::kahler;
  c.base.domain = [rho_min](const Vec& p) {
    double r = radius(p);
    return r * r > rho_min;
  };
  c.base.components = [n, m, k1, k2](const JetContext& ctx, TensorJ& g) {
    Jet rho = radius2_jet(ctx);
    Jet a1 = k1(rho), a2 = k2(rho);
    std::vector<Jet> x(n);
    for (int i = 0; i < n; ++i) x[i] = lift_coordinate(ctx, i);
    g = TensorJ(n, 2, lift_constant(ctx, 0.0));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        // zbar^a z^b = (x_{2a} - i x_{2a+1})(x_{2b} + i x_{2b+1})
        Jet re = x[2 * a] * x[2 * b] + x[2 * a + 1] * x[2 * b + 1];
        Jet im = x[2 * a] * x[2 * b + 1] - x[2 * a + 1] * x[2 * b];
        Jet A = a2 * re;
        if (a == b) A += a1;
        Jet B = a2 * im;
        g(2 * a, 2 * b) = A;
        g(2 * a + 1, 2 * b + 1) = A;
        g(2 * a, 2 * b + 1) = B;
        g(2 * b + 1, 2 * a) = B;
      }
  };
  c.complex_structure = [n](const JetContext& ctx, TensorJ& j) {
    j = TensorJ(n, 2, lift_constant(ctx, 0.0));
    for (int a = 0; a < n / 2; ++a) {
      j(2 * a + 1, 2 * a) = lift_constant(ctx, 1.0);
      j(2 * a, 2 * a + 1) = lift_constant(ctx, -1.0);
    }
  };
  return c;
}

AlmostHermitianChart fubini_study_chart(int m) {
  auto k1 = [](const Jet& rho) { return 1.0 / (rho + 1.0); };
  auto k2 = [](const Jet& rho) {
    Jet d = rho + 1.0;
    return -1.0 / (d * d);
  };
  AlmostHermitianChart c = radial_kahler_chart(m, "fubini_study", k1, k2, -1.0);
  c.base.domain = [](const Vec&) { return true; };
  return c;
}

AlmostHermitianChart eguchi_hanson_chart(double a) {
  double a4 = a * a * a * a;
  auto k1 = [a4](const Jet& rho) { return sqrt(rho * rho + a4) / rho; };
  auto k2 = [a4](const Jet& rho) {
    Jet u = sqrt(rho * rho + a4);
    return -a4 / (u * rho * rho);
  };
  return radial_kahler_chart(2, "eguchi_hanson", k1, k2, 1e-4 * a * a);
}

AlmostHermitianChart burns_chart(double c) {
  auto k1 = [c](const Jet& rho) { return 1.0 + c / rho; };
  auto k2 = [c](const Jet& rho) { return -c / (rho * rho); };
  return radial_kahler_chart(2, "burns", k1, k2, 1e-4);
}

void polar_compatible_structure(const TensorJ& h, TensorJ& g_out, TensorJ& j_out) {
  int n = h.n();
  if (n % 2 != 0) throw UsageError("polar_compatible_structure: n must be even");
  int dim = h(0, 0).dim();
  int order = h(0, 0).order();
  TensorD omega0(n, 2, 0.0);
  for (int a = 0; a < n / 2; ++a) {
    omega0(2 * a, 2 * a + 1) = 1.0;
    omega0(2 * a + 1, 2 * a) = -1.0;
  }
  // A = -H^{-1} omega0 (so that omega0(u,v) = h(Au,v)).
  TensorJ hinv = jet_matrix_inverse(h);
  TensorJ amat(n, 2, Jet::constant(dim, order, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(dim, order, 0.0);
      for (int k = 0; k < n; ++k)
        if (omega0(k, j) != 0.0) s += hinv(i, k) * omega0(k, j);
      amat(i, j) = -s;
    }
  TensorJ s2(n, 2, Jet::constant(dim, order, 0.0));  // -A^2
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(dim, order, 0.0);
      for (int k = 0; k < n; ++k) s += amat(i, k) * amat(k, j);
      s2(i, j) = -s;
    }
  TensorJ sq, isq;
  jet_sqrt_and_inverse_sqrt(s2, sq, isq);
  j_out = TensorJ(n, 2, Jet::constant(dim, order, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(dim, order, 0.0);
      for (int k = 0; k < n; ++k) s += amat(i, k) * isq(k, j);
      j_out(i, j) = s;
    }
  // g_ij = omega0(e_i, J e_j)
  g_out = TensorJ(n, 2, Jet::constant(dim, order, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(dim, order, 0.0);
      for (int k = 0; k < n; ++k)
        if (omega0(i, k) != 0.0) s += omega0(i, k) * j_out(k, j);
      g_out(i, j) = s;
    }
}

namespace {

struct TrigTerm {
  TensorD shape;  // symmetric 4x4
  Vec freq;
  double phase;
};

std::vector<TrigTerm> random_terms(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed * 6364136223846793005ull + 1442695040888963407ull);
  std::uniform_real_distribution<double> uamp(-1.0, 1.0);
  std::uniform_real_distribution<double> ufreq(0.25, 1.1);
  std::uniform_real_distribution<double> uphase(0.0, 6.28318530717958648);
  int terms = 5;
  std::vector<TrigTerm> out(terms);
  double total = 0.0;
  for (auto& t : out) {
    t.shape = TensorD(n, 2, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double v = uamp(rng);
        t.shape(i, j) = v;
        t.shape(j, i) = v;
      }
    t.freq.resize(n);
    for (double& f : t.freq) f = ufreq(rng);
    t.phase = uphase(rng);
    double norm = 0.0;
    for (std::size_t k = 0; k < t.shape.size(); ++k) norm += t.shape[k] * t.shape[k];
    total += std::sqrt(norm);
  }
  double scale = 0.22 / total;
  for (auto& t : out)
    for (std::size_t k = 0; k < t.shape.size(); ++k) t.shape[k] *= scale;
  return out;
}

TensorJ random_h_jets(const std::vector<TrigTerm>& terms, double decay_tau,
                      const JetContext& ctx) {
  int n = ctx.dim;
  TensorJ h(n, 2, lift_constant(ctx, 0.0));
  for (int i = 0; i < n; ++i) h(i, i) = lift_constant(ctx, 1.0);
  Jet env = lift_constant(ctx, 1.0);
  if (decay_tau > 0.0) env = pow(radius2_jet(ctx) + 1.0, -(1.0 + decay_tau) / 2.0);
  for (const auto& t : terms) {
    Jet arg = lift_constant(ctx, t.phase);
    for (int i = 0; i < n; ++i) arg += t.freq[i] * lift_coordinate(ctx, i);
    Jet osc = cos(arg) * env;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (t.shape(i, j) != 0.0) h(i, j) += t.shape(i, j) * osc;
  }
  return h;
}

}  // namespace

AlmostHermitianChart random_ak_chart(std::uint64_t seed, double decay_tau) {
  int n = 4;
  auto terms = std::make_shared<std::vector<TrigTerm>>(random_terms(seed, n));
  AlmostHermitianChart c;
  c.base.n = n;
  c.base.name = "random_ak";
  c.flag = StructureFlag::almost_kahler_nonkahler;
  c.base.components = [terms, decay_tau, n](const JetContext& ctx, TensorJ& g) {
    TensorJ h = random_h_jets(*terms, decay_tau, ctx);
    TensorJ j(n, 2);
    polar_compatible_structure(h, g, j);
  };
  c.complex_structure = [terms, decay_tau, n](const JetContext& ctx, TensorJ& j) {
    TensorJ h = random_h_jets(*terms, decay_tau, ctx);
    TensorJ g(n, 2);
    polar_compatible_structure(h, g, j);
  };
  return c;
}

double burns_exceptional_area_oracle(double c) {
  // area = pi * lim_{rho->0} rho K1(rho), Richardson-extrapolated in rho.
  auto f = [c](double rho) { return rho * (1.0 + c / rho); };
  double r1 = f(1e-3), r2 = f(1e-4);
  double lim = r2 + (r2 - r1) / 9.0;  // one Richardson step for O(rho) error
  return M_PI * lim;
}

namespace {

CatalogEntry base_entry(const std::string& name, int n) {
  CatalogEntry e;
  e.name = name;
  e.n = n;
  return e;
}

}  // namespace

CatalogEntry make_entry(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double def) {
    auto it = params.find(key);
    return it == params.end() ? def : it->second;
  };
  if (name == "euclidean") {
    int n = static_cast<int>(get("n", 4));
    CatalogEntry e = base_entry(name, n);
    e.chart = euclidean_chart(n);
    if (n % 2 == 0) {
      e.ak = euclidean_kahler_chart(n);
      e.structure = StructureFlag::kahler;
    }
    e.end = ALEEnd{e.chart, n, 1, double(n), 1.0, {}};
    e.known.expected_mass = 0.0;
    e.known.mass_provenance = "flat space";
    e.known.c1_pairing = 0.0;
    e.known.pairing_provenance = "flat space";
    e.known.einstein = true;
    e.known.scalar_flat = true;
    e.hint.kind = IntegrationHint::Kind::cohomogeneity_one;
    e.hint.r_inner = 1e-2;
    e.params["n"] = n;
    e.sample_point = [n](std::mt19937_64& rng) { return box_sampler(rng, n, -2.0, 2.0); };
    return e;
  }
  if (name == "sphere") {
    int n = static_cast<int>(get("n", 2));
    CatalogEntry e = base_entry(name, n);
    e.chart = sphere_stereographic_chart(n);
    e.structure = StructureFlag::metric_only;
    e.known.einstein = true;
    e.params["n"] = n;
    e.sample_point = [n](std::mt19937_64& rng) { return box_sampler(rng, n, -1.5, 1.5); };
    return e;
  }
  if (name == "flat_torus") {
    CatalogEntry e = base_entry(name, 4);
    e.chart = euclidean_chart(4);
    e.ak = euclidean_kahler_chart(4);
    e.structure = StructureFlag::kahler;
    e.compact = true;
    e.known.einstein = true;
    e.known.scalar_flat = true;
    e.known.c1_pairing = 0.0;
    e.known.pairing_provenance = "flat torus: c1 = 0";
    e.hint.kind = IntegrationHint::Kind::product_box;
    e.hint.box_lo = 0.0;
    e.hint.box_hi = 2.0 * M_PI;
    e.sample_point = [](std::mt19937_64& rng) { return box_sampler(rng, 4, 0.0, 6.28); };
    return e;
  }
  if (name == "schwarzschild") {
    double m = get("m", 2.0);
    CatalogEntry e = base_entry(name, 3);
    e.chart = schwarzschild_slice_chart(m);
    e.structure = StructureFlag::metric_only;
    e.known.expected_mass = m;
    e.known.mass_provenance = "closed-form flux of the conformally flat slice: m(1+m/2r)^3 -> m";
    e.known.scalar_flat = true;
    e.end = ALEEnd{e.chart, 3, 1, 1.0, 2.0 * m, {}};
    e.params["m"] = m;
    e.sample_point = [m](std::mt19937_64& rng) {
      return annulus_sampler(rng, 3, 0.8 * std::max(1.0, m), 4.0 * std::max(1.0, m));
    };
    return e;
  }
  if (name == "eguchi_hanson") {
    double a = get("a", 1.0);
    CatalogEntry e = base_entry(name, 4);
    e.ak = eguchi_hanson_chart(a);
    e.chart = e.ak->base;
    e.structure = StructureFlag::kahler;
    e.known.expected_mass = 0.0;
    e.known.mass_provenance = "hyperkahler ALE has zero mass; also forced by the mass formula "
                              "with s = s* = 0 and zero c1 pairing";
    e.known.c1_pairing = 0.0;
    e.known.pairing_provenance = "Chern-Ricci form vanishes pointwise (Ricci-flat Kahler)";
    e.known.einstein = true;
    e.known.scalar_flat = true;
    e.end = ALEEnd{e.chart, 4, 2, 4.0, 3.0 * a, {}};
    TensorD minus_id(4, 2, 0.0);
    for (int i = 0; i < 4; ++i) minus_id(i, i) = -1.0;
    e.end->gamma_generator = minus_id;
    e.hint.kind = IntegrationHint::Kind::cohomogeneity_one;
    e.hint.r_inner = 0.05 * a;
    e.params["a"] = a;
    e.sample_point = [a](std::mt19937_64& rng) {
      return annulus_sampler(rng, 4, 0.7 * a, 4.0 * a);
    };
    return e;
  }
  if (name == "burns") {
    double c = get("c", 1.0);
    CatalogEntry e = base_entry(name, 4);
    e.ak = burns_chart(c);
    e.chart = e.ak->base;
    e.structure = StructureFlag::kahler;
    e.known.expected_mass = c / 3.0;
    e.known.mass_provenance = "Penrose equality for scalar-flat Kahler: mass = area/(3 pi), "
                              "area = pi c from the 1d potential limit";
    e.known.c1_pairing = -M_PI * c;
    e.known.pairing_provenance = "minus the exceptional-curve area pi c";
    e.known.einstein = false;
    e.known.scalar_flat = true;
    e.end = ALEEnd{e.chart, 4, 1, 2.0, 5.0 * std::sqrt(std::max(1.0, c)), {}};
    e.hint.kind = IntegrationHint::Kind::cohomogeneity_one;
    e.hint.r_inner = 0.05;
    e.params["c"] = c;
    e.sample_point = [](std::mt19937_64& rng) { return annulus_sampler(rng, 4, 0.7, 4.0); };
    return e;
  }
  if (name == "fubini_study") {
    int m = static_cast<int>(get("m", 2));
    CatalogEntry e = base_entry(name, 2 * m);
    e.ak = fubini_study_chart(m);
    e.chart = e.ak->base;
    e.structure = StructureFlag::kahler;
    e.compact = true;
    e.known.einstein = true;
    e.hint.kind = IntegrationHint::Kind::full_chart_rn;
    e.params["m"] = m;
    e.sample_point = [m](std::mt19937_64& rng) { return box_sampler(rng, 2 * m, -1.2, 1.2); };
    return e;
  }
  if (name == "random_ak") {
    std::uint64_t seed = static_cast<std::uint64_t>(get("seed", 1));
    double tau = get("tau", -1.0);
    CatalogEntry e = base_entry(name, 4);
    e.ak = random_ak_chart(seed, tau);
    e.chart = e.ak->base;
    e.structure = StructureFlag::almost_kahler_nonkahler;
    e.params["seed"] = static_cast<double>(seed);
    e.params["tau"] = tau;
    e.sample_point = [](std::mt19937_64& rng) { return box_sampler(rng, 4, -1.5, 1.5); };
    return e;
  }
  throw UsageError("unknown catalog metric '" + name + "'; valid: euclidean, sphere, flat_torus, "
                   "schwarzschild, eguchi_hanson, burns, fubini_study, random_ak");
}

std::vector<std::string> catalog_names() {
  return {"euclidean", "sphere", "flat_torus", "schwarzschild",
          "eguchi_hanson", "burns", "fubini_study", "random_ak"};
}

std::vector<CatalogEntry> builtin_entries() {
  std::vector<CatalogEntry> out;
  for (int n : {3, 4, 6}) out.push_back(make_entry("euclidean", {{"n", double(n)}}));
  for (int n : {2, 3, 4}) out.push_back(make_entry("sphere", {{"n", double(n)}}));
  out.push_back(make_entry("flat_torus", {}));
  out.push_back(make_entry("schwarzschild", {{"m", 2.0}}));
  out.push_back(make_entry("eguchi_hanson", {{"a", 1.0}}));
  out.push_back(make_entry("burns", {{"c", 1.0}}));
  out.push_back(make_entry("fubini_study", {{"m", 1.0}}));
  out.push_back(make_entry("fubini_study", {{"m", 2.0}}));
  return out;
}

}  // namespace akmass
