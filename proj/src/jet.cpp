#include "akmass/jet.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace akmass {

namespace {

std::uint32_t pack_key(const MultiIndex& mi, int dim) {
  std::uint32_t k = 0;
  for (int i = 0; i < dim; ++i) k |= static_cast<std::uint32_t>(mi[i] & 0x3u) << (2 * i);
  return k;
}

void enumerate_degree(int dim, int deg, int var, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (var == dim - 1) {
    cur[var] = static_cast<std::uint8_t>(deg);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = deg; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate_degree(dim, deg - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

JetSpace::JetSpace(int dim, int order) : dim_(dim), order_(order) {
  MultiIndex cur{};
  for (int d = 0; d <= order; ++d) enumerate_degree(dim, d, 0, cur, exps_);
  deg_.resize(exps_.size());
  lookup_.assign(std::size_t{1} << (2 * dim), -1);
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    int d = 0;
    for (int v = 0; v < dim; ++v) d += exps_[i][v];
    deg_[i] = d;
    lookup_[pack_key(exps_[i], dim)] = static_cast<int>(i);
  }
  for (int a = 0; a < size(); ++a) {
    for (int b = 0; b < size(); ++b) {
      if (deg_[a] + deg_[b] > order) continue;
      MultiIndex sum{};
      for (int v = 0; v < dim; ++v) sum[v] = static_cast<std::uint8_t>(exps_[a][v] + exps_[b][v]);
      prod_.push_back({a, b, index_of(sum)});
    }
  }
}

int JetSpace::index_of(const MultiIndex& mi) const {
  int d = 0;
  for (int v = 0; v < dim_; ++v) {
    if (mi[v] > 3) return -1;
    d += mi[v];
  }
  if (d > order_) return -1;
  return lookup_[pack_key(mi, dim_)];
}

const JetSpace& JetSpace::get(int dim, int order) {
  if (dim < 1 || dim > kMaxVars) throw UsageError("JetSpace: dim out of range");
  if (order < 0 || order > kMaxJetOrder) throw UsageError("JetSpace: order out of range");
  static std::mutex mu;
  static std::map<std::pair<int, int>, const JetSpace*> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = registry.find(key);
  if (it == registry.end()) it = registry.emplace(key, new JetSpace(dim, order)).first;
  return *it->second;
}

Jet Jet::constant(int dim, int order, double v) {
  Jet j(&JetSpace::get(dim, order));
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(int dim, int order, int var, double base_value) {
  if (var < 0 || var >= dim) throw UsageError("Jet::variable: index out of range");
  Jet j(&JetSpace::get(dim, order));
  j.c_[0] = base_value;
  if (order >= 1) {
    MultiIndex mi{};
    mi[var] = 1;
    j.c_[j.space_->index_of(mi)] = 1.0;
  }
  return j;
}

double Jet::deriv(const MultiIndex& mi) const {
  int idx = space_->index_of(mi);
  if (idx < 0) throw UsageError("Jet::deriv: derivative order exceeds jet order");
  double fact = 1.0;
  for (int v = 0; v < dim(); ++v)
    for (int e = 2; e <= mi[v]; ++e) fact *= e;
  return c_[idx] * fact;
}

double Jet::deriv(std::initializer_list<int> vars) const {
  MultiIndex mi{};
  for (int v : vars) {
    if (v < 0 || v >= dim()) throw UsageError("Jet::deriv: variable out of range");
    mi[v]++;
  }
  return deriv(mi);
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  Jet r(&JetSpace::get(dim(), new_order));
  std::memcpy(r.c_.data(), c_.data(), sizeof(double) * r.c_.size());
  return r;
}

Jet Jet::derivative(int var) const {
  if (order() == 0) throw UsageError("Jet::derivative: order-0 jet");
  if (var < 0 || var >= dim()) throw UsageError("Jet::derivative: variable out of range");
  Jet r(&JetSpace::get(dim(), order() - 1));
  const JetSpace& rs = *r.space_;
  for (int i = 0; i < rs.size(); ++i) {
    MultiIndex src = rs.exponent(i);
    src[var]++;
    r.c_[i] = c_[space_->index_of(src)] * static_cast<double>(src[var]);
  }
  return r;
}

const JetSpace* Jet::common_space(const Jet& a, const Jet& b) {
  if (!a.valid() || !b.valid()) throw UsageError("jet arithmetic on empty jet");
  if (a.dim() != b.dim()) throw UsageError("jet arithmetic: dimension mismatch");
  int o = std::min(a.order(), b.order());
  return &JetSpace::get(a.dim(), o);
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& x : r.c_) x = -x;
  return r;
}

Jet& Jet::operator+=(const Jet& o) { return *this = *this + o; }
Jet& Jet::operator-=(const Jet& o) { return *this = *this - o; }
Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r(Jet::common_space(a, b));
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r(Jet::common_space(a, b));
  for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(Jet::common_space(a, b));
  for (const auto& t : r.space_->product_terms()) r.c_[t.dst] += a.c_[t.a] * b.c_[t.b];
  return r;
}

Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.c_[0] += s;
  return r;
}

Jet operator*(const Jet& a, double s) {
  Jet r = a;
  for (double& x : r.c_) x *= s;
  return r;
}

Jet Jet::compose(const Jet& a, const std::array<double, 4>& f) {
  // f applied to a: f0 + f1*h + f2/2 h^2 + f3/6 h^3 with h = a - a0.
  Jet h = a;
  h.c_[0] = 0.0;
  Jet r = a;
  std::fill(r.c_.begin(), r.c_.end(), 0.0);
  r.c_[0] = f[0];
  if (a.order() >= 1) r += h * f[1];
  if (a.order() >= 2) {
    Jet h2 = h * h;
    r += h2 * (f[2] / 2.0);
    if (a.order() >= 3) r += (h2 * h) * (f[3] / 6.0);
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  double v = b.value();
  if (v == 0.0) throw ArithmeticDomainError("div", v);
  double v2 = v * v;
  return a * Jet::compose(b, {1.0 / v, -1.0 / v2, 2.0 / (v2 * v), -6.0 / (v2 * v2)});
}

Jet operator/(double s, const Jet& a) {
  double v = a.value();
  if (v == 0.0) throw ArithmeticDomainError("div", v);
  double v2 = v * v;
  return Jet::compose(a, {s / v, -s / v2, 2.0 * s / (v2 * v), -6.0 * s / (v2 * v2)});
}

Jet sqrt(const Jet& a) {
  double v = a.value();
  if (v <= 0.0) throw ArithmeticDomainError("sqrt", v);
  double s = std::sqrt(v);
  return Jet::compose(a, {s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)});
}

Jet exp(const Jet& a) {
  double e = std::exp(a.value());
  return Jet::compose(a, {e, e, e, e});
}

Jet log(const Jet& a) {
  double v = a.value();
  if (v <= 0.0) throw ArithmeticDomainError("log", v);
  return Jet::compose(a, {std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)});
}

Jet sin(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::compose(a, {s, c, -s, -c});
}

Jet cos(const Jet& a) {
  double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::compose(a, {c, -s, -c, s});
}

Jet atan(const Jet& a) {
  double t = a.value();
  double d = 1.0 + t * t;
  return Jet::compose(a, {std::atan(t), 1.0 / d, -2.0 * t / (d * d),
                          (6.0 * t * t - 2.0) / (d * d * d)});
}

Jet atan2(const Jet& y, const Jet& x) {
  double xv = x.value(), yv = y.value();
  if (xv == 0.0 && yv == 0.0) throw ArithmeticDomainError("atan2", 0.0);
  const double pi = 3.14159265358979323846;
  if (std::abs(xv) >= std::abs(yv)) {
    Jet base = atan(y / x);
    if (xv > 0.0) return base;
    return yv >= 0.0 ? base + pi : base - pi;
  }
  Jet base = atan(x / y);
  return yv > 0.0 ? -base + pi / 2.0 : -base - pi / 2.0;
}

Jet pow(const Jet& a, int p) {
  if (p == 0) return Jet::constant(a.dim(), a.order(), 1.0);
  if (p < 0) return 1.0 / pow(a, -p);
  Jet r = a;
  for (int i = 1; i < p; ++i) r = r * a;
  return r;
}

Jet pow(const Jet& a, double p) {
  if (p == std::floor(p) && std::abs(p) <= 16.0) return pow(a, static_cast<int>(p));
  double v = a.value();
  if (v <= 0.0) throw ArithmeticDomainError("pow", v);
  double f0 = std::pow(v, p);
  return Jet::compose(a, {f0, p * f0 / v, p * (p - 1.0) * f0 / (v * v),
                          p * (p - 1.0) * (p - 2.0) * f0 / (v * v * v)});
}

Jet jet_arith(const Jet& a, const Jet& b, JetOp op) {
  switch (op) {
    case JetOp::add: return a + b;
    case JetOp::sub: return a - b;
    case JetOp::mul: return a * b;
    case JetOp::div: return a / b;
    case JetOp::sqrt: return sqrt(a);
    case JetOp::pow: return pow(a, b.value());
    case JetOp::exp: return exp(a);
    case JetOp::log: return log(a);
    case JetOp::sin: return sin(a);
    case JetOp::cos: return cos(a);
    case JetOp::atan2: return atan2(a, b);
  }
  throw UsageError("jet_arith: unknown op");
}

Jet lift_coordinate(const JetContext& ctx, int i) {
  if (i < 0 || i >= ctx.dim) throw UsageError("lift_coordinate: index out of range");
  return Jet::variable(ctx.dim, ctx.order, i, ctx.seed[i]);
}

Jet lift_constant(const JetContext& ctx, double v) { return Jet::constant(ctx.dim, ctx.order, v); }

double FdResidualTable::worst() const {
  double w = 0.0;
  for (double x : max_abs) w = std::max(w, x);
  return w;
}

namespace {

double eval_value(const JetField& field, std::span<const double> p) {
  JetContext ctx(static_cast<int>(p.size()), 0, std::vector<double>(p.begin(), p.end()));
  return field(ctx).value();
}

// 5-point central stencils, applied per axis and tensored for mixed partials.
double fd_axis(const JetField& field, std::vector<double> p, const std::vector<int>& axes,
               std::size_t k, double h) {
  if (k == axes.size()) return eval_value(field, p);
  int ax = axes[k];
  auto shift = [&](double s) {
    std::vector<double> q = p;
    q[ax] += s;
    return fd_axis(field, q, axes, k + 1, h);
  };
  return (-shift(2 * h) + 8 * shift(h) - 8 * shift(-h) + shift(-2 * h)) / (12 * h);
}

}  // namespace

FdResidualTable finite_difference_check(const JetField& field, std::span<const double> p,
                                        int order, double h) {
  int dim = static_cast<int>(p.size());
  JetContext ctx(dim, order, std::vector<double>(p.begin(), p.end()));
  Jet j = field(ctx);
  FdResidualTable table;
  table.max_abs[0] = 0.0;
  for (int total = 1; total <= order; ++total) {
    double step = h > 0 ? h : std::pow(2.2e-16, 1.0 / (total + 2));
    double worst = 0.0;
    // All ordered axis tuples; duplicates handled by repeated differencing.
    std::vector<int> axes(total, 0);
    while (true) {
      bool nondecreasing = true;
      for (int i = 1; i < total; ++i)
        if (axes[i] < axes[i - 1]) nondecreasing = false;
      if (nondecreasing) {
        MultiIndex mi{};
        for (int a : axes) mi[a]++;
        double fd = fd_axis(field, std::vector<double>(p.begin(), p.end()), axes, 0, step);
        worst = std::max(worst, std::abs(fd - j.deriv(mi)));
      }
      int i = total - 1;
      while (i >= 0 && axes[i] == dim - 1) axes[i--] = 0;
      if (i < 0) break;
      axes[i]++;
    }
    table.max_abs[total] = worst;
  }
  return table;
}

}  // namespace akmass
