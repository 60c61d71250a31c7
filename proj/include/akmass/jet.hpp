#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace akmass {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxJetOrder = 3;

// Exponent tuple of a monomial; entries beyond dim are zero.
using MultiIndex = std::array<std::uint8_t, kMaxVars>;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when jet arithmetic leaves the domain of an elementary function
// (division by a zero-valued jet, sqrt/log of a nonpositive value, ...).
struct ArithmeticDomainError : std::runtime_error {
  ArithmeticDomainError(const std::string& op, double value)
      : std::runtime_error("jet arithmetic domain error in '" + op +
                           "' at value " + std::to_string(value)),
        op_name(op),
        offending_value(value) {}
  std::string op_name;
  double offending_value;
};

// Shared immutable tables for all jets of a given (dim, order): the graded-lex
// monomial basis, index lookup, and the truncated product table.
class JetSpace {
 public:
  static const JetSpace& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()); }

  const MultiIndex& exponent(int idx) const { return exps_[idx]; }
  int degree(int idx) const { return deg_[idx]; }
  // -1 if the multi-index is not in this space.
  int index_of(const MultiIndex& mi) const;

  struct ProductTerm {
    std::int32_t a, b, dst;
  };
  const std::vector<ProductTerm>& product_terms() const { return prod_; }

 private:
  JetSpace(int dim, int order);
  int dim_, order_;
  std::vector<MultiIndex> exps_;
  std::vector<int> deg_;
  std::vector<int> lookup_;  // keyed by packed exponents, 2 bits per var
  std::vector<ProductTerm> prod_;
};

// Truncated multivariate Taylor expansion of a scalar quantity at a point.
// Coefficients are Taylor coefficients (partial derivative / factorial), in
// graded-lex order. Arithmetic is exact truncation in the polynomial ring.
class Jet {
 public:
  Jet() : space_(nullptr) {}
  static Jet constant(int dim, int order, double v);
  static Jet variable(int dim, int order, int var, double base_value);

  bool valid() const { return space_ != nullptr; }
  int dim() const { return space_->dim(); }
  int order() const { return space_->order(); }
  int size() const { return space_->size(); }

  double value() const { return c_[0]; }
  double coeff(int idx) const { return c_[idx]; }
  double& coeff(int idx) { return c_[idx]; }

  // Partial derivative for a list of variable indices, e.g. {0,1,1} = d3/dx dy2.
  double deriv(std::initializer_list<int> vars) const;
  double deriv(const MultiIndex& mi) const;
  double partial(int i) const { return deriv({i}); }

  Jet truncated(int new_order) const;
  // Jet of the partial derivative; order drops by one.
  Jet derivative(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(const Jet& a, double s);
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(const Jet& a, double s);
  friend Jet operator*(double s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
  friend Jet operator/(double s, const Jet& a);

  // f given by its value and first three derivatives at a.value().
  static Jet compose(const Jet& a, const std::array<double, 4>& f);

 private:
  explicit Jet(const JetSpace* s) : space_(s), c_(s->size(), 0.0) {}
  static const JetSpace* common_space(const Jet& a, const Jet& b);
  const JetSpace* space_;
  std::vector<double> c_;
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet atan(const Jet& a);
Jet atan2(const Jet& y, const Jet& x);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, int p);

enum class JetOp { add, sub, mul, div, sqrt, pow, exp, log, sin, cos, atan2 };

// Uniform dispatcher; unary ops ignore b (pow reads the exponent from
// b.value(), which must be constant for non-integer exponents).
Jet jet_arith(const Jet& a, const Jet& b, JetOp op);

// Evaluation context: a chart point plus the truncation order demanded by the
// computation downstream (3 when third derivatives such as grad W+ are
// needed, else 2).
struct JetContext {
  int dim = 0;
  int order = 0;
  std::vector<double> seed;

  JetContext() = default;
  JetContext(int d, int o, std::vector<double> p) : dim(d), order(o), seed(std::move(p)) {
    if (d < 1 || d > kMaxVars) throw UsageError("JetContext: dim out of range");
    if (o < 0 || o > kMaxJetOrder) throw UsageError("JetContext: order out of range");
    if (static_cast<int>(seed.size()) != d) throw UsageError("JetContext: seed size != dim");
  }
};

Jet lift_coordinate(const JetContext& ctx, int i);
Jet lift_constant(const JetContext& ctx, double v);

// A scalar field evaluable as a jet at any requested context.
using JetField = std::function<Jet(const JetContext&)>;

// Max |jet derivative - central difference| per derivative order 0..order.
struct FdResidualTable {
  std::array<double, kMaxJetOrder + 1> max_abs{};
  double worst() const;
};

// Central 5-point stencils per axis, tensored for mixed partials. h = 0 picks
// the standard truncation/rounding balance h = eps^(1/(order+2)).
FdResidualTable finite_difference_check(const JetField& field, std::span<const double> p,
                                        int order, double h = 0.0);

}  // namespace akmass
