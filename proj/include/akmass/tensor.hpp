#pragma once

#include <array>
#include <cassert>
#include <initializer_list>
#include <vector>

#include "akmass/jet.hpp"

namespace akmass {

// Dense tensor with every axis of length n. T is double or Jet.
template <class T>
class Tensor {
 public:
  Tensor() : n_(0), rank_(0) {}
  Tensor(int n, int rank, const T& fill = T{}) : n_(n), rank_(rank) {
    std::size_t sz = 1;
    for (int i = 0; i < rank; ++i) sz *= static_cast<std::size_t>(n);
    v_.assign(sz, fill);
  }

  int n() const { return n_; }
  int rank() const { return rank_; }
  std::size_t size() const { return v_.size(); }

  T& operator[](std::size_t flat) { return v_[flat]; }
  const T& operator[](std::size_t flat) const { return v_[flat]; }

  T& operator()(int i) { return v_[idx({i})]; }
  T& operator()(int i, int j) { return v_[idx({i, j})]; }
  T& operator()(int i, int j, int k) { return v_[idx({i, j, k})]; }
  T& operator()(int i, int j, int k, int l) { return v_[idx({i, j, k, l})]; }
  T& operator()(int i, int j, int k, int l, int m) { return v_[idx({i, j, k, l, m})]; }
  T& operator()(int i, int j, int k, int l, int m, int o) { return v_[idx({i, j, k, l, m, o})]; }
  const T& operator()(int i) const { return v_[idx({i})]; }
  const T& operator()(int i, int j) const { return v_[idx({i, j})]; }
  const T& operator()(int i, int j, int k) const { return v_[idx({i, j, k})]; }
  const T& operator()(int i, int j, int k, int l) const { return v_[idx({i, j, k, l})]; }
  const T& operator()(int i, int j, int k, int l, int m) const {
    return v_[idx({i, j, k, l, m})];
  }
  const T& operator()(int i, int j, int k, int l, int m, int o) const {
    return v_[idx({i, j, k, l, m, o})];
  }

 private:
  std::size_t idx(std::initializer_list<int> is) const {
    assert(static_cast<int>(is.size()) == rank_);
    std::size_t f = 0;
    for (int i : is) {
      assert(i >= 0 && i < n_);
      f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
    }
    return f;
  }
  int n_, rank_;
  std::vector<T> v_;
};

using TensorD = Tensor<double>;
using TensorJ = Tensor<Jet>;

// Values of a jet tensor.
TensorD tensor_values(const TensorJ& t);
TensorJ tensor_truncated(const TensorJ& t, int order);

// Gauss-Jordan inverse in the jet ring; pivots on the value part.
// Throws ArithmeticDomainError("matrix_inverse") on a singular value matrix.
TensorJ jet_matrix_inverse(const TensorJ& m);
TensorD matrix_inverse(const TensorD& m);

Jet jet_matrix_determinant(const TensorJ& m);

// Symmetric-positive-definite square root and inverse square root via the
// Denman-Beavers iteration, in the jet ring.
void jet_sqrt_and_inverse_sqrt(const TensorJ& s, TensorJ& sqrt_out, TensorJ& inv_sqrt_out);

// Compensated (Kahan) accumulator; deterministic for a fixed visit order.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace akmass
