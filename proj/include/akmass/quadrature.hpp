#pragma once

#include <functional>

#include "akmass/geometry.hpp"

namespace akmass {

struct Quadrature1D {
  std::vector<double> nodes, weights;
};

// Gauss-Legendre on [-1,1], exact through degree 2n-1.
Quadrature1D gauss_legendre(int n);
// Gauss-Gegenbauer for weight (1-t^2)^lambda on [-1,1] (Golub-Welsch).
Quadrature1D gauss_gegenbauer(int n, double lambda);

// Product rule on S^{n-1}: Gegenbauer in each polar angle, equispaced in the
// azimuth. Symmetric node set, exact on polynomials of total degree <= degree
// (odd monomials vanish by symmetry, even ones reduce to the 1d rules).
struct SphereQuadrature {
  int n = 0;
  int degree = 0;
  std::vector<Vec> nodes;  // unit vectors
  std::vector<double> weights;
  double total_weight() const;
};
SphereQuadrature sphere_quadrature(int n, int degree);

double sphere_area(int n);  // Vol(S^{n-1}) = 2 pi^{n/2} / Gamma(n/2)

// Deterministic chunked parallel map over [0, count): chunk results are
// combined in index order, so the outcome is independent of thread count.
void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& work,
                     std::size_t chunk_size = 256);

int thread_count_from_env();

}  // namespace akmass
