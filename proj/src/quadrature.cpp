#include "akmass/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace akmass {

Quadrature1D gauss_legendre(int n) {
  // Newton iteration on P_n with Chebyshev initial guesses.
  Quadrature1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    q.nodes[n - 1 - i] = x;
    q.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

Quadrature1D gauss_gegenbauer(int n, double lambda) {
  if (lambda == 0.0) return gauss_legendre(n);
  // Monic Jacobi(alpha=beta=lambda) recurrence; Golub-Welsch.
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b2 = k * (k + 2.0 * lambda) /
                ((2.0 * k + 2.0 * lambda + 1.0) * (2.0 * k + 2.0 * lambda - 1.0));
    double b = std::sqrt(b2);
    jm(k, k - 1) = b;
    jm(k - 1, k) = b;
  }
  double mu0 = std::sqrt(M_PI) * std::tgamma(lambda + 1.0) / std::tgamma(lambda + 1.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  Quadrature1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    q.weights[i] = mu0 * v * v;
  }
  return q;
}

double sphere_area(int n) { return 2.0 * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0); }

double SphereQuadrature::total_weight() const {
  KahanSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

SphereQuadrature sphere_quadrature(int n, int degree) {
  if (n < 2 || n > kMaxVars) throw UsageError("sphere_quadrature: dimension out of range");
  if (degree < 1 || degree > 40) throw UsageError("sphere_quadrature: unsupported degree");
  SphereQuadrature q;
  q.n = n;
  q.degree = degree;

  int n_polar = n - 2;
  int n1d = degree / 2 + 1;
  std::vector<Quadrature1D> polar(n_polar);
  for (int k = 0; k < n_polar; ++k) {
    // measure sin^{n-2-k} theta dtheta ; under t = cos theta the weight is
    // (1-t^2)^{(n-3-k)/2} with k = 0-based polar index
    double lambda = 0.5 * (n - 3 - k);
    polar[k] = gauss_gegenbauer(n1d, lambda);
  }
  int m_phi = 2 * (degree / 2 + 1);  // even, >= degree+1

  std::vector<int> idx(n_polar, 0);
  while (true) {
    double wpolar = 1.0;
    std::vector<double> ct(n_polar), st(n_polar);
    for (int k = 0; k < n_polar; ++k) {
      ct[k] = polar[k].nodes[idx[k]];
      st[k] = std::sqrt(std::max(0.0, 1.0 - ct[k] * ct[k]));
      wpolar *= polar[k].weights[idx[k]];
    }
    for (int j = 0; j < m_phi; ++j) {
      double phi = 2.0 * M_PI * j / m_phi;
      Vec u(n, 0.0);
      double sprod = 1.0;
      for (int k = 0; k < n_polar; ++k) {
        u[k] = sprod * ct[k];
        sprod *= st[k];
      }
      u[n - 2] = sprod * std::cos(phi);
      u[n - 1] = sprod * std::sin(phi);
      q.nodes.push_back(u);
      q.weights.push_back(wpolar * 2.0 * M_PI / m_phi);
    }
    int k = n_polar - 1;
    while (k >= 0 && ++idx[k] == n1d) idx[k--] = 0;
    if (k < 0) break;
    if (n_polar == 0) break;
  }
  if (n_polar == 0 && q.nodes.empty()) {
    for (int j = 0; j < m_phi; ++j) {
      double phi = 2.0 * M_PI * j / m_phi;
      q.nodes.push_back({std::cos(phi), std::sin(phi)});
      q.weights.push_back(2.0 * M_PI / m_phi);
    }
  }
  return q;
}

int thread_count_from_env() {
  const char* env = std::getenv("AKMASS_THREADS");
  if (!env) return 1;
  int t = std::atoi(env);
  if (t < 1) return 1;
  return std::min(t, 64);
}

void parallel_chunks(std::size_t count, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& work,
                     std::size_t chunk_size) {
  std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      work(c * chunk_size, std::min(count, (c + 1) * chunk_size), c);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t per = (n_chunks + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t c0 = t * per, c1 = std::min(n_chunks, (t + 1) * per);
    if (c0 >= c1) break;
    pool.emplace_back([&, c0, c1]() {
      for (std::size_t c = c0; c < c1; ++c)
        work(c * chunk_size, std::min(count, (c + 1) * chunk_size), c);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace akmass
