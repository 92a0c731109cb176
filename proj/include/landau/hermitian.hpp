#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "landau/core.hpp"
#include "landau/errors.hpp"

namespace landau {

// Dense complex Hermitian matrix, row-major full storage.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0)) {
    if (n <= 0) throw DomainError("HermitianMatrix: dimension must be positive");
  }

  // scale = 0 checks against the matrix Frobenius norm; pass the assembly's
  // coefficient mass when the matrix itself can be near zero.
  template <class F>
  static HermitianMatrix build(int n, F entry, double herm_tol = 1e-13, double scale = 0.0) {
    HermitianMatrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.a_[std::size_t(i) * n + j] = entry(i, j);
    m.check_hermitian(herm_tol, scale);
    return m;
  }

  int dim() const { return n_; }
  Complex operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }
  Complex& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }

  double frobenius() const {
    double s = 0.0;
    for (const Complex& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  void check_hermitian(double tol = 1e-13, double scale = 0.0) const {
    if (scale <= 0.0) scale = std::max(frobenius(), 1e-300);
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        const Complex d = (*this)(i, j) - std::conj((*this)(j, i));
        if (std::abs(d) > tol * scale)
          throw HermiticityError("HermitianMatrix: entries fail Hermiticity check");
      }
  }

  std::vector<Complex> apply(const std::vector<Complex>& v) const {
    std::vector<Complex> out(n_, Complex(0.0, 0.0));
    for (int i = 0; i < n_; ++i) {
      Complex s{0.0, 0.0};
      const Complex* row = &a_[std::size_t(i) * n_];
      for (int j = 0; j < n_; ++j) s += row[j] * v[j];
      out[i] = s;
    }
    return out;
  }

 private:
  int n_;
  std::vector<Complex> a_;
};

struct EigenResult {
  std::vector<double> values;           // ascending
  std::vector<Complex> vectors;         // column k = eigenvector of values[k]; empty if not requested
  int dim = 0;
  int sweeps = 0;

  Complex vector_at(int row, int k) const { return vectors[std::size_t(row) * dim + k]; }
};

// Cyclic complex Jacobi with threshold skipping.  Converges to off-diagonal
// Frobenius norm < tol * ||A||_F within the sweep budget or throws.
inline EigenResult jacobi_eigensolver(HermitianMatrix a, bool want_vectors = false,
                                      double tol = 1e-12, int max_sweeps = 30) {
  const int n = a.dim();
  EigenResult res;
  res.dim = n;
  std::vector<Complex> v;
  if (want_vectors) {
    v.assign(std::size_t(n) * n, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i) v[std::size_t(i) * n + i] = 1.0;
  }
  const double scale = std::max(a.frobenius(), 1e-300);
  const double target = tol * scale;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
  };

  int sweep = 0;
  double off = off_norm();
  const double skip = target / (double(n) * n);
  while (off > target) {
    if (++sweep > max_sweeps) throw ConvergenceError("jacobi: sweep budget exhausted");
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const Complex beta = a(p, q);
        const double ab = std::abs(beta);
        if (ab <= skip) continue;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (app - aqq) / (2.0 * ab);
        double t;
        if (theta == 0.0)
          t = 1.0;
        else
          t = -std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex u = beta / ab;        // unit phase
        const Complex sigma = s * u;
        const Complex sigma_c = std::conj(sigma);
        // rows/columns k != p,q
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Complex akp = a(k, p), akq = a(k, q);
          const Complex np = c * akp - sigma_c * akq;
          const Complex nq = sigma * akp + c * akq;
          a(k, p) = np;
          a(p, k) = std::conj(np);
          a(k, q) = nq;
          a(q, k) = std::conj(nq);
        }
        const double cross = 2.0 * c * s * ab;
        a(p, p) = Complex(c * c * app + s * s * aqq - cross, 0.0);
        a(q, q) = Complex(c * c * aqq + s * s * app + cross, 0.0);
        a(p, q) = a(q, p) = Complex(0.0, 0.0);
        if (want_vectors) {
          for (int k = 0; k < n; ++k) {
            const Complex vkp = v[std::size_t(k) * n + p], vkq = v[std::size_t(k) * n + q];
            v[std::size_t(k) * n + p] = c * vkp - sigma_c * vkq;
            v[std::size_t(k) * n + q] = sigma * vkp + c * vkq;
          }
        }
      }
    off = off_norm();
  }
  res.sweeps = sweep;
  res.values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    res.values[i] = a(i, i).real();
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = a(order[i], order[i]).real();
  res.values = std::move(sorted);
  if (want_vectors) {
    res.vectors.assign(std::size_t(n) * n, Complex(0.0, 0.0));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        res.vectors[std::size_t(i) * n + k] = v[std::size_t(i) * n + order[k]];
  }
  return res;
}

// Eigenvalues only, ascending.
inline std::vector<double> hermitian_eigs(const HermitianMatrix& m, double tol = 1e-12,
                                          int max_sweeps = 30) {
  if (m.dim() > 2000) throw DomainError("hermitian_eigs: dimension exceeds 2000");
  return jacobi_eigensolver(m, false, tol, max_sweeps).values;
}

// Largest residual ||A v_k - lambda_k v_k|| over all pairs, for on-demand checks.
inline double eigen_residual(const HermitianMatrix& a, const EigenResult& e) {
  const int n = a.dim();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> vk(n);
    for (int i = 0; i < n; ++i) vk[i] = e.vector_at(i, k);
    const std::vector<Complex> av = a.apply(vk);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(av[i] - e.values[k] * vk[i]);
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace landau
