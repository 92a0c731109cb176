#pragma once

// Spectra of Harper-like operators at rational flux: fiber operators on the
// integer line, Floquet-Bloch q x q matrices, band structure over the
// quasimomentum torus, and direct window truncations of the 1D fibers and of
// the covariant Z^2 operator.
//
// A symbol T(x,p) = sum t(m,n) e^{i(mx+np)} quantizes to the lattice operator
// with covariant entries C(P,Q) = e^{i h P2 (Q1-P1)} c(Q-P), where
// c(m,n) = t(m,n) e^{i m n h / 2}.  Its fibers are
//   C_h(theta) g(m) = sum_n b_n(m h + theta) g(m+n),
//   b_n(phi) = sum_k c(k,n) e^{i k phi} = sum_k t(k,n) e^{i k (phi + n h / 2)}.

#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "landau/bandset.hpp"
#include "landau/core.hpp"
#include "landau/errors.hpp"
#include "landau/hermitian.hpp"
#include "landau/lattice.hpp"
#include "landau/parallel.hpp"

namespace landau {
namespace harper {

using lattice::FourierSymbol;
using lattice::LatticeSite;

// Flux h = 2 pi p / q in lowest terms.
struct RationalFlux {
  int p = 1;
  int q = 1;

  RationalFlux(int p_, int q_) : p(p_), q(q_) {
    if (p < 1 || q < 1) throw DomainError("RationalFlux: p, q must be positive");
    if (std::gcd(p, q) != 1) throw DomainError("RationalFlux: p/q must be in lowest terms");
  }
  double h() const { return kTwoPi * double(p) / double(q); }
};

struct BlochPoint {
  double theta = 0.0;  // in [0, 2pi)
  double kappa = 0.0;  // in [0, 2pi)
};

// b_n(phi) for |n| <= cutoff of the symbol.
inline std::map<int, Complex> fiber_coefficients(const FourierSymbol& sym, double h, double phi) {
  std::map<int, Complex> b;
  for (const auto& [site, t] : sym.coeffs) {
    if (std::abs(t) == 0.0) continue;
    const double arg = site.m * (phi + 0.5 * site.n * h);
    b[site.n] += t * Complex(std::cos(arg), std::sin(arg));
  }
  if (std::abs(sym.constant_term) > 0.0) b[0] += sym.constant_term;
  return b;
}

// Two gauge conventions for the q x q Bloch fiber; both give the same spectrum
// (they differ by conjugation with diag(e^{i kappa j / q})).
enum class BlochGauge {
  momentum_split,  // g(m) = e^{i kappa m / q} v_{m mod q}
  winding          // phase e^{i kappa} per wrap around the q-cell
};

inline HermitianMatrix bloch_matrix(const FourierSymbol& sym, RationalFlux flux, BlochPoint pt,
                                    BlochGauge gauge = BlochGauge::momentum_split) {
  const int q = flux.q;
  const double h = flux.h();
  // assembly rounds against the coefficient mass, not the (possibly tiny)
  // assembled matrix norm
  double coeff_scale = std::abs(sym.constant_term);
  for (const auto& [site, c] : sym.coeffs) coeff_scale += std::abs(c);
  std::vector<Complex> m(std::size_t(q) * q, Complex(0.0, 0.0));
  for (int j = 0; j < q; ++j) {
    const std::map<int, Complex> b = fiber_coefficients(sym, h, j * h + pt.theta);
    for (const auto& [n, bn] : b) {
      const int jp = ((j + n) % q + q) % q;
      Complex ph;
      if (gauge == BlochGauge::momentum_split) {
        const double arg = pt.kappa * double(n) / double(q);
        ph = Complex(std::cos(arg), std::sin(arg));
      } else {
        const int wind = (j + n - jp) / q;  // exact integer winding
        const double arg = pt.kappa * double(wind);
        ph = Complex(std::cos(arg), std::sin(arg));
      }
      m[std::size_t(j) * q + jp] += bn * ph;
    }
  }
  return HermitianMatrix::build(
      q, [&](int i, int j) { return m[std::size_t(i) * q + j]; }, 1e-13,
      std::max(coeff_scale, 1e-300));
}

// Band structure over an n_theta x n_kappa quasimomentum grid.  Bands are
// tracked by eigenvalue index (continuous and order-stable for Hermitian
// fibers); `merged` coalesces touching bands for set operations.
struct BandStructure {
  std::vector<Interval> per_index;  // one interval per eigenvalue index
  BandSet merged;
  int n_theta = 0, n_kappa = 0;

  int bands() const { return static_cast<int>(per_index.size()); }
  double min() const { return per_index.front().lo; }
  double max() const { return per_index.back().hi; }
};

namespace detail {

// Quadratic refinement of an extremum of f over the grid-step neighbourhood.
template <class F>
double polish_extremum(const F& f, double t0, double k0, double step, bool maximize, int rounds = 3) {
  double bt = t0, bk = k0, bf = f(t0, k0);
  const double sign = maximize ? 1.0 : -1.0;
  double hstep = step;
  for (int r = 0; r < rounds; ++r) {
    // coordinate-wise three-point parabola step
    for (int axis = 0; axis < 2; ++axis) {
      const double ct = bt, ck = bk;
      auto g = [&](double d) {
        return sign * f(axis == 0 ? ct + d : ct, axis == 1 ? ck + d : ck);
      };
      const double fm = g(-hstep), f0 = g(0.0), fp = g(hstep);
      const double denom = fm - 2.0 * f0 + fp;
      double d = 0.0;
      if (denom < -1e-300) d = 0.5 * hstep * (fm - fp) / denom;
      d = std::clamp(d, -hstep, hstep);
      const double cand = g(d);
      if (cand > sign * bf) {
        (axis == 0 ? bt : bk) += d;
        bf = sign * cand;
      }
    }
    hstep *= 0.35;
  }
  return bf;
}

}  // namespace detail

inline BandStructure band_spectrum(const FourierSymbol& sym, RationalFlux flux, int n_theta,
                                   int n_kappa, double merge_tol = 1e-9, bool polish = false) {
  if (n_theta < 4 || n_kappa < 4) throw DomainError("band_spectrum: grid too coarse");
  const int q = flux.q;
  BandStructure out;
  out.n_theta = n_theta;
  out.n_kappa = n_kappa;
  out.per_index.assign(q, Interval{1e308, -1e308});
  // Bloch points are independent; each theta row fills its own slice and the
  // extrema are reduced afterwards in fixed grid order.
  std::vector<double> grid_eigs(std::size_t(n_theta) * n_kappa * q);
  parallel_for(n_theta, [&](int it) {
    std::vector<double> ev;
    for (int ik = 0; ik < n_kappa; ++ik) {
      const BlochPoint pt{kTwoPi * it / n_theta, kTwoPi * ik / n_kappa};
      ev = hermitian_eigs(bloch_matrix(sym, flux, pt));
      for (int j = 0; j < q; ++j)
        grid_eigs[(std::size_t(it) * n_kappa + ik) * q + j] = ev[j];
    }
  });
  std::vector<std::pair<double, double>> argmin(q, {0.0, 0.0}), argmax(q, {0.0, 0.0});
  for (int it = 0; it < n_theta; ++it)
    for (int ik = 0; ik < n_kappa; ++ik)
      for (int j = 0; j < q; ++j) {
        const double v = grid_eigs[(std::size_t(it) * n_kappa + ik) * q + j];
        const BlochPoint pt{kTwoPi * it / n_theta, kTwoPi * ik / n_kappa};
        if (v < out.per_index[j].lo) {
          out.per_index[j].lo = v;
          argmin[j] = {pt.theta, pt.kappa};
        }
        if (v > out.per_index[j].hi) {
          out.per_index[j].hi = v;
          argmax[j] = {pt.theta, pt.kappa};
        }
      }
  if (polish) {
    for (int j = 0; j < q; ++j) {
      auto fj = [&](double th, double ka) {
        return hermitian_eigs(bloch_matrix(sym, flux, BlochPoint{th, ka}))[j];
      };
      out.per_index[j].lo =
          detail::polish_extremum(fj, argmin[j].first, argmin[j].second, kTwoPi / n_theta, false);
      out.per_index[j].hi =
          detail::polish_extremum(fj, argmax[j].first, argmax[j].second, kTwoPi / n_theta, true);
    }
  }
  out.merged = BandSet(out.per_index, merge_tol);
  return out;
}

// Eigenvalues of the 1D fiber C_h(theta) truncated to the window
// site_offset + [-N, N].
inline std::vector<double> truncated_spectrum_1d(const FourierSymbol& sym, double h, double theta,
                                                 int N, int site_offset = 0) {
  if (N < 10) throw DomainError("truncated_spectrum_1d: N must be >= 10");
  const int dim = 2 * N + 1;
  // b_n depends on the site only through m h + theta
  std::vector<std::map<int, Complex>> b(dim);
  for (int i = 0; i < dim; ++i) b[i] = fiber_coefficients(sym, h, (i - N + site_offset) * h + theta);
  const HermitianMatrix m = HermitianMatrix::build(dim, [&](int i, int j) -> Complex {
    const auto it = b[i].find(j - i);
    return it == b[i].end() ? Complex(0.0, 0.0) : it->second;
  });
  return hermitian_eigs(m);
}

// Eigenvalues of the covariant Z^2 operator truncated to the window
// max(|m1|,|m2|) <= N; entries follow the phase law
// C(P+K, Q+K) = e^{-i h K2 (P1-Q1)} C(P,Q).
inline std::vector<double> truncated_spectrum_2d(const FourierSymbol& sym, double h, int N) {
  const int w = 2 * N + 1;
  const int dim = w * w;
  if (dim > 2000) throw DomainError("truncated_spectrum_2d: (2N+1)^2 exceeds 2000");
  auto site = [&](int idx) { return LatticeSite{idx / w - N, idx % w - N}; };
  const HermitianMatrix m = HermitianMatrix::build(dim, [&](int i, int j) -> Complex {
    const LatticeSite a = site(i), bsite = site(j);
    const int dm = bsite.m - a.m, dn = bsite.n - a.n;
    const auto it = sym.coeffs.find({dm, dn});
    Complex c = it == sym.coeffs.end() ? Complex(0.0, 0.0) : it->second;
    if (i == j) c += sym.constant_term;
    if (std::abs(c) == 0.0) return c;
    const double arg = 0.5 * dm * dn * h + h * a.n * dm;  // c(m,n) phase + covariance phase
    return c * Complex(std::cos(arg), std::sin(arg));
  });
  return hermitian_eigs(m);
}

}  // namespace harper
}  // namespace landau
