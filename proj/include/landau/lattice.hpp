#pragma once

// Lattice layer: the Krein matrix Q(z,h), Fourier coefficients
// lambda(m,n;z,h) of the effective symbol, the normalized symbol with
// m_alpha = (q + 1/alpha)/a, the deviation estimator against the pure
// cos x + cos p symbol, and the finite-radius perturbed Green function.

#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "landau/core.hpp"
#include "landau/errors.hpp"
#include "landau/green.hpp"
#include "landau/hermitian.hpp"

namespace landau {
namespace lattice {

struct LatticeSite {
  int m = 0;
  int n = 0;

  friend bool operator<(LatticeSite a, LatticeSite b) {
    return a.m < b.m || (a.m == b.m && a.n < b.n);
  }
  friend bool operator==(LatticeSite a, LatticeSite b) { return a.m == b.m && a.n == b.n; }
  int radius2() const { return m * m + n * n; }
  int ring() const { return std::abs(m) + std::abs(n); }
};

// Finite Fourier symbol sum_{(m,n)} c(m,n) e^{i(m x + n p)} + constant.
// Coefficients must be conjugate-symmetric (real symbol on the real torus).
// A parallel log-scaled table carries coefficients that underflow doubles.
struct FourierSymbol {
  std::map<LatticeSite, Complex> coeffs;
  std::map<LatticeSite, LogScaled> log_coeffs;  // same keys; authoritative in deep regimes
  Complex constant_term{0.0, 0.0};
  int cutoff_radius = 0;
  double envelope_amp = 0.0;   // |c(m,n)| <= envelope_amp * exp(-envelope_rate * sqrt(m^2+n^2))
  double envelope_rate = 0.0;
  bool complete = true;  // false when the map truncates an infinite coefficient family

  void set(int m, int n, Complex c) {
    coeffs[{m, n}] = c;
    log_coeffs[{m, n}] = LogScaled::from(c);
  }
  void set_log(int m, int n, LogScaled c) {
    log_coeffs[{m, n}] = c;
    coeffs[{m, n}] = (c.is_zero() || c.log_mag < -700.0) ? Complex(0.0, 0.0) : c.to_complex();
  }
  Complex get(int m, int n) const {
    const auto it = coeffs.find({m, n});
    return it == coeffs.end() ? Complex(0.0, 0.0) : it->second;
  }

  void check_symmetry(double tol = 1e-12) const {
    double scale = 0.0;
    for (const auto& [s, c] : coeffs) scale = std::max(scale, std::abs(c));
    for (const auto& [s, c] : coeffs)
      if (std::abs(c - std::conj(get(-s.m, -s.n))) > tol * std::max(scale, 1e-300))
        throw DomainError("FourierSymbol: coefficients not conjugate-symmetric");
  }

  // Least-squares decay fit of log|c| against sqrt(m^2+n^2), amplitude inflated
  // so the envelope dominates every stored coefficient.
  void fit_envelope() {
    std::vector<std::pair<double, double>> pts;  // (rho, log|c|)
    for (const auto& [s, c] : log_coeffs) {
      if (s.m == 0 && s.n == 0) continue;
      if (c.is_zero()) continue;
      pts.emplace_back(std::sqrt(double(s.radius2())), c.log_mag);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double k = pts.size();
    const double det = k * sxx - sx * sx;
    if (pts.empty() || det < 1e-12) {
      // no measurable decay across shells; any rate is consistent, record a steep one
      envelope_rate = 50.0;
      double amp_log = -1e308;
      for (auto [x, y] : pts) amp_log = std::max(amp_log, y + envelope_rate * x);
      envelope_amp = pts.empty() ? 0.0 : std::exp(std::min(amp_log, 700.0));
      return;
    }
    const double slope = (k * sxy - sx * sy) / det;
    envelope_rate = std::max(-slope, 1e-3);
    double amp_log = -1e308;
    for (auto [x, y] : pts) amp_log = std::max(amp_log, y + envelope_rate * x);
    envelope_amp = std::exp(std::min(amp_log, 700.0));
  }

  // Pointwise value at complex (x, p); throws if the truncated tail's fitted
  // envelope cannot control the dropped coefficients on the requested strip.
  Complex eval(Complex x, Complex p) const {
    const double strip = std::abs(x.imag()) + std::abs(p.imag());
    if (!complete && strip > 0.0 && envelope_rate <= strip && envelope_amp > 0.0)
      throw landau::OverflowError("FourierSymbol: envelope diverges on the requested strip");
    Complex s = constant_term;
    for (const auto& [site, c] : coeffs)
      s += c * std::exp(Complex(0.0, 1.0) * (double(site.m) * x + double(site.n) * p));
    return s;
  }
};

// Harper symbol cos x + cos p (+ constant).
inline FourierSymbol harper_symbol(Complex constant = Complex(0.0, 0.0)) {
  FourierSymbol s;
  s.set(1, 0, 0.5);
  s.set(-1, 0, 0.5);
  s.set(0, 1, 0.5);
  s.set(0, -1, 0.5);
  s.constant_term = constant;
  s.cutoff_radius = 1;
  s.fit_envelope();
  return s;
}

// ---------------------------------------------------------------------------
// lambda(m,n;z,h) = F_h((0,0),(m,n);z): radial in m^2+n^2, cached per energy.

class LambdaTable {
 public:
  explicit LambdaTable(const Energy& e) : e_(e) {
    if (!(e.h > 0.0)) throw DomainError("lambda: requires h > 0");
    if (!e.below_field()) throw DomainError("lambda: requires Re z < h");
    e.require_off_landau_levels();
  }

  LogScaled log_value(int s2) {
    if (s2 <= 0) throw DomainError("lambda: (m,n) must be nonzero");
    auto it = cache_.find(s2);
    if (it != cache_.end()) return it->second;
    const LogScaled v = green::f_kernel_closed_log(double(s2), e_);
    cache_.emplace(s2, v);
    return v;
  }
  Complex value(int s2) {
    const LogScaled v = log_value(s2);
    return (v.is_zero() || v.log_mag < -745.0) ? Complex(0.0, 0.0) : v.to_complex();
  }
  const Energy& energy() const { return e_; }

 private:
  Energy e_;
  std::unordered_map<int, LogScaled> cache_;
};

inline Complex lambda_coeff(int m, int n, const Energy& e) {
  LambdaTable t(e);
  return t.value(m * m + n * n);
}

// a(z,h) = 2 lambda(1,0;z,h); strictly positive for real z < h.
inline Complex a_coeff(const Energy& e) { return 2.0 * lambda_coeff(1, 0, e); }
inline LogScaled a_coeff_log(const Energy& e) {
  LambdaTable t(e);
  return LogScaled::from_real(2.0) * t.log_value(1);
}

// ---------------------------------------------------------------------------
// Krein matrix on the (2R+1)^2 window: diagonal q(z,h), off-diagonal G_h(m,n;z).

struct KreinMatrix {
  int radius = 0;
  Complex z;
  double h = 0.0;
  HermitianMatrix entries{1};

  int dim() const { return (2 * radius + 1) * (2 * radius + 1); }
  LatticeSite site(int index) const {
    const int w = 2 * radius + 1;
    return {index / w - radius, index % w - radius};
  }
};

inline KreinMatrix build_q_matrix(const Energy& e, int radius) {
  if (radius < 1) throw DomainError("build_q_matrix: radius must be >= 1");
  if (std::abs(e.z.imag()) > 0.0)
    throw DomainError("build_q_matrix: Hermitian Krein matrix requires real z");
  if (!e.below_field()) throw DomainError("build_q_matrix: requires Re z < h");
  const Complex q = green::q_reg(e);
  LambdaTable lam(e);
  KreinMatrix k;
  k.radius = radius;
  k.z = e.z;
  k.h = e.h;
  const int w = 2 * radius + 1;
  k.entries = HermitianMatrix::build(w * w, [&](int i, int j) -> Complex {
    if (i == j) return q;
    const LatticeSite a = k.site(i), b = k.site(j);
    const int dm = a.m - b.m, dn = a.n - b.n;
    // G_h(a,b;z) = exp(-i h (a1-b1)(a2+b2)/2) * lambda(|a-b|^2)
    const double phase = -0.5 * e.h * double(dm) * double(a.n + b.n);
    return Complex(std::cos(phase), std::sin(phase)) * lam.value(dm * dm + dn * dn);
  });
  return k;
}

struct QDistance {
  double value = 0.0;         // min |eig(Q + 1/alpha)| at the requested radius
  double value_prev = 0.0;    // same at radius-1, as a stabilization indicator
};

inline double min_abs_eig_shifted(const KreinMatrix& k, double shift) {
  HermitianMatrix m = k.entries;
  for (int i = 0; i < m.dim(); ++i) m(i, i) += shift;
  const std::vector<double> ev = hermitian_eigs(m);
  double best = 1e308;
  for (double v : ev) best = std::min(best, std::abs(v));
  return best;
}

// Distance from 0 to the spectrum of the window-truncated Q(z,h) + 1/alpha.
inline QDistance q_distance(const Energy& e, double alpha, int radius) {
  if (alpha == 0.0) throw DomainError("q_distance: alpha must be nonzero");
  QDistance d;
  d.value = min_abs_eig_shifted(build_q_matrix(e, radius), 1.0 / alpha);
  d.value_prev = radius > 1 ? min_abs_eig_shifted(build_q_matrix(e, radius - 1), 1.0 / alpha)
                            : d.value;
  return d;
}

// ---------------------------------------------------------------------------
// Normalized symbol: m_alpha + cos x + cos p + N with N = lambda/a over rings >= 2.

struct MSymbol {
  Complex m_alpha;
  FourierSymbol tail;  // ring >= 2 coefficients only
};

inline MSymbol symbol_m(const Energy& e, double alpha, int cutoff) {
  if (cutoff < 2) throw DomainError("symbol_m: cutoff must be >= 2");
  if (alpha == 0.0) throw DomainError("symbol_m: alpha must be nonzero");
  LambdaTable lam(e);
  const LogScaled la = a_coeff_log(e);
  if (la.is_zero() || la.log_mag < -700.0)
    throw DivisionDomainError("symbol_m: a(z,h) vanishes within tolerance");
  MSymbol out;
  out.m_alpha = (green::q_reg(e) + 1.0 / alpha) / la.to_complex();
  out.tail.cutoff_radius = cutoff;
  out.tail.complete = false;
  for (int m = -cutoff; m <= cutoff; ++m)
    for (int n = -cutoff; n <= cutoff; ++n) {
      const int ring = std::abs(m) + std::abs(n);
      if (ring < 2 || ring > cutoff) continue;
      out.tail.set_log(m, n, lam.log_value(m * m + n * n) / la);
    }
  out.tail.fit_envelope();
  return out;
}

// Full normalized symbol m_alpha + cos x + cos p + tail.
inline FourierSymbol full_symbol(const MSymbol& m) {
  FourierSymbol s = m.tail;
  s.constant_term = m.m_alpha;
  s.set(1, 0, s.get(1, 0) + 0.5);
  s.set(-1, 0, s.get(-1, 0) + 0.5);
  s.set(0, 1, s.get(0, 1) + 0.5);
  s.set(0, -1, s.get(0, -1) + 0.5);
  s.fit_envelope();
  return s;
}

// ---------------------------------------------------------------------------
// Deviation of a symbol from cos x + cos p + constant over an analyticity strip.

struct EpsilonEstimate {
  double value = 0.0;      // sup of the deviation (0 when it underflows doubles)
  double log_value = 0.0;  // log of the sup; authoritative in deep regimes
  double strip = 0.0;
  int grid = 0;
  double refinement_delta = 0.0;  // relative change under one 2x grid refinement
  bool self_consistent = false;   // true when value solves eps = sup over strip 1/eps
};

namespace detail {

// sup over {(x,p): x,p real mod 2pi} x {|Im x|+|Im p| = s} of |dev(x,p)|.
// The modulus is subharmonic, so the sup over the solid strip is attained on
// the boundary in the imaginary directions.  The torus scan is factored
// through per-row phase tables to keep the cost at grid^2 * (2 cut + 1).
inline double deviation_sup(const std::vector<std::pair<LatticeSite, Complex>>& dev, double s,
                            int grid) {
  int cut = 0;
  for (const auto& [site, c] : dev) cut = std::max({cut, std::abs(site.m), std::abs(site.n)});
  const int width = 2 * cut + 1;
  std::vector<Complex> phase_x(std::size_t(grid) * width), phase_p(std::size_t(grid) * width);
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * i / grid;
    for (int m = -cut; m <= cut; ++m) {
      phase_x[std::size_t(i) * width + (m + cut)] = Complex(std::cos(m * t), std::sin(m * t));
      phase_p[std::size_t(i) * width + (m + cut)] = phase_x[std::size_t(i) * width + (m + cut)];
    }
  }
  const int nb = std::max(grid / 4, 8);
  double sup = 0.0;
  std::vector<Complex> damped(std::size_t(width) * width);
  std::vector<Complex> row(width);
  for (int e = 0; e < 4; ++e)
    for (int ib = 0; ib <= nb; ++ib) {
      const double u = s * ib / nb;
      const double xi = (e & 1) ? -u : u;
      const double eta = (e & 2) ? -(s - u) : (s - u);
      std::fill(damped.begin(), damped.end(), Complex(0.0, 0.0));
      for (const auto& [site, c] : dev)
        damped[std::size_t(site.m + cut) * width + (site.n + cut)] =
            c * std::exp(-(site.m * xi + site.n * eta));
      for (int ip = 0; ip < grid; ++ip) {
        const Complex* pp = &phase_p[std::size_t(ip) * width];
        for (int m = 0; m < width; ++m) {
          Complex acc{0.0, 0.0};
          const Complex* dm = &damped[std::size_t(m) * width];
          for (int n = 0; n < width; ++n) acc += dm[n] * pp[n];
          row[m] = acc;
        }
        for (int ix = 0; ix < grid; ++ix) {
          const Complex* px = &phase_x[std::size_t(ix) * width];
          Complex sum{0.0, 0.0};
          for (int m = 0; m < width; ++m) sum += row[m] * px[m];
          sup = std::max(sup, std::norm(sum));
        }
      }
    }
  return std::sqrt(sup);
}

// Same in log scale for positive real coefficients: the real-part maximum is
// at x = p = 0, so only the diamond boundary is scanned.
inline double deviation_sup_log(const std::vector<std::pair<LatticeSite, double>>& dev_log,
                                double s, int grid) {
  const int nb = std::max(grid, 64);
  double sup = -1e308;
  for (int ib = 0; ib <= nb; ++ib)
    for (int e = 0; e < 4; ++e) {
      const double u = s * ib / nb;
      const double xi = (e & 1) ? -u : u;
      const double eta = (e & 2) ? -(s - u) : (s - u);
      double mx = -1e308;
      for (const auto& [site, lc] : dev_log) mx = std::max(mx, lc - site.m * xi - site.n * eta);
      double acc = 0.0;
      for (const auto& [site, lc] : dev_log) acc += std::exp(lc - site.m * xi - site.n * eta - mx);
      sup = std::max(sup, mx + std::log(acc));
    }
  return sup;
}

}  // namespace detail

// Deviation coefficients: everything except the exact Harper part and the constant.
inline std::vector<std::pair<LatticeSite, Complex>> deviation_coeffs(const FourierSymbol& sym) {
  std::vector<std::pair<LatticeSite, Complex>> dev;
  for (const auto& [site, c] : sym.coeffs) {
    Complex d = c;
    if (site.radius2() == 1) d -= 0.5;
    if (site.m == 0 && site.n == 0) continue;
    if (std::abs(d) > 0.0) dev.emplace_back(site, d);
  }
  return dev;
}

// Fixed-strip sup estimate, with one 2x refinement recorded; optionally solves
// the self-consistent equation eps = sup over the strip of width 1/eps.
inline EpsilonEstimate epsilon_estimate(const FourierSymbol& sym, double strip, int grid = 128,
                                        bool self_consistent = false) {
  if (!(strip > 0.0)) throw DomainError("epsilon_estimate: strip must be positive");
  if (!sym.complete && sym.envelope_rate <= strip && sym.envelope_amp > 0.0)
    throw landau::OverflowError("epsilon_estimate: envelope diverges on the strip");

  const auto dev = deviation_coeffs(sym);
  EpsilonEstimate out;
  out.strip = strip;
  out.grid = grid;
  if (dev.empty()) {
    // exact Harper symbol; check log side for underflowed tails
    std::vector<std::pair<LatticeSite, double>> dl;
    for (const auto& [site, lc] : sym.log_coeffs) {
      if (site.radius2() == 1 || (site.m == 0 && site.n == 0)) continue;
      if (!lc.is_zero()) dl.emplace_back(site, lc.log_mag);
    }
    if (dl.empty()) {
      out.value = 0.0;
      out.log_value = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_value = detail::deviation_sup_log(dl, strip, grid);
    out.value = out.log_value < -745.0 ? 0.0 : std::exp(out.log_value);
    return out;
  }

  auto sup_at = [&](double s, int g) { return detail::deviation_sup(dev, s, g); };
  if (!self_consistent) {
    out.value = sup_at(strip, grid);
    const double refined = sup_at(strip, 2 * grid);
    out.refinement_delta = std::abs(refined - out.value) / std::max(refined, 1e-300);
    out.value = refined;
    out.log_value = std::log(std::max(out.value, 1e-300));
    return out;
  }
  // g(eps) = sup over strip 1/eps is decreasing; solve g(eps) = eps by bisection.
  double lo = 1e-10, hi = 64.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double g = sup_at(1.0 / mid, grid / 2 > 16 ? grid / 2 : 16);
    if (g > mid)
      lo = mid;
    else
      hi = mid;
  }
  out.value = std::sqrt(lo * hi);
  out.strip = 1.0 / out.value;
  out.log_value = std::log(std::max(out.value, 1e-300));
  out.self_consistent = true;
  return out;
}

// ---------------------------------------------------------------------------
// Finite-radius evaluation of the perturbed Green function
//   G_{h,alpha}(x,y;z) = G_h(x,y;z)
//       - alpha sum_{m,n} (alpha Q + 1)^{-1}(m,n) G_h(x,m;z) G_h(n,y;z).

struct PerturbedGreen {
  Complex value;
  double radius_delta = 0.0;  // |value(radius) - value(radius-2)|
};

namespace detail {

inline Complex perturbed_green_at(PlanePoint x, PlanePoint y, const Energy& e, double alpha,
                                  int radius) {
  const KreinMatrix k = build_q_matrix(e, radius);
  const int dim = k.dim();
  HermitianMatrix m = k.entries;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) *= alpha;
    m(i, i) += 1.0;
  }
  const EigenResult eig = jacobi_eigensolver(m, true);
  std::vector<Complex> gx(dim), gy(dim);
  for (int i = 0; i < dim; ++i) {
    const LatticeSite s = k.site(i);
    const PlanePoint ps{double(s.m), double(s.n)};
    gx[i] = green::landau_green(x, ps, e);
    gy[i] = green::landau_green(ps, y, e);
  }
  // (alpha Q + 1)^{-1} via the eigendecomposition
  Complex corr{0.0, 0.0};
  for (int kk = 0; kk < dim; ++kk) {
    Complex vx{0.0, 0.0}, vy{0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
      vx += gx[i] * eig.vector_at(i, kk);           // sum_m G_h(x,m) v_k(m)
      vy += std::conj(eig.vector_at(i, kk)) * gy[i];  // sum_n conj v_k(n) G_h(n,y)
    }
    corr += vx * vy / eig.values[kk];
  }
  return green::landau_green(x, y, e) - alpha * corr;
}

}  // namespace detail

inline PerturbedGreen perturbed_green(PlanePoint x, PlanePoint y, const Energy& e, double alpha,
                                      int radius) {
  if (std::abs(e.z.imag()) > 0.0 || e.z.real() >= 0.0)
    throw DomainError("perturbed_green: requires real z < 0");
  const QDistance d = q_distance(e, alpha, std::min(radius, 4));
  if (d.value < 1e-6) throw NearSpectrumError("perturbed_green: z too close to the spectrum");
  PerturbedGreen out;
  out.value = detail::perturbed_green_at(x, y, e, alpha, radius);
  if (radius > 2)
    out.radius_delta = std::abs(out.value - detail::perturbed_green_at(x, y, e, alpha, radius - 2));
  return out;
}

}  // namespace lattice
}  // namespace landau
