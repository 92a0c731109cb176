#pragma once

// The nonlinear spectral problem on the negative half-line: the explicit
// solution z(beta, alpha) of q0(z) + 1/alpha = beta, the contraction map
//   Psi(beta) = q0(z(beta)) - q(z(beta), h) + mu a(z(beta), h),
// its fixed point zeta_alpha(mu, h) solving q(z,h) + 1/alpha = mu a(z,h),
// the normalized effective symbol at the fixed point, the mu-spectrum of the
// quantized symbol family, and the negative spectrum computed two ways:
// through the fixed-point reduction and by direct scanning of the lattice
// condition 0 in spec(Q(z,h) + 1/alpha).

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "landau/bandset.hpp"
#include "landau/core.hpp"
#include "landau/errors.hpp"
#include "landau/green.hpp"
#include "landau/harper.hpp"
#include "landau/lattice.hpp"

namespace landau {
namespace solver {

using harper::RationalFlux;
using lattice::FourierSymbol;

struct SolverConfig {
  int radius = 8;             // lattice coefficient radius for the direct scan
  int cutoff = 6;             // |m|+|n| cutoff of the normalized tail
  int n_theta = 64;           // Bloch grid
  int n_kappa = 64;
  double fp_tol = 1e-10;      // fixed-point residual tolerance (relative to scale)
  int fp_max_iter = 50;
  double beta_slack = 2.0;    // multiplies the |beta| <= 1/16 contraction region
  double mu_refine_tol = 1e-7;
  double band_merge_tol = 1e-9;
  double z_scan_min = -60.0;  // direct-scan window floor
  int z_scan_points = 240;
  bool tail_free = false;     // drop ring >= 2 coefficients (surrogate/testing mode)
  bool polish = true;         // refine band extrema beyond the Bloch grid
};

// ---------------------------------------------------------------------------
// z(beta, alpha) = -exp(log 4 + 2 psi(1) + 4 pi / alpha - 4 pi beta).

inline constexpr double kLog4Minus2Gamma =
    1.38629436111989062 - 2.0 * 0.57721566490153286;  // log 4 + 2 psi(1)

inline LogScaled z_of_beta(Complex beta, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("z_of_beta: alpha must be positive");
  const Complex expo = kLog4Minus2Gamma + kFourPi / alpha - kFourPi * beta;
  // z = -exp(expo): phase pi + Im expo
  return LogScaled(expo.real(), kPi + expo.imag());
}

// Fixed-point state: beta plus the derived representation of z = zeta.
// q0(z) + 1/alpha = beta holds exactly by construction, which keeps the
// normalized-constant evaluation free of the catastrophic cancellation in
// q(z,h) + 1/alpha at deep z.
struct ZetaPoint {
  double alpha = 0.0;
  double h = 0.0;
  Complex beta{0.0, 0.0};
  LogScaled z;
  Complex w;  // 1/2 - z/(2h)

  Complex z_complex() const { return z.to_complex(); }
  double log_abs_z() const { return z.log_mag; }
};

namespace detail {

// a(z,h) evaluated from w = 1/2 - z/(2h): a = (2 pi)^-1 e^{-h/4} Gamma(w)U(w,1;h/2).
inline LogScaled a_log_from_w(Complex w, double h) {
  return LogScaled(std::log(1.0 / kTwoPi) - 0.25 * h, 0.0) * specfun::gamma_u_log(w, 0.5 * h);
}

inline Complex a_from_w(Complex w, double h) {
  const LogScaled l = a_log_from_w(w, h);
  return (l.is_zero() || l.log_mag < -745.0) ? Complex(0.0, 0.0) : l.to_complex();
}

}  // namespace detail

// Psi(beta, alpha, mu, h) evaluated cancellation-free:
//   Psi = -(q - q0)(z(beta)) + mu a(z(beta), h),
//   (q - q0)(z) = -(4 pi)^-1 (psi(w) - log(w - 1/2)).
inline Complex psi_map(Complex beta, double alpha, Complex mu, double h) {
  if (!(h > 0.0)) throw DomainError("psi_map: requires h > 0");
  const LogScaled z = z_of_beta(beta, alpha);
  // |z| beyond double range: both terms are below the double underflow
  // threshold (the digamma difference is O(w^-2), a(z,h) is O(e^{-sqrt|z|})).
  if (z.log_mag >= 700.0) return Complex(0.0, 0.0);
  const Complex w = 0.5 - z.to_complex() / (2.0 * h);
  const Complex delta = specfun::digamma_minus_log_half(w) / kFourPi;  // -(q - q0)
  Complex mu_a{0.0, 0.0};
  if (mu != Complex(0.0, 0.0)) {
    const LogScaled la = detail::a_log_from_w(w, h);
    if (!la.is_zero() && la.log_mag > -745.0) mu_a = mu * la.to_complex();
  }
  return delta + mu_a;
}

struct FixedPointTrace {
  std::vector<Complex> iterates;
  double residual = 0.0;          // |beta - Psi(beta)| == |q(zeta)+1/alpha - mu a(zeta)|
  bool converged = false;
  double contraction_ratio = 0.0;  // max observed |d beta_{k+1}| / |d beta_k|
  int iterations = 0;
};

struct ZetaResult {
  ZetaPoint point;
  FixedPointTrace trace;
};

// Fixed point of Psi from beta_0 = 0.  Throws NonConvergenceError when the
// iterate leaves |beta| <= slack/16 or the iteration budget is exhausted.
inline ZetaResult zeta(Complex mu, double alpha, double h, double tol = 1e-10, int max_iter = 50,
                       double beta_slack = 2.0) {
  if (std::abs(mu) > 4.0 + 1e-12) throw DomainError("zeta: requires |mu| <= 4");
  if (!(h > 0.0)) throw DomainError("zeta: requires h > 0");
  if (!(alpha > 0.0)) throw DomainError("zeta: requires alpha > 0");
  const double beta_bound = beta_slack / 16.0;
  ZetaResult out;
  FixedPointTrace& tr = out.trace;
  Complex beta{0.0, 0.0};
  tr.iterates.push_back(beta);
  double prev_step = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Complex next = psi_map(beta, alpha, mu, h);
    const double step = std::abs(next - beta);
    tr.iterates.push_back(next);
    ++tr.iterations;
    if (std::abs(next) > beta_bound)
      throw NonConvergenceError("zeta: iterate left the contraction region |beta| <= " +
                                std::to_string(beta_bound));
    if (prev_step > 0.0) tr.contraction_ratio = std::max(tr.contraction_ratio, step / prev_step);
    beta = next;
    if (step <= 1e-16 * std::max(1.0, std::abs(beta))) break;
    prev_step = step;
  }
  // residual of the defining equation q + 1/alpha = mu a, evaluated as the
  // beta-space fixed-point defect
  tr.residual = std::abs(beta - psi_map(beta, alpha, mu, h));
  const double scale = std::max(1.0 / alpha, 1.0);
  tr.converged = tr.residual <= tol * scale;
  if (!tr.converged)
    throw NonConvergenceError("zeta: residual " + std::to_string(tr.residual) +
                              " above tolerance after " + std::to_string(tr.iterations) +
                              " iterations");
  out.point.alpha = alpha;
  out.point.h = h;
  out.point.beta = beta;
  out.point.z = z_of_beta(beta, alpha);
  // w = (0,0) flags a zeta beyond double range; callers use log accessors then
  out.point.w = out.point.z.log_mag < 700.0 ? 0.5 - out.point.z.to_complex() / (2.0 * h)
                                            : Complex(0.0, 0.0);
  return out;
}

// m_alpha(zeta) evaluated at a fixed point:
//   m_alpha = (q + 1/alpha)/a = (beta + (q - q0)(zeta)) / a(zeta).
// The (q - q0) call reproduces the value used inside the iteration bit for
// bit, so the quotient returns mu up to a few ulps of beta.
inline Complex m_alpha_at(const ZetaPoint& p) {
  if (p.w == Complex(0.0, 0.0))
    throw OverflowError("m_alpha_at: zeta beyond double range; no double-precision value");
  const Complex q_minus_q0 = -specfun::digamma_minus_log_half(p.w) / kFourPi;
  const LogScaled la = detail::a_log_from_w(p.w, p.h);
  if (la.is_zero() || la.log_mag < -745.0)
    throw DivisionDomainError("m_alpha_at: a(zeta, h) underflows; ratio undefined in doubles");
  return (p.beta + q_minus_q0) / la.to_complex();
}

// Direct m_alpha(z, h) = (q(z,h) + 1/alpha)/a(z,h) for moderate z.
inline Complex m_alpha_direct(const Energy& e, double alpha) {
  const Complex a = lattice::a_coeff(e);
  if (std::abs(a) == 0.0) throw DivisionDomainError("m_alpha_direct: a vanished");
  return (green::q_reg(e) + 1.0 / alpha) / a;
}

// ---------------------------------------------------------------------------
// Normalized effective symbol at the fixed point: constant mu, Harper part
// cos x + cos p, tail t(m,n) = lambda(m,n;zeta)/a(zeta) over 2 <= |m|+|n| <= cutoff.

struct PSymbol {
  FourierSymbol symbol;       // constant + harper + tail (doubles; tail may underflow to 0)
  ZetaResult zeta_result;
  Complex constant{0.0, 0.0};
};

inline PSymbol p_symbol(double mu, double alpha, double h, int cutoff,
                        const SolverConfig& cfg = SolverConfig{}) {
  PSymbol out;
  out.zeta_result = zeta(Complex(mu, 0.0), alpha, h, cfg.fp_tol, cfg.fp_max_iter, cfg.beta_slack);
  const ZetaPoint& p = out.zeta_result.point;
  FourierSymbol s;
  s.complete = false;
  s.cutoff_radius = cutoff;
  try {
    out.constant = m_alpha_at(p);
  } catch (const Error&) {
    // a(zeta) underflows doubles: the fixed-point identity pins the constant
    out.constant = Complex(mu, 0.0);
  }
  s.constant_term = out.constant;
  s.set(1, 0, 0.5);
  s.set(-1, 0, 0.5);
  s.set(0, 1, 0.5);
  s.set(0, -1, 0.5);
  if (!cfg.tail_free && p.w != Complex(0.0, 0.0)) {
    const LogScaled la = detail::a_log_from_w(p.w, h);
    for (int m = -cutoff; m <= cutoff; ++m)
      for (int n = -cutoff; n <= cutoff; ++n) {
        const int ring = std::abs(m) + std::abs(n);
        if (ring < 2 || ring > cutoff) continue;
        const int s2 = m * m + n * n;
        const LogScaled lam =
            LogScaled(std::log(1.0 / kFourPi) - 0.25 * h * s2, 0.0) *
            specfun::gamma_u_log(p.w, 0.5 * h * s2);
        s.set_log(m, n, lam / la);
      }
  }
  s.fit_envelope();
  out.symbol = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// mu-spectrum of the quantized family: mu such that 0 lies in the band set of
// the symbol mu + cos x + cos p + T(mu) at the given flux.

// One mu-interval of the mu-spectrum.  An endpoint is "open" when the fixed
// point stops converging there (the band reaches the boundary of the
// reduction's domain) rather than at a genuine band edge.
struct MuBand {
  double lo = 0.0, hi = 0.0;
  bool open_lo = false, open_hi = false;
};

struct MuSpectrum {
  std::vector<MuBand> bands;
  int evaluations = 0;
  bool domain_limited = false;  // some grid points left the contraction region

  BandSet as_bandset(double merge_tol = 0.0) const {
    BandSet b(merge_tol);
    for (const MuBand& m : bands) b.insert({m.lo, m.hi});
    return b;
  }
};

namespace detail {

// Signed distance from 0 to the spectrum of the quantized symbol at mu
// (negative inside a band); nullopt when zeta(mu) leaves its domain.
inline std::optional<double> mu_membership(double mu, double alpha, RationalFlux flux,
                                           const SolverConfig& cfg) {
  try {
    const PSymbol ps = p_symbol(mu, alpha, flux.h(), cfg.cutoff, cfg);
    FourierSymbol s = ps.symbol;
    s.constant_term = Complex(0.0, 0.0);  // test -mu against the centered bands
    const harper::BandStructure bs =
        harper::band_spectrum(s, flux, cfg.n_theta, cfg.n_kappa, cfg.band_merge_tol, cfg.polish);
    return bs.merged.signed_distance(-ps.constant.real());
  } catch (const NonConvergenceError&) {
    return std::nullopt;
  }
}

}  // namespace detail

inline MuSpectrum mu_spectrum(double alpha, RationalFlux flux, double mu_min, double mu_max,
                              int n_grid, const SolverConfig& cfg = SolverConfig{}) {
  if (n_grid < 8) throw DomainError("mu_spectrum: grid too coarse");
  MuSpectrum out;
  std::vector<double> mus(n_grid + 1);
  std::vector<std::optional<double>> dist(n_grid + 1);
  for (int i = 0; i <= n_grid; ++i) {
    mus[i] = mu_min + (mu_max - mu_min) * i / n_grid;
    dist[i] = detail::mu_membership(mus[i], alpha, flux, cfg);
    if (!dist[i]) out.domain_limited = true;
    ++out.evaluations;
  }
  // Bisect a band edge between an inside point and an outside point.
  auto bisect_edge = [&](double outside, double inside) {
    double lo = outside, hi = inside;
    for (int it = 0; it < 60 && std::abs(hi - lo) > cfg.mu_refine_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const std::optional<double> fm = detail::mu_membership(mid, alpha, flux, cfg);
      ++out.evaluations;
      if (fm && *fm < 0.0)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  int i = 0;
  while (i <= n_grid) {
    if (dist[i] && *dist[i] < 0.0) {
      MuBand band;
      if (i > 0 && dist[i - 1].has_value()) {
        band.lo = bisect_edge(mus[i - 1], mus[i]);
      } else {
        band.lo = mus[i];
        band.open_lo = (i > 0);  // stopped by the domain, not a band edge
      }
      int j = i;
      while (j + 1 <= n_grid && dist[j + 1] && *dist[j + 1] < 0.0) ++j;
      if (j < n_grid && dist[j + 1].has_value()) {
        band.hi = bisect_edge(mus[j + 1], mus[j]);
      } else {
        band.hi = mus[j];
        band.open_hi = (j < n_grid);
      }
      out.bands.push_back(band);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Negative spectrum: intervals on the z axis below -E0.
// Endpoints are stored as log|z| with z < 0 so deep-coupling runs remain exact.

struct ZInterval {
  double log_abs_lo = 0.0;  // z_lo = -exp(log_abs_lo)  (more negative endpoint)
  double log_abs_hi = 0.0;  // z_hi = -exp(log_abs_hi)
  std::string note;         // endpoint provenance (clips, stability info)

  double lo() const { return -std::exp(log_abs_lo); }
  double hi() const { return -std::exp(log_abs_hi); }
  bool representable() const { return log_abs_lo < 700.0; }
};

struct FixedPointSummary {
  int runs = 0;
  int max_iterations = 0;
  double worst_residual = 0.0;
  double worst_contraction = 0.0;

  void absorb(const FixedPointTrace& t) {
    ++runs;
    max_iterations = std::max(max_iterations, t.iterations);
    worst_residual = std::max(worst_residual, t.residual);
    worst_contraction = std::max(worst_contraction, t.contraction_ratio);
  }
};

struct SpectrumResult {
  std::vector<ZInterval> intervals;  // ordered by increasing z (decreasing |z|)
  std::string method;                // "reduced" | "direct"
  SolverConfig config;
  double total_measure = 0.0;        // in z units when representable, else 0
  std::vector<std::string> notes;
  FixedPointSummary fp_summary;      // endpoint-mapping fixed points (reduced method)
  double radius_stability = 0.0;     // endpoint shift under doubled radius (direct method)

  BandSet as_bandset(double merge_tol = 0.0) const {
    BandSet b(merge_tol);
    for (const ZInterval& iv : intervals)
      if (iv.representable()) b.insert({iv.lo(), iv.hi()});
    return b;
  }
};

// Reduced method (fixed-point): map each mu-band endpoint through zeta, clip
// to (-inf, -E0) using mu_clip = m_alpha(-E0).  Bands whose endpoint leaves
// the contraction region are closed off through the clip level; the
// assumption is recorded in the result notes and is cross-checkable against
// the direct method.
inline SpectrumResult negative_spectrum(double alpha, RationalFlux flux, double e0,
                                        const SolverConfig& cfg = SolverConfig{}) {
  if (!(e0 > 0.0)) throw DomainError("negative_spectrum: requires E0 > 0");
  const double h = flux.h();
  SpectrumResult out;
  out.method = "reduced";
  out.config = cfg;
  const MuSpectrum mus = mu_spectrum(alpha, flux, -4.0, 4.0, 96, cfg);
  if (mus.domain_limited)
    out.notes.push_back("mu scan limited by the fixed-point domain (moderate alpha)");

  std::optional<double> mu_clip;
  try {
    mu_clip = m_alpha_direct(Energy{Complex(-e0, 0.0), h}, alpha).real();
  } catch (const Error&) {
    mu_clip.reset();  // -E0 outside the evaluable domain; no clipping information
  }

  auto try_zeta = [&](double mu) -> std::optional<ZetaPoint> {
    try {
      const ZetaResult r = zeta(Complex(mu, 0.0), alpha, h, cfg.fp_tol, cfg.fp_max_iter,
                                cfg.beta_slack);
      out.fp_summary.absorb(r.trace);
      return r.point;
    } catch (const NonConvergenceError&) {
      return std::nullopt;
    }
  };

  for (const MuBand& band : mus.bands) {
    const std::optional<ZetaPoint> zlo = band.open_lo ? std::nullopt : try_zeta(band.lo);
    ZInterval iv;
    if (!zlo) {
      out.notes.push_back("band at mu=[" + std::to_string(band.lo) + "," + std::to_string(band.hi) +
                          "]: lower endpoint outside the fixed-point domain; band dropped");
      continue;
    }
    iv.log_abs_lo = zlo->log_abs_z();
    if (zlo->z.log_mag < 700.0 && zlo->z_complex().real() > -e0) continue;  // entirely above clip

    const std::optional<ZetaPoint> zhi = band.open_hi ? std::nullopt : try_zeta(band.hi);
    bool keep = true;
    // an endpoint beyond double range is certainly below any clip level
    if (zhi && (zhi->z.log_mag >= 700.0 || zhi->z_complex().real() <= -e0)) {
      iv.log_abs_hi = zhi->log_abs_z();
    } else {
      // the band's upper endpoint maps above -E0, or it reaches beyond the
      // fixed-point domain: close the interval at the clip level when the
      // band demonstrably covers it
      const bool covers_clip = mu_clip && *mu_clip >= band.lo - 1e-9 &&
                               (*mu_clip <= band.hi + 1e-9 || band.open_hi);
      if (covers_clip) {
        iv.log_abs_hi = std::log(e0);
        iv.note = band.open_hi ? "clipped at -E0 (band spans the fixed-point domain boundary)"
                               : "clipped at -E0";
      } else if (!zhi) {
        out.notes.push_back("band at mu=[" + std::to_string(band.lo) + "," +
                            std::to_string(band.hi) +
                            "]: upper endpoint outside the fixed-point domain and clip level "
                            "not inside the band; band dropped");
        keep = false;
      } else {
        keep = false;  // whole band above -E0
      }
    }
    if (keep && iv.log_abs_lo >= iv.log_abs_hi) {
      out.intervals.push_back(iv);
      if (iv.representable()) out.total_measure += iv.hi() - iv.lo();
    }
  }
  // mu-bands ascending map to z ascending (zeta is increasing); already ordered
  return out;
}

// ---------------------------------------------------------------------------
// Direct method: scan the lattice condition 0 in spec(Q(z,h) + 1/alpha).
// At rational flux the covariant operator Q + 1/alpha decomposes into q x q
// Bloch fibers built from the coefficients c(m,n) = Q((0,0),(m,n)); every
// fiber eigenvalue is strictly increasing in z (dQ/dz is positive definite),
// so band endpoints are located by bisecting the sign changes of the extreme
// eigenvalue statistics g_j^max(z), g_j^min(z).

namespace detail {

inline FourierSymbol krein_symbol(const Energy& e, double alpha, int radius) {
  lattice::LambdaTable lam(e);
  FourierSymbol s;
  s.complete = false;
  s.cutoff_radius = radius;
  s.constant_term = green::q_reg(e) + 1.0 / alpha;
  for (int m = -radius; m <= radius; ++m)
    for (int n = -radius; n <= radius; ++n) {
      if (m == 0 && n == 0) continue;
      s.set(m, n, lam.value(m * m + n * n));
    }
  s.fit_envelope();
  return s;
}

struct FiberExtremes {
  std::vector<double> band_min, band_max;  // per eigenvalue index
};

inline FiberExtremes fiber_extremes(const FourierSymbol& s, RationalFlux flux,
                                    const SolverConfig& cfg) {
  const harper::BandStructure bs =
      harper::band_spectrum(s, flux, cfg.n_theta, cfg.n_kappa, cfg.band_merge_tol, cfg.polish);
  FiberExtremes f;
  for (const Interval& iv : bs.per_index) {
    f.band_min.push_back(iv.lo);
    f.band_max.push_back(iv.hi);
  }
  return f;
}

}  // namespace detail

inline SpectrumResult direct_negative_spectrum(double alpha, RationalFlux flux, double e0,
                                               const SolverConfig& cfg = SolverConfig{}) {
  if (!(e0 > 0.0)) throw DomainError("direct_negative_spectrum: requires E0 > 0");
  const double h = flux.h();
  const int q = flux.q;
  SpectrumResult out;
  out.method = "direct";
  out.config = cfg;

  auto extremes_at = [&](double z, int radius) {
    return detail::fiber_extremes(detail::krein_symbol(Energy{Complex(z, 0.0), h}, alpha, radius),
                                  flux, cfg);
  };

  // scan grid, geometric in |z| from the floor up to -E0
  double z_floor = cfg.z_scan_min;
  const int n = cfg.z_scan_points;
  std::vector<double> zs(n + 1);
  std::vector<detail::FiberExtremes> fx(n + 1);
  const double la = std::log(-z_floor), lb = std::log(e0);
  for (int i = 0; i <= n; ++i) zs[i] = -std::exp(la + (lb - la) * i / n);
  // try to push the floor below the whole spectrum; when that fails the scan
  // covers the requested window only, and the result says so
  bool floor_certified = false;
  for (int guard = 0; guard < 6; ++guard) {
    const detail::FiberExtremes f = extremes_at(zs[0], cfg.radius);
    if (f.band_max[q - 1] < 0.0) {
      floor_certified = true;
      break;
    }
    z_floor *= 2.0;
    const double la2 = std::log(-z_floor);
    for (int i = 0; i <= n; ++i) zs[i] = -std::exp(la2 + (lb - la2) * i / n);
  }
  if (!floor_certified)
    out.notes.push_back("scan window floor not below the spectrum; deeper bands not certified");
  for (int i = 0; i <= n; ++i) fx[i] = extremes_at(zs[i], cfg.radius);

  auto bisect_zero = [&](int j, bool use_max, double zlo, double zhi, int radius) {
    auto g = [&](double z) {
      const detail::FiberExtremes f = extremes_at(z, radius);
      return use_max ? f.band_max[j] : f.band_min[j];
    };
    double flo = g(zlo);
    for (int it = 0; it < 60 && zhi - zlo > 1e-10 * std::max(1.0, std::abs(zlo)); ++it) {
      const double mid = 0.5 * (zlo + zhi);
      const double fm = g(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        zlo = mid;
        flo = fm;
      } else {
        zhi = mid;
      }
    }
    return 0.5 * (zlo + zhi);
  };

  double stability = 0.0;
  for (int j = 0; j < q; ++j) {
    // entry: g_j^max crosses 0 upward; exit: g_j^min crosses 0
    std::optional<double> z_in, z_out;
    for (int i = 1; i <= n; ++i) {
      if (!z_in && fx[i - 1].band_max[j] < 0.0 && fx[i].band_max[j] >= 0.0)
        z_in = bisect_zero(j, true, zs[i - 1], zs[i], cfg.radius);
      if (!z_out && fx[i - 1].band_min[j] < 0.0 && fx[i].band_min[j] >= 0.0)
        z_out = bisect_zero(j, false, zs[i - 1], zs[i], cfg.radius);
    }
    ZInterval iv;
    if (!z_in) {
      if (!z_out || floor_certified) continue;  // band j never reaches 0 below -E0
      // band entered below an uncertified floor but exits inside the window
      iv.log_abs_lo = std::log(-zs[0]);
      iv.log_abs_hi = std::log(-*z_out);
      iv.note = "entry below the scan floor";
      out.intervals.push_back(iv);
      out.total_measure += iv.hi() - iv.lo();
      continue;
    }
    iv.log_abs_lo = std::log(-*z_in);
    if (z_out) {
      iv.log_abs_hi = std::log(-*z_out);
    } else {
      iv.log_abs_hi = std::log(e0);
      iv.note = "clipped at -E0";
    }
    // radius-stability: relocate the entry endpoint with a doubled coefficient
    // radius when the wider evaluation still brackets it nearby
    const double wlo = *z_in - 0.05 * std::abs(*z_in), whi = *z_in + 0.05 * std::abs(*z_in);
    const auto g2 = [&](double z) {
      return detail::fiber_extremes(
                 detail::krein_symbol(Energy{Complex(z, 0.0), h}, alpha, 2 * cfg.radius), flux,
                 cfg)
          .band_max[j];
    };
    if (g2(wlo) < 0.0 && g2(whi) >= 0.0) {
      const double z_in2 = bisect_zero(j, true, wlo, whi, 2 * cfg.radius);
      stability = std::max(stability, std::abs(z_in2 - *z_in));
    } else {
      stability = std::max(stability, whi - wlo);  // honest upper bound
    }
    out.intervals.push_back(iv);
    out.total_measure += iv.hi() - iv.lo();
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const ZInterval& a, const ZInterval& b) { return a.log_abs_lo > b.log_abs_lo; });
  out.radius_stability = stability;
  out.notes.push_back("radius-stability endpoint delta (radius vs 2x): " + std::to_string(stability));
  return out;
}

// ---------------------------------------------------------------------------
// Certificate per Lemma-13-style domain diagnostics: for a converged zeta with
// |q + 1/alpha| <= R |a| the computable chain
//   |1/alpha - (log|z| - log 4 - 2 psi(1))/4pi| <= R |a(z,h)| + log((|z|+h)/|z|)/4pi
// must hold; the run-specific threshold E(alpha) is the root of the equality.
struct DomainCertificate {
  double e_threshold = 0.0;   // computed E(alpha)
  bool holds = false;         // Re zeta < -E(alpha)
  double margin = 0.0;
};

inline DomainCertificate lemma13_certificate(const ZetaPoint& p, double big_r = 5.0) {
  DomainCertificate cert;
  if (p.z.log_mag >= 690.0) {  // beyond double evaluation range: trivially deep
    cert.e_threshold = 0.0;
    cert.holds = true;
    cert.margin = p.z.log_mag;
    return cert;
  }
  const double h = p.h;
  auto admissible = [&](double E) {
    const Energy e{Complex(-E, 0.0), h};
    const double a_abs = std::abs(lattice::a_coeff(e));
    const double lhs = std::abs(1.0 / p.alpha - (std::log(E) - kLog4Minus2Gamma) / kFourPi);
    const double rhs = big_r * a_abs + std::log1p(h / E) / kFourPi;
    return rhs - lhs >= 0.0;
  };
  // E(alpha): lower edge of the admissible deep component anchored at the
  // beta = 0 depth.  At small alpha this detaches from 0 and the containment
  // Re zeta < -E(alpha) is a sharp diagnostic; at moderate alpha the
  // admissible set may reach 0 and the certificate is vacuous, reported as
  // E = 0.
  const double anchor = std::exp(std::min(
      kLog4Minus2Gamma + kFourPi / p.alpha, 690.0));
  double edge = 0.0;  // no exclusion found
  double hi_adm = anchor;
  for (double e = anchor; e > 1e-3; e /= 1.5) {
    if (!admissible(e)) {
      // bisect the crossing in [e, hi_adm]
      double lo = e, hi = hi_adm;
      for (int it = 0; it < 80 && hi / lo > 1.0 + 1e-12; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (admissible(mid))
          hi = mid;
        else
          lo = mid;
      }
      edge = hi;
      break;
    }
    hi_adm = e;
  }
  cert.e_threshold = edge;
  cert.margin = edge > 0.0 ? p.z.log_mag - std::log(edge) : p.z.log_mag;
  cert.holds = cert.margin >= -1e-9;
  return cert;
}

// ---------------------------------------------------------------------------
// Flux sweep: band/gap diagnostics along a list of rational fluxes.

struct FluxDiagnostics {
  RationalFlux flux{1, 1};
  int band_count = 0;
  double total_measure = 0.0;
  double largest_gap = 0.0;
  bool touching = false;  // adjacent bands meeting within merge tolerance
};

inline std::vector<FluxDiagnostics> flux_sweep_diagnostics(double alpha,
                                                           const std::vector<RationalFlux>& fluxes,
                                                           double e0,
                                                           const SolverConfig& cfg = SolverConfig{}) {
  std::vector<FluxDiagnostics> rows;
  for (const RationalFlux& f : fluxes) {
    const SpectrumResult r = negative_spectrum(alpha, f, e0, cfg);
    FluxDiagnostics d;
    d.flux = f;
    d.band_count = static_cast<int>(r.intervals.size());
    d.total_measure = r.total_measure;
    const BandSet b = r.as_bandset();
    d.largest_gap = b.empty() ? 0.0 : b.largest_gap();
    // touching: bands that merge under a small tolerance
    const BandSet merged = r.as_bandset(1e-6);
    d.touching = merged.intervals().size() < r.intervals.size();
    rows.push_back(d);
  }
  return rows;
}

}  // namespace solver
}  // namespace landau
