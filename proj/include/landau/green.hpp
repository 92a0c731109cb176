#pragma once

// Evaluators for the Landau heat kernel, the Landau and free Green functions
// (closed form and quadrature), and the regularized diagonal values q(z,h),
// q0(z).
//
// Conventions: field h >= 0 in the Landau gauge, Landau levels E_n = (2n-1)h.
// The magnetic Green function factorizes as
//   G_h(x,y;z) = exp(-i h (x1-y1)(x2+y2)/2) * F_h(|x-y|^2; z),
// with F_h positive for real z < h.  The gauge phase is independent of t, so
// the same radial factor serves the heat-kernel transforms.

#include <cmath>
#include <complex>

#include "landau/core.hpp"
#include "landau/errors.hpp"
#include "landau/quadrature.hpp"
#include "landau/specfun.hpp"

namespace landau {
namespace green {

inline void require_finite(PlanePoint p, const char* what) {
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2))
    throw DomainError(std::string(what) + ": non-finite point");
}

inline Complex gauge_phase(PlanePoint x, PlanePoint y, double h) {
  const double arg = -0.5 * h * (x.x1 - y.x1) * (x.x2 + y.x2);
  return Complex(std::cos(arg), std::sin(arg));
}

// log |P_h(x,y;t)| as a function of r^2 = |x-y|^2; h = 0 gives the free kernel.
inline double heat_kernel_abs_log(double r2, double t, double h) {
  if (!(t > 0.0)) throw DomainError("heat_kernel: requires t > 0");
  if (h == 0.0) return -std::log(4.0 * kPi * t) - r2 / (4.0 * t);
  const double u = h * t;
  // log sinh(u): series below 1e-4, overflow-safe form above
  const double log_sinh = (u < 1e-4) ? std::log(u) + u * u / 6.0
                                     : u + std::log1p(-std::exp(-2.0 * u)) - std::log(2.0);
  const double coth = 1.0 + 2.0 / std::expm1(2.0 * u);
  return std::log(h / (4.0 * kPi)) - log_sinh - 0.25 * h * r2 * coth;
}

// Integral kernel of exp(-t H_h); h = 0 gives the free heat kernel.
inline Complex heat_kernel(PlanePoint x, PlanePoint y, double t, double h) {
  require_finite(x, "heat_kernel");
  require_finite(y, "heat_kernel");
  const double lp = heat_kernel_abs_log(dist2(x, y), t, h);
  return gauge_phase(x, y, h) * std::exp(lp);
}

namespace detail {

// Exponent of the Laplace-transform integrand in v = log t:
//   phi(v) = Re z * t + log|P_h(t)| + (1 + weight) * v,   t = e^v.
// weight = 0 for the resolvent kernel, 1 for the squared-resolvent kernel.
inline double transform_exponent(double v, double r2, double re_z, double h, int weight) {
  const double t = std::exp(v);
  return re_z * t + heat_kernel_abs_log(r2, t, h) + (1.0 + weight) * v;
}

inline double find_transform_peak(double r2, double re_z, double h, int weight) {
  // coarse scan over a generous window in v, then golden-section refinement.
  // The window covers both the e^{zt} decay scale and the Gaussian saddle at
  // t ~ r / (2 sqrt(h - Re z)).
  const double decay = h - re_z;
  double t_hi = 80.0 / decay;
  if (r2 > 0.0) t_hi = std::max(t_hi, 8.0 * std::sqrt(r2) / (2.0 * std::sqrt(decay)));
  double lo = -40.0, hi = std::log(t_hi);
  if (r2 > 0.0) lo = std::min(lo, std::log(r2 / 200.0));
  double best_v = lo, best = -1e308;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double v = lo + (hi - lo) * i / n;
    const double f = transform_exponent(v, r2, re_z, h, weight);
    if (f > best) {
      best = f;
      best_v = v;
    }
  }
  double a = best_v - (hi - lo) / n, b = best_v + (hi - lo) / n;
  const double gr = 0.61803398874989485;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (transform_exponent(c, r2, re_z, h, weight) > transform_exponent(d, r2, re_z, h, weight))
      b = d;
    else
      a = c;
    c = b - gr * (b - a);
    d = a + gr * (b - a);
    if (b - a < 1e-12) break;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// int_0^inf t^weight e^{zt} |P_h(x,y;t)| dt in log-scaled form.
// Requires Re z < h; r2 = |x-y|^2 may be 0 only for weight >= 1.
inline LogScaled f_kernel_log(double r2, Complex z, double h, int weight = 0,
                              double rel_tol = 1e-11) {
  if (!(z.real() < h)) throw DomainError("f_kernel: requires Re z < h");
  if (r2 <= 0.0 && weight == 0)
    throw CoincidenceError("f_kernel: diverges at coinciding points");
  const double vp = detail::find_transform_peak(r2, z.real(), h, weight);
  auto phi = [&](double v) { return detail::transform_exponent(v, r2, z.real(), h, weight); };
  auto pre = [&](double v) -> Complex {
    if (z.imag() == 0.0) return Complex(1.0, 0.0);
    const double a = z.imag() * std::exp(v);
    return Complex(std::cos(a), std::sin(a));
  };
  return laplace_log_quadrature(phi, pre, vp, 48.0, rel_tol);
}

enum class GreenMode { closed_form, quadrature };

// Gauge-phase-stripped Landau Green function in log-scaled form (closed form).
inline LogScaled f_kernel_closed_log(double r2, const Energy& e) {
  if (!(e.z.real() < e.h)) throw DomainError("landau_green: requires Re z < h");
  if (r2 <= 0.0) throw CoincidenceError("landau_green: coinciding points");
  e.require_off_landau_levels();
  const Complex a = 0.5 - e.z / (2.0 * e.h);
  const LogScaled gu = specfun::gamma_u_log(a, 0.5 * e.h * r2);
  return LogScaled(std::log(1.0 / (4.0 * kPi)) - 0.25 * e.h * r2, 0.0) * gu;
}

// F_h(x,y;z): positive for real z < h.  Closed form via Gamma(a)U(a,1;x).
inline Complex f_kernel(PlanePoint x, PlanePoint y, const Energy& e,
                        GreenMode mode = GreenMode::closed_form) {
  const double r2 = dist2(x, y);
  if (e.h == 0.0) {
    if (r2 <= 0.0) throw CoincidenceError("f_kernel: coinciding points");
    const Complex w = specfun::principal_branch(-e.z, specfun::BranchOp::sqrt);
    return specfun::bessel_k_complex(0, w * std::sqrt(r2)) / kTwoPi;
  }
  const LogScaled v = (mode == GreenMode::closed_form) ? f_kernel_closed_log(r2, e)
                                                       : f_kernel_log(r2, e.z, e.h);
  return v.to_complex();
}

// Second-order variant F^(2)_h: the t-weighted transform; finite at x = y.
inline Complex f_kernel2(PlanePoint x, PlanePoint y, const Energy& e) {
  return f_kernel_log(dist2(x, y), e.z, e.h, 1).to_complex();
}

// Landau Green function.  closed_form uses Gamma(1/2 - z/2h) U(1/2 - z/2h, 1; h r^2/2);
// quadrature uses the heat-kernel Laplace transform.  Both require Re z < h.
inline Complex landau_green(PlanePoint x, PlanePoint y, const Energy& e,
                            GreenMode mode = GreenMode::closed_form) {
  require_finite(x, "landau_green");
  require_finite(y, "landau_green");
  if (dist2(x, y) <= 0.0) throw CoincidenceError("landau_green: coinciding points");
  return gauge_phase(x, y, e.h) * f_kernel(x, y, e, mode);
}

// Free Green functions, A&S-closed forms:
//   order 1: (2 pi)^-1 K0(sqrt(-z) |x-y|)
//   order 2: |x-y| (4 pi sqrt(-z))^-1 K1(sqrt(-z) |x-y|)   [kernel of (H_0-z)^-2]
inline Complex free_green(int order, PlanePoint x, PlanePoint y, Complex z) {
  if (order != 1 && order != 2) throw DomainError("free_green: order must be 1 or 2");
  const double r = dist(x, y);
  if (r <= 0.0) throw CoincidenceError("free_green: coinciding points");
  const Complex w = specfun::principal_branch(-z, specfun::BranchOp::sqrt);
  if (order == 1) return specfun::bessel_k_complex(0, w * r) / kTwoPi;
  return r / (kFourPi * w) * specfun::bessel_k_complex(1, w * r);
}

// Diagonal value of the order-2 free kernel (finite): G0^(2)(x,x;z) = -1/(4 pi z).
inline Complex free_green2_diag(Complex z) {
  specfun::principal_branch(-z, specfun::BranchOp::sqrt);  // domain check
  return -1.0 / (kFourPi * z);
}

// Regularized diagonal of the Landau Green function:
//   q(z,h) = lim_{x->y} ( G_h(x,y;z) - (2 pi)^-1 log(1/|x-y|) )
//          = -(4 pi)^-1 ( psi(1/2 - z/2h) + log(h/2) - 2 psi(1) ).
inline Complex q_reg(const Energy& e) {
  if (!(e.h > 0.0)) throw DomainError("q_reg: requires h > 0");
  e.require_off_landau_levels();
  const Complex w = 0.5 - e.z / (2.0 * e.h);
  return -(specfun::digamma(w) + std::log(0.5 * e.h) - 2.0 * specfun::digamma(Complex(1.0, 0.0))) /
         kFourPi;
}

// Free-field counterpart: q0(z) = -(log(-z) - log 4 - 2 psi(1)) / 4 pi.
inline Complex q0(Complex z) {
  const Complex lg = specfun::principal_branch(-z, specfun::BranchOp::log);
  constexpr double two_gamma = 2.0 * 0.57721566490153286060651209;
  return -(lg - std::log(4.0) + two_gamma) / kFourPi;
}

// Stable q(z,h) - q0(z) = -(4 pi)^-1 (psi(w) - log(w - 1/2)),  w = 1/2 - z/2h.
// Cancellation-free for deep negative z.
inline Complex q_minus_q0(Complex w) {
  return -specfun::digamma_minus_log_half(w) / kFourPi;
}

// Kernel of (H_h - z)^-2: t-weighted heat transform; requires Re z < h.
inline Complex green2(PlanePoint x, PlanePoint y, const Energy& e) {
  if (e.h == 0.0) {
    if (dist2(x, y) <= 0.0) return free_green2_diag(e.z);
    return free_green(2, x, y, e.z);
  }
  return gauge_phase(x, y, e.h) * f_kernel2(x, y, e);
}

}  // namespace green
}  // namespace landau
