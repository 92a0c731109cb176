#pragma once

// Self-contained special functions: digamma, Gamma(a)*U(a,1;x) via the Laplace
// integral, modified Bessel K0/K1, and principal-branch log/sqrt.  References
// are to Abramowitz & Stegun (A&S).

#include <cmath>
#include <complex>

#include "landau/core.hpp"
#include "landau/errors.hpp"
#include "landau/quadrature.hpp"

namespace landau {
namespace specfun {

namespace detail {

// Asymptotic tail of psi(w), A&S 6.3.18; needs |w| >= 12 away from the
// negative axis.
inline Complex digamma_asymptotic(Complex w) {
  const Complex inv = 1.0 / w, inv2 = inv * inv;
  // Bernoulli coefficients B_2k/(2k): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760.
  Complex s = std::log(w) - 0.5 * inv;
  Complex p = inv2;
  s -= p * (1.0 / 12.0);
  p *= inv2;
  s += p * (1.0 / 120.0);
  p *= inv2;
  s -= p * (1.0 / 252.0);
  p *= inv2;
  s += p * (1.0 / 240.0);
  p *= inv2;
  s -= p * (1.0 / 132.0);
  p *= inv2;
  s += p * (691.0 / 32760.0);
  return s;
}

}  // namespace detail

// psi(z), z off the non-positive integers.  Recurrence shift into Re z >= 12,
// reflection for Re z < 0.5.  Relative accuracy ~1e-13 for |z| <= 1e6.
inline Complex digamma(Complex z) {
  require_finite(z, "digamma");
  const double rounded = std::round(z.real());
  if (rounded <= 0.0 && std::abs(z - Complex(rounded, 0.0)) < 1e-12)
    throw PoleError("digamma: argument within 1e-12 of a non-positive integer");
  // |Im z| >= 12 is already inside the asymptotic domain for any Re z; the
  // reflection would overflow sin(pi z) there
  if (z.real() < 0.5 && std::abs(z.imag()) < 12.0) {
    // A&S 6.3.7: psi(1-z) = psi(z) + pi*cot(pi z).
    const Complex pz = kPi * z;
    return digamma(1.0 - z) - kPi * std::cos(pz) / std::sin(pz);
  }
  Complex shift{0.0, 0.0};
  while (z.real() < 12.0 && std::abs(z) < 12.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return detail::digamma_asymptotic(z) + shift;
}

inline double digamma(double x) { return digamma(Complex(x, 0.0)).real(); }

// psi(w) - log(w - 1/2), stable against the cancellation of the two terms for
// large w.  Series from combining A&S 6.3.18 with log(1 - 1/2w).
inline Complex digamma_minus_log_half(Complex w) {
  if (std::abs(w) < 1e4) return digamma(w) - std::log(w - 0.5);
  const Complex inv = 1.0 / w;
  // 1/(24 w^2) + 1/(24 w^3) + 23/(960 w^4) + 1/(160 w^5) - 1/733.1 w^6 ...
  return inv * inv *
         (1.0 / 24.0 +
          inv * (1.0 / 24.0 + inv * (23.0 / 960.0 + inv * (1.0 / 160.0 + inv * (-132.0 / 96768.0)))));
}

enum class BranchOp { log, sqrt };

// Holomorphic continuation of the positive-axis log/sqrt; the cut is (-inf, 0].
inline Complex principal_branch(Complex z, BranchOp which) {
  require_finite(z, "principal_branch");
  const double scale = std::abs(z);
  if (scale == 0.0 || (z.real() <= 0.0 && std::abs(z.imag()) <= 1e-12 * scale))
    throw BranchCutError("principal_branch: argument on the cut (-inf, 0]");
  return which == BranchOp::log ? std::log(z) : std::sqrt(z);
}

// ---------------------------------------------------------------------------
// Modified Bessel functions K0, K1.

namespace detail {

// Power series, |w| <= 2 (A&S 9.6.11 / 9.6.13, complex-safe).
inline Complex bessel_k_series(int order, Complex w) {
  const Complex q = 0.25 * w * w;  // (w/2)^2
  const Complex lg = std::log(0.5 * w);
  const double egam = 0.57721566490153286060651209;
  if (order == 0) {
    Complex term{1.0, 0.0}, i0{1.0, 0.0}, sum{0.0, 0.0};
    double harmonic = 0.0;
    for (int k = 1; k <= 40; ++k) {
      term *= q / double(k * k);
      harmonic += 1.0 / k;
      i0 += term;
      sum += term * harmonic;
      if (std::abs(term) < 1e-18 * std::abs(i0)) break;
    }
    return -(lg + egam) * i0 + sum;
  }
  // K1 = log(w/2)*I1(w) + 1/w - (w/4) * sum_k [psi(k+1)+psi(k+2)] q^k / (k! (k+1)!)
  Complex i1 = 0.5 * w, term = 0.5 * w;
  for (int k = 1; k <= 40; ++k) {
    term *= q / double(k * (k + 1));
    i1 += term;
    if (std::abs(term) < 1e-18 * std::abs(i1)) break;
  }
  Complex sum{0.0, 0.0}, fac{1.0, 0.0};
  double psi_a = -egam, psi_b = 1.0 - egam;  // psi(1), psi(2)
  for (int k = 0; k <= 40; ++k) {
    if (k > 0) {
      fac *= q / double(k * (k + 1));
      psi_a += 1.0 / k;
      psi_b += 1.0 / (k + 1);
    }
    const Complex t = fac * (psi_a + psi_b);
    sum += t;
    if (k > 3 && std::abs(t) < 1e-18 * std::abs(sum)) break;
  }
  return lg * i1 + 1.0 / w - 0.25 * w * sum;
}

// Scaled asymptotic series: K_nu(w) ~ sqrt(pi/2w) e^{-w} sum_k a_k(nu)/w^k
// (A&S 9.7.2); accurate to ~1e-14 for |w| >= 30.
inline Complex bessel_k_asymptotic_scaled(int order, Complex w) {
  const double mu = 4.0 * order * order;
  Complex sum{1.0, 0.0}, term{1.0, 0.0};
  for (int k = 1; k <= 14; ++k) {
    const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= Complex(num / (8.0 * k), 0.0) / w;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return std::sqrt(kPi / (2.0 * w)) * sum;
}

}  // namespace detail

// K0/K1 of a complex argument with Re w > 0 (principal-branch continuation).
inline Complex bessel_k_complex(int order, Complex w) {
  if (order != 0 && order != 1) throw DomainError("bessel_k: order must be 0 or 1");
  require_finite(w, "bessel_k");
  if (w.real() <= 0.0) throw BranchCutError("bessel_k: requires Re w > 0");
  const double aw = std::abs(w);
  if (aw <= 2.0) return detail::bessel_k_series(order, w);
  if (aw < 30.0) {
    // cosh-integral with the e^{-w} peak factored out
    const double upper = std::acosh(1.0 + 50.0 / w.real());
    auto f = [&](double s) -> Complex {
      return std::exp(-w * (std::cosh(s) - 1.0)) * (order == 0 ? 1.0 : std::cosh(s));
    };
    const QuadResult q = adaptive_gl(f, 0.0, upper, 1e-13, 1e-300);
    return q.value * std::exp(-w);
  }
  return detail::bessel_k_asymptotic_scaled(order, w) * std::exp(-w);
}

// log K_nu(w) for real w > 0; remains finite far beyond double underflow.
inline double bessel_k_log(int order, double x) {
  if (x <= 0.0) throw DomainError("bessel_k_log: requires x > 0");
  if (x < 30.0) return std::log(bessel_k_complex(order, Complex(x, 0.0)).real());
  const Complex s = detail::bessel_k_asymptotic_scaled(order, Complex(x, 0.0));
  return -x + std::log(s.real());
}

// K0(x) or K1(x), x > 0, relative accuracy ~1e-12.
inline double bessel_k(int order, double x) {
  if (x <= 0.0) throw DomainError("bessel_k: requires x > 0");
  if (x > 700.0) {
    const double lg = bessel_k_log(order, x);
    return lg < -745.0 ? 0.0 : std::exp(lg);
  }
  return bessel_k_complex(order, Complex(x, 0.0)).real();
}

// ---------------------------------------------------------------------------
// Gamma(a) U(a,1;x) via the Laplace integral, A&S 13.2.5:
//   Gamma(a) U(a,1;x) = int_0^inf e^{-xt} t^{a-1} (1+t)^{-a} dt,  Re a > 0.
// Substituting t = e^v gives integrand exp(-x e^v - a log1p(e^{-v})), smooth
// on the whole line with a single peak; adaptive GL handles it uniformly in a.

namespace detail {

inline double gamma_u_peak(double re_a, double x) {
  // maximize -x e^v - re_a log1p(e^{-v}):  x e^v (e^v + 1) = re_a.
  const double ev = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * re_a / x));
  return std::log(std::max(ev, 1e-300));
}

}  // namespace detail

// Log-scaled value; valid for Re a > 0, x > 0.  When Re(a) x > 1e16 the
// integrand peak (width (4ax)^{-1/4} around v = log sqrt(a/x)) is too narrow
// for double-resolved quadrature, and the uniform Bessel approximation
// Gamma(a)U(a,1;x) ~ 2 K0(2 sqrt(ax)) e^{x/2} is used instead (relative error
// O((1+x^2)/sqrt(|a| x)); the deep-coupling callers in that regime need only
// log-scale accuracy).
inline LogScaled gamma_u_log(Complex a, double x, double rel_tol = 1e-11) {
  require_finite(a, "gamma_u");
  if (!(a.real() > 0.0)) throw DomainError("gamma_u: requires Re a > 0");
  if (!(x > 0.0)) throw DomainError("gamma_u: requires x > 0");
  if (a.real() * x > 1e16) {
    const Complex s = std::sqrt(a * x);
    const double log_k0 = bessel_k_log(0, 2.0 * s.real());
    const LogScaled k0 = a.imag() == 0.0
                             ? LogScaled(log_k0, 0.0)
                             : LogScaled::from(detail::bessel_k_asymptotic_scaled(0, 2.0 * s)) *
                                   LogScaled(-2.0 * s.real(), -2.0 * s.imag());
    return LogScaled(std::log(2.0) + 0.5 * x, 0.0) * k0;
  }
  const double vp = detail::gamma_u_peak(a.real(), x);
  auto phi = [&](double v) { return -x * std::exp(v) - a.real() * std::log1p(std::exp(-v)); };
  auto pre = [&](double v) -> Complex {
    if (a.imag() == 0.0) return Complex(1.0, 0.0);
    return std::exp(Complex(0.0, -a.imag() * std::log1p(std::exp(-v))));
  };
  return laplace_log_quadrature(phi, pre, vp, 46.0 + 4.0 * std::log1p(std::abs(a.imag())), rel_tol);
}

// Gamma(a) U(a,1;x) as a plain complex value (throws on overflow; underflows to 0).
inline Complex gamma_u(Complex a, double x) {
  const LogScaled v = gamma_u_log(a, x);
  if (v.is_zero() || v.log_mag < -745.0) return Complex(0.0, 0.0);
  return v.to_complex();
}

}  // namespace specfun
}  // namespace landau
