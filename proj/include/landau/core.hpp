#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "landau/errors.hpp"

namespace landau {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw DomainError(std::string(what) + ": non-finite value");
}

// Complex number stored as (log-magnitude, phase).  Magnitudes like
// exp(-exp(4*pi/alpha)) appear in the deep negative-energy regime and fall far
// outside double range; products and quotients stay exact in this form.
struct LogScaled {
  double log_mag = -std::numeric_limits<double>::infinity();  // log |value|
  double phase = 0.0;                                         // in (-pi, pi]

  LogScaled() = default;
  LogScaled(double lm, double ph) : log_mag(lm), phase(wrap(ph)) {}

  static double wrap(double ph) {
    if (ph > kPi || ph <= -kPi) {
      ph = std::remainder(ph, kTwoPi);  // in [-pi, pi]
      if (ph <= -kPi) ph += kTwoPi;
    }
    return ph;
  }

  static LogScaled from(Complex z) {
    if (z == Complex(0.0, 0.0)) return LogScaled();
    return LogScaled(std::log(std::abs(z)), std::arg(z));
  }
  static LogScaled from_real(double x) {
    if (x == 0.0) return LogScaled();
    return LogScaled(std::log(std::abs(x)), x > 0 ? 0.0 : kPi);
  }
  static LogScaled zero() { return LogScaled(); }

  bool is_zero() const { return log_mag == -std::numeric_limits<double>::infinity(); }

  // cos/sin with the axis directions exact, so real-axis arithmetic stays real
  static Complex unit_phasor(double ph) {
    if (ph == 0.0) return Complex(1.0, 0.0);
    if (ph == kPi || ph == -kPi) return Complex(-1.0, 0.0);
    return Complex(std::cos(ph), std::sin(ph));
  }

  Complex to_complex() const {
    if (is_zero()) return Complex(0.0, 0.0);
    if (log_mag > 709.0) throw OverflowError("LogScaled: magnitude exceeds double range");
    return std::exp(log_mag) * unit_phasor(phase);
  }
  // Underflows silently to 0, never overflows silently.
  double to_real_or_zero() const {
    if (is_zero() || log_mag < -745.0) return 0.0;
    if (log_mag > 709.0) throw OverflowError("LogScaled: magnitude exceeds double range");
    return std::exp(log_mag) * std::cos(phase);
  }

  friend LogScaled operator*(const LogScaled& a, const LogScaled& b) {
    if (a.is_zero() || b.is_zero()) return LogScaled();
    return LogScaled(a.log_mag + b.log_mag, a.phase + b.phase);
  }
  friend LogScaled operator/(const LogScaled& a, const LogScaled& b) {
    if (b.is_zero()) throw DivisionDomainError("LogScaled: division by zero");
    if (a.is_zero()) return LogScaled();
    return LogScaled(a.log_mag - b.log_mag, a.phase - b.phase);
  }
  // Sum via factoring out the larger magnitude.
  friend LogScaled operator+(const LogScaled& a, const LogScaled& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogScaled &big = (a.log_mag >= b.log_mag) ? a : b;
    const LogScaled &sml = (a.log_mag >= b.log_mag) ? b : a;
    const double r = std::exp(sml.log_mag - big.log_mag);
    const Complex s = unit_phasor(big.phase) + r * unit_phasor(sml.phase);
    if (s == Complex(0.0, 0.0)) return LogScaled();
    return LogScaled(big.log_mag + std::log(std::abs(s)), std::arg(s));
  }
};

// Point in the plane; lattice sites embed as integer coordinates.
struct PlanePoint {
  double x1 = 0.0;
  double x2 = 0.0;
};

inline double dist2(PlanePoint a, PlanePoint b) {
  const double d1 = a.x1 - b.x1, d2 = a.x2 - b.x2;
  return d1 * d1 + d2 * d2;
}
inline double dist(PlanePoint a, PlanePoint b) { return std::sqrt(dist2(a, b)); }

// Spectral parameter z together with the field strength h >= 0.
// Closed-form kernel evaluation requires Re z < h and z away from the
// Landau levels E_n = (2n-1) h.
struct Energy {
  Complex z;
  double h = 0.0;

  Energy(Complex z_, double h_) : z(z_), h(h_) {
    require_finite(z, "Energy.z");
    if (!(h >= 0.0)) throw DomainError("Energy: field h must be >= 0");
  }

  bool below_field() const { return z.real() < h; }

  // Distance guard against the Gamma-factor poles of the closed form.
  void require_off_landau_levels() const {
    if (h <= 0.0) return;
    const int n = static_cast<int>(std::lround((z.real() / h + 1.0) / 2.0));
    if (n >= 1) {
      const double level = (2.0 * n - 1.0) * h;
      if (std::abs(z - Complex(level, 0.0)) < 1e-8 * h)
        throw PoleError("Energy: z within 1e-8*h of Landau level");
    }
  }
};

}  // namespace landau
