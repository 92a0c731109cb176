#pragma once

// Numerical verifiers for the two-sided kernel estimates: each check
// evaluates both sides of an inequality on a fixed fixture grid and reports
// the worst margin (required side minus other side).  A report passes when
// the worst margin is >= -1e-12.  The shipped grids are versioned constants
// so reports reproduce bit for bit.

#include <cmath>
#include <string>
#include <vector>

#include "landau/core.hpp"
#include "landau/errors.hpp"
#include "landau/green.hpp"

namespace landau {
namespace verify {

enum class LemmaId {
  L5_heat,        // diamagnetic two-sided heat kernel bound
  C6_lower,       // lower bounds |G_h| >= e^{-h r^2/4} G0(z-h), both orders
  L7_difference,  // |F_h(z) - G0(z)| difference bounds, both orders
  L8_q,           // |q - q0| and derivative bounds
  L9_upper,       // |G_h(x,y;z)| <= (2 pi)^-1 K0(sqrt(-Re z) |x-y|)
  L10_deriv,      // |G^(2)_h| <= G0^(2)(Re z)
  L11_lower       // deep-regime lower bound with the quartic-root prefactor
};

inline const char* lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::L5_heat: return "L5_heat";
    case LemmaId::C6_lower: return "C6_lower";
    case LemmaId::L7_difference: return "L7_difference";
    case LemmaId::L8_q: return "L8_q";
    case LemmaId::L9_upper: return "L9_upper";
    case LemmaId::L10_deriv: return "L10_deriv";
    case LemmaId::L11_lower: return "L11_lower";
  }
  return "?";
}

struct BoundReport {
  LemmaId id = LemmaId::L5_heat;
  std::string lemma;
  std::string grid_spec;
  double worst_margin = 0.0;
  bool pass = false;
  int nodes = 0;
  std::string worst_node;
};

namespace detail {

struct MarginAccumulator {
  double worst = 1e308;
  std::string worst_node;
  int nodes = 0;

  void add(double margin, const std::string& node) {
    ++nodes;
    if (margin < worst) {
      worst = margin;
      worst_node = node;
    }
  }
};

inline std::string node3(const char* a, double va, const char* b, double vb, const char* c,
                         double vc) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s=%g %s=%g %s=%g", a, va, b, vb, c, vc);
  return buf;
}

inline BoundReport finish(LemmaId id, const std::string& grid, MarginAccumulator& acc) {
  BoundReport r;
  r.id = id;
  r.lemma = lemma_name(id);
  r.grid_spec = grid;
  r.worst_margin = acc.worst;
  r.nodes = acc.nodes;
  r.worst_node = acc.worst_node;
  r.pass = acc.worst >= -1e-12;
  return r;
}

}  // namespace detail

// exp(-h t - h r^2 / 4) P0 <= |P_h| <= P0  on (t, r, h) nodes.
inline BoundReport check_heat_sandwich() {
  const std::vector<double> ts{0.1, 0.5, 1.0, 5.0, 10.0};
  const std::vector<double> rs{0.0, 0.5, 1.0, 2.0};
  const std::vector<double> hs{0.1, 0.5, 1.0, 2.0};
  detail::MarginAccumulator acc;
  for (double t : ts)
    for (double r : rs)
      for (double h : hs) {
        const double p0 = std::exp(green::heat_kernel_abs_log(r * r, t, 0.0));
        const double ph = std::exp(green::heat_kernel_abs_log(r * r, t, h));
        const double lower = std::exp(-h * t - 0.25 * h * r * r) * p0;
        acc.add(p0 - ph, detail::node3("t", t, "r", r, "h", h) + " [upper]");
        acc.add(ph - lower, detail::node3("t", t, "r", r, "h", h) + " [lower]");
      }
  return detail::finish(LemmaId::L5_heat, "t{0.1,0.5,1,5,10} x r{0,0.5,1,2} x h{0.1,0.5,1,2}", acc);
}

// F_h(r;z) >= e^{-h r^2/4} G0(r; z-h) and F2_h(r;z) >= e^{-h r^2/4} G0_2(r; z-h)
// for real z < h (second order includes r = 0).
inline BoundReport check_c6_lower() {
  const std::vector<double> rs{0.5, 1.0, 2.0};
  const std::vector<double> zs{-0.5, -1.0, -2.0, -5.0, -20.0};
  const std::vector<double> hs{0.1, 0.5, 1.0, 2.0};
  const PlanePoint o{0.0, 0.0};
  detail::MarginAccumulator acc;
  for (double z : zs)
    for (double h : hs) {
      const Energy e{Complex(z, 0.0), h};
      for (double r : rs) {
        const double damp = std::exp(-0.25 * h * r * r);
        const double f1 = green::f_kernel(o, {r, 0.0}, e).real();
        const double g1 = green::free_green(1, o, {r, 0.0}, Complex(z - h, 0.0)).real();
        acc.add(f1 - damp * g1, detail::node3("r", r, "z", z, "h", h) + " [order1]");
        const double f2 = green::f_kernel2(o, {r, 0.0}, e).real();
        const double g2 = green::free_green(2, o, {r, 0.0}, Complex(z - h, 0.0)).real();
        acc.add(f2 - damp * g2, detail::node3("r", r, "z", z, "h", h) + " [order2]");
      }
      // coincidence point, second order only
      const double f2d = green::f_kernel2(o, o, e).real();
      const double g2d = green::free_green2_diag(Complex(z - h, 0.0)).real();
      acc.add(f2d - g2d, detail::node3("r", 0.0, "z", z, "h", h) + " [order2 diag]");
    }
  return detail::finish(LemmaId::C6_lower, "r{0.5,1,2}+{0} x z{-0.5..-20} x h{0.1,0.5,1,2}", acc);
}

// |F_h(z) - G0(z)| <= G0(Re z) - e^{-h r^2/4} G0(Re z - h), complex z, both orders.
inline BoundReport check_l7_difference() {
  const std::vector<double> rs{0.5, 1.0, 2.0};
  const std::vector<Complex> zs{{-1.0, 0.0}, {-1.0, 0.3}, {-5.0, 0.0}, {-5.0, -0.5}, {-20.0, 0.4}};
  const std::vector<double> hs{0.1, 0.5, 1.0};
  const PlanePoint o{0.0, 0.0};
  detail::MarginAccumulator acc;
  for (const Complex& z : zs)
    for (double h : hs)
      for (double r : rs) {
        const double r2 = r * r;
        const double damp = std::exp(-0.25 * h * r2);
        const PlanePoint y{r, 0.0};
        const Complex f1 = green::f_kernel_log(r2, z, h).to_complex();
        const Complex g1z = green::free_green(1, o, y, z);
        const double rhs1 = green::free_green(1, o, y, Complex(z.real(), 0.0)).real() -
                            damp * green::free_green(1, o, y, Complex(z.real() - h, 0.0)).real();
        acc.add(rhs1 - std::abs(f1 - g1z),
                detail::node3("r", r, "Re z", z.real(), "h", h) + " [order1]");
        const Complex f2 = green::f_kernel_log(r2, z, h, 1).to_complex();
        const Complex g2z = green::free_green(2, o, y, z);
        const double rhs2 = green::free_green(2, o, y, Complex(z.real(), 0.0)).real() -
                            damp * green::free_green(2, o, y, Complex(z.real() - h, 0.0)).real();
        acc.add(rhs2 - std::abs(f2 - g2z),
                detail::node3("r", r, "Re z", z.real(), "h", h) + " [order2]");
      }
  return detail::finish(LemmaId::L7_difference,
                        "r{0.5,1,2} x z{-1,-5,-20 w/ Im} x h{0.1,0.5,1}", acc);
}

// |q(z,h) - q0(z)| <= log((Re z - h)/Re z)/4pi and the derivative bound
// |q'(z,h) - q0'(z)| <= h / (4 pi Re z (Re z - h)), with q' = F2_h diagonal.
inline BoundReport check_l8_q() {
  const std::vector<double> zs{-1.0, -2.0, -5.0, -10.0, -30.0, -100.0};
  const std::vector<double> hs{0.01, 0.1, 1.0};
  detail::MarginAccumulator acc;
  for (double z : zs)
    for (double h : hs) {
      const Energy e{Complex(z, 0.0), h};
      const double dq = std::abs(green::q_reg(e) - green::q0(Complex(z, 0.0)));
      const double bound = std::log((z - h) / z) / kFourPi;
      acc.add(bound - dq, detail::node3("z", z, "h", h, "-", 0.0) + " [value]");
      const double qp = green::f_kernel_log(0.0, Complex(z, 0.0), h, 1).to_complex().real();
      const double q0p = -1.0 / (kFourPi * z);
      const double dbound = h / (kFourPi * z * (z - h));
      acc.add(dbound - std::abs(qp - q0p), detail::node3("z", z, "h", h, "-", 0.0) + " [deriv]");
    }
  return detail::finish(LemmaId::L8_q, "z{-1..-100} x h{0.01,0.1,1}", acc);
}

// |G_h(x,y;z)| <= (2 pi)^-1 K0(sqrt(-Re z)|x-y|) for Re z < 0, any h >= 0.
inline BoundReport check_l9_upper() {
  const std::vector<double> rs{0.5, 1.0, 2.0};
  const std::vector<Complex> zs{{-1.0, 0.0}, {-1.0, 0.5}, {-5.0, 0.0}, {-20.0, -0.5}, {-50.0, 0.0}};
  const std::vector<double> hs{0.0, 0.1, 0.5, 1.0, 2.0};
  const PlanePoint o{0.0, 0.0};
  detail::MarginAccumulator acc;
  for (const Complex& z : zs)
    for (double h : hs)
      for (double r : rs) {
        const Energy e{z, h};
        const double gh = std::abs(green::landau_green(o, {r, 0.0}, e));
        const double rhs = specfun::bessel_k(0, std::sqrt(-z.real()) * r) / kTwoPi;
        acc.add(rhs - gh, detail::node3("r", r, "Re z", z.real(), "h", h));
      }
  return detail::finish(LemmaId::L9_upper, "r{0.5,1,2} x z{-1..-50 w/ Im} x h{0,..,2}", acc);
}

// |G^(2)_h(x,y;z)| <= G0^(2)(|x-y|; Re z), including the diagonal.
inline BoundReport check_l10_deriv() {
  const std::vector<double> rs{0.0, 0.5, 1.0, 2.0};
  const std::vector<Complex> zs{{-1.0, 0.0}, {-2.0, 0.5}, {-10.0, 0.0}, {-30.0, -1.0}};
  const std::vector<double> hs{0.1, 0.5, 1.0, 2.0};
  const PlanePoint o{0.0, 0.0};
  detail::MarginAccumulator acc;
  for (const Complex& z : zs)
    for (double h : hs)
      for (double r : rs) {
        const double g2 = std::abs(green::f_kernel_log(r * r, z, h, 1).to_complex());
        const double rhs =
            r == 0.0 ? green::free_green2_diag(Complex(z.real(), 0.0)).real()
                     : green::free_green(2, o, {r, 0.0}, Complex(z.real(), 0.0)).real();
        acc.add(rhs - g2, detail::node3("r", r, "Re z", z.real(), "h", h));
      }
  return detail::finish(LemmaId::L10_deriv, "r{0,0.5,1,2} x z{-1..-30 w/ Im} x h{0.1..2}", acc);
}

// Deep-regime lower bound at |x-y| = 1 with c = 1/2:
//   |G_h(x,y;z)| >= (1-c)/(2 pi) * (pi^2 / (-4 Re z))^{1/4} * e^{-sqrt(-Re z)}.
inline BoundReport check_l11_lower() {
  const double c = 0.5;
  const std::vector<Complex> zs{{-50.0, 0.0}, {-50.0, 0.02}, {-75.0, 0.0},
                                {-100.0, 0.0}, {-100.0, -0.02}};
  const std::vector<double> hs{0.01, 0.02, 0.05};
  const PlanePoint o{0.0, 0.0}, y{1.0, 0.0};
  detail::MarginAccumulator acc;
  for (const Complex& z : zs)
    for (double h : hs) {
      const Energy e{z, h};
      const double gh = std::abs(green::landau_green(o, y, e));
      const double rhs = (1.0 - c) / kTwoPi * std::pow(kPi * kPi / (-4.0 * z.real()), 0.25) *
                         std::exp(-std::sqrt(-z.real()));
      acc.add(gh - rhs, detail::node3("Re z", z.real(), "Im z", z.imag(), "h", h));
    }
  return detail::finish(LemmaId::L11_lower, "r=1, c=0.5, z{-50,-75,-100 w/ Im} x h{0.01,0.02,0.05}",
                        acc);
}

inline BoundReport verify_bound(LemmaId id) {
  switch (id) {
    case LemmaId::L5_heat: return check_heat_sandwich();
    case LemmaId::C6_lower: return check_c6_lower();
    case LemmaId::L7_difference: return check_l7_difference();
    case LemmaId::L8_q: return check_l8_q();
    case LemmaId::L9_upper: return check_l9_upper();
    case LemmaId::L10_deriv: return check_l10_deriv();
    case LemmaId::L11_lower: return check_l11_lower();
  }
  throw DomainError("verify_bound: unknown lemma id");
}

inline std::vector<BoundReport> verify_all_bounds() {
  return {check_heat_sandwich(), check_c6_lower(), check_l7_difference(), check_l8_q(),
          check_l9_upper(),      check_l10_deriv(), check_l11_lower()};
}

}  // namespace verify
}  // namespace landau
