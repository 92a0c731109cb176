#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "landau/core.hpp"
#include "landau/errors.hpp"

namespace landau {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration
// on P_n (Numerical Recipes gauleg).
template <int N>
struct GaussLegendre {
  std::array<double, N> node{};
  std::array<double, N> weight{};

  GaussLegendre() {
    const int m = (N + 1) / 2;
    for (int i = 0; i < m; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (N + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < N; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = N * (x * p0 - p1) / (x * x - 1.0);
        const double dx = p0 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      node[i] = -x;
      node[N - 1 - i] = x;
      weight[i] = weight[N - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
  }

  static const GaussLegendre& instance() {
    static const GaussLegendre gl;
    return gl;
  }
};

struct QuadResult {
  Complex value{0.0, 0.0};
  double abs_error = 0.0;
  int panels = 0;
};

namespace detail {

template <class F>
Complex gl15_panel(const F& f, double a, double b) {
  const auto& gl = GaussLegendre<15>::instance();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex s{0.0, 0.0};
  for (int i = 0; i < 15; ++i) s += gl.weight[i] * f(mid + half * gl.node[i]);
  return half * s;
}

struct Panel {
  double a, b;
  Complex coarse;   // one GL15 estimate
  Complex fine;     // two half-panel GL15 estimates
  double err;
};

template <class F>
Panel make_panel(const F& f, double a, double b) {
  Panel p;
  p.a = a;
  p.b = b;
  p.coarse = gl15_panel(f, a, b);
  const double m = 0.5 * (a + b);
  p.fine = gl15_panel(f, a, m) + gl15_panel(f, m, b);
  p.err = std::abs(p.fine - p.coarse);
  return p;
}

}  // namespace detail

// Globally adaptive Gauss-Legendre on [a,b]: repeatedly bisect the panel with
// the largest error estimate until sum(err) <= rel_tol*|I| + abs_floor.
template <class F>
QuadResult adaptive_gl(const F& f, double a, double b, double rel_tol = 1e-11,
                       double abs_floor = 0.0, int max_panels = 4000, int initial_panels = 8) {
  std::vector<detail::Panel> panels;
  panels.reserve(256);
  const double step = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i)
    panels.push_back(detail::make_panel(f, a + i * step, a + (i + 1) * step));

  while (true) {
    Complex total{0.0, 0.0};
    double err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].fine;
      err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    const double target = rel_tol * std::abs(total) + abs_floor;
    if (err <= target || panels[worst].err == 0.0)
      return {total, err, static_cast<int>(panels.size())};
    if (static_cast<int>(panels.size()) >= max_panels)
      throw ConvergenceError("adaptive_gl: panel budget exhausted (err " + std::to_string(err) +
                             " > " + std::to_string(target) + ")");
    const detail::Panel split = panels[worst];
    const double m = 0.5 * (split.a + split.b);
    panels[worst] = detail::make_panel(f, split.a, m);
    panels.push_back(detail::make_panel(f, m, split.b));
  }
}

// Laplace-type integral over v of exp(phi(v)) * pre(v), where phi has a single
// interior maximum.  The peak value M is factored out, so the returned value is
// exp(M) * integral in log-scaled form.
//
// phi: real exponent; pre: complex prefactor of modulus O(1) (phase factors).
template <class Phi, class Pre>
LogScaled laplace_log_quadrature(const Phi& phi, const Pre& pre, double v_peak, double drop = 46.0,
                                 double rel_tol = 1e-11, int max_panels = 4000) {
  double M = phi(v_peak);
  // Window expansion steps start at the peak's own curvature scale, so
  // needle-narrow peaks stay resolved by the initial panelization.
  const double delta = std::max(1e-7, std::abs(v_peak) * 1e-9);
  const double curv = std::max(
      -(phi(v_peak + delta) - 2.0 * M + phi(v_peak - delta)) / (delta * delta), 1e-12);
  const double width = std::min(1.0 / std::sqrt(curv), 0.5);
  double lo = v_peak, hi = v_peak, step = width;
  while (phi(lo) > M - drop && step < 1e12) {
    lo -= step;
    step *= 1.5;
  }
  step = width;
  while (phi(hi) > M - drop && step < 1e12) {
    hi += step;
    step *= 1.5;
  }
  // Guard against a mis-located peak estimate: rescan the final window.
  for (int i = 0; i <= 256; ++i) {
    const double f = phi(lo + (hi - lo) * i / 256.0);
    if (f > M) M = f;
  }
  // The shifted exponent carries ulp(M) noise, which floors the attainable
  // relative accuracy at ~eps * |M|; below that the panel errors are pure
  // rounding and splitting cannot help.
  const double tol_eff = std::max(rel_tol, 8.0 * 2.22e-16 * std::max(1.0, std::abs(M)));
  auto f = [&](double v) -> Complex { return std::exp(phi(v) - M) * pre(v); };
  const QuadResult q = adaptive_gl(f, lo, hi, tol_eff, 1e-300, max_panels,
                                   16);
  if (q.value == Complex(0.0, 0.0)) return LogScaled::zero();
  return LogScaled(M + std::log(std::abs(q.value)), std::arg(q.value));
}

}  // namespace landau
