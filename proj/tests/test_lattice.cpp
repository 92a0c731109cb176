#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "landau/lattice.hpp"
#include "oracles.hpp"

using namespace landau;
using namespace landau::lattice;

TEST_CASE("lambda depends only on m^2+n^2 and matches the kernel") {
  const Energy e{Complex(-1.0, 0.0), 0.5};
  const Complex l10 = lambda_coeff(1, 0, e);
  CHECK(l10 == lambda_coeff(0, 1, e));
  CHECK(l10 == lambda_coeff(-1, 0, e));
  CHECK(std::abs(l10 - green::f_kernel({0, 0}, {1, 0}, e)) < 1e-10 * std::abs(l10));
  CHECK(l10.real() > 0.0);
  CHECK_THROWS_AS(lambda_coeff(0, 0, e), DomainError);
  CHECK_THROWS_AS(lambda_coeff(1, 0, Energy{Complex(1.0, 0.0), 0.5}), DomainError);
}

TEST_CASE("lambda decay respects the free-kernel envelope") {
  const Energy e{Complex(-4.0, 0.0), 0.5};
  const double ratio = lambda_coeff(3, 0, e).real() / lambda_coeff(1, 0, e).real();
  // two extra units of distance at rate sqrt(h - z) minus a generous margin
  CHECK(ratio < std::exp(-2.0 * (std::sqrt(4.0 + 0.5) - 0.7)));
  CHECK(ratio > 0.0);
}

TEST_CASE("a coefficient: definition, positivity bound, weak-field limit") {
  const Energy e{Complex(-1.0, 0.0), 0.5};
  CHECK(a_coeff(e) == 2.0 * lambda_coeff(1, 0, e));
  // a >= e^{-h/4} K0(sqrt(h - z))/(2 pi) sampled over (z, h)
  for (double z : {-10.0, -5.0, -1.0})
    for (double h : {0.25, 0.5, 1.0}) {
      const Energy eh{Complex(z, 0.0), h};
      const double lb = std::exp(-h / 4.0) * oracle::bessel_k(0, std::sqrt(h - z)) / kTwoPi;
      CHECK(a_coeff(eh).real() - lb >= 0.0);
    }
  const Energy e0{Complex(-2.0, 0.0), 1e-4};
  CHECK(a_coeff(e0).real() ==
        doctest::Approx(oracle::bessel_k(0, std::sqrt(2.0)) / kPi).epsilon(1e-4));
}

TEST_CASE("krein matrix: diagonal, hermiticity, covariance") {
  const Energy e{Complex(-2.0, 0.0), 0.5};
  const KreinMatrix k = build_q_matrix(e, 2);
  const Complex q = green::q_reg(e);
  const int w = 5;
  for (int i = 0; i < k.dim(); ++i) CHECK(std::abs(k.entries(i, i) - q) < 1e-14);
  // magnetic covariance Q(m+k, n+k) = e^{-i h k2 (m1-n1)} Q(m,n)
  double worst = 0.0;
  for (int i = 0; i < k.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j) {
      const auto a = k.site(i), b = k.site(j);
      for (int k1 = -1; k1 <= 1; ++k1)
        for (int k2 = -1; k2 <= 1; ++k2) {
          const int am = a.m + k1, an = a.n + k2, bm = b.m + k1, bn = b.n + k2;
          if (std::abs(am) > 2 || std::abs(an) > 2 || std::abs(bm) > 2 || std::abs(bn) > 2)
            continue;
          const int i2 = (am + 2) * w + (an + 2), j2 = (bm + 2) * w + (bn + 2);
          const Complex expect =
              std::exp(Complex(0.0, -e.h * k2 * (a.m - b.m))) * k.entries(i, j);
          worst = std::max(worst, std::abs(k.entries(i2, j2) - expect));
        }
    }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(build_q_matrix(Energy{Complex(-2.0, 0.1), 0.5}, 2), DomainError);
  CHECK_THROWS_AS(build_q_matrix(e, 0), DomainError);
}

TEST_CASE("krein off-diagonals stay bounded at deep z") {
  const Energy e{Complex(-50.0, 0.0), 0.5};
  const KreinMatrix k = build_q_matrix(e, 2);
  const double qd = std::abs(k.entries(0, 0));
  for (int i = 0; i < k.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j)
      if (i != j) CHECK(std::abs(k.entries(i, j)) < qd + 1.0);
}

TEST_CASE("q_distance: dominant shift, continuity, radius report") {
  const QDistance d = q_distance(Energy{Complex(-5.0, 0.0), 0.5}, 0.01, 3);
  CHECK(d.value > 99.0);
  CHECK(d.value < 101.0);
  CHECK(d.value_prev > 99.0);
  // continuity in z
  const double d1 = q_distance(Energy{Complex(-5.0, 0.0), 0.5}, 1.0, 3).value;
  const double d2 = q_distance(Energy{Complex(-5.0 + 1e-6, 0.0), 0.5}, 1.0, 3).value;
  CHECK(std::abs(d1 - d2) < 1e-4);
}

TEST_CASE("normalized symbol: identity, symmetry, envelope truncation") {
  const Energy e{Complex(-2.0, 0.0), 0.5};
  const double alpha = 2.0;
  const MSymbol ms = symbol_m(e, alpha, 6);
  // m_alpha * a - (q + 1/alpha) = 0
  CHECK(std::abs(ms.m_alpha * a_coeff(e) - (green::q_reg(e) + 1.0 / alpha)) < 1e-12);
  // tail coefficient value and symmetries
  const Complex t11 = ms.tail.get(1, 1);
  CHECK(t11.real() > 0.0);
  CHECK(std::abs(t11 - lambda_coeff(1, 1, e) / a_coeff(e)) < 1e-12);
  CHECK(t11 == ms.tail.get(-1, -1));
  CHECK(t11 == ms.tail.get(1, -1));
  CHECK(ms.tail.get(2, 1) == ms.tail.get(1, 2));
  ms.tail.check_symmetry();
  // truncation error: geometric summation of the fitted envelope beyond the
  // cutoff; modest at z = -10 and negligible at z = -40
  auto envelope_tail = [&](double z) {
    const MSymbol m = symbol_m(Energy{Complex(z, 0.0), 0.5}, alpha, 6);
    double bound = 0.0;
    for (int ring = 7; ring <= 60; ++ring)
      bound += 4.0 * ring * m.tail.envelope_amp *
               std::exp(-m.tail.envelope_rate * ring / std::sqrt(2.0));
    return bound;
  };
  CHECK(envelope_tail(-10.0) < 1e-4);
  CHECK(envelope_tail(-40.0) < 1e-8);
}

TEST_CASE("full symbol evaluation") {
  const FourierSymbol h = harper_symbol(Complex(0.25, 0.0));
  CHECK(h.eval({0.0, 0.0}, {0.0, 0.0}).real() == doctest::Approx(2.25).epsilon(1e-14));
  // 2 pi periodicity
  const Complex x{0.7, 0.0}, p{1.3, 0.0};
  CHECK(std::abs(h.eval(x, p) - h.eval(x + kTwoPi, p)) < 1e-12);
  CHECK(std::abs(h.eval(x, p) - h.eval(x, p + kTwoPi)) < 1e-12);
  // symmetry value(x,p) = value(x,-p) = value(-p,x) for radial coefficients
  const Energy e{Complex(-2.0, 0.0), 0.5};
  const FourierSymbol full = full_symbol(symbol_m(e, 2.0, 5));
  CHECK(std::abs(full.eval(x, p) - full.eval(x, -p)) < 1e-12);
  CHECK(std::abs(full.eval(x, p) - full.eval(-p, x)) < 1e-12);
  // real on the real torus
  CHECK(std::abs(full.eval(x, p).imag()) < 1e-13);
}

TEST_CASE("truncated symbols refuse strips their envelope cannot control") {
  // a truncation whose fitted decay rate is below the strip width cannot
  // bound the dropped tail there
  FourierSymbol s;
  s.set(1, 0, 0.5);
  s.set(-1, 0, 0.5);
  s.set(2, 0, 0.4);
  s.set(-2, 0, 0.4);
  s.set(3, 0, 0.32);
  s.set(-3, 0, 0.32);
  s.cutoff_radius = 3;
  s.complete = false;
  s.fit_envelope();
  CHECK(s.envelope_rate < 2.0);
  CHECK_THROWS_AS(s.eval(Complex(0.0, 3.0), Complex(0.0, 0.0)), landau::OverflowError);
  CHECK_THROWS_AS(epsilon_estimate(s, 3.0, 32), landau::OverflowError);
  CHECK_NOTHROW(s.eval(Complex(0.0, 0.05), Complex(0.0, 0.0)));
}

TEST_CASE("epsilon estimate on closed-form cases") {
  // exact Harper symbol deviates by zero
  const EpsilonEstimate e0 = epsilon_estimate(harper_symbol(), 1.0, 32);
  CHECK(e0.value == 0.0);
  // single extra pair c(1,1) = c(-1,-1) = 0.01: sup = 0.02 cosh(s (xi+eta)) at
  // xi + eta = s = 1
  FourierSymbol s;
  s.set(1, 1, 0.01);
  s.set(-1, -1, 0.01);
  s.cutoff_radius = 2;
  s.fit_envelope();
  const EpsilonEstimate e1 = epsilon_estimate(s, 1.0, 64);
  CHECK(e1.value == doctest::Approx(0.02 * std::cosh(1.0)).epsilon(1e-3));
  CHECK(e1.refinement_delta < 0.01);
  // scaling the tail by 1/2 halves the estimate
  FourierSymbol s2;
  s2.set(1, 1, 0.005);
  s2.set(-1, -1, 0.005);
  s2.cutoff_radius = 2;
  s2.fit_envelope();
  CHECK(epsilon_estimate(s2, 1.0, 64).value == doctest::Approx(0.5 * e1.value).epsilon(1e-6));
}

TEST_CASE("epsilon estimate self-consistent mode") {
  FourierSymbol s;
  s.set(1, 1, 0.01);
  s.set(-1, -1, 0.01);
  s.cutoff_radius = 2;
  s.fit_envelope();
  const EpsilonEstimate e = epsilon_estimate(s, 1.0, 64, true);
  CHECK(e.self_consistent);
  // eps solves eps = 0.02 cosh(1/eps); verify the fixed point equation
  const double g = 0.02 * std::cosh(1.0 / e.value);
  CHECK(g == doctest::Approx(e.value).epsilon(0.05));
}

TEST_CASE("perturbed green function") {
  const Energy e{Complex(-5.0, 0.0), 0.5};
  const PlanePoint x{0.3, 0.4}, y{1.2, -0.7};
  // alpha -> 0 recovers the unperturbed kernel to O(alpha)
  const PerturbedGreen pg = perturbed_green(x, y, e, 0.01, 3);
  const Complex g = green::landau_green(x, y, e);
  CHECK(std::abs(pg.value - g) < 0.01);
  CHECK(pg.radius_delta < 1e-5);
  // Hermitian symmetry in (x, y) for real z
  const PerturbedGreen ab = perturbed_green(x, y, e, 1.0, 3);
  const PerturbedGreen ba = perturbed_green(y, x, e, 1.0, 3);
  CHECK(std::abs(ab.value - std::conj(ba.value)) < 1e-10);
  // radius stability at moderate alpha
  const PerturbedGreen r4 = perturbed_green(x, y, e, 1.0, 4);
  CHECK(r4.radius_delta < 1e-6);
  CHECK_THROWS_AS(perturbed_green(x, y, Energy{Complex(-5.0, 0.1), 0.5}, 1.0, 3), DomainError);
}

TEST_CASE("lambda and a stay positive for real z < 0 across a grid") {
  for (double z : {-20.0, -5.0, -0.5})
    for (double h : {0.1, 1.0, 3.0}) {
      const Energy e{Complex(z, 0.0), h};
      for (int ring2 : {1, 2, 4, 5}) {
        LambdaTable t(e);
        CHECK(t.value(ring2).real() > 0.0);
        CHECK(std::abs(t.value(ring2).imag()) < 1e-15);
      }
    }
}
