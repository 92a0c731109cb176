#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "landau/solver.hpp"
#include "oracles.hpp"

using namespace landau;
using namespace landau::solver;

TEST_CASE("z_of_beta closed form") {
  const double g = oracle::euler_gamma();
  // alpha = 2 pi, beta = 0: z = -4 e^{-2 gamma} e^2
  const double want = -4.0 * std::exp(-2.0 * g) * std::exp(2.0);
  CHECK(z_of_beta(Complex(0.0, 0.0), kTwoPi).to_complex().real() ==
        doctest::Approx(want).epsilon(1e-12));
  // beta -> beta + 1/(4 pi) divides z by e
  CHECK(z_of_beta(Complex(1.0 / kFourPi, 0.0), kTwoPi).to_complex().real() ==
        doctest::Approx(want / std::exp(1.0)).epsilon(1e-12));
  // Im beta = 1/8 rotates arg(-z) to exactly -pi/2
  const LogScaled z = z_of_beta(Complex(0.0, 0.125), kTwoPi);
  CHECK(LogScaled::wrap(z.phase - kPi) == doctest::Approx(-kPi / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(z_of_beta(Complex(0.0, 0.0), -1.0), DomainError);
}

TEST_CASE("psi map magnitudes and reality") {
  // |Psi| <= h/(4 pi |Re z|) at mu = 0 (Lemma-8-type smallness)
  for (double alpha : {1.0, 2.0})
    for (double h : {0.1, 0.3}) {
      const LogScaled z = z_of_beta(Complex(0.0, 0.0), alpha);
      const double bound = h / (kFourPi * std::exp(z.log_mag));
      CHECK(std::abs(psi_map(Complex(0.0, 0.0), alpha, Complex(0.0, 0.0), h)) <= bound);
    }
  // certified smallness at alpha = 1, h = 0.1
  CHECK(std::abs(psi_map(Complex(0.0, 0.0), 1.0, Complex(0.0, 0.0), 0.1)) < 1.0 / 32.0);
  // real inputs give real Psi
  const Complex p = psi_map(Complex(0.01, 0.0), 2.0, Complex(1.5, 0.0), 0.3);
  CHECK(p.imag() == 0.0);
}

TEST_CASE("fixed point at alpha = 2, h = 0.3: all integer mu") {
  for (int mu = -4; mu <= 4; ++mu) {
    const ZetaResult r = zeta(Complex(mu, 0.0), 2.0, 0.3);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations <= 35);
    CHECK(r.trace.residual < 1e-10 * std::max(1.0, 0.5));
    // real in, real out
    CHECK(r.point.beta.imag() == 0.0);
    CHECK(r.point.z_complex().imag() == 0.0);
    // round trip m_alpha(zeta(mu)) = mu
    CHECK(std::abs(m_alpha_at(r.point) - Complex(mu, 0.0)) < 1e-10);
  }
}

TEST_CASE("fixed point convergence is fast at alpha = 2") {
  for (double mu : {-4.0, -1.0, 0.0, 2.5, 4.0}) {
    const ZetaResult r = zeta(Complex(mu, 0.0), 2.0, 0.3);
    CHECK(r.trace.iterations <= 12);
  }
}

TEST_CASE("zeta is strictly increasing in real mu") {
  double prev = -1e308;
  for (double mu = -4.0; mu <= 4.0; mu += 0.5) {
    const ZetaResult r = zeta(Complex(mu, 0.0), 2.0, 0.3);
    const double z = r.point.z_complex().real();
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("zeta residual solves the defining equation at moderate alpha") {
  // alpha = 6, h = 2 pi / 3: check q(zeta) + 1/alpha = mu a(zeta) directly
  for (double mu : {-2.0, 0.0, 1.3}) {
    const ZetaResult r = zeta(Complex(mu, 0.0), 6.0, kTwoPi / 3.0);
    const Energy e{r.point.z_complex(), kTwoPi / 3.0};
    const Complex lhs = green::q_reg(e) + 1.0 / 6.0;
    const Complex rhs = mu * lattice::a_coeff(e);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("zeta is holomorphic-compatible for complex mu") {
  // Schwarz reflection: zeta(conj mu) = conj zeta(mu)
  const Complex mu{1.2, 0.7};
  const ZetaResult a = zeta(mu, 2.0, 0.3);
  const ZetaResult b = zeta(std::conj(mu), 2.0, 0.3);
  CHECK(std::abs(b.point.beta - std::conj(a.point.beta)) < 1e-15);
  // first-order Cauchy-Riemann consistency of beta(mu)
  const double d = 1e-6;
  const Complex dre = (zeta(mu + d, 2.0, 0.3).point.beta - zeta(mu - d, 2.0, 0.3).point.beta) /
                      (2.0 * d);
  const Complex dim = (zeta(mu + Complex(0.0, d), 2.0, 0.3).point.beta -
                       zeta(mu - Complex(0.0, d), 2.0, 0.3).point.beta) /
                      (2.0 * d);
  CHECK(std::abs(dre - Complex(0.0, -1.0) * dim) < 1e-6 * std::abs(dre) + 1e-18);
}

TEST_CASE("zeta domain guards") {
  CHECK_THROWS_AS(zeta(Complex(5.0, 0.0), 2.0, 0.3), DomainError);
  // far outside the contraction regime the iterate escapes
  CHECK_THROWS_AS(zeta(Complex(4.0, 0.0), 50.0, kTwoPi / 3.0), NonConvergenceError);
}

TEST_CASE("deep coupling stays log-scaled") {
  const ZetaResult r = zeta(Complex(0.0, 0.0), 0.3, 0.3);
  CHECK(r.point.z.log_mag == doctest::Approx(kFourPi / 0.3 + kLog4Minus2Gamma).epsilon(1e-6));
  CHECK(r.trace.converged);
}

TEST_CASE("p symbol: constant, positivity, symmetry") {
  const PSymbol ps = p_symbol(0.5, 2.0, 0.3, 6);
  CHECK(std::abs(ps.constant - Complex(0.5, 0.0)) < 1e-10);
  int tail_count = 0;
  for (const auto& [site, lc] : ps.symbol.log_coeffs) {
    if (site.ring() < 2) continue;
    ++tail_count;
    CHECK(lc.phase == 0.0);  // positive real
    CHECK(ps.symbol.log_coeffs.at({site.n, site.m}).log_mag ==
          doctest::Approx(lc.log_mag).epsilon(1e-12));
    CHECK(ps.symbol.log_coeffs.at({-site.m, -site.n}).log_mag ==
          doctest::Approx(lc.log_mag).epsilon(1e-12));
  }
  CHECK(tail_count > 0);
}

TEST_CASE("epsilon of the effective symbol decreases along the alpha ladder") {
  double prev = 1e308;
  for (double alpha : {0.5, 0.3, 0.2, 0.1}) {
    const PSymbol ps = p_symbol(0.0, alpha, 0.3, 6);
    const lattice::EpsilonEstimate eps = lattice::epsilon_estimate(ps.symbol, 0.5, 64);
    CHECK(eps.log_value < prev);
    prev = eps.log_value;
  }
}

TEST_CASE("mu spectrum of the tail-free surrogate") {
  SolverConfig cfg;
  cfg.tail_free = true;
  cfg.n_theta = 64;
  cfg.n_kappa = 64;
  cfg.mu_refine_tol = 1e-6;
  // flux 1/2: 0 in spec(mu + Harper) iff -mu in [-sqrt2, sqrt2]
  const MuSpectrum m2 = mu_spectrum(2.0, RationalFlux{1, 2}, -4.0, 4.0, 64, cfg);
  REQUIRE(m2.bands.size() == 1);
  CHECK(m2.bands[0].lo == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-3));
  CHECK(m2.bands[0].hi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  // flux 1 (= 0): [-2, 2]
  const MuSpectrum m0 = mu_spectrum(2.0, RationalFlux{1, 1}, -4.0, 4.0, 64, cfg);
  REQUIRE(m0.bands.size() == 1);
  CHECK(m0.bands[0].lo == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(m0.bands[0].hi == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("mu spectrum with the true tail stays inside the perturbed window") {
  SolverConfig cfg;
  cfg.n_theta = 32;
  cfg.n_kappa = 32;
  cfg.mu_refine_tol = 1e-5;
  const double alpha = 2.0;
  const RationalFlux flux{1, 3};
  const MuSpectrum m = mu_spectrum(alpha, flux, -4.0, 4.0, 64, cfg);
  REQUIRE(!m.bands.empty());
  // sup-norm perturbation bound: bands within [-2 - eps, 2 + eps]
  const PSymbol ps = p_symbol(0.0, alpha, flux.h(), cfg.cutoff, cfg);
  const double eps = lattice::epsilon_estimate(ps.symbol, 1e-6, 32).value;
  for (const MuBand& b : m.bands) {
    CHECK(b.lo >= -2.0 - eps - 1e-3);
    CHECK(b.hi <= 2.0 + eps + 1e-3);
  }
}

TEST_CASE("negative spectrum endpoints are ordered and clipping works") {
  SolverConfig cfg;
  cfg.n_theta = 32;
  cfg.n_kappa = 32;
  cfg.mu_refine_tol = 1e-5;
  const SpectrumResult r = negative_spectrum(6.0, RationalFlux{1, 3}, 1.0, cfg);
  REQUIRE(!r.intervals.empty());
  double prev_hi = -1e308;
  for (const ZInterval& iv : r.intervals) {
    CHECK(iv.lo() <= iv.hi());
    CHECK(iv.hi() <= -1.0 + 1e-9);
    CHECK(iv.lo() > prev_hi);
    prev_hi = iv.hi();
  }
  // huge E0 empties the spectrum by clipping
  const SpectrumResult empty = negative_spectrum(6.0, RationalFlux{1, 3}, 100.0, cfg);
  CHECK(empty.intervals.empty());
}

TEST_CASE("partial clip truncates the shallowest band") {
  SolverConfig cfg;
  cfg.n_theta = 32;
  cfg.n_kappa = 32;
  cfg.mu_refine_tol = 1e-5;
  const SpectrumResult full = negative_spectrum(6.0, RationalFlux{1, 3}, 1.0, cfg);
  REQUIRE(!full.intervals.empty());
  // choose E0 inside the shallowest band
  const double mid = 0.5 * (full.intervals.back().lo() + full.intervals.back().hi());
  const SpectrumResult part = negative_spectrum(6.0, RationalFlux{1, 3}, -mid, cfg);
  REQUIRE(!part.intervals.empty());
  CHECK(part.intervals.back().hi() == doctest::Approx(mid).epsilon(1e-9));
  CHECK(part.intervals.back().note.find("clipped") != std::string::npos);
}

TEST_CASE("reduced and direct spectra agree at alpha = 6, flux 1/3") {
  SolverConfig cfg;
  cfg.n_theta = 48;
  cfg.n_kappa = 48;
  cfg.z_scan_points = 160;
  cfg.mu_refine_tol = 1e-7;
  const SpectrumResult red = negative_spectrum(6.0, RationalFlux{1, 3}, 1.0, cfg);
  const SpectrumResult dir = direct_negative_spectrum(6.0, RationalFlux{1, 3}, 1.0, cfg);
  REQUIRE(red.intervals.size() == dir.intervals.size());
  const BandSet br = red.as_bandset(), bd = dir.as_bandset();
  const double sd = br.symmetric_difference(bd);
  CHECK(sd < 1e-3 * std::max(br.measure(), bd.measure()));
  // a direct interval brackets zeta(0, h) and endpoints are radius-stable
  const double z0 = zeta(Complex(0.0, 0.0), 6.0, kTwoPi / 3.0).point.z_complex().real();
  CHECK(bd.contains(z0, 1e-9));
  CHECK(dir.radius_stability < 1e-4);
  // window-truncation cross check: q_distance is small inside each interval
  for (const ZInterval& iv : dir.intervals) {
    const double zmid = 0.5 * (iv.lo() + iv.hi());
    const lattice::QDistance qd =
        lattice::q_distance(Energy{Complex(zmid, 0.0), kTwoPi / 3.0}, 6.0, 8);
    CHECK(qd.value < 1e-3);
  }
}

TEST_CASE("gershgorin bound keeps the scan region spectrum free") {
  // when 1/alpha exceeds ||Q||, no spectrum exists in the scan window
  SolverConfig cfg;
  cfg.n_theta = 16;
  cfg.n_kappa = 16;
  cfg.z_scan_points = 60;
  cfg.z_scan_min = -20.0;
  const SpectrumResult r = direct_negative_spectrum(0.5, RationalFlux{1, 2}, 1.0, cfg);
  CHECK(r.intervals.empty());
  // the true spectrum sits near -e^{4 pi / alpha}, far below the window
  bool noted = false;
  for (const std::string& n : r.notes) noted |= n.find("not certified") != std::string::npos;
  CHECK(noted);
  const lattice::QDistance qd = lattice::q_distance(Energy{Complex(-5.0, 0.0), kPi}, 0.5, 4);
  CHECK(qd.value > 1.0);  // 1/alpha = 2 dominates the bounded Q
}

TEST_CASE("lemma-13 style domain certificate holds for converged points") {
  // moderate alpha: the admissible set may reach 0 (vacuous certificate is
  // honest there), but containment must hold either way
  for (double mu : {-2.0, 0.0, 1.0}) {
    const ZetaResult r = zeta(Complex(mu, 0.0), 6.0, kTwoPi / 3.0);
    CHECK(lemma13_certificate(r.point, 5.0).holds);
  }
  // small alpha: the exclusion zone detaches from zero and the threshold is sharp
  for (double mu : {-3.0, 0.0, 3.0}) {
    const ZetaResult r = zeta(Complex(mu, 0.0), 0.5, 0.3);
    const DomainCertificate cert = lemma13_certificate(r.point, 5.0);
    CHECK(cert.holds);
    CHECK(cert.e_threshold > 1.0);
    CHECK(r.point.z.log_mag > std::log(cert.e_threshold));
  }
}

TEST_CASE("flux sweep diagnostics") {
  SolverConfig cfg;
  cfg.tail_free = true;
  cfg.n_theta = 48;
  cfg.n_kappa = 48;
  cfg.mu_refine_tol = 1e-5;
  const std::vector<RationalFlux> fluxes{{1, 1}, {1, 2}};
  const auto rows = flux_sweep_diagnostics(2.0, fluxes, 0.5, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].band_count == 1);
  // q = 2: two touching bands or one merged band, recorded either way
  CHECK((rows[1].band_count == 2 || (rows[1].band_count == 1 && !rows[1].touching)));
  // tail-free surrogate: mu-measure shrinks from 4 to 2 sqrt 2, so the z-measure drops
  CHECK(rows[1].total_measure <= rows[0].total_measure);
}
