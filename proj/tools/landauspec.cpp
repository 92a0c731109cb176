// Command-line front end: Hofstadter-style band sweeps, negative-spectrum
// computation by the fixed-point reduction and by the direct lattice scan,
// the numerical verification suites, and ad-hoc kernel evaluation.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 numerical non-convergence.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>

#include "landau/serialize.hpp"

namespace fs = std::filesystem;
using namespace landau;
using io::fmt_g17;
using io::json;
using solver::RationalFlux;
using solver::SolverConfig;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::vector<RationalFlux> farey_fluxes(int max_q) {
  std::vector<RationalFlux> out;
  out.emplace_back(1, 1);
  for (int q = 2; q <= max_q; ++q)
    for (int p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  return out;
}

// ---------------------------------------------------------------------------

struct ButterflyArgs {
  std::string source = "harper";  // harper | effective
  std::string mode = "mu";        // mu | z   (effective source only)
  int max_q = 6;
  int grid = 64;
  double alpha = 2.0;
  double e0 = 0.5;
  std::string out_dir = ".";
  SolverConfig cfg;

  json to_json() const {
    return json{{"source", source}, {"mode", mode},   {"max_q", max_q},
                {"grid", grid},     {"alpha", alpha}, {"e0", e0},
                {"solver", io::to_json(cfg)}};
  }
  static ButterflyArgs from_json(const json& j) {
    ButterflyArgs a;
    a.source = j.value("source", a.source);
    a.mode = j.value("mode", a.mode);
    a.max_q = j.value("max_q", a.max_q);
    a.grid = j.value("grid", a.grid);
    a.alpha = j.value("alpha", a.alpha);
    a.e0 = j.value("e0", a.e0);
    if (j.contains("solver")) a.cfg = io::config_from_json(j["solver"]);
    return a;
  }
};

int run_butterfly(const ButterflyArgs& a) {
  Timer timer;
  if (a.source != "harper" && a.source != "effective")
    throw DomainError("butterfly: source must be harper or effective");
  if (a.mode != "mu" && a.mode != "z") throw DomainError("butterfly: mode must be mu or z");
  if (a.max_q < 1 || a.max_q > 40) throw DomainError("butterfly: max_q must be in [1, 40]");
  fs::create_directories(a.out_dir);
  SolverConfig cfg = a.cfg;
  cfg.n_theta = cfg.n_kappa = a.grid;
  std::string csv = io::band_csv_header();
  for (const RationalFlux& flux : farey_fluxes(a.max_q)) {
    if (a.source == "harper") {
      const harper::BandStructure b =
          harper::band_spectrum(lattice::harper_symbol(), flux, a.grid, a.grid,
                                cfg.band_merge_tol, true);
      io::append_band_rows(csv, flux, b.per_index);
    } else if (a.mode == "mu") {
      const solver::MuSpectrum m = solver::mu_spectrum(a.alpha, flux, -4.0, 4.0, 64, cfg);
      std::vector<Interval> iv;
      for (const solver::MuBand& band : m.bands) iv.push_back({band.lo, band.hi});
      io::append_band_rows(csv, flux, iv);
    } else {
      const solver::SpectrumResult r = solver::negative_spectrum(a.alpha, flux, a.e0, cfg);
      for (std::size_t i = 0; i < r.intervals.size(); ++i)
        csv += std::to_string(flux.p) + "," + std::to_string(flux.q) + "," + std::to_string(i) +
               "," + io::fmt_z_endpoint(r.intervals[i].log_abs_lo) + "," +
               io::fmt_z_endpoint(r.intervals[i].log_abs_hi) + "\n";
    }
  }
  const std::string csv_path = (fs::path(a.out_dir) / "butterfly.csv").string();
  io::write_file(csv_path, csv);
  io::RunManifest m;
  m.command = "butterfly";
  m.config = a.to_json();
  m.elapsed_seconds = timer.seconds();
  m.outputs = {csv_path};
  io::write_manifest((fs::path(a.out_dir) / "butterfly.manifest.json").string(), m);
  std::printf("butterfly: wrote %s (%.2fs)\n", csv_path.c_str(), m.elapsed_seconds);
  return 0;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  double alpha = 6.0;
  int p = 1, q = 3;
  double e0 = 1.0;
  std::string method = "both";  // reduced | direct | both
  std::string out_dir = ".";
  SolverConfig cfg;

  json to_json() const {
    return json{{"alpha", alpha}, {"p", p},           {"q", q},
                {"e0", e0},       {"method", method}, {"solver", io::to_json(cfg)}};
  }
  static SpectrumArgs from_json(const json& j) {
    SpectrumArgs a;
    a.alpha = j.value("alpha", a.alpha);
    a.p = j.value("p", a.p);
    a.q = j.value("q", a.q);
    a.e0 = j.value("e0", a.e0);
    a.method = j.value("method", a.method);
    if (j.contains("solver")) a.cfg = io::config_from_json(j["solver"]);
    return a;
  }
};

int run_spectrum(const SpectrumArgs& a) {
  Timer timer;
  if (a.method != "reduced" && a.method != "direct" && a.method != "both")
    throw DomainError("spectrum: method must be reduced, direct or both");
  fs::create_directories(a.out_dir);
  const RationalFlux flux{a.p, a.q};
  io::RunManifest m;
  m.command = "spectrum";
  m.config = a.to_json();
  json summary;
  std::optional<solver::SpectrumResult> red, dir;
  try {
    if (a.method != "direct") red = solver::negative_spectrum(a.alpha, flux, a.e0, a.cfg);
    if (a.method != "reduced") dir = solver::direct_negative_spectrum(a.alpha, flux, a.e0, a.cfg);
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "spectrum: fixed point diverged: %s\n", e.what());
    return 3;
  }
  auto dump = [&](const solver::SpectrumResult& r, const std::string& name) {
    const std::string path = (fs::path(a.out_dir) / ("spectrum_" + name + ".csv")).string();
    io::write_file(path, io::spectrum_csv(r));
    m.outputs.push_back(path);
    summary[name] = {{"bands", r.intervals.size()},
                     {"measure", r.total_measure},
                     {"notes", r.notes},
                     {"fixed_point",
                      {{"runs", r.fp_summary.runs},
                       {"max_iterations", r.fp_summary.max_iterations},
                       {"worst_residual", r.fp_summary.worst_residual},
                       {"worst_contraction", r.fp_summary.worst_contraction}}}};
  };
  if (red) dump(*red, "reduced");
  if (dir) dump(*dir, "direct");
  if (red && dir) {
    const BandSet br = red->as_bandset(), bd = dir->as_bandset();
    const double sd = br.symmetric_difference(bd);
    const double total = std::max(br.measure(), bd.measure());
    summary["comparison"] = {{"symmetric_difference", sd},
                             {"total_measure", total},
                             {"relative", total > 0 ? sd / total : 0.0}};
    std::printf("spectrum: methods agree to %.3e relative symmetric difference\n",
                total > 0 ? sd / total : 0.0);
  }
  m.elapsed_seconds = timer.seconds();
  const std::string sum_path = (fs::path(a.out_dir) / "spectrum_summary.json").string();
  io::write_file(sum_path, summary.dump(2) + "\n");
  m.outputs.push_back(sum_path);
  io::write_manifest((fs::path(a.out_dir) / "spectrum.manifest.json").string(), m);
  std::printf("spectrum: %zu output file(s) in %s (%.2fs)\n", m.outputs.size(), a.out_dir.c_str(),
              m.elapsed_seconds);
  return 0;
}

// ---------------------------------------------------------------------------
// Verification suites: JSON report per item, exit 0 iff everything passes.

json property(const std::string& name, bool pass, double value, const std::string& detail = "") {
  return json{{"property", name}, {"pass", pass}, {"value", value}, {"detail", detail}};
}

json verify_specfun() {
  json items = json::array();
  const double g = 0.57721566490153286;
  items.push_back(property("psi(1) = -gamma",
                           std::abs(specfun::digamma(1.0) + g) < 1e-12, specfun::digamma(1.0)));
  items.push_back(property("K0(1)", std::abs(specfun::bessel_k(0, 1.0) - 0.42102443824070834) < 1e-10,
                           specfun::bessel_k(0, 1.0)));
  items.push_back(property("K1(1)", std::abs(specfun::bessel_k(1, 1.0) - 0.60190723019723458) < 1e-10,
                           specfun::bessel_k(1, 1.0)));
  bool rec = true;
  for (double x = 0.5; x < 40.0; x += 0.9) {
    const Complex z{x, 0.3 * x};
    rec &= std::abs(specfun::digamma(z + 1.0) - specfun::digamma(z) - 1.0 / z) <
           1e-12 * std::max(1.0, std::abs(1.0 / z));
  }
  items.push_back(property("digamma recurrence", rec, 0.0));
  return items;
}

json verify_green_suite() {
  json items = json::array();
  for (const verify::BoundReport& r : verify::verify_all_bounds())
    items.push_back(json{{"property", r.lemma},
                         {"pass", r.pass},
                         {"value", r.worst_margin},
                         {"detail", "grid " + r.grid_spec + "; worst at " + r.worst_node}});
  // closed form vs quadrature consistency
  const Energy e{Complex(-1.0, 0.0), 0.1};
  const Complex gc = green::landau_green({0, 0}, {1, 0}, e, green::GreenMode::closed_form);
  const Complex gq = green::landau_green({0, 0}, {1, 0}, e, green::GreenMode::quadrature);
  items.push_back(property("closed vs quadrature", std::abs(gc - gq) < 1e-7 * std::abs(gc),
                           std::abs(gc - gq) / std::abs(gc)));
  return items;
}

json verify_lattice_suite() {
  json items = json::array();
  const Energy e{Complex(-2.0, 0.0), 0.5};
  const lattice::KreinMatrix k = lattice::build_q_matrix(e, 2);
  bool herm = true;
  try {
    k.entries.check_hermitian(1e-12);
  } catch (const HermiticityError&) {
    herm = false;
  }
  items.push_back(property("krein hermiticity", herm, 0.0));
  double cov = 0.0;
  const int w = 5;
  for (int i = 0; i < k.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j) {
      const auto s1 = k.site(i), s2 = k.site(j);
      if (std::abs(s1.m + 1) > 2 || std::abs(s1.n + 1) > 2 || std::abs(s2.m + 1) > 2 ||
          std::abs(s2.n + 1) > 2)
        continue;
      const int i2 = (s1.m + 3) * w + (s1.n + 3), j2 = (s2.m + 3) * w + (s2.n + 3);
      cov = std::max(cov, std::abs(k.entries(i2, j2) -
                                   std::exp(Complex(0.0, -e.h * (s1.m - s2.m))) *
                                       k.entries(i, j)));
    }
  items.push_back(property("magnetic covariance", cov < 1e-12, cov));
  const lattice::MSymbol ms = lattice::symbol_m(e, 2.0, 6);
  const double round =
      std::abs(ms.m_alpha * lattice::a_coeff(e) - (green::q_reg(e) + 0.5));
  items.push_back(property("m_alpha identity", round < 1e-12, round));
  return items;
}

json verify_harper_suite() {
  json items = json::array();
  const lattice::FourierSymbol hs = lattice::harper_symbol();
  const harper::BandStructure b2 =
      harper::band_spectrum(hs, RationalFlux{1, 2}, 128, 128, 1e-9, true);
  items.push_back(property("flux 1/2 edges = +-sqrt2",
                           std::abs(b2.min() + std::sqrt(2.0)) < 1e-3 &&
                               std::abs(b2.max() - std::sqrt(2.0)) < 1e-3,
                           b2.max()));
  // discrete-fiber vs Bloch equivalence: 1D truncations cover the band set
  std::vector<double> all;
  for (int i = 0; i < 32; ++i) {
    const auto ev = harper::truncated_spectrum_1d(hs, kPi, kTwoPi * i / 32, 60);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  std::sort(all.begin(), all.end());
  double worst = 0.0;
  for (const Interval& band : b2.per_index)
    for (int kk = 0; kk <= 20; ++kk) {
      const double x = band.lo + (band.hi - band.lo) * kk / 20.0;
      const auto it = std::lower_bound(all.begin(), all.end(), x);
      double best = 1e308;
      if (it != all.end()) best = std::min(best, std::abs(*it - x));
      if (it != all.begin()) best = std::min(best, std::abs(*(it - 1) - x));
      worst = std::max(worst, best);
    }
  items.push_back(property("1d truncation covers bands", worst < 0.08, worst));
  // two gauge conventions agree
  double gauge = 0.0;
  for (double th : {0.0, 0.9}) {
    const auto ea = hermitian_eigs(
        harper::bloch_matrix(hs, RationalFlux{1, 3}, {th, 1.1}, harper::BlochGauge::momentum_split));
    const auto eb = hermitian_eigs(
        harper::bloch_matrix(hs, RationalFlux{1, 3}, {th, 1.1}, harper::BlochGauge::winding));
    for (int j = 0; j < 3; ++j) gauge = std::max(gauge, std::abs(ea[j] - eb[j]));
  }
  items.push_back(property("gauge equivalence", gauge < 1e-10, gauge));
  return items;
}

json verify_solver_suite() {
  json items = json::array();
  bool round_ok = true, real_ok = true;
  int worst_iters = 0;
  for (int mu = -4; mu <= 4; ++mu) {
    const solver::ZetaResult r = solver::zeta(Complex(mu, 0.0), 2.0, 0.3);
    worst_iters = std::max(worst_iters, r.trace.iterations);
    round_ok &= std::abs(solver::m_alpha_at(r.point) - Complex(mu, 0.0)) < 1e-10;
    real_ok &= r.point.z_complex().imag() == 0.0;
  }
  items.push_back(property("fixed point round trip", round_ok, worst_iters));
  items.push_back(property("real mu gives real zeta", real_ok, 0.0));
  double prev = 1e308;
  bool mono = true;
  for (double alpha : {0.5, 0.3, 0.2, 0.1}) {
    const solver::PSymbol ps = solver::p_symbol(0.0, alpha, 0.3, 6);
    const double le = lattice::epsilon_estimate(ps.symbol, 0.5, 48).log_value;
    mono &= le < prev;
    prev = le;
  }
  items.push_back(property("epsilon ladder decreasing", mono, prev));
  return items;
}

int run_verify(const std::string& suite, const std::string& out_dir) {
  Timer timer;
  json report;
  const std::vector<std::string> all{"specfun", "green", "lattice", "harper", "solver"};
  std::vector<std::string> todo;
  if (suite == "all")
    todo = all;
  else if (std::find(all.begin(), all.end(), suite) != all.end())
    todo = {suite};
  else {
    std::fprintf(stderr, "verify: unknown suite '%s'\n", suite.c_str());
    return 2;
  }
  bool pass = true;
  for (const std::string& s : todo) {
    json items;
    if (s == "specfun") items = verify_specfun();
    if (s == "green") items = verify_green_suite();
    if (s == "lattice") items = verify_lattice_suite();
    if (s == "harper") items = verify_harper_suite();
    if (s == "solver") items = verify_solver_suite();
    for (const json& it : items) pass &= it.at("pass").get<bool>();
    report[s] = items;
  }
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / ("verify_" + suite + ".json")).string();
  report["pass"] = pass;
  report["elapsed_seconds"] = timer.seconds();
  io::write_file(path, report.dump(2) + "\n");
  std::printf("verify %s: %s (%s, %.1fs)\n", suite.c_str(), pass ? "PASS" : "FAIL", path.c_str(),
              timer.seconds());
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string op;
  double re = -1.0, im = 0.0, h = 0.5, alpha = 2.0, t = 1.0, x = 0.0;
  double x1 = 0.0, x2 = 0.0, y1 = 1.0, y2 = 0.0;
  double mu = 0.0, strip = 0.5;
  int m = 1, n = 0, order = 0, radius = 4, cutoff = 6;
};

int run_eval(const EvalArgs& a) {
  const Complex z{a.re, a.im};
  const PlanePoint px{a.x1, a.x2}, py{a.y1, a.y2};
  auto print = [](Complex v) { std::printf("%s %s\n", fmt_g17(v.real()).c_str(), fmt_g17(v.imag()).c_str()); };
  if (a.op == "digamma") {
    print(specfun::digamma(z));
  } else if (a.op == "gamma_u") {
    print(specfun::gamma_u(z, a.x));
  } else if (a.op == "bessel_k") {
    print(Complex(specfun::bessel_k(a.order, a.x), 0.0));
  } else if (a.op == "heat_kernel") {
    print(green::heat_kernel(px, py, a.t, a.h));
  } else if (a.op == "landau_green") {
    print(green::landau_green(px, py, Energy{z, a.h}));
  } else if (a.op == "f_kernel") {
    print(green::f_kernel(px, py, Energy{z, a.h}));
  } else if (a.op == "free_green") {
    print(green::free_green(a.order ? a.order : 1, px, py, z));
  } else if (a.op == "green2") {
    print(green::green2(px, py, Energy{z, a.h}));
  } else if (a.op == "q_reg") {
    print(green::q_reg(Energy{z, a.h}));
  } else if (a.op == "q0") {
    print(green::q0(z));
  } else if (a.op == "lambda") {
    print(lattice::lambda_coeff(a.m, a.n, Energy{z, a.h}));
  } else if (a.op == "a_coeff") {
    print(lattice::a_coeff(Energy{z, a.h}));
  } else if (a.op == "q_distance") {
    const lattice::QDistance d = lattice::q_distance(Energy{z, a.h}, a.alpha, a.radius);
    std::printf("%s %s\n", fmt_g17(d.value).c_str(), fmt_g17(d.value_prev).c_str());
  } else if (a.op == "z_of_beta") {
    const LogScaled v = solver::z_of_beta(z, a.alpha);
    std::printf("%s  (log|z| = %s)\n", io::fmt_log_scaled(v.log_mag, -1).c_str(),
                fmt_g17(v.log_mag).c_str());
  } else if (a.op == "psi_map") {
    print(solver::psi_map(z, a.alpha, Complex(a.mu, 0.0), a.h));
  } else if (a.op == "zeta") {
    const solver::ZetaResult r = solver::zeta(Complex(a.mu, 0.0), a.alpha, a.h);
    std::printf("%s  iterations=%d residual=%s\n",
                io::fmt_log_scaled(r.point.z.log_mag, -1).c_str(), r.trace.iterations,
                fmt_g17(r.trace.residual).c_str());
  } else if (a.op == "epsilon") {
    const solver::PSymbol ps = solver::p_symbol(a.mu, a.alpha, a.h, a.cutoff);
    const lattice::EpsilonEstimate eps = lattice::epsilon_estimate(ps.symbol, a.strip, 64);
    std::printf("eps=%s log_eps=%s\n", fmt_g17(eps.value).c_str(), fmt_g17(eps.log_value).c_str());
  } else {
    std::fprintf(stderr, "eval: unknown op '%s'\n", a.op.c_str());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum of the Landau Hamiltonian with a periodic lattice of point scatterers"};
  app.require_subcommand(0, 1);

  std::string from_manifest;
  app.add_option("--from-manifest", from_manifest, "replay a command from its manifest");

  ButterflyArgs bf;
  CLI::App* cb = app.add_subcommand("butterfly", "band structure over Farey fluxes");
  cb->add_option("--source", bf.source, "harper | effective");
  cb->add_option("--mode", bf.mode, "mu | z (effective source)");
  cb->add_option("--max-q", bf.max_q, "largest flux denominator");
  cb->add_option("--grid", bf.grid, "Bloch grid per axis");
  cb->add_option("--alpha", bf.alpha, "coupling (effective source)");
  cb->add_option("--e0", bf.e0, "clip level (z mode)");
  cb->add_option("--out", bf.out_dir, "output directory");

  SpectrumArgs sp;
  CLI::App* cs = app.add_subcommand("spectrum", "negative spectrum below -E0");
  cs->add_option("--alpha", sp.alpha, "coupling");
  cs->add_option("--p", sp.p, "flux numerator");
  cs->add_option("--q", sp.q, "flux denominator");
  cs->add_option("--e0", sp.e0, "clip level E0 > 0");
  cs->add_option("--method", sp.method, "reduced | direct | both");
  cs->add_option("--out", sp.out_dir, "output directory");
  cs->add_option("--radius", sp.cfg.radius, "lattice coefficient radius");
  cs->add_option("--cutoff", sp.cfg.cutoff, "tail cutoff |m|+|n|");
  cs->add_option("--bloch-grid", sp.cfg.n_theta, "Bloch grid per axis");
  cs->add_option("--tol", sp.cfg.fp_tol, "fixed point tolerance");

  std::string suite = "all", verify_out = ".";
  CLI::App* cv = app.add_subcommand("verify", "run a verification suite");
  cv->add_option("--suite", suite, "specfun|green|lattice|harper|solver|all");
  cv->add_option("--out", verify_out, "output directory");

  EvalArgs ev;
  CLI::App* ce = app.add_subcommand("eval", "evaluate a single operation");
  ce->add_option("--op", ev.op, "operation name")->required();
  ce->add_option("--re", ev.re, "Re z");
  ce->add_option("--im", ev.im, "Im z");
  ce->add_option("--field", ev.h, "field strength h");
  ce->add_option("--alpha", ev.alpha, "coupling");
  ce->add_option("--x", ev.x, "real argument");
  ce->add_option("--t", ev.t, "time");
  ce->add_option("--x1", ev.x1, "x first coordinate");
  ce->add_option("--x2", ev.x2, "x second coordinate");
  ce->add_option("--y1", ev.y1, "y first coordinate");
  ce->add_option("--y2", ev.y2, "y second coordinate");
  ce->add_option("--m", ev.m, "lattice index m");
  ce->add_option("--n", ev.n, "lattice index n");
  ce->add_option("--order", ev.order, "kernel order");
  ce->add_option("--radius", ev.radius, "truncation radius");
  ce->add_option("--cutoff", ev.cutoff, "symbol cutoff");
  ce->add_option("--mu", ev.mu, "spectral parameter mu");
  ce->add_option("--strip", ev.strip, "analyticity strip width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (!from_manifest.empty()) {
      const json m = io::read_json_file(from_manifest);
      const std::string cmd = m.at("command").get<std::string>();
      if (cmd == "butterfly") return run_butterfly(ButterflyArgs::from_json(m.at("config")));
      if (cmd == "spectrum") return run_spectrum(SpectrumArgs::from_json(m.at("config")));
      std::fprintf(stderr, "replay: unsupported command '%s'\n", cmd.c_str());
      return 2;
    }
    sp.cfg.n_kappa = sp.cfg.n_theta;
    if (cb->parsed()) return run_butterfly(bf);
    if (cs->parsed()) return run_spectrum(sp);
    if (cv->parsed()) return run_verify(suite, verify_out);
    if (ce->parsed()) return run_eval(ev);
    std::fputs(app.help().c_str(), stderr);
    return 2;
  } catch (const NonConvergenceError& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return 3;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return 3;
  } catch (const NearSpectrumError& e) {
    std::fprintf(stderr, "near-spectrum: %s\n", e.what());
    return 3;
  } catch (const OverflowError& e) {
    std::fprintf(stderr, "overflow: %s\n", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
