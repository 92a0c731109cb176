#pragma once

// Output layer: deterministic CSV (17 significant digits, fixed row order),
// JSON reports and run manifests.  Endpoints stored as log|z| print through a
// decimal formatter that works beyond double range.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "landau/bandset.hpp"
#include "landau/errors.hpp"
#include "landau/harper.hpp"
#include "landau/lattice.hpp"
#include "landau/solver.hpp"
#include "landau/verify.hpp"
#include "landau/version.hpp"

namespace landau {
namespace io {

using nlohmann::json;

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Decimal scientific notation "-m.mmm...e+ppp" for z = sign * exp(log_abs);
// exact beyond double range (the deep-coupling bands reach |z| ~ 1e500+).
inline std::string fmt_log_scaled(double log_abs, int sign) {
  if (sign == 0) return "0";
  const double log10v = log_abs / std::log(10.0);
  double ipart;
  double frac = std::modf(log10v, &ipart);
  if (frac < 0.0) {
    frac += 1.0;
    ipart -= 1.0;
  }
  const double mant = std::pow(10.0, frac);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%.12fe%+04d", sign < 0 ? "-" : "", mant,
                static_cast<int>(ipart));
  return buf;
}

inline std::string fmt_z_endpoint(double log_abs) {
  if (log_abs < 700.0) return fmt_g17(-std::exp(log_abs));
  return fmt_log_scaled(log_abs, -1);
}

// ---------------------------------------------------------------------------

inline json to_json(const verify::BoundReport& r) {
  return json{{"lemma", r.lemma},
              {"grid", r.grid_spec},
              {"worst_margin", r.worst_margin},
              {"pass", r.pass},
              {"nodes", r.nodes},
              {"worst_node", r.worst_node}};
}

inline json to_json(const lattice::FourierSymbol& s) {
  json coeffs = json::array();
  for (const auto& [site, c] : s.coeffs)
    coeffs.push_back(json::array({site.m, site.n, c.real(), c.imag()}));
  return json{{"constant", {s.constant_term.real(), s.constant_term.imag()}},
              {"coeffs", coeffs},
              {"cutoff", s.cutoff_radius}};
}

inline json to_json(const solver::SolverConfig& c) {
  return json{{"radius", c.radius},
              {"cutoff", c.cutoff},
              {"n_theta", c.n_theta},
              {"n_kappa", c.n_kappa},
              {"fp_tol", c.fp_tol},
              {"fp_max_iter", c.fp_max_iter},
              {"beta_slack", c.beta_slack},
              {"mu_refine_tol", c.mu_refine_tol},
              {"band_merge_tol", c.band_merge_tol},
              {"z_scan_min", c.z_scan_min},
              {"z_scan_points", c.z_scan_points},
              {"tail_free", c.tail_free},
              {"polish", c.polish}};
}

inline solver::SolverConfig config_from_json(const json& j) {
  solver::SolverConfig c;
  c.radius = j.value("radius", c.radius);
  c.cutoff = j.value("cutoff", c.cutoff);
  c.n_theta = j.value("n_theta", c.n_theta);
  c.n_kappa = j.value("n_kappa", c.n_kappa);
  c.fp_tol = j.value("fp_tol", c.fp_tol);
  c.fp_max_iter = j.value("fp_max_iter", c.fp_max_iter);
  c.beta_slack = j.value("beta_slack", c.beta_slack);
  c.mu_refine_tol = j.value("mu_refine_tol", c.mu_refine_tol);
  c.band_merge_tol = j.value("band_merge_tol", c.band_merge_tol);
  c.z_scan_min = j.value("z_scan_min", c.z_scan_min);
  c.z_scan_points = j.value("z_scan_points", c.z_scan_points);
  c.tail_free = j.value("tail_free", c.tail_free);
  c.polish = j.value("polish", c.polish);
  return c;
}

// ---------------------------------------------------------------------------
// CSV writers.  Headers carry a schema version; rows are emitted in a fixed
// order so identical configurations produce byte-identical files.

inline std::string band_csv_header() { return "# landau-bands v1\nflux_p,flux_q,band_index,lower,upper\n"; }

inline void append_band_rows(std::string& out, harper::RationalFlux flux,
                             const std::vector<Interval>& bands) {
  for (std::size_t i = 0; i < bands.size(); ++i)
    out += std::to_string(flux.p) + "," + std::to_string(flux.q) + "," + std::to_string(i) + "," +
           fmt_g17(bands[i].lo) + "," + fmt_g17(bands[i].hi) + "\n";
}

inline std::string spectrum_csv(const solver::SpectrumResult& r) {
  std::string out = "# landau-spectrum v1\nz_lower,z_upper,method\n";
  for (const solver::ZInterval& iv : r.intervals)
    out += fmt_z_endpoint(iv.log_abs_lo) + "," + fmt_z_endpoint(iv.log_abs_hi) + "," + r.method +
           "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Run manifest: command, full config echo, versions, timing, outputs.
// Re-running a command from its manifest reproduces the CSV byte for byte
// (timing and paths are informational and excluded from the replay compare).

struct RunManifest {
  std::string command;
  json config;
  double elapsed_seconds = 0.0;
  std::vector<std::string> outputs;

  json to_json() const {
    return json{{"command", command},
                {"config", config},
                {"versions", {{"landau", kVersion}, {"schema", 1}}},
                {"elapsed_seconds", elapsed_seconds},
                {"outputs", outputs}};
  }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f << content;
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  write_file(path, m.to_json().dump(2) + "\n");
}

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open: " + path);
  json j;
  f >> j;
  return j;
}

}  // namespace io
}  // namespace landau
