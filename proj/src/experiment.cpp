#include "starwell/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "starwell/analytic.hpp"
#include "starwell/dynamics.hpp"
#include "starwell/protocols.hpp"

namespace starwell {

namespace {

using nlohmann::json;
using std::numbers::pi;

const std::map<std::string, ExperimentMode>& mode_table() {
  static const std::map<std::string, ExperimentMode> table = {
      {"spectrum", ExperimentMode::Spectrum},  {"evolve", ExperimentMode::Evolve},
      {"fidelity-scan", ExperimentMode::FidelityScan},
      {"demux", ExperimentMode::Demux},        {"mux", ExperimentMode::Mux},
      {"amp-demux", ExperimentMode::AmpDemux}, {"amp-mux", ExperimentMode::AmpMux},
      {"lattice", ExperimentMode::Lattice},
  };
  return table;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Atomic text write: temp file in the same directory, then rename.
void write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string sidecar_path(const std::string& output) { return output + ".json"; }

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

std::string comment_header(const ExperimentConfig& cfg, const std::string& columns) {
  std::ostringstream os;
  os << "# starwell " << mode_name(cfg.mode) << "\n";
  os << "# parameters: " << cfg.to_json().dump() << "\n";
  os << "# columns: " << columns << "\n";
  return os.str();
}

void emit_series(const ExperimentConfig& cfg, const ProtocolReport& report,
                 std::ostream& log) {
  const int n_particles = report.series.particles;
  std::ostringstream os;
  const bool with_analytic = report.analytic.times.size() > 0;
  os << comment_header(cfg, with_analytic ? "t num_N1 num_N2 num_N3 num_N4 "
                                            "ana_N1 ana_N2 ana_N3 ana_N4 (fractional)"
                                          : "t num_N1 num_N2 num_N3 num_N4 (fractional)");
  std::size_t boundary = 0;
  for (Eigen::Index i = 0; i < report.series.times.size(); ++i) {
    const double t = report.series.times[i];
    while (boundary < report.stage_boundaries.size() &&
           t > report.stage_boundaries[boundary]) {
      os << "# stage-boundary t = " << num(report.stage_boundaries[boundary]) << "\n";
      ++boundary;
    }
    os << num(t);
    for (int s = 0; s < 4; ++s)
      os << " " << num(report.series.populations[static_cast<std::size_t>(s)][i] / n_particles);
    if (with_analytic)
      for (int s = 0; s < 4; ++s)
        os << " "
           << num(report.analytic.populations[static_cast<std::size_t>(s)][i] / n_particles);
    os << "\n";
  }
  write_file(cfg.output, os.str());

  json side = cfg.to_json();
  side["verdicts"] = json::object();
  for (const auto& [key, value] : report.verdicts) side["verdicts"][key] = value;
  side["max_abs_deviation"] = report.max_abs_deviation;
  side["stage_boundaries"] = report.stage_boundaries;
  write_file(sidecar_path(cfg.output), side.dump(2) + "\n");
  log << "wrote " << cfg.output << " and " << sidecar_path(cfg.output) << "\n";
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw SchemaError(field, message);
}

void run_spectrum(const ExperimentConfig& cfg, std::ostream& log) {
  require(cfg.u_points >= 1, "u_points", "need at least one grid point");
  const FockBasis basis(cfg.N);
  ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  const auto grid = linspace(cfg.u_min, cfg.u_max, cfg.u_points);
  const auto scan = spectrum_scan(basis, p, grid);
  std::ostringstream os;
  os << comment_header(cfg, "UN_over_J E_over_J");
  for (const auto& [un, levels] : scan)
    for (Eigen::Index i = 0; i < levels.size(); ++i)
      os << num(un) << " " << num(levels[i]) << "\n";
  write_file(cfg.output, os.str());
  write_file(sidecar_path(cfg.output), cfg.to_json().dump(2) + "\n");
  log << "wrote " << cfg.output << " (" << scan.size() << " grid points) and "
      << sidecar_path(cfg.output) << "\n";
}

void run_evolve(ExperimentConfig cfg, std::ostream& log) {
  const FockBasis basis(cfg.N);
  FockState ini{cfg.initial_state};
  require(ini.total() == cfg.N, "initial_state",
          "occupations must sum to N = " + std::to_string(cfg.N));
  for (int v : ini.n) require(v >= 0, "initial_state", "occupations must be non-negative");
  const ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  require(cfg.samples >= 2, "samples", "need at least two samples");

  Schedule schedule{fock_state_vector(basis, ini), {}, 0.0};
  AnalyticOverlay overlay;
  if (cfg.field_given) {
    const FieldConfig f(cfg.nu, cfg.k);
    if (cfg.t_max < 0.0) cfg.t_max = 2.0 * transfer_time(zeta(p, f, ini[3]));
    schedule.stages.push_back(Stage{p, f, cfg.t_max, cfg.samples});
    overlay = [ini, p, f](double t) { return populations_broken(ini, p, f, t); };
  } else {
    if (cfg.t_max < 0.0)
      cfg.t_max = 2.0 * pi / (3.0 * std::abs(effective_hopping(p, ini[3])));
    schedule.stages.push_back(Stage{p, std::nullopt, cfg.t_max, cfg.samples});
    overlay = [ini, p](double t) { return populations_resonant(ini, p, t); };
  }
  emit_series(cfg, run_schedule(basis, schedule, overlay), log);
}

void run_fidelity_scan(const ExperimentConfig& cfg, std::ostream& log) {
  require(cfg.sigma_points >= 1, "sigma_points", "need at least one grid point");
  const FockBasis basis(cfg.N);
  FockState ini{cfg.initial_state};
  require(ini.total() == cfg.N, "initial_state",
          "occupations must sum to N = " + std::to_string(cfg.N));
  const ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  const auto grid = linspace(cfg.sigma_min, cfg.sigma_max, cfg.sigma_points);
  const SigmaScan scan = sigma_scan_fidelity(basis, p, grid, ini);
  std::ostringstream os;
  os << comment_header(cfg, "sigma_over_J F");
  for (const auto& [s, f] : scan.points) os << num(s) << " " << num(f) << "\n";
  write_file(cfg.output, os.str());
  json side = cfg.to_json();
  side["skipped_sigma"] = scan.skipped;
  write_file(sidecar_path(cfg.output), side.dump(2) + "\n");
  log << "wrote " << cfg.output << " (" << scan.points.size() << " points, "
      << scan.skipped.size() << " skipped) and " << sidecar_path(cfg.output) << "\n";
}

void run_demux(const ExperimentConfig& cfg, std::ostream& log) {
  require(cfg.k >= 1 && cfg.k <= 3, "k", "demux needs k in 1..3");
  require(cfg.n1 + cfg.n4 == cfg.N, "n1", "demux needs n1 + n4 = N");
  const FockBasis basis(cfg.N);
  const ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  const FieldConfig f(cfg.nu, cfg.k);
  emit_series(cfg, demux_1to2(basis, cfg.n1, cfg.n4, cfg.k, p, f), log);
}

void run_mux(const ExperimentConfig& cfg, std::ostream& log) {
  require(cfg.k == 1 || cfg.k == 2, "k", "mux needs k in {1,2}");
  require(cfg.n1 + cfg.n2 + cfg.n4 == cfg.N, "n1", "mux needs n1 + n2 + n4 = N");
  const FockBasis basis(cfg.N);
  const ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  const FieldConfig f(cfg.nu, cfg.k);
  emit_series(cfg, mux_2to1(basis, cfg.n1, cfg.n2, cfg.n4, cfg.k, p, f), log);
}

void run_amp_demux(const ExperimentConfig& cfg, std::ostream& log) {
  require(cfg.k == 2 || cfg.k == 3, "k", "amp-demux needs k in {2,3}");
  require(cfg.n1 + cfg.n4 == cfg.N, "n1", "amp-demux needs n1 + n4 = N");
  const FockBasis basis(cfg.N);
  const ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  const FieldConfig f(cfg.nu, cfg.k);
  if (cfg.q >= 0.0) {
    require(cfg.q <= 1.0, "q", "q must lie in [0,1]");
    emit_series(cfg, amplitude_demux(basis, cfg.n1, cfg.n4, cfg.k, cfg.q, p, f), log);
    return;
  }
  require(cfg.q_points >= 2, "q_points", "need at least two sweep points");
  std::ostringstream os;
  os << comment_header(cfg, "q imbalance_num imbalance_ana");
  for (int i = 0; i < cfg.q_points; ++i) {
    const double q = static_cast<double>(i) / (cfg.q_points - 1);
    const auto rep = amplitude_demux(basis, cfg.n1, cfg.n4, cfg.k, q, p, f);
    os << num(q) << " " << num(rep.verdicts.at("imbalance")) << " "
       << num(rep.verdicts.at("imbalance_predicted")) << "\n";
  }
  write_file(cfg.output, os.str());
  write_file(sidecar_path(cfg.output), cfg.to_json().dump(2) + "\n");
  log << "wrote " << cfg.output << " and " << sidecar_path(cfg.output) << "\n";
}

void run_amp_mux(ExperimentConfig cfg, std::ostream& log) {
  require(cfg.k == 1 || cfg.k == 2, "k", "amp-mux needs k in {1,2}");
  require(cfg.q >= 0.0 && cfg.q <= 1.0, "q", "amp-mux needs q in [0,1]");
  require(cfg.n1 + cfg.n4 == cfg.N, "n1", "amp-mux needs n1 + n4 = N");
  require(cfg.samples >= 2, "samples", "need at least two samples");
  const FockBasis basis(cfg.N);
  const ReducedParams p{cfg.U, cfg.sigma, cfg.J, cfg.N};
  const FieldConfig f(cfg.nu, cfg.k);
  if (cfg.t_max < 0.0) cfg.t_max = transfer_time(zeta(p, f, cfg.n4));
  const auto grid = linspace(0.0, cfg.t_max, cfg.samples);
  emit_series(cfg, amplitude_mux(basis, cfg.n1, cfg.n4, cfg.q, cfg.k, p, f, grid), log);
}

void run_lattice(const ExperimentConfig& cfg, std::ostream& log) {
  require(cfg.scattering_length_given, "lattice.scattering_length",
          "the contact scattering length is a required input (it is not fixed "
          "by the lattice geometry)");
  const HubbardParams hp = hubbard_params(cfg.lattice);
  const ReducedDerivation rd = derive_reduced(hp, 0.0, cfg.N);
  const FieldTerms ft = field_terms(cfg.lattice);
  const double er = recoil_energy(cfg.lattice);
  json out;
  out["config"] = cfg.to_json();
  out["recoil_energy_J"] = er;
  out["trap"] = {{"omega_rad_s", hp.trap.omega},
                 {"omega_z_rad_s", hp.trap.omega_z},
                 {"omega_over_2pi_kHz", hp.trap.omega / (2.0 * pi) / 1e3},
                 {"kappa", hp.trap.kappa},
                 {"eta_xy_m2", hp.trap.eta_xy},
                 {"eta_z_m2", hp.trap.eta_z}};
  out["hubbard"] = {{"U0_J", hp.U0},       {"Uc_J", hp.Uc},
                    {"Udip_J", hp.Udip},   {"U_edge_J", hp.U_edge},
                    {"U_center_J", hp.U_center}, {"J_J", hp.J},
                    {"sigma_J", hp.sigma}, {"nu_J", hp.nu},
                    {"lambda_J", hp.lambda}};
  out["ratios"] = {{"U_over_J", hp.U_over_J},
                   {"sigma_over_J", hp.sigma_over_J},
                   {"nu_over_J", hp.nu_over_J},
                   {"lambda_over_J", hp.lambda_over_J},
                   {"sigma_over_nu", ft.sigma / ft.nu}};
  out["reduced"] = {{"U", rd.params.U},
                    {"sigma", rd.params.sigma},
                    {"N", rd.params.N},
                    {"integrability_residual", rd.integrability_residual},
                    {"dropped_constant_over_J", rd.dropped_constant}};
  out["dipolar_length_bohr"] = dipolar_length(cfg.lattice) / constants::bohr_radius;
  write_file(cfg.output, out.dump(2) + "\n");
  write_file(sidecar_path(cfg.output), cfg.to_json().dump(2) + "\n");
  log << "wrote " << cfg.output << "\n";
}

}  // namespace

ExperimentMode mode_from_name(const std::string& name) {
  const auto it = mode_table().find(name);
  if (it == mode_table().end()) throw SchemaError("mode", "unknown mode '" + name + "'");
  return it->second;
}

std::string mode_name(ExperimentMode mode) {
  for (const auto& [name, m] : mode_table())
    if (m == mode) return name;
  return "?";
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  static const std::set<std::string> known = {
      "schema_version", "mode",        "N",          "U",        "sigma",
      "J",              "nu",          "k",          "field",    "initial_state",
      "t_max",          "samples",     "q",          "q_points", "sigma_min",
      "sigma_max",      "sigma_points", "u_min",     "u_max",    "u_points",
      "n1",             "n2",          "n4",         "seed",     "output",
      "lattice"};
  if (!j.is_object()) throw SchemaError("config", "top level must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw SchemaError(key, "unknown configuration key");

  ExperimentConfig cfg;
  try {
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1)
      throw SchemaError("schema_version", "only version 1 is supported");
    if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode").get<std::string>());
    cfg.N = j.value("N", cfg.N);
    if (cfg.N < 0) throw SchemaError("N", "particle number must be non-negative");
    cfg.U = j.value("U", cfg.U);
    cfg.sigma = j.value("sigma", cfg.sigma);
    cfg.J = j.value("J", cfg.J);
    if (cfg.J <= 0) throw SchemaError("J", "hopping rate must be positive");
    cfg.nu = j.value("nu", cfg.nu);
    cfg.k = j.value("k", cfg.k);
    cfg.field_given = j.value("field", false) || j.contains("nu") || j.contains("k");
    if (j.contains("field")) cfg.field_given = j.at("field").get<bool>();
    if (j.contains("initial_state")) {
      const auto arr = j.at("initial_state");
      if (!arr.is_array() || arr.size() != 4)
        throw SchemaError("initial_state", "expected 4 occupation numbers");
      for (int s = 0; s < 4; ++s)
        cfg.initial_state[static_cast<std::size_t>(s)] =
            arr.at(static_cast<std::size_t>(s)).get<int>();
    }
    cfg.t_max = j.value("t_max", cfg.t_max);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.q = j.value("q", cfg.q);
    cfg.q_points = j.value("q_points", cfg.q_points);
    cfg.sigma_min = j.value("sigma_min", cfg.sigma_min);
    cfg.sigma_max = j.value("sigma_max", cfg.sigma_max);
    cfg.sigma_points = j.value("sigma_points", cfg.sigma_points);
    cfg.u_min = j.value("u_min", cfg.u_min);
    cfg.u_max = j.value("u_max", cfg.u_max);
    cfg.u_points = j.value("u_points", cfg.u_points);
    cfg.n1 = j.value("n1", cfg.n1);
    cfg.n2 = j.value("n2", cfg.n2);
    cfg.n4 = j.value("n4", cfg.n4);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output = j.value("output", cfg.output);
    if (j.contains("lattice")) {
      const auto& lj = j.at("lattice");
      static const std::set<std::string> lattice_known = {
          "wavelength", "V0", "V1", "V2", "V3", "waist", "displacement",
          "displacement_site", "mass", "scattering_length", "dipole_moment"};
      for (const auto& [key, _] : lj.items())
        if (!lattice_known.count(key)) throw SchemaError("lattice." + key, "unknown key");
      LatticeConfig& lc = cfg.lattice;
      lc.wavelength = lj.value("wavelength", lc.wavelength);
      lc.V0 = lj.value("V0", lc.V0);
      lc.V1 = lj.value("V1", 0.75 * lc.V0);
      lc.V2 = lj.value("V2", 0.0004 * lc.V0);
      lc.V3 = lj.value("V3", 0.005 * lc.V0);
      lc.waist = lj.value("waist", lc.waist);
      lc.displacement = lj.value("displacement", -site_spacing(lc) / 2.0);
      lc.displacement_site = lj.value("displacement_site", lc.displacement_site);
      lc.mass = lj.value("mass", lc.mass);
      if (lj.contains("scattering_length")) {
        lc.scattering_length = lj.at("scattering_length").get<double>();
        cfg.scattering_length_given = true;
      }
      lc.dipole_moment = lj.value("dipole_moment", lc.dipole_moment);
      if (lc.wavelength <= 0 || lc.waist <= 0 || lc.mass <= 0)
        throw SchemaError("lattice", "wavelength, waist and mass must be positive");
      if (lc.V0 < 0 || lc.V1 < 0 || lc.V2 < 0 || lc.V3 < 0)
        throw SchemaError("lattice", "depths must be non-negative");
    }
  } catch (const json::exception& e) {
    throw SchemaError("config", e.what());
  }
  return cfg;
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["mode"] = mode_name(mode);
  j["N"] = N;
  j["U"] = U;
  j["sigma"] = sigma;
  j["J"] = J;
  j["nu"] = nu;
  j["k"] = k;
  j["field"] = field_given;
  j["initial_state"] = initial_state;
  j["t_max"] = t_max;
  j["samples"] = samples;
  j["q"] = q;
  j["q_points"] = q_points;
  j["sigma_min"] = sigma_min;
  j["sigma_max"] = sigma_max;
  j["sigma_points"] = sigma_points;
  j["u_min"] = u_min;
  j["u_max"] = u_max;
  j["u_points"] = u_points;
  j["n1"] = n1;
  j["n2"] = n2;
  j["n4"] = n4;
  j["seed"] = seed;
  j["output"] = output;
  j["lattice"] = {{"wavelength", lattice.wavelength},
                  {"V0", lattice.V0},
                  {"V1", lattice.V1},
                  {"V2", lattice.V2},
                  {"V3", lattice.V3},
                  {"waist", lattice.waist},
                  {"displacement", lattice.displacement},
                  {"displacement_site", lattice.displacement_site},
                  {"mass", lattice.mass},
                  {"dipole_moment", lattice.dipole_moment}};
  if (scattering_length_given)
    j["lattice"]["scattering_length"] = lattice.scattering_length;
  return j;
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  switch (cfg.mode) {
    case ExperimentMode::Spectrum: run_spectrum(cfg, log); return;
    case ExperimentMode::Evolve: run_evolve(cfg, log); return;
    case ExperimentMode::FidelityScan: run_fidelity_scan(cfg, log); return;
    case ExperimentMode::Demux: run_demux(cfg, log); return;
    case ExperimentMode::Mux: run_mux(cfg, log); return;
    case ExperimentMode::AmpDemux: run_amp_demux(cfg, log); return;
    case ExperimentMode::AmpMux: run_amp_mux(cfg, log); return;
    case ExperimentMode::Lattice: run_lattice(cfg, log); return;
  }
  throw SchemaError("mode", "unhandled mode");
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("config", "cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("config", std::string("JSON parse error: ") + e.what());
  }
  return ExperimentConfig::from_json(j);
}

}  // namespace starwell
