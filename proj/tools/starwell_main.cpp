#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "starwell/errors.hpp"
#include "starwell/experiment.hpp"
#include "starwell/verification.hpp"

namespace {

using nlohmann::json;

struct CliOverrides {
  std::string config_path;
  std::optional<int> N;
  std::optional<double> U, sigma, J, nu, q, t_max, sigma_min, sigma_max, u_min, u_max;
  std::optional<int> k, samples, q_points, sigma_points, u_points, n1, n2, n4;
  std::optional<unsigned> seed;
  std::optional<std::string> output;
  std::optional<std::vector<int>> initial;
  std::optional<double> scattering_length, dipole_moment, wavelength, waist, displacement;
  std::optional<double> V0, V1, V2, V3;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON config file");
  cmd->add_option("-N,--particles", o.N, "total particle number");
  cmd->add_option("-U", o.U, "interaction U in units of J");
  cmd->add_option("--sigma", o.sigma, "field gradient sigma in units of J");
  cmd->add_option("--nu", o.nu, "symmetry-breaking strength nu in units of J");
  cmd->add_option("-k", o.k, "target well of the displaced field");
  cmd->add_option("-q", o.q, "second-stage duration in units of tau");
  cmd->add_option("--t-max", o.t_max, "evolution span in units of 1/J");
  cmd->add_option("--samples", o.samples, "samples across the run");
  cmd->add_option("--initial", o.initial, "initial occupations n1,n2,n3,n4")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--n1", o.n1, "source occupation");
  cmd->add_option("--n2", o.n2, "second source occupation");
  cmd->add_option("--n4", o.n4, "central-well occupation");
  cmd->add_option("--q-points", o.q_points, "sweep points over q in [0,1]");
  cmd->add_option("--sigma-min", o.sigma_min, "scan lower bound");
  cmd->add_option("--sigma-max", o.sigma_max, "scan upper bound");
  cmd->add_option("--sigma-points", o.sigma_points, "scan grid size");
  cmd->add_option("--u-min", o.u_min, "spectrum scan lower bound");
  cmd->add_option("--u-max", o.u_max, "spectrum scan upper bound");
  cmd->add_option("--u-points", o.u_points, "spectrum scan grid size");
  cmd->add_option("--seed", o.seed, "seed for randomized sweeps");
  cmd->add_option("-o,--output", o.output, "output data file");
  cmd->add_option("--wavelength", o.wavelength, "lattice wavelength (m)");
  cmd->add_option("--V0", o.V0, "lattice depth in recoil units");
  cmd->add_option("--V1", o.V1, "vertical lattice depth in recoil units");
  cmd->add_option("--V2", o.V2, "second lattice depth in recoil units");
  cmd->add_option("--V3", o.V3, "Gaussian beam depth in recoil units");
  cmd->add_option("--waist", o.waist, "Gaussian beam waist (m)");
  cmd->add_option("--displacement", o.displacement, "beam displacement Delta_l (m)");
  cmd->add_option("--scattering-length", o.scattering_length, "contact length (Bohr radii)");
  cmd->add_option("--dipole-moment", o.dipole_moment, "dipole moment (Bohr magnetons)");
}

json merged_config(const CliOverrides& o, const std::string& mode) {
  json j = json::object();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw starwell::SchemaError("config", "cannot read " + o.config_path);
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw starwell::SchemaError("config", std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object())
      throw starwell::SchemaError("config", "top level must be a JSON object");
  }
  if (!mode.empty()) j["mode"] = mode;

  const auto set = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  set("N", o.N);
  set("U", o.U);
  set("sigma", o.sigma);
  set("J", o.J);
  set("nu", o.nu);
  set("k", o.k);
  set("q", o.q);
  set("t_max", o.t_max);
  set("samples", o.samples);
  set("q_points", o.q_points);
  set("sigma_min", o.sigma_min);
  set("sigma_max", o.sigma_max);
  set("sigma_points", o.sigma_points);
  set("u_min", o.u_min);
  set("u_max", o.u_max);
  set("u_points", o.u_points);
  set("n1", o.n1);
  set("n2", o.n2);
  set("n4", o.n4);
  set("seed", o.seed);
  set("output", o.output);
  if (o.initial) j["initial_state"] = *o.initial;
  const auto set_lattice = [&](const char* key, const auto& opt) {
    if (opt) j["lattice"][key] = *opt;
  };
  set_lattice("wavelength", o.wavelength);
  set_lattice("V0", o.V0);
  set_lattice("V1", o.V1);
  set_lattice("V2", o.V2);
  set_lattice("V3", o.V3);
  set_lattice("waist", o.waist);
  set_lattice("displacement", o.displacement);
  set_lattice("scattering_length", o.scattering_length);
  set_lattice("dipole_moment", o.dipole_moment);
  return j;
}

int report_error(const char* type, const std::string& field, const std::string& message,
                 int code) {
  json err = {{"error", {{"type", type}, {"message", message}}}};
  if (!field.empty()) err["error"]["field"] = field;
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"starwell: dipolar bosons in a four-well star plaquette"};
  app.require_subcommand(1);

  const std::vector<std::string> modes = {"spectrum", "evolve",    "fidelity-scan",
                                          "demux",    "mux",       "amp-demux",
                                          "amp-mux",  "lattice"};
  std::map<std::string, CliOverrides> overrides;
  std::vector<CLI::App*> cmds;
  for (const auto& m : modes) {
    CLI::App* cmd = app.add_subcommand(m, m + " experiment");
    add_common_options(cmd, overrides[m]);
    cmds.push_back(cmd);
  }
  CliOverrides run_overrides;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  add_common_options(run_cmd, run_overrides);

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the full invariant suite");
  unsigned verify_seed = 20250811;
  verify_cmd->add_option("--seed", verify_seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify_cmd->parsed()) {
      const auto results = starwell::run_verification(verify_seed, &std::cout);
      int failed = 0;
      for (const auto& r : results) failed += r.pass ? 0 : 1;
      std::cout << (failed == 0 ? "all checks passed"
                                : std::to_string(failed) + " check(s) failed")
                << "\n";
      return failed == 0 ? 0 : 1;
    }
    std::string mode;
    const CliOverrides* o = &run_overrides;
    if (run_cmd->parsed()) {
      if (run_overrides.config_path.empty())
        throw starwell::SchemaError("config", "run requires --config");
    } else {
      for (std::size_t i = 0; i < modes.size(); ++i)
        if (cmds[i]->parsed()) {
          mode = modes[i];
          o = &overrides[modes[i]];
        }
    }
    const json j = merged_config(*o, mode);
    const auto cfg = starwell::ExperimentConfig::from_json(j);
    starwell::run_experiment(cfg, std::cout);
    return 0;
  } catch (const starwell::SchemaError& e) {
    return report_error("schema", e.field(), e.what(), 2);
  } catch (const starwell::SingularParameter& e) {
    return report_error("numerical", "", e.what(), 3);
  } catch (const starwell::InsufficientData& e) {
    return report_error("numerical", "", e.what(), 3);
  } catch (const starwell::InternalConsistencyError& e) {
    return report_error("numerical", "", e.what(), 3);
  } catch (const std::invalid_argument& e) {
    return report_error("schema", "", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("numerical", "", e.what(), 3);
  }
}
