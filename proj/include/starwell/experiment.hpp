#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "starwell/lattice.hpp"

namespace starwell {

/// Config-file or flag validation failure; maps to exit code 2.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ExperimentMode {
  Spectrum,
  Evolve,
  FidelityScan,
  Demux,
  Mux,
  AmpDemux,
  AmpMux,
  Lattice,
};

ExperimentMode mode_from_name(const std::string& name);
std::string mode_name(ExperimentMode mode);

/// One experiment as read from a JSON config (schema_version 1). Fields not
/// used by the selected mode are carried but ignored. Defaults follow the
/// reference parameter set U/J=0.51, sigma/J=1.56, nu/J=1.05, N=16.
struct ExperimentConfig {
  int schema_version = 1;
  ExperimentMode mode = ExperimentMode::Evolve;
  int N = 16;
  double U = 0.51;
  double sigma = 1.56;
  double J = 1.0;
  double nu = 1.05;
  int k = 2;
  bool field_given = false;  // evolve: apply the broken-symmetry field
  std::array<int, 4> initial_state{14, 2, 0, 0};
  double t_max = -1.0;  // < 0: mode-specific default (one period or tau)
  int samples = 200;
  double q = -1.0;  // amp-demux: < 0 sweeps a q grid instead of one run
  int q_points = 11;
  double sigma_min = -20.0;
  double sigma_max = 20.0;
  int sigma_points = 200;
  double u_min = 0.0;
  double u_max = 1.0;
  int u_points = 61;
  int n1 = 16;
  int n2 = 4;
  int n4 = 0;
  unsigned seed = 20250811;
  std::string output = "starwell_out.csv";
  LatticeConfig lattice;
  bool scattering_length_given = false;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Parse a config file, run it, and write output plus a JSON sidecar (the
/// fully resolved config) next to it. Writes are atomic (temp file+rename).
/// Throws SchemaError for config problems; numerical errors propagate.
void run_experiment(const ExperimentConfig& cfg, std::ostream& log);

ExperimentConfig load_config_file(const std::string& path);

}  // namespace starwell
