#pragma once

// Experiment configuration: a key=value file (one pair per line, '#' starts a
// comment, later keys win) plus CLI overrides. Unknown keys and out-of-range
// values raise ConfigError naming the offending key.

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughwalk {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelId {
  iid,
  rotating,
  periodic,
  rwre_elliptic,
  rwre_dirichlet,
  srw_loops,
};

ModelId parse_model(const std::string& name);
const char* model_name(ModelId model);

struct ExperimentConfig {
  ModelId model = ModelId::rotating;
  long d = 2;
  double p = 0.5;
  std::vector<double> law;    // iid step law over +e1,-e1,...; empty = uniform
  std::vector<double> alpha;  // Dirichlet weights over +e1,-e1,...; empty = all ones
  long n = 100000;
  long replicas = 100;
  std::uint64_t seed = 1;
  Eigen::VectorXd direction;  // regeneration direction; empty = e1, normalized on load
  long margin = 1000;
  long period = -1;  // -1 = model default, 0 = run the detector, k > 0 = times k, 2k, ...
  double kappa_ell = 0.05;
  double p_moment = 4.0;
  std::vector<long> scales = {512, 1024, 2048, 4096, 8192};
  std::vector<double> holder_alpha = {0.35, 0.40, 0.45};
  long workers = 0;  // 0 = hardware concurrency capped by replica count
  std::string out = "out";
};

// Set one key on a partially built config; throws ConfigError for unknown
// keys or unparsable values.
void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value);

// Fill model-dependent defaults (direction, law, alpha, period) and check
// cross-field consistency; throws ConfigError.
void finalize_config(ExperimentConfig& config);

// Parse + finalize a whole config file body.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Effective period for decomposition: explicit value, else the model default
// (rotating/periodic swap every 4 steps, loop blocks every 6, otherwise 0 =
// detect).
long effective_period(const ExperimentConfig& config);

// Canonical echo of every field, one "config.key=value" line per field, in a
// fixed order; used for manifests and determinism checks.
std::vector<std::pair<std::string, std::string>> echo_config(const ExperimentConfig& config);

}  // namespace roughwalk
