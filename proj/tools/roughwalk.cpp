// roughwalk: simulate lattice walks, decompose them into regeneration
// blocks, and estimate the rough-path scaling-limit quantities (speed,
// covariance, area anomaly) plus tightness diagnostics.
//
// Exit codes: 0 success, 2 configuration error, 3 under-sampled estimate.

#include "roughwalk/harness.hpp"
#include "roughwalk/records.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace roughwalk;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnderSampled = 3;
constexpr long kMinimumBlocks = 100;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> replicas;
  std::optional<long> steps;
  std::optional<long> workers;
  std::optional<std::string> out;
};

void add_common_options(CLI::App* cmd, Overrides& over) {
  cmd->add_option("--config", over.config_path, "key=value config file");
  cmd->add_option("--seed", over.seed, "base seed (replica r uses seed XOR r)");
  cmd->add_option("--replicas", over.replicas, "number of Monte Carlo replicas");
  cmd->add_option("--steps", over.steps, "steps per replica (config key n)");
  cmd->add_option("--out", over.out, "output directory");
  cmd->add_option("--workers", over.workers, "worker threads (0 = auto)");
}

ExperimentConfig build_config(const Overrides& over) {
  ExperimentConfig config;
  if (!over.config_path.empty()) {
    config = load_config_file(over.config_path);
  }
  if (const char* env = std::getenv("ROUGHWALK_WORKERS")) {
    try {
      config.workers = std::stol(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("ROUGHWALK_WORKERS: cannot parse value '") + env + "'");
    }
  }
  if (over.seed) config.seed = *over.seed;
  if (over.replicas) config.replicas = *over.replicas;
  if (over.steps) config.n = *over.steps;
  if (over.workers) config.workers = *over.workers;
  if (over.out) config.out = *over.out;
  finalize_config(config);
  return config;
}

void prepare_out_dir(const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw ConfigError("out: cannot create directory '" + config.out + "': " + ec.message());
}

Manifest base_manifest(const char* command, const ExperimentConfig& config) {
  Manifest manifest;
  manifest.add("artifact_version", kArtifactVersion);
  manifest.add("command", command);
  for (const auto& [key, value] : echo_config(config)) manifest.add("config." + key, value);
  return manifest;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", s);
  return std::string(buf);
}

void finish_manifest(Manifest& manifest, const ExperimentConfig& config,
                     std::chrono::steady_clock::time_point start, double phase_seconds) {
  manifest.add("time.compute_s", format_seconds(phase_seconds));
  manifest.add("time.total_s", format_seconds(seconds_since(start)));
  std::ostringstream body;
  manifest.write(body);
  const std::string path = config.out + "/manifest.txt";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("out: cannot write '" + path + "'");
  out << body.str();
}

int cmd_simulate(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  prepare_out_dir(config);
  const long workers = resolve_workers(config);
  auto records = parallel_map<std::string>(config.replicas, workers, [&](long r) {
    const DiscretePath<double> path = generate_path(config, config.n, replica_seed(config, r));
    std::ostringstream body;
    write_path_record(body, path);
    return body.str();
  });
  const double phase = seconds_since(start);
  Manifest manifest = base_manifest("simulate", config);
  for (long r = 0; r < config.replicas; ++r) {
    char name[64];
    std::snprintf(name, sizeof(name), "replica_%04ld.path.csv", r);
    emit_file(config.out, name, records[static_cast<std::size_t>(r)], manifest);
  }
  finish_manifest(manifest, config, start, phase);
  std::cout << "wrote " << config.replicas << " path record(s) to " << config.out << "\n";
  return kExitOk;
}

std::string format_matrix_row(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::string s;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j > 0) s += "  ";
    s += format_double(m(i, j));
  }
  return s;
}

int cmd_estimate(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  prepare_out_dir(config);
  const long workers = resolve_workers(config);
  const EstimateRun run = estimate_run(config, workers);
  const double phase = seconds_since(start);

  Manifest manifest = base_manifest("estimate", config);
  {
    std::ostringstream body;
    write_estimate_record(body, config, run.estimate);
    emit_file(config.out, "estimate.csv", body.str(), manifest);
  }
  {
    std::ostringstream body;
    write_block_table(body, run.pooled.blocks);
    emit_file(config.out, "blocks.csv", body.str(), manifest);
  }
  manifest.add("blocks.pooled", std::to_string(run.estimate.block_count));
  manifest.add("blocks.censored_replicas", std::to_string(run.pooled.censored_replicas));
  finish_manifest(manifest, config, start, phase);

  const Eigen::Index d = run.estimate.v.size();
  std::cout << "model=" << model_name(config.model) << " n=" << config.n
            << " replicas=" << config.replicas << " seed=" << config.seed << "\n";
  std::cout << "usable blocks: " << run.estimate.block_count
            << " (censored replicas: " << run.pooled.censored_replicas << ")\n";
  std::cout << "v_hat (per component, +/- 1 SE):\n";
  for (Eigen::Index i = 0; i < d; ++i) {
    std::cout << "  v_" << (i + 1) << " = " << format_double(run.estimate.v[i]) << " +/- "
              << format_double(run.estimate.v_se[i]) << "\n";
  }
  std::cout << "M_hat:\n";
  for (Eigen::Index i = 0; i < d; ++i) {
    std::cout << "  " << format_matrix_row(run.estimate.covariance, i) << "\n";
  }
  std::cout << "gamma_hat (strict upper triangle, +/- 1 SE):\n";
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      std::cout << "  gamma_" << (i + 1) << (j + 1) << " = "
                << format_double(run.estimate.gamma(i, j)) << " +/- "
                << format_double(run.estimate.gamma_se(i, j)) << "\n";
    }
  }
  std::cout << "wrote estimate.csv, blocks.csv, manifest.txt to " << config.out << "\n";

  if (run.estimate.block_count < kMinimumBlocks) {
    std::cerr << "warning: under-sampled run: " << run.estimate.block_count
              << " usable blocks (< " << kMinimumBlocks << "); estimates are unreliable\n";
    return kExitUnderSampled;
  }
  return kExitOk;
}

int cmd_diagnose(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  prepare_out_dir(config);
  const long workers = resolve_workers(config);
  const DiagnosticsRun diag = diagnose_run(config, workers);
  const double phase = seconds_since(start);

  Manifest manifest = base_manifest("diagnose", config);
  for (double alpha : config.holder_alpha) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : diag.holder) {
      if (row.alpha == alpha) {
        rows.push_back({std::to_string(row.scale), format_double(row.mean_norm)});
      }
    }
    std::ostringstream body;
    write_table(body, {"scale", "holder_norm"}, rows);
    emit_file(config.out, "holder_a" + format_double(alpha) + ".csv", body.str(), manifest);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : diag.kolmogorov) {
      rows.push_back({std::to_string(row.scale), std::to_string(diag.pstar_value),
                      format_double(row.max_ratio), std::to_string(row.argmax.first),
                      std::to_string(row.argmax.second)});
    }
    std::ostringstream body;
    write_table(body, {"scale", "pstar", "max_ratio", "argmax_i", "argmax_j"}, rows);
    emit_file(config.out, "kolmogorov.csv", body.str(), manifest);
  }
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [duration, survival] : diag.duration_survival) {
      rows.push_back({std::to_string(duration), format_double(survival)});
    }
    std::ostringstream body;
    write_table(body, {"duration", "survival"}, rows);
    emit_file(config.out, "duration_tail.csv", body.str(), manifest);
  }
  finish_manifest(manifest, config, start, phase);

  std::cout << "p* = " << diag.pstar_value
            << ", attainable Holder exponent bound = " << format_double(diag.holder_bound) << "\n";
  std::cout << "scale";
  for (double alpha : config.holder_alpha) std::cout << "  holder[a=" << format_double(alpha) << "]";
  std::cout << "  p*  kolmogorov_ratio\n";
  for (std::size_t s = 0; s < diag.kolmogorov.size(); ++s) {
    const auto& krow = diag.kolmogorov[s];
    std::cout << krow.scale;
    for (std::size_t a = 0; a < config.holder_alpha.size(); ++a) {
      const auto& hrow = diag.holder[a * diag.kolmogorov.size() + s];
      std::cout << "  " << format_double(hrow.mean_norm);
    }
    std::cout << "  " << diag.pstar_value << "  " << format_double(krow.max_ratio) << "\n";
  }
  if (diag.duration_moment.samples > 0) {
    std::cout << "block durations: " << diag.duration_blocks << " blocks, E[L^"
              << format_double(2.0 * config.p_moment)
              << "] = " << format_double(diag.duration_moment.moment)
              << ", tail slope = " << format_double(diag.duration_moment.tail_slope) << "\n";
  } else {
    std::cout << "block durations: too few blocks for the tail diagnostic ("
              << diag.duration_blocks << ")\n";
  }
  std::cout << "wrote per-alpha holder tables, kolmogorov.csv, duration_tail.csv, manifest.txt to "
            << config.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice walks, regeneration blocks, and rough-path limit estimates"};
  app.require_subcommand(1);

  Overrides over;
  CLI::App* simulate = app.add_subcommand("simulate", "generate and persist replica paths");
  CLI::App* estimate = app.add_subcommand("estimate", "estimate speed, covariance, and anomaly");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Holder/Kolmogorov/duration diagnostics");
  add_common_options(simulate, over);
  add_common_options(estimate, over);
  add_common_options(diagnose, over);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const ExperimentConfig config = build_config(over);
    if (simulate->parsed()) return cmd_simulate(config);
    if (estimate->parsed()) return cmd_estimate(config);
    return cmd_diagnose(config);
  } catch (const roughwalk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
