#include "roughwalk/config.hpp"

#include "roughwalk/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace roughwalk {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> tokens;
  std::string token;
  std::istringstream in(value);
  while (std::getline(in, token, ',')) tokens.push_back(trim(token));
  return tokens;
}

template <typename T>
T parse_number(const std::string& key, const std::string& token) {
  T out{};
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end || token.empty()) {
    throw ConfigError(key + ": cannot parse value '" + token + "'");
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& token : split_list(value)) out.push_back(parse_number<double>(key, token));
  return out;
}

std::vector<long> parse_long_list(const std::string& key, const std::string& value) {
  std::vector<long> out;
  for (const auto& token : split_list(value)) out.push_back(parse_number<long>(key, token));
  return out;
}

}  // namespace

ModelId parse_model(const std::string& name) {
  if (name == "iid") return ModelId::iid;
  if (name == "rotating") return ModelId::rotating;
  if (name == "periodic") return ModelId::periodic;
  if (name == "rwre-elliptic") return ModelId::rwre_elliptic;
  if (name == "rwre-dirichlet") return ModelId::rwre_dirichlet;
  if (name == "srw-loops") return ModelId::srw_loops;
  throw ConfigError("model: unknown model '" + name + "'");
}

const char* model_name(ModelId model) {
  switch (model) {
    case ModelId::iid:
      return "iid";
    case ModelId::rotating:
      return "rotating";
    case ModelId::periodic:
      return "periodic";
    case ModelId::rwre_elliptic:
      return "rwre-elliptic";
    case ModelId::rwre_dirichlet:
      return "rwre-dirichlet";
    case ModelId::srw_loops:
      return "srw-loops";
  }
  return "?";
}

void apply_key(ExperimentConfig& config, const std::string& key, const std::string& value) {
  if (key == "model") {
    config.model = parse_model(value);
  } else if (key == "d") {
    config.d = parse_number<long>(key, value);
  } else if (key == "p") {
    config.p = parse_number<double>(key, value);
  } else if (key == "law") {
    config.law = parse_double_list(key, value);
  } else if (key == "alpha") {
    config.alpha = parse_double_list(key, value);
  } else if (key == "n") {
    config.n = parse_number<long>(key, value);
  } else if (key == "replicas") {
    config.replicas = parse_number<long>(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "direction") {
    const auto entries = parse_double_list(key, value);
    config.direction =
        Eigen::Map<const Eigen::VectorXd>(entries.data(), static_cast<Eigen::Index>(entries.size()));
  } else if (key == "margin") {
    config.margin = parse_number<long>(key, value);
  } else if (key == "period") {
    config.period = parse_number<long>(key, value);
  } else if (key == "kappa_ell") {
    config.kappa_ell = parse_number<double>(key, value);
  } else if (key == "p_moment") {
    config.p_moment = parse_number<double>(key, value);
  } else if (key == "scales") {
    config.scales = parse_long_list(key, value);
  } else if (key == "holder_alpha") {
    config.holder_alpha = parse_double_list(key, value);
  } else if (key == "workers") {
    config.workers = parse_number<long>(key, value);
  } else if (key == "out") {
    config.out = value;
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

void finalize_config(ExperimentConfig& config) {
  if (config.d < 1) throw ConfigError("d: must be >= 1");
  const bool planar = config.model == ModelId::rotating || config.model == ModelId::periodic ||
                      config.model == ModelId::srw_loops;
  if (planar && config.d != 2) {
    throw ConfigError(std::string("d: model '") + model_name(config.model) + "' requires d=2");
  }
  if (config.p < 0.0 || config.p > 1.0) throw ConfigError("p: must lie in [0, 1]");
  if (config.n < 1) throw ConfigError("n: must be >= 1");
  if (config.replicas < 1) throw ConfigError("replicas: must be >= 1");
  if (config.margin < 0) throw ConfigError("margin: must be >= 0");
  if (config.period < -1) throw ConfigError("period: must be >= 0");
  if (config.workers < 0) throw ConfigError("workers: must be >= 0");
  if (config.p_moment < 2.0) throw ConfigError("p_moment: must be >= 2");
  if (config.out.empty()) throw ConfigError("out: must not be empty");

  if (!config.law.empty()) {
    if (static_cast<long>(config.law.size()) != 2 * config.d) {
      throw ConfigError("law: needs exactly 2*d entries");
    }
    double total = 0.0;
    for (double w : config.law) {
      if (w < 0.0) throw ConfigError("law: probabilities must be nonnegative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("law: probabilities must sum to 1");
  }

  const bool rwre =
      config.model == ModelId::rwre_dirichlet || config.model == ModelId::rwre_elliptic;
  if (config.alpha.empty() && rwre) {
    config.alpha.assign(static_cast<std::size_t>(2 * config.d), 1.0);
  }
  if (!config.alpha.empty()) {
    if (static_cast<long>(config.alpha.size()) != 2 * config.d) {
      throw ConfigError("alpha: needs exactly 2*d entries");
    }
    for (double a : config.alpha) {
      if (!(a > 0.0)) throw ConfigError("alpha must be positive");
    }
  }
  if (config.model == ModelId::rwre_elliptic &&
      !(config.kappa_ell > 0.0 && 2.0 * static_cast<double>(config.d) * config.kappa_ell < 1.0)) {
    throw ConfigError("kappa_ell: must lie in (0, 1/(2d))");
  }

  if (config.direction.size() == 0) {
    config.direction = Eigen::VectorXd::Zero(config.d);
    config.direction[0] = 1.0;
  }
  if (config.direction.size() != config.d) throw ConfigError("direction: needs exactly d entries");
  const double norm = config.direction.norm();
  if (!(norm > 0.0)) throw ConfigError("direction: must be a nonzero vector");
  config.direction /= norm;

  if (config.scales.empty()) throw ConfigError("scales: must not be empty");
  for (long s : config.scales) {
    if (s < 2) throw ConfigError("scales: entries must be >= 2");
  }
  if (config.holder_alpha.empty()) throw ConfigError("holder_alpha: must not be empty");
  for (double a : config.holder_alpha) {
    if (!(a > 1.0 / 3.0 && a <= 0.5)) {
      throw ConfigError("holder_alpha: entries must lie in (1/3, 1/2]");
    }
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("invalid config line: '" + line + "'");
    apply_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  finalize_config(config);
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config_text(body.str());
}

long effective_period(const ExperimentConfig& config) {
  if (config.period >= 0) return config.period;
  switch (config.model) {
    case ModelId::rotating:
    case ModelId::periodic:
      return 4;
    case ModelId::srw_loops:
      return 6;
    default:
      return 0;
  }
}

std::vector<std::pair<std::string, std::string>> echo_config(const ExperimentConfig& config) {
  std::vector<std::pair<std::string, std::string>> echo;
  auto join_doubles = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) s += ',';
      s += format_double(xs[i]);
    }
    return s;
  };
  auto join_longs = [](const std::vector<long>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) s += ',';
      s += std::to_string(xs[i]);
    }
    return s;
  };
  echo.emplace_back("model", model_name(config.model));
  echo.emplace_back("d", std::to_string(config.d));
  echo.emplace_back("p", format_double(config.p));
  echo.emplace_back("law", join_doubles(config.law));
  echo.emplace_back("alpha", join_doubles(config.alpha));
  echo.emplace_back("n", std::to_string(config.n));
  echo.emplace_back("replicas", std::to_string(config.replicas));
  echo.emplace_back("seed", std::to_string(config.seed));
  echo.emplace_back("direction", format_vector(config.direction));
  echo.emplace_back("margin", std::to_string(config.margin));
  echo.emplace_back("period", std::to_string(effective_period(config)));
  echo.emplace_back("kappa_ell", format_double(config.kappa_ell));
  echo.emplace_back("p_moment", format_double(config.p_moment));
  echo.emplace_back("scales", join_longs(config.scales));
  echo.emplace_back("holder_alpha", join_doubles(config.holder_alpha));
  echo.emplace_back("workers", std::to_string(config.workers));
  echo.emplace_back("out", config.out);
  return echo;
}

}  // namespace roughwalk
