#include "roughwalk/records.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace roughwalk {

std::string format_double(double x) {
  if (x == 0.0) return "0";  // normalize -0
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string checksum_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buf);
}

void write_path_record(std::ostream& os, const DiscretePath<double>& path) {
  os << path.dim() << ',' << path.steps() << ',' << format_double(path.jump_bound) << '\n';
  for (Index k = 0; k < path.steps(); ++k) {
    for (Index i = 0; i < path.dim(); ++i) {
      if (i > 0) os << ',';
      os << format_double(path.increments(i, k));
    }
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(line);
  while (std::getline(in, token, ',')) out.push_back(token);
  return out;
}

double parse_field(const std::string& token) {
  double out = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), out);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw std::runtime_error("path record: bad numeric field '" + token + "'");
  }
  return out;
}

}  // namespace

DiscretePath<double> read_path_record(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("path record: missing header");
  const auto header = split_commas(line);
  if (header.size() != 3) throw std::runtime_error("path record: header must carry d,n,K");
  const Index d = static_cast<Index>(parse_field(header[0]));
  const Index n = static_cast<Index>(parse_field(header[1]));
  const double jump_bound = parse_field(header[2]);
  if (d < 1 || n < 0) throw std::runtime_error("path record: bad dimensions in header");
  DiscretePath<double> path;
  path.increments.resize(d, n);
  path.jump_bound = jump_bound;
  for (Index k = 0; k < n; ++k) {
    if (!std::getline(is, line)) throw std::runtime_error("path record: truncated body");
    const auto fields = split_commas(line);
    if (static_cast<Index>(fields.size()) != d) {
      throw std::runtime_error("path record: wrong field count in body");
    }
    for (Index i = 0; i < d; ++i) path.increments(i, k) = parse_field(fields[i]);
  }
  return path;
}

void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ',';
      os << row[i];
    }
    os << '\n';
  }
}

void write_block_table(std::ostream& os, std::span<const Block<double>> blocks) {
  const Index d = blocks.empty() ? 0 : blocks.front().displacement.size();
  std::vector<std::string> header{"duration"};
  for (Index i = 0; i < d; ++i) header.push_back("dx" + std::to_string(i + 1));
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      header.push_back("area" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(blocks.size());
  for (const auto& blk : blocks) {
    std::vector<std::string> row{std::to_string(blk.duration)};
    for (Index i = 0; i < d; ++i) row.push_back(format_double(blk.displacement[i]));
    for (Index i = 0; i < d; ++i) {
      for (Index j = i + 1; j < d; ++j) row.push_back(format_double(blk.area(i, j)));
    }
    rows.push_back(std::move(row));
  }
  write_table(os, header, rows);
}

void write_estimate_record(std::ostream& os, const ExperimentConfig& config,
                           const AnomalyEstimate& estimate) {
  const Index d = estimate.v.size();
  std::vector<std::string> header{"model", "d", "p", "n", "replicas", "seed", "blocks"};
  std::vector<std::string> row{model_name(config.model),       std::to_string(config.d),
                               format_double(config.p),        std::to_string(config.n),
                               std::to_string(config.replicas), std::to_string(config.seed),
                               std::to_string(estimate.block_count)};
  for (Index i = 0; i < d; ++i) {
    header.push_back("v" + std::to_string(i + 1));
    row.push_back(format_double(estimate.v[i]));
  }
  for (Index i = 0; i < d; ++i) {
    header.push_back("v" + std::to_string(i + 1) + "_se");
    row.push_back(format_double(estimate.v_se[i]));
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      header.push_back("M" + std::to_string(i + 1) + std::to_string(j + 1));
      row.push_back(format_double(estimate.covariance(i, j)));
    }
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      header.push_back("M" + std::to_string(i + 1) + std::to_string(j + 1) + "_se");
      row.push_back(format_double(estimate.covariance_se(i, j)));
    }
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      header.push_back("gamma" + std::to_string(i + 1) + std::to_string(j + 1));
      row.push_back(format_double(estimate.gamma(i, j)));
    }
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      header.push_back("gamma" + std::to_string(i + 1) + std::to_string(j + 1) + "_se");
      row.push_back(format_double(estimate.gamma_se(i, j)));
    }
  }
  write_table(os, header, {row});
}

void Manifest::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void Manifest::add_checksum(const std::string& filename, std::string_view bytes) {
  entries_.emplace_back("checksum." + filename, checksum_hex(bytes));
}

void Manifest::write(std::ostream& os) const {
  for (const auto& [key, value] : entries_) os << key << '=' << value << '\n';
}

void emit_file(const std::string& dir, const std::string& filename, const std::string& bytes,
               Manifest& manifest) {
  const std::string path = dir + "/" + filename;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  manifest.add_checksum(filename, bytes);
}

}  // namespace roughwalk
