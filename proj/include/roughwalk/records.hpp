#pragma once

// Byte-stable record files: comma-separated tables for data, line-delimited
// key=value for manifests. Floating-point fields use the shortest
// round-trippable decimal form, so identical runs produce identical bytes.

#include "roughwalk/config.hpp"
#include "roughwalk/estimators.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace roughwalk {

inline constexpr const char* kArtifactVersion = "0.1.0";

std::string format_double(double x);
std::string format_vector(const Eigen::VectorXd& v);  // comma-joined

std::uint64_t fnv1a64(std::string_view bytes);
std::string checksum_hex(std::string_view bytes);

// Path record: first line carries the values d,n,K (dimension, step count,
// jump bound); then one increment per line as d comma-separated numbers.
void write_path_record(std::ostream& os, const DiscretePath<double>& path);
DiscretePath<double> read_path_record(std::istream& is);

// Block table: header then one line per block with duration, the block
// displacement, and the independent (strict upper triangle, row-major) area
// entries.
void write_block_table(std::ostream& os, std::span<const Block<double>> blocks);

// Flat estimate record: run identification, block count, then v, M
// (row-major), Gamma (strict upper triangle), each followed by its standard
// errors.
void write_estimate_record(std::ostream& os, const ExperimentConfig& config,
                           const AnomalyEstimate& estimate);

// Generic two-or-more-column table.
void write_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

// Ordered key=value manifest. Timing keys go last so that everything before
// them is reproducible byte-for-byte.
class Manifest {
 public:
  void add(const std::string& key, const std::string& value);
  void add_checksum(const std::string& filename, std::string_view bytes);
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  void write(std::ostream& os) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// Write `bytes` to `dir/filename`, record its checksum in the manifest.
// Throws std::runtime_error if the file cannot be written.
void emit_file(const std::string& dir, const std::string& filename, const std::string& bytes,
               Manifest& manifest);

}  // namespace roughwalk
