#pragma once

// Counter-based pseudorandom generation (Philox 4x32-10) plus the samplers
// the walk generators need. Outputs are a pure function of (key, stream,
// counter), so replicas and lazily-sampled environment sites can draw from
// disjoint streams without shared state: replica r derives its key from
// base ^ r, and a site's stream is keyed by a hash of (seed, coordinates).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace roughwalk {

// splitmix64 finalizer; used to derive keys, never as the generator itself.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return mix64(base ^ mix64(tag));
}

inline std::uint64_t hash_coords(std::span<const long> coords) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    h = mix64(h ^ (static_cast<std::uint64_t>(coords[i]) + 0x9E3779B97F4A7C15ull * (i + 1)));
  }
  return h;
}

namespace stream {
inline constexpr std::uint64_t kWalk = 1;
inline constexpr std::uint64_t kSite = 2;
inline constexpr std::uint64_t kOracle = 3;
}  // namespace stream

class PhiloxEngine {
 public:
  explicit PhiloxEngine(std::uint64_t key, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (idx_ == 4) refill();
    return buf_[idx_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double next_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller, caching the second draw.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_open();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  void refill() {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const std::array<std::uint32_t, 4> next = {
          static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(p0)};
      ctr = next;
      key[0] += kW0;
      key[1] += kW1;
    }
    buf_ = ctr;
    idx_ = 0;
    ++block_;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int idx_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Marsaglia-Tsang gamma sampler (unit scale); shapes below 1 are boosted
// through G(shape) = G(shape + 1) * U^{1/shape}.
inline double sample_gamma(PhiloxEngine& eng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = [&] {
      const double d = shape + 1.0 - 1.0 / 3.0;
      const double c = 1.0 / std::sqrt(9.0 * d);
      for (;;) {
        double x, v;
        do {
          x = eng.next_gaussian();
          v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = eng.next_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
      }
    }();
    return g * std::pow(eng.next_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = eng.next_gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = eng.next_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Dirichlet draw by gamma normalization.
inline Eigen::VectorXd sample_dirichlet(PhiloxEngine& eng, const Eigen::VectorXd& alpha) {
  if (alpha.size() == 0) throw std::invalid_argument("sample_dirichlet: empty alpha");
  Eigen::VectorXd g(alpha.size());
  for (;;) {
    for (Eigen::Index i = 0; i < alpha.size(); ++i) g[i] = sample_gamma(eng, alpha[i]);
    const double total = g.sum();
    if (total > 0.0) return g / total;
    // All draws underflowed to zero (only reachable for tiny shapes); redraw.
  }
}

}  // namespace roughwalk
