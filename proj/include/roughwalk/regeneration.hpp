#pragma once

// Regeneration structure of directionally transient walks. A time n is
// reported as a regeneration time in direction l when its projection level
// is a strict record over the past and a weak minimum of the observed
// future:
//
//   X_m . l <  X_n . l   for all m < n, and
//   X_m . l >= X_n . l   for all n < m <= horizon.
//
// Ties resolve as written: strict against the past, weak against the
// future. Times with fewer than `margin` future steps to check are never
// confirmed, and the segment after the last confirmed time is censored.
// tau_0 = 0 anchors the decomposition whether or not 0 itself qualifies;
// blocks are the windows (tau_{k-1}, tau_k]. Block 1 is distributed
// differently from the rest, so estimators drop it by default.

#include "roughwalk/lift.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace roughwalk {

struct RegenerationDecomposition {
  Eigen::VectorXd direction;
  std::vector<Index> times;  // 0 = tau_0 < tau_1 < ... <= horizon
  Index horizon = 0;
  Index margin = 0;
  bool censored_tail = false;

  Index block_count() const { return static_cast<Index>(times.size()) - 1; }
};

inline RegenerationDecomposition detect_regenerations(const DiscretePath<double>& path,
                                                      const Eigen::VectorXd& ell, Index margin) {
  detail::require(ell.size() == path.dim(), "detect_regenerations: dimension mismatch");
  detail::require(std::abs(ell.norm() - 1.0) <= 1e-12,
                  "detect_regenerations: direction must be a unit vector");
  detail::require(margin >= 0, "detect_regenerations: negative margin");
  const Index n = path.steps();
  detail::require(n >= 1, "detect_regenerations: empty path");

  std::vector<double> proj(static_cast<std::size_t>(n) + 1);
  proj[0] = 0.0;
  for (Index k = 0; k < n; ++k) {
    proj[static_cast<std::size_t>(k) + 1] =
        proj[static_cast<std::size_t>(k)] + ell.dot(path.increments.col(k));
  }

  // Weak future minima, scanned from the right.
  std::vector<char> future_ok(static_cast<std::size_t>(n) + 1, 0);
  double run_min = std::numeric_limits<double>::infinity();
  for (Index t = n; t >= 0; --t) {
    future_ok[static_cast<std::size_t>(t)] = proj[static_cast<std::size_t>(t)] <= run_min;
    run_min = std::min(run_min, proj[static_cast<std::size_t>(t)]);
  }

  RegenerationDecomposition dec;
  dec.direction = ell;
  dec.horizon = n;
  dec.margin = margin;
  dec.times.push_back(0);

  // Strict past records, scanned from the left.
  double run_max = -std::numeric_limits<double>::infinity();
  for (Index t = 0; t <= n; ++t) {
    const bool confirmed = proj[static_cast<std::size_t>(t)] > run_max &&
                           future_ok[static_cast<std::size_t>(t)] && t <= n - margin;
    if (confirmed && t > 0) dec.times.push_back(t);
    run_max = std::max(run_max, proj[static_cast<std::size_t>(t)]);
  }
  dec.censored_tail = dec.times.back() < n;
  return dec;
}

// Decomposition at externally known times (deterministic block structures).
inline RegenerationDecomposition decomposition_at_times(std::vector<Index> times, Index horizon,
                                                        Eigen::VectorXd direction) {
  detail::require(!times.empty() && times.front() == 0,
                  "decomposition_at_times: times must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    detail::require(times[i] > times[i - 1], "decomposition_at_times: times must increase");
  }
  detail::require(times.back() <= horizon, "decomposition_at_times: time beyond horizon");
  RegenerationDecomposition dec;
  dec.direction = std::move(direction);
  dec.times = std::move(times);
  dec.horizon = horizon;
  dec.censored_tail = dec.times.back() < horizon;
  return dec;
}

inline RegenerationDecomposition periodic_decomposition(Index period, Index horizon,
                                                        Eigen::VectorXd direction) {
  detail::require(period >= 1, "periodic_decomposition: period must be positive");
  std::vector<Index> times;
  for (Index t = 0; t <= horizon; t += period) times.push_back(t);
  return decomposition_at_times(std::move(times), horizon, std::move(direction));
}

// One block (tau_{k-1}, tau_k]: the raw increment slice together with the
// summaries every estimator needs. weighted_sum is sum_j (j - 1) dx_j with
// j the 1-based in-block step index; area is the antisymmetric second level
// of the uncentered block lift.
template <typename Scalar>
struct Block {
  Index duration = 0;
  VectorX<Scalar> displacement;
  VectorX<Scalar> weighted_sum;
  MatrixX<Scalar> area;
  MatrixX<Scalar> increments;  // d x duration
};

template <typename Scalar>
std::vector<Block<Scalar>> decompose(const DiscretePath<Scalar>& path,
                                     const RegenerationDecomposition& dec) {
  detail::require(dec.horizon == path.steps(), "decompose: decomposition built for another path");
  detail::require(dec.block_count() >= 1, "decompose: no blocks");
  const Index d = path.dim();
  std::vector<Block<Scalar>> blocks;
  blocks.reserve(dec.times.size() - 1);
  for (std::size_t k = 1; k < dec.times.size(); ++k) {
    const Index a = dec.times[k - 1];
    const Index b = dec.times[k];
    Block<Scalar> blk;
    blk.duration = b - a;
    blk.increments = path.increments.middleCols(a, b - a);
    blk.displacement = blk.increments.rowwise().sum();
    blk.weighted_sum = VectorX<Scalar>::Zero(d);
    blk.area = MatrixX<Scalar>::Zero(d, d);
    VectorX<Scalar> pos = VectorX<Scalar>::Zero(d);
    for (Index j = 0; j < blk.duration; ++j) {
      const auto dx = blk.increments.col(j);
      blk.weighted_sum += Scalar(j) * dx;
      const MatrixX<Scalar> cross = pos * dx.transpose() - dx * pos.transpose();
      blk.area += detail::half_matrix(cross);
      pos += dx;
    }
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

// Checks the defining block property under the tie convention above: the
// relative projection stays >= 0 inside every block k >= 1 and is strictly
// positive at each block end from the second block onward.
inline bool check_block_condition(const DiscretePath<double>& path,
                                  const RegenerationDecomposition& dec) {
  const Eigen::MatrixXd pos = positions(path);
  const Eigen::VectorXd proj = pos.transpose() * dec.direction;
  for (std::size_t k = 1; k < dec.times.size(); ++k) {
    const Index a = dec.times[k - 1];
    const Index b = dec.times[k];
    for (Index t = a + 1; t <= b; ++t) {
      if (k >= 2 && proj[t] < proj[a]) return false;
    }
    if (k >= 2 && !(proj[b] > proj[a])) return false;
  }
  return true;
}

enum class BlockPolicy { drop_first, as_is };

template <typename Scalar>
std::span<const Block<Scalar>> usable_blocks(std::span<const Block<Scalar>> blocks,
                                             BlockPolicy policy) {
  if (policy == BlockPolicy::as_is) return blocks;
  detail::require(blocks.size() >= 2, "usable_blocks: need at least 2 blocks");
  return blocks.subspan(1);
}

struct MomentDiagnostic {
  double moment = 0.0;      // mean duration^{2p} over the usable blocks
  double tail_slope = 0.0;  // log-log slope of the duration survival plot
  Index samples = 0;
};

inline MomentDiagnostic block_moments(std::span<const Block<double>> blocks, double p,
                                      BlockPolicy policy = BlockPolicy::drop_first) {
  detail::require(p >= 0.5, "block_moments: order too small");
  const auto used = usable_blocks(blocks, policy);
  detail::require(!used.empty(), "block_moments: no usable blocks");
  MomentDiagnostic diag;
  diag.samples = static_cast<Index>(used.size());
  double acc = 0.0;
  std::vector<double> durations;
  durations.reserve(used.size());
  for (const auto& blk : used) {
    acc += std::pow(static_cast<double>(blk.duration), 2.0 * p);
    durations.push_back(static_cast<double>(blk.duration));
  }
  diag.moment = acc / static_cast<double>(used.size());

  // Survival slope over the largest decade of durations.
  std::sort(durations.begin(), durations.end(), std::greater<>());
  const std::size_t m = std::max<std::size_t>(10, durations.size() / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < std::min(m, durations.size()); ++i) {
    const double x = std::log(durations[i]);
    const double y = std::log(static_cast<double>(i + 1) / static_cast<double>(durations.size()));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double denom = static_cast<double>(count) * sxx - sx * sx;
  diag.tail_slope = std::abs(denom) > 1e-12 ? (static_cast<double>(count) * sxy - sx * sy) / denom
                                            : 0.0;
  return diag;
}

}  // namespace roughwalk
