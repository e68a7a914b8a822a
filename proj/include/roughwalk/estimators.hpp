#pragma once

// Block-based estimators of the law-of-large-numbers speed v, the Brownian
// covariance M, and the area-anomaly matrix Gamma of a regenerating walk:
//
//   v     = E[block increment] / E[block duration],
//   M     = E[Cbar Cbar^T] / E[duration],  Cbar = centered block increment,
//   Gamma = E[area of centered block] / E[duration],
//
// all over the i.i.d. blocks k >= 2. Standard errors come from the delta
// method for ratio estimators. Centering uses a plug-in speed: estimate v
// first, then recenter every block with the same v-hat.
//
// The anomaly has two algebraic routes that must agree per block: recenter
// the increments and accumulate the area directly, or correct the raw area
// with the cross term built from the block summaries (the dropped v (x) v
// term is symmetric, so antisymmetric parts match exactly).

#include "roughwalk/regeneration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace roughwalk {

namespace detail {

struct Ratio {
  double value = 0.0;
  double se = 0.0;
};

// Delta-method ratio estimate: value = mean(y)/mean(x),
// se = sqrt(Var(y - value * x) / K) / mean(x).
inline Ratio ratio_estimate(std::span<const double> ys, std::span<const double> xs) {
  require(ys.size() == xs.size() && ys.size() >= 2, "ratio_estimate: need >= 2 samples");
  const double k = static_cast<double>(ys.size());
  double ybar = 0.0, xbar = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    ybar += ys[i];
    xbar += xs[i];
  }
  ybar /= k;
  xbar /= k;
  require(xbar != 0.0, "ratio_estimate: zero mean denominator");
  const double r = ybar / xbar;
  double ss = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double resid = ys[i] - r * xs[i];
    ss += resid * resid;
  }
  const double var = ss / (k - 1.0);
  return Ratio{r, std::sqrt(var / k) / std::abs(xbar)};
}

}  // namespace detail

struct VectorEstimate {
  Eigen::VectorXd value;
  Eigen::VectorXd se;
  Index blocks_used = 0;
};

struct MatrixEstimate {
  Eigen::MatrixXd value;
  Eigen::MatrixXd se;
  Index blocks_used = 0;
};

inline VectorEstimate estimate_speed(std::span<const Block<double>> blocks,
                                     BlockPolicy policy = BlockPolicy::drop_first) {
  const auto used = usable_blocks(blocks, policy);
  detail::require(used.size() >= 2, "estimate_speed: need >= 2 usable blocks");
  const Index d = used.front().displacement.size();
  std::vector<double> xs(used.size());
  for (std::size_t i = 0; i < used.size(); ++i) xs[i] = static_cast<double>(used[i].duration);
  VectorEstimate est;
  est.value.resize(d);
  est.se.resize(d);
  est.blocks_used = static_cast<Index>(used.size());
  std::vector<double> ys(used.size());
  for (Index c = 0; c < d; ++c) {
    for (std::size_t i = 0; i < used.size(); ++i) ys[i] = used[i].displacement[c];
    const auto r = detail::ratio_estimate(ys, xs);
    est.value[c] = r.value;
    est.se[c] = r.se;
  }
  return est;
}

inline MatrixEstimate estimate_covariance(std::span<const Block<double>> blocks,
                                          const Eigen::VectorXd& v,
                                          BlockPolicy policy = BlockPolicy::drop_first) {
  const auto used = usable_blocks(blocks, policy);
  detail::require(used.size() >= 2, "estimate_covariance: need >= 2 usable blocks");
  const Index d = used.front().displacement.size();
  detail::require(v.size() == d, "estimate_covariance: dimension mismatch");
  std::vector<double> xs(used.size());
  for (std::size_t i = 0; i < used.size(); ++i) xs[i] = static_cast<double>(used[i].duration);
  std::vector<Eigen::MatrixXd> outers;
  outers.reserve(used.size());
  for (const auto& blk : used) {
    const Eigen::VectorXd c = blk.displacement - static_cast<double>(blk.duration) * v;
    outers.push_back(c * c.transpose());
  }
  MatrixEstimate est;
  est.value.resize(d, d);
  est.se.resize(d, d);
  est.blocks_used = static_cast<Index>(used.size());
  std::vector<double> ys(used.size());
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      for (std::size_t k = 0; k < used.size(); ++k) ys[k] = outers[k](i, j);
      const auto r = detail::ratio_estimate(ys, xs);
      est.value(i, j) = r.value;
      est.value(j, i) = r.value;
      est.se(i, j) = r.se;
      est.se(j, i) = r.se;
    }
  }
  return est;
}

// Signed area of one block after recentering its increments by v,
// accumulated directly over the centered steps.
template <typename Scalar>
MatrixX<Scalar> centered_block_area(const Block<Scalar>& blk, const VectorX<Scalar>& v) {
  const Index d = blk.increments.rows();
  detail::require(v.size() == d, "centered_block_area: dimension mismatch");
  MatrixX<Scalar> area = MatrixX<Scalar>::Zero(d, d);
  VectorX<Scalar> pos = VectorX<Scalar>::Zero(d);
  for (Index j = 0; j < blk.duration; ++j) {
    const VectorX<Scalar> c = blk.increments.col(j) - v;
    const MatrixX<Scalar> cross = pos * c.transpose() - c * pos.transpose();
    area += detail::half_matrix(cross);
    pos += c;
  }
  return area;
}

// Same quantity from block summaries alone: with D the displacement, W the
// weighted sum, L the duration, U = (L-1) D - W, the centered area is
//   A + [ v (x) U + W (x) v - U (x) v - v (x) W ] / 2.
template <typename Scalar>
MatrixX<Scalar> centered_block_area_from_summary(const Block<Scalar>& blk,
                                                 const VectorX<Scalar>& v) {
  const Index d = blk.increments.rows();
  detail::require(v.size() == d, "centered_block_area_from_summary: dimension mismatch");
  const VectorX<Scalar> u =
      (Scalar(blk.duration - 1) * blk.displacement - blk.weighted_sum).eval();
  const MatrixX<Scalar> cross = v * u.transpose() + blk.weighted_sum * v.transpose() -
                                u * v.transpose() - v * blk.weighted_sum.transpose();
  return blk.area + detail::half_matrix(cross);
}

inline MatrixEstimate estimate_anomaly(std::span<const Block<double>> blocks,
                                       const Eigen::VectorXd& v,
                                       BlockPolicy policy = BlockPolicy::drop_first) {
  const auto used = usable_blocks(blocks, policy);
  detail::require(used.size() >= 2, "estimate_anomaly: need >= 2 usable blocks");
  const Index d = used.front().displacement.size();
  detail::require(v.size() == d, "estimate_anomaly: dimension mismatch");
  std::vector<double> xs(used.size());
  for (std::size_t i = 0; i < used.size(); ++i) xs[i] = static_cast<double>(used[i].duration);
  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(used.size());
  for (const auto& blk : used) areas.push_back(centered_block_area(blk, v));
  MatrixEstimate est;
  est.value = Eigen::MatrixXd::Zero(d, d);
  est.se = Eigen::MatrixXd::Zero(d, d);
  est.blocks_used = static_cast<Index>(used.size());
  std::vector<double> ys(used.size());
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      for (std::size_t k = 0; k < used.size(); ++k) ys[k] = areas[k](i, j);
      const auto r = detail::ratio_estimate(ys, xs);
      est.value(i, j) = r.value;
      est.value(j, i) = -r.value;
      est.se(i, j) = r.se;
      est.se(j, i) = r.se;
    }
  }
  return est;
}

struct AnomalyEstimate {
  Eigen::VectorXd v;
  Eigen::VectorXd v_se;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd covariance_se;
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd gamma_se;
  Index block_count = 0;
};

// Two-pass plug-in pipeline: speed first, then covariance and anomaly with
// the same v-hat.
inline AnomalyEstimate estimate_all(std::span<const Block<double>> blocks,
                                    BlockPolicy policy = BlockPolicy::drop_first) {
  const VectorEstimate speed = estimate_speed(blocks, policy);
  const MatrixEstimate cov = estimate_covariance(blocks, speed.value, policy);
  const MatrixEstimate gamma = estimate_anomaly(blocks, speed.value, policy);
  AnomalyEstimate est;
  est.v = speed.value;
  est.v_se = speed.se;
  est.covariance = cov.value;
  est.covariance_se = cov.se;
  est.gamma = gamma.value;
  est.gamma_se = gamma.se;
  est.block_count = speed.blocks_used;
  return est;
}

struct AnomalySplit {
  Eigen::MatrixXd direct;
  Eigen::MatrixXd summary;
};

// Anomaly through both centering routes; they agree up to floating-point
// order of operations (exactly, in integer arithmetic).
inline AnomalySplit anomaly_decomposition(std::span<const Block<double>> blocks,
                                          const Eigen::VectorXd& v,
                                          BlockPolicy policy = BlockPolicy::drop_first) {
  const auto used = usable_blocks(blocks, policy);
  detail::require(!used.empty(), "anomaly_decomposition: no usable blocks");
  const Index d = used.front().displacement.size();
  detail::require(v.size() == d, "anomaly_decomposition: dimension mismatch");
  Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd summary = Eigen::MatrixXd::Zero(d, d);
  double total_duration = 0.0;
  for (const auto& blk : used) {
    direct += centered_block_area(blk, v);
    summary += centered_block_area_from_summary(blk, v);
    total_duration += static_cast<double>(blk.duration);
  }
  return AnomalySplit{direct / total_duration, summary / total_duration};
}

// Even moment order actually controlled by a p-th moment assumption:
// p* = min(floor(p), 2 floor(p/2)), i.e. the largest even integer <= p
// clipped at floor(p).
inline int pstar(double p) {
  detail::require(p >= 1.0, "pstar: p must be >= 1");
  const int fp = static_cast<int>(std::floor(p));
  const int ep = 2 * static_cast<int>(std::floor(p / 2.0));
  return std::min(fp, ep);
}

// Attainable Hoelder exponent reported for a given p*; degenerate (zero)
// at p* = 1.
inline double holder_exponent_bound(int pstar_value) {
  detail::require(pstar_value >= 1, "holder_exponent_bound: p* must be >= 1");
  return (static_cast<double>(pstar_value) - 1.0) / (2.0 * static_cast<double>(pstar_value));
}

struct KolmogorovRow {
  Index scale = 0;
  double max_ratio = 0.0;
  std::pair<Index, Index> argmax = {0, 0};
};

// Grid for the tightness diagnostic: dyadic windows up to span n/8. The
// moment bound binds at small |t - s|; dropping the longest windows keeps
// every span represented by enough translates for a usable mean.
inline std::vector<std::pair<Index, Index>> kolmogorov_grid(Index n) {
  detail::require(n >= 1, "kolmogorov_grid: empty path");
  const Index cap = std::max<Index>(Index{1}, n / 8);
  std::vector<std::pair<Index, Index>> out;
  for (Index span = 1; span <= cap; span *= 2) {
    for (Index i = 0; i + span <= n; i += span) out.emplace_back(i, i + span);
  }
  return out;
}

// Moment-ratio diagnostic for tightness: for a pair (s, t) = (i, j)/N, the
// ratio is E[||rescaled window||^{2 p*}] / |t - s|^{p*}. Grid pairs of equal
// span are pooled into one mean (the walks in scope have stationary step
// laws, so translated windows are identically distributed and pooling only
// reduces variance); the maximum over spans is reported with a
// representative pair. Paths may be longer than `scale`; only the first
// `scale` steps enter.
inline KolmogorovRow kolmogorov_ratio(std::span<const DiscretePath<double>> paths, Index scale,
                                      int pstar_value,
                                      const std::vector<std::pair<Index, Index>>& pairs) {
  detail::require(!paths.empty(), "kolmogorov_ratio: no replicas");
  detail::require(!pairs.empty(), "kolmogorov_ratio: empty grid");
  detail::require(pstar_value >= 1, "kolmogorov_ratio: p* must be >= 1");
  std::map<Index, std::pair<double, long>> by_span;  // span -> (sum, count)
  for (const auto& path : paths) {
    detail::require(path.steps() >= scale, "kolmogorov_ratio: path shorter than scale");
    DiscretePath<double> head{path.increments.leftCols(scale), path.jump_bound};
    const RescaledLift<double> lift(head, scale);
    for (const auto& [i, j] : pairs) {
      auto& [sum, count] = by_span[j - i];
      sum += std::pow(homogeneous_norm(lift.window(i, j)), 2.0 * pstar_value);
      ++count;
    }
  }
  KolmogorovRow row;
  row.scale = scale;
  for (const auto& [span, acc] : by_span) {
    const double dt = static_cast<double>(span) / static_cast<double>(scale);
    const double mean = acc.first / static_cast<double>(acc.second);
    const double ratio = mean / std::pow(dt, static_cast<double>(pstar_value));
    if (ratio > row.max_ratio) {
      row.max_ratio = ratio;
      row.argmax = {0, span};
    }
  }
  return row;
}

}  // namespace roughwalk
