#pragma once

// Level-2 lifting of discrete paths. The lift over a window (m, n] is the
// ordered product of the step elements (dx_k, dx_k (x) dx_k / 2); its second
// level equals the double sum
//
//   S[i][j] = sum_{m < k < l <= n} dx_k[i] dx_l[j] + (1/2) sum_{m < k <= n} dx_k[i] dx_k[j],
//
// and windows glue by the group law (Chen's relation). The antisymmetric
// part of S is the signed area of the linearly interpolated path relative
// to its chord.

#include "roughwalk/g2.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace roughwalk {

template <typename Scalar>
struct DiscretePath {
  MatrixX<Scalar> increments;  // d x n, column k holds step k+1
  double jump_bound = 0.0;     // uniform bound on |dx_k|

  Index dim() const { return increments.rows(); }
  Index steps() const { return increments.cols(); }
};

template <typename Scalar>
DiscretePath<Scalar> make_path(MatrixX<Scalar> increments) {
  double bound = 0.0;
  for (Index k = 0; k < increments.cols(); ++k) {
    bound = std::max(bound, increments.col(k).template cast<double>().norm());
  }
  return DiscretePath<Scalar>{std::move(increments), bound};
}

// Positions including the start at the origin: d x (n + 1).
template <typename Scalar>
MatrixX<Scalar> positions(const DiscretePath<Scalar>& path) {
  MatrixX<Scalar> pos(path.dim(), path.steps() + 1);
  pos.col(0).setZero();
  for (Index k = 0; k < path.steps(); ++k) pos.col(k + 1) = pos.col(k) + path.increments.col(k);
  return pos;
}

template <typename Scalar>
DiscretePath<Scalar> center(const DiscretePath<Scalar>& path, const VectorX<Scalar>& v) {
  detail::require(v.size() == path.dim(), "center: dimension mismatch");
  DiscretePath<Scalar> out;
  out.increments = path.increments.colwise() - v;
  out.jump_bound = path.jump_bound + v.template cast<double>().norm();
  return out;
}

template <typename Scalar>
G2Element<Scalar> step_lift(const VectorX<Scalar>& dx) {
  MatrixX<Scalar> sq = dx * dx.transpose();
  return G2Element<Scalar>(dx, detail::half_matrix(sq));
}

template <typename Scalar>
struct WindowSignature {
  Index m = 0;
  Index n = 0;
  G2Element<Scalar> g;
};

template <typename Scalar>
WindowSignature<Scalar> lift_window(const DiscretePath<Scalar>& path, Index m, Index n) {
  detail::require(0 <= m && m < n && n <= path.steps(), "lift_window: window out of range");
  const Index d = path.dim();
  VectorX<Scalar> pos = VectorX<Scalar>::Zero(d);
  MatrixX<Scalar> s = MatrixX<Scalar>::Zero(d, d);
  for (Index k = m; k < n; ++k) {
    const auto dx = path.increments.col(k);
    s.noalias() += pos * dx.transpose();
    if constexpr (std::is_integral_v<Scalar>) {
      const MatrixX<Scalar> sq = dx * dx.transpose();
      s += detail::half_matrix(sq);
    } else {
      s.noalias() += (dx * dx.transpose()) * Scalar(0.5);
    }
    pos += dx;
  }
  return WindowSignature<Scalar>{m, n, G2Element<Scalar>(std::move(pos), std::move(s))};
}

// One streaming update; folding lift_stream over a window reproduces
// lift_window exactly.
template <typename Scalar>
WindowSignature<Scalar> lift_stream(const WindowSignature<Scalar>& state, const VectorX<Scalar>& dx) {
  detail::require(dx.size() == state.g.dim(), "lift_stream: dimension mismatch");
  return WindowSignature<Scalar>{state.m, state.n + 1, mul(state.g, step_lift(dx))};
}

template <typename Scalar>
MatrixX<Scalar> area_window(const DiscretePath<Scalar>& path, Index m, Index n) {
  return antisym_part(lift_window(path, m, n).g.b);
}

// Prefix lifts of one path with dyadic-friendly window access; windows are
// rescaled on demand by the dilation d_{1/sqrt(N)}, so at grid time m/N the
// first level is X_m / sqrt(N) and the second level is S_{0,m} / N.
template <typename Scalar>
class RescaledLift {
 public:
  RescaledLift(const DiscretePath<Scalar>& path, Index scale) : scale_(scale) {
    detail::require(scale >= 1, "rescale: scale must be >= 1");
    detail::require(path.steps() >= 1, "rescale: empty path");
    const Index d = path.dim();
    const Index n = path.steps();
    prefix_.reserve(static_cast<std::size_t>(n) + 1);
    prefix_.push_back(G2Element<Scalar>::identity(d));
    VectorX<Scalar> pos = VectorX<Scalar>::Zero(d);
    MatrixX<Scalar> s = MatrixX<Scalar>::Zero(d, d);
    for (Index k = 0; k < n; ++k) {
      const auto dx = path.increments.col(k);
      s.noalias() += pos * dx.transpose();
      if constexpr (std::is_integral_v<Scalar>) {
        const MatrixX<Scalar> sq = dx * dx.transpose();
        s += detail::half_matrix(sq);
      } else {
        s.noalias() += (dx * dx.transpose()) * Scalar(0.5);
      }
      pos += dx;
      prefix_.emplace_back(pos, s);
    }
  }

  Index scale() const { return scale_; }
  Index steps() const { return static_cast<Index>(prefix_.size()) - 1; }
  double duration() const { return static_cast<double>(steps()) / static_cast<double>(scale_); }

  // Unrescaled lift over (i, j]; valid for every scalar type.
  G2Element<Scalar> unrescaled_window(Index i, Index j) const {
    detail::require(0 <= i && i <= j && j <= steps(), "window: indices out of range");
    return mul(inverse(prefix_[static_cast<std::size_t>(i)]), prefix_[static_cast<std::size_t>(j)]);
  }

  G2Element<Scalar> window(Index i, Index j) const {
    static_assert(std::is_floating_point_v<Scalar>, "rescaled windows need a floating scalar");
    return dilate(Scalar(1) / std::sqrt(static_cast<Scalar>(scale_)), unrescaled_window(i, j));
  }

  // Window by grid times; off-grid requests are rejected.
  G2Element<Scalar> at(double s, double t) const {
    return window(grid_index(s), grid_index(t));
  }

 private:
  Index grid_index(double t) const {
    const double x = t * static_cast<double>(scale_);
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 || r < 0.0 || r > static_cast<double>(steps())) {
      throw std::domain_error("RescaledLift: time off the grid");
    }
    return static_cast<Index>(r);
  }

  Index scale_;
  std::vector<G2Element<Scalar>> prefix_;
};

template <typename Scalar>
RescaledLift<Scalar> rescale(const DiscretePath<Scalar>& path, Index scale) {
  return RescaledLift<Scalar>(path, scale);
}

// Adjacent index pairs at every dyadic spacing; about 2n pairs.
inline std::vector<std::pair<Index, Index>> dyadic_pairs(Index n) {
  std::vector<std::pair<Index, Index>> out;
  for (Index span = 1; span <= n; span *= 2) {
    for (Index i = 0; i + span <= n; i += span) out.emplace_back(i, i + span);
  }
  return out;
}

inline std::vector<std::pair<Index, Index>> all_pairs(Index n) {
  std::vector<std::pair<Index, Index>> out;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  }
  return out;
}

// Grid Hoelder norm: max |X_{s,t}| / |t-s|^alpha + max |S_{s,t}|_F / |t-s|^{2 alpha}
// over the supplied pairs. A lower bound for the norm on any finer grid.
inline double holder_norm(const RescaledLift<double>& lift, double alpha,
                          const std::vector<std::pair<Index, Index>>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("holder_norm: empty grid");
  if (!(alpha > 1.0 / 3.0 && alpha <= 0.5)) {
    throw std::domain_error("holder_norm: alpha outside (1/3, 1/2]");
  }
  double first = 0.0;
  double second = 0.0;
  const double scale = static_cast<double>(lift.scale());
  for (const auto& [i, j] : pairs) {
    detail::require(i < j, "holder_norm: degenerate pair");
    const double dt = static_cast<double>(j - i) / scale;
    const G2Element<double> w = lift.window(i, j);
    first = std::max(first, w.a.norm() / std::pow(dt, alpha));
    second = std::max(second, w.b.norm() / std::pow(dt, 2.0 * alpha));
  }
  return first + second;
}

}  // namespace roughwalk
