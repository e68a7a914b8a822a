#pragma once

// Independent reference implementations used only by tests: quadratic-time
// double sums, shoelace areas, a brute-force regeneration detector, exact
// block-law enumerations, and small random data generators. Everything here
// is intentionally naive; production code must agree with it, not share
// code with it.

#include "roughwalk/lift.hpp"
#include "roughwalk/regeneration.hpp"
#include "roughwalk/rng.hpp"

#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace testutil {

using roughwalk::DiscretePath;
using roughwalk::G2Element;
using roughwalk::Index;
using roughwalk::MatrixX;
using roughwalk::PhiloxEngine;
using roughwalk::VectorX;

// O(n^2) second level: S = sum_{m<=k<l<n} dx_k dx_l^T + 1/2 sum dx_k dx_k^T.
template <typename Scalar>
G2Element<Scalar> double_sum_lift(const DiscretePath<Scalar>& path, Index m, Index n) {
  const Index d = path.dim();
  VectorX<Scalar> a = VectorX<Scalar>::Zero(d);
  MatrixX<Scalar> b = MatrixX<Scalar>::Zero(d, d);
  for (Index k = m; k < n; ++k) {
    for (Index l = k + 1; l < n; ++l) {
      b += path.increments.col(k) * path.increments.col(l).transpose();
    }
    MatrixX<Scalar> sq = path.increments.col(k) * path.increments.col(k).transpose();
    b += roughwalk::detail::half_matrix(sq);
    a += path.increments.col(k);
  }
  return G2Element<Scalar>(std::move(a), std::move(b));
}

// Signed area between the planar path over [m, n] and its chord, as the
// shoelace sum of the polygon through the visited points (translated so the
// window starts at the origin; the chord closes it through that origin).
inline double shoelace_area(const DiscretePath<double>& path, Index m, Index n) {
  double area = 0.0;
  double x = 0.0, y = 0.0;
  for (Index k = m; k < n; ++k) {
    const double nx = x + path.increments(0, k);
    const double ny = y + path.increments(1, k);
    area += 0.5 * (x * ny - nx * y);
    x = nx;
    y = ny;
  }
  return area;
}

// Brute-force double-loop regeneration detector over a projection sequence
// proj[0..n] (strict past records, weak future minima, margin cut). Mirrors
// the documented semantics, not the implementation.
inline std::vector<Index> naive_regenerations(const std::vector<double>& proj, Index margin) {
  const Index n = static_cast<Index>(proj.size()) - 1;
  std::vector<Index> times{0};
  for (Index t = 1; t <= n; ++t) {
    bool ok = t <= n - margin;
    for (Index s = 0; ok && s < t; ++s) ok = proj[s] < proj[t];
    for (Index s = t + 1; ok && s <= n; ++s) ok = proj[s] >= proj[t];
    if (ok) times.push_back(t);
  }
  return times;
}

inline DiscretePath<double> random_lattice_path(PhiloxEngine& eng, Index d, Index n) {
  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(d, n);
  for (Index k = 0; k < n; ++k) {
    const Index idx = std::min<Index>(2 * d - 1, static_cast<Index>(eng.next_double() * 2 * d));
    inc(idx / 2, k) = (idx % 2 == 0) ? 1.0 : -1.0;
  }
  return roughwalk::make_path(std::move(inc));
}

// Integer lattice path with every increment in scale * {+-e_i}; with
// scale a multiple of 2 all lift coordinates are exact in int64.
inline DiscretePath<long long> random_int_path(PhiloxEngine& eng, Index d, Index n,
                                               long long scale) {
  MatrixX<long long> inc = MatrixX<long long>::Zero(d, n);
  for (Index k = 0; k < n; ++k) {
    const Index idx = std::min<Index>(2 * d - 1, static_cast<Index>(eng.next_double() * 2 * d));
    inc(idx / 2, k) = (idx % 2 == 0) ? scale : -scale;
  }
  DiscretePath<long long> path;
  path.increments = std::move(inc);
  path.jump_bound = static_cast<double>(scale);
  return path;
}

inline G2Element<double> random_geometric_element(PhiloxEngine& eng, Index d) {
  Eigen::VectorXd a(d);
  for (Index i = 0; i < d; ++i) a[i] = eng.next_gaussian();
  Eigen::MatrixXd area = Eigen::MatrixXd::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      area(i, j) = eng.next_gaussian();
      area(j, i) = -area(i, j);
    }
  }
  Eigen::MatrixXd b = 0.5 * a * a.transpose() + area;
  return G2Element<double>(std::move(a), std::move(b));
}

// Exact 4-step block-law enumeration for the planar period-4 walks.
// Outcomes are the 2^4 sign choices; prob(+1) = p at each step. The key is
// (dx, dy, 2 * area) so everything stays integral.
struct BlockLaw {
  std::map<std::pair<long, long>, double> displacement;  // (dx, dy) -> prob
  std::map<long, double> area2;                          // 2 * area -> prob
  std::map<std::array<long, 3>, double> joint;           // (dx, dy, 2 * area) -> prob
};

template <typename StepFn>
BlockLaw enumerate_block_law(double p, StepFn step_fn) {
  BlockLaw law;
  for (int mask = 0; mask < 16; ++mask) {
    double prob = 1.0;
    long x = 0, y = 0;
    long area2 = 0;  // twice the signed area
    for (int k = 0; k < 4; ++k) {
      const int sign = (mask >> k) & 1 ? 1 : -1;
      prob *= sign == 1 ? p : 1.0 - p;
      const auto [dx, dy] = step_fn(k, sign, x, y);
      area2 += x * dy - y * dx;
      x += dx;
      y += dy;
    }
    law.displacement[{x, y}] += prob;
    law.area2[area2] += prob;
    law.joint[{x, y, area2}] += prob;
  }
  return law;
}

inline BlockLaw rotating_block_law(double p) {
  return enumerate_block_law(p, [](int k, int sign, long, long) {
    static const long dirs[4][2] = {{0, 1}, {-1, 0}, {0, -1}, {1, 0}};  // steps 1..4
    return std::pair<long, long>(sign * dirs[k][0], sign * dirs[k][1]);
  });
}

inline BlockLaw periodic_block_law(double p) {
  return enumerate_block_law(p, [](int, int sign, long x, long y) {
    const long px = ((x % 2) + 2) % 2;
    const long py = ((y % 2) + 2) % 2;
    long mx = 0, my = 0;
    if (px == 0 && py == 0) mx = 1;
    if (px == 1 && py == 0) my = 1;
    if (px == 1 && py == 1) mx = -1;
    if (px == 0 && py == 1) my = -1;
    return std::pair<long, long>(sign * mx, sign * my);
  });
}

// Rotate a joint table by the quarter turn (x, y) -> (y, -x); areas are
// invariant (the turn is orientation preserving).
inline std::map<std::array<long, 3>, double> rotate_joint(
    const std::map<std::array<long, 3>, double>& joint) {
  std::map<std::array<long, 3>, double> out;
  for (const auto& [key, prob] : joint) out[{key[1], -key[0], key[2]}] += prob;
  return out;
}

template <typename Key>
bool tables_equal(const std::map<Key, double>& lhs, const std::map<Key, double>& rhs,
                  double tol) {
  if (lhs.size() != rhs.size()) return false;
  for (const auto& [key, prob] : lhs) {
    const auto it = rhs.find(key);
    if (it == rhs.end() || std::abs(it->second - prob) > tol) return false;
  }
  return true;
}

}  // namespace testutil
