#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "roughwalk/estimators.hpp"
#include "roughwalk/walks.hpp"

using roughwalk::Index;

namespace {

Eigen::VectorXd e1_2d() {
  Eigen::VectorXd e(2);
  e << 1, 0;
  return e;
}

std::vector<roughwalk::Block<double>> straight_blocks(Index blocks, Index duration) {
  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(2, blocks * duration);
  inc.row(0).setOnes();
  const auto path = roughwalk::make_path(inc);
  const auto dec = roughwalk::periodic_decomposition(duration, blocks * duration, e1_2d());
  return roughwalk::decompose(path, dec);
}

}  // namespace

TEST_CASE("delta-method ratio estimate") {
  const std::vector<double> ys = {2.0, 4.0};
  const std::vector<double> xs = {1.0, 1.0};
  const auto r = roughwalk::detail::ratio_estimate(ys, xs);
  CHECK(r.value == 3.0);
  CHECK(r.se == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> prop = {1.0, 2.0, 3.0};
  const auto exact = roughwalk::detail::ratio_estimate(prop, prop);
  CHECK(exact.value == 1.0);
  CHECK(exact.se == 0.0);

  const std::vector<double> one = {1.0};
  CHECK_THROWS_AS(roughwalk::detail::ratio_estimate(one, one), std::invalid_argument);
  CHECK_THROWS_AS(roughwalk::detail::ratio_estimate(ys, prop), std::invalid_argument);
  const std::vector<double> zero = {1.0, -1.0};
  CHECK_THROWS_AS(roughwalk::detail::ratio_estimate(ys, zero), std::invalid_argument);
}

TEST_CASE("deterministic blocks give exact speed and zero covariance") {
  const auto blocks = straight_blocks(4, 2);
  const auto speed = roughwalk::estimate_speed(blocks);
  CHECK(speed.blocks_used == 3);
  CHECK(speed.value == e1_2d());
  CHECK(speed.se.norm() == 0.0);

  const auto cov = roughwalk::estimate_covariance(blocks, speed.value);
  CHECK(cov.value.norm() == 0.0);
  CHECK(cov.se.norm() == 0.0);

  const std::vector<roughwalk::Block<double>> two(blocks.begin(), blocks.begin() + 2);
  CHECK_THROWS_AS(roughwalk::estimate_speed(two), std::invalid_argument);
  Eigen::VectorXd bad(3);
  CHECK_THROWS_AS(roughwalk::estimate_covariance(blocks, bad), std::invalid_argument);
  CHECK_THROWS_AS(roughwalk::estimate_anomaly(blocks, bad), std::invalid_argument);
}

TEST_CASE("duration-one blocks have exactly zero anomaly") {
  const auto path = roughwalk::gen_iid_walk(roughwalk::uniform_nearest_neighbor_law(2), 400, 19);
  const auto dec = roughwalk::periodic_decomposition(1, 400, e1_2d());
  const auto blocks = roughwalk::decompose(path, dec);
  const auto est = roughwalk::estimate_all(blocks, roughwalk::BlockPolicy::as_is);
  CHECK(est.gamma.norm() == 0.0);
  CHECK(est.gamma_se.norm() == 0.0);
}

TEST_CASE("centered area routes agree exactly in integer arithmetic") {
  roughwalk::PhiloxEngine eng(53, roughwalk::stream::kOracle);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 8 + static_cast<Index>(eng.next_double() * 24);
    const auto path = testutil::random_int_path(eng, 2, n, 4);
    const auto dec = roughwalk::decomposition_at_times({0, n / 3, n}, n, e1_2d());
    const auto blocks = roughwalk::decompose(path, dec);
    roughwalk::VectorX<long long> v(2);
    v << 2 * (static_cast<long long>(eng.next_double() * 5) - 2),
        2 * (static_cast<long long>(eng.next_double() * 5) - 2);
    for (const auto& blk : blocks) {
      const auto direct = roughwalk::centered_block_area(blk, v);
      const auto summary = roughwalk::centered_block_area_from_summary(blk, v);
      CHECK(direct == summary);
      CHECK(direct == (-direct.transpose()).eval());
    }
  }
}

TEST_CASE("centered area routes agree for doubles") {
  roughwalk::PhiloxEngine eng(54, roughwalk::stream::kOracle);
  for (int rep = 0; rep < 50; ++rep) {
    const auto path = testutil::random_lattice_path(eng, 3, 30);
    Eigen::VectorXd dir(3);
    dir << 1, 0, 0;
    const auto dec = roughwalk::decomposition_at_times({0, 10, 30}, 30, dir);
    const auto blocks = roughwalk::decompose(path, dec);
    Eigen::VectorXd v(3);
    for (int i = 0; i < 3; ++i) v[i] = eng.next_gaussian();
    for (const auto& blk : blocks) {
      const auto direct = roughwalk::centered_block_area(blk, v);
      const auto summary = roughwalk::centered_block_area_from_summary(blk, v);
      CHECK((direct - summary).norm() < 1e-10);
    }

    const auto split = roughwalk::anomaly_decomposition(blocks, v, roughwalk::BlockPolicy::as_is);
    CHECK((split.direct - split.summary).norm() < 1e-10);

    // With v = 0 both routes reduce to the raw block areas.
    const auto raw = roughwalk::anomaly_decomposition(blocks, Eigen::VectorXd::Zero(3),
                                                      roughwalk::BlockPolicy::as_is);
    Eigen::MatrixXd mean_area = Eigen::MatrixXd::Zero(3, 3);
    double total = 0.0;
    for (const auto& blk : blocks) {
      mean_area += blk.area;
      total += static_cast<double>(blk.duration);
    }
    CHECK((raw.direct - mean_area / total).norm() < 1e-12);
  }
}

TEST_CASE("rotating-drift blocks recover the closed forms") {
  const double p = 0.7;
  const Index blocks_n = 20000;
  const auto path = roughwalk::gen_rotating_drift(p, 4 * blocks_n, 61);
  const auto dec = roughwalk::periodic_decomposition(4, 4 * blocks_n, e1_2d());
  const auto est = roughwalk::estimate_all(roughwalk::decompose(path, dec));

  for (Index i = 0; i < 2; ++i) CHECK(std::abs(est.v[i]) < 5.0 * est.v_se[i] + 1e-12);
  const double m = 2.0 * p * (1.0 - p);
  for (Index i = 0; i < 2; ++i) {
    CHECK(std::abs(est.covariance(i, i) - m) < 5.0 * est.covariance_se(i, i));
  }
  CHECK(std::abs(est.covariance(0, 1)) < 5.0 * est.covariance_se(0, 1) + 1e-12);
  const double gamma = (2.0 * p - 1.0) * (2.0 * p - 1.0) / 4.0;
  CHECK(std::abs(est.gamma(0, 1) - gamma) < 5.0 * est.gamma_se(0, 1));
  CHECK(est.gamma(1, 0) == -est.gamma(0, 1));
  CHECK(est.gamma(0, 0) == 0.0);
}

TEST_CASE("moment order reductions") {
  CHECK(roughwalk::pstar(1.0) == 0);
  CHECK(roughwalk::pstar(1.5) == 0);
  CHECK(roughwalk::pstar(2.0) == 2);
  CHECK(roughwalk::pstar(2.9) == 2);
  CHECK(roughwalk::pstar(3.0) == 2);
  CHECK(roughwalk::pstar(4.0) == 4);
  CHECK(roughwalk::pstar(5.0) == 4);
  CHECK(roughwalk::pstar(7.0) == 6);
  CHECK_THROWS_AS(roughwalk::pstar(0.9), std::invalid_argument);

  CHECK(roughwalk::holder_exponent_bound(1) == 0.0);
  CHECK(roughwalk::holder_exponent_bound(2) == doctest::Approx(0.25));
  CHECK(roughwalk::holder_exponent_bound(4) == doctest::Approx(3.0 / 8.0));
  CHECK(roughwalk::holder_exponent_bound(6) == doctest::Approx(5.0 / 12.0));
  CHECK_THROWS_AS(roughwalk::holder_exponent_bound(0), std::invalid_argument);
}

TEST_CASE("kolmogorov grid caps the window span") {
  const auto small = roughwalk::kolmogorov_grid(4);
  CHECK(small.size() == 4);
  for (const auto& [i, j] : small) CHECK(j - i == 1);

  const auto grid = roughwalk::kolmogorov_grid(64);
  CHECK(grid.size() == 64 + 32 + 16 + 8);
  Index max_span = 0;
  for (const auto& [i, j] : grid) max_span = std::max(max_span, j - i);
  CHECK(max_span == 8);
  CHECK_THROWS_AS(roughwalk::kolmogorov_grid(0), std::invalid_argument);
}

TEST_CASE("kolmogorov ratio pools windows of equal span") {
  // Straight path: every window of span s has rescaled norm
  // s / sqrt(N) + sqrt(s^2 / (2 N)), so the ratio is computable by hand.
  Eigen::MatrixXd inc = Eigen::MatrixXd::Zero(2, 4);
  inc.row(0).setOnes();
  const std::vector<roughwalk::DiscretePath<double>> paths = {roughwalk::make_path(inc)};

  const auto expected_ratio = [](double span, double scale, int ps) {
    const double norm = span / std::sqrt(scale) + std::sqrt(span * span / (2.0 * scale));
    const double dt = span / scale;
    return std::pow(norm, 2.0 * ps) / std::pow(dt, static_cast<double>(ps));
  };

  const auto row = roughwalk::kolmogorov_ratio(paths, 4, 2, roughwalk::kolmogorov_grid(4));
  CHECK(row.scale == 4);
  CHECK(row.max_ratio == doctest::Approx(expected_ratio(1, 4, 2)).epsilon(1e-12));
  CHECK(row.argmax == std::pair<Index, Index>{0, 1});

  const std::vector<std::pair<Index, Index>> two_spans = {{0, 1}, {1, 2}, {2, 3}, {3, 4},
                                                          {0, 2}, {2, 4}};
  const auto wide = roughwalk::kolmogorov_ratio(paths, 4, 2, two_spans);
  CHECK(wide.max_ratio == doctest::Approx(expected_ratio(2, 4, 2)).epsilon(1e-12));
  CHECK(wide.argmax == std::pair<Index, Index>{0, 2});

  // Only the first `scale` steps enter; a wild tail must not change anything.
  Eigen::MatrixXd longer = Eigen::MatrixXd::Zero(2, 8);
  longer.row(0).setOnes();
  longer.col(6) *= 100.0;
  const std::vector<roughwalk::DiscretePath<double>> tails = {roughwalk::make_path(longer)};
  const auto head = roughwalk::kolmogorov_ratio(tails, 4, 2, roughwalk::kolmogorov_grid(4));
  CHECK(head.max_ratio == doctest::Approx(row.max_ratio).epsilon(1e-12));

  const std::vector<roughwalk::DiscretePath<double>> flat = {
      roughwalk::make_path(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 4)))};
  CHECK(roughwalk::kolmogorov_ratio(flat, 4, 2, roughwalk::kolmogorov_grid(4)).max_ratio == 0.0);

  CHECK_THROWS_AS(roughwalk::kolmogorov_ratio(paths, 8, 2, roughwalk::kolmogorov_grid(8)),
                  std::invalid_argument);
  CHECK_THROWS_AS(roughwalk::kolmogorov_ratio({}, 4, 2, roughwalk::kolmogorov_grid(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(roughwalk::kolmogorov_ratio(paths, 4, 0, roughwalk::kolmogorov_grid(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(roughwalk::kolmogorov_ratio(paths, 4, 2, {}), std::invalid_argument);
}
