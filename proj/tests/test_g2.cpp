#include "roughwalk/g2.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace roughwalk;

namespace {

using IntG2 = G2Element<long long>;
using IntVec = VectorX<long long>;
using IntMat = MatrixX<long long>;

IntG2 random_int_element(PhiloxEngine& eng, Index d) {
  IntVec a(d);
  IntMat b(d, d);
  for (Index i = 0; i < d; ++i) a[i] = static_cast<long long>(eng.next_double() * 21) - 10;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      b(i, j) = static_cast<long long>(eng.next_double() * 21) - 10;
    }
  }
  return IntG2(std::move(a), std::move(b));
}

bool int_equal(const IntG2& g, const IntG2& h) { return g.a == h.a && g.b == h.b; }

bool close(const G2Element<double>& g, const G2Element<double>& h, double rel = 1e-12) {
  const double scale =
      std::max(1.0, std::max(g.a.norm() + g.b.norm(), h.a.norm() + h.b.norm()));
  return (g.a - h.a).norm() <= rel * scale && (g.b - h.b).norm() <= rel * scale;
}

G2Element<double> random_double_element(PhiloxEngine& eng, Index d) {
  Eigen::VectorXd a(d);
  Eigen::MatrixXd b(d, d);
  for (Index i = 0; i < d; ++i) a[i] = eng.next_gaussian();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) b(i, j) = eng.next_gaussian();
  }
  return G2Element<double>(std::move(a), std::move(b));
}

}  // namespace

TEST_CASE("group axioms hold exactly on integer coordinates") {
  PhiloxEngine eng(1, stream::kOracle);
  for (int rep = 0; rep < 2000; ++rep) {
    const Index d = 2 + rep % 3;
    const IntG2 g = random_int_element(eng, d);
    const IntG2 h = random_int_element(eng, d);
    const IntG2 k = random_int_element(eng, d);
    CHECK(int_equal(mul(mul(g, h), k), mul(g, mul(h, k))));
    const IntG2 id = IntG2::identity(d);
    CHECK(int_equal(mul(g, id), g));
    CHECK(int_equal(mul(id, g), g));
    CHECK(int_equal(mul(g, inverse(g)), id));
    CHECK(int_equal(mul(inverse(g), g), id));
  }
}

TEST_CASE("group axioms hold to 1e-12 on float coordinates") {
  PhiloxEngine eng(2, stream::kOracle);
  for (int rep = 0; rep < 2000; ++rep) {
    const Index d = 2 + rep % 3;
    const auto g = random_double_element(eng, d);
    const auto h = random_double_element(eng, d);
    const auto k = random_double_element(eng, d);
    CHECK(close(mul(mul(g, h), k), mul(g, mul(h, k))));
    CHECK(close(mul(g, inverse(g)), G2Element<double>::identity(d)));
  }
}

TEST_CASE("central elements (0, b) commute with everything") {
  PhiloxEngine eng(3, stream::kOracle);
  for (int rep = 0; rep < 200; ++rep) {
    const IntG2 g = random_int_element(eng, 3);
    IntG2 central = random_int_element(eng, 3);
    central.a.setZero();
    CHECK(int_equal(mul(g, central), mul(central, g)));
  }
}

TEST_CASE("dilation is a group automorphism and the norm is 1-homogeneous") {
  PhiloxEngine eng(4, stream::kOracle);
  for (int rep = 0; rep < 2000; ++rep) {
    const auto g = random_double_element(eng, 2);
    const auto h = random_double_element(eng, 2);
    const double eps = 0.1 + 3.0 * eng.next_double();
    CHECK(close(dilate(eps, mul(g, h)), mul(dilate(eps, g), dilate(eps, h))));
    CHECK(homogeneous_norm(dilate(eps, g)) ==
          doctest::Approx(eps * homogeneous_norm(g)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dilate(0.0, G2Element<double>::identity(2)), std::domain_error);
  CHECK_THROWS_AS(dilate(-1.0, G2Element<double>::identity(2)), std::domain_error);
}

TEST_CASE("homogeneous norm basics and quasi-subadditivity") {
  const Index d = 2;
  CHECK(homogeneous_norm(G2Element<double>::identity(d)) == 0.0);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
  e1[0] = 1.0;
  CHECK(homogeneous_norm(G2Element<double>(e1, Eigen::MatrixXd::Zero(d, d))) == 1.0);

  PhiloxEngine eng(5, stream::kOracle);
  for (int rep = 0; rep < 100000; ++rep) {
    const auto g = random_double_element(eng, 2);
    const auto h = random_double_element(eng, 2);
    CHECK(homogeneous_norm(mul(g, h)) <=
          1.5 * (homogeneous_norm(g) + homogeneous_norm(h)) + 1e-12);
  }
}

TEST_CASE("cc_distance: identity, inverse-of-identity form, and lift windows") {
  PhiloxEngine eng(6, stream::kOracle);
  const auto g = random_double_element(eng, 3);
  // The norm takes a square root of the second level, so the ~1e-16
  // cancellation residue in b shows up as ~1e-8 here.
  CHECK(cc_distance(g, g) < 1e-7);

  const auto h = random_double_element(eng, 3);
  CHECK(cc_distance(G2Element<double>::identity(3), h) ==
        doctest::Approx(h.a.norm() + std::sqrt(h.b.norm())).epsilon(1e-12));

  // d(lift_to_m, lift_to_n) equals the norm of the window lift over [m, n].
  for (int rep = 0; rep < 100; ++rep) {
    const auto path = testutil::random_lattice_path(eng, 2, 40);
    const Index m = 1 + static_cast<Index>(eng.next_double() * 19);
    const Index n = m + 1 + static_cast<Index>(eng.next_double() * 19);
    const auto to_m = lift_window(path, 0, m);
    const auto to_n = lift_window(path, 0, n);
    CHECK(cc_distance(to_m.g, to_n.g) ==
          doctest::Approx(homogeneous_norm(lift_window(path, m, n).g)).epsilon(1e-10));
  }
}

TEST_CASE("geometric elements: closure, area presentation, wedge") {
  PhiloxEngine eng(7, stream::kOracle);
  for (int rep = 0; rep < 2000; ++rep) {
    const Index d = 2 + rep % 2;
    const auto g = testutil::random_geometric_element(eng, d);
    const auto h = testutil::random_geometric_element(eng, d);
    CHECK(is_geometric(g));
    CHECK(is_geometric(mul(g, h)));

    // to_area / from_area is a bijection on geometric elements.
    const auto round_tripped = from_area(to_area(g));
    CHECK(close(round_tripped, g, 1e-12));
    CHECK(is_antisymmetric(to_area(g).area));

    // wedge is mul seen through the area presentation.
    const auto lhs = from_area(wedge(to_area(g), to_area(h)));
    CHECK(close(lhs, mul(g, h), 1e-12));
  }

  // Non-geometric element detected.
  Eigen::VectorXd a = Eigen::VectorXd::Ones(2);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(2, 2) * 7.0;
  CHECK_FALSE(is_geometric(G2Element<double>(a, b)));
}

TEST_CASE("split separates symmetric and antisymmetric parts") {
  PhiloxEngine eng(8, stream::kOracle);
  const auto g = random_double_element(eng, 3);
  const auto parts = split(g);
  CHECK((parts.sym + parts.antisym - g.b).norm() <= 1e-12);
  CHECK((parts.sym - parts.sym.transpose()).norm() == 0.0);
  CHECK(is_antisymmetric(parts.antisym));
}

TEST_CASE("dimension mismatches are rejected") {
  const auto g2 = G2Element<double>::identity(2);
  const auto g3 = G2Element<double>::identity(3);
  CHECK_THROWS_AS(mul(g2, g3), std::invalid_argument);
  CHECK_THROWS_AS(cc_distance(g2, g3), std::invalid_argument);
  CHECK_THROWS_AS(G2Element<double>(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
}
